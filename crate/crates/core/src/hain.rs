//! λ_g-capped double ramification pairings via Hain's formula.
//!
//! On compact type, with ramification `(a, -a)`,
//!
//! ```text
//! DR_g(a,-a) = (1/g!) Θ^g,   Θ = Σ_i a_i²/2 ψ_i - ¼ Σ_{(h,S)} a_S² δ_h^S
//! ```
//!
//! where the boundary sum runs over both labelings of each separating
//! divisor. For two markings only the divisors separating marking 1 from
//! marking 2 survive (the others have `a_S = a + (-a) = 0`), which leaves
//!
//! ```text
//! Θ = a² D̂,   D̂ = ½ (ψ₁ + ψ₂ - Σ_{h=1}^{g-1} δ_h)
//! ```
//!
//! with `δ_h` the divisor whose genus-`h` side carries marking 1. Since λ_g
//! vanishes off compact type and splits as `∏ λ_{g_v}` on tree strata, the
//! coefficient of `a^{2g}` in `∫ DR_g(a,-a) λ_g ω` is computed entirely in
//! the chain strata algebra, with `λ_{g_v}`-capped ψ integrals at the leaves.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::chain::{ChainSum, DecoratedChain};
use crate::error::{Error, Result};
use crate::hodge::psi_lambda_g_integral;
use crate::omega::TestClass;
use crate::rational::{factorial, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DivisorTerm {
    Psi1,
    Psi2,
    /// Separating divisor with genus `h` on marking 1's side.
    Delta(u32),
    /// Separating divisor cutting off a genus-`h` tail that carries neither
    /// marking. It has DR weight zero and is not a chain stratum.
    Tail(u32),
}

impl fmt::Display for DivisorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisorTerm::Psi1 => f.write_str("psi1"),
            DivisorTerm::Psi2 => f.write_str("psi2"),
            DivisorTerm::Delta(h) => write!(f, "delta{h}"),
            DivisorTerm::Tail(h) => write!(f, "tail{h}"),
        }
    }
}

/// Multiplies a chain by one divisor term. `δ_h` either refines the unique
/// vertex straddling cumulative genus `h`, or, when the chain already has a
/// node there, produces the excess terms `-ψ'` and `-ψ''` on its branches.
pub fn multiply_by_divisor(chain: &DecoratedChain, term: DivisorTerm) -> Result<Vec<DecoratedChain>> {
    let g = chain.genus();
    match term {
        DivisorTerm::Psi1 | DivisorTerm::Psi2 => {
            let mut vertices = chain.vertices().to_vec();
            if term == DivisorTerm::Psi1 {
                vertices[0].left_psi += 1;
            } else {
                vertices.last_mut().unwrap().right_psi += 1;
            }
            Ok(vec![DecoratedChain::new(vertices, chain.coefficient().clone())?])
        }
        DivisorTerm::Delta(h) => {
            let divisor = DecoratedChain::separating_divisor(g, h)?;
            chain.product(&divisor)
        }
        DivisorTerm::Tail(h) => Err(Error::InvalidChain(format!(
            "tail divisor of genus {h} is not a chain stratum"
        ))),
    }
}

/// A polynomial in the ramification parameter `a`: degree -> coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct APoly(BTreeMap<u32, Rational>);

impl APoly {
    fn monomial(degree: u32, coeff: Rational) -> Self {
        let mut m = BTreeMap::new();
        if !coeff.is_zero() {
            m.insert(degree, coeff);
        }
        APoly(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degrees(&self) -> BTreeSet<u32> {
        self.0.keys().copied().collect()
    }

    pub fn coefficient(&self, degree: u32) -> Rational {
        self.0.get(&degree).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn mul(&self, other: &APoly) -> APoly {
        let mut out: BTreeMap<u32, Rational> = BTreeMap::new();
        for (d1, c1) in &self.0 {
            for (d2, c2) in &other.0 {
                *out.entry(d1 + d2).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        out.retain(|_, c| !c.is_zero());
        APoly(out)
    }
}

/// The divisor `Θ` for `DR_g(a, -a)` on compact type, term by term, with
/// each term's weight as a polynomial in `a`.
#[derive(Clone, Debug)]
pub struct HainDivisor {
    genus: u32,
    terms: Vec<(DivisorTerm, APoly)>,
}

impl HainDivisor {
    pub fn new(genus: u32) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidGenus { genus, min: 1 });
        }
        // Ramification at the markings as multiples of a.
        let ramification = [1i64, -1];
        let square = |s: i64| APoly::monomial(2, Rational::from(s * s));
        let quarter = Rational::new(-1, 4).unwrap();
        let half = Rational::new(1, 2).unwrap();

        let mut terms = vec![
            (DivisorTerm::Psi1, square(ramification[0]).mul(&APoly::monomial(0, half.clone()))),
            (DivisorTerm::Psi2, square(ramification[1]).mul(&APoly::monomial(0, half))),
        ];
        // Each divisor appears twice in the (h, S) sum: (h, S) and (g-h, S^c).
        for h in 1..genus {
            let a_s = ramification[0];
            let a_sc = ramification[1];
            let w = square(a_s).mul(&APoly::monomial(0, quarter.clone()));
            let w2 = square(a_sc).mul(&APoly::monomial(0, quarter.clone()));
            terms.push((DivisorTerm::Delta(h), add(&w, &w2)));
        }
        // Tails: S = ∅ on a genus-h side (h ≥ 1), both markings on the other.
        for h in 1..=genus {
            let empty = square(0).mul(&APoly::monomial(0, quarter.clone()));
            let both = square(ramification[0] + ramification[1]).mul(&APoly::monomial(0, quarter.clone()));
            terms.push((DivisorTerm::Tail(h), add(&empty, &both)));
        }
        Ok(HainDivisor { genus, terms })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// All terms, including those with zero weight.
    pub fn terms(&self) -> &[(DivisorTerm, APoly)] {
        &self.terms
    }

    /// Terms with nonzero weight and their coefficient of `a²`.
    pub fn surviving_terms(&self) -> Vec<(DivisorTerm, Rational)> {
        self.terms
            .iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(t, w)| (*t, w.coefficient(2)))
            .collect()
    }

    /// Powers of `a` that occur in the expansion of `Θ^g`. Each surviving
    /// term's weight must be a pure `a²` multiple; the result is then `{2g}`.
    pub fn homogeneity_audit(&self) -> Result<BTreeSet<u32>> {
        let mut degrees = BTreeSet::from([0u32]);
        for _ in 0..self.genus {
            let mut next = BTreeSet::new();
            for (_, w) in &self.terms {
                for d in w.degrees() {
                    for acc in &degrees {
                        next.insert(acc + d);
                    }
                }
            }
            degrees = next;
        }
        for (term, w) in &self.terms {
            if !w.is_zero() && w.degrees() != BTreeSet::from([2]) {
                return Err(Error::Bookkeeping(format!(
                    "weight of {term} is not homogeneous of degree 2 in a"
                )));
            }
        }
        Ok(degrees)
    }
}

fn add(a: &APoly, b: &APoly) -> APoly {
    let mut out = a.0.clone();
    for (d, c) in &b.0 {
        *out.entry(*d).or_insert_with(Rational::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    APoly(out)
}

/// Applies a word of divisor terms, left to right, to the trivial chain.
pub fn expand_word(genus: u32, word: &[DivisorTerm]) -> Result<ChainSum> {
    let mut current = ChainSum::from_chain(DecoratedChain::trivial(genus)?);
    for &term in word {
        let mut next = ChainSum::new();
        for chain in current.chains() {
            next.extend(multiply_by_divisor(&chain, term)?);
        }
        current = next;
    }
    Ok(current)
}

/// `Coef_{a^{2g}} DR_g(a, -a)` on compact type, expanded as `(1/g!) D̂^g`.
#[derive(Clone, Debug)]
pub struct HainClass {
    genus: u32,
    class: ChainSum,
}

impl HainClass {
    pub fn new(genus: u32) -> Result<Self> {
        let divisor = HainDivisor::new(genus)?;
        let terms = divisor.surviving_terms();
        let mut current = ChainSum::from_chain(DecoratedChain::trivial(genus)?);
        for _ in 0..genus {
            let mut next = ChainSum::new();
            for chain in current.chains() {
                for (term, weight) in &terms {
                    for piece in multiply_by_divisor(&chain, *term)? {
                        let c = piece.coefficient() * weight;
                        next.add(piece.with_coefficient(c));
                    }
                }
            }
            current = next;
        }
        current.scale(&factorial(genus).recip()?);
        Ok(HainClass {
            genus,
            class: current,
        })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn class(&self) -> &ChainSum {
        &self.class
    }

    /// `Coef_{a^{2g}} ∫ DR_g(a, -a) λ_g ω`.
    pub fn pair(&self, omega: &TestClass) -> Result<Rational> {
        omega.check_complementary(self.genus)?;
        let omega = omega.to_chain(self.genus)?;
        let product = self.class.product(&omega)?;
        // λ_g takes g of the 3g - 1 dimensions.
        let dim = 2 * self.genus - 1;
        for chain in product.chains() {
            if chain.degree() != dim {
                return Err(Error::Bookkeeping(format!(
                    "DR term {chain} has degree {}, expected {dim}",
                    chain.degree()
                )));
            }
        }
        Ok(product.evaluate(&|g, exps: &[u32]| psi_lambda_g_integral(g, exps)))
    }
}

/// Free-function form of [`HainClass::pair`].
pub fn pair_dr_side(genus: u32, omega: &TestClass) -> Result<Rational> {
    HainClass::new(genus)?.pair(omega)
}

/// Whether every vertex of the chain lies on the support of the λ-capped
/// leaf integral, `decoration degree = 2g_v - 1` for a two-pointed vertex.
pub fn on_lambda_support(chain: &DecoratedChain) -> bool {
    chain
        .vertices()
        .iter()
        .all(|v| v.decoration_degree() == 2 * v.genus - 1)
}
