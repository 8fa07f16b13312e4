//! Decorated chain strata in compact type.
//!
//! A chain is a dual graph that is a path: marking 1 on the left point of the
//! first vertex, marking 2 on the right point of the last vertex, and every
//! edge separating the two markings. Each vertex carries ψ powers on its two
//! special points and a κ-monomial. Vertices have genus at least 1, since a
//! genus-0 vertex with two special points is unstable.
//!
//! Chains are oriented: reflecting a chain gives a different object.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kappa;
use crate::monomial::{KappaMonomial, PsiKappaMonomial};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub genus: u32,
    /// ψ power at the left point (marking 1 or the incoming node branch).
    pub left_psi: u32,
    /// ψ power at the right point (the outgoing node branch or marking 2).
    pub right_psi: u32,
    pub kappa: KappaMonomial,
}

impl Vertex {
    pub fn bare(genus: u32) -> Self {
        Vertex {
            genus,
            left_psi: 0,
            right_psi: 0,
            kappa: KappaMonomial::one(),
        }
    }

    pub fn decorated(genus: u32, left_psi: u32, right_psi: u32, kappa: KappaMonomial) -> Self {
        Vertex {
            genus,
            left_psi,
            right_psi,
            kappa,
        }
    }

    pub fn decoration_degree(&self) -> u32 {
        self.left_psi + self.right_psi + self.kappa.degree()
    }

    /// The vertex decoration as a class on the vertex's own two-pointed
    /// moduli space (left point = 1, right point = 2).
    pub fn local_monomial(&self) -> PsiKappaMonomial {
        PsiKappaMonomial::new(self.left_psi, self.right_psi, self.kappa.clone())
    }
}

/// Product of vertex integrals `∏_v ∫_{M̄_{g_v,2}} ψ_L^{l} ψ_R^{r} κ_v (·cap)`,
/// with κ expanded into ψ insertions and `leaf(genus, exponents)` evaluating
/// the pure ψ integrals.
pub fn evaluate_vertices<F>(vertices: &[Vertex], leaf: &F) -> Rational
where
    F: Fn(u32, &[u32]) -> Rational,
{
    let mut acc = Rational::one();
    for v in vertices {
        let value = kappa::integrate_with(&[v.left_psi, v.right_psi], &v.kappa, |exps| {
            leaf(v.genus, exps)
        });
        if value.is_zero() {
            return value;
        }
        acc *= value;
    }
    acc
}

/// A chain stratum with decorations and a rational coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecoratedChain {
    vertices: Vec<Vertex>,
    coefficient: Rational,
}

impl DecoratedChain {
    pub fn new(vertices: Vec<Vertex>, coefficient: Rational) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidChain("a chain needs at least one vertex".into()));
        }
        if let Some(i) = vertices.iter().position(|v| v.genus == 0) {
            return Err(Error::InvalidChain(format!(
                "vertex {i} has genus 0 and only two special points"
            )));
        }
        Ok(DecoratedChain {
            vertices,
            coefficient,
        })
    }

    /// The fundamental class of `M̄_{g,2}`.
    pub fn trivial(genus: u32) -> Result<Self> {
        Self::new(vec![Vertex::bare(genus)], Rational::one())
    }

    /// A monomial on `M̄_{g,2}` as a one-vertex chain.
    pub fn from_monomial(genus: u32, m: &PsiKappaMonomial) -> Result<Self> {
        Self::new(
            vec![Vertex::decorated(genus, m.d1, m.d2, m.kappa.clone())],
            Rational::one(),
        )
    }

    /// The undecorated boundary divisor with a genus-`h` component carrying
    /// marking 1 and a genus-`(genus - h)` component carrying marking 2.
    pub fn separating_divisor(genus: u32, h: u32) -> Result<Self> {
        if h == 0 || h >= genus {
            return Err(Error::InvalidChain(format!(
                "delta_{h} needs 1 <= h <= {}",
                genus.saturating_sub(1)
            )));
        }
        Self::new(
            vec![Vertex::bare(h), Vertex::bare(genus - h)],
            Rational::one(),
        )
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn coefficient(&self) -> &Rational {
        &self.coefficient
    }

    pub fn with_coefficient(mut self, c: Rational) -> Self {
        self.coefficient = c;
        self
    }

    pub fn genus(&self) -> u32 {
        self.vertices.iter().map(|v| v.genus).sum()
    }

    /// Number of edges.
    pub fn codim(&self) -> u32 {
        self.vertices.len() as u32 - 1
    }

    /// Codimension of the stratum plus all decoration degrees.
    pub fn degree(&self) -> u32 {
        self.codim() + self.vertices.iter().map(Vertex::decoration_degree).sum::<u32>()
    }

    /// Cumulative genus to the left of each edge, strictly increasing.
    pub fn cuts(&self) -> Vec<u32> {
        self.vertices[..self.vertices.len() - 1]
            .iter()
            .scan(0, |acc, v| {
                *acc += v.genus;
                Some(*acc)
            })
            .collect()
    }

    /// The chain reflected end to end (markings exchanged).
    pub fn reflected(&self) -> DecoratedChain {
        let vertices = self
            .vertices
            .iter()
            .rev()
            .map(|v| Vertex::decorated(v.genus, v.right_psi, v.left_psi, v.kappa.clone()))
            .collect();
        DecoratedChain {
            vertices,
            coefficient: self.coefficient.clone(),
        }
    }

    pub fn evaluate<F>(&self, leaf: &F) -> Rational
    where
        F: Fn(u32, &[u32]) -> Rational,
    {
        if self.coefficient.is_zero() {
            return Rational::zero();
        }
        let v = evaluate_vertices(&self.vertices, leaf);
        if v.is_zero() {
            v
        } else {
            &self.coefficient * v
        }
    }

    /// Intersection product of two chain classes of the same genus.
    ///
    /// The strata meet along the chain whose edge cuts are the union of both
    /// cut sets. Decorations on marking legs and node branches carry over to
    /// the matching point of the refined chain; each κ on a vertex restricts
    /// to the sum of the κ-classes of the refined vertices it covers. Every
    /// edge shared by both chains contributes the excess factor
    /// `-(ψ' + ψ'')` on its two branches.
    pub fn product(&self, other: &DecoratedChain) -> Result<Vec<DecoratedChain>> {
        if self.genus() != other.genus() {
            return Err(Error::InvalidChain(format!(
                "cannot multiply chains of genus {} and {}",
                self.genus(),
                other.genus()
            )));
        }
        let genus = self.genus();
        let a_cuts = self.cuts();
        let b_cuts = other.cuts();
        let mut cuts: Vec<u32> = a_cuts.iter().chain(&b_cuts).copied().collect();
        cuts.sort_unstable();
        cuts.dedup();

        let bounds: Vec<u32> = std::iter::once(0)
            .chain(cuts.iter().copied())
            .chain(std::iter::once(genus))
            .collect();
        let mut base: Vec<Vertex> = bounds.windows(2).map(|w| Vertex::bare(w[1] - w[0])).collect();

        // Index range of refined vertices covered by each factor vertex.
        let ranges = |factor_cuts: &[u32]| -> Vec<(usize, usize)> {
            let mut out = Vec::new();
            let mut start = 0;
            for c in factor_cuts {
                let end = cuts.iter().position(|x| x == c).unwrap();
                out.push((start, end));
                start = end + 1;
            }
            out.push((start, base.len() - 1));
            out
        };
        let a_ranges = ranges(&a_cuts);
        let b_ranges = ranges(&b_cuts);

        let mut pending_kappa: Vec<(&KappaMonomial, (usize, usize))> = Vec::new();
        for (chain, rs) in [(self, &a_ranges), (other, &b_ranges)] {
            for (v, &(lo, hi)) in chain.vertices.iter().zip(rs.iter()) {
                base[lo].left_psi += v.left_psi;
                base[hi].right_psi += v.right_psi;
                if !v.kappa.is_one() {
                    pending_kappa.push((&v.kappa, (lo, hi)));
                }
            }
        }

        let coefficient = &self.coefficient * &other.coefficient;
        let mut terms = vec![(coefficient, base)];

        for (kappa, (lo, hi)) in pending_kappa {
            let mut next = Vec::new();
            let splits = kappa.distribute(hi - lo + 1);
            for (c, vertices) in &terms {
                for (sc, parts) in &splits {
                    let mut vertices = vertices.clone();
                    for (v, part) in vertices[lo..=hi].iter_mut().zip(parts) {
                        v.kappa = v.kappa.mul(part);
                    }
                    next.push((c * sc, vertices));
                }
            }
            terms = next;
        }

        for (edge, c) in cuts.iter().enumerate() {
            if !(a_cuts.contains(c) && b_cuts.contains(c)) {
                continue;
            }
            let mut next = Vec::with_capacity(terms.len() * 2);
            for (coeff, vertices) in terms {
                let neg = -coeff;
                let mut left = vertices.clone();
                left[edge].right_psi += 1;
                let mut right = vertices;
                right[edge + 1].left_psi += 1;
                next.push((neg.clone(), left));
                next.push((neg, right));
            }
            terms = next;
        }

        Ok(terms
            .into_iter()
            .map(|(coefficient, vertices)| DecoratedChain {
                vertices,
                coefficient,
            })
            .collect())
    }
}

/// `[g|monomial]-[g|monomial]-…`, where each monomial is written on the
/// vertex's own two-pointed space (`psi1` = left point, `psi2` = right point).
/// The coefficient is not part of the text form.
impl fmt::Display for DecoratedChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vertices
            .iter()
            .map(|v| format!("[{}|{}]", v.genus, v.local_monomial()))
            .collect();
        f.write_str(&parts.join("-"))
    }
}

impl FromStr for DecoratedChain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed chain {s:?}"));
        let mut vertices = Vec::new();
        for segment in s.trim().split(']') {
            let segment = segment.trim();
            if segment.is_empty() {
                continue;
            }
            let segment = segment.strip_prefix('-').unwrap_or(segment).trim();
            let body = segment.strip_prefix('[').ok_or_else(bad)?;
            let (genus, mono) = body.split_once('|').ok_or_else(bad)?;
            let genus: u32 = genus.trim().parse().map_err(|_| bad())?;
            let m: PsiKappaMonomial = mono.parse()?;
            vertices.push(Vertex::decorated(genus, m.d1, m.d2, m.kappa));
        }
        if !s.trim().ends_with(']') {
            return Err(bad());
        }
        DecoratedChain::new(vertices, Rational::one())
    }
}

/// A finite linear combination of chain strata. Identical decorated chains
/// are merged and zero coefficients dropped, so equality is structural.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainSum {
    terms: BTreeMap<Vec<Vertex>, Rational>,
}

impl ChainSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_chain(chain: DecoratedChain) -> Self {
        let mut s = Self::new();
        s.add(chain);
        s
    }

    pub fn add(&mut self, chain: DecoratedChain) {
        let DecoratedChain {
            vertices,
            coefficient,
        } = chain;
        match self.terms.entry(vertices) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += coefficient;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                if !coefficient.is_zero() {
                    e.insert(coefficient);
                }
            }
        }
    }

    pub fn extend(&mut self, chains: impl IntoIterator<Item = DecoratedChain>) {
        for c in chains {
            self.add(c);
        }
    }

    pub fn scale(&mut self, factor: &Rational) {
        if factor.is_zero() {
            self.terms.clear();
            return;
        }
        for c in self.terms.values_mut() {
            *c *= factor;
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn chains(&self) -> impl Iterator<Item = DecoratedChain> + '_ {
        self.terms.iter().map(|(v, c)| DecoratedChain {
            vertices: v.clone(),
            coefficient: c.clone(),
        })
    }

    /// Multiplies every term by a chain class.
    pub fn product(&self, other: &DecoratedChain) -> Result<ChainSum> {
        let mut out = ChainSum::new();
        for chain in self.chains() {
            out.extend(chain.product(other)?);
        }
        Ok(out)
    }

    pub fn evaluate<F>(&self, leaf: &F) -> Rational
    where
        F: Fn(u32, &[u32]) -> Rational,
    {
        self.chains().map(|c| c.evaluate(leaf)).sum()
    }
}
