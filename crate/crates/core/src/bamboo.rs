//! The bamboo class `B^g` and its pairings.
//!
//! `B^g` is a signed sum of chain strata ("bamboos"). A term is a chain of
//! `k` vertices of genera `g_1, …, g_k ≥ 1` summing to `g`, with `ψ^{d_i}` on
//! the right point of vertex `i` (the half-edge towards vertex `i+1`, or
//! marking 2 for the last vertex), subject to
//!
//! - `d_1 + ⋯ + d_k + k - 1 = 2g`, and
//! - `d_1 + ⋯ + d_ℓ + ℓ - 1 ≤ 2(g_1 + ⋯ + g_ℓ) - 1` for `1 ≤ ℓ ≤ k - 1`,
//!
//! with sign `(-1)^{k-1}`. The prefix condition is not symmetric under
//! reflecting the chain.
//!
//! Pairings are evaluated by intersecting each bamboo with ω in the chain
//! strata algebra and integrating vertex by vertex with Witten–Kontsevich
//! correlators.

use std::fmt;

use crate::chain::{ChainSum, DecoratedChain, Vertex};
use crate::correlators::Correlators;
use crate::error::{Error, Result};
use crate::monomial::{compositions, PsiKappaMonomial};
use crate::omega::TestClass;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BambooVertex {
    pub genus: u32,
    /// ψ power on the vertex's right point.
    pub edge_psi: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bamboo {
    vertices: Vec<BambooVertex>,
}

impl Bamboo {
    /// Validates the degree equation and the prefix condition.
    pub fn new(vertices: Vec<(u32, u32)>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidBamboo("no vertices".into()));
        }
        if vertices.iter().any(|&(g, _)| g == 0) {
            return Err(Error::InvalidBamboo("vertex of genus 0".into()));
        }
        let k = vertices.len() as u32;
        let genus: u32 = vertices.iter().map(|v| v.0).sum();
        let psi: u32 = vertices.iter().map(|v| v.1).sum();
        if psi + k - 1 != 2 * genus {
            return Err(Error::InvalidBamboo(format!(
                "sum of psi powers {psi} plus {} edges is not 2g = {}",
                k - 1,
                2 * genus
            )));
        }
        if let Some(l) = first_prefix_violation(&vertices) {
            return Err(Error::InvalidBamboo(format!(
                "prefix condition fails at l = {l}"
            )));
        }
        Ok(Bamboo {
            vertices: vertices
                .into_iter()
                .map(|(genus, edge_psi)| BambooVertex { genus, edge_psi })
                .collect(),
        })
    }

    pub fn vertices(&self) -> &[BambooVertex] {
        &self.vertices
    }

    pub fn genus(&self) -> u32 {
        self.vertices.iter().map(|v| v.genus).sum()
    }

    /// `(-1)^{k-1}`.
    pub fn sign(&self) -> i64 {
        if self.vertices.len() % 2 == 1 {
            1
        } else {
            -1
        }
    }

    /// The signed chain stratum of this term.
    pub fn to_chain(&self) -> DecoratedChain {
        let vertices = self
            .vertices
            .iter()
            .map(|v| Vertex::decorated(v.genus, 0, v.edge_psi, Default::default()))
            .collect();
        DecoratedChain::new(vertices, Rational::from(self.sign()))
            .expect("bamboo vertices have positive genus")
    }
}

/// 1-based `ℓ` of the first prefix violating the inequality, if any.
fn first_prefix_violation(vertices: &[(u32, u32)]) -> Option<usize> {
    let mut genus = 0i64;
    let mut psi = 0i64;
    for (l, &(g, d)) in vertices[..vertices.len() - 1].iter().enumerate() {
        let l = l as i64 + 1;
        genus += g as i64;
        psi += d as i64;
        if psi + l - 1 > 2 * genus - 1 {
            return Some(l as usize);
        }
    }
    None
}

impl fmt::Display for Bamboo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign() > 0 { '+' } else { '-' };
        let parts: Vec<String> = self
            .vertices
            .iter()
            .map(|v| format!("({},{})", v.genus, v.edge_psi))
            .collect();
        write!(f, "{sign} {}", parts.join(" "))
    }
}

/// All terms of `B^g`, ordered by length, then genera, then ψ powers.
pub fn enumerate_bamboos(g: u32) -> Result<Vec<Bamboo>> {
    if g == 0 {
        return Err(Error::InvalidGenus { genus: g, min: 1 });
    }
    let mut out = Vec::new();
    for k in 1..=g as usize {
        let psi_total = 2 * g - (k as u32 - 1);
        let genera: Vec<Vec<u32>> = compositions(g - k as u32, k)
            .into_iter()
            .map(|c| c.into_iter().map(|x| x + 1).collect())
            .collect();
        let psis = compositions(psi_total, k);
        for gs in &genera {
            for ds in &psis {
                let vertices: Vec<(u32, u32)> = gs.iter().copied().zip(ds.iter().copied()).collect();
                if first_prefix_violation(&vertices).is_none() {
                    out.push(Bamboo::new(vertices)?);
                }
            }
        }
    }
    Ok(out)
}

/// `B^g` as a linear combination of chain strata, ready for repeated
/// pairing.
#[derive(Clone, Debug)]
pub struct BambooClass {
    genus: u32,
    class: ChainSum,
}

impl BambooClass {
    pub fn new(g: u32) -> Result<Self> {
        let mut class = ChainSum::new();
        class.extend(enumerate_bamboos(g)?.iter().map(Bamboo::to_chain));
        Ok(BambooClass { genus: g, class })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn class(&self) -> &ChainSum {
        &self.class
    }

    /// `∫ B^g · ω`.
    pub fn pair(&self, wk: &Correlators, omega: &TestClass) -> Result<Rational> {
        omega.check_complementary(self.genus)?;
        let omega = omega.to_chain(self.genus)?;
        let product = self.class.product(&omega)?;
        let dim = 3 * self.genus - 1;
        for chain in product.chains() {
            if chain.degree() != dim {
                return Err(Error::Bookkeeping(format!(
                    "bamboo term {chain} has degree {}, expected {dim}",
                    chain.degree()
                )));
            }
        }
        Ok(product.evaluate(&|g, exps: &[u32]| wk.eval(g, exps)))
    }
}

/// `∫ B^g · ω` for a monomial ω of codimension `g - 1`.
pub fn pair_bamboo_side(wk: &Correlators, g: u32, omega: &PsiKappaMonomial) -> Result<Rational> {
    BambooClass::new(g)?.pair(wk, &TestClass::Monomial(omega.clone()))
}
