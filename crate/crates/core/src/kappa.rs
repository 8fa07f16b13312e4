//! κ-classes to pure ψ integrals.
//!
//! With `κ_b = π_*(ψ_{n+1}^{b+1})`, a κ-monomial on one vertex expands as a
//! signed sum over set partitions `σ` of its factors (taken as
//! distinguishable):
//!
//! ```text
//! ⟨∏ τ_{k_i} · κ_{b_1}⋯κ_{b_m}⟩ = Σ_σ (-1)^{m-|σ|} ⟨∏ τ_{k_i} · ∏_{B∈σ} τ_{1+Σ_{j∈B} b_j}⟩
//! ```
//!
//! Each block adds one marking. λ-classes pull back along forgetful maps, so
//! the expansion is valid under a λ cap as well.

use std::collections::BTreeMap;

use crate::monomial::KappaMonomial;
use crate::rational::Rational;

/// One term of a κ expansion: a coefficient and the extended ψ exponent list
/// (original markings first, then one entry per block, sorted).
pub type PsiTerm = (Rational, Vec<u32>);

/// Set partitions of `{0, …, m-1}` as restricted growth strings:
/// `labels[i]` is the block of element `i`, and each new block label is one
/// more than the largest seen so far.
pub fn set_partitions(m: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, m: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == m {
            out.push(labels.clone());
            return;
        }
        for b in 0..=max {
            labels.push(b);
            rec(i + 1, m, max.max(b + 1), labels, out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, 0, &mut Vec::with_capacity(m), &mut out);
    out
}

/// Expands `ψ^{psi} · kappa` into pure ψ terms. Terms with the same extended
/// exponent list are combined; cancelled terms are dropped.
pub fn kappa_to_psi(psi: &[u32], kappa: &KappaMonomial) -> Vec<PsiTerm> {
    let factors = kappa.factors();
    if factors.is_empty() {
        return vec![(Rational::one(), psi.to_vec())];
    }
    let mut combined: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    for labels in set_partitions(factors.len()) {
        let blocks = labels.iter().max().map_or(0, |&b| b + 1);
        let mut block_degree = vec![1u32; blocks];
        for (&label, &b) in labels.iter().zip(&factors) {
            block_degree[label] += b;
        }
        block_degree.sort_unstable();
        let sign = if (factors.len() - blocks).is_multiple_of(2) {
            Rational::one()
        } else {
            -Rational::one()
        };
        let mut extended = psi.to_vec();
        extended.extend(block_degree);
        *combined.entry(extended).or_insert_with(Rational::zero) += sign;
    }
    combined
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (c, e))
        .collect()
}

/// Integrates `ψ^{psi} · kappa` with a pure-ψ leaf evaluator.
pub fn integrate_with<F>(psi: &[u32], kappa: &KappaMonomial, mut leaf: F) -> Rational
where
    F: FnMut(&[u32]) -> Rational,
{
    kappa_to_psi(psi, kappa)
        .into_iter()
        .map(|(c, exps)| {
            let v = leaf(&exps);
            if v.is_zero() {
                v
            } else {
                c * v
            }
        })
        .sum()
}
