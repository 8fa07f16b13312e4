//! λ_g-capped ψ integrals.
//!
//! For `g ≥ 1`,
//!
//! ```text
//! ∫ ψ₁^{k₁}⋯ψ_n^{k_n} λ_g = multinomial(2g-3+n; k₁,…,k_n) · b_g
//! b_g = (2^{2g-1} - 1) / 2^{2g-1} · |B_{2g}| / (2g)!
//! ```
//!
//! and in genus 0 `λ₀ = 1`, which gives the same multinomial shape with
//! `b_0 = 1`.

use num_bigint::BigInt;
use num_traits::One;
use parking_lot::Mutex;

use crate::error::{Error, Result};
use crate::rational::{binomial, factorial, multinomial, Rational};

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// Bernoulli number `B_m` for even `m` (and `m = 1`), with `B₁ = -1/2`,
/// `B₂ = 1/6`, from `Σ_{j=0}^{m} binom(m+1, j) B_j = 0`.
pub fn bernoulli(m: u32) -> Result<Rational> {
    if m % 2 == 1 && m > 1 {
        return Err(Error::Parse(format!("odd Bernoulli index {m} requested")));
    }
    let mut table = BERNOULLI.lock();
    if table.is_empty() {
        table.push(Rational::one());
    }
    while table.len() <= m as usize {
        let next = table.len() as u32;
        let s: Rational = table
            .iter()
            .enumerate()
            .map(|(j, b)| Rational::from(binomial(next + 1, j as u32)) * b)
            .sum();
        let b = -(&s / &Rational::from(next as i64 + 1));
        table.push(b);
    }
    Ok(table[m as usize].clone())
}

/// `b_g = ∫_{M̄_{g,1}} ψ₁^{2g-2} λ_g`.
pub fn lambda_g_constant(g: u32) -> Rational {
    assert!(g >= 1, "lambda_g constant needs g >= 1");
    let pow = BigInt::one() << (2 * g - 1) as usize;
    let ratio = Rational::new(&pow - BigInt::one(), pow).unwrap();
    let b = bernoulli(2 * g).expect("even index").abs();
    ratio * (&b / &factorial(2 * g))
}

/// `∫_{M̄_{g,n}} ψ^k λ_g`; zero off the dimension locus or on an empty
/// moduli space.
pub fn psi_lambda_g_integral(g: u32, exponents: &[u32]) -> Rational {
    let n = exponents.len() as i64;
    let gi = g as i64;
    if n == 0 || 2 * gi - 2 + n <= 0 {
        return Rational::zero();
    }
    let degree = 2 * gi - 3 + n;
    let total: i64 = exponents.iter().map(|&k| k as i64).sum();
    if total != degree {
        return Rational::zero();
    }
    let coeff = Rational::from(multinomial(degree as u32, exponents));
    if g == 0 {
        coeff
    } else {
        coeff * lambda_g_constant(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::compositions;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0).unwrap(), q(1, 1));
        assert_eq!(bernoulli(1).unwrap(), q(-1, 2));
        assert_eq!(bernoulli(2).unwrap(), q(1, 6));
        assert_eq!(bernoulli(4).unwrap(), q(-1, 30));
        assert_eq!(bernoulli(6).unwrap(), q(1, 42));
        assert_eq!(bernoulli(12).unwrap(), q(-691, 2730));
        assert!(bernoulli(3).is_err());
    }

    #[test]
    fn lambda_constants() {
        assert_eq!(lambda_g_constant(1), q(1, 24));
        assert_eq!(lambda_g_constant(2), q(7, 5760));
        assert_eq!(lambda_g_constant(3), q(31, 967680));
    }

    #[test]
    fn integral_examples() {
        assert_eq!(psi_lambda_g_integral(1, &[1, 0]), q(1, 24));
        assert_eq!(psi_lambda_g_integral(1, &[0, 1]), q(1, 24));
        assert_eq!(psi_lambda_g_integral(2, &[3, 0]), q(7, 5760));
        assert_eq!(psi_lambda_g_integral(0, &[0, 0, 0]), q(1, 1));
        assert!(psi_lambda_g_integral(1, &[0, 0]).is_zero());
        assert!(psi_lambda_g_integral(0, &[0, 0]).is_zero());
        assert!(psi_lambda_g_integral(1, &[]).is_zero());
        assert_eq!(psi_lambda_g_integral(1, &[0]), q(1, 24));
    }

    #[test]
    fn multinomial_sum_identity() {
        for (g, n) in [(1u32, 2usize), (2, 2), (2, 3), (1, 3), (3, 2)] {
            let degree = 2 * g + n as u32 - 3;
            let sum: Rational = compositions(degree, n)
                .iter()
                .map(|k| psi_lambda_g_integral(g, k))
                .sum();
            let expected = Rational::from((n as i64).pow(degree)) * lambda_g_constant(g);
            assert_eq!(sum, expected, "g={g} n={n}");
        }
    }

    fn arb_input() -> impl Strategy<Value = (u32, Vec<u32>)> {
        (1u32..=4, 1usize..=5).prop_flat_map(|(g, n)| {
            let degree = 2 * g + n as u32 - 3;
            (Just(g), proptest::collection::vec(0u32..=degree, n))
        })
    }

    proptest! {
        #[test]
        fn string_and_dilaton_analogues((g, ks) in arb_input()) {
            let mut with_zero = ks.clone();
            with_zero.push(0);
            let lowered: Rational = (0..ks.len()).filter(|&j| ks[j] > 0).map(|j| {
                let mut l = ks.clone();
                l[j] -= 1;
                psi_lambda_g_integral(g, &l)
            }).sum();
            prop_assert_eq!(psi_lambda_g_integral(g, &with_zero), lowered);

            let mut with_one = ks.clone();
            with_one.push(1);
            let factor = Rational::from(2 * g as i64 - 2 + ks.len() as i64);
            prop_assert_eq!(psi_lambda_g_integral(g, &with_one), factor * psi_lambda_g_integral(g, &ks));
        }

        #[test]
        fn nonnegative((g, ks) in arb_input()) {
            prop_assert!(!psi_lambda_g_integral(g, &ks).is_negative());
        }
    }
}
