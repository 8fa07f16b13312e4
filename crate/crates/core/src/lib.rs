//! Exact intersection numbers on `M̄_{g,2}` for two classes of codimension
//! `2g`: the bamboo class `B^g`, and the `a^{2g}` coefficient of
//! `DR_g(a,-a) λ_g`.
//!
//! The two sides are computed by independent pipelines:
//!
//! - [`bamboo`] enumerates the chain strata of `B^g`, intersects them with a
//!   test class and integrates vertex by vertex with Witten–Kontsevich
//!   correlators ([`correlators`]);
//! - [`hain`] expands Hain's compact-type formula for the DR cycle in the
//!   chain strata algebra and integrates with λ_g-capped ψ integrals
//!   ([`hodge`]).
//!
//! [`verify`] pairs both sides with every test class of complementary
//! degree and compares the results exactly.

pub mod bamboo;
pub mod chain;
pub mod correlators;
pub mod error;
pub mod hain;
pub mod hodge;
pub mod kappa;
pub mod monomial;
pub mod omega;
pub mod rational;
pub mod verify;

pub use bamboo::{enumerate_bamboos, pair_bamboo_side, Bamboo, BambooClass};
pub use chain::{ChainSum, DecoratedChain, Vertex};
pub use correlators::{cache_load, cache_store, CorrelatorKey, Correlators, MemoTable};
pub use error::{Error, Result};
pub use hain::{multiply_by_divisor, pair_dr_side, DivisorTerm, HainClass, HainDivisor};
pub use hodge::{bernoulli, lambda_g_constant, psi_lambda_g_integral};
pub use kappa::kappa_to_psi;
pub use monomial::{monomial_codim, KappaMonomial, PsiKappaMonomial};
pub use omega::TestClass;
pub use rational::Rational;
pub use verify::{enumerate_omegas, verify, Record, VerificationReport, Verifier, VerifyOptions};
