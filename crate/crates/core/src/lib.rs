//! Exact arithmetic for meromorphic modular forms on Gamma_0(N): truncated
//! Laurent q-series over the rationals, eta-quotient divisors at cusps,
//! weight-2 Eisenstein-space corrections via the gcd matrix and Cramer's
//! rule, product-exponent extraction, Hecke coset actions, and a numerical
//! probe of the Hecke-orbit equidistribution statistic.
//!
//! Module map:
//! - [`qseries`]: rational Laurent series in q, the carrier of every expansion
//! - [`modforms`]: E2 and its rescalings, eta quotients, cusp tables
//! - [`eisspace`]: the gcd matrix A_N, exact determinants, Cramer coefficients
//! - [`thetaexp`]: log-derivatives, product exponents c(n), f_theta data
//! - [`hecke`]: coset sets T(m), orbits, fundamental-domain reduction, tails
//! - [`identity`]: the generating-series identity and its closed form
//! - [`equidist`]: the sigma_1-normalized Hecke-orbit statistic
//! - [`cli`]: the `qorbit` command-line frontend
//! - [`selftest`]: the end-to-end verification suite behind `qorbit selftest`

pub mod arith;
pub mod cli;
pub mod eisspace;
pub mod equidist;
pub mod hecke;
pub mod identity;
pub mod modforms;
pub mod qseries;
pub mod selftest;
pub mod thetaexp;

mod error;

pub use error::{Error, Result};
pub use qseries::{QSeries, Rat};
