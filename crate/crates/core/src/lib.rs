//! Verification kernels for divisibility phenomena of weight-4 eta-quotient
//! newforms: exact q-expansions, truncated hypergeometric supercongruences,
//! the coefficient-wise divisibility criterion for non-ordinary primes, the
//! cyclotomic q-congruence behind it, and a numeric check of the Archimedean
//! L-value identity.
//!
//! Modules map one-to-one onto the verification surfaces:
//!
//! - [`modring`] exact arithmetic in Z/m for m up to 2^62 (p, p^2, p^3);
//! - [`qseries`] eta-quotient Fourier coefficients b(1..N) with persistence;
//! - [`hypersums`] truncated hypergeometric sums mod p^r, the Van
//!   Hamme/Kilbourn check, and the non-ordinary prime search;
//! - [`polyfp`] the polynomial Q_p(a) over F_p and over Z, the divisibility
//!   criterion, and the companion congruence;
//! - [`qcong`] the exact cyclotomic q-congruence in Z[a][q]/Phi_n(q);
//! - [`analytic`] the floating-point Archimedean identity;
//! - [`report`] structured pass/fail records shared by all checks.

pub mod analytic;
pub mod error;
pub mod hypersums;
pub mod modring;
pub mod polyfp;
pub mod primes;
pub mod qcong;
pub mod qseries;
pub mod report;

pub use error::{Error, Result};
