//! Floating-point verification of the Archimedean identity: the infinite
//! hypergeometric sum against 16 L(f,2) / pi^2 for the level-8 form.
//!
//! Both sides are computed independently and only mutual agreement is
//! asserted; no absolute constant is taken on faith. This module is a
//! plausibility check in binary doubles, not a proof.
//!
//! L-value route: the completed L-function
//! Lambda(s) = N^{s/2} (2 pi)^{-s} Gamma(s) L(f,s) = N^{s/2} I(s) with
//! I(s) = int_0^inf f(iy) y^{s-1} dy. Splitting I at the Fricke fixed point
//! y0 = N^{-1/2} and applying the involution with sign eps = +1 (eps = -1
//! would force Lambda(2) = 0, contradicting the identity's nonzero value)
//! gives I(2) = 2 sum_n b(n) (1 + 2 pi n y0) e^{-2 pi n y0} / (2 pi n)^2,
//! hence with N = 8:
//!   L(f,2) = 4 pi^2 I(2) = 8 pi^2 sum_n b(n) (1+2 pi n y0) e^{-2 pi n y0} / (2 pi n)^2.
//! An Abel-smoothed direct sum of b(n) n^{-2} corroborates the constant
//! independently (see the crate's integration tests).

use crate::error::Result;
use crate::qseries::CoeffTable;
use crate::report::Report;
use serde::Serialize;
use serde_json::json;
use std::f64::consts::PI;

/// Level of the reference form; fixes the Fricke point y0 = 8^{-1/2}.
const LEVEL: f64 = 8.0;

/// Partial sum sum_{k=0}^{N-1} t_k with t_k = (binom(2k,k)/4^k)^4, no tail.
/// Terms satisfy t_0 = 1, t_k = t_{k-1} ((2k-1)/(2k))^4 and decay like
/// (pi k)^{-2}.
pub fn hyper_sum_partial(n_terms: usize) -> f64 {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for k in 1..n_terms {
        let ratio = (2 * k - 1) as f64 / (2 * k) as f64;
        term *= ratio * ratio * ratio * ratio;
        sum += term;
    }
    sum
}

/// First-order tail correction for the truncated hypergeometric sum:
/// sum_{k>=N} t_k ~ 1/(pi^2 N) since t_k = (pi k)^{-2} (1 + O(1/k)).
pub fn tail_correction(n_terms: usize) -> f64 {
    1.0 / (PI * PI * n_terms as f64)
}

/// The left-hand side: N-term partial sum plus the first-order tail.
pub fn hyper_sum_numeric(n_terms: usize) -> f64 {
    hyper_sum_partial(n_terms) + tail_correction(n_terms)
}

/// L(f,2) by the Fricke-split formula over the first M coefficients;
/// convergence is geometric with ratio e^{-2 pi y0} ~ 0.108 per unit n.
pub fn l_value_numeric(tab: &CoeffTable, m_terms: usize) -> Result<f64> {
    tab.require(m_terms)?;
    let y0 = 1.0 / LEVEL.sqrt();
    let mut sum = 0.0f64;
    for n in 1..=m_terms {
        let two_pi_n = 2.0 * PI * n as f64;
        sum += tab.b(n) as f64 * (1.0 + two_pi_n * y0) * (-two_pi_n * y0).exp()
            / (two_pi_n * two_pi_n);
    }
    Ok(8.0 * PI * PI * sum)
}

/// Abel-smoothed direct evaluation sum b(n) n^{-2} e^{-n/x}; a coarse
/// independent oracle for L(f,2), extrapolated by the caller.
pub fn l_value_abel(tab: &CoeffTable, x: f64) -> f64 {
    let mut sum = 0.0f64;
    for n in 1..=tab.limit() {
        let nf = n as f64;
        sum += tab.b(n) as f64 / (nf * nf) * (-nf / x).exp();
    }
    sum
}

/// Numeric verdict on the Archimedean identity with full reproducibility
/// data.
#[derive(Clone, Debug, Serialize)]
pub struct NumericReport {
    pub lhs: f64,
    pub rhs: f64,
    pub relative_difference: f64,
    pub n_terms: usize,
    pub m_terms: usize,
    pub tail_correction: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Compare the hypergeometric sum (N terms + tail) against 16 L(f,2)/pi^2
/// (M coefficient terms) at the given relative tolerance.
pub fn verify_archimedean(tab: &CoeffTable, n_terms: usize, m_terms: usize, tol: f64) -> Result<NumericReport> {
    let lhs = hyper_sum_numeric(n_terms);
    let rhs = 16.0 * l_value_numeric(tab, m_terms)? / (PI * PI);
    let relative_difference = (lhs - rhs).abs() / rhs;
    Ok(NumericReport {
        lhs,
        rhs,
        relative_difference,
        n_terms,
        m_terms,
        tail_correction: tail_correction(n_terms),
        tolerance: tol,
        pass: relative_difference <= tol,
    })
}

/// Default parameters for the acceptance run.
pub const DEFAULT_N_TERMS: usize = 1_000_000;
pub const DEFAULT_M_TERMS: usize = 200;
pub const DEFAULT_TOLERANCE: f64 = 1e-5;

impl NumericReport {
    pub fn into_report(self) -> Report {
        Report::new("archimedean_identity")
            .param("n_terms", self.n_terms)
            .param("m_terms", self.m_terms)
            .param("tolerance", self.tolerance)
            .pass(self.pass)
            .witness(json!({
                "lhs_hyper_sum": self.lhs,
                "rhs_16_l_over_pi2": self.rhs,
                "relative_difference": self.relative_difference,
                "tail_correction": self.tail_correction,
            }))
    }
}
