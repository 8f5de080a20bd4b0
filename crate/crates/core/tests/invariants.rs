//! Cross-module invariant sweeps: the properties that tie the independent
//! computation routes together over real parameter ranges.


use nonord_core::analytic;
use nonord_core::hypersums::{self, HyperParams};
use nonord_core::polyfp;
use nonord_core::primes::primes_up_to;
use nonord_core::qseries::{expand_eta_quotient, EtaQuotient};

#[test]
fn mod_p_congruence_holds_for_all_odd_primes_to_499() {
    let tab = expand_eta_quotient(&EtaQuotient::level8_weight4(), 500).unwrap();
    let reports = hypersums::congruence_sweep(499, 1, &tab).unwrap();
    assert_eq!(reports.len(), 94);
    for r in &reports {
        assert!(r.pass, "mod-p congruence failed: {}", r.to_json_line());
    }
}

#[test]
fn power_consistency_to_199() {
    let hh = HyperParams::half_half();
    for p in primes_up_to(199).into_iter().filter(|&p| p > 2) {
        let s3 = hypersums::truncated_sum(p, 3, &hh).unwrap().value();
        let s2 = hypersums::truncated_sum(p, 2, &hh).unwrap().value();
        let s1 = hypersums::truncated_sum(p, 1, &hh).unwrap().value();
        assert_eq!(s3 % (p * p), s2, "p = {p}: mod p^3 vs mod p^2");
        assert_eq!(s2 % p, s1, "p = {p}: mod p^2 vs mod p");
    }
}

#[test]
fn family_coherence_with_qp_to_199() {
    for p in primes_up_to(199).into_iter().filter(|&p| p > 2) {
        let fam = polyfp::build_family_mod_p(p, &HyperParams::half_half()).unwrap();
        assert_eq!(fam, polyfp::build_qp_mod_p(p).unwrap(), "p = {p}");
    }
}

#[test]
fn family_constant_term_matches_cm_table_to_97() {
    let cm = expand_eta_quotient(&EtaQuotient::eta3_8_cm(), 100).unwrap();
    let params = HyperParams::quarter_third();
    for p in primes_up_to(97).into_iter().filter(|&p| p > 3) {
        let fam = polyfp::build_family_mod_p(p, &params).unwrap();
        let expected = cm.b(p as usize).rem_euclid(p as i64) as u64;
        assert_eq!(fam.constant_term(), expected, "p = {p}");
    }
}

#[test]
fn degree_drop_to_199() {
    for p in primes_up_to(199).into_iter().filter(|&p| p > 2) {
        let qp = polyfp::build_qp_mod_p(p).unwrap();
        assert!(polyfp::degree_drop_holds(&qp, p), "p = {p}");
        // companion right side has degree exactly 2(p-1) when b(p) != 0
        if !qp.is_zero() {
            assert_eq!(qp.degree(), Some(2 * (p as usize - 1)), "p = {p}");
        }
    }
}

/// The Abel-smoothed direct sum, Richardson-extrapolated over x = 1e3 and
/// 1e4, must corroborate the Fricke-split L-value to 1e-3. This is the
/// coarse independent oracle for the normalization constant.
#[test]
fn abel_oracle_corroborates_fricke_split_l_value() {
    let tab = expand_eta_quotient(&EtaQuotient::level8_weight4(), 200_000).unwrap();
    let fricke = analytic::l_value_numeric(&tab, 200).unwrap();
    let a1 = analytic::l_value_abel(&tab, 1e3);
    let a2 = analytic::l_value_abel(&tab, 1e4);
    let extrapolated = (1e4 * a2 - 1e3 * a1) / (1e4 - 1e3);
    let diff = (extrapolated - fricke).abs();
    assert!(
        diff <= 1e-3,
        "Abel-extrapolated {extrapolated} vs Fricke-split {fricke} (|diff| = {diff:e})"
    );
}

/// The deligne-style envelope is part of hecke_check; verify it also raw.
#[test]
fn deligne_envelope_to_20000() {
    let tab = expand_eta_quotient(&EtaQuotient::level8_weight4(), 20000).unwrap();
    for n in 1..=tab.limit() {
        let bound = nonord_core::qseries::divisor_count(n) as f64 * (n as f64).powf(1.5);
        assert!((tab.b(n) as f64).abs() <= bound, "n = {n}");
    }
}
