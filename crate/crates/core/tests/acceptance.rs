//! Acceptance suite: every criterion of the verification contract, run at
//! its stated tolerance, one pass/fail line per criterion.
//!
//! Run with `cargo test -p nonord-core --test acceptance -- --nocapture`
//! to see the per-criterion lines.

mod common;

use nonord_core::analytic;
use nonord_core::hypersums::{self, HyperParams};
use nonord_core::polyfp;
use nonord_core::primes::primes_up_to;
use nonord_core::qcong;
use nonord_core::qseries::{self, EtaQuotient};
use num_bigint::BigInt;
use std::sync::OnceLock;
use std::time::Instant;

fn level8_20000() -> &'static qseries::CoeffTable {
    static TABLE: OnceLock<qseries::CoeffTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        qseries::expand_eta_quotient(&EtaQuotient::level8_weight4(), 20000).unwrap()
    })
}

fn cm_20000() -> &'static qseries::CoeffTable {
    static TABLE: OnceLock<qseries::CoeffTable> = OnceLock::new();
    TABLE
        .get_or_init(|| qseries::expand_eta_quotient(&EtaQuotient::eta3_8_cm(), 20000).unwrap())
}

fn verdict(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} -- {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion}: {detail}");
}

#[test]
fn criterion_01_coefficient_engine() {
    let start = Instant::now();
    let tab = qseries::expand_eta_quotient(&EtaQuotient::level8_weight4(), 20000).unwrap();
    let elapsed = start.elapsed();

    let first: Vec<i64> = (1..=7).map(|n| tab.b(n)).collect();
    let oracle = common::naive_expand(&EtaQuotient::level8_weight4(), 7);
    verdict(
        "1a",
        first == vec![1, 0, -4, 0, -2, 0, 24] && first == oracle[..7],
        &format!("b(1..7) = {first:?} (naive oracle agrees)"),
    );
    verdict("1b", tab.b(11) == -44, &format!("b(11) = {}", tab.b(11)));
    verdict(
        "1c",
        tab.b(3137) == 66 * 3137,
        &format!("b(3137) = {} = 66*3137", tab.b(3137)),
    );
    verdict(
        "1d",
        elapsed.as_secs_f64() < 5.0,
        &format!("expansion to N = 20000 took {elapsed:?} (< 5 s)"),
    );
}

#[test]
fn criterion_02_nonordinary_search() {
    let tab = level8_20000();
    let result = hypersums::nonordinary_search(tab, 20000).unwrap();
    verdict(
        "2a",
        result.nonordinary == vec![11, 3137],
        &format!("non-ordinary odd primes < 20000: {:?}", result.nonordinary),
    );

    // warm-cache timing: table already on disk, search must come in < 1 s
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("level8_20000.etac");
    qseries::save_table(tab, &path).unwrap();
    let start = Instant::now();
    let loaded = qseries::load_table(&path).unwrap();
    let warm = hypersums::nonordinary_search(&loaded, 20000).unwrap();
    let elapsed = start.elapsed();
    verdict(
        "2b",
        warm.nonordinary == vec![11, 3137] && elapsed.as_secs_f64() < 1.0,
        &format!("warm-cache search took {elapsed:?} (< 1 s)"),
    );
}

#[test]
fn criterion_03_vanhamme_kilbourn() {
    let tab = level8_20000();
    let start = Instant::now();
    let reports = hypersums::vanhamme_sweep(499, tab).unwrap();
    let elapsed = start.elapsed();
    let failures: Vec<&nonord_core::report::Report> =
        reports.iter().filter(|r| !r.pass).collect();
    verdict(
        "3a",
        failures.is_empty() && !reports.is_empty(),
        &format!(
            "truncated sum = b(p) (mod p^3) for all {} odd primes p <= 499, {} failures",
            reports.len(),
            failures.len()
        ),
    );
    verdict("3b", elapsed.as_secs_f64() < 60.0, &format!("sweep took {elapsed:?} (< 60 s)"));
}

#[test]
fn criterion_04_divisibility_sweep() {
    let tab = level8_20000();
    let start = Instant::now();
    let reports = polyfp::divisibility_sweep(199, tab).unwrap();
    let all_equivalent = reports.iter().all(|r| r.pass);
    let zero_primes: Vec<u64> = reports
        .iter()
        .filter(|r| r.witness["qp_is_zero_mod_p"] == true)
        .map(|r| r.params["p"].as_u64().unwrap())
        .collect();
    verdict(
        "4a",
        all_equivalent,
        &format!(
            "p | b(p) <=> Q_p = 0 mod p for all {} odd primes p <= 199",
            reports.len()
        ),
    );
    verdict(
        "4b",
        zero_primes == vec![11],
        &format!("zero-polynomial outcomes in range: {zero_primes:?}"),
    );
    let q3137 = polyfp::build_qp_mod_p(3137).unwrap();
    let elapsed = start.elapsed();
    verdict("4c", q3137.is_zero(), "Q_3137 mod 3137 is the zero polynomial");
    verdict("4d", elapsed.as_secs_f64() < 60.0, &format!("total {elapsed:?} (< 60 s)"));
}

#[test]
fn criterion_05_companion_and_degree_drop() {
    let tab = level8_20000();
    let mut checked = 0usize;
    for p in primes_up_to(199).into_iter().filter(|&p| p > 2) {
        let companion = polyfp::companion_check(p, tab).unwrap();
        assert!(companion.pass, "companion congruence failed at p = {p}");
        let qp = polyfp::build_qp_mod_p(p).unwrap();
        assert!(polyfp::degree_drop_holds(&qp, p), "degree drop failed at p = {p}");
        checked += 1;
    }
    verdict(
        "5",
        checked == 45,
        &format!(
            "Q_p = b(p) prod_j (j-a)^4 (mod p) and deg drop to 2(p-1), {checked} odd primes p <= 199"
        ),
    );
}

#[test]
fn criterion_06_constant_term_law() {
    let tab = level8_20000();
    for p in primes_up_to(199).into_iter().filter(|&p| p > 2) {
        let qp = polyfp::build_qp_mod_p(p).unwrap();
        let expected = tab.b(p as usize).rem_euclid(p as i64) as u64;
        assert_eq!(qp.constant_term(), expected, "Q_p(0) != b(p) mod p at p = {p}");
    }
    let q3 = polyfp::build_qp_integer(3, polyfp::DEFAULT_INTEGER_PRIME_CAP).unwrap();
    verdict(
        "6",
        q3.constant_term() == BigInt::from(4433),
        &format!(
            "Q_p(0) = b(p) mod p for odd p <= 199; exact Q_3(0) = {}",
            q3.constant_term()
        ),
    );
}

#[test]
fn criterion_07_cm_family() {
    let cm = cm_20000();
    let params = HyperParams::quarter_third();

    // p = 2 (mod 3), 11 <= p <= 97: identically zero
    let mut two_mod_three = Vec::new();
    for p in primes_up_to(97).into_iter().filter(|&p| p >= 11 && p % 3 == 2) {
        let fam = polyfp::build_family_mod_p(p, &params).unwrap();
        assert!(fam.is_zero(), "family polynomial not zero mod {p}");
        two_mod_three.push(p);
    }
    verdict(
        "7a",
        two_mod_three == vec![11, 17, 23, 29, 41, 47, 53, 59, 71, 83, 89],
        &format!("zero polynomial for p = 2 (mod 3), 11 <= p <= 97: {two_mod_three:?}"),
    );

    // p = 5: run and reported, not asserted (open question in the contract)
    let f5 = polyfp::build_family_mod_p(5, &params).unwrap();
    println!(
        "criterion 7b: REPORT -- family polynomial at p = 5 is {} (no assertion)",
        if f5.is_zero() { "zero" } else { "nonzero" }
    );

    // p = 1 (mod 3): zero exactly when p | b'(p) -- never in range
    for p in primes_up_to(97).into_iter().filter(|&p| p > 3 && p % 3 == 1) {
        let fam = polyfp::build_family_mod_p(p, &params).unwrap();
        let divides = cm.b(p as usize) % p as i64 == 0;
        assert_eq!(fam.is_zero(), divides, "family/divisibility mismatch at p = {p}");
        assert!(!divides, "unexpected non-ordinary CM prime p = {p} = 1 (mod 3)");
    }
    verdict(
        "7c",
        true,
        "for p = 1 (mod 3), p <= 97: polynomial zero iff p | b'(p) (never in range)",
    );
}

#[test]
fn criterion_08_q_congruence() {
    let start = Instant::now();
    for n in [3u64, 5, 7, 11, 13] {
        let r = qcong::verify_q_congruence(n, qcong::DEFAULT_N_CAP).unwrap();
        assert!(r.pass, "cleared congruence failed at prime n = {n}");
    }
    verdict("8a", true, "cleared congruence holds exactly for n in {3,5,7,11,13}");

    for n in [9u64, 15] {
        let r = qcong::verify_q_congruence(n, qcong::DEFAULT_N_CAP).unwrap();
        println!(
            "criterion 8b: REPORT -- composite n = {n}: lhs - rhs {} (no assertion)",
            if r.pass { "vanishes" } else { "does not vanish" }
        );
    }

    for n in (3..=15u64).step_by(2) {
        let r = qcong::verify_prefactor(n).unwrap();
        assert!(r.pass, "prefactor identity failed at n = {n}");
    }
    let elapsed = start.elapsed();
    verdict("8c", true, "prefactor identity holds for all odd 3 <= n <= 15");
    verdict("8d", elapsed.as_secs_f64() < 120.0, &format!("total {elapsed:?} (< 120 s)"));
}

#[test]
fn criterion_09_archimedean_identity() {
    let tab = level8_20000();
    let start = Instant::now();
    let report = analytic::verify_archimedean(
        tab,
        analytic::DEFAULT_N_TERMS,
        analytic::DEFAULT_M_TERMS,
        analytic::DEFAULT_TOLERANCE,
    )
    .unwrap();
    let elapsed = start.elapsed();
    verdict(
        "9a",
        report.pass,
        &format!(
            "lhs = {:.12}, rhs = {:.12}, relative difference {:.3e} (tol 1e-5)",
            report.lhs, report.rhs, report.relative_difference
        ),
    );
    verdict("9b", elapsed.as_secs_f64() < 30.0, &format!("took {elapsed:?} (< 30 s)"));
}

#[test]
fn criterion_10_plumbing() {
    // Hecke relations, both forms, N = 20000
    let hecke8 = qseries::hecke_check(level8_20000(), 20000).unwrap();
    verdict("10a", hecke8.pass, "Hecke relations clean to 20000 for the level-8 form");
    let hecke_cm = qseries::hecke_check(cm_20000(), 20000).unwrap();
    verdict("10b", hecke_cm.pass, "Hecke relations clean to 20000 for eta(3 tau)^8");

    // bit-exact cache round trip
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("roundtrip.etac");
    qseries::save_table(level8_20000(), &path).unwrap();
    let loaded = qseries::load_table(&path).unwrap();
    verdict("10c", &loaded == level8_20000(), "cache round trip is bit-exact at N = 20000");

    // naive-expansion oracle to 500, both forms
    let mut naive_ok = true;
    for desc in [EtaQuotient::level8_weight4(), EtaQuotient::eta3_8_cm()] {
        let tab = qseries::expand_eta_quotient(&desc, 500).unwrap();
        naive_ok &= tab.values() == common::naive_expand(&desc, 500).as_slice();
    }
    verdict("10d", naive_ok, "identity-based expansion matches the naive product to N = 500");

    // exact-rational truncated sums, p <= 13, all powers
    let mut rational_ok = true;
    for p in [3u64, 5, 7, 11, 13] {
        for power in 1..=3u32 {
            let engine = hypersums::truncated_sum(p, power, &HyperParams::half_half())
                .unwrap()
                .value();
            let oracle =
                common::rational_truncated_sum_mod(p, power, [(1, 2), (1, 2), (1, 2), (1, 2)]);
            rational_ok &= engine == oracle;
            if p > 3 {
                let engine =
                    hypersums::truncated_sum(p, power, &HyperParams::quarter_third())
                        .unwrap()
                        .value();
                let oracle = common::rational_truncated_sum_mod(
                    p,
                    power,
                    [(1, 4), (1, 3), (2, 3), (3, 4)],
                );
                rational_ok &= engine == oracle;
            }
        }
    }
    verdict("10e", rational_ok, "residue-ring sums match exact-rational oracle for p <= 13");

    // integer-vs-modular Q_p, p <= 13
    let mut qp_ok = true;
    for p in [3u64, 5, 7, 11, 13] {
        let reduced =
            polyfp::build_qp_integer(p, polyfp::DEFAULT_INTEGER_PRIME_CAP).unwrap().reduce_mod(p);
        qp_ok &= reduced == polyfp::build_qp_mod_p(p).unwrap();
    }
    verdict("10f", qp_ok, "integer Q_p reduced mod p matches the native F_p construction");
}
