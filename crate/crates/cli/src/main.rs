//! `nonord`: verification suite for divisibility phenomena of weight-4
//! eta-quotient newforms.
//!
//! Every subcommand prints one JSON record per check to stdout and exits 0
//! when all checks pass, 1 when any check fails, and 2 on usage or
//! configuration errors.

use clap::{Parser, Subcommand};
use nonord_cli::{cache, forms, suite};
use nonord_core::analytic;
use nonord_core::hypersums::{self, HyperParams};
use nonord_core::modring::RationalParam;
use nonord_core::polyfp;
use nonord_core::qcong;
use nonord_core::qseries;
use nonord_core::report::Report;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "nonord", version, about = "Verification suite for non-ordinary primes of weight-4 eta-quotient newforms")]
struct Cli {
    /// Cache directory (falls back to $NONORD_CACHE_DIR, then ./.nonord-cache)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand an eta quotient to a coefficient table and save it
    Expand {
        /// 8-4, 9-4-cm, or an explicit "(d,r);(d,r)" factor list
        #[arg(long, default_value = "8-4")]
        form: String,
        /// Number of coefficients b(1..N)
        #[arg(long)]
        limit: usize,
        /// Output path for the binary table (defaults into the cache)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also export `n,b` rows as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// List non-ordinary primes p <= bound for a form
    Search {
        #[arg(long)]
        bound: usize,
        #[arg(long, default_value = "8-4")]
        form: String,
    },
    /// Truncated-sum congruence sweep against b(p) over odd primes <= pmax
    Vanhamme {
        #[arg(long)]
        pmax: u64,
        /// Prime power 1..=3 for the modulus p^power
        #[arg(long, default_value_t = 3)]
        power: u32,
    },
    /// Build Q_p mod p; check the divisibility criterion and companion
    Qp {
        #[arg(long)]
        p: u64,
        /// Also build the exact integer Q_p (small p only) and cross-check
        #[arg(long)]
        integer: bool,
        /// Dump the mod-p coefficients as CSV `degree,coefficient`
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Build the family polynomial for parameters (s1, s2) at one prime
    Family {
        /// First parameter as a strict fraction, e.g. 1/4
        #[arg(long)]
        s1: String,
        /// Second parameter as a strict fraction, e.g. 1/3
        #[arg(long)]
        s2: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exact cyclotomic q-congruence and prefactor identity at one odd n
    Qcong {
        #[arg(long)]
        n: u64,
        /// Only the prefactor identity, skip the full congruence
        #[arg(long)]
        prefactor_only: bool,
        /// Dump lhs - rhs cells as CSV on failure forensics
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Numeric Archimedean identity: hypergeometric sum vs 16 L(f,2)/pi^2
    Lvalue {
        #[arg(long, default_value_t = analytic::DEFAULT_N_TERMS)]
        terms: usize,
        #[arg(long, default_value_t = analytic::DEFAULT_M_TERMS)]
        cutoff: usize,
        #[arg(long, default_value_t = analytic::DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Run the whole verification suite
    All {
        /// Also write the aggregate report document here
        #[arg(long)]
        report: Option<PathBuf>,
        /// Worker threads for the prime sweeps (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
        /// Reduced-bound overrides for smoke runs; defaults reproduce the
        /// full acceptance configuration
        #[arg(long)]
        search_bound: Option<usize>,
        #[arg(long)]
        vanhamme_pmax: Option<u64>,
        #[arg(long)]
        qp_pmax: Option<u64>,
        #[arg(long)]
        family_pmax: Option<u64>,
        #[arg(long)]
        qcong_cap: Option<u64>,
        #[arg(long)]
        lvalue_terms: Option<usize>,
        #[arg(long)]
        lvalue_cutoff: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache_dir = cache::resolve_cache_dir(cli.cache_dir.clone());
    match run(cli, cache_dir) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("nonord: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(report: &Report) {
    println!("{}", report.to_json_line());
}

/// An odd-prime argument check shared by the subcommands that take --p.
fn require_odd_prime(p: u64) -> Result<(), nonord_core::Error> {
    if p < 3 || p.is_multiple_of(2) || !nonord_core::primes::is_prime(p) {
        return Err(nonord_core::Error::BadPrime { p, reason: "p must be an odd prime" });
    }
    Ok(())
}

fn parse_rational(s: &str) -> Result<RationalParam, nonord_core::Error> {
    s.parse::<RationalParam>()
}

fn run(cli: Cli, cache_dir: PathBuf) -> Result<bool, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Expand { form, limit, out, csv } => {
            let desc = forms::parse_form(&form)?;
            let start = Instant::now();
            let cached = cache::load_or_build(&desc, limit, &cache_dir)?;
            let path = match out {
                Some(p) => {
                    qseries::save_table(&cached.table, &p)?;
                    p
                }
                None => cached.path.clone(),
            };
            if let Some(csv_path) = csv {
                qseries::export_csv(&cached.table, &csv_path)?;
            }
            emit(
                &Report::new("expand")
                    .param("form", desc.to_string())
                    .param("limit", limit)
                    .pass(true)
                    .witness(json!({
                        "source": if cached.from_cache { "cache" } else { "built" },
                        "path": path.display().to_string(),
                        "q_shift": desc.q_shift(),
                    }))
                    .runtime(start.elapsed().as_millis() as u64),
            );
            Ok(true)
        }
        Command::Search { bound, form } => {
            let desc = forms::parse_form(&form)?;
            let start = Instant::now();
            let cached = cache::load_or_build(&desc, bound, &cache_dir)?;
            let report = hypersums::search_report(&cached.table, bound, None)?
                .runtime(start.elapsed().as_millis() as u64);
            emit(&report);
            Ok(report.pass)
        }
        Command::Vanhamme { pmax, power } => {
            if !(1..=3).contains(&power) {
                return Err("power must be 1, 2, or 3".into());
            }
            let limit = (pmax as usize).max(1000);
            let cached =
                cache::load_or_build(&qseries::EtaQuotient::level8_weight4(), limit, &cache_dir)?;
            let mut all_pass = true;
            for p in nonord_core::primes::primes_up_to(pmax).into_iter().filter(|&p| p > 2) {
                let report = suite::timed(|| hypersums::congruence_check(p, power, &cached.table))?;
                all_pass &= report.pass;
                emit(&report);
            }
            Ok(all_pass)
        }
        Command::Qp { p, integer, csv } => {
            require_odd_prime(p)?;
            let limit = (p as usize).max(1000);
            let cached =
                cache::load_or_build(&qseries::EtaQuotient::level8_weight4(), limit, &cache_dir)?;
            let mut all_pass = true;
            let equivalence = suite::timed(|| polyfp::divisibility_equivalence(p, &cached.table))?;
            all_pass &= equivalence.pass;
            emit(&equivalence);
            let companion = suite::timed(|| polyfp::companion_check(p, &cached.table))?;
            all_pass &= companion.pass;
            emit(&companion);
            if let Some(csv_path) = csv {
                polyfp::build_qp_mod_p(p)?.export_csv(&csv_path)?;
            }
            if integer {
                let start = Instant::now();
                let q = polyfp::build_qp_integer(p, polyfp::DEFAULT_INTEGER_PRIME_CAP)?;
                let matches = q.reduce_mod(p) == polyfp::build_qp_mod_p(p)?;
                all_pass &= matches;
                emit(
                    &Report::new("qp_integer")
                        .param("p", p)
                        .pass(matches)
                        .witness(json!({
                            "degree": q.degree(),
                            "constant_term": q.constant_term().to_string(),
                            "leading_coefficient": q.leading_coefficient().to_string(),
                            "matches_mod_p_route": matches,
                        }))
                        .runtime(start.elapsed().as_millis() as u64),
                );
            }
            Ok(all_pass)
        }
        Command::Family { s1, s2, p, csv } => {
            let params = HyperParams::new(parse_rational(&s1)?, parse_rational(&s2)?)?;
            require_odd_prime(p)?;
            let start = Instant::now();
            let fam = polyfp::build_family_mod_p(p, &params)?;
            if let Some(csv_path) = csv {
                fam.export_csv(&csv_path)?;
            }
            emit(
                &Report::new("family_polynomial")
                    .param("p", p)
                    .param("s1", params.s1().to_string())
                    .param("s2", params.s2().to_string())
                    .pass(true)
                    .witness(json!({
                        "all_coeffs_divisible": polyfp::all_coeffs_divisible(&fam),
                        "degree": fam.degree(),
                        "constant_term": fam.constant_term(),
                    }))
                    .runtime(start.elapsed().as_millis() as u64),
            );
            Ok(true)
        }
        Command::Qcong { n, prefactor_only, csv } => {
            let mut all_pass = true;
            let prefactor = suite::timed(|| qcong::verify_prefactor(n))?;
            all_pass &= prefactor.pass;
            emit(&prefactor);
            if !prefactor_only {
                let report = suite::timed(|| qcong::verify_q_congruence(n, qcong::DEFAULT_N_CAP))?;
                all_pass &= report.pass;
                if csv.is_some() || !report.pass {
                    let (lhs, rhs) = qcong::build_congruence_sides(n)?;
                    let ring = qcong::CycRing::new(n)?;
                    let diff = ring.sub(&lhs, &rhs);
                    if let Some(csv_path) = csv {
                        diff.export_csv(&csv_path)?;
                    }
                }
                emit(&report);
            }
            Ok(all_pass)
        }
        Command::Lvalue { terms, cutoff, tol } => {
            if terms == 0 || cutoff == 0 || tol <= 0.0 {
                return Err("terms, cutoff, and tol must be positive".into());
            }
            let limit = cutoff.max(1000);
            let cached =
                cache::load_or_build(&qseries::EtaQuotient::level8_weight4(), limit, &cache_dir)?;
            let report =
                suite::timed(|| Ok(analytic::verify_archimedean(&cached.table, terms, cutoff, tol)?.into_report()))?;
            emit(&report);
            Ok(report.pass)
        }
        Command::All {
            report,
            jobs,
            search_bound,
            vanhamme_pmax,
            qp_pmax,
            family_pmax,
            qcong_cap,
            lvalue_terms,
            lvalue_cutoff,
        } => {
            let mut config = suite::SuiteConfig { cache_dir, ..Default::default() };
            if let Some(v) = search_bound {
                config.search_bound = v;
            }
            if let Some(v) = vanhamme_pmax {
                config.vanhamme_pmax = v;
            }
            if let Some(v) = qp_pmax {
                config.qp_pmax = v;
            }
            if let Some(v) = family_pmax {
                config.family_pmax = v;
            }
            if let Some(v) = qcong_cap {
                config.qcong_cap = v;
            }
            if let Some(v) = lvalue_terms {
                config.lvalue_terms = v;
            }
            if let Some(v) = lvalue_cutoff {
                config.lvalue_cutoff = v;
            }
            config.jobs = jobs;
            config.validate()?;
            if let Some(width) = config.jobs {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(width)
                    .build_global()
                    .map_err(|e| format!("thread pool: {e}"))?;
            }
            let mut reports = Vec::new();
            let pass = suite::run_all(&config, &mut |r: &Report| {
                emit(r);
                reports.push(r.clone());
            })?;
            if let Some(path) = report {
                let doc = json!({
                    "suite": "all",
                    "pass": pass,
                    "reports": reports,
                });
                std::fs::write(&path, serde_json::to_string_pretty(&doc)?)?;
            }
            Ok(pass)
        }
    }
}
