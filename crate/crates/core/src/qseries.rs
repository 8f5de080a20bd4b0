//! Eta-quotient q-expansions: exact Fourier coefficients b(1..N) with
//! persistence and eigenform sanity checks.
//!
//! Factors (1-q^{dm})^r are decomposed into cubes (Jacobi's identity) and
//! single Euler factors (pentagonal number theorem), both sparse with
//! O(sqrt(N)) terms, then convolved into a dense table. Coefficients are
//! signed 64-bit with overflow detection; arbitrary precision is
//! deliberately excluded here.
//!
//! Cache format (little-endian): magic `ETAC`, version u32 = 1,
//! factor-count u32, per factor (d: u32, r: u32), N: u64, then N signed
//! 64-bit coefficients b(1)..b(N), then CRC32 of all preceding bytes.

use crate::error::{Error, Result};
use crate::primes::primes_up_to;
use crate::report::Report;
use serde_json::json;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

/// Hard budget on dense table length: 2^28 coefficients = 2 GiB of i64.
pub const LIMIT_BUDGET: usize = 1 << 28;

// ---------------------------------------------------------------------------
// Descriptors
// ---------------------------------------------------------------------------

/// Product of factors eta(d tau)^r with all exponents positive.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct EtaQuotient {
    factors: Vec<(u32, u32)>,
}

impl EtaQuotient {
    pub fn new(factors: Vec<(u32, u32)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidDescriptor("empty factor list".into()));
        }
        let mut weight24: u64 = 0;
        for &(d, r) in &factors {
            if d == 0 {
                return Err(Error::InvalidDescriptor("scale d must be positive".into()));
            }
            if r == 0 {
                return Err(Error::InvalidDescriptor(
                    "exponent r must be >= 1 (negative or zero exponents unsupported)".into(),
                ));
            }
            weight24 += d as u64 * r as u64;
        }
        if !weight24.is_multiple_of(24) {
            return Err(Error::InvalidDescriptor(format!(
                "q-shift sum(d*r)/24 = {weight24}/24 is not an integer"
            )));
        }
        Ok(EtaQuotient { factors })
    }

    /// The weight-4 newform on Gamma_0(8): eta(2 tau)^4 eta(4 tau)^4.
    pub fn level8_weight4() -> Self {
        EtaQuotient::new(vec![(2, 4), (4, 4)]).unwrap()
    }

    /// The CM form eta(3 tau)^8 = f_{1/4,1/3}.
    pub fn eta3_8_cm() -> Self {
        EtaQuotient::new(vec![(3, 8)]).unwrap()
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    /// q-shift h = sum(d*r)/24; the expansion starts at q^h.
    pub fn q_shift(&self) -> usize {
        let s: u64 = self.factors.iter().map(|&(d, r)| d as u64 * r as u64).sum();
        (s / 24) as usize
    }

    /// Weight k = sum(r)/2 (2 per eta to the first power... r/2 per factor).
    pub fn weight_times_two(&self) -> u64 {
        self.factors.iter().map(|&(_, r)| r as u64).sum()
    }

    /// Primes dividing some scale d; these support the level of the form and
    /// carry degenerate Euler factors.
    pub fn level_support_primes(&self) -> Vec<u64> {
        let mut out: Vec<u64> = Vec::new();
        for &(d, _) in &self.factors {
            let mut d = d as u64;
            let mut p = 2;
            while p * p <= d {
                if d.is_multiple_of(p) {
                    out.push(p);
                    while d.is_multiple_of(p) {
                        d /= p;
                    }
                }
                p += 1;
            }
            if d > 1 {
                out.push(d);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Canonical short name used for cache files.
    pub fn cache_stem(&self) -> String {
        let mut s = String::from("eta");
        for &(d, r) in &self.factors {
            s.push_str(&format!("_{d}x{r}"));
        }
        s
    }
}

impl std::fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> =
            self.factors.iter().map(|&(d, r)| format!("({d},{r})")).collect();
        write!(f, "{}", parts.join(";"))
    }
}

// ---------------------------------------------------------------------------
// Sparse series
// ---------------------------------------------------------------------------

/// Ordered sparse power series: (exponent, coefficient) with strictly
/// increasing exponents and no stored zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseSeries {
    terms: Vec<(usize, i64)>,
}

impl SparseSeries {
    fn new(terms: Vec<(usize, i64)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|&(_, c)| c != 0));
        SparseSeries { terms }
    }

    pub fn terms(&self) -> &[(usize, i64)] {
        &self.terms
    }

    pub fn coefficient(&self, exponent: usize) -> i64 {
        match self.terms.binary_search_by_key(&exponent, |t| t.0) {
            Ok(i) => self.terms[i].1,
            Err(_) => 0,
        }
    }

    /// Substitute q -> q^d, dropping terms at or beyond `limit`.
    fn rescale(&self, d: usize, limit: usize) -> SparseSeries {
        SparseSeries::new(
            self.terms
                .iter()
                .filter_map(|&(e, c)| {
                    let ed = e.checked_mul(d)?;
                    (ed < limit).then_some((ed, c))
                })
                .collect(),
        )
    }
}

fn check_limit(n: usize) -> Result<()> {
    if n > LIMIT_BUDGET {
        return Err(Error::LimitTooLarge { requested: n, budget: LIMIT_BUDGET });
    }
    Ok(())
}

/// Pentagonal expansion of prod_{m>=1} (1 - q^m), truncated below exponent N.
///
/// Exponents are the generalized pentagonal numbers k(3k-1)/2 and k(3k+1)/2
/// with sign (-1)^k.
pub fn euler_series(n: usize) -> Result<SparseSeries> {
    if n < 1 {
        return Err(Error::LimitTooLarge { requested: n, budget: LIMIT_BUDGET });
    }
    check_limit(n)?;
    let mut terms = vec![(0usize, 1i64)];
    let mut k = 1usize;
    loop {
        let e1 = k * (3 * k - 1) / 2;
        if e1 >= n {
            break;
        }
        let sign = if k.is_multiple_of(2) { 1 } else { -1 };
        terms.push((e1, sign));
        let e2 = k * (3 * k + 1) / 2;
        if e2 < n {
            terms.push((e2, sign));
        }
        k += 1;
    }
    terms.sort_unstable_by_key(|t| t.0);
    Ok(SparseSeries::new(terms))
}

/// Jacobi's expansion of prod (1 - q^m)^3 = sum (-1)^k (2k+1) q^{k(k+1)/2}.
pub fn eta_cube_series(n: usize) -> Result<SparseSeries> {
    if n < 1 {
        return Err(Error::LimitTooLarge { requested: n, budget: LIMIT_BUDGET });
    }
    check_limit(n)?;
    let mut terms = Vec::new();
    let mut k = 0usize;
    loop {
        let e = k * (k + 1) / 2;
        if e >= n {
            break;
        }
        let c = (2 * k + 1) as i64;
        terms.push((e, if k.is_multiple_of(2) { c } else { -c }));
        k += 1;
    }
    Ok(SparseSeries::new(terms))
}

/// Dense-by-sparse product truncated below `limit`, with overflow detection.
fn convolve_dense_sparse(dense: &[i64], sparse: &SparseSeries, limit: usize) -> Result<Vec<i64>> {
    let mut out = vec![0i64; limit];
    for &(e, c) in sparse.terms() {
        if e >= limit {
            break;
        }
        for (i, &x) in dense.iter().take(limit - e).enumerate() {
            if x != 0 {
                let prod = x.checked_mul(c).ok_or(Error::Overflow { index: i + e })?;
                let cell = &mut out[i + e];
                *cell = cell.checked_add(prod).ok_or(Error::Overflow { index: i + e })?;
            }
        }
    }
    Ok(out)
}

/// Sparse-by-sparse product truncated below `limit`.
fn convolve_sparse_sparse(
    a: &SparseSeries,
    b: &SparseSeries,
    limit: usize,
) -> Result<SparseSeries> {
    let mut dense = vec![0i64; limit];
    for &(ea, ca) in a.terms() {
        if ea >= limit {
            break;
        }
        for &(eb, cb) in b.terms() {
            let e = ea + eb;
            if e >= limit {
                break;
            }
            let prod = ca.checked_mul(cb).ok_or(Error::Overflow { index: e })?;
            dense[e] = dense[e].checked_add(prod).ok_or(Error::Overflow { index: e })?;
        }
    }
    Ok(SparseSeries::new(
        dense.into_iter().enumerate().filter(|&(_, c)| c != 0).collect(),
    ))
}

// ---------------------------------------------------------------------------
// Coefficient tables
// ---------------------------------------------------------------------------

/// Dense table of Fourier coefficients b(1..N) for an eta quotient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoeffTable {
    descriptor: EtaQuotient,
    values: Vec<i64>, // values[i] = b(i+1)
}

impl CoeffTable {
    pub fn descriptor(&self) -> &EtaQuotient {
        &self.descriptor
    }

    pub fn limit(&self) -> usize {
        self.values.len()
    }

    /// b(n), 1-based; panics when n is out of range.
    pub fn b(&self, n: usize) -> i64 {
        self.values[n - 1]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn require(&self, needed: usize) -> Result<()> {
        if self.limit() < needed {
            return Err(Error::TableTooShort { needed, have: self.limit() });
        }
        Ok(())
    }
}

/// Exact b(1..N) for the given eta quotient.
///
/// Each prod (1-q^{dm})^r is split into (r div 3) Jacobi cubes and (r mod 3)
/// Euler factors, rescaled q -> q^d; the sparse factors are convolved
/// smallest-first, then folded into a dense array.
pub fn expand_eta_quotient(desc: &EtaQuotient, n: usize) -> Result<CoeffTable> {
    check_limit(n)?;
    let h = desc.q_shift();
    if n < h {
        return Err(Error::TableTooShort { needed: h, have: n });
    }
    // product part is needed below exponent n - h + 1 so that q^h * product
    // reaches q^n
    let limit = n - h + 1;
    let mut sparse_factors: Vec<SparseSeries> = Vec::new();
    for &(d, r) in desc.factors() {
        let cubes = (r / 3) as usize;
        let singles = (r % 3) as usize;
        // base series need ceil(limit / d) coefficients before rescaling
        let base_n = limit.div_ceil(d as usize);
        for _ in 0..cubes {
            sparse_factors.push(eta_cube_series(base_n)?.rescale(d as usize, limit));
        }
        for _ in 0..singles {
            sparse_factors.push(euler_series(base_n)?.rescale(d as usize, limit));
        }
    }
    // pair up the smallest factors first, but only while the product stays
    // genuinely sparse; each dense pass below costs N * terms(factor), so
    // merging bigger factors would trade O(sqrt N) passes for an O(N) one
    sparse_factors.sort_by_key(|s| s.terms().len());
    while sparse_factors.len() > 1 {
        let a = &sparse_factors[0];
        let b = &sparse_factors[1];
        if a.terms().len().saturating_mul(b.terms().len()) > 4096 {
            break;
        }
        let prod = convolve_sparse_sparse(a, b, limit)?;
        sparse_factors.remove(1);
        sparse_factors[0] = prod;
        sparse_factors.sort_by_key(|s| s.terms().len());
    }
    let mut dense = vec![0i64; limit];
    dense[0] = 1;
    for s in &sparse_factors {
        dense = convolve_dense_sparse(&dense, s, limit)?;
    }
    // shift by q^h: b(n) = dense[n - h]
    let mut values = vec![0i64; n];
    values[h - 1..].copy_from_slice(&dense[..n - h + 1]);
    let table = CoeffTable { descriptor: desc.clone(), values };
    debug_assert_eq!(table.b(h), 1, "leading coefficient must be 1");
    Ok(table)
}

// ---------------------------------------------------------------------------
// Eigenform sanity checks
// ---------------------------------------------------------------------------

/// Number of divisors of n.
pub fn divisor_count(n: usize) -> usize {
    let mut c = 0;
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            c += if i * i == n { 1 } else { 2 };
        }
        i += 1;
    }
    c
}

/// Verify Hecke eigenform relations on a coefficient table:
/// b(mn) = b(m) b(n) for coprime m, n with mn <= bound, and
/// b(p^2) = b(p)^2 - p^3 for primes p away from the level with p^2 <= bound.
/// The Deligne-style envelope |b(n)| <= d(n) n^{3/2} is checked alongside.
/// Violations are report content, not errors.
pub fn hecke_check(tab: &CoeffTable, bound: usize) -> Result<Report> {
    tab.require(bound)?;
    let bad_primes = tab.descriptor().level_support_primes();
    let mut violations: Vec<serde_json::Value> = Vec::new();
    let mut checked: u64 = 0;

    if tab.b(tab.descriptor().q_shift()) != 1 {
        violations.push(json!({"kind": "normalisation", "n": tab.descriptor().q_shift()}));
    }
    for m in 2..=bound {
        if m * m > bound {
            break;
        }
        for n in (m + 1)..=(bound / m) {
            if gcd(m as u64, n as u64) == 1 {
                checked += 1;
                let lhs = tab.b(m * n) as i128;
                let rhs = tab.b(m) as i128 * tab.b(n) as i128;
                if lhs != rhs {
                    violations.push(json!({
                        "kind": "multiplicativity", "m": m, "n": n,
                        "b_mn": tab.b(m * n), "b_m_b_n": rhs.to_string(),
                    }));
                }
            }
        }
    }
    for p in primes_up_to((bound as f64).sqrt() as u64 + 1) {
        let p2 = (p * p) as usize;
        if p2 > bound || bad_primes.contains(&p) {
            continue;
        }
        checked += 1;
        let lhs = tab.b(p2) as i128;
        let rhs = tab.b(p as usize) as i128 * tab.b(p as usize) as i128 - (p as i128).pow(3);
        if lhs != rhs {
            violations.push(json!({
                "kind": "prime_square", "p": p,
                "b_p2": tab.b(p2), "b_p_sq_minus_p3": rhs.to_string(),
            }));
        }
    }
    for n in 1..=bound {
        let bound_val = divisor_count(n) as f64 * (n as f64).powf(1.5);
        if (tab.b(n) as f64).abs() > bound_val {
            violations.push(json!({"kind": "deligne_envelope", "n": n, "b_n": tab.b(n)}));
        }
    }

    let pass = violations.is_empty();
    Ok(Report::new("hecke_check")
        .param("form", tab.descriptor().to_string())
        .param("bound", bound)
        .pass(pass)
        .witness(json!({
            "relations_checked": checked,
            "violations": violations,
        })))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

const MAGIC: &[u8; 4] = b"ETAC";
const VERSION: u32 = 1;

/// Write the table in the binary cache format (see module docs).
pub fn save_table(tab: &CoeffTable, path: &Path) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    let mut hasher = crc32fast::Hasher::new();
    let mut emit = |w: &mut BufWriter<File>, bytes: &[u8]| -> Result<()> {
        hasher.update(bytes);
        w.write_all(bytes)?;
        Ok(())
    };
    emit(&mut w, MAGIC)?;
    emit(&mut w, &VERSION.to_le_bytes())?;
    emit(&mut w, &(tab.descriptor().factors().len() as u32).to_le_bytes())?;
    for &(d, r) in tab.descriptor().factors() {
        emit(&mut w, &d.to_le_bytes())?;
        emit(&mut w, &r.to_le_bytes())?;
    }
    emit(&mut w, &(tab.limit() as u64).to_le_bytes())?;
    for &v in tab.values() {
        emit(&mut w, &v.to_le_bytes())?;
    }
    let crc = hasher.finalize();
    w.write_all(&crc.to_le_bytes())?;
    w.flush()?;
    Ok(())
}

/// Read a table back; bit-exact inverse of [`save_table`].
pub fn load_table(path: &Path) -> Result<CoeffTable> {
    let file = File::open(path)?;
    let mut r = BufReader::new(file);
    let mut hasher = crc32fast::Hasher::new();
    let mut take = |r: &mut BufReader<File>, buf: &mut [u8]| -> Result<()> {
        r.read_exact(buf).map_err(|e| {
            if e.kind() == std::io::ErrorKind::UnexpectedEof {
                Error::FormatMismatch("file truncated".into())
            } else {
                Error::Io(e)
            }
        })?;
        hasher.update(buf);
        Ok(())
    };
    let mut magic = [0u8; 4];
    take(&mut r, &mut magic)?;
    if &magic != MAGIC {
        return Err(Error::FormatMismatch("bad magic".into()));
    }
    let mut u32buf = [0u8; 4];
    take(&mut r, &mut u32buf)?;
    let version = u32::from_le_bytes(u32buf);
    if version != VERSION {
        return Err(Error::FormatMismatch(format!("unsupported version {version}")));
    }
    take(&mut r, &mut u32buf)?;
    let nfactors = u32::from_le_bytes(u32buf) as usize;
    if nfactors == 0 || nfactors > 64 {
        return Err(Error::FormatMismatch(format!("implausible factor count {nfactors}")));
    }
    let mut factors = Vec::with_capacity(nfactors);
    for _ in 0..nfactors {
        take(&mut r, &mut u32buf)?;
        let d = u32::from_le_bytes(u32buf);
        take(&mut r, &mut u32buf)?;
        let rr = u32::from_le_bytes(u32buf);
        factors.push((d, rr));
    }
    let mut u64buf = [0u8; 8];
    take(&mut r, &mut u64buf)?;
    let n = u64::from_le_bytes(u64buf) as usize;
    if n > LIMIT_BUDGET {
        return Err(Error::FormatMismatch(format!("table length {n} exceeds budget")));
    }
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        take(&mut r, &mut u64buf)?;
        values.push(i64::from_le_bytes(u64buf));
    }
    let expected = hasher.finalize();
    let mut crcbuf = [0u8; 4];
    r.read_exact(&mut crcbuf)
        .map_err(|_| Error::FormatMismatch("missing checksum".into()))?;
    let actual = u32::from_le_bytes(crcbuf);
    if actual != expected {
        return Err(Error::ChecksumMismatch { expected, actual });
    }
    let descriptor = EtaQuotient::new(factors)
        .map_err(|e| Error::FormatMismatch(format!("stored descriptor invalid: {e}")))?;
    Ok(CoeffTable { descriptor, values })
}

/// CSV export: header `n,b`, one row per n.
pub fn export_csv(tab: &CoeffTable, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "n,b")?;
    for (i, &v) in tab.values().iter().enumerate() {
        writeln!(w, "{},{}", i + 1, v)?;
    }
    w.flush()?;
    Ok(())
}
