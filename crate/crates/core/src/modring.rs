//! Exact modular arithmetic over moduli up to 2^62: primes and prime powers.
//!
//! `Residue` is the atom of all congruence work in the suite: a value in
//! `[0, m)` with its modulus attached. Products go through 128-bit
//! intermediates, and inverses use the extended Euclidean algorithm so that
//! prime-power moduli (p^2, p^3) are handled the same way as primes.
//!
//! Mixing residues with unequal moduli is a programming error: the operator
//! impls panic, and the `checked_*` methods return
//! [`Error::ModulusMismatch`] for callers that want a fallible path.

use crate::error::{Error, Result};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

/// Largest supported modulus, 2^62. Keeps every product inside u128.
pub const MAX_MODULUS: u64 = 1 << 62;

// ---------------------------------------------------------------------------
// Raw u64 kernel, shared with the dense polynomial code.
// ---------------------------------------------------------------------------

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b; // a, b < m <= 2^62, no overflow
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `x` mod `m` by extended gcd, or None when gcd(x, m) > 1.
pub(crate) fn inv_mod(x: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (x % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Reduce a signed integer into [0, m).
#[inline]
pub(crate) fn reduce_i64(x: i64, m: u64) -> u64 {
    (x as i128).rem_euclid(m as i128) as u64
}

fn check_modulus(m: u64) -> Result<()> {
    if !(2..=MAX_MODULUS).contains(&m) {
        return Err(Error::BadModulus(m));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Residue
// ---------------------------------------------------------------------------

/// An integer reduced into `[0, m)` with its modulus attached.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Residue {
    /// Reduce a signed integer into the ring Z/m.
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Residue { value: reduce_i64(value, modulus), modulus })
    }

    pub fn zero(modulus: u64) -> Result<Self> {
        Self::new(0, modulus)
    }

    pub fn one(modulus: u64) -> Result<Self> {
        Self::new(1, modulus)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Lift to the symmetric representative in (-m/2, m/2].
    pub fn signed_value(&self) -> i64 {
        if self.value * 2 > self.modulus {
            -((self.modulus - self.value) as i64)
        } else {
            self.value as i64
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_modulus(&self, rhs: &Residue) -> Result<u64> {
        if self.modulus != rhs.modulus {
            return Err(Error::ModulusMismatch { left: self.modulus, right: rhs.modulus });
        }
        Ok(self.modulus)
    }

    pub fn checked_add(&self, rhs: &Residue) -> Result<Residue> {
        let m = self.same_modulus(rhs)?;
        Ok(Residue { value: add_mod(self.value, rhs.value, m), modulus: m })
    }

    pub fn checked_sub(&self, rhs: &Residue) -> Result<Residue> {
        let m = self.same_modulus(rhs)?;
        Ok(Residue { value: sub_mod(self.value, rhs.value, m), modulus: m })
    }

    pub fn checked_mul(&self, rhs: &Residue) -> Result<Residue> {
        let m = self.same_modulus(rhs)?;
        Ok(Residue { value: mul_mod(self.value, rhs.value, m), modulus: m })
    }

    pub fn pow(&self, exp: u64) -> Residue {
        Residue { value: pow_mod(self.value, exp, self.modulus), modulus: self.modulus }
    }

    /// Multiplicative inverse; errors when the value shares a factor with m.
    pub fn inverse(&self) -> Result<Residue> {
        match inv_mod(self.value, self.modulus) {
            Some(v) => Ok(Residue { value: v, modulus: self.modulus }),
            None => Err(Error::NonInvertible {
                value: self.value as i64,
                modulus: self.modulus,
            }),
        }
    }

    /// Shift by a signed integer constant.
    pub fn add_int(&self, k: i64) -> Residue {
        Residue {
            value: add_mod(self.value, reduce_i64(k, self.modulus), self.modulus),
            modulus: self.modulus,
        }
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.checked_add(&rhs).expect("residue modulus mismatch")
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.checked_sub(&rhs).expect("residue modulus mismatch")
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.checked_mul(&rhs).expect("residue modulus mismatch")
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue { value: sub_mod(0, self.value, self.modulus), modulus: self.modulus }
    }
}

// ---------------------------------------------------------------------------
// Rational parameters
// ---------------------------------------------------------------------------

/// A reduced fraction with positive denominator; holds hypergeometric
/// parameters such as 1/2, 1/4, 1/3, 2/3, 3/4.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct RationalParam {
    numerator: i64,
    denominator: u64,
}

impl RationalParam {
    pub fn new(numerator: i64, denominator: i64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::BadRational(format!("{numerator}/0")));
        }
        let (mut n, mut d) = (numerator, denominator);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = gcd_u64(n.unsigned_abs(), d as u64);
        Ok(RationalParam { numerator: n / g as i64, denominator: d as u64 / g })
    }

    pub fn numerator(&self) -> i64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// 1 - self.
    pub fn complement(&self) -> RationalParam {
        // denominators are equal, the result is already reduced
        RationalParam {
            numerator: self.denominator as i64 - self.numerator,
            denominator: self.denominator,
        }
    }

    pub fn is_strictly_between_zero_and_one(&self) -> bool {
        self.numerator > 0 && (self.numerator as u64) < self.denominator
    }
}

impl fmt::Display for RationalParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

impl FromStr for RationalParam {
    type Err = Error;

    /// Strict `numerator/denominator` form; whitespace rejected.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadRational(s.to_string());
        let (n, d) = s.split_once('/').ok_or_else(bad)?;
        if n.contains(char::is_whitespace) || d.contains(char::is_whitespace) {
            return Err(bad());
        }
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        RationalParam::new(n, d)
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    if a == 0 {
        1
    } else {
        a
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Inverse of `x` modulo `m`, as a residue.
pub fn mod_inverse(x: i64, m: u64) -> Result<Residue> {
    check_modulus(m)?;
    let xr = reduce_i64(x, m);
    match inv_mod(xr, m) {
        Some(v) => Ok(Residue { value: v, modulus: m }),
        None => Err(Error::NonInvertible { value: x, modulus: m }),
    }
}

/// Embed a rational into Z/m: numerator * denominator^{-1} mod m.
pub fn rational_residue(r: &RationalParam, m: u64) -> Result<Residue> {
    let inv_den = mod_inverse(r.denominator as i64, m)?;
    let num = Residue::new(r.numerator, m)?;
    Ok(num * inv_den)
}

/// Pochhammer symbol x(x+1)...(x+k-1) in Z/m; k = 0 gives 1.
pub fn rising_factorial(x: Residue, k: u64) -> Residue {
    let m = x.modulus();
    let mut acc = 1u64 % m;
    let mut factor = x.value();
    for _ in 0..k {
        acc = mul_mod(acc, factor, m);
        factor = add_mod(factor, 1 % m, m);
    }
    Residue { value: acc, modulus: m }
}
