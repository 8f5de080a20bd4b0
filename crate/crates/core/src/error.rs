//! Error type shared by all verification kernels.

use std::fmt;
use std::io;

#[derive(Debug)]
pub enum Error {
    /// gcd(x, m) > 1, so x has no inverse mod m. Usually signals a rational
    /// parameter whose denominator collides with the prime under test.
    NonInvertible { value: i64, modulus: u64 },
    /// Arithmetic between residues with different moduli.
    ModulusMismatch { left: u64, right: u64 },
    /// Modulus outside the supported range [2, 2^62].
    BadModulus(u64),
    /// p is not an odd prime, or it divides a parameter denominator.
    BadPrime { p: u64, reason: &'static str },
    /// Requested series length exceeds the configured memory budget.
    LimitTooLarge { requested: usize, budget: usize },
    /// Eta-quotient descriptor is malformed (non-integer q-shift, bad exponent).
    InvalidDescriptor(String),
    /// A coefficient left the signed 64-bit range during expansion.
    Overflow { index: usize },
    /// Coefficient table does not extend far enough for the requested check.
    TableTooShort { needed: usize, have: usize },
    /// Parameter exceeds a configured cap (small-prime integer build, qcong n).
    CapExceeded { value: u64, cap: u64 },
    /// n must be odd and >= 3 for the cyclotomic-ring checks.
    InvalidN(u64),
    /// Malformed rational literal.
    BadRational(String),
    Io(io::Error),
    /// Cache file has a bad magic, version, or is truncated.
    FormatMismatch(String),
    ChecksumMismatch { expected: u32, actual: u32 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonInvertible { value, modulus } => {
                write!(f, "{value} is not invertible modulo {modulus}")
            }
            Error::ModulusMismatch { left, right } => {
                write!(f, "modulus mismatch: {left} vs {right}")
            }
            Error::BadModulus(m) => write!(f, "modulus {m} outside supported range [2, 2^62]"),
            Error::BadPrime { p, reason } => write!(f, "bad prime {p}: {reason}"),
            Error::LimitTooLarge { requested, budget } => {
                write!(f, "series limit {requested} exceeds budget {budget}")
            }
            Error::InvalidDescriptor(msg) => write!(f, "invalid eta-quotient descriptor: {msg}"),
            Error::Overflow { index } => {
                write!(f, "coefficient at index {index} exceeds signed 64-bit range")
            }
            Error::TableTooShort { needed, have } => {
                write!(f, "coefficient table too short: need b(1..{needed}), have b(1..{have})")
            }
            Error::CapExceeded { value, cap } => {
                write!(f, "parameter {value} exceeds configured cap {cap}")
            }
            Error::InvalidN(n) => write!(f, "n = {n} must be odd and >= 3"),
            Error::BadRational(s) => write!(f, "malformed rational '{s}'"),
            Error::Io(e) => write!(f, "io error: {e}"),
            Error::FormatMismatch(msg) => write!(f, "cache format mismatch: {msg}"),
            Error::ChecksumMismatch { expected, actual } => {
                write!(f, "cache checksum mismatch: expected {expected:#010x}, got {actual:#010x}")
            }
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(e: io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
