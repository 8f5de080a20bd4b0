//! Shared test-side oracles, independent of the library's expansion and
//! summation paths.

use nonord_core::qseries::EtaQuotient;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Naive eta-quotient expansion: multiply every (1 - q^{dm})^r factor
/// directly, no pentagonal/Jacobi identities, then shift by q^h.
pub fn naive_expand(desc: &EtaQuotient, n: usize) -> Vec<i64> {
    let h = desc.q_shift();
    let limit = n - h + 1;
    let mut c = vec![0i64; limit];
    c[0] = 1;
    for &(d, r) in desc.factors() {
        let mut m = 1usize;
        while d as usize * m < limit {
            let e = d as usize * m;
            for _ in 0..r {
                for i in (e..limit).rev() {
                    c[i] -= c[i - e];
                }
            }
            m += 1;
        }
    }
    let mut b = vec![0i64; n];
    b[h - 1..].copy_from_slice(&c[..limit]);
    b
}

/// Exact-rational truncated hypergeometric sum
/// `sum_{k=0}^{p-1} prod_i (s_i)_k / k!^4`, reduced into Z/p^power.
pub fn rational_truncated_sum_mod(p: u64, power: u32, quad: [(i64, i64); 4]) -> u64 {
    let mut total = BigRational::one();
    let mut term = BigRational::one();
    for k in 1..p {
        for &(num, den) in &quad {
            term *= BigRational::new(BigInt::from(num + (k as i64 - 1) * den), BigInt::from(den));
        }
        term /= BigRational::from(BigInt::from(k)).pow(4);
        total += &term;
    }
    let m = BigInt::from(p.pow(power));
    let num = ((total.numer() % &m) + &m) % &m;
    let den = ((total.denom() % &m) + &m) % &m;
    assert!(!den.is_zero());
    let den_u: u64 = den.to_string().parse().unwrap();
    let num_u: u64 = num.to_string().parse().unwrap();
    let inv = inv_mod_u64(den_u, p.pow(power)).expect("denominator coprime to p");
    ((num_u as u128 * inv as u128) % p.pow(power) as u128) as u64
}

fn inv_mod_u64(x: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (x % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}
