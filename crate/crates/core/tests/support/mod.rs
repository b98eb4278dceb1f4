//! Independent oracles and generators shared by the integration tests.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use radicalc_core::sumalg::RadicalTerm;

pub const PRIMES_TO_50: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn pow2(e: i64) -> BigRational {
    let one = BigInt::one();
    if e >= 0 {
        BigRational::from_integer(one << e as usize)
    } else {
        BigRational::new(one, BigInt::one() << (-e) as usize)
    }
}

/// Largest `r` with `r^m <= n`, by bisection with exact powers.
pub fn floor_root(n: &BigUint, m: u32) -> BigUint {
    let mut lo = BigUint::zero();
    let mut hi = BigUint::one() << (n.bits() / m as u64 + 1);
    while &lo + 1u32 < hi {
        let mid: BigUint = (&lo + &hi) >> 1;
        if mid.pow(m) <= *n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Bracket `[lo, hi]` of `b^(1/m)` with `hi - lo = 2^-k`.
pub fn root_bracket(b: &BigRational, m: u32, k: usize) -> (BigRational, BigRational) {
    assert!(b.is_positive());
    // floor(b * 2^(mk)) has the same m-th root floor as b * 2^(mk)
    let scaled = (b * BigRational::from_integer(BigInt::one() << (m as usize * k))).floor();
    let n = scaled.to_integer().to_biguint().unwrap();
    let r = floor_root(&n, m);
    let den = BigInt::one() << k;
    let lo = BigRational::new(BigInt::from(r.clone()), den.clone());
    let hi = BigRational::new(BigInt::from(r + 1u32), den);
    debug_assert!(lo.pow(m as i32) <= *b && *b < hi.pow(m as i32));
    (lo, hi)
}

/// Direct interval value of `sum c_i b_i^(1/m_i)` without any simplification.
pub fn direct_interval(terms: &[RadicalTerm], k: usize) -> (BigRational, BigRational) {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for t in terms {
        let (l, h) = root_bracket(&t.radicand, t.index as u32, k);
        if t.coeff.is_negative() {
            lo += &t.coeff * &h;
            hi += &t.coeff * &l;
        } else {
            lo += &t.coeff * &l;
            hi += &t.coeff * &h;
        }
    }
    (lo, hi)
}

fn random_smooth(rng: &mut ChaCha8Rng) -> BigInt {
    let mut n = BigInt::one();
    for _ in 0..rng.gen_range(0..=2) {
        let p = PRIMES_TO_50[rng.gen_range(0..PRIMES_TO_50.len())];
        n *= BigInt::from(p).pow(rng.gen_range(1..=3));
    }
    n
}

/// Radicand built from primes up to 50.
pub fn random_radicand(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(random_smooth(rng), random_smooth(rng))
}

/// Coefficient with `|num|, den <= 100`.
pub fn random_coeff(rng: &mut ChaCha8Rng) -> BigRational {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-100i64..=100);
    }
    q(n, rng.gen_range(1..=100))
}

/// At most five terms, primes up to 50, indices up to 12.
pub fn random_terms(rng: &mut ChaCha8Rng) -> Vec<RadicalTerm> {
    (0..rng.gen_range(1..=5))
        .map(|_| RadicalTerm::new(random_coeff(rng), random_radicand(rng), rng.gen_range(1..=12)))
        .collect()
}
