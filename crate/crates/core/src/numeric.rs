//! Certified interval evaluation.
//!
//! An [`Approx`] is a dyadic midpoint `mantissa * 2^exponent` with a radius
//! of `error_ulps` units of `2^exponent`. Every operation widens the radius
//! enough to contain the exact result, so a value that falls outside an
//! interval is a proof of inequality. This is the oracle the symbolic code
//! is checked against; it can refute identities but never prove
//! irrationality.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyq::PolyQ;
use crate::radical::{CanonicalRadical, RadicalAtom};
use crate::sumalg::RadicalSum;

pub const DEFAULT_BITS: u32 = 128;
pub const MIN_BITS: u32 = 16;

/// Extra bits carried through intermediate products and sums.
const GUARD_BITS: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Approx {
    mantissa: BigInt,
    exponent: i64,
    error_ulps: BigUint,
}

fn pow2(e: i64) -> BigRational {
    let one = BigInt::one();
    if e >= 0 {
        BigRational::from_integer(one << e as usize)
    } else {
        BigRational::new(one, BigInt::one() << (-e) as usize)
    }
}

fn shl(x: &BigInt, k: u64) -> BigInt {
    x << k as usize
}

/// `floor(log2(q))` for `q > 0`.
pub fn floor_log2(q: &BigRational) -> i64 {
    debug_assert!(q.is_positive());
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    let mut k = n.bits() as i64 - d.bits() as i64;
    // 2^(k-1) < q < 2^(k+1); pick the side
    let at_least = |k: i64| -> bool {
        if k >= 0 {
            n >= &(d << k as usize)
        } else {
            (n << (-k) as usize) >= *d
        }
    };
    if !at_least(k) {
        k -= 1;
    }
    k
}

/// Smallest `k` with `q <= 2^k`, for `q > 0`.
pub fn ceil_log2(q: &BigRational) -> i64 {
    let f = floor_log2(q);
    if *q == pow2(f) {
        f
    } else {
        f + 1
    }
}

impl Approx {
    pub fn new(mantissa: BigInt, exponent: i64, error_ulps: BigUint) -> Self {
        Approx {
            mantissa,
            exponent,
            error_ulps,
        }
    }

    pub fn zero() -> Self {
        Approx::new(BigInt::zero(), 0, BigUint::zero())
    }

    pub fn exact_integer(n: BigInt) -> Self {
        Approx::new(n, 0, BigUint::zero())
    }

    /// A rational to `bits` significant bits; exact when the denominator is
    /// a power of two.
    pub fn from_rational(q: &BigRational, bits: u32) -> Self {
        if q.is_zero() {
            return Approx::zero();
        }
        let den = q.denom().magnitude();
        if den.count_ones() == 1 {
            let shift = den.trailing_zeros().unwrap_or(0) as i64;
            return Approx::new(q.numer().clone(), -shift, BigUint::zero());
        }
        let log = q.numer().magnitude().bits() as i64 - den.bits() as i64;
        let frac_bits = bits as i64 - log + 1;
        let (num, den) = if frac_bits >= 0 {
            (shl(q.numer(), frac_bits as u64), q.denom().clone())
        } else {
            (q.numer().clone(), shl(q.denom(), (-frac_bits) as u64))
        };
        let (m, r) = num.div_mod_floor(&den);
        let err = if r.is_zero() { 0u32 } else { 1u32 };
        Approx::new(m, -frac_bits, BigUint::from(err))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn error_ulps(&self) -> &BigUint {
        &self.error_ulps
    }

    pub fn is_exact(&self) -> bool {
        self.error_ulps.is_zero()
    }

    pub fn midpoint(&self) -> BigRational {
        BigRational::from_integer(self.mantissa.clone()) * pow2(self.exponent)
    }

    pub fn radius(&self) -> BigRational {
        BigRational::from_integer(self.error_ulps.clone().into()) * pow2(self.exponent)
    }

    pub fn lower(&self) -> BigRational {
        self.midpoint() - self.radius()
    }

    pub fn upper(&self) -> BigRational {
        self.midpoint() + self.radius()
    }

    pub fn width(&self) -> BigRational {
        self.radius() * BigRational::from_integer(2.into())
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        (q - self.midpoint()).abs() <= self.radius()
    }

    /// Upper bound on `|x|` over the interval.
    pub fn magnitude_bound(&self) -> BigRational {
        self.midpoint().abs() + self.radius()
    }

    /// True if the two intervals share a point.
    pub fn overlaps(&self, other: &Approx) -> bool {
        (self.midpoint() - other.midpoint()).abs() <= self.radius() + other.radius()
    }

    fn aligned(&self, exponent: i64) -> (BigInt, BigUint) {
        let k = (self.exponent - exponent) as usize;
        (&self.mantissa << k, &self.error_ulps << k)
    }

    pub fn add(&self, other: &Approx) -> Approx {
        let e = self.exponent.min(other.exponent);
        let (m1, e1) = self.aligned(e);
        let (m2, e2) = other.aligned(e);
        Approx::new(m1 + m2, e, e1 + e2)
    }

    pub fn neg(&self) -> Approx {
        Approx::new(-&self.mantissa, self.exponent, self.error_ulps.clone())
    }

    pub fn sub(&self, other: &Approx) -> Approx {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Approx) -> Approx {
        let m = &self.mantissa * &other.mantissa;
        let err = self.mantissa.magnitude() * &other.error_ulps
            + other.mantissa.magnitude() * &self.error_ulps
            + &self.error_ulps * &other.error_ulps;
        Approx::new(m, self.exponent + other.exponent, err)
    }

    /// Drops low mantissa bits so at most `bits` remain, widening the radius
    /// by the truncation.
    pub fn round_to(&self, bits: u32) -> Approx {
        let len = self.mantissa.bits();
        if len <= bits as u64 {
            return self.clone();
        }
        let k = len - bits as u64;
        let m = &self.mantissa >> k as usize;
        let dropped = &self.mantissa - shl(&m, k);
        let unit = BigUint::one() << k as usize;
        let (q, r) = self.error_ulps.div_rem(&unit);
        let mut err = q + if r.is_zero() { 0u32 } else { 1u32 };
        if !dropped.is_zero() {
            err += 1u32;
        }
        Approx::new(m, self.exponent + k as i64, err)
    }

    pub fn mul_rational(&self, q: &BigRational, bits: u32) -> Approx {
        if q.denom().is_one() {
            return Approx::new(
                &self.mantissa * q.numer(),
                self.exponent,
                &self.error_ulps * q.numer().magnitude(),
            );
        }
        self.mul(&Approx::from_rational(q, bits)).round_to(bits)
    }

    pub fn pow(&self, k: u64, bits: u32) -> Approx {
        let mut result = Approx::exact_integer(BigInt::one());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).round_to(bits);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).round_to(bits);
            }
        }
        result
    }
}

fn check_bits(bits: u32) -> Result<()> {
    if bits < MIN_BITS {
        return Err(Error::domain(format!(
            "precision must be at least {MIN_BITS} bits, got {bits}"
        )));
    }
    Ok(())
}

/// Indices above this are evaluated by bisection, whose cost grows with
/// `log m` rather than with `m`.
const EXACT_ROOT_MAX_INDEX: u64 = 64;

/// `b^(1/m)` with relative error below `2^-bits` (so certainly below the
/// promised `2^-(bits-4)`).
///
/// Small indices use an integer root: with `F` fractional bits,
/// `N = floor(b * 2^(F m))` and `r = floor(N^(1/m))` satisfy
/// `r <= 2^F b^(1/m) < r + 1`, and the result is exact when the root is a
/// dyadic rational. Larger indices bisect on certified interval powers.
pub fn eval_radical(b: &BigRational, m: u64, bits: u32) -> Result<Approx> {
    check_bits(bits)?;
    if !b.is_positive() {
        return Err(Error::domain(format!("radicand {b} is not positive")));
    }
    if m == 0 {
        return Err(Error::domain("radical index must be at least 1"));
    }
    if b.is_one() {
        return Ok(Approx::exact_integer(BigInt::one()));
    }
    if m > EXACT_ROOT_MAX_INDEX {
        return Ok(root_by_bisection(b, m, bits));
    }
    let index = m as u32;
    let num = b.numer().magnitude();
    let den = b.denom().magnitude();
    // 2^lower_log < b
    let lower_log = num.bits() as i64 - den.bits() as i64 - 1;
    let frac_bits = bits as i64 - lower_log.div_euclid(m as i64);
    let shift = frac_bits as i128 * m as i128;
    let (scaled_num, scaled_den) = if shift >= 0 {
        (num << shift as usize, den.clone())
    } else {
        (num.clone(), den << (-shift) as usize)
    };
    let (n, rem) = scaled_num.div_rem(&scaled_den);
    let r = n.nth_root(index);
    let exact = rem.is_zero() && r.pow(index) == n;
    Ok(Approx::new(
        r.into(),
        -frac_bits,
        BigUint::from(if exact { 0u32 } else { 1u32 }),
    ))
}

/// Bisection on mantissas at `F` fractional bits, keeping `lo^m <= b` and
/// `hi^m >= b` proven by interval powers at a few extra bits.
fn root_by_bisection(b: &BigRational, m: u64, bits: u32) -> Approx {
    let low_exp = floor_log2(b).div_euclid(m as i64);
    let frac_bits = bits as i64 - low_exp;
    let work = bits + 2 * (64 - m.leading_zeros()) + 32;
    let log_b = floor_log2(b);
    let power = |mant: &BigInt| Approx::new(mant.clone(), -frac_bits, BigUint::zero()).pow(m, work);
    let below_b = |p: &Approx| match magnitude_vs(p, log_b) {
        Some(order) => order == Ordering::Less,
        None => p.upper() < *b,
    };
    let above_b = |p: &Approx| match magnitude_vs(p, log_b) {
        Some(order) => order == Ordering::Greater,
        None => p.lower() > *b,
    };
    // 2^low_exp <= b^(1/m) <= 2^(low_exp + 1)
    let mut lo = BigInt::one() << bits as usize;
    let mut hi = BigInt::one() << (bits as usize + 1);
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        let p = power(&mid);
        if below_b(&p) {
            lo = mid;
        } else if above_b(&p) {
            hi = mid;
        } else {
            // b is within rounding of mid^m; tighten around mid if provable
            let below = &mid - 1;
            let above = &mid + 1;
            if below > lo && below_b(&power(&below)) {
                lo = below;
            }
            if above < hi && above_b(&power(&above)) {
                hi = above;
            }
            break;
        }
    }
    // centre of [lo, hi] with the half-width as error
    Approx::new(&lo + &hi, -frac_bits - 1, (&hi - &lo).magnitude().clone())
}

/// Places a positive interval against `[2^log_b, 2^(log_b + 1))` using bit
/// lengths only, so far-off values never become huge rationals.
fn magnitude_vs(p: &Approx, log_b: i64) -> Option<Ordering> {
    let m = p.mantissa().magnitude();
    let e = p.error_ulps();
    if (m + e).bits() as i64 + p.exponent() <= log_b {
        return Some(Ordering::Less);
    }
    if m > e && (m - e).bits() as i64 - 1 + p.exponent() > log_b {
        return Some(Ordering::Greater);
    }
    None
}

/// `prod p^(a/d)`, one root per prime.
pub fn eval_atom(atom: &RadicalAtom, bits: u32) -> Result<Approx> {
    check_bits(bits)?;
    let work = bits + GUARD_BITS;
    let mut acc = Approx::exact_integer(BigInt::one());
    for (p, e) in atom.exponents() {
        let (a, d) = (*e.numer(), *e.denom());
        let root = if d <= EXACT_ROOT_MAX_INDEX {
            let radicand = BigRational::from_integer(BigInt::from(p.pow(a as u32)));
            eval_radical(&radicand, d, work)?
        } else {
            // p^a itself may be enormous, so raise the root instead
            let extra = 64 - a.leading_zeros() + GUARD_BITS;
            let base = BigRational::from_integer(BigInt::from(p.clone()));
            eval_radical(&base, d, work + extra)?.pow(a, work + extra)
        };
        acc = acc.mul(&root).round_to(work);
    }
    Ok(acc)
}

pub fn eval_canonical(c: &CanonicalRadical, bits: u32) -> Result<Approx> {
    let work = bits + GUARD_BITS;
    match &c.atom {
        None => Ok(Approx::from_rational(&c.coeff, work)),
        Some(atom) => Ok(eval_atom(atom, bits)?.mul_rational(&c.coeff, work)),
    }
}

/// Interval sum of the termwise evaluations.
pub fn eval_sum(s: &RadicalSum, bits: u32) -> Result<Approx> {
    check_bits(bits)?;
    let work = bits + GUARD_BITS;
    let mut acc = Approx::from_rational(s.rational_part(), work);
    for (atom, c) in s.terms() {
        let term = eval_atom(atom, bits)?.mul_rational(c, work);
        acc = acc.add(&term);
    }
    Ok(acc.round_to(work))
}

/// Horner evaluation of a rational polynomial on an interval.
pub fn eval_poly(p: &PolyQ, x: &Approx, bits: u32) -> Approx {
    let work = bits + GUARD_BITS;
    p.coeffs().iter().rev().fold(Approx::zero(), |acc, c| {
        acc.mul(x)
            .round_to(work)
            .add(&Approx::from_rational(c, work))
    })
}

/// Verdict of [`separated_from_rational`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Separation {
    /// Proven: the interval holds no rational with denominator `<= q_max`.
    Excluded,
    /// The interval holds this rational; nothing is proven about the value.
    NotExcluded(BigRational),
}

/// Convergents of a rational, plus the extra candidate that appears when the
/// last partial quotient is split as `(a_n - 1) + 1/1`.
fn convergents(x: &BigRational) -> Vec<BigRational> {
    let mut out = Vec::new();
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    while !den.is_zero() {
        let (a, r) = num.div_mod_floor(&den);
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        out.push(BigRational::new(h.clone(), k.clone()));
        num = std::mem::replace(&mut den, r);
    }
    if out.len() >= 2 && k_prev.is_positive() && &k - &k_prev > BigInt::zero() {
        out.push(BigRational::new(&h - &h_prev, &k - &k_prev));
    }
    out
}

/// Decides whether the interval `a` excludes every rational with
/// denominator at most `q_max`.
///
/// Requires the radius to be below `1/(2 q_max^2)`; then any such rational
/// in the interval is within `1/(2q^2)` of the midpoint and so is one of its
/// convergents, which are checked exhaustively.
pub fn separated_from_rational(a: &Approx, q_max: u64) -> Result<Separation> {
    if q_max == 0 {
        return Err(Error::domain("q_max must be positive"));
    }
    let qm = BigInt::from(q_max);
    let limit = BigRational::new(BigInt::one(), BigInt::from(2) * &qm * &qm);
    let radius = a.radius();
    if radius >= limit {
        return Err(Error::PrecisionInsufficient(format!(
            "interval radius 2^{} is too wide to separate denominators up to {q_max}",
            ceil_log2(&radius)
        )));
    }
    let mid = a.midpoint();
    for c in convergents(&mid) {
        if *c.denom() <= qm && (&c - &mid).abs() <= radius {
            return Ok(Separation::NotExcluded(c));
        }
    }
    Ok(Separation::Excluded)
}

/// A decimal rendering `digits ± 2^e` (or `± 0` when exact).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecimalRendering {
    pub digits: String,
    /// `None` when the printed digits are the exact value.
    pub error_exponent: Option<i64>,
}

impl fmt::Display for DecimalRendering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.error_exponent {
            None => write!(f, "{} ± 0", self.digits),
            Some(e) => write!(f, "{} ± 2^{e}", self.digits),
        }
    }
}

fn round_decimal(v: &BigRational, places: u32) -> (BigInt, BigRational) {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = v * BigRational::from_integer(scale.clone());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let rounded = if scaled.is_negative() {
        -(-&scaled + &half).floor().to_integer()
    } else {
        (&scaled + &half).floor().to_integer()
    };
    let value = BigRational::new(rounded.clone(), scale);
    (rounded, value)
}

fn format_fixed(n: &BigInt, places: u32) -> String {
    let sign = if n.sign() == Sign::Minus { "-" } else { "" };
    let digits = n.magnitude().to_string();
    if places == 0 {
        return format!("{sign}{digits}");
    }
    let places = places as usize;
    let padded = if digits.len() <= places {
        format!("{}{digits}", "0".repeat(places + 1 - digits.len()))
    } else {
        digits
    };
    let (int, frac) = padded.split_at(padded.len() - places);
    format!("{sign}{int}.{frac}")
}

/// Renders `a` as a decimal whose distance to every point of the interval is
/// at most `2^e`. `e` is the absolute form of a `2^-(rel_bits-4)` relative
/// error, widened if the interval itself is wider. The digit count is the
/// first decimal place not larger than `2^e`.
pub fn render_decimal(a: &Approx, rel_bits: u32) -> DecimalRendering {
    let mid = a.midpoint();
    if a.is_exact() {
        let places = (-a.exponent()).max(0) as u32;
        let (n, _) = round_decimal(&mid, places);
        let mut s = format_fixed(&n, places);
        if s.contains('.') {
            s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        }
        return DecimalRendering {
            digits: s,
            error_exponent: None,
        };
    }
    let radius = a.radius();
    let mut e = if mid.is_zero() {
        ceil_log2(&radius) + 1
    } else {
        floor_log2(&mid.abs()) - (rel_bits as i64 - 4)
    };
    loop {
        let bound = pow2(e);
        // smallest number of places with 10^-places <= 2^e
        let mut places = 0u32;
        while BigRational::new(BigInt::one(), BigInt::from(10u32).pow(places)) > bound {
            places += 1;
        }
        let (n, printed) = round_decimal(&mid, places);
        let total = &radius + (&mid - &printed).abs();
        if total <= bound {
            return DecimalRendering {
                digits: format_fixed(&n, places),
                error_exponent: Some(e),
            };
        }
        e += 1;
    }
}

/// Compares two intervals: `Some` only when they are disjoint.
pub fn certified_cmp(a: &Approx, b: &Approx) -> Option<Ordering> {
    if a.upper() < b.lower() {
        Some(Ordering::Less)
    } else if b.upper() < a.lower() {
        Some(Ordering::Greater)
    } else {
        None
    }
}
