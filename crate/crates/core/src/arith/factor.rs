//! Prime factorization: trial division by the primes below 10^6, then
//! Brent's variant of Pollard rho with fixed seeds, so every run on the same
//! input takes the same path.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

const TRIAL_LIMIT: u32 = 1_000_000;

/// Miller-Rabin bases that are deterministic below 3.3 * 10^24, which covers
/// every 64-bit radicand.
const DETERMINISTIC_BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
/// Extra bases used above that bound.
const EXTRA_BASES: [u32; 8] = [41, 43, 47, 53, 59, 61, 67, 71];

/// Operation-count limit for [`factorize`]. One unit is one trial division or
/// one rho iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FactorBudget(pub u64);

impl FactorBudget {
    pub const DEFAULT: FactorBudget = FactorBudget(10_000_000);
}

impl Default for FactorBudget {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Map prime -> exponent. The empty map is the factorization of 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PrimeFactorization {
    factors: BTreeMap<BigUint, u64>,
}

impl PrimeFactorization {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BigUint, u64)> {
        self.factors.iter().map(|(p, e)| (p, *e))
    }

    pub fn exponent(&self, p: &BigUint) -> u64 {
        self.factors.get(p).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    /// Reconstructs the factored integer.
    pub fn product(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e as u32))
    }

    fn add(&mut self, p: BigUint, e: u64) {
        *self.factors.entry(p).or_insert(0) += e;
    }
}

impl<'a> IntoIterator for &'a PrimeFactorization {
    type Item = (&'a BigUint, &'a u64);
    type IntoIter = std::collections::btree_map::Iter<'a, BigUint, u64>;

    fn into_iter(self) -> Self::IntoIter {
        self.factors.iter()
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = TRIAL_LIMIT as usize;
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::new();
        for i in 2..=limit {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j <= limit {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

struct Meter {
    left: u64,
    limit: u64,
}

impl Meter {
    fn tick(&mut self) -> Result<()> {
        if self.left == 0 {
            return Err(Error::BudgetExceeded(format!(
                "factorization needs more than {} steps",
                self.limit
            )));
        }
        self.left -= 1;
        Ok(())
    }
}

fn miller_rabin(n: &BigUint, base: u32) -> bool {
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    let mut x = BigUint::from(base).modpow(&d, n);
    if x == one || x == n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_one {
            return true;
        }
        if x == one {
            return false;
        }
    }
    false
}

/// Miller-Rabin primality test, exact for every `n` below 3.3 * 10^24.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u32() {
        if small < 2 {
            return false;
        }
        if small <= TRIAL_LIMIT {
            return small_primes().binary_search(&small).is_ok();
        }
    }
    for &p in small_primes().iter().take(DETERMINISTIC_BASES.len()) {
        if (n % p).is_zero() {
            return false;
        }
    }
    let deterministic = n.bits() <= 81;
    DETERMINISTIC_BASES
        .iter()
        .chain(if deterministic { &[][..] } else { &EXTRA_BASES[..] })
        .all(|&b| miller_rabin(n, b))
}

/// Returns `r` with `r^k == n`, if such an integer exists.
pub fn int_nth_root(n: &BigUint, k: u64) -> Option<BigUint> {
    assert!(k >= 1, "root index must be positive");
    if k == 1 || n.is_zero() || n.is_one() {
        return Some(n.clone());
    }
    // 2^k > n for k >= bits(n)
    if k >= n.bits() {
        return None;
    }
    let r = n.nth_root(k as u32);
    (r.pow(k as u32) == *n).then_some(r)
}

fn rho_step(x: &BigUint, c: &BigUint, n: &BigUint) -> BigUint {
    (x * x + c) % n
}

fn abs_diff(a: &BigUint, b: &BigUint) -> BigUint {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

/// One Brent rho attempt with increment `c`. `Ok(None)` means the attempt
/// collapsed to the trivial divisor `n`.
fn brent(n: &BigUint, c: u64, meter: &mut Meter) -> Result<Option<BigUint>> {
    const BATCH: u64 = 128;
    let c = BigUint::from(c);
    let one = BigUint::one();
    let mut y = BigUint::from(2u32);
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut r: u64 = 1;
    while g == one {
        x = y.clone();
        for _ in 0..r {
            meter.tick()?;
            y = rho_step(&y, &c, n);
        }
        let mut k = 0;
        while k < r && g == one {
            ys = y.clone();
            for _ in 0..BATCH.min(r - k) {
                meter.tick()?;
                y = rho_step(&y, &c, n);
                q = (q * abs_diff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += BATCH;
        }
        r *= 2;
    }
    if g == *n {
        loop {
            meter.tick()?;
            ys = rho_step(&ys, &c, n);
            g = abs_diff(&x, &ys).gcd(n);
            if g != one {
                break;
            }
        }
    }
    Ok((g != *n).then_some(g))
}

/// Finds a nontrivial divisor of a composite `n` with no prime factor below
/// the trial-division limit.
fn split(n: &BigUint, meter: &mut Meter) -> Result<BigUint> {
    for k in (2..=n.bits() / 20).rev() {
        if let Some(r) = int_nth_root(n, k) {
            return Ok(r);
        }
    }
    for c in 1u64.. {
        if let Some(d) = brent(n, c, meter)? {
            return Ok(d);
        }
    }
    unreachable!("rho increments are unbounded")
}

/// Factors `n >= 1` into primes.
///
/// Fails with [`Error::BudgetExceeded`] when the work needed exceeds `budget`,
/// and with [`Error::Domain`] for `n = 0`.
pub fn factorize(n: &BigUint, budget: FactorBudget) -> Result<PrimeFactorization> {
    if n.is_zero() {
        return Err(Error::domain("cannot factor 0"));
    }
    let mut meter = Meter {
        left: budget.0,
        limit: budget.0,
    };
    let mut out = PrimeFactorization::new();
    let mut rest = n.clone();
    for &p in small_primes() {
        if rest.is_one() {
            return Ok(out);
        }
        let p_big = BigUint::from(p);
        if &p_big * &p_big > rest {
            break;
        }
        meter.tick()?;
        let mut e = 0;
        loop {
            let (quot, rem) = rest.div_rem(&p_big);
            if !rem.is_zero() {
                break;
            }
            rest = quot;
            e += 1;
        }
        if e > 0 {
            out.add(p_big, e);
        }
    }
    let mut pending = Vec::new();
    if !rest.is_one() {
        pending.push((rest, 1u64));
    }
    while let Some((m, mult)) = pending.pop() {
        if is_prime(&m) {
            out.add(m, mult);
            continue;
        }
        let d = split(&m, &mut meter)?;
        let other = &m / &d;
        if d == other {
            pending.push((d, mult * 2));
        } else {
            pending.push((d, mult));
            pending.push((other, mult));
        }
    }
    Ok(out)
}
