//! Canonical real radicals.
//!
//! A radical `b^(1/m)` with `b` a positive rational is rewritten as
//! `coeff * prod p^(a/d)` where every `p` is prime, `0 < a/d < 1` and the
//! fraction is reduced. The prime-exponent map is a [`RadicalAtom`]; it is
//! absent exactly when the radical is rational. Two radicals are equal iff
//! their canonical forms are structurally equal.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use crate::arith::{factorize, positive_parts, rational_pow, FactorBudget};
use crate::error::{Error, Result};

/// Fractional exponent `a/d` with `0 < a < d`, in lowest terms.
pub type Exponent = Ratio<u64>;

/// Irrational part of a canonical radical: prime -> exponent in (0, 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RadicalAtom {
    exps: BTreeMap<BigUint, Exponent>,
}

impl RadicalAtom {
    /// Builds an atom, checking the invariants. Returns `Ok(None)` for an
    /// empty map (a rational value carries no atom).
    pub fn new(exps: BTreeMap<BigUint, Exponent>) -> Result<Option<Self>> {
        for (p, e) in &exps {
            if !crate::arith::is_prime(p) {
                return Err(Error::domain(format!("atom base {p} is not prime")));
            }
            if e.is_zero() || *e >= Exponent::one() {
                return Err(Error::domain(format!(
                    "atom exponent {e} of {p} is outside (0, 1)"
                )));
            }
        }
        Ok(Self::from_exps(exps))
    }

    fn from_exps(exps: BTreeMap<BigUint, Exponent>) -> Option<Self> {
        (!exps.is_empty()).then_some(RadicalAtom { exps })
    }

    /// `p^(1/n)` for a prime `p` and `n >= 2`.
    pub fn prime_root(p: BigUint, n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("prime root index must be at least 2"));
        }
        let mut exps = BTreeMap::new();
        exps.insert(p, Exponent::new(1, n));
        Ok(RadicalAtom::new(exps)?.expect("nonempty"))
    }

    pub fn exponents(&self) -> impl Iterator<Item = (&BigUint, &Exponent)> {
        self.exps.iter()
    }

    pub fn exponent(&self, p: &BigUint) -> Option<&Exponent> {
        self.exps.get(p)
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.exps.keys()
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// The minimal index of the radical: lcm of the exponent denominators.
    pub fn order(&self) -> u64 {
        self.exps
            .values()
            .fold(1u64, |acc, e| acc.lcm(e.denom()))
    }

    /// Integer radicand `r` with `self = r^(1/order)`.
    pub fn radicand(&self) -> BigUint {
        let order = self.order();
        self.exps.iter().fold(BigUint::one(), |acc, (p, e)| {
            let power = e.numer() * (order / e.denom());
            acc * p.pow(power as u32)
        })
    }
}

impl fmt::Display for RadicalAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, e)) in self.exps.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{p}^({}/{})", e.numer(), e.denom())?;
        }
        Ok(())
    }
}

/// `coeff * atom` with `coeff > 0`; rational iff `atom` is `None`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalRadical {
    pub coeff: BigRational,
    pub atom: Option<RadicalAtom>,
}

impl CanonicalRadical {
    pub fn rational(q: BigRational) -> Self {
        CanonicalRadical {
            coeff: q,
            atom: None,
        }
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn from_atom(atom: RadicalAtom) -> Self {
        CanonicalRadical {
            coeff: BigRational::one(),
            atom: Some(atom),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.atom.is_none()
    }

    /// Order of the atom, 1 for rationals.
    pub fn order(&self) -> u64 {
        self.atom.as_ref().map_or(1, RadicalAtom::order)
    }

    /// A `(radicand, index)` pair whose radical has this canonical form.
    pub fn as_radical(&self) -> (BigRational, u64) {
        match &self.atom {
            None => (self.coeff.clone(), 1),
            Some(atom) => {
                let order = atom.order();
                let radicand = rational_pow(&self.coeff, order)
                    * BigRational::from_integer(atom.radicand().into());
                (radicand, order)
            }
        }
    }
}

impl fmt::Display for CanonicalRadical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.atom {
            None => write!(f, "{}", self.coeff),
            Some(atom) if self.coeff.is_one() => write!(f, "{atom}"),
            Some(atom) => write!(f, "{}*{atom}", self.coeff),
        }
    }
}

fn big_pow(p: &BigUint, e: u128) -> Result<BigUint> {
    let e = u32::try_from(e).map_err(|_| Error::ExponentOverflow)?;
    Ok(p.pow(e))
}

/// Canonical form of `b^(1/m)`.
///
/// With `b = f/s` in lowest terms, `b^(1/m) = (1/s) * (f * s^(m-1))^(1/m)`;
/// each prime exponent `delta` of `f * s^(m-1)` splits into `floor(delta/m)`
/// (moved into the coefficient) and `(delta mod m)/m` (kept in the atom).
pub fn reduce_radical(b: &BigRational, m: u64, budget: FactorBudget) -> Result<CanonicalRadical> {
    if m == 0 {
        return Err(Error::domain("radical index must be at least 1"));
    }
    let (f, s) = positive_parts(b)
        .ok_or_else(|| Error::domain(format!("radicand {b} is not positive")))?;
    let f_factors = factorize(&f, budget)?;
    let s_factors = factorize(&s, budget)?;

    let mut deltas: BTreeMap<BigUint, u128> = BTreeMap::new();
    for (p, e) in f_factors.iter() {
        *deltas.entry(p.clone()).or_insert(0) += e as u128;
    }
    for (p, e) in s_factors.iter() {
        *deltas.entry(p.clone()).or_insert(0) += e as u128 * (m as u128 - 1);
    }

    let mut coeff_num = BigUint::one();
    let mut exps = BTreeMap::new();
    for (p, delta) in deltas {
        let whole = delta / m as u128;
        let frac = (delta % m as u128) as u64;
        if whole > 0 {
            coeff_num *= big_pow(&p, whole)?;
        }
        if frac != 0 {
            exps.insert(p, Exponent::new(frac, m));
        }
    }
    let coeff = BigRational::new(coeff_num.into(), s.into());
    Ok(CanonicalRadical {
        coeff,
        atom: RadicalAtom::from_exps(exps),
    })
}

/// Sum of two exponents, split into an integer carry and a part in [0, 1).
fn add_exponents(x: &Exponent, y: &Exponent) -> Result<(u64, Exponent)> {
    let (dx, dy) = (*x.denom() as u128, *y.denom() as u128);
    let l = dx.lcm(&dy);
    let l64 = u64::try_from(l).map_err(|_| Error::ExponentOverflow)?;
    let n = *x.numer() as u128 * (l / dx) + *y.numer() as u128 * (l / dy);
    let carry = (n / l) as u64;
    Ok((carry, Exponent::new((n % l) as u64, l64)))
}

/// Exact product of two canonical radicals.
pub fn atom_mul(x: &CanonicalRadical, y: &CanonicalRadical) -> Result<CanonicalRadical> {
    let mut coeff = &x.coeff * &y.coeff;
    let atom = match (&x.atom, &y.atom) {
        (None, None) => None,
        (Some(a), None) | (None, Some(a)) => Some(a.clone()),
        (Some(a), Some(b)) => {
            let mut exps = a.exps.clone();
            let mut carried = BigUint::one();
            for (p, e) in &b.exps {
                match exps.remove(p) {
                    None => {
                        exps.insert(p.clone(), *e);
                    }
                    Some(existing) => {
                        let (carry, rest) = add_exponents(&existing, e)?;
                        if carry > 0 {
                            carried *= big_pow(p, carry as u128)?;
                        }
                        if !rest.is_zero() {
                            exps.insert(p.clone(), rest);
                        }
                    }
                }
            }
            coeff *= BigRational::from_integer(carried.into());
            RadicalAtom::from_exps(exps)
        }
    };
    Ok(CanonicalRadical { coeff, atom })
}

/// Exact `x^k`; `x^0 = 1`.
pub fn atom_pow(x: &CanonicalRadical, k: u64) -> Result<CanonicalRadical> {
    let mut coeff = rational_pow(&x.coeff, k);
    let atom = match &x.atom {
        None => None,
        Some(a) => {
            let mut exps = BTreeMap::new();
            let mut carried = BigUint::one();
            for (p, e) in &a.exps {
                let n = *e.numer() as u128 * k as u128;
                let d = *e.denom() as u128;
                if n / d > 0 {
                    carried *= big_pow(p, n / d)?;
                }
                let rem = (n % d) as u64;
                if rem != 0 {
                    exps.insert(p.clone(), Exponent::new(rem, *e.denom()));
                }
            }
            coeff *= BigRational::from_integer(carried.into());
            RadicalAtom::from_exps(exps)
        }
    };
    Ok(CanonicalRadical { coeff, atom })
}

/// Smallest `j >= 1` with `atom^j` rational, computed by stepping the powers.
/// Agrees with [`RadicalAtom::order`]; kept separate so the two can be
/// checked against each other.
pub fn rationalizing_power(x: &CanonicalRadical, limit: u64) -> Option<u64> {
    (1..=limit).find(|&j| {
        atom_pow(x, j)
            .map(|r| r.is_rational())
            .unwrap_or(false)
    })
}
