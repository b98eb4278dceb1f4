//! Rational linear combinations of radicals.
//!
//! A [`RadicalSum`] is a rational part plus a map from canonical atoms to
//! nonzero coefficients. Because atoms are canonical, a sum whose term map
//! survives normalization cannot cancel further, and such a sum is
//! irrational. [`RadicalSum::is_rational`] is therefore a decision
//! procedure, not a heuristic.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::FactorBudget;
use crate::error::{Error, Result};
use crate::radical::{atom_mul, atom_pow, reduce_radical, CanonicalRadical, RadicalAtom};

/// One raw input term `coeff * radicand^(1/index)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalTerm {
    pub coeff: BigRational,
    pub radicand: BigRational,
    pub index: u64,
}

impl RadicalTerm {
    pub fn new(coeff: BigRational, radicand: BigRational, index: u64) -> Self {
        RadicalTerm {
            coeff,
            radicand,
            index,
        }
    }
}

/// Outcome of a rationality decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Rational(BigRational),
    Irrational,
}

impl Verdict {
    pub fn is_irrational(&self) -> bool {
        matches!(self, Verdict::Irrational)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Rational(q) => write!(f, "rational {q}"),
            Verdict::Irrational => f.write_str("irrational"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct RadicalSum {
    rational_part: BigRational,
    terms: BTreeMap<RadicalAtom, BigRational>,
}

impl RadicalSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(q: BigRational) -> Self {
        RadicalSum {
            rational_part: q,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_canonical(c: &CanonicalRadical) -> Self {
        let mut s = Self::zero();
        s.add_scaled(&BigRational::one(), c);
        s
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational_part
    }

    /// Terms in display order.
    pub fn terms(&self) -> impl Iterator<Item = (&RadicalAtom, &BigRational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.rational_part.is_zero()
    }

    /// `Some(q)` iff the sum equals the rational `q`; `None` means irrational.
    pub fn is_rational(&self) -> Option<BigRational> {
        self.terms
            .is_empty()
            .then(|| self.rational_part.clone())
    }

    pub fn verdict(&self) -> Verdict {
        match self.is_rational() {
            Some(q) => Verdict::Rational(q),
            None => Verdict::Irrational,
        }
    }

    /// Adds `scale * c` in place.
    pub fn add_scaled(&mut self, scale: &BigRational, c: &CanonicalRadical) {
        let amount = scale * &c.coeff;
        match &c.atom {
            None => self.rational_part += amount,
            Some(atom) => self.add_atom(atom.clone(), amount),
        }
    }

    fn add_atom(&mut self, atom: RadicalAtom, amount: BigRational) {
        if amount.is_zero() {
            return;
        }
        let entry = self.terms.entry(atom);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(amount);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += amount;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Termwise sum; the merge of two normalized sums.
    pub fn add(&self, other: &RadicalSum) -> RadicalSum {
        let mut out = self.clone();
        out.rational_part += &other.rational_part;
        for (atom, c) in &other.terms {
            out.add_atom(atom.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> RadicalSum {
        RadicalSum {
            rational_part: -&self.rational_part,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), -c))
                .collect(),
        }
    }

    pub fn sub(&self, other: &RadicalSum) -> RadicalSum {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &BigRational) -> RadicalSum {
        if q.is_zero() {
            return RadicalSum::zero();
        }
        RadicalSum {
            rational_part: &self.rational_part * q,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c * q))
                .collect(),
        }
    }

    /// Summands as canonical radicals with signed coefficients, rational part
    /// first (when nonzero).
    fn summands(&self) -> Vec<(BigRational, CanonicalRadical)> {
        let mut out = Vec::with_capacity(self.terms.len() + 1);
        if !self.rational_part.is_zero() {
            out.push((self.rational_part.clone(), CanonicalRadical::one()));
        }
        for (atom, c) in &self.terms {
            out.push((c.clone(), CanonicalRadical::from_atom(atom.clone())));
        }
        out
    }

    /// Product, distributing over both sums.
    pub fn try_mul(&self, other: &RadicalSum) -> Result<RadicalSum> {
        let mut out = RadicalSum::zero();
        let right = other.summands();
        for (cl, l) in self.summands() {
            for (cr, r) in &right {
                let product = atom_mul(&l, r)?;
                out.add_scaled(&(&cl * cr), &product);
            }
        }
        Ok(out)
    }

    /// Nonnegative integer power by square-and-multiply.
    pub fn try_pow(&self, k: u64) -> Result<RadicalSum> {
        let mut result = RadicalSum::from_rational(BigRational::one());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(result)
    }

    /// The sum as a raw term list: the rational part as `(q, 1, 1)` and each
    /// atom as `(coeff, radicand, order)`. Normalizing it gives `self` back.
    pub fn to_terms(&self) -> Vec<RadicalTerm> {
        let mut out = Vec::new();
        if !self.rational_part.is_zero() {
            out.push(RadicalTerm::new(
                self.rational_part.clone(),
                BigRational::one(),
                1,
            ));
        }
        for (atom, c) in &self.terms {
            out.push(RadicalTerm::new(
                c.clone(),
                BigRational::from_integer(atom.radicand().into()),
                atom.order(),
            ));
        }
        out
    }
}

impl fmt::Display for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "{}", self.rational_part);
        }
        let mut first = true;
        if !self.rational_part.is_zero() {
            write!(f, "{}", self.rational_part)?;
            first = false;
        }
        for (atom, c) in &self.terms {
            let magnitude = c.abs();
            match (first, c.is_negative()) {
                (true, false) => {}
                (true, true) => f.write_str("-")?,
                (false, false) => f.write_str(" + ")?,
                (false, true) => f.write_str(" - ")?,
            }
            if magnitude.is_one() {
                write!(f, "{atom}")?;
            } else {
                write!(f, "{magnitude}*{atom}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Canonicalizes every term and combines like atoms.
pub fn normalize_sum(terms: &[RadicalTerm], budget: FactorBudget) -> Result<RadicalSum> {
    let mut sum = RadicalSum::zero();
    for t in terms {
        let canonical = reduce_radical(&t.radicand, t.index, budget)?;
        sum.add_scaled(&t.coeff, &canonical);
    }
    Ok(sum)
}

pub fn is_rational(s: &RadicalSum) -> Option<BigRational> {
    s.is_rational()
}

/// Decides `l_0 + l_1 r + ... + l_t r^t` for `r = b^(1/m)` a reduced
/// irrational of order exactly `m`, `1 <= t < m`, `l_t != 0`.
///
/// Every valid instance is irrational; a rational outcome would be a bug in
/// the kernel.
pub fn lemma2_check(
    b: &BigRational,
    m: u64,
    coeffs: &[BigRational],
    budget: FactorBudget,
) -> Result<Verdict> {
    let root = reduce_radical(b, m, budget)?;
    match &root.atom {
        Some(atom) if atom.order() == m => {}
        Some(atom) => {
            return Err(Error::domain(format!(
                "{m}-th root of {b} reduces to index {}, not a reduced irrational of index {m}",
                atom.order()
            )))
        }
        None => {
            return Err(Error::domain(format!(
                "{m}-th root of {b} is rational"
            )))
        }
    }
    let t = match coeffs.len() {
        0 | 1 => return Err(Error::domain("need coefficients l_0..l_t with t >= 1")),
        n => n as u64 - 1,
    };
    if t >= m {
        return Err(Error::domain(format!("degree {t} must be below the index {m}")));
    }
    if coeffs.last().is_some_and(Zero::is_zero) {
        return Err(Error::domain("leading coefficient must be nonzero"));
    }
    let mut sum = RadicalSum::zero();
    for (j, l) in coeffs.iter().enumerate() {
        sum.add_scaled(l, &atom_pow(&root, j as u64)?);
    }
    Ok(sum.verdict())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radical::Exponent;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn term(c: BigRational, b: BigRational, m: u64) -> RadicalTerm {
        RadicalTerm::new(c, b, m)
    }

    fn norm(terms: &[RadicalTerm]) -> RadicalSum {
        normalize_sum(terms, FactorBudget::default()).unwrap()
    }

    fn atom(pairs: &[(u64, u64, u64)]) -> RadicalAtom {
        let exps = pairs
            .iter()
            .map(|&(p, a, d)| (BigUint::from(p), Exponent::new(a, d)))
            .collect();
        RadicalAtom::new(exps).unwrap().unwrap()
    }

    fn worked_example() -> Vec<RadicalTerm> {
        vec![
            term(q(1, 1), q(12, 1), 8),
            term(q(-2, 3), q(108, 1), 27),
            term(q(1, 2), q(12, 1), 2),
        ]
    }

    #[test]
    fn trivial_cancellation_collapses_to_zero() {
        let s = norm(&[
            term(q(3, 1), q(12, 1), 2),
            term(q(-5, 1), q(3, 1), 2),
            term(q(-1, 1), q(9, 1), 4),
        ]);
        assert_eq!(s, RadicalSum::zero());
        assert_eq!(s.is_rational(), Some(q(0, 1)));
        assert_eq!(s.to_string(), "0");
    }

    #[test]
    fn root_two_plus_root_three() {
        let s = norm(&[term(q(1, 1), q(2, 1), 2), term(q(1, 1), q(3, 1), 2)]);
        assert_eq!(s.rational_part(), &q(0, 1));
        let terms: Vec<_> = s.terms().map(|(a, c)| (a.clone(), c.clone())).collect();
        assert_eq!(
            terms,
            vec![(atom(&[(2, 1, 2)]), q(1, 1)), (atom(&[(3, 1, 2)]), q(1, 1))]
        );
        assert_eq!(s.is_rational(), None);
        assert_eq!(s.to_string(), "2^(1/2) + 3^(1/2)");
    }

    #[test]
    fn empty_sum() {
        let s = norm(&[]);
        assert!(s.is_zero());
        assert_eq!(s.is_rational(), Some(q(0, 1)));
    }

    #[test]
    fn worked_example_normalization() {
        let s = norm(&worked_example());
        assert_eq!(s.rational_part(), &q(0, 1));
        let terms: BTreeMap<_, _> = s.terms().map(|(a, c)| (a.clone(), c.clone())).collect();
        let mut expected = BTreeMap::new();
        expected.insert(atom(&[(2, 1, 4), (3, 1, 8)]), q(1, 1));
        expected.insert(atom(&[(2, 2, 27), (3, 1, 9)]), q(-2, 3));
        expected.insert(atom(&[(3, 1, 2)]), q(1, 1));
        assert_eq!(terms, expected);
        assert_eq!(
            s.to_string(),
            "-2/3*2^(2/27)*3^(1/9) + 2^(1/4)*3^(1/8) + 3^(1/2)"
        );
        assert_eq!(s.is_rational(), None);
    }

    #[test]
    fn perfect_square_is_rational() {
        let s = norm(&[term(q(1, 1), q(4, 1), 2)]);
        assert_eq!(s.is_rational(), Some(q(2, 1)));
    }

    #[test]
    fn rendering_with_rational_part() {
        let s = norm(&[
            term(q(1, 1), q(1, 1), 1),
            term(q(-1, 1), q(2, 1), 2),
            term(q(-3, 2), q(3, 1), 2),
        ]);
        assert_eq!(s.to_string(), "1 - 2^(1/2) - 3/2*3^(1/2)");
        let neg = s.neg();
        assert_eq!(neg.to_string(), "-1 + 2^(1/2) + 3/2*3^(1/2)");
        let no_rational = norm(&[term(q(-1, 1), q(2, 1), 2)]);
        assert_eq!(no_rational.to_string(), "-2^(1/2)");
    }

    #[test]
    fn products_distribute() {
        let a = norm(&[term(q(1, 1), q(2, 1), 2), term(q(1, 1), q(3, 1), 2)]);
        let b = norm(&[term(q(1, 1), q(2, 1), 2), term(q(-1, 1), q(3, 1), 2)]);
        // (√2 + √3)(√2 − √3) = −1
        assert_eq!(a.try_mul(&b).unwrap().is_rational(), Some(q(-1, 1)));
        // (√2 + √3)^2 = 5 + 2√6
        let sq = a.try_pow(2).unwrap();
        assert_eq!(sq.to_string(), "5 + 2*2^(1/2)*3^(1/2)");
        assert_eq!(a.try_pow(0).unwrap().is_rational(), Some(q(1, 1)));
    }

    #[test]
    fn polynomial_in_one_radical_examples() {
        let budget = FactorBudget::default();
        assert_eq!(
            lemma2_check(&q(2, 1), 2, &[q(1, 1), q(1, 1)], budget).unwrap(),
            Verdict::Irrational
        );
        assert_eq!(
            lemma2_check(&q(12, 1), 8, &[q(0, 1), q(5, 1), q(0, 1), q(-7, 3)], budget).unwrap(),
            Verdict::Irrational
        );
        assert_eq!(
            lemma2_check(&q(9, 5), 3, &[q(1, 2), q(1, 1), q(1, 1)], budget).unwrap(),
            Verdict::Irrational
        );
    }

    #[test]
    fn polynomial_in_one_radical_rejects_bad_input() {
        let budget = FactorBudget::default();
        // 9^(1/4) = 3^(1/2) has index 2, not 4
        assert!(lemma2_check(&q(9, 1), 4, &[q(0, 1), q(1, 1)], budget).is_err());
        assert!(lemma2_check(&q(4, 1), 2, &[q(0, 1), q(1, 1)], budget).is_err());
        assert!(lemma2_check(&q(2, 1), 2, &[q(1, 1), q(1, 1), q(1, 1)], budget).is_err());
        assert!(lemma2_check(&q(2, 1), 3, &[q(1, 1), q(0, 1)], budget).is_err());
        assert!(lemma2_check(&q(2, 1), 3, &[q(1, 1)], budget).is_err());
    }

    fn raw_terms() -> impl Strategy<Value = Vec<RadicalTerm>> {
        const P: [i64; 6] = [2, 3, 5, 7, 11, 13];
        let term = (
            -20i64..20,
            1i64..10,
            prop::collection::vec((0usize..6, 1u32..4), 0..3),
            1i64..4,
            1u64..9,
        )
            .prop_map(|(cn, cd, fs, den, m)| {
                let num = fs.iter().fold(1i64, |acc, &(i, e)| acc * P[i].pow(e));
                term(q(cn, cd), q(num, den), m)
            });
        prop::collection::vec(term, 0..6)
    }

    proptest! {
        #[test]
        fn normalization_is_idempotent(terms in raw_terms()) {
            let s = norm(&terms);
            prop_assert_eq!(norm(&s.to_terms()), s);
        }

        #[test]
        fn normalization_ignores_order(terms in raw_terms(), seed in any::<u64>()) {
            let mut shuffled = terms.clone();
            // deterministic Fisher-Yates from the seed
            let mut state = seed | 1;
            for i in (1..shuffled.len()).rev() {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                shuffled.swap(i, (state % (i as u64 + 1)) as usize);
            }
            prop_assert_eq!(norm(&shuffled), norm(&terms));
        }

        #[test]
        fn normalization_is_linear(a in raw_terms(), b in raw_terms()) {
            let joined: Vec<_> = a.iter().chain(b.iter()).cloned().collect();
            prop_assert_eq!(norm(&joined), norm(&a).add(&norm(&b)));
        }

        #[test]
        fn stored_coefficients_are_nonzero(terms in raw_terms()) {
            let s = norm(&terms);
            prop_assert!(s.terms().all(|(_, c)| !c.is_zero()));
        }
    }
}
