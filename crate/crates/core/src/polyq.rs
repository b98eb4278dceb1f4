//! Dense univariate polynomials over the rationals.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{rational_pow, FactorBudget};
use crate::error::{Error, Result};
use crate::radical::{atom_mul, atom_pow, reduce_radical, CanonicalRadical, RadicalAtom};
use crate::sumalg::RadicalSum;

/// Largest degree a dense minimal polynomial may have.
pub const MAX_DENSE_DEGREE: u64 = 1 << 20;

/// Coefficients in ascending degree, without trailing zeros. The zero
/// polynomial has no coefficients and no degree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PolyQ {
    coeffs: Vec<BigRational>,
}

impl PolyQ {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyQ { coeffs }
    }

    pub fn zero() -> Self {
        PolyQ { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `c * X^degree`
    pub fn monomial(c: BigRational, degree: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// `X^degree - k`
    pub fn binomial(degree: usize, k: &BigRational) -> Self {
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = BigRational::one();
        coeffs[0] -= k;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &BigRational) -> PolyQ {
        PolyQ::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> PolyQ {
        match self.leading() {
            None => PolyQ::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn add(&self, other: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(other.coeffs.len());
        PolyQ::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &PolyQ) -> PolyQ {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn mul(&self, other: &PolyQ) -> PolyQ {
        if self.is_zero() || other.is_zero() {
            return PolyQ::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyQ::new(out)
    }

    /// Quotient and remainder with `deg(rem) < deg(divisor)`.
    pub fn div_rem(&self, divisor: &PolyQ) -> Result<(PolyQ, PolyQ)> {
        let d_deg = divisor
            .degree()
            .ok_or_else(|| Error::domain("polynomial division by zero"))?;
        let lc = divisor.leading().expect("nonzero").clone();
        let mut rem = self.coeffs.clone();
        let Some(n_deg) = self.degree().filter(|&n| n >= d_deg) else {
            return Ok((PolyQ::zero(), self.clone()));
        };
        let mut quot = vec![BigRational::zero(); n_deg - d_deg + 1];
        for shift in (0..=n_deg - d_deg).rev() {
            let c = &rem[shift + d_deg] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] -= &c * dc;
            }
            quot[shift] = c;
        }
        rem.truncate(d_deg);
        Ok((PolyQ::new(quot), PolyQ::new(rem)))
    }

    /// Horner evaluation at a rational point.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            match (first, c.is_negative()) {
                (true, false) => {}
                (true, true) => f.write_str("-")?,
                (false, false) => f.write_str(" + ")?,
                (false, true) => f.write_str(" - ")?,
            }
            first = false;
            let power = match deg {
                0 => {
                    write!(f, "{magnitude}")?;
                    continue;
                }
                1 => "X".to_string(),
                d => format!("X^{d}"),
            };
            if magnitude.is_one() {
                f.write_str(&power)?;
            } else {
                write!(f, "{magnitude}*{power}")?;
            }
        }
        Ok(())
    }
}

/// Monic gcd by the Euclidean algorithm, normalizing every remainder to
/// monic form.
pub fn poly_gcd(f: &PolyQ, g: &PolyQ) -> Result<PolyQ> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::domain("gcd of two zero polynomials"));
    }
    let (mut a, mut b) = (f.monic(), g.monic());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b)?;
        a = b;
        b = r.monic();
    }
    Ok(a.monic())
}

/// Minimal polynomial of `coeff * atom` for a nonzero rational `coeff`, or
/// of the rational `coeff` when `atom` is absent.
///
/// With `s` the order of the atom, `s` is the least power making the value
/// rational, and the minimal polynomial is `X^s - value^s`.
pub fn minimal_polynomial_of(coeff: &BigRational, atom: Option<&RadicalAtom>) -> Result<PolyQ> {
    let Some(atom) = atom else {
        return Ok(PolyQ::binomial(1, coeff));
    };
    if coeff.is_zero() {
        return Ok(PolyQ::binomial(1, coeff));
    }
    let s = atom.order();
    if s > MAX_DENSE_DEGREE {
        return Err(Error::BudgetExceeded(format!(
            "minimal polynomial degree {s} exceeds {MAX_DENSE_DEGREE}"
        )));
    }
    let powered = atom_pow(&CanonicalRadical::from_atom(atom.clone()), s)?;
    debug_assert!(powered.is_rational());
    let k = rational_pow(coeff, s) * powered.coeff;
    Ok(PolyQ::binomial(s as usize, &k))
}

/// Minimal polynomial of `prod (b_i^(1/m_i))^(e_i)` over the rationals.
pub fn minimal_polynomial(
    factors: &[(BigRational, u64, u64)],
    budget: FactorBudget,
) -> Result<PolyQ> {
    let mut c = CanonicalRadical::one();
    for (b, m, e) in factors {
        let root = reduce_radical(b, *m, budget)?;
        c = atom_mul(&c, &atom_pow(&root, *e)?)?;
    }
    minimal_polynomial_of(&c.coeff, c.atom.as_ref())
}

/// Minimal polynomial of a sum that is a single signed radical product.
pub fn minimal_polynomial_of_sum(s: &RadicalSum) -> Result<PolyQ> {
    if let Some(q) = s.is_rational() {
        return minimal_polynomial_of(&q, None);
    }
    let mut terms = s.terms();
    match (terms.next(), terms.next(), s.rational_part().is_zero()) {
        (Some((atom, c)), None, true) => minimal_polynomial_of(c, Some(atom)),
        _ => Err(Error::domain(format!(
            "{s} is not a single radical product"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sumalg::lemma2_check;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn poly(cs: &[i64]) -> PolyQ {
        PolyQ::new(cs.iter().map(|&c| q(c, 1)).collect())
    }

    #[test]
    fn gcd_examples() {
        // X^4 - 4 = (X^2 - 2)(X^2 + 2)
        let f = poly(&[-2, 0, 1]);
        let g = poly(&[-4, 0, 0, 0, 1]);
        assert_eq!(poly(&[-2, 0, 1]).mul(&poly(&[2, 0, 1])), g);
        assert_eq!(poly_gcd(&f, &g).unwrap(), f);

        let h = poly(&[4, 0, 2]);
        assert_eq!(poly_gcd(&h, &PolyQ::zero()).unwrap(), poly(&[2, 0, 1]));

        let x2m1 = poly(&[-1, 0, 1]);
        let x3m1 = poly(&[-1, 0, 0, 1]);
        let g = poly_gcd(&x2m1, &x3m1).unwrap();
        assert_eq!(g, poly(&[-1, 1]));
        assert!(x2m1.div_rem(&g).unwrap().1.is_zero());
        assert!(x3m1.div_rem(&g).unwrap().1.is_zero());
    }

    #[test]
    fn gcd_of_zeros_is_an_error() {
        assert!(matches!(
            poly_gcd(&PolyQ::zero(), &PolyQ::zero()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn rendering() {
        assert_eq!(PolyQ::binomial(8, &q(12, 1)).to_string(), "X^8 - 12");
        assert_eq!(PolyQ::binomial(1, &q(5, 1)).to_string(), "X - 5");
        assert_eq!(PolyQ::binomial(1, &q(-2, 3)).to_string(), "X + 2/3");
        assert_eq!(PolyQ::binomial(1, &q(0, 1)).to_string(), "X");
        assert_eq!(poly(&[1, 0, -3, -1]).to_string(), "-X^3 - 3*X^2 + 1");
        assert_eq!(
            PolyQ::new(vec![q(0, 1), q(1, 2)]).to_string(),
            "1/2*X"
        );
        assert_eq!(PolyQ::zero().to_string(), "0");
        assert_eq!(PolyQ::zero().degree(), None);
    }

    #[test]
    fn minimal_polynomial_examples() {
        let b = FactorBudget::default();
        assert_eq!(
            minimal_polynomial(&[(q(2, 1), 2, 1)], b).unwrap().to_string(),
            "X^2 - 2"
        );
        assert_eq!(
            minimal_polynomial(&[(q(5, 1), 1, 1)], b).unwrap().to_string(),
            "X - 5"
        );
        let p = minimal_polynomial(&[(q(2, 1), 4, 1), (q(3, 1), 8, 1)], b).unwrap();
        assert_eq!(p, PolyQ::binomial(8, &q(12, 1)));
        assert_eq!(minimal_polynomial(&[], b).unwrap().to_string(), "X - 1");
        // (2^(1/4))^2 = 2^(1/2)
        assert_eq!(
            minimal_polynomial(&[(q(2, 1), 4, 2)], b).unwrap().to_string(),
            "X^2 - 2"
        );
    }

    #[test]
    fn minimal_polynomial_of_signed_products() {
        let b = FactorBudget::default();
        let root = reduce_radical(&q(2, 1), 3, b).unwrap();
        let p = minimal_polynomial_of(&q(-1, 1), root.atom.as_ref()).unwrap();
        assert_eq!(p.to_string(), "X^3 + 2");
        let p = minimal_polynomial_of(&q(-3, 2), root.atom.as_ref()).unwrap();
        // (-3/2)^3 * 2 = -27/4
        assert_eq!(p.to_string(), "X^3 + 27/4");
    }

    #[test]
    fn division_identity() {
        let f = poly(&[3, -1, 0, 4, 2]);
        let d = PolyQ::new(vec![q(1, 2), q(0, 1), q(3, 1)]);
        let (quot, rem) = f.div_rem(&d).unwrap();
        assert_eq!(quot.mul(&d).add(&rem), f);
        assert!(rem.degree().unwrap_or(0) < d.degree().unwrap());
        assert!(f.div_rem(&PolyQ::zero()).is_err());
    }

    fn poly_strategy() -> impl Strategy<Value = PolyQ> {
        prop::collection::vec((-9i64..10, 1i64..4), 0..5)
            .prop_map(|cs| PolyQ::new(cs.into_iter().map(|(n, d)| q(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn gcd_divides_both_and_is_symmetric(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
            // multiply in a shared factor so nontrivial gcds occur
            let f = a.mul(&c);
            let g = b.mul(&c);
            prop_assume!(!(f.is_zero() && g.is_zero()));
            let h = poly_gcd(&f, &g).unwrap();
            prop_assert!(f.div_rem(&h).unwrap().1.is_zero());
            prop_assert!(g.div_rem(&h).unwrap().1.is_zero());
            prop_assert_eq!(&h, &poly_gcd(&g, &f).unwrap());
            if !c.is_zero() {
                prop_assert!(h.div_rem(&c.monic()).unwrap().1.is_zero());
            }
        }

        #[test]
        fn proper_divisor_powers_are_irrational(
            b in prop::sample::select(vec![2i64, 3, 6, 12, 18, 45, 72]),
            m in 2u64..13,
        ) {
            let root = reduce_radical(&q(b, 1), m, FactorBudget::default()).unwrap();
            let p = minimal_polynomial_of(&root.coeff, root.atom.as_ref()).unwrap();
            let s = p.degree().unwrap() as u64;
            prop_assert_eq!(s, root.order());
            for d in 1..s {
                if s.is_multiple_of(d) {
                    prop_assert!(!atom_pow(&root, d).unwrap().is_rational());
                }
            }
            prop_assert!(atom_pow(&root, s).unwrap().is_rational());
        }

        #[test]
        fn gcd_with_binomial_stays_below_index(
            l in prop::collection::vec((-9i64..10, 1i64..5), 2..6),
            p in -50i64..50,
            den in 1i64..20,
        ) {
            // 12^(1/8) = 2^(1/4) 3^(1/8) is reduced of index 8
            let (b, m) = (q(12, 1), 8u64);
            let mut coeffs: Vec<BigRational> = l.iter().map(|&(n, d)| q(n, d)).collect();
            if coeffs.last().unwrap().is_zero() {
                *coeffs.last_mut().unwrap() = q(1, 1);
            }
            prop_assert!(lemma2_check(&b, m, &coeffs, FactorBudget::default()).unwrap().is_irrational());
            // u(X) = q * sum l_j X^j - p, supposing the value were p/q
            let mut u_coeffs: Vec<BigRational> = coeffs.iter().map(|c| c * q(den, 1)).collect();
            u_coeffs[0] -= q(p, 1);
            let u = PolyQ::new(u_coeffs);
            let v = PolyQ::binomial(m as usize, &b);
            let r = poly_gcd(&u, &v).unwrap();
            prop_assert!(r.degree().unwrap() < m as usize);
            // X^m - b is irreducible, so no common factor survives
            prop_assert_eq!(r.degree(), Some(0));
        }
    }
}
