use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{Expr, ExprKind, Span};
use crate::arith::{rational_pow, BigRational, FactorBudget};
use crate::error::Error;
use crate::radical::reduce_radical;
use crate::reduced_set::construct_reduced_set;
use crate::sumalg::RadicalSum;

/// A kernel error tagged with the span of the subexpression that raised it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerError {
    pub error: Error,
    pub span: Span,
}

impl fmt::Display for LowerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (at bytes {})", self.error, self.span)
    }
}

impl std::error::Error for LowerError {}

fn at(span: Span) -> impl Fn(Error) -> LowerError {
    move |error| LowerError { error, span }
}

fn domain(span: Span, msg: impl Into<String>) -> LowerError {
    LowerError {
        error: Error::Domain(msg.into()),
        span,
    }
}

/// Largest estimated size, in bits, of the result of a power.
pub const MAX_POWER_BITS: u64 = 1 << 22;
/// Largest estimated work for a power: result bits times the square of the
/// number of monomials the result can have.
pub const MAX_POWER_WORK: u64 = 1 << 26;

fn rational_bits(q: &BigRational) -> u64 {
    q.numer().bits() + q.denom().bits()
}

/// Rejects powers whose exact result would be unreasonably large. The size
/// of `s^k` is estimated as `k` times the bits needed to write `s`; every
/// product along the way multiplies sums of at most as many terms as there
/// are monomials over the reduced set of `s`.
fn check_power_size(s: &RadicalSum, k: u64, span: Span) -> Result<(), LowerError> {
    if let Some(q) = s.is_rational() {
        if q.is_zero() || q.abs().is_one() {
            return Ok(());
        }
    }
    let size = rational_bits(s.rational_part())
        + s.terms()
            .map(|(atom, c)| rational_bits(c) + atom.radicand().bits() + 1)
            .sum::<u64>();
    let bits = size.saturating_mul(k);
    let monomials = construct_reduced_set(s)
        .ok()
        .and_then(|set| set.tuple_count())
        .unwrap_or(u64::MAX);
    let work = bits.saturating_mul(monomials.saturating_mul(monomials));
    if bits > MAX_POWER_BITS || work > MAX_POWER_WORK {
        return Err(LowerError {
            error: Error::BudgetExceeded(format!(
                "power {k} of a {size}-bit sum with up to {monomials} monomials is too large"
            )),
            span,
        });
    }
    Ok(())
}

fn positive_radicand(e: &Expr, budget: FactorBudget) -> Result<BigRational, LowerError> {
    let s = lower(e, budget)?;
    let q = s
        .is_rational()
        .ok_or_else(|| domain(e.span, "radicand is irrational"))?;
    if !q.is_positive() {
        return Err(domain(e.span, format!("radicand {q} is not positive")));
    }
    Ok(q)
}

/// Evaluates an expression to a normalized radical sum.
pub fn lower(e: &Expr, budget: FactorBudget) -> Result<RadicalSum, LowerError> {
    match &e.kind {
        ExprKind::Literal(n) => Ok(RadicalSum::from_rational(BigRational::from_integer(
            n.clone().into(),
        ))),
        ExprKind::Rt(radicand, m) => {
            let b = positive_radicand(radicand, budget)?;
            let c = reduce_radical(&b, *m, budget).map_err(at(e.span))?;
            Ok(RadicalSum::from_canonical(&c))
        }
        ExprKind::Neg(a) => Ok(lower(a, budget)?.neg()),
        ExprKind::Add(a, b) => Ok(lower(a, budget)?.add(&lower(b, budget)?)),
        ExprKind::Sub(a, b) => Ok(lower(a, budget)?.sub(&lower(b, budget)?)),
        ExprKind::Mul(a, b) => lower(a, budget)?
            .try_mul(&lower(b, budget)?)
            .map_err(at(e.span)),
        ExprKind::Div(a, b) => {
            let num = lower(a, budget)?;
            let q = lower(b, budget)?
                .is_rational()
                .ok_or_else(|| domain(b.span, "division by an irrational sum"))?;
            if q.is_zero() {
                return Err(domain(b.span, "division by zero"));
            }
            Ok(num.scale(&q.recip()))
        }
        ExprKind::Pow(base, k) => {
            let s = lower(base, budget)?;
            check_power_size(&s, k.unsigned_abs(), e.span)?;
            if *k >= 0 {
                return s.try_pow(*k as u64).map_err(at(e.span));
            }
            let q = s
                .is_rational()
                .ok_or_else(|| domain(base.span, "negative power of an irrational sum"))?;
            if q.is_zero() {
                return Err(domain(base.span, "negative power of zero"));
            }
            Ok(RadicalSum::from_rational(rational_pow(
                &(BigRational::one() / q),
                k.unsigned_abs(),
            )))
        }
    }
}

/// Reads each expression as a single `rt(b, m)` with a rational radicand and
/// returns the `(b, m)` pairs.
pub fn radical_candidates(
    items: &[Expr],
    budget: FactorBudget,
) -> Result<Vec<(BigRational, u64)>, LowerError> {
    items
        .iter()
        .map(|item| match &item.kind {
            ExprKind::Rt(radicand, m) => Ok((positive_radicand(radicand, budget)?, *m)),
            _ => Err(domain(item.span, "expected a radical of the form rt(b, m)")),
        })
        .collect()
}
