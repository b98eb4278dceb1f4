mod support;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use radicalc_core::arith::FactorBudget;
use radicalc_core::exprlang::{lower, parse, Expr, ExprKind};
use radicalc_core::numeric::eval_sum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::*;

/// Closed interval with rational endpoints.
#[derive(Clone, Debug)]
struct Iv(BigRational, BigRational);

impl Iv {
    fn point(q: BigRational) -> Iv {
        Iv(q.clone(), q)
    }

    fn add(&self, o: &Iv) -> Iv {
        Iv(&self.0 + &o.0, &self.1 + &o.1)
    }

    fn neg(&self) -> Iv {
        Iv(-&self.1, -&self.0)
    }

    fn mul(&self, o: &Iv) -> Iv {
        let c = [&self.0 * &o.0, &self.0 * &o.1, &self.1 * &o.0, &self.1 * &o.1];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Iv(lo, hi)
    }
}

/// Exact value of a subtree without radicals.
fn exact(e: &Expr) -> BigRational {
    match &e.kind {
        ExprKind::Literal(n) => BigRational::from_integer(n.clone().into()),
        ExprKind::Neg(a) => -exact(a),
        ExprKind::Add(a, b) => exact(a) + exact(b),
        ExprKind::Sub(a, b) => exact(a) - exact(b),
        ExprKind::Mul(a, b) => exact(a) * exact(b),
        ExprKind::Div(a, b) => exact(a) / exact(b),
        ExprKind::Pow(a, k) => num_traits::pow::Pow::pow(exact(a), *k as i32),
        ExprKind::Rt(..) => panic!("radical inside a rational subtree"),
    }
}

/// Direct interval evaluation of the tree, brackets of width 2^-k per root.
fn direct(e: &Expr, k: usize) -> Iv {
    match &e.kind {
        ExprKind::Literal(_) => Iv::point(exact(e)),
        ExprKind::Rt(a, m) => {
            let (lo, hi) = root_bracket(&exact(a), *m as u32, k);
            Iv(lo, hi)
        }
        ExprKind::Neg(a) => direct(a, k).neg(),
        ExprKind::Add(a, b) => direct(a, k).add(&direct(b, k)),
        ExprKind::Sub(a, b) => direct(a, k).add(&direct(b, k).neg()),
        ExprKind::Mul(a, b) => direct(a, k).mul(&direct(b, k)),
        ExprKind::Div(a, b) => direct(a, k).mul(&Iv::point(exact(b).recip())),
        ExprKind::Pow(a, p) if *p < 0 => Iv::point(exact(e)),
        ExprKind::Pow(a, p) => {
            let base = direct(a, k);
            (0..*p).fold(Iv::point(BigRational::one()), |acc, _| acc.mul(&base))
        }
    }
}

fn lit(n: u64) -> Expr {
    Expr::literal(n)
}

fn rational_tree(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.4) {
        return lit(rng.gen_range(0..=20));
    }
    match rng.gen_range(0..6) {
        0 => Expr::negation(rational_tree(rng, depth - 1)),
        1 => Expr::sum(rational_tree(rng, depth - 1), rational_tree(rng, depth - 1)),
        2 => Expr::difference(rational_tree(rng, depth - 1), rational_tree(rng, depth - 1)),
        3 => Expr::product(rational_tree(rng, depth - 1), rational_tree(rng, depth - 1)),
        4 => Expr::quotient(rational_tree(rng, depth - 1), nonzero_rational(rng, depth - 1)),
        _ => {
            let base = nonzero_rational(rng, depth - 1);
            Expr::pow(base, rng.gen_range(-2..=2))
        }
    }
}

fn nonzero_rational(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    let e = rational_tree(rng, depth);
    if exact(&e).is_zero() {
        Expr::sum(e, lit(1))
    } else {
        e
    }
}

fn positive_rational(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    let e = rational_tree(rng, depth);
    let v = exact(&e);
    if v.is_positive() {
        return e;
    }
    let shift = (-v).floor().to_integer().to_u64().unwrap() + 1;
    Expr::difference(lit(shift), e)
}

fn tree(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.6) {
            Expr::rt(positive_rational(rng, 2), rng.gen_range(1..=8))
        } else {
            rational_tree(rng, 1)
        };
    }
    match rng.gen_range(0..6) {
        0 => Expr::negation(tree(rng, depth - 1)),
        1 => Expr::sum(tree(rng, depth - 1), tree(rng, depth - 1)),
        2 => Expr::difference(tree(rng, depth - 1), tree(rng, depth - 1)),
        3 => Expr::product(tree(rng, depth - 1), tree(rng, depth - 1)),
        4 => Expr::quotient(tree(rng, depth - 1), nonzero_rational(rng, 1)),
        _ => Expr::pow(tree(rng, depth - 1), rng.gen_range(0..=3)),
    }
}

#[test]
fn lowering_is_a_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..300 {
        let e = tree(&mut rng, 3);
        // go through text so the parser is exercised as well
        let parsed = parse(&e.to_string()).unwrap();
        assert_eq!(parsed, e);
        let s = lower(&parsed, FactorBudget::default()).unwrap_or_else(|err| panic!("{e}: {err}"));
        let a = eval_sum(&s, 128).unwrap();
        let Iv(lo, hi) = direct(&e, 200);
        let scale = lo.abs().max(hi.abs()).max(BigRational::one());
        let tol = pow2(-96) * &scale;
        let mid = (&lo + &hi) / q(2, 1);
        assert!(&hi - &lo <= tol, "oracle too coarse for {e}");
        assert!((a.midpoint() - mid).abs() <= tol, "{e} lowered to {s}");
    }
}

fn span_inside(text: &str) {
    let len = text.len();
    match parse(text) {
        Err(err) => assert!(err.span.start <= err.span.end && err.span.end <= len, "{text:?}"),
        Ok(e) => {
            if let Err(err) = lower(&e, FactorBudget(10_000)) {
                assert!(err.span.start <= err.span.end && err.span.end <= len, "{text:?}");
                assert!(text.is_char_boundary(err.span.start));
            }
        }
    }
}

#[test]
fn error_spans_stay_inside_the_input() {
    let alphabet: Vec<char> = "rt(sqrt),0123456789+-*/^ x é".chars().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..5000 {
        let len = rng.gen_range(0..24);
        let text: String = (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect();
        span_inside(&text);
    }
    for text in ["rt(rt(2,2),2)", "1/(1-1)", "rt(0-1, 3)", "rt(2,2)^(-1)", "rt(5, 0)", "(", ""] {
        span_inside(text);
    }
}
