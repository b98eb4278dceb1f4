mod support;

use num_traits::{Signed, Zero};
use radicalc_core::arith::FactorBudget;
use radicalc_core::numeric::{eval_canonical, eval_poly, eval_sum, separated_from_rational, Separation};
use radicalc_core::polyq::{minimal_polynomial, minimal_polynomial_of};
use radicalc_core::radical::{atom_mul, atom_pow, reduce_radical, CanonicalRadical};
use radicalc_core::reduced_set::{construct_reduced_set, express_in_basis, verify_reduced_set};
use radicalc_core::sumalg::{lemma2_check, normalize_sum, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::*;

const BUDGET: FactorBudget = FactorBudget::DEFAULT;

#[test]
fn verdicts_agree_with_numeric_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut irrational = 0;
    for _ in 0..300 {
        let terms = random_terms(&mut rng);
        let s = normalize_sum(&terms, BUDGET).unwrap();
        let a = eval_sum(&s, 256).unwrap();
        match s.verdict() {
            Verdict::Rational(v) => assert!(a.contains(&v)),
            Verdict::Irrational => {
                irrational += 1;
                assert_eq!(
                    separated_from_rational(&a, 10_000).unwrap(),
                    Separation::Excluded,
                    "{s} looks rational"
                );
            }
        }
    }
    assert!(irrational > 100);
}

#[test]
fn cancelling_sums_are_rational() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..100 {
        let mut terms = random_terms(&mut rng);
        let shift = random_coeff(&mut rng);
        let mirror: Vec<_> = terms
            .iter()
            .map(|t| {
                // the same radical with the radicand scaled by a perfect power
                let k = q(rng.gen_range(1..=4), rng.gen_range(1..=4));
                let scale = k.pow(t.index as i32);
                radicalc_core::sumalg::RadicalTerm::new(-&t.coeff / &k, &t.radicand * scale, t.index)
            })
            .collect();
        terms.extend(mirror);
        terms.push(radicalc_core::sumalg::RadicalTerm::new(shift.clone(), q(1, 1), 1));
        let s = normalize_sum(&terms, BUDGET).unwrap();
        assert_eq!(s.verdict(), Verdict::Rational(shift));
    }
}

#[test]
fn basis_expressions_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let s = normalize_sum(&random_terms(&mut rng), BUDGET).unwrap();
        let basis = construct_reduced_set(&s).unwrap();
        let expr = express_in_basis(&s, &basis).unwrap();
        assert_eq!(expr.to_sum().unwrap(), s);
        if basis.tuple_count().is_some_and(|t| t <= 20_000) && !basis.is_empty() {
            let report = verify_reduced_set(&basis.as_candidates(), 20_000, BUDGET).unwrap();
            assert!(report.is_reduced(), "{basis} is not reduced");
        }
    }
}

#[test]
fn polynomials_in_one_radical_are_irrational() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let mut done = 0;
    while done < 100 {
        let b = random_radicand(&mut rng);
        let m = rng.gen_range(2..=12u64);
        let root = reduce_radical(&b, m, BUDGET).unwrap();
        if root.order() != m {
            continue;
        }
        let t = rng.gen_range(1..m) as usize;
        let mut coeffs: Vec<_> = (0..=t)
            .map(|_| if rng.gen_bool(0.3) { q(0, 1) } else { random_coeff(&mut rng) })
            .collect();
        coeffs[t] = random_coeff(&mut rng);
        assert_eq!(lemma2_check(&b, m, &coeffs, BUDGET).unwrap(), Verdict::Irrational);
        done += 1;
    }
}

#[test]
fn minimal_polynomials_vanish_and_are_minimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..100 {
        let factors: Vec<_> = (0..rng.gen_range(1..=3))
            .map(|_| (random_radicand(&mut rng), rng.gen_range(1..=8u64), rng.gen_range(0..=3u64)))
            .collect();
        let p = minimal_polynomial(&factors, BUDGET).unwrap();
        let mut c = CanonicalRadical::one();
        for (b, m, e) in &factors {
            c = atom_mul(&c, &atom_pow(&reduce_radical(b, *m, BUDGET).unwrap(), *e).unwrap()).unwrap();
        }
        let x = eval_canonical(&c, 128).unwrap();
        let v = eval_poly(&p, &x, 128);
        let scale = p.coeffs().iter().map(|k| k.abs()).fold(q(1, 1), |a, k| if k > a { k } else { a });
        assert!(v.magnitude_bound() / scale < pow2(-100), "{p} does not vanish at {c}");
        let s = p.degree().unwrap() as u64;
        assert_eq!(s, c.order());
        for d in 1..s {
            if s.is_multiple_of(d) {
                assert!(!atom_pow(&c, d).unwrap().is_rational());
            }
        }
        assert_eq!(p, minimal_polynomial_of(&c.coeff, c.atom.as_ref()).unwrap());
        assert!(!p.coeff(0).is_zero() || c.coeff.is_zero());
    }
}

#[test]
fn adding_terms_only_refines_the_orders() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let mut checked = 0;
    for _ in 0..200 {
        let mut terms = random_terms(&mut rng);
        let old = normalize_sum(&terms, BUDGET).unwrap();
        terms.extend(random_terms(&mut rng).into_iter().take(1));
        let new = normalize_sum(&terms, BUDGET).unwrap();
        // a term that cancels an old one can lower an order, so only sums
        // that keep every old atom are compared
        if !old.terms().all(|(atom, _)| new.terms().any(|(a, _)| a == atom)) {
            continue;
        }
        checked += 1;
        let before = construct_reduced_set(&old).unwrap();
        let after = construct_reduced_set(&new).unwrap();
        for (p, eta) in before.generators() {
            let (_, new_eta) = after.generators().iter().find(|(q, _)| q == p).unwrap();
            assert!(new_eta.is_multiple_of(*eta), "{p}: {eta} -> {new_eta}");
        }
    }
    assert!(checked > 150);
}
