//! Reduced sets: prime roots `q_k^(1/eta_k)` whose monomials
//! `prod q_k^(e_k/eta_k)`, `0 <= e_k < eta_k`, are irrational except for the
//! empty monomial.
//!
//! [`construct_reduced_set`] picks, for every prime under a radical in a sum,
//! the lcm of that prime's exponent denominators. Distinct prime bases make
//! the result reduced, and every atom of the sum becomes a monomial with
//! integer exponents ([`express_in_basis`]). [`verify_reduced_set`] checks
//! the defining property by enumerating every exponent tuple.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::{is_prime, FactorBudget};
use crate::error::{Error, Result};
use crate::radical::{atom_mul, atom_pow, reduce_radical, CanonicalRadical, RadicalAtom};
use crate::sumalg::RadicalSum;

pub const DEFAULT_TUPLE_BUDGET: u64 = 1_000_000;

/// Generators `(q_k, eta_k)`: distinct primes in ascending order, each with
/// an order `eta_k >= 2`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ReducedSet {
    generators: Vec<(BigUint, u64)>,
}

impl ReducedSet {
    pub fn new(generators: Vec<(BigUint, u64)>) -> Result<Self> {
        for pair in generators.windows(2) {
            if pair[0].0 >= pair[1].0 {
                return Err(Error::domain("reduced set primes must be strictly ascending"));
            }
        }
        for (q, eta) in &generators {
            if *eta < 2 {
                return Err(Error::domain(format!("order of {q} must be at least 2")));
            }
            if !is_prime(q) {
                return Err(Error::domain(format!("{q} is not prime")));
            }
        }
        Ok(ReducedSet { generators })
    }

    pub fn generators(&self) -> &[(BigUint, u64)] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Product of the orders, `None` on overflow.
    pub fn tuple_count(&self) -> Option<u64> {
        self.generators
            .iter()
            .try_fold(1u64, |acc, (_, eta)| acc.checked_mul(*eta))
    }

    /// The generators as `(radicand, index)` candidates.
    pub fn as_candidates(&self) -> Vec<(BigRational, u64)> {
        self.generators
            .iter()
            .map(|(q, eta)| (BigRational::from_integer(q.clone().into()), *eta))
            .collect()
    }

    fn position(&self, p: &BigUint) -> Option<usize> {
        self.generators.binary_search_by(|(q, _)| q.cmp(p)).ok()
    }

    /// `prod q_k^(e_k/eta_k)` as a canonical radical.
    pub fn monomial(&self, tuple: &[u64]) -> Result<CanonicalRadical> {
        if tuple.len() != self.generators.len() {
            return Err(Error::BasisMismatch(format!(
                "tuple of length {} for a basis of {} generators",
                tuple.len(),
                self.generators.len()
            )));
        }
        let mut acc = CanonicalRadical::one();
        for ((q, eta), &e) in self.generators.iter().zip(tuple) {
            let root = CanonicalRadical::from_atom(RadicalAtom::prime_root(q.clone(), *eta)?);
            acc = atom_mul(&acc, &atom_pow(&root, e)?)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for ReducedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generators.is_empty() {
            return f.write_str("{ }");
        }
        f.write_str("{ ")?;
        for (i, (q, eta)) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{q}^(1/{eta})")?;
        }
        f.write_str(" }")
    }
}

/// A sum written over the monomials of a reduced set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialExpression {
    basis: ReducedSet,
    rational_part: BigRational,
    monomials: BTreeMap<Vec<u64>, BigRational>,
}

impl MonomialExpression {
    pub fn basis(&self) -> &ReducedSet {
        &self.basis
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational_part
    }

    pub fn monomials(&self) -> &BTreeMap<Vec<u64>, BigRational> {
        &self.monomials
    }

    /// Rebuilds the sum from the monomials.
    pub fn to_sum(&self) -> Result<RadicalSum> {
        let mut sum = RadicalSum::from_rational(self.rational_part.clone());
        for (tuple, c) in &self.monomials {
            sum.add_scaled(c, &self.basis.monomial(tuple)?);
        }
        Ok(sum)
    }
}

/// For each prime under a radical, the lcm of its exponent denominators.
pub fn construct_reduced_set(s: &RadicalSum) -> Result<ReducedSet> {
    let mut orders: BTreeMap<BigUint, u64> = BTreeMap::new();
    for (atom, _) in s.terms() {
        for (p, e) in atom.exponents() {
            let eta = orders.entry(p.clone()).or_insert(1);
            let l = (*eta as u128).lcm(&(*e.denom() as u128));
            *eta = u64::try_from(l).map_err(|_| Error::ExponentOverflow)?;
        }
    }
    Ok(ReducedSet {
        generators: orders.into_iter().collect(),
    })
}

/// Encodes every atom of `s` as an exponent tuple over `basis`.
pub fn express_in_basis(s: &RadicalSum, basis: &ReducedSet) -> Result<MonomialExpression> {
    let mut monomials = BTreeMap::new();
    for (atom, c) in s.terms() {
        let mut tuple = vec![0u64; basis.len()];
        for (p, e) in atom.exponents() {
            let i = basis.position(p).ok_or_else(|| {
                Error::BasisMismatch(format!("prime {p} is not a generator of {basis}"))
            })?;
            let eta = basis.generators[i].1;
            if !eta.is_multiple_of(*e.denom()) {
                return Err(Error::BasisMismatch(format!(
                    "exponent {e} of {p} is not a multiple of 1/{eta}"
                )));
            }
            tuple[i] = e.numer() * (eta / e.denom());
        }
        monomials.insert(tuple, c.clone());
    }
    Ok(MonomialExpression {
        basis: basis.clone(),
        rational_part: s.rational_part().clone(),
        monomials,
    })
}

/// Result of the brute-force check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReducedSetReport {
    Reduced {
        tuples_checked: u64,
    },
    /// The lexicographically first nonzero tuple with a rational product.
    NotReduced {
        tuple: Vec<u64>,
        product: CanonicalRadical,
    },
}

impl ReducedSetReport {
    pub fn is_reduced(&self) -> bool {
        matches!(self, ReducedSetReport::Reduced { .. })
    }
}

fn canonical_candidates(
    candidates: &[(BigRational, u64)],
    budget: FactorBudget,
) -> Result<Vec<CanonicalRadical>> {
    candidates
        .iter()
        .map(|(b, m)| {
            let c = reduce_radical(b, *m, budget)?;
            if c.is_rational() {
                return Err(Error::domain(format!(
                    "{m}-th root of {b} is rational, not a reduced irrational"
                )));
            }
            Ok(c)
        })
        .collect()
}

/// Exponent-vector view of a list of atoms: each atom is a vector of
/// residues modulo the per-prime lcm of denominators, so a product of
/// powers is rational iff the weighted residue sum vanishes.
struct ResidueTable {
    moduli: Vec<u64>,
    steps: Vec<Vec<u64>>,
    orders: Vec<u64>,
}

impl ResidueTable {
    fn new(atoms: &[&RadicalAtom]) -> Result<Self> {
        let mut moduli_by_prime: BTreeMap<&BigUint, u64> = BTreeMap::new();
        for atom in atoms {
            for (p, e) in atom.exponents() {
                let d = moduli_by_prime.entry(p).or_insert(1);
                let l = (*d as u128).lcm(&(*e.denom() as u128));
                *d = u64::try_from(l).map_err(|_| Error::ExponentOverflow)?;
            }
        }
        let primes: Vec<&BigUint> = moduli_by_prime.keys().copied().collect();
        let moduli: Vec<u64> = moduli_by_prime.values().copied().collect();
        let steps = atoms
            .iter()
            .map(|atom| {
                primes
                    .iter()
                    .zip(&moduli)
                    .map(|(p, &d)| {
                        atom.exponent(p)
                            .map_or(0, |e| e.numer() * (d / e.denom()))
                    })
                    .collect()
            })
            .collect();
        let orders = atoms.iter().map(|a| a.order()).collect();
        Ok(ResidueTable {
            moduli,
            steps,
            orders,
        })
    }

    fn add_step(&self, acc: &mut [u64], i: usize) {
        for ((a, s), d) in acc.iter_mut().zip(&self.steps[i]).zip(&self.moduli) {
            *a = ((*a as u128 + *s as u128) % *d as u128) as u64;
        }
    }

    /// Depth-first walk in lexicographic order below a fixed prefix.
    fn walk(&self, pos: usize, acc: &mut Vec<u64>, tuple: &mut Vec<u64>, nonzero: bool) -> bool {
        if pos == self.orders.len() {
            return nonzero && acc.iter().all(|&a| a == 0);
        }
        let saved = acc.clone();
        for e in 0..self.orders[pos] {
            tuple[pos] = e;
            if e > 0 {
                self.add_step(acc, pos);
            }
            if self.walk(pos + 1, acc, tuple, nonzero || e > 0) {
                return true;
            }
        }
        tuple[pos] = 0;
        *acc = saved;
        false
    }

    fn first_rational_tuple(&self) -> Option<Vec<u64>> {
        let k = self.orders.len();
        if k == 0 {
            return None;
        }
        (0..self.orders[0]).into_par_iter().find_map_first(|e0| {
            let mut acc = vec![0u64; self.moduli.len()];
            for _ in 0..e0 {
                self.add_step(&mut acc, 0);
            }
            let mut tuple = vec![0u64; k];
            tuple[0] = e0;
            self.walk(1, &mut acc, &mut tuple, e0 > 0).then_some(tuple)
        })
    }
}

/// Checks by enumeration that no nonzero exponent tuple gives a rational
/// product.
///
/// Candidates are canonicalized first; each ranges over exponents below the
/// order of its canonical atom. A rational candidate is a domain error.
pub fn verify_reduced_set(
    candidates: &[(BigRational, u64)],
    tuple_budget: u64,
    factor_budget: FactorBudget,
) -> Result<ReducedSetReport> {
    let canon = canonical_candidates(candidates, factor_budget)?;
    let total = canon
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.order()))
        .filter(|&t| t <= tuple_budget)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "exponent tuple space exceeds the budget of {tuple_budget}"
            ))
        })?;
    let atoms: Vec<&RadicalAtom> = canon.iter().map(|c| c.atom.as_ref().expect("irrational")).collect();
    let table = ResidueTable::new(&atoms)?;
    match table.first_rational_tuple() {
        None => Ok(ReducedSetReport::Reduced {
            tuples_checked: total - 1,
        }),
        Some(tuple) => {
            let mut product = CanonicalRadical::one();
            for (c, &e) in canon.iter().zip(&tuple) {
                product = atom_mul(&product, &atom_pow(c, e)?)?;
            }
            debug_assert!(product.is_rational());
            Ok(ReducedSetReport::NotReduced { tuple, product })
        }
    }
}

/// Decides the reduced-set property without enumeration.
///
/// With `D` the lcm of the orders, each atom is a vector `v_i` in
/// `(Z/D)^primes`. The set is reduced iff the map from
/// `Z/m_1 x ... x Z/m_k` sending `e` to `sum e_i v_i` is injective, i.e. iff
/// the subgroup generated by the `v_i` has exactly `prod m_i` elements. That
/// size is `D^P / [Z^P : L]` where `L` is spanned by the `v_i` and `D Z^P`;
/// the index is the determinant of a Hermite normal form of `L`.
pub fn is_reduced_set_analytic(
    candidates: &[(BigRational, u64)],
    factor_budget: FactorBudget,
) -> Result<bool> {
    let canon = canonical_candidates(candidates, factor_budget)?;
    let atoms: Vec<&RadicalAtom> = canon.iter().map(|c| c.atom.as_ref().expect("irrational")).collect();
    let primes: Vec<&BigUint> = {
        let mut v: Vec<&BigUint> = atoms.iter().flat_map(|a| a.primes()).collect();
        v.sort();
        v.dedup();
        v
    };
    let lcm = atoms
        .iter()
        .fold(BigInt::one(), |acc, a| acc.lcm(&BigInt::from(a.order())));
    let mut rows: Vec<Vec<BigInt>> = atoms
        .iter()
        .map(|a| {
            primes
                .iter()
                .map(|p| {
                    a.exponent(p).map_or_else(BigInt::zero, |e| {
                        &lcm * BigInt::from(*e.numer()) / BigInt::from(*e.denom())
                    })
                })
                .collect()
        })
        .collect();
    for j in 0..primes.len() {
        let mut row = vec![BigInt::zero(); primes.len()];
        row[j] = lcm.clone();
        rows.push(row);
    }
    let index = lattice_index(rows, primes.len());
    let group_size = num_traits::pow(lcm, primes.len()) / index;
    let domain_size = atoms
        .iter()
        .fold(BigInt::one(), |acc, a| acc * BigInt::from(a.order()));
    Ok(group_size == domain_size)
}

/// Index in `Z^cols` of the full-rank lattice spanned by `rows`, via
/// gcd-based row echelon reduction.
fn lattice_index(mut rows: Vec<Vec<BigInt>>, cols: usize) -> BigInt {
    let mut det = BigInt::one();
    let mut top = 0;
    for col in 0..cols {
        loop {
            let pivot = (top..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(pivot) = pivot else {
                unreachable!("lattice contains D * Z^P and has full rank")
            };
            rows.swap(top, pivot);
            let mut done = true;
            for r in top + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let factor = rows[r][col].div_floor(&rows[top][col]);
                let pivot_row = rows[top].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x -= &factor * y;
                }
                if !rows[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        det *= rows[top][col].abs();
        top += 1;
    }
    det
}
