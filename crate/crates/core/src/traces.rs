//! Point counts and Frobenius traces for reductions of the Frey curve.
//!
//! Counting is by enumeration: `#E(F) = 1 + Σ_x (1 + χ(x³ + Ax + B))` with
//! the quadratic character `χ` read from a table built once per field.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::kfield::{
    self, FiniteField, KFieldError, PrimeField, QuadField, ResidueElem, ResidueField, RootChoice,
    SplitType,
};

/// Largest field the enumerating counter accepts.
pub const MAX_FIELD_ORDER: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error(transparent)]
    Field(#[from] KFieldError),
    #[error("singular curve: 4A³ + 27B² = 0")]
    Singular,
    #[error("field of order {0} exceeds the enumeration budget")]
    FieldTooLarge(u64),
    #[error("non-primitive pair: a ≡ b ≡ 0 (mod {0})")]
    NonPrimitive(u64),
    #[error("traces are only defined at primes q ∤ 6, got {0}")]
    BadPrime(u64),
    #[error("element does not belong to the requested field")]
    FieldMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduction {
    Good,
    Multiplicative,
}

/// Frobenius data of E_{a,b} at a prime `q`.
///
/// `aq` is set for split `q` with good reduction, `aq2` (the trace over
/// F_{q²}) for inert `q` with good reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub q: u64,
    pub split: SplitType,
    pub status: Reduction,
    pub aq: Option<i64>,
    pub aq2: Option<i64>,
}

/// Enumerating point counter over one finite field.
pub struct PointCounter<F: FiniteField> {
    field: F,
    elems: Vec<F::Elem>,
    cubes: Vec<F::Elem>,
    chi: Vec<i8>,
}

impl<F: FiniteField> PointCounter<F> {
    pub fn new(field: F) -> Result<Self, TraceError> {
        let order = field.order();
        if order > MAX_FIELD_ORDER {
            return Err(TraceError::FieldTooLarge(order));
        }
        let n = order as usize;
        let elems: Vec<F::Elem> = (0..n).map(|i| field.element(i)).collect();
        let cubes = elems.iter().map(|&x| field.mul(field.mul(x, x), x)).collect();
        let mut chi = vec![-1i8; n];
        chi[field.index(field.zero())] = 0;
        for &x in elems.iter().skip(1) {
            chi[field.index(field.mul(x, x))] = 1;
        }
        Ok(PointCounter { field, elems, cubes, chi })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn is_singular(&self, a: F::Elem, b: F::Elem) -> bool {
        let f = &self.field;
        let a3 = f.mul(f.mul(a, a), a);
        let b2 = f.mul(b, b);
        f.is_zero(f.add(f.mul(f.from_int(4), a3), f.mul(f.from_int(27), b2)))
    }

    /// `#E(F)` for `y² = x³ + ax + b`, point at infinity included.
    pub fn count(&self, a: F::Elem, b: F::Elem) -> Result<u64, TraceError> {
        if self.is_singular(a, b) {
            return Err(TraceError::Singular);
        }
        Ok(self.count_unchecked(a, b))
    }

    fn count_unchecked(&self, a: F::Elem, b: F::Elem) -> u64 {
        let f = &self.field;
        let mut acc: i64 = 0;
        for (&x, &x3) in self.elems.iter().zip(&self.cubes) {
            let rhs = f.add(f.add(x3, f.mul(a, x)), b);
            acc += self.chi[f.index(rhs)] as i64;
        }
        (self.elems.len() as i64 + 1 + acc) as u64
    }

    /// `|F| + 1 − #E(F)`.
    pub fn trace(&self, a: F::Elem, b: F::Elem) -> Result<i64, TraceError> {
        Ok(self.field.order() as i64 + 1 - self.count(a, b)? as i64)
    }
}

/// Number of points on `y² = x³ + Ax + B` over `F`.
pub fn count_points(a: &ResidueElem, b: &ResidueElem, field: &ResidueField) -> Result<u64, TraceError> {
    match *field {
        ResidueField::Prime { q } => {
            let (ResidueElem::Fq(x), ResidueElem::Fq(y)) = (a, b) else {
                return Err(TraceError::FieldMismatch);
            };
            PointCounter::new(PrimeField { q })?.count(x % q, y % q)
        }
        ResidueField::Quadratic { q, nonresidue } => {
            let quad = QuadField::new(q, nonresidue).ok_or(KFieldError::NotOddPrime(q))?;
            let (ResidueElem::Fq2(a0, a1), ResidueElem::Fq2(b0, b1)) = (field.coerce(a), field.coerce(b))
            else {
                unreachable!()
            };
            PointCounter::new(quad)?.count((a0, a1), (b0, b1))
        }
    }
}

/// Coefficients (A, B) of E_{a,b} reduced into `f`, where `s` is the image of √−3.
pub fn frey_coefficients<F: FiniteField>(f: &F, s: F::Elem, abar: u64, bbar: u64) -> (F::Elem, F::Elem) {
    let a = f.from_int(abar as i64);
    let b = f.from_int(bbar as i64);
    let b2 = f.mul(b, b);
    let b3 = f.mul(b2, b);
    let b4 = f.mul(b2, b2);
    let b6 = f.mul(b3, b3);
    let ab = f.mul(a, b);
    let coeff_a = f.add(
        f.mul(f.from_int(-135), b4),
        f.mul(f.mul(f.from_int(-36), ab), s),
    );
    let coeff_b = f.add(
        f.add(f.mul(f.from_int(36), f.mul(a, a)), f.mul(f.from_int(-594), b6)),
        f.mul(f.mul(f.from_int(-252), f.mul(a, b3)), s),
    );
    (coeff_a, coeff_b)
}

fn check_prime(q: u64) -> Result<SplitType, TraceError> {
    if q == 2 || q == 3 {
        return Err(TraceError::BadPrime(q));
    }
    Ok(kfield::split_type(q)?)
}

fn is_multiplicative(abar: u64, bbar: u64, q: u64) -> bool {
    let f = PrimeField { q };
    let b3 = f.mul(f.mul(bbar, bbar), bbar);
    f.add(f.mul(abar, abar), f.mul(3, f.mul(b3, b3))) == 0
}

/// Frobenius trace of E_{a,b} at `q` with the canonical root of −3.
pub fn frobenius_trace(a: &BigInt, b: &BigInt, q: u64) -> Result<TraceRecord, TraceError> {
    frobenius_trace_with(a, b, q, RootChoice::Canonical)
}

/// As [`frobenius_trace`], with an explicit prime above a split `q`.
pub fn frobenius_trace_with(
    a: &BigInt,
    b: &BigInt,
    q: u64,
    choice: RootChoice,
) -> Result<TraceRecord, TraceError> {
    let split = check_prime(q)?;
    let (abar, bbar) = (arith::big_mod_u64(a, q), arith::big_mod_u64(b, q));
    if abar == 0 && bbar == 0 {
        return Err(TraceError::NonPrimitive(q));
    }
    let mut rec = TraceRecord { q, split, status: Reduction::Multiplicative, aq: None, aq2: None };
    if is_multiplicative(abar, bbar, q) {
        return Ok(rec);
    }
    rec.status = Reduction::Good;
    match split {
        SplitType::Split => {
            let f = PrimeField { q };
            let (ca, cb) = frey_coefficients(&f, kfield::root_for(q, choice)?, abar, bbar);
            rec.aq = Some(PointCounter::new(f)?.trace(ca, cb)?);
        }
        SplitType::Inert => {
            let f = QuadField::with_sqrt_minus3(q).expect("inert prime");
            let (ca, cb) = frey_coefficients(&f, (0, 1), abar, bbar);
            rec.aq2 = Some(PointCounter::new(f)?.trace(ca, cb)?);
        }
        SplitType::Ramified => unreachable!("q = 3 rejected above"),
    }
    Ok(rec)
}

/// Trace data of one residue cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CellTrace {
    Multiplicative,
    /// a_q(E) for split `q`, a_{q²}(E) for inert `q`.
    Good(i64),
}

/// Traces for every residue pair `(ā, b̄) ≠ (0, 0)` modulo one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceTable {
    q: u64,
    split: SplitType,
    cells: Vec<CellTrace>,
}

impl TraceTable {
    /// Evaluate the full grid, rows in parallel. Split primes use `choice`.
    pub fn build(q: u64, choice: RootChoice) -> Result<Self, TraceError> {
        let split = check_prime(q)?;
        let rows: Vec<Vec<CellTrace>> = match split {
            SplitType::Split => {
                let counter = PointCounter::new(PrimeField { q })?;
                grid(&counter, kfield::root_for(q, choice)?, q)
            }
            SplitType::Inert => {
                let counter = PointCounter::new(QuadField::with_sqrt_minus3(q).expect("inert prime"))?;
                grid(&counter, (0, 1), q)
            }
            SplitType::Ramified => unreachable!("q = 3 rejected above"),
        };
        Ok(TraceTable { q, split, cells: rows.into_iter().flatten().collect() })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn split(&self) -> SplitType {
        self.split
    }

    /// `None` for `(0, 0)`; residues are taken mod `q`.
    pub fn get(&self, abar: u64, bbar: u64) -> Option<CellTrace> {
        let (a, b) = (abar % self.q, bbar % self.q);
        if a == 0 && b == 0 {
            return None;
        }
        Some(self.cells[(a * self.q + b) as usize])
    }

    /// All nonzero cells in lexicographic order of `(ā, b̄)`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64, CellTrace)> + '_ {
        let q = self.q;
        self.cells
            .iter()
            .enumerate()
            .skip(1)
            .map(move |(i, &c)| (i as u64 / q, i as u64 % q, c))
    }
}

fn grid<F: FiniteField>(counter: &PointCounter<F>, s: F::Elem, q: u64) -> Vec<Vec<CellTrace>> {
    let order = counter.field().order() as i64;
    (0..q)
        .into_par_iter()
        .map(|abar| {
            (0..q)
                .map(|bbar| {
                    if (abar == 0 && bbar == 0) || is_multiplicative(abar, bbar, q) {
                        return CellTrace::Multiplicative;
                    }
                    let (ca, cb) = frey_coefficients(counter.field(), s, abar, bbar);
                    debug_assert!(!counter.is_singular(ca, cb));
                    CellTrace::Good(order + 1 - counter.count_unchecked(ca, cb) as i64)
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frey::frey_model;

    fn fq(q: u64, a: i64, b: i64) -> u64 {
        let f = ResidueField::Prime { q };
        count_points(&f.from_int(a), &f.from_int(b), &f).unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(fq(5, 1, 0), 4);
        assert_eq!(fq(7, 0, 2), 9);
        assert_eq!(fq(5, -1, 0), 8);
    }

    #[test]
    fn rejects_singular_and_oversized() {
        let f = ResidueField::Prime { q: 7 };
        let z = f.from_int(0);
        assert_eq!(count_points(&z, &z, &f), Err(TraceError::Singular));
        assert_eq!(
            PointCounter::new(PrimeField { q: 100_000_007 }).err(),
            Some(TraceError::FieldTooLarge(100_000_007))
        );
    }

    #[test]
    fn spec_examples() {
        let one = BigInt::from(1);
        let r = frobenius_trace(&one, &one, 7).unwrap();
        assert_eq!((r.status, r.aq), (Reduction::Good, Some(-1)));

        let r = frobenius_trace(&BigInt::from(47), &BigInt::from(2), 7).unwrap();
        assert_eq!(r.status, Reduction::Multiplicative);
        assert_eq!((r.aq, r.aq2), (None, None));

        // (0,1) at q = 5: y² = x³ − 135x − 594 over F_25
        let f = kfield::residue_field(5).unwrap();
        let n = count_points(&f.from_int(-135), &f.from_int(-594), &f).unwrap();
        let r = frobenius_trace(&BigInt::from(0), &one, 5).unwrap();
        assert_eq!(r.aq2, Some(26 - n as i64));

        assert_eq!(
            frobenius_trace(&BigInt::from(5), &BigInt::from(10), 5),
            Err(TraceError::NonPrimitive(5))
        );
        assert_eq!(frobenius_trace(&one, &one, 3), Err(TraceError::BadPrime(3)));
    }

    #[test]
    fn direct_reduction_matches_kfield() {
        for q in [7u64, 13, 5, 11] {
            let f = kfield::residue_field(q).unwrap();
            for (a, b) in [(1i64, 2i64), (47, 2), (-5, 3), (2, 1)] {
                let e = frey_model(a, b).unwrap();
                let ra = kfield::reduce(e.coeff_a(), q, RootChoice::Canonical).unwrap();
                let rb = kfield::reduce(e.coeff_b(), q, RootChoice::Canonical).unwrap();
                let (abar, bbar) = (arith::rem_euclid_i64(a, q), arith::rem_euclid_i64(b, q));
                let (ca, cb) = match f {
                    ResidueField::Prime { q } => {
                        let (x, y) = frey_coefficients(&PrimeField { q }, kfield::sqrt_minus3(q).unwrap(), abar, bbar);
                        (ResidueElem::Fq(x), ResidueElem::Fq(y))
                    }
                    ResidueField::Quadratic { q, .. } => {
                        let qf = QuadField::with_sqrt_minus3(q).unwrap();
                        let (x, y) = frey_coefficients(&qf, (0, 1), abar, bbar);
                        (ResidueElem::Fq2(x.0, x.1), ResidueElem::Fq2(y.0, y.1))
                    }
                };
                assert_eq!((ra, rb), (ca, cb), "q={q} ({a},{b})");
            }
        }
    }

    #[test]
    fn golden_traces() {
        let golden: std::collections::BTreeMap<String, Vec<(u64, u64, String, Option<i64>)>> =
            serde_json::from_str(include_str!("../tests/golden/traces.json")).unwrap();
        for (q, rows) in golden {
            let q: u64 = q.parse().unwrap();
            let table = TraceTable::build(q, RootChoice::Canonical).unwrap();
            assert_eq!(rows.len() as u64, q * q - 1);
            for (a, b, kind, tr) in rows {
                let got = table.get(a, b).unwrap();
                match kind.as_str() {
                    "mult" => assert_eq!(got, CellTrace::Multiplicative),
                    _ => assert_eq!(got, CellTrace::Good(tr.unwrap()), "q={q} ({a},{b})"),
                }
            }
        }
    }

    #[test]
    fn conjugate_choice_invariance() {
        for q in arith::primes_in(5, 60) {
            if kfield::split_type(q).unwrap() != SplitType::Split {
                continue;
            }
            let t0 = TraceTable::build(q, RootChoice::Canonical).unwrap();
            let t1 = TraceTable::build(q, RootChoice::Conjugate).unwrap();
            assert_eq!(t0, t1, "q={q}");
        }
    }

    #[test]
    fn hasse_bounds() {
        for q in arith::primes_in(5, 200) {
            let rows = if q <= 60 { q } else { 3 };
            let split = kfield::split_type(q).unwrap();
            for a in 0..rows {
                for b in 0..q.min(7) {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let r = frobenius_trace(&BigInt::from(a), &BigInt::from(b), q).unwrap();
                    if let Some(t) = r.aq {
                        assert!((t * t) as u64 <= 4 * q, "q={q} aq={t}");
                    }
                    if let Some(t) = r.aq2 {
                        assert!(t.unsigned_abs() <= 2 * q, "q={q} aq2={t}");
                    }
                    assert_eq!(r.split, split);
                    assert_eq!(r.status == Reduction::Multiplicative, is_multiplicative(a, b % q, q));
                }
            }
        }
    }

    #[test]
    fn frobenius_square_relation() {
        for q in [7u64, 13, 19] {
            let base = PointCounter::new(PrimeField { q }).unwrap();
            let ext = QuadField::new(q, arith::least_nonresidue(q)).unwrap();
            let big = PointCounter::new(ext).unwrap();
            let r = kfield::sqrt_minus3(q).unwrap();
            for a in 0..q {
                for b in 0..q {
                    if (a == 0 && b == 0) || is_multiplicative(a, b, q) {
                        continue;
                    }
                    let (ca, cb) = frey_coefficients(&base.field, r, a, b);
                    let aq = base.trace(ca, cb).unwrap();
                    let aq2 = big.trace(ext.lift(ca), ext.lift(cb)).unwrap();
                    assert_eq!(aq2, aq * aq - 2 * q as i64, "q={q} ({a},{b})");
                }
            }
        }
    }
}
