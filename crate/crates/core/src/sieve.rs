//! Exponent elimination by the congruence criterion B(q, f).
//!
//! For a solution with exponent p ≠ q and a newform f attached to it, p
//! divides B(q, f) for the residue pair (a mod q, b mod q). Running over every
//! nonzero pair modulo q bounds the possible p for f:
//!
//! ```text
//! multiplicative:  N((q + 1)² − a_q(f)²)
//! split, good:     N(a_q(E) − a_q(f))
//! inert, good:     N(a_q(f)² − a_{q²}(E) − 2q)
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::kfield::{RootChoice, SplitType};
use crate::newformdb::{self, NewformCache, NewformError, NewformRecord};
use crate::traces::{self, CellTrace, TraceError, TraceTable};

#[derive(Debug, Error)]
pub enum SieveError {
    #[error("auxiliary prime must be at least 5, got {0}")]
    BadPrime(u64),
    #[error("the residue pair (0, 0) carries no information")]
    ZeroPair,
    #[error("{label} has no stored eigenvalue a_{q}")]
    MissingEigenvalue { label: String, q: u64 },
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Newform(#[from] NewformError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellCase {
    SplitGood,
    InertGood,
    Multiplicative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SieveCell {
    pub q: u64,
    pub abar: u64,
    pub bbar: u64,
    pub case: CellCase,
    #[serde(serialize_with = "as_decimal")]
    pub b: BigInt,
}

fn as_decimal<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn check_q(q: u64) -> Result<(), SieveError> {
    if q < 5 || !arith::is_prime(q) {
        return Err(SieveError::BadPrime(q));
    }
    Ok(())
}

fn eigenvalue(f: &NewformRecord, q: u64) -> Result<&[BigInt], SieveError> {
    f.aq(q).ok_or_else(|| SieveError::MissingEigenvalue { label: f.label.clone(), q })
}

/// Per-(f, q) constants: a_q(f) and a_q(f)².
struct FormAtQ<'a> {
    f: &'a NewformRecord,
    q: u64,
    aq: Vec<BigInt>,
    aq_sq: Vec<BigInt>,
}

impl<'a> FormAtQ<'a> {
    fn new(f: &'a NewformRecord, q: u64) -> Result<Self, SieveError> {
        let aq = eigenvalue(f, q)?.to_vec();
        let aq_sq = newformdb::field_mul(f, &aq, &aq);
        Ok(FormAtQ { f, q, aq, aq_sq })
    }

    /// `c − x` for an integer `c` and a field element `x`.
    fn int_minus(&self, c: BigInt, x: &[BigInt]) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = x.iter().map(|v| -v).collect();
        out[0] += c;
        out
    }

    fn value(&self, split: SplitType, cell: CellTrace) -> Result<(CellCase, BigInt), SieveError> {
        let q = BigInt::from(self.q);
        let (case, elem) = match (cell, split) {
            (CellTrace::Multiplicative, _) => {
                let q1 = &q + 1u32;
                (CellCase::Multiplicative, self.int_minus(&q1 * &q1, &self.aq_sq))
            }
            (CellTrace::Good(t), SplitType::Split) => (CellCase::SplitGood, self.int_minus(BigInt::from(t), &self.aq)),
            (CellTrace::Good(t), _) => {
                // a_q(f)² − t − 2q = −((t + 2q) − a_q(f)²)
                let mut e = self.int_minus(BigInt::from(t) + 2u32 * &q, &self.aq_sq);
                e.iter_mut().for_each(|c| *c = -&*c);
                (CellCase::InertGood, e)
            }
        };
        Ok((case, newformdb::eigenvalue_norm(self.f, &elem)?))
    }
}

/// B(q, f) for the single residue pair `(ā, b̄)`.
pub fn criterion_b(f: &NewformRecord, q: u64, abar: u64, bbar: u64) -> Result<SieveCell, SieveError> {
    check_q(q)?;
    let (abar, bbar) = (abar % q, bbar % q);
    if abar == 0 && bbar == 0 {
        return Err(SieveError::ZeroPair);
    }
    let rec = traces::frobenius_trace(&BigInt::from(abar), &BigInt::from(bbar), q)?;
    let cell = match (rec.aq, rec.aq2) {
        (Some(t), _) | (_, Some(t)) => CellTrace::Good(t),
        _ => CellTrace::Multiplicative,
    };
    let (case, b) = FormAtQ::new(f, q)?.value(rec.split, cell)?;
    Ok(SieveCell { q, abar, bbar, case, b })
}

/// Outcome of the criterion for one newform at one auxiliary prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QOutcome {
    pub q: u64,
    /// Residue pairs with B = 0; any such pair lets every p survive.
    pub zero_cells: Vec<(u64, u64)>,
    pub survivors: Vec<u64>,
}

/// Evaluate every cell of `table` for `f` and return the surviving exponents.
pub fn survivors_in_table(f: &NewformRecord, table: &TraceTable, p_range: &[u64]) -> Result<QOutcome, SieveError> {
    let q = table.q();
    check_q(q)?;
    let form = FormAtQ::new(f, q)?;
    let mut memo: BTreeMap<CellTrace, BigInt> = BTreeMap::new();
    let mut zero_cells = Vec::new();
    for (abar, bbar, cell) in table.iter() {
        if !memo.contains_key(&cell) {
            let (_, b) = form.value(table.split(), cell)?;
            memo.insert(cell, b);
        }
        if memo[&cell].is_zero() {
            zero_cells.push((abar, bbar));
        }
    }
    let values: Vec<&BigInt> = memo.values().filter(|b| !b.is_zero()).collect();
    let survivors = if zero_cells.is_empty() {
        p_range
            .iter()
            .copied()
            .filter(|&p| p == q || values.iter().any(|b| arith::big_mod_u64(b, p) == 0))
            .collect()
    } else {
        p_range.to_vec()
    };
    Ok(QOutcome { q, zero_cells, survivors })
}

/// Primes `p` in `p_range` not excluded by the criterion at `q`.
pub fn survivors(f: &NewformRecord, q: u64, p_range: &[u64]) -> Result<Vec<u64>, SieveError> {
    check_q(q)?;
    let table = TraceTable::build(q, RootChoice::Canonical)?;
    Ok(survivors_in_table(f, &table, p_range)?.survivors)
}

/// Intersection of [`survivors`] over `q_set`. An empty `q_set` leaves
/// `p_range` untouched.
pub fn eliminate(f: &NewformRecord, q_set: &[u64], p_range: &[u64]) -> Result<Vec<u64>, SieveError> {
    if q_set.is_empty() {
        log::warn!("empty q-set: no exponent is eliminated");
        return Ok(p_range.to_vec());
    }
    let mut alive: BTreeSet<u64> = p_range.iter().copied().collect();
    for &q in q_set {
        let s: BTreeSet<u64> = survivors(f, q, p_range)?.into_iter().collect();
        alive = alive.intersection(&s).copied().collect();
    }
    Ok(alive.into_iter().collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveConfig {
    pub q_set: Vec<u64>,
    pub p_min: u64,
    pub p_max: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig { q_set: arith::primes_in(5, 59), p_min: 11, p_max: 1000 }
    }
}

impl SieveConfig {
    pub fn with_q_max(q_max: u64) -> Self {
        SieveConfig { q_set: arith::primes_in(5, q_max), ..Self::default() }
    }

    pub fn p_range(&self) -> Vec<u64> {
        arith::primes_in(self.p_min, self.p_max)
    }
}

/// Survivor summary at one q, with the full list only when it is not everything.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QSummary {
    pub zero_cells: usize,
    pub first_zero_cell: Option<(u64, u64)>,
    #[serde(serialize_with = "survivor_set")]
    pub survivors: Option<Vec<u64>>,
}

fn survivor_set<S: serde::Serializer>(v: &Option<Vec<u64>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        None => s.serialize_str("all"),
        Some(list) => list.serialize(s),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormReport {
    pub label: String,
    pub degree: usize,
    pub is_cm: bool,
    pub surviving: Vec<u64>,
    pub per_q: BTreeMap<u64, QSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SieveReport {
    pub schema: u32,
    pub level: u64,
    pub q_set: Vec<u64>,
    pub p_min: u64,
    pub p_max: u64,
    pub forms: Vec<FormReport>,
    pub eliminated: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PartialEq for SieveReport {
    fn eq(&self, other: &Self) -> bool {
        self.to_json() == other.to_json()
    }
}

/// Run the sieve for every record of `cache`.
pub fn run(cache: &NewformCache, cfg: &SieveConfig) -> Result<SieveReport, SieveError> {
    let start = Instant::now();
    let p_range = cfg.p_range();
    let mut q_set = cfg.q_set.clone();
    q_set.sort_unstable();
    q_set.dedup();
    for &q in &q_set {
        check_q(q)?;
    }
    let tables: Vec<TraceTable> = q_set
        .iter()
        .map(|&q| TraceTable::build(q, RootChoice::Canonical))
        .collect::<Result<_, _>>()?;
    let forms: Vec<FormReport> = cache
        .records
        .par_iter()
        .map(|f| {
            let mut alive: BTreeSet<u64> = p_range.iter().copied().collect();
            let mut per_q = BTreeMap::new();
            for table in &tables {
                let out = survivors_in_table(f, table, &p_range)?;
                let s: BTreeSet<u64> = out.survivors.iter().copied().collect();
                alive = alive.intersection(&s).copied().collect();
                per_q.insert(
                    out.q,
                    QSummary {
                        zero_cells: out.zero_cells.len(),
                        first_zero_cell: out.zero_cells.first().copied(),
                        survivors: out.zero_cells.is_empty().then_some(out.survivors),
                    },
                );
            }
            Ok(FormReport {
                label: f.label.clone(),
                degree: f.degree,
                is_cm: f.is_cm,
                surviving: alive.into_iter().collect(),
                per_q,
            })
        })
        .collect::<Result<_, SieveError>>()?;
    let eliminated = forms.iter().filter(|r| r.surviving.is_empty()).map(|r| r.label.clone()).collect();
    Ok(SieveReport {
        schema: 1,
        level: cache.level,
        q_set,
        p_min: cfg.p_min,
        p_max: cfg.p_max,
        forms,
        eliminated,
        elapsed: start.elapsed(),
    })
}

impl SieveReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn form(&self, label: &str) -> Option<&FormReport> {
        self.forms.iter().find(|f| f.label == label)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let qs = match (self.q_set.first(), self.q_set.last()) {
            (Some(lo), Some(hi)) => format!("{} primes in [{lo}, {hi}]", self.q_set.len()),
            _ => "empty".into(),
        };
        let _ = writeln!(s, "level {} | q-set: {qs} | p in [{}, {}]", self.level, self.p_min, self.p_max);
        for f in &self.forms {
            let kind = if f.is_cm { "CM" } else if f.degree == 1 { "rational" } else { "irrational" };
            let zero_qs = f.per_q.values().filter(|x| x.zero_cells > 0).count();
            let verdict = if f.surviving.is_empty() {
                "eliminated".to_string()
            } else if f.surviving.len() > 12 {
                format!("{} primes survive", f.surviving.len())
            } else {
                format!("survivors {:?}", f.surviving)
            };
            let _ = writeln!(
                s,
                "{:<12} deg {} {:<10} {verdict}; B = 0 cells at {zero_qs}/{} primes q",
                f.label,
                f.degree,
                kind,
                f.per_q.len()
            );
        }
        let _ = writeln!(s, "eliminated: {}", if self.eliminated.is_empty() { "none".into() } else { self.eliminated.join(", ") });
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newformdb::{FetchConfig, NewformCache};

    fn level_972() -> NewformCache {
        let cfg = FetchConfig { offline: true, cache_dir: std::env::temp_dir().join("fermat3-none"), ..FetchConfig::default() };
        newformdb::fetch_with(972, 2, &cfg).unwrap()
    }

    fn rational(aq: &[(u64, i64)]) -> NewformRecord {
        NewformRecord {
            label: "test".into(),
            level: 972,
            weight: 2,
            degree: 1,
            field_poly: vec![0.into(), 1.into()],
            eigen: aq.iter().map(|&(q, a)| (q, vec![BigInt::from(a)])).collect(),
            is_cm: false,
            cm_disc: 0,
        }
    }

    #[test]
    fn spec_cells() {
        // multiplicative at q = 7: (47, 2) ≡ (5, 2)
        let f = rational(&[(7, 3)]);
        let c = criterion_b(&f, 7, 5, 2).unwrap();
        assert_eq!((c.case, c.b), (CellCase::Multiplicative, BigInt::from(64 - 9)));
        let c = criterion_b(&rational(&[(7, -1)]), 7, 1, 1).unwrap();
        assert_eq!((c.case, c.b), (CellCase::SplitGood, BigInt::zero()));
        let c = criterion_b(&rational(&[(7, 5)]), 7, 1, 1).unwrap();
        assert_eq!(c.b, BigInt::from(-6));
        assert!(matches!(criterion_b(&f, 3, 1, 1), Err(SieveError::BadPrime(3))));
        assert!(matches!(criterion_b(&f, 7, 0, 7), Err(SieveError::ZeroPair)));
    }

    #[test]
    fn inert_case_is_plain_arithmetic_for_rational_forms() {
        // (0,1) at q = 5: a_25(E) from the trace module, a_5(f) = 2
        let f = rational(&[(5, 2)]);
        let t = traces::frobenius_trace(&BigInt::from(0), &BigInt::from(1), 5).unwrap().aq2.unwrap();
        let c = criterion_b(&f, 5, 0, 1).unwrap();
        assert_eq!(c.case, CellCase::InertGood);
        assert_eq!(c.b, BigInt::from(4 - t - 10));
    }

    #[test]
    fn zero_cell_keeps_everything_and_p_equal_q_survives() {
        let p_range = arith::primes_in(11, 100);
        assert_eq!(survivors(&rational(&[(7, -1)]), 7, &p_range).unwrap(), p_range);
        let s = survivors(&rational(&[(13, 100)]), 13, &p_range).unwrap();
        assert!(s.contains(&13));
    }

    #[test]
    fn empty_q_set_is_vacuous() {
        let p_range = arith::primes_in(11, 50);
        assert_eq!(eliminate(&rational(&[]), &[], &p_range).unwrap(), p_range);
    }

    #[test]
    fn golden_q5_q7_q11() {
        let golden: serde_json::Value =
            serde_json::from_str(include_str!("../tests/golden/sieve_q5_q7_q11.json")).unwrap();
        let cache = level_972();
        let p_range = arith::primes_in(11, 1000);
        for q in [5u64, 7, 11] {
            let table = TraceTable::build(q, RootChoice::Canonical).unwrap();
            for f in &cache.records {
                let out = survivors_in_table(f, &table, &p_range).unwrap();
                let g = &golden["records"][&f.label][q.to_string()];
                assert_eq!(g["zero_cell"].as_bool().unwrap(), !out.zero_cells.is_empty(), "{} q={q}", f.label);
                match g["survivors"].as_str() {
                    Some("all") => assert_eq!(out.survivors, p_range),
                    _ => {
                        let want: Vec<u64> = serde_json::from_value(g["survivors"].clone()).unwrap();
                        assert_eq!(out.survivors, want, "{} q={q}", f.label);
                    }
                }
            }
        }
    }

    #[test]
    fn monotone_in_q_set() {
        let cache = level_972();
        let p_range = arith::primes_in(11, 300);
        let f = cache.get("972.2.a.f").unwrap();
        let small = eliminate(f, &[7, 11], &p_range).unwrap();
        let large = eliminate(f, &[7, 11, 13], &p_range).unwrap();
        assert!(large.iter().all(|p| small.contains(p)));
    }

    #[test]
    fn report_is_deterministic() {
        let cache = level_972();
        let cfg = SieveConfig { q_set: vec![7, 11, 13], p_min: 11, p_max: 200 };
        let a = run(&cache, &cfg).unwrap();
        let b = run(&cache, &cfg).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.to_text(), b.to_text());
    }

    #[test]
    fn genuine_solution_classification() {
        // (47, 2): a² + 3b⁶ = 2401 = 7⁴
        for q in [13u64, 31, 7] {
            let (abar, bbar) = (47 % q, 2 % q);
            let f = rational(&[(q, 0)]);
            let c = criterion_b(&f, q, abar, bbar).unwrap();
            assert_eq!(c.case == CellCase::Multiplicative, 2401 % q == 0, "q={q}");
        }
    }
}
