//! Small-exponent descents for a² + 3b⁶ = cⁿ (n = 3, 4, 5, 7) and the
//! covering argument for Y² = X⁶ + 48.
//!
//! Every polynomial identity is checked by exact symbolic expansion and
//! every residue-class elimination by exhaustive enumeration. Claims that
//! rest on rank or Chabauty computations are replaced by bounded searches,
//! and those checks are marked as evidence rather than proof.

mod appendix;
mod n4;
mod n5;
mod n7;
pub mod search;

pub use appendix::{appendix_verify, multiples_of_generator, CubicElem};
pub use n4::{lemma12_residues, n4_solve};
pub use n5::{n5_verify, n5_verify_with};
pub use n7::{covariants, cube_class_group, n7_verify, CubeClassGroup};

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::Zero;
use serde::Serialize;

use crate::mpoly::MPoly;

/// Marker attached to bounded-search checks.
pub const EVIDENCE: &str = "evidence, not proof";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Set when the check is a bounded search standing in for a proof.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<&'static str>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentReport {
    pub schema: u32,
    pub subject: String,
    pub exponent: Option<u32>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub solutions: Vec<[i64; 3]>,
}

impl DescentReport {
    pub fn new(subject: &str, exponent: Option<u32>) -> Self {
        DescentReport { schema: 1, subject: subject.into(), exponent, checks: Vec::new(), solutions: Vec::new() }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, label: None, detail: detail.into() });
    }

    pub fn evidence(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, label: Some(EVIDENCE), detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "== {} ==", self.subject);
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let label = c.label.map(|l| format!(" [{l}]")).unwrap_or_default();
            let _ = writeln!(s, "[{tag}] {}{label}: {}", c.name, c.detail);
        }
        if !self.solutions.is_empty() {
            let sols: Vec<String> = self.solutions.iter().map(|[a, b, c]| format!("({a}, {b}, {c})")).collect();
            let _ = writeln!(s, "solutions: {}", sols.join(" "));
        }
        s
    }
}

/// `(u + √−3 v)^p = f₁ + f₂√−3` evaluated at one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamPair {
    pub p: u32,
    pub u: BigInt,
    pub v: BigInt,
    pub f1: BigInt,
    pub f2: BigInt,
    pub z: BigInt,
}

fn minus3_pow(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(-3), k as usize)
}

/// The binomial sums f₁(u, v), f₂(u, v) for the exponent `p`.
pub fn parametrize(p: u32, u: impl Into<BigInt>, v: impl Into<BigInt>) -> ParamPair {
    let (u, v) = (u.into(), v.into());
    let h = (p - 1) / 2;
    let pw = |x: &BigInt, k: u32| num_traits::pow(x.clone(), k as usize);
    let mut f1 = BigInt::zero();
    let mut f2 = BigInt::zero();
    for i in 0..=h {
        let c = minus3_pow(h - i);
        f1 += binomial(BigInt::from(p), BigInt::from(2 * i + 1)) * &c * pw(&u, 2 * i + 1) * pw(&v, p - 1 - 2 * i);
        f2 += binomial(BigInt::from(p), BigInt::from(2 * i)) * &c * pw(&u, 2 * i) * pw(&v, p - 2 * i);
    }
    let z = &u * &u + BigInt::from(3) * &v * &v;
    ParamPair { p, u, v, f1, f2, z }
}

/// f₁ and f₂ as polynomials in (u, v).
pub fn lemma11_polys(p: u32) -> (MPoly, MPoly) {
    let h = (p - 1) / 2;
    let mut f1 = MPoly::zero(2);
    let mut f2 = MPoly::zero(2);
    for i in 0..=h {
        let c = minus3_pow(h - i);
        let b1 = binomial(BigInt::from(p), BigInt::from(2 * i + 1));
        let b0 = binomial(BigInt::from(p), BigInt::from(2 * i));
        f1 = &f1 + &MPoly::monomial(b1 * &c, &[2 * i + 1, p - 1 - 2 * i]);
        f2 = &f2 + &MPoly::monomial(b0 * &c, &[2 * i, p - 2 * i]);
    }
    (f1, f2)
}

/// `f₁² + 3f₂² = (u² + 3v²)^p` as an identity of polynomials.
pub fn lemma11_identity(p: u32) -> bool {
    let (f1, f2) = lemma11_polys(p);
    let z = &MPoly::var(2, 0).pow(2) + &MPoly::var(2, 1).pow(2).scale(3);
    &f1.pow(2) + &f2.pow(2).scale(3) == z.pow(p)
}

/// y² = x³ − 3 has no affine rational point of height ≤ `height_bound`.
pub fn n3_check(height_bound: u64) -> DescentReport {
    let mut rep = DescentReport::new("n = 3: y^2 = x^3 - 3", Some(3));
    let small: Vec<String> = [2i64, 3]
        .iter()
        .map(|&x| {
            let v = x * x * x - 3;
            let sq = search::is_square_i128(v as i128).is_some();
            format!("x = {x}: {v} {}", if sq { "is a square" } else { "is not a square" })
        })
        .collect();
    let pts = search::mordell_points(-3, height_bound);
    rep.evidence(
        "search",
        pts.is_empty(),
        format!(
            "a^2 + 3b^6 = c^3 gives (a/b^3, c/b^2); x = r/s, max(|r|, s) <= {height_bound}: {} affine points; {}",
            pts.len(),
            small.join("; ")
        ),
    );
    rep
}

/// The exact-algebra checks without any point search: the parametrization
/// identity symbolically and at `trials` seeded random points, then the
/// n = 4, 5, 7 identities and residue eliminations.
pub fn identities(trials: usize, seed: u64) -> DescentReport {
    use rand::{Rng, SeedableRng};
    let mut rep = DescentReport::new("identities", None);
    let primes = [5u32, 7, 11, 13];
    let symbolic: Vec<u32> = primes.iter().copied().filter(|&p| !lemma11_identity(p)).collect();
    rep.check(
        "f1^2 + 3f2^2 = (u^2 + 3v^2)^p",
        symbolic.is_empty(),
        format!("symbolic for p in {primes:?}; failures {symbolic:?}"),
    );
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for _ in 0..trials {
        let (u, v) = (rng.gen_range(-50i64..=50), rng.gen_range(-50i64..=50));
        for &p in &primes {
            let pp = parametrize(p, u, v);
            if &pp.f1 * &pp.f1 + BigInt::from(3) * &pp.f2 * &pp.f2 != num_traits::pow(pp.z.clone(), p as usize) {
                bad.push((p, u, v));
            }
        }
    }
    rep.check(
        "sampled parametrization",
        bad.is_empty(),
        format!("{trials} seeded points (u, v) in [-50, 50]^2 (seed {seed}); failures {bad:?}"),
    );
    n4::algebra(&mut rep);
    n5::algebra(&mut rep);
    n7::algebra(&mut rep);
    rep
}

/// Run every descent check.
pub fn run_all(height_bound: u64, n3_bound: u64) -> Vec<DescentReport> {
    let ((r3, r4), (r5, (r7, ra))) = rayon::join(
        || rayon::join(|| n3_check(n3_bound), || n4_solve(height_bound)),
        || rayon::join(n5_verify, || rayon::join(n7_verify, || appendix_verify(height_bound))),
    );
    vec![r3, r4, r5, r7, ra]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parametrize_examples() {
        let pp = parametrize(5, 1, 1);
        assert_eq!((pp.f1.clone(), pp.f2.clone(), pp.z.clone()), (16.into(), (-16).into(), 4.into()));
        let pp = parametrize(7, 1, 1);
        assert_eq!((pp.f1, pp.f2, pp.z), (64.into(), 64.into(), 4.into()));
        let (_, f2) = lemma11_polys(5);
        let (u, v) = (MPoly::var(2, 0), MPoly::var(2, 1));
        let expect = &v
            * &(&(&u.pow(4).scale(5) - &(&u.pow(2) * &v.pow(2)).scale(30)) + &v.pow(4).scale(9));
        assert_eq!(f2, expect);
    }

    #[test]
    fn identity_symbolic_and_sampled() {
        for p in [5, 7, 11, 13] {
            assert!(lemma11_identity(p), "p = {p}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let (u, v) = (rng.gen_range(-50i64..=50), rng.gen_range(-50i64..=50));
            for p in [5u32, 7, 11, 13] {
                let pp = parametrize(p, u, v);
                assert_eq!(&pp.f1 * &pp.f1 + 3 * &pp.f2 * &pp.f2, num_traits::pow(pp.z.clone(), p as usize));
            }
        }
    }

    #[test]
    fn u_zero_column() {
        for p in [5u32, 7, 11, 13] {
            for v in [1i64, -2, 7] {
                let pp = parametrize(p, 0, v);
                assert!(pp.f1.is_zero());
                let lhs = 3 * &pp.f2 * &pp.f2;
                assert_eq!(lhs, num_traits::pow(BigInt::from(3 * v * v), p as usize));
            }
        }
    }

    #[test]
    fn identities_pass_and_carry_no_searches() {
        let rep = identities(5, 1);
        assert!(rep.passed(), "{}", rep.to_text());
        assert!(rep.checks.iter().all(|c| c.label.is_none()));
        assert_eq!(rep, identities(5, 1));
    }

    #[test]
    fn n3_small_bound() {
        let rep = n3_check(60);
        assert!(rep.passed(), "{}", rep.to_text());
        assert_eq!(rep.get("search").unwrap().label, Some(EVIDENCE));
        assert!(rep.get("search").unwrap().detail.contains("x = 2: 5 is not a square"));
        assert!(rep.get("search").unwrap().detail.contains("x = 3: 24 is not a square"));
    }
}
