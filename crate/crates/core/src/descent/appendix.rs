//! The covering argument for C: Y² = X⁶ + 48 through E: y² = x³ + 48 and
//! the two curves over K = Q(a), a³ = −48.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::search::{self, RatPoint};
use super::DescentReport;
use crate::arith;

const E_COEFF: i64 = 48;

/// Point on y² = x³ + 48; `None` is the point at infinity.
type EPoint = Option<RatPoint>;

fn on_curve(p: &RatPoint) -> bool {
    &p.y * &p.y == &p.x * &p.x * &p.x + BigRational::from_integer(E_COEFF.into())
}

fn ec_add(p: &EPoint, q: &EPoint) -> EPoint {
    let (Some(p), Some(q)) = (p, q) else {
        return p.clone().or_else(|| q.clone());
    };
    let lambda = if p.x == q.x {
        if (&p.y + &q.y).is_zero() {
            return None;
        }
        BigRational::from_integer(3.into()) * &p.x * &p.x / (BigRational::from_integer(2.into()) * &p.y)
    } else {
        (&q.y - &p.y) / (&q.x - &p.x)
    };
    let x = &lambda * &lambda - &p.x - &q.x;
    let y = &lambda * (&p.x - &x) - &p.y;
    Some(RatPoint { x, y })
}

/// kP for k = 1..=count, with P = (1, 7).
pub fn multiples_of_generator(count: usize) -> Vec<RatPoint> {
    let g: EPoint = Some(RatPoint { x: BigRational::one(), y: BigRational::from_integer(7.into()) });
    let mut out = Vec::with_capacity(count);
    let mut acc = g.clone();
    for _ in 0..count {
        match &acc {
            Some(p) => out.push(p.clone()),
            None => break,
        }
        acc = ec_add(&acc, &g);
    }
    out
}

fn naive_height(x: &BigRational) -> BigInt {
    x.numer().abs().max(x.denom().clone())
}

/// `c₀ + c₁a + c₂a²` in Q(a), a³ = −48.
#[derive(Clone, PartialEq, Eq)]
pub struct CubicElem(pub [BigRational; 3]);

impl CubicElem {
    pub fn from_int(n: i64) -> Self {
        CubicElem([BigRational::from_integer(n.into()), BigRational::zero(), BigRational::zero()])
    }

    pub fn a() -> Self {
        CubicElem([BigRational::zero(), BigRational::one(), BigRational::zero()])
    }

    pub fn is_rational(&self) -> bool {
        self.0[1].is_zero() && self.0[2].is_zero()
    }

    /// Image under a ↦ r in F_ℓ, if ℓ divides no denominator.
    fn reduce(&self, r: u64, l: u64) -> Option<u64> {
        let mut acc = 0u64;
        let mut pw = 1u64;
        for c in &self.0 {
            let den = arith::big_mod_u64(c.denom(), l);
            if den == 0 {
                return None;
            }
            let num = arith::big_mod_u64(c.numer(), l);
            let term = arith::mul_mod(num, arith::pow_mod(den, l - 2, l), l);
            acc = (acc + arith::mul_mod(term, pw, l)) % l;
            pw = arith::mul_mod(pw, r, l);
        }
        Some(acc)
    }

    /// `Some(true)` for a rational square, `Some(false)` with a certificate
    /// prime ℓ (a degree-1 prime at which the image is a non-residue), and
    /// `None` if neither is found below `l_max`.
    pub fn square_status(&self, l_max: u64) -> (Option<bool>, Option<u64>) {
        if self.is_rational() {
            let q = &self.0[0];
            let sq = !q.is_negative() && is_int_square(q.numer()) && is_int_square(q.denom());
            return (Some(sq), None);
        }
        for l in arith::primes_in(5, l_max) {
            let roots: Vec<u64> = (0..l).filter(|&t| (arith::pow_mod(t, 3, l) + E_COEFF as u64) % l == 0).collect();
            for r in roots {
                let Some(v) = self.reduce(r, l) else { continue };
                if v != 0 && arith::pow_mod(v, (l - 1) / 2, l) == l - 1 {
                    return (Some(false), Some(l));
                }
            }
        }
        (None, None)
    }
}

fn is_int_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let r = n.sqrt();
        &r * &r == *n
    }
}

impl Add for &CubicElem {
    type Output = CubicElem;
    fn add(self, o: &CubicElem) -> CubicElem {
        CubicElem([&self.0[0] + &o.0[0], &self.0[1] + &o.0[1], &self.0[2] + &o.0[2]])
    }
}

impl Mul for &CubicElem {
    type Output = CubicElem;
    fn mul(self, o: &CubicElem) -> CubicElem {
        let mut t: [BigRational; 5] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                t[i + j] += &self.0[i] * &o.0[j];
            }
        }
        let k = BigRational::from_integer((-E_COEFF).into());
        let [t0, t1, t2, t3, t4] = t;
        CubicElem([t0 + &k * t3, t1 + &k * t4, t2])
    }
}

impl fmt::Display for CubicElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*a + {}*a^2", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Debug for CubicElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// x(x² + ax + a²) and (1 − a)x(x² + ax + a²) at a rational x.
fn cover_values(x: &BigRational) -> (CubicElem, CubicElem) {
    let xe = CubicElem([x.clone(), BigRational::zero(), BigRational::zero()]);
    let a = CubicElem::a();
    let quad = &(&(&xe * &xe) + &(&a * &xe)) + &(&a * &a);
    let e1 = &xe * &quad;
    let one_minus_a = &CubicElem::from_int(1) + &CubicElem([BigRational::zero(), -BigRational::one(), BigRational::zero()]);
    let e2 = &one_minus_a * &e1;
    (e1, e2)
}

pub fn appendix_verify(height_bound: u64) -> DescentReport {
    let mut rep = DescentReport::new("C: Y^2 = X^6 + 48 via y^2 = x^3 + 48", None);

    let mults = multiples_of_generator(8);
    let heights: Vec<BigInt> = mults.iter().map(|p| naive_height(&p.x)).collect();
    let growing = heights.windows(2).all(|w| w[0] < w[1]);
    let bits: Vec<u64> = heights.iter().map(|h| h.bits()).collect();
    rep.check(
        "generator",
        mults.len() == 8 && mults.iter().all(on_curve) && growing,
        format!("(1, 7) on the curve (49 = 1 + 48); H(x(kP)) for k = 1..8 strictly increasing, bit lengths {bits:?}"),
    );
    let double = &mults[1];
    rep.check(
        "non-torsion",
        !double.x.is_integer(),
        format!("2P = {double} is not integral, so P has infinite order (Nagell-Lutz)"),
    );

    let pts = search::sextic_points(E_COEFF as u64, height_bound);
    let mut covered = !pts.is_empty();
    let mut lines = Vec::new();
    for p in &pts {
        let x = &p.x * &p.x;
        let (e1, e2) = cover_values(&x);
        let (s1, cert1) = e1.square_status(1000);
        let (s2, cert2) = e2.square_status(1000);
        covered &= s1 == Some(true) || s2 == Some(true);
        let describe = |v: &CubicElem, s: Option<bool>, cert: Option<u64>| match (s, cert) {
            (Some(true), _) => format!("{v} is a square"),
            (Some(false), Some(l)) => format!("{v} is a non-square (non-residue at a prime above {l})"),
            (Some(false), None) => format!("{v} is a non-square"),
            (None, _) => format!("{v} undetermined"),
        };
        lines.push(format!("X = {}: E1 {}; E2 {}", p.x, describe(&e1, s1, cert1), describe(&e2, s2, cert2)));
    }
    lines.dedup();
    rep.check("covering", covered, lines.join("; "));

    let affine: Vec<String> = pts.iter().map(ToString::to_string).collect();
    let expected = pts.len() == 4
        && pts.iter().all(|p| {
            p.x.is_integer() && p.x.abs().to_integer().to_i64() == Some(1) && p.y.abs().to_integer().to_i64() == Some(7)
        });
    rep.evidence(
        "C(Q) search",
        expected,
        format!("height <= {height_bound}: infinity+, infinity-, {}; {} points", affine.join(" "), pts.len() + 2),
    );
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn doubling_the_generator() {
        let m = multiples_of_generator(3);
        assert_eq!(m[1], RatPoint { x: rat(-383, 196), y: rat(-17471, 2744) });
        assert!(m.iter().all(on_curve));
    }

    #[test]
    fn cubic_field_arithmetic() {
        let a = CubicElem::a();
        assert_eq!(&(&a * &a) * &a, CubicElem::from_int(-48));
        let (e1, e2) = cover_values(&BigRational::one());
        assert_eq!(e2, CubicElem::from_int(49));
        assert_eq!(e2.square_status(100).0, Some(true));
        assert_eq!(e1.square_status(1000).0, Some(false));
        assert_eq!(CubicElem::from_int(48).square_status(10).0, Some(false));
    }

    #[test]
    fn report_passes() {
        let rep = appendix_verify(200);
        assert!(rep.passed(), "{}", rep.to_text());
        assert_eq!(rep.get("C(Q) search").unwrap().label, Some(super::super::EVIDENCE));
    }
}
