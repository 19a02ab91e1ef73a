//! Dense univariate polynomials over Z and fraction-free resultants.
//!
//! Resultants are Sylvester determinants evaluated by Bareiss elimination
//! over any ring with exact division, so the same routine serves integer
//! coefficients and coefficients in Z[v] (resultants of binary forms).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial with coefficients stored low degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c.into();
        Self::new(coeffs)
    }

    pub fn x() -> Self {
        Self::monomial(1, 1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn lead(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Poly::constant(1);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Remainder modulo a monic polynomial (exact over Z).
    pub fn rem_monic(&self, modulus: &Poly) -> Poly {
        assert!(modulus.is_monic(), "modulus must be monic");
        let d = modulus.degree().unwrap();
        let mut r = self.coeffs.clone();
        while r.len() > d {
            let top = r.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = r.len() - d;
            for (i, m) in modulus.coeffs[..d].iter().enumerate() {
                r[shift + i] -= &top * m;
            }
        }
        Poly::new(r)
    }

    /// Quotient `self / divisor` when the division is exact over Z.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(Poly::default());
        }
        let lead = divisor.lead();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return None;
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (quot, rem) = top.div_rem(&lead);
            if !rem.is_zero() {
                return None;
            }
            for (i, c) in divisor.coeffs.iter().enumerate() {
                r[k + i] -= &quot * c;
            }
            q[k] = quot;
        }
        r.iter().all(|c| c.is_zero()).then(|| Poly::new(q))
    }

    /// Rational roots, by the rational-root theorem (candidates ±d/e with
    /// d | constant term and e | leading coefficient, after removing x^k).
    pub fn rational_roots(&self) -> Vec<BigRational> {
        let mut roots = Vec::new();
        let Some(_) = self.degree() else { return roots };
        let shift = self.coeffs.iter().position(|c| !c.is_zero()).unwrap();
        if shift > 0 {
            roots.push(BigRational::zero());
        }
        let reduced = Poly::new(self.coeffs[shift..].to_vec());
        if reduced.degree() == Some(0) {
            return roots;
        }
        let nums = divisors(&reduced.coeff(0));
        let dens = divisors(&reduced.lead());
        let mut cands: Vec<BigRational> = Vec::new();
        for n in &nums {
            for d in &dens {
                for s in [BigInt::one(), -BigInt::one()] {
                    cands.push(BigRational::new(&s * n, d.clone()));
                }
            }
        }
        cands.sort();
        cands.dedup();
        roots.extend(cands.into_iter().filter(|r| reduced.eval_rational(r).is_zero()));
        roots.sort();
        roots
    }
}

/// Positive divisors of a nonzero integer, by trial division.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// A commutative ring with exact division, enough for Bareiss elimination.
pub trait ExactRing: Clone + PartialEq {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn is_ring_zero(&self) -> bool;
    fn radd(&self, rhs: &Self) -> Self;
    fn rsub(&self, rhs: &Self) -> Self;
    fn rmul(&self, rhs: &Self) -> Self;
    /// Division known to be exact; panics otherwise.
    fn exact_div(&self, rhs: &Self) -> Self;
    fn rneg(&self) -> Self {
        Self::ring_zero().rsub(self)
    }
}

impl ExactRing for BigInt {
    fn ring_zero() -> Self {
        Zero::zero()
    }
    fn ring_one() -> Self {
        One::one()
    }
    fn is_ring_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn radd(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn rsub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn rmul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn exact_div(&self, rhs: &Self) -> Self {
        let (q, r) = self.div_rem(rhs);
        assert!(Zero::is_zero(&r), "inexact integer division in Bareiss step");
        q
    }
}

impl ExactRing for Poly {
    fn ring_zero() -> Self {
        Poly::default()
    }
    fn ring_one() -> Self {
        Poly::constant(1)
    }
    fn is_ring_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn radd(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn rsub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn rmul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn exact_div(&self, rhs: &Self) -> Self {
        Poly::exact_div(self, rhs).expect("inexact polynomial division in Bareiss step")
    }
}

/// Determinant by fraction-free Gaussian elimination (Bareiss).
pub fn bareiss_det<R: ExactRing>(mut m: Vec<Vec<R>>) -> R {
    let n = m.len();
    if n == 0 {
        return R::ring_one();
    }
    let mut sign_flip = false;
    let mut prev = R::ring_one();
    for k in 0..n - 1 {
        if m[k][k].is_ring_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_ring_zero()) else {
                return R::ring_zero();
            };
            m.swap(k, swap);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].rmul(&m[k][k]).rsub(&m[i][k].rmul(&m[k][j]));
                m[i][j] = num.exact_div(&prev);
            }
            m[i][k] = R::ring_zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        det.rneg()
    } else {
        det
    }
}

/// Sylvester matrix of `f` (degree m) and `g` (degree n), coefficients
/// given low degree first. Rows: n shifted copies of f, then m of g.
pub fn sylvester_matrix<R: ExactRing>(f: &[R], g: &[R]) -> Vec<Vec<R>> {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![R::ring_zero(); size];
        for (i, c) in f.iter().rev().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![R::ring_zero(); size];
        for (i, c) in g.iter().rev().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Resultant Res(f, g) = lc(f)^deg g · ∏_{f(α)=0} g(α), computed as the
/// Sylvester determinant. Coefficients low degree first with nonzero
/// leading entries; an empty slice is the zero polynomial.
pub fn resultant<R: ExactRing>(f: &[R], g: &[R]) -> R {
    if f.is_empty() || g.is_empty() {
        return R::ring_zero();
    }
    let (m, n) = (f.len() - 1, g.len() - 1);
    if m == 0 && n == 0 {
        return R::ring_one();
    }
    bareiss_det(sylvester_matrix(f, g))
}

/// Integer resultant of two polynomials.
pub fn resultant_z(f: &Poly, g: &Poly) -> BigInt {
    resultant(f.coeffs(), g.coeffs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64s(c)
    }

    #[test]
    fn small_resultants() {
        // Res(x² − 2, x − 1) = (√2 − 1)(−√2 − 1) = −1
        assert_eq!(resultant_z(&p(&[-2, 0, 1]), &p(&[-1, 1])), BigInt::from(-1));
        assert_eq!(resultant_z(&p(&[0, 1]), &p(&[-6])), BigInt::from(-6));
        assert_eq!(resultant_z(&p(&[-2, 0, 1]), &Poly::default()), BigInt::from(0));
        // common root → 0
        assert_eq!(resultant_z(&p(&[-1, 0, 1]), &p(&[1, 1])), BigInt::from(0));
        // Res(f, f') = ± lc · disc: for x² + bx + c it is −(b² − 4c)·(−1)…; check x² − 2
        assert_eq!(resultant_z(&p(&[-2, 0, 1]), &p(&[0, 2])), BigInt::from(-8));
    }

    #[test]
    fn exact_division_and_reduction() {
        let f = &p(&[-1, 1]) * &p(&[2, 3, 1]);
        assert_eq!(f.exact_div(&p(&[-1, 1])), Some(p(&[2, 3, 1])));
        assert_eq!(p(&[1, 0, 1]).exact_div(&p(&[1, 1])), None);
        // x³ mod (x³ − 3x − 1) = 3x + 1
        assert_eq!(p(&[0, 0, 0, 1]).rem_monic(&p(&[-1, -3, 0, 1])), p(&[1, 3]));
    }

    #[test]
    fn rational_root_scan() {
        let f = &(&p(&[-1, 2]) * &p(&[3, 1])) * &p(&[0, 1]); // roots 1/2, −3, 0
        let roots = f.rational_roots();
        assert_eq!(roots.len(), 3);
        assert!(p(&[-2, 0, 1]).rational_roots().is_empty());
    }

    proptest! {
        // Product formula: Res(f, g) = lc(f)^deg g ∏ g(αᵢ) implies
        // Res((x − r)·h, g) = g(r) · Res(h, g) for monic linear factors.
        #[test]
        fn resultant_is_multiplicative_in_roots(
            r in -20i64..20,
            h in prop::collection::vec(-9i64..9, 1..4),
            g in prop::collection::vec(-9i64..9, 1..5),
        ) {
            let mut h = h; h.push(1);
            let mut g = g; g.push(1);
            let h = p(&h);
            let g = p(&g);
            let f = &p(&[-r, 1]) * &h;
            prop_assert_eq!(resultant_z(&f, &g), g.eval(&BigInt::from(r)) * resultant_z(&h, &g));
        }
    }
}
