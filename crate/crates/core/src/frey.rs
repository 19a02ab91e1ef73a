//! The Frey Q-curve E_{a,b} over Q(√−3):
//!
//! ```text
//! Y² = X³ − 9√−3·b(4a − 5√−3·b³)·X + 18(2a² − 14√−3·ab³ − 33b⁶)
//! ```
//!
//! Invariants are always computed from this model. The closed forms in
//! [`factored`] are separate expressions checked against the model.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::kfield::KElem;
use crate::poly::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreyError {
    #[error("gcd({a}, {b}) != 1")]
    NotCoprime { a: BigInt, b: BigInt },
    #[error("a ≡ b (mod 2) for ({a}, {b}): a² + 3b⁶ is even, outside the valuation-triple hypotheses")]
    SameParity { a: BigInt, b: BigInt },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreyCurve {
    a: BigInt,
    b: BigInt,
    coeff_a: KElem,
    coeff_b: KElem,
}

/// c4, c6, discriminant and j-invariant of the short model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSet {
    pub c4: KElem,
    pub c6: KElem,
    pub disc: KElem,
    pub j: KElem,
}

/// Valuation at a prime of K; `Infinite` for the zero element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionData {
    /// (v(c4), v(c6), v(Δ)) at the inert prime above 2.
    pub v2_triple: (Valuation, Valuation, Valuation),
    /// v(Δ) at the ramified prime above 3. Equals 14 whenever 3 ∤ a.
    pub v3_delta: u32,
    /// Rational primes q ∤ 6 dividing a² + 3b⁶, ascending.
    pub mult_primes: Vec<BigUint>,
}

/// Complex-multiplication status from the exceptional parameter values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CmStatus {
    /// CM with the given rational j-invariant and order discriminant.
    Exception { j: i64, order_disc: i64 },
    NoCm,
}

fn check_coprime(a: &BigInt, b: &BigInt) -> Result<(), FreyError> {
    if !a.gcd(b).is_one() {
        return Err(FreyError::NotCoprime { a: a.clone(), b: b.clone() });
    }
    Ok(())
}

/// Build E_{a,b} for coprime (a, b).
pub fn frey_model(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<FreyCurve, FreyError> {
    let (a, b) = (a.into(), b.into());
    check_coprime(&a, &b)?;
    // A = −9√−3·b(4a − 5√−3·b³) = −135b⁴ − 36ab·√−3
    // B = 18(2a² − 14√−3·ab³ − 33b⁶) = 36a² − 594b⁶ − 252ab³·√−3
    let b3 = &b * &b * &b;
    let b4 = &b3 * &b;
    let b6 = &b3 * &b3;
    let coeff_a = KElem::from_coords(BigInt::from(-135) * &b4, BigInt::from(-36) * &a * &b);
    let coeff_b = KElem::from_coords(
        BigInt::from(36) * &a * &a - BigInt::from(594) * &b6,
        BigInt::from(-252) * &a * &b3,
    );
    Ok(FreyCurve { a, b, coeff_a, coeff_b })
}

impl FreyCurve {
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    /// Coefficient of X in the short model.
    pub fn coeff_a(&self) -> &KElem {
        &self.coeff_a
    }

    /// Constant term of the short model.
    pub fn coeff_b(&self) -> &KElem {
        &self.coeff_b
    }

    /// a² + 3b⁶, the rational integer whose prime factors carry the
    /// multiplicative reduction.
    pub fn norm_form(&self) -> BigInt {
        let b3 = &self.b * &self.b * &self.b;
        &self.a * &self.a + BigInt::from(3) * &b3 * &b3
    }

    pub fn invariants(&self) -> InvariantSet {
        let c4 = self.coeff_a.scale(&BigInt::from(-48));
        let c6 = self.coeff_b.scale(&BigInt::from(-864));
        let c4_cubed = c4.pow(3);
        let num = &c4_cubed - &(&c6 * &c6);
        let disc = &num * &KElem::from_rational(&BigRational::new(1.into(), 1728.into()));
        let j = c4_cubed.checked_div(&disc).expect("coprime (a, b) gives a nonzero discriminant");
        InvariantSet { c4, c6, disc, j }
    }

    pub fn reduction_data(&self) -> Result<ReductionData, FreyError> {
        if self.a.is_odd() == self.b.is_odd() {
            return Err(FreyError::SameParity { a: self.a.clone(), b: self.b.clone() });
        }
        let inv = self.invariants();
        let v2_triple = (
            valuation_above_2(&inv.c4),
            valuation_above_2(&inv.c6),
            valuation_above_2(&inv.disc),
        );
        let v3_delta = valuation_above_3(&inv.disc).finite().expect("nonzero discriminant");
        let n = self.norm_form().abs().to_biguint().expect("non-negative");
        let mult_primes = arith::prime_divisors(&n)
            .into_iter()
            .filter(|p| *p != BigUint::from(2u32) && *p != BigUint::from(3u32))
            .collect();
        Ok(ReductionData { v2_triple, v3_delta, mult_primes })
    }
}

fn norm_valuation(e: &KElem, p: u64) -> Option<i64> {
    let n = e.norm();
    let num = arith::valuation(n.numer(), p)? as i64;
    let den = arith::valuation(n.denom(), p).unwrap_or(0) as i64;
    Some(num - den)
}

/// Valuation at 𝔭₂ = (2), which is inert: residue degree 2, so
/// v_𝔭₂(e) = v₂(N(e)) / 2.
pub fn valuation_above_2(e: &KElem) -> Valuation {
    match norm_valuation(e, 2) {
        None => Valuation::Infinite,
        Some(v) => {
            debug_assert!(v % 2 == 0, "norm valuation at an inert prime is even");
            Valuation::Finite(u32::try_from(v / 2).expect("integral element"))
        }
    }
}

/// Valuation at 𝔭₃ = (√−3), which is ramified with residue degree 1, so
/// v_𝔭₃(e) = v₃(N(e)).
pub fn valuation_above_3(e: &KElem) -> Valuation {
    match norm_valuation(e, 3) {
        None => Valuation::Infinite,
        Some(v) => Valuation::Finite(u32::try_from(v).expect("integral element")),
    }
}

/// CM exceptions of E_{a,b}: a = 0 gives j = 54000 (order discriminant −12),
/// b = 0 gives j = 0 (order discriminant −3); otherwise j ∉ Q and there is no CM.
pub fn cm_exception(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<CmStatus, FreyError> {
    let (a, b) = (a.into(), b.into());
    check_coprime(&a, &b)?;
    Ok(if a.is_zero() {
        CmStatus::Exception { j: 54000, order_disc: -12 }
    } else if b.is_zero() {
        CmStatus::Exception { j: 0, order_disc: -3 }
    } else {
        CmStatus::NoCm
    })
}

/// −32A⁴ + 1266A² − 2475.
pub fn j_rationality_quartic(a_ratio: &BigRational) -> BigRational {
    quartic_poly().eval_rational(a_ratio)
}

pub fn quartic_poly() -> Poly {
    Poly::from_i64s(&[-2475, 0, 1266, 0, -32])
}

/// Rational roots of the quartic found by exhaustive rational-root-theorem
/// enumeration (divisors of 2475 over divisors of 32, both signs).
pub fn quartic_rational_roots() -> Vec<BigRational> {
    quartic_poly().rational_roots()
}

/// A polynomial over K in one variable, split into coordinates: `re + im·√−3`.
#[derive(Debug, Clone)]
struct KPoly {
    re: Poly,
    im: Poly,
}

impl KPoly {
    fn linear(c0: (i64, i64), c1: (i64, i64)) -> Self {
        KPoly { re: Poly::from_i64s(&[c0.0, c1.0]), im: Poly::from_i64s(&[c0.1, c1.1]) }
    }

    fn constant(re: i64, im: i64) -> Self {
        KPoly { re: Poly::constant(re), im: Poly::constant(im) }
    }

    fn mul(&self, rhs: &KPoly) -> KPoly {
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im).scale(&BigInt::from(3));
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        KPoly { re, im }
    }

    fn pow(&self, e: u32) -> KPoly {
        (0..e).fold(KPoly::constant(1, 0), |acc, _| acc.mul(self))
    }

    fn conj(&self) -> KPoly {
        KPoly { re: self.re.clone(), im: -&self.im }
    }
}

/// With A = a/b³, j(E) = 432√−3·(4A − 5√−3)³ / ((A + √−3)³(A − √−3)).
/// Returns the √−3-coordinate of numerator·conj(denominator) as a
/// polynomial in A: for rational A, j ∈ Q exactly at its rational roots
/// (the denominator norm (A² + 3)⁴ never vanishes on Q).
pub fn j_imaginary_part_poly() -> Poly {
    let numerator = KPoly::constant(0, 432).mul(&KPoly::linear((0, -5), (4, 0)).pow(3));
    let denominator = KPoly::linear((0, 1), (1, 0)).pow(3).mul(&KPoly::linear((0, -1), (1, 0)));
    numerator.mul(&denominator.conj()).im
}

/// Rational values of a/b³ for which j(E) ∈ Q (the point at infinity,
/// b = 0, is handled separately and gives j = 0).
pub fn j_rational_parameters() -> Vec<BigRational> {
    j_imaginary_part_poly().rational_roots()
}

/// The closed-form expressions for the invariants, as displayed for the
/// Frey curve, evaluated independently of the Weierstrass model.
pub mod factored {
    use super::*;

    fn s() -> KElem {
        KElem::sqrt_minus3()
    }

    fn int(n: impl Into<BigInt>) -> KElem {
        KElem::from_int(n)
    }

    /// 2⁴·3³·√−3·b·(4a − 5√−3·b³)
    pub fn c4(a: &BigInt, b: &BigInt) -> KElem {
        let b3 = int(b.pow(3));
        let inner = &int(BigInt::from(4) * a) - &(&int(5) * &(&s() * &b3));
        &(&int(432) * &s()) * &(&int(b.clone()) * &inner)
    }

    /// −2⁶·3⁵·(2a² − 14√−3·ab³ − 33b⁶)
    pub fn c6(a: &BigInt, b: &BigInt) -> KElem {
        let b3 = b.pow(3);
        let inner = &(&int(BigInt::from(2) * a * a) - &(&int(BigInt::from(14) * a * &b3) * &s()))
            - &int(BigInt::from(33) * &b3 * &b3);
        &int(-15552) * &inner
    }

    /// −2⁸·3⁷·(a − √−3·b³)·(a + √−3·b³)³. The cube sits on (a + √−3·b³),
    /// with b³ (not b) inside; only this form has the right weighted degree.
    pub fn disc(a: &BigInt, b: &BigInt) -> KElem {
        let sb3 = &s() * &int(b.pow(3));
        let minus = &int(a.clone()) - &sb3;
        let plus = &int(a.clone()) + &sb3;
        &int(-559872) * &(&minus * &plus.pow(3))
    }

    /// The disc expression exactly as typeset, with (a + √−3·b)³.
    pub fn disc_as_printed(a: &BigInt, b: &BigInt) -> KElem {
        let minus = &int(a.clone()) - &(&s() * &int(b.pow(3)));
        let plus = &int(a.clone()) + &(&s() * &int(b.clone()));
        &int(-559872) * &(&minus * &plus.pow(3))
    }

    /// 2⁴·3³·√−3·b³·(4a − 5√−3·b³)³ / ((a + √−3·b³)³(a − √−3·b³))
    pub fn j(a: &BigInt, b: &BigInt) -> Option<KElem> {
        let b3 = int(b.pow(3));
        let sb3 = &s() * &b3;
        let inner = &int(BigInt::from(4) * a) - &(&int(5) * &sb3);
        let num = &(&(&int(432) * &s()) * &b3) * &inner.pow(3);
        let den = &(&int(a.clone()) + &sb3).pow(3) * &(&int(a.clone()) - &sb3);
        num.checked_div(&den)
    }
}
