use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::KFieldError;

/// An element `(x + y√−3) / den` of Q(√−3), kept in lowest terms with
/// `den > 0` and `gcd(x, y, den) = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KElem {
    x: BigInt,
    y: BigInt,
    den: BigInt,
}

impl KElem {
    pub fn new(x: BigInt, y: BigInt, den: BigInt) -> Result<Self, KFieldError> {
        if den.is_zero() {
            return Err(KFieldError::ZeroDenominator);
        }
        Ok(Self::normalized(x, y, den))
    }

    fn normalized(mut x: BigInt, mut y: BigInt, mut den: BigInt) -> Self {
        if den.is_negative() {
            x = -x;
            y = -y;
            den = -den;
        }
        let g = x.gcd(&y).gcd(&den);
        if !g.is_one() && !g.is_zero() {
            x /= &g;
            y /= &g;
            den /= &g;
        }
        KElem { x, y, den }
    }

    /// Element `x + y√−3` of Z[√−3].
    pub fn from_coords(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        KElem { x: x.into(), y: y.into(), den: BigInt::one() }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::from_coords(n, 0)
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::normalized(r.numer().clone(), BigInt::zero(), r.denom().clone())
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn sqrt_minus3() -> Self {
        Self::from_coords(0, 1)
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// True when the `√−3`-coordinate vanishes.
    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    /// Rational coordinate pair `(x/den, y/den)`.
    pub fn coords(&self) -> (BigRational, BigRational) {
        (
            BigRational::new(self.x.clone(), self.den.clone()),
            BigRational::new(self.y.clone(), self.den.clone()),
        )
    }

    /// Membership in Z[√−3].
    pub fn in_z_sqrt_minus3(&self) -> bool {
        self.den.is_one()
    }

    /// Membership in the maximal order Z[(1 + √−3)/2].
    pub fn is_algebraic_integer(&self) -> bool {
        self.den.is_one() || (self.den == BigInt::from(2) && self.x.is_odd() && self.y.is_odd())
    }

    pub fn conj(&self) -> Self {
        KElem { x: self.x.clone(), y: -&self.y, den: self.den.clone() }
    }

    /// Norm to Q: `(x² + 3y²) / den²`.
    pub fn norm(&self) -> BigRational {
        BigRational::new(
            &self.x * &self.x + BigInt::from(3) * &self.y * &self.y,
            &self.den * &self.den,
        )
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // 1/e = conj(e) / N(e), with N(e) = (x² + 3y²)/den².
        let n = &self.x * &self.x + BigInt::from(3) * &self.y * &self.y;
        Some(Self::normalized(&self.x * &self.den, -&self.y * &self.den, n))
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self * &r)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = KElem::one();
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

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::normalized(&self.x * k, &self.y * k, self.den.clone())
    }
}

impl<'a> Add<&'a KElem> for &'a KElem {
    type Output = KElem;
    fn add(self, rhs: &KElem) -> KElem {
        if self.den == rhs.den {
            return KElem::normalized(&self.x + &rhs.x, &self.y + &rhs.y, self.den.clone());
        }
        KElem::normalized(
            &self.x * &rhs.den + &rhs.x * &self.den,
            &self.y * &rhs.den + &rhs.y * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Sub<&'a KElem> for &'a KElem {
    type Output = KElem;
    fn sub(self, rhs: &KElem) -> KElem {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a KElem> for &'a KElem {
    type Output = KElem;
    fn mul(self, rhs: &KElem) -> KElem {
        // (x1 + y1 s)(x2 + y2 s) with s² = −3
        let x = &self.x * &rhs.x - BigInt::from(3) * &self.y * &rhs.y;
        let y = &self.x * &rhs.y + &self.y * &rhs.x;
        KElem::normalized(x, y, &self.den * &rhs.den)
    }
}

impl Neg for &KElem {
    type Output = KElem;
    fn neg(self) -> KElem {
        KElem { x: -&self.x, y: -&self.y, den: self.den.clone() }
    }
}

impl Neg for KElem {
    type Output = KElem;
    fn neg(self) -> KElem {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<KElem> for KElem {
            type Output = KElem;
            fn $m(self, rhs: KElem) -> KElem { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a KElem> for KElem {
            type Output = KElem;
            fn $m(self, rhs: &KElem) -> KElem { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = match (self.x.is_zero(), self.y.is_zero()) {
            (_, true) => format!("{}", self.x),
            (true, false) => format!("{}*s", self.y),
            (false, false) if self.y.is_negative() => format!("{} - {}*s", self.x, -&self.y),
            (false, false) => format!("{} + {}*s", self.x, self.y),
        };
        if self.den.is_one() {
            f.write_str(&body)
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}

impl fmt::Debug for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KElem[{self}]")
    }
}
