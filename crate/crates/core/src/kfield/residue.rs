use std::fmt::Debug;

use crate::arith::{self, mul_mod, pow_mod};

/// Minimal finite-field interface used by the point counter.
///
/// Elements are enumerated by `element(i)` for `i < order()`, and `index`
/// inverts that enumeration so per-field lookup tables can be flat vectors.
pub trait FiniteField: Sync {
    type Elem: Copy + Eq + Debug + Send + Sync;

    fn characteristic(&self) -> u64;
    fn order(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn index(&self, a: Self::Elem) -> usize;
    fn element(&self, i: usize) -> Self::Elem;

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    pub q: u64,
}

impl FiniteField for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.q
    }
    fn order(&self) -> u64 {
        self.q
    }
    fn zero(&self) -> u64 {
        0
    }
    fn from_int(&self, n: i64) -> u64 {
        arith::rem_euclid_i64(n, self.q)
    }
    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }
    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.q)
    }
    fn index(&self, a: u64) -> usize {
        a as usize
    }
    fn element(&self, i: usize) -> u64 {
        i as u64
    }
}

/// F_q[t]/(t² − nonresidue). Elements are pairs `(c0, c1)` meaning `c0 + c1·t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadField {
    pub q: u64,
    pub nonresidue: u64,
}

impl QuadField {
    /// `None` unless `nonresidue` is a non-square modulo the odd prime `q`.
    pub fn new(q: u64, nonresidue: u64) -> Option<Self> {
        let n = nonresidue % q;
        if q < 3 || !arith::is_prime(q) || n == 0 || pow_mod(n, (q - 1) / 2, q) != q - 1 {
            return None;
        }
        Some(QuadField { q, nonresidue: n })
    }

    /// The field F_q[t]/(t² + 3) for a prime `q ≡ 2 (mod 3)`.
    pub fn with_sqrt_minus3(q: u64) -> Option<Self> {
        Self::new(q, q.checked_sub(3)?)
    }

    /// Embedding of the prime field.
    pub fn lift(&self, a: u64) -> (u64, u64) {
        (a % self.q, 0)
    }
}

impl FiniteField for QuadField {
    type Elem = (u64, u64);

    fn characteristic(&self) -> u64 {
        self.q
    }
    fn order(&self) -> u64 {
        self.q * self.q
    }
    fn zero(&self) -> (u64, u64) {
        (0, 0)
    }
    fn from_int(&self, n: i64) -> (u64, u64) {
        (arith::rem_euclid_i64(n, self.q), 0)
    }
    #[inline]
    fn add(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        ((a.0 + b.0) % self.q, (a.1 + b.1) % self.q)
    }
    #[inline]
    fn mul(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        let q = self.q;
        let c0 = (mul_mod(a.0, b.0, q) + mul_mod(mul_mod(a.1, b.1, q), self.nonresidue, q)) % q;
        let c1 = (mul_mod(a.0, b.1, q) + mul_mod(a.1, b.0, q)) % q;
        (c0, c1)
    }
    fn index(&self, a: (u64, u64)) -> usize {
        (a.0 + self.q * a.1) as usize
    }
    fn element(&self, i: usize) -> (u64, u64) {
        let i = i as u64;
        (i % self.q, i / self.q)
    }
}

/// A residue field of O_K (or the quadratic extension of F_q used for
/// counting points over F_{q²} at split primes).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueField {
    Prime { q: u64 },
    Quadratic { q: u64, nonresidue: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResidueElem {
    Fq(u64),
    Fq2(u64, u64),
}

impl ResidueField {
    /// F_{q²} realised as F_q[t]/(t² − n) for the least non-residue `n`.
    /// For `q ≡ 2 (mod 3)` prefer [`super::residue_field`], which uses t² + 3.
    pub fn quadratic_extension(q: u64) -> Self {
        ResidueField::Quadratic { q, nonresidue: arith::least_nonresidue(q) }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            ResidueField::Prime { q } | ResidueField::Quadratic { q, .. } => q,
        }
    }

    pub fn order(&self) -> u64 {
        match *self {
            ResidueField::Prime { q } => q,
            ResidueField::Quadratic { q, .. } => q * q,
        }
    }

    pub fn from_int(&self, n: i64) -> ResidueElem {
        match *self {
            ResidueField::Prime { q } => ResidueElem::Fq(arith::rem_euclid_i64(n, q)),
            ResidueField::Quadratic { q, .. } => ResidueElem::Fq2(arith::rem_euclid_i64(n, q), 0),
        }
    }

    fn quad(&self) -> Option<QuadField> {
        match *self {
            ResidueField::Quadratic { q, nonresidue } => Some(QuadField { q, nonresidue }),
            ResidueField::Prime { .. } => None,
        }
    }

    /// Bring an element into this field (F_q elements embed into F_{q²}).
    pub fn coerce(&self, e: &ResidueElem) -> ResidueElem {
        match (self, *e) {
            (ResidueField::Prime { q }, ResidueElem::Fq(a)) => ResidueElem::Fq(a % q),
            (ResidueField::Quadratic { q, .. }, ResidueElem::Fq(a)) => ResidueElem::Fq2(a % q, 0),
            (ResidueField::Quadratic { q, .. }, ResidueElem::Fq2(a, b)) => {
                ResidueElem::Fq2(a % q, b % q)
            }
            (ResidueField::Prime { .. }, ResidueElem::Fq2(..)) => {
                panic!("F_q^2 element used in a prime field")
            }
        }
    }

    pub fn add(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        match (self.coerce(a), self.coerce(b)) {
            (ResidueElem::Fq(x), ResidueElem::Fq(y)) => {
                ResidueElem::Fq(PrimeField { q: self.characteristic() }.add(x, y))
            }
            (ResidueElem::Fq2(x0, x1), ResidueElem::Fq2(y0, y1)) => {
                let (c0, c1) = self.quad().unwrap().add((x0, x1), (y0, y1));
                ResidueElem::Fq2(c0, c1)
            }
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        match (self.coerce(a), self.coerce(b)) {
            (ResidueElem::Fq(x), ResidueElem::Fq(y)) => {
                ResidueElem::Fq(PrimeField { q: self.characteristic() }.mul(x, y))
            }
            (ResidueElem::Fq2(x0, x1), ResidueElem::Fq2(y0, y1)) => {
                let (c0, c1) = self.quad().unwrap().mul((x0, x1), (y0, y1));
                ResidueElem::Fq2(c0, c1)
            }
            _ => unreachable!(),
        }
    }
}

/// Square root modulo an odd prime by Tonelli-Shanks; `None` for non-residues.
pub(crate) fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = arith::least_nonresidue(p);
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}
