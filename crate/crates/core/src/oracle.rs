//! Brute-force search for primitive solutions of a² + 3b⁶ = cⁿ.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SolutionTuple {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub n: u32,
}

impl SolutionTuple {
    /// Recompute a² + 3b⁶ = cⁿ and primitivity from scratch.
    pub fn verify(&self) -> bool {
        let (a, b, c) = (BigInt::from(self.a), BigInt::from(self.b), BigInt::from(self.c));
        let lhs = &a * &a + BigInt::from(3) * num_traits::pow(b.clone(), 6);
        lhs == num_traits::pow(c.clone(), self.n as usize)
            && !a.is_zero()
            && !b.is_zero()
            && a.gcd(&b).is_one()
            && a.gcd(&c).is_one()
            && b.gcd(&c).is_one()
    }
}

impl fmt::Display for SolutionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.n)
    }
}

/// r with rⁿ = m, by binary search.
pub fn integer_nth_root(m: &BigUint, n: u32) -> Option<BigUint> {
    assert!(n >= 2, "root index must be at least 2");
    if m.is_zero() {
        return Some(BigUint::zero());
    }
    let (mut lo, mut hi) = (BigUint::one(), BigUint::one() << (m.bits() / n as u64 + 1));
    while lo <= hi {
        let mid: BigUint = (&lo + &hi) >> 1;
        match mid.pow(n).cmp(m) {
            std::cmp::Ordering::Equal => return Some(mid),
            std::cmp::Ordering::Less => lo = mid + 1u32,
            std::cmp::Ordering::Greater => hi = mid - 1u32,
        }
    }
    None
}

fn nth_root_u128(m: u128, n: u32) -> Option<u128> {
    if let Ok(small) = u64::try_from(m) {
        let r = small.nth_root(n);
        return (r.checked_pow(n) == Some(small)).then_some(r as u128);
    }
    let r = m.nth_root(n);
    (r.checked_pow(n) == Some(m)).then_some(r)
}

/// Residue tables mod small primes ℓ with gcd(n, ℓ − 1) ≥ 3, where n-th
/// powers form a proper subgroup.
struct PowerFilter {
    n: u32,
    tables: Vec<(u64, Vec<bool>)>,
}

impl PowerFilter {
    fn new(n: u32) -> Self {
        let tables = crate::arith::primes_in(5, 5000)
            .into_iter()
            .filter(|l| (l - 1).gcd(&(n as u64)) >= 3)
            .take(4)
            .map(|l| {
                let mut t = vec![false; l as usize];
                for x in 0..l {
                    t[crate::arith::pow_mod(x, n as u64, l) as usize] = true;
                }
                (l, t)
            })
            .collect();
        PowerFilter { n, tables }
    }

    fn root(&self, m: u128) -> Option<u128> {
        if self.tables.iter().any(|(l, t)| !t[(m % *l as u128) as usize]) {
            return None;
        }
        nth_root_u128(m, self.n)
    }
}

/// The box searched: 1 ≤ a ≤ `a_bound`, b in `b_values`, n in `exponents`.
/// Signs are restored afterwards.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchBox {
    pub a_bound: u64,
    pub b_values: Vec<u64>,
    pub exponents: Vec<u32>,
}

impl SearchBox {
    pub fn new(a_bound: u64, b_bound: u64, n_min: u32, n_max: u32) -> Self {
        SearchBox { a_bound, b_values: (1..=b_bound).collect(), exponents: (n_min..=n_max).collect() }
    }
}

/// Every primitive tuple in the box, closed under a ↦ −a, b ↦ −b and,
/// for even n, c ↦ −c.
pub fn brute_force(a_bound: u64, b_bound: u64, n_min: u32, n_max: u32) -> BTreeSet<SolutionTuple> {
    brute_force_in(&SearchBox::new(a_bound, b_bound, n_min, n_max))
}

pub fn brute_force_in(bx: &SearchBox) -> BTreeSet<SolutionTuple> {
    assert!(bx.exponents.iter().all(|&n| n >= 3), "exponents start at 3");
    let mut exps = bx.exponents.clone();
    exps.sort_unstable();
    exps.dedup();
    let Some(&n_min) = exps.first() else { return BTreeSet::new() };
    let filters: Vec<PowerFilter> = exps.iter().map(|&n| PowerFilter::new(n)).collect();
    let hits: Vec<SolutionTuple> = bx
        .b_values
        .par_iter()
        .flat_map_iter(|&b| {
            let b6 = 3 * (b as u128).pow(6);
            let mut out = Vec::new();
            for a in 1..=bx.a_bound {
                if a.gcd(&b) != 1 {
                    continue;
                }
                let m = (a as u128) * (a as u128) + b6;
                // no exponent ≥ n_min can work once the n_min-th root is below 2
                if m < 1u128 << n_min {
                    continue;
                }
                for f in &filters {
                    if let Some(c) = f.root(m) {
                        let t = SolutionTuple { a: a as i64, b: b as i64, c: c as i64, n: f.n };
                        if t.verify() {
                            out.push(t);
                        }
                    }
                }
            }
            out.into_iter()
        })
        .collect();
    let mut all = BTreeSet::new();
    for t in hits {
        for sa in [1, -1] {
            for sb in [1, -1] {
                all.insert(SolutionTuple { a: sa * t.a, b: sb * t.b, ..t });
                if t.n % 2 == 0 {
                    all.insert(SolutionTuple { a: sa * t.a, b: sb * t.b, c: -t.c, ..t });
                }
            }
        }
    }
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn nth_roots() {
        assert_eq!(integer_nth_root(&big(2401), 4), Some(big(7)));
        assert_eq!(integer_nth_root(&big(1), 5), Some(big(1)));
        assert_eq!(integer_nth_root(&big(2402), 4), None);
        assert_eq!(integer_nth_root(&big(0), 3), Some(big(0)));
        let huge = BigUint::from(10u32).pow(40) + 1u32;
        assert_eq!(integer_nth_root(&huge.pow(3), 3), Some(huge));
        for m in 1..5000u64 {
            for n in 2..6 {
                assert_eq!(integer_nth_root(&big(m), n).map(|r| r.to_string()), nth_root_u128(m as u128, n).map(|r| r.to_string()));
            }
        }
    }

    #[test]
    fn filters_keep_every_power() {
        for n in 3..=20 {
            let f = PowerFilter::new(n);
            assert!(!f.tables.is_empty());
            for c in 1..200u128 {
                if let Some(m) = c.checked_pow(n) {
                    assert_eq!(f.root(m), Some(c), "n = {n}, c = {c}");
                }
            }
        }
    }

    #[test]
    fn small_box_finds_47() {
        let sols = brute_force(100, 5, 3, 10);
        assert_eq!(sols.len(), 8);
        for t in &sols {
            assert!(t.verify());
            assert_eq!((t.a.abs(), t.b.abs(), t.c.abs(), t.n), (47, 2, 7, 4));
            assert!(t.c % 2 != 0 && t.c % 3 != 0);
        }
    }

    #[test]
    fn excluded_boxes_are_empty() {
        let mut bx = SearchBox::new(10_000, 12, 3, 20);
        bx.b_values.retain(|&b| b != 2);
        assert!(brute_force_in(&bx).is_empty());
        let bx = SearchBox { exponents: (3..20).step_by(2).collect(), ..SearchBox::new(10_000, 12, 3, 20) };
        assert!(brute_force_in(&bx).is_empty());
    }

    #[test]
    fn imprimitive_tuples_are_dropped() {
        // 64² + 3·4⁶ = 4⁷ but gcd(64, 4) = 4
        assert!(!SolutionTuple { a: 64, b: 4, c: 4, n: 7 }.verify());
        assert!(SolutionTuple { a: -47, b: 2, c: -7, n: 4 }.verify());
    }
}
