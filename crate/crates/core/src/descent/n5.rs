//! n = 5: both branches of b³ = v(5u⁴ − 30u²v² + 9v⁴).

use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::search::{self, KBox};
use super::DescentReport;
use crate::mpoly::MPoly;

/// `x + y√5` with polynomial coordinates.
#[derive(Clone)]
struct Q5 {
    re: MPoly,
    im: MPoly,
}

impl Q5 {
    fn mul(&self, o: &Q5) -> Q5 {
        Q5 {
            re: &(&self.re * &o.re) + &(&self.im * &o.im).scale(5),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }
}

/// `(1 + √5)^e (m + n√5)³` in variables (m, n).
fn q5_expansion(e: u32) -> Q5 {
    let base = Q5 { re: MPoly::var(2, 0), im: MPoly::var(2, 1) };
    let cube = base.mul(&base).mul(&base);
    let unit = Q5 { re: MPoly::constant(2, 1), im: MPoly::constant(2, 1) };
    (0..e).fold(cube, |acc, _| acc.mul(&unit))
}

fn mn_poly(c: [i64; 4]) -> MPoly {
    (0..4u32).fold(MPoly::zero(2), |acc, i| &acc + &MPoly::monomial(c[i as usize], &[3 - i, i]))
}

/// For each e, the two stated cubics in (m, n) with the multiples of W₁
/// and u² they equal.
fn stated_cubics(e: u32) -> (MPoly, i64, MPoly, i64) {
    match e {
        0 => (mn_poly([1, 0, 15, 0]), 8, mn_poly([0, 3, 0, 5]), 16),
        1 => (mn_poly([1, 15, 15, 25]), 16, mn_poly([1, 3, 15, 5]), 32),
        2 => (mn_poly([3, 15, 45, 25]), 16, mn_poly([1, 9, 15, 15]), 32),
        _ => unreachable!(),
    }
}

/// Since `W₁ + 2√5u² = 2^{-(e+3)}(1 + √5)^e (m + n√5)³`, the stated cubic
/// `L = c·W₁` must satisfy `c·re = 2^{e+3}·L`, and likewise for u².
fn expansion_matches(e: u32) -> bool {
    let q = q5_expansion(e);
    let (l1, c1, l2, c2) = stated_cubics(e);
    let s = 1i64 << (e + 3);
    q.re.scale(c1) == l1.scale(s) && q.im.scale(c2) == l2.scale(2 * s)
}

/// (u, b₁) both odd: W₁ = 2W₁' with W₁' odd, b₂ = 2b₂', and
/// W₁'² − 5u⁴ = 2b₂'³ has no solution mod 8.
fn odd_odd_eliminated() -> bool {
    for u in (1..32u64).step_by(2) {
        for b1 in (1..32u64).step_by(2) {
            let w1 = (3 * b1.pow(6) % 32 + 32 - 5 * u * u % 32) % 32;
            if w1 % 4 != 2 {
                return false;
            }
            let w = w1 / 2;
            let lhs = (w * w % 8 + 8 - 5 * u.pow(4) % 8) % 8;
            if (0..8u64).any(|b| 2 * b.pow(3) % 8 == lhs) {
                return false;
            }
        }
    }
    true
}

/// 5 | b₁ forces v₅(5u⁴ − 30u²b₁⁶ + 9b₁¹²) = 1, not a cube; so W₁ is prime to 5.
fn w1_prime_to_5() -> bool {
    (1..25u64).filter(|u| u % 5 != 0).all(|u| {
        (0..25u64).step_by(5).all(|b1| {
            let t = (5 * u.pow(4) + 25 * 25 - 30 * u * u * b1.pow(6) % 25 + 9 * b1.pow(12)) % 25;
            t % 5 == 0 && t != 0
        })
    })
}

/// e = 1, 2: with m ≡ n (mod 2) and W₁ odd, `3m²n + 5n³ ≡ r(W₁, u) (mod 8)`
/// has no solution, where r = 4W₁ − 8u² or 24u² − 4W₁.
fn e12_mod8(e: u32) -> bool {
    for m in 0..8i64 {
        for n in 0..8i64 {
            if (m - n) % 2 != 0 {
                continue;
            }
            let lhs = (3 * m * m * n + 5 * n * n * n).rem_euclid(8);
            for w in (1..8i64).step_by(2) {
                for u in 0..8i64 {
                    let rhs = if e == 1 { 4 * w - 8 * u * u } else { 24 * u * u - 4 * w };
                    if lhs == rhs.rem_euclid(8) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// The combination eliminating u² from the e = 1, 2 pair:
/// `L₁ − L₂` (e = 1) and `3L₂ − L₁` (e = 2) both equal `4(3m²n + 5n³)`.
fn e12_difference(e: u32) -> bool {
    let (l1, _, l2, _) = stated_cubics(e);
    let d = if e == 1 { &l1 - &l2 } else { &l2.scale(3) - &l1 };
    d == mn_poly([0, 3, 0, 5]).scale(4)
}

/// Allowed (e₁, e₂) for n = 2^{e₁}3^{e₂}n₁² in n(3m² + 5n²) = 16u² mod 5,
/// after removing the common power of 5 from n₁ and u (5 ∤ m since 5 ∤ W₁).
fn e0_mod5_classes() -> BTreeSet<(u32, u32)> {
    let mut ok = BTreeSet::new();
    for e1 in 0..2u32 {
        for e2 in 0..2u32 {
            let c = 2u64.pow(e1) * 3u64.pow(e2);
            let hit = (1..5u64).any(|m| {
                (1..5u64).any(|n1| (1..5u64).any(|u| (3 * c * m * m * n1 * n1) % 5 == (16 * u * u) % 5))
            });
            if hit {
                ok.insert((e1, e2));
            }
        }
    }
    ok
}

/// Variables (m, n, b₁, u) for the e = 0 equations.
fn e0_equations() -> (MPoly, MPoly) {
    let (m, n, b1, u) = (MPoly::var(4, 0), MPoly::var(4, 1), MPoly::var(4, 2), MPoly::var(4, 3));
    let w1 = &b1.pow(6).scale(3) - &u.pow(2).scale(5);
    let e1 = &(&m * &(&m.pow(2) + &n.pow(2).scale(15))) - &w1.scale(8);
    let e2 = &(&n * &(&m.pow(2).scale(3) + &n.pow(2).scale(5))) - &u.pow(2).scale(16);
    (e1, e2)
}

fn e0_consequence() -> bool {
    let (e1, e2) = e0_equations();
    let (m, n, b1) = (MPoly::var(4, 0), MPoly::var(4, 1), MPoly::var(4, 2));
    let lhs = &m + &n.scale(5);
    let rhs = &(&m.pow(2).scale(2) + &(&m * &n).scale(5)) + &n.pow(2).scale(5);
    let target = &(&lhs * &rhs) - &b1.pow(6).scale(48);
    target == &e1.scale(2) + &e2.scale(5)
}

/// m = 2m₁, n = 2n₁² turns the e = 0 equations into 8 times the reduced pair.
/// Variables are reused as (m₁, n₁, b₁, u).
fn e0_substitution() -> bool {
    let (e1, e2) = e0_equations();
    let (m1, n1, b1, u) = (MPoly::var(4, 0), MPoly::var(4, 1), MPoly::var(4, 2), MPoly::var(4, 3));
    let sub = |p: &MPoly| p.substitute(0, &m1.scale(2)).substitute(1, &n1.pow(2).scale(2));
    let r1 = &(&m1 * &(&m1.pow(2) + &n1.pow(4).scale(15))) - &(&b1.pow(6).scale(3) - &u.pow(2).scale(5));
    let r2 = &(&n1.pow(2) * &(&m1.pow(2).scale(3) + &n1.pow(4).scale(5))) - &u.pow(2).scale(2);
    sub(&e1) == r1.scale(8) && sub(&e2) == r2.scale(8)
}

/// In the reduced pair with exactly one of b₁, u even: m₁ is odd, n₁ even,
/// and 3m₁² + 5n₁⁴ odd. Then n₁²(odd) = 2u² compares 2v₂(n₁) with 1 + 2v₂(u).
fn e0_parity() -> bool {
    let mut seen = false;
    for m1 in 0..2u64 {
        for n1 in 0..2u64 {
            for (b1, u) in [(0u64, 1u64), (1, 0)] {
                let lhs = m1 * (m1 * m1 + 15 * n1.pow(4)) % 2;
                let rhs = (3 * b1.pow(6) + 5 * u * u) % 2;
                if lhs != rhs {
                    continue;
                }
                seen = true;
                if m1 != 1 || n1 != 0 || (3 * m1 * m1 + 5 * n1.pow(4)) % 2 != 1 {
                    return false;
                }
            }
        }
    }
    seen && (0..64u32).all(|i| (0..64u32).all(|j| 2 * i != 1 + 2 * j))
}

/// n = 3n₁²: (m + 5n)(2m² + 5mn + 5n²) ≡ 0 (mod 3) forces 3 | m.
fn e0_three_divides_m() -> bool {
    (0..3u64).all(|m| {
        let n = 0u64;
        let v = (m + 5 * n) * (2 * m * m + 5 * m * n + 5 * n * n) % 3;
        v != 0 || m == 0
    })
}

/// First branch v = 25b₁³: 5[(u² − 3v²)² − 2²3²5⁷b₁¹²] equals the quartic,
/// so (b₂/(25b₁⁴), (u² − 3v²)/(125b₁⁶)) lies on Y² = X³ + 180.
fn first_branch_identity() -> bool {
    let (u, b1) = (MPoly::var(2, 0), MPoly::var(2, 1));
    let v = b1.pow(3).scale(25);
    let quartic = &(&u.pow(4).scale(5) - &(&u.pow(2) * &v.pow(2)).scale(30)) + &v.pow(4).scale(9);
    let k = BigInt::from(4 * 9) * num_traits::pow(BigInt::from(5), 7);
    let lhs = &(&u.pow(2) - &v.pow(2).scale(3)).pow(2) - &b1.pow(12).scale(k.clone());
    lhs.scale(5) == quartic && k == BigInt::from(180) * num_traits::pow(BigInt::from(5), 6)
}

fn w1_identity() -> bool {
    let (u, b1) = (MPoly::var(2, 0), MPoly::var(2, 1));
    let w1 = &b1.pow(6).scale(3) - &u.pow(2).scale(5);
    let quartic = &(&u.pow(4).scale(5) - &(&u.pow(2) * &b1.pow(6)).scale(30)) + &b1.pow(12).scale(9);
    let (_, f2) = super::lemma11_polys(5);
    let f2_sub = f2.substitute(1, &b1.pow(3));
    quartic == &w1.pow(2) - &u.pow(4).scale(20) && f2_sub == &b1.pow(3) * &quartic
}

pub fn n5_verify() -> DescentReport {
    n5_verify_with(&KBox::default())
}

/// Every exact check: identities, expansions and residue eliminations.
pub(crate) fn algebra(rep: &mut DescentReport) {
    rep.check(
        "W1 identity",
        w1_identity(),
        "5u^4 - 30u^2b1^6 + 9b1^12 = W1^2 - 20u^4 with W1 = 3b1^6 - 5u^2, and f2(u, b1^3) = b1^3 times it",
    );
    rep.check(
        "odd u, b1",
        odd_odd_eliminated(),
        "u, b1 odd mod 32: W1 = 2W1' with W1' odd and W1'^2 - 5u^4 = 4 mod 8, never 2b2'^3 mod 8",
    );
    rep.check("W1 prime to 5", w1_prime_to_5(), "5 | b1 gives v5(5u^4 - 30u^2b1^6 + 9b1^12) = 1, not a cube");

    let expansions: Vec<bool> = (0..3).map(expansion_matches).collect();
    rep.check(
        "Q(sqrt5) expansions",
        expansions.iter().all(|&b| b),
        format!("(1 + sqrt5)^e (m + n sqrt5)^3 = 2^(e+3) (W1 + 2 sqrt5 u^2) for e = 0, 1, 2: {expansions:?}"),
    );
    for e in [1, 2] {
        let comb = if e == 1 { "L1 - L2" } else { "3L2 - L1" };
        let rhs = if e == 1 { "4W1 - 8u^2" } else { "24u^2 - 4W1" };
        rep.check(
            &format!("e = {e}"),
            e12_difference(e) && e12_mod8(e),
            format!("{comb} = 4(3m^2n + 5n^3); 3m^2n + 5n^3 = {rhs} has no solution mod 8 with m = n mod 2, W1 odd"),
        );
    }

    let classes = e0_mod5_classes();
    let classes_ok = classes == [(1, 0), (0, 1)].into_iter().collect();
    rep.check(
        "e = 0",
        e0_consequence() && classes_ok,
        format!(
            "(m + 5n)(2m^2 + 5mn + 5n^2) - 48b1^6 = 2E1 + 5E2; n = 2^e1 3^e2 n1^2 with (e1, e2) in {classes:?} mod 5"
        ),
    );
    rep.check(
        "e = 0, (e1, e2) = (1, 0)",
        e0_substitution() && e0_parity(),
        "m = 2m1, n = 2n1^2: m1 odd, n1 even, then 2v2(n1) = 1 + 2v2(u) is impossible",
    );
    rep.check(
        "e = 0, (e1, e2) = (0, 1)",
        e0_three_divides_m(),
        "n = 3n1^2: 3 | (m + 5n)(2m^2 + 5mn + 5n^2) forces 3 | m, against gcd(m, n) | 2",
    );

    rep.check(
        "first branch",
        first_branch_identity(),
        "v = 25b1^3: (u^2 - 3v^2)^2 - 2^2 3^2 5^7 b1^12 = b2^3, a point (b2/(25b1^4), (u^2 - 3v^2)/(125b1^6)) on Y^2 = X^3 + 180",
    );
}

pub fn n5_verify_with(bx: &KBox) -> DescentReport {
    let mut rep = DescentReport::new("n = 5: b^3 = v(5u^4 - 30u^2v^2 + 9v^4)", Some(5));
    algebra(&mut rep);
    let found = search::kbox_points(180, bx);
    let pts: Vec<String> = found.points.iter().map(|p| format!("({}, {})", p.x, p.y)).collect();
    rep.evidence(
        "E(K) search",
        found.points.is_empty(),
        format!(
            "Y^2 = X^3 + 180 over Q(sqrt(-3)), {}: {} candidates, {} points{}",
            bx.describe(),
            found.candidates,
            pts.len(),
            if pts.is_empty() { String::new() } else { format!(" {}", pts.join(" ")) }
        ),
    );
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansions_and_identities() {
        for e in 0..3 {
            assert!(expansion_matches(e), "e = {e}");
        }
        assert!(e12_difference(1) && e12_difference(2));
        assert!(w1_identity());
        assert!(first_branch_identity());
        assert!(e0_consequence());
        assert!(e0_substitution());
    }

    #[test]
    fn stated_cubic_coefficients() {
        let (l1, ..) = stated_cubics(1);
        assert_eq!(l1.coeff(&[2, 1]), BigInt::from(15));
        let q = q5_expansion(2);
        assert_eq!(q.re.coeff(&[3, 0]), BigInt::from(6));
    }

    #[test]
    fn residue_eliminations() {
        assert!(odd_odd_eliminated());
        assert!(w1_prime_to_5());
        assert!(e12_mod8(1) && e12_mod8(2));
        assert_eq!(e0_mod5_classes(), [(0, 1), (1, 0)].into_iter().collect());
        assert!(e0_parity());
        assert!(e0_three_divides_m());
    }

    #[test]
    fn small_box_report() {
        let bx = KBox { integral_bound: 60, integral_dens: vec![1, 2], frac_bound: 12 };
        let rep = n5_verify_with(&bx);
        assert!(rep.passed(), "{}", rep.to_text());
        assert_eq!(rep.get("E(K) search").unwrap().label, Some(super::super::EVIDENCE));
    }
}
