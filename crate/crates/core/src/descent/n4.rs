//! n = 4: the conic parametrization, the 2-adic normalisation k = 0, and
//! the genus-2 curve C: Y² = X⁶ + 48.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::search::{self, RatPoint};
use super::DescentReport;
use crate::mpoly::MPoly;

/// For odd x, y (mod 8): 3x² − y² ≡ 2 (mod 4), so k ≤ 1, and
/// 3x² + y² ≡ 0 (mod 4), so k = 1 would make c² even. Returns the number of
/// residue pairs inspected, or the first counterexample.
pub fn lemma12_residues() -> Result<usize, (u64, u64)> {
    let mut seen = 0;
    for x in (1..8u64).step_by(2) {
        for y in (1..8u64).step_by(2) {
            let (x2, y2) = (x * x, y * y);
            if (3 * x2 + 8 - y2 % 8) % 4 != 2 || (3 * x2 + y2) % 4 != 0 {
                return Err((x, y));
            }
            seen += 1;
        }
    }
    Ok(seen)
}

/// With k > 0 the coprime x, y must both be odd: 3x² − y² even forces x ≡ y (mod 2).
fn k_positive_forces_odd() -> bool {
    (0..2u64)
        .flat_map(|x| (0..2u64).map(move |y| (x, y)))
        .filter(|&(x, y)| x == 1 || y == 1)
        .filter(|&(x, y)| (3 * x * x + 2 - y * y % 2) % 2 == 0)
        .all(|(x, y)| x == 1 && y == 1)
}

/// With k = 0 and c odd, y cannot be even: x odd, y even gives
/// 3x² + y² ∈ {3, 7} (mod 8), never an odd square.
fn y_is_odd() -> bool {
    (1..8u64)
        .step_by(2)
        .flat_map(|x| (0..8u64).step_by(2).map(move |y| (x, y)))
        .all(|(x, y)| (3 * x * x + y * y) % 8 != 1)
}

/// Lift a point (b₂/b₁, c/b₁³) of C to a² + 3b⁶ = c⁴ via x = 4b₁³, y = b₂³.
fn back_substitute(p: &RatPoint) -> Option<[i64; 3]> {
    let b1 = p.x.denom().clone();
    let b2 = p.x.numer().clone();
    let c = (&p.y * num_rational::BigRational::from_integer(num_traits::pow(b1.clone(), 3))).to_integer();
    let x = BigInt::from(4) * num_traits::pow(b1.clone(), 3);
    let y = num_traits::pow(b2.clone(), 3);
    let a = BigInt::from(3) * &x * &x - &y * &y;
    let c2 = BigInt::from(3) * &x * &x + &y * &y;
    if &c * &c != c2 {
        return None;
    }
    let b = BigInt::from(-2) * &b1 * &b2;
    if num_traits::pow(b.clone(), 3) != BigInt::from(-2) * &x * &y {
        return None;
    }
    Some([a.to_i64()?, b.to_i64()?, c.to_i64()?])
}

fn is_primitive_solution(t: &[i64; 3], n: u32) -> bool {
    let [a, b, c] = t.map(BigInt::from);
    let lhs = &a * &a + BigInt::from(3) * num_traits::pow(b.clone(), 6);
    lhs == num_traits::pow(c.clone(), n as usize)
        && a.gcd(&b).is_one()
        && a.gcd(&c).is_one()
        && b.gcd(&c).is_one()
        && !a.is_zero()
        && !b.is_zero()
}

/// The exact checks: conic parametrization, k = 0, parity of y, sextic.
pub(crate) fn algebra(rep: &mut DescentReport) {
    let (x, y) = (MPoly::var(2, 0), MPoly::var(2, 1));
    let three_x2 = x.pow(2).scale(3);
    let y2 = y.pow(2);
    let conic = &(&three_x2 - &y2).pow(2) + &(&x * &y).scale(-2).pow(2).scale(3) == (&three_x2 + &y2).pow(2);
    rep.check("conic", conic, "(3x^2 - y^2)^2 + 3(-2xy)^2 = (3x^2 + y^2)^2");

    let lemma12 = lemma12_residues();
    rep.check(
        "k = 0",
        lemma12.is_ok() && k_positive_forces_odd(),
        match lemma12 {
            Ok(n) => format!("k > 0 forces x, y odd; all {n} odd residue pairs mod 8 give 3x^2 - y^2 = 2 mod 4 and 4 | 3x^2 + y^2"),
            Err((x, y)) => format!("counterexample x = {x}, y = {y} mod 8"),
        },
    );
    rep.check("y odd", y_is_odd(), "x odd, y even gives 3x^2 + y^2 = 3 or 7 mod 8, not an odd square");

    let (b1, b2) = (MPoly::var(2, 0), MPoly::var(2, 1));
    let xs = b1.pow(3).scale(4);
    let ys = b2.pow(3);
    let sextic = &(&xs * &xs).scale(3) + &(&ys * &ys) == &b1.pow(6).scale(48) + &b2.pow(6);
    rep.check("sextic", sextic, "x = 4b1^3, y = b2^3 gives 3x^2 + y^2 = 48b1^6 + b2^6");
}

/// Verify the n = 4 reduction and recover the primitive solutions from C(Q)
/// within the height bound.
pub fn n4_solve(height_bound: u64) -> DescentReport {
    let mut rep = DescentReport::new("n = 4: c^2 = 48 b1^6 + b2^6", Some(4));
    algebra(&mut rep);

    let pts = search::sextic_points(48, height_bound);
    let expected: BTreeSet<(i64, i64)> = [(1, 7), (1, -7), (-1, 7), (-1, -7)].into_iter().collect();
    let got: BTreeSet<(i64, i64)> = pts
        .iter()
        .filter_map(|p| Some((p.x.to_integer().to_i64()?, p.y.to_integer().to_i64()?)))
        .collect();
    let all_integral = pts.iter().all(|p| p.x.is_integer() && p.y.is_integer());
    let listed: Vec<String> = pts.iter().map(ToString::to_string).collect();
    rep.evidence(
        "C(Q) search",
        all_integral && got == expected && pts.len() == 4,
        format!(
            "height <= {height_bound}: infinity+, infinity- (leading coefficient 1 is a square) and {}; {} points in total",
            listed.join(" "),
            pts.len() + 2
        ),
    );

    let mut sols: BTreeSet<[i64; 3]> = BTreeSet::new();
    let mut lifted = true;
    for p in &pts {
        match back_substitute(p) {
            Some(t) => {
                // the equation is invariant under a ↦ −a, b ↦ −b, c ↦ −c
                for sa in [1, -1] {
                    for sb in [1, -1] {
                        for sc in [1, -1] {
                            sols.insert([sa * t[0], sb * t[1], sc * t[2]]);
                        }
                    }
                }
            }
            None => lifted = false,
        }
    }
    let expected_sols: BTreeSet<[i64; 3]> = [47, -47]
        .iter()
        .flat_map(|&a| [2, -2].into_iter().flat_map(move |b| [7, -7].into_iter().map(move |c| [a, b, c])))
        .collect();
    let all_valid = sols.iter().all(|t| is_primitive_solution(t, 4));
    rep.check(
        "back-substitution",
        lifted && all_valid && sols == expected_sols,
        format!(
            "(b1, b2) = (1, 1) gives (x, y) = (4, 1), a = 47, b = -2, c = 7; {} signed solutions, all satisfy a^2 + 3b^6 = c^4",
            sols.len()
        ),
    );
    rep.solutions = sols.into_iter().collect();
    rep
}
