//! Bounded rational-point searches used by the descent checks.
//!
//! Heights are naive: a rational `r/s` in lowest terms has height
//! `max(|r|, s)`. Searches are exhaustive inside their box and say nothing
//! outside it.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::kfield::KElem;

/// Moduli used to reject non-squares before an exact root is taken.
const FILTER_MODULI: [u64; 4] = [64, 63, 65, 11];

fn square_table(m: u64) -> Vec<bool> {
    let mut t = vec![false; m as usize];
    for x in 0..m {
        t[(x * x % m) as usize] = true;
    }
    t
}

pub fn is_square_u128(n: u128) -> Option<u128> {
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

pub fn is_square_i128(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    is_square_u128(n as u128).map(|r| r as i128)
}

/// A rational point printed as `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct RatPoint {
    #[serde(serialize_with = "as_string")]
    pub x: BigRational,
    #[serde(serialize_with = "as_string")]
    pub y: BigRational,
}

fn as_string<S: serde::Serializer, T: std::fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl std::fmt::Display for RatPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

fn rat(n: i128, d: i128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Affine points on `y² = x³ + k` with `x = r/s`, `max(|r|, s) ≤ bound`.
///
/// For `x = r/s` in lowest terms, `y² = s(r³ + ks³)/s⁴`, so the test is
/// whether `s(r³ + ks³)` is a square.
pub fn mordell_points(k: i64, bound: u64) -> Vec<RatPoint> {
    let b = bound as i128;
    let mut pts: Vec<RatPoint> = (1..=b)
        .into_par_iter()
        .flat_map_iter(|s| {
            let ks3 = k as i128 * s * s * s;
            (-b..=b).filter_map(move |r| {
                if r.gcd(&s) != 1 {
                    return None;
                }
                let w = is_square_i128(s * (r * r * r + ks3))?;
                Some((r, s, w))
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flat_map(|(r, s, w)| {
            let x = rat(r, s);
            let y = rat(w, s * s);
            let neg = -y.clone();
            if w == 0 {
                vec![RatPoint { x, y }]
            } else {
                vec![RatPoint { x: x.clone(), y }, RatPoint { x, y: neg }]
            }
        })
        .collect();
    pts.sort();
    pts
}

/// Affine points on the genus-2 curve `Y² = X⁶ + k` with `X = r/s`,
/// `max(|r|, s) ≤ bound`. Requires `bound ≤ 10⁵` so that `r⁶ + k s⁶` fits
/// in 128 bits.
pub fn sextic_points(k: u64, bound: u64) -> Vec<RatPoint> {
    assert!(bound <= 100_000, "sextic search bound too large for 128-bit arithmetic");
    let tables: Vec<Vec<bool>> = FILTER_MODULI.iter().map(|&m| square_table(m)).collect();
    let sixth = |r: u64, m: u64| -> u64 {
        let x = r % m;
        let x3 = x * x % m * x % m;
        x3 * x3 % m
    };
    let r6_mod: Vec<Vec<u8>> = FILTER_MODULI
        .iter()
        .map(|&m| (0..=bound).map(|r| sixth(r, m) as u8).collect())
        .collect();
    let hits: Vec<(u64, u64, u128)> = (1..=bound)
        .into_par_iter()
        .flat_map_iter(|s| {
            let ks6: Vec<u64> = FILTER_MODULI.iter().map(|&m| k % m * sixth(s, m) % m).collect();
            let s6 = (s as u128).pow(6);
            let (tables, r6_mod) = (&tables, &r6_mod);
            (0..=bound).filter_map(move |r| {
                for i in 0..FILTER_MODULI.len() {
                    let m = FILTER_MODULI[i];
                    if !tables[i][((r6_mod[i][r as usize] as u64 + ks6[i]) % m) as usize] {
                        return None;
                    }
                }
                if r.gcd(&s) != 1 {
                    return None;
                }
                let w = is_square_u128((r as u128).pow(6) + k as u128 * s6)?;
                Some((r, s, w))
            })
        })
        .collect();
    let mut pts = Vec::new();
    for (r, s, w) in hits {
        let ys = [rat(w as i128, (s as i128).pow(3)), -rat(w as i128, (s as i128).pow(3))];
        let xs = if r == 0 { vec![rat(0, 1)] } else { vec![rat(r as i128, s as i128), rat(-(r as i128), s as i128)] };
        for x in &xs {
            for y in &ys {
                pts.push(RatPoint { x: x.clone(), y: y.clone() });
            }
        }
    }
    pts.sort();
    pts.dedup();
    pts
}

/// Search region for points of `Y² = X³ + k` over Q(√−3), with
/// `X = (x₁ + x₂√−3)/d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KBox {
    /// Numerator coordinate bound for the near-integral tier.
    pub integral_bound: i64,
    /// Denominators searched in the near-integral tier.
    pub integral_dens: Vec<i64>,
    /// Common bound on |x₁|, |x₂| and d in the fractional tier.
    pub frac_bound: i64,
}

impl Default for KBox {
    fn default() -> Self {
        KBox { integral_bound: 10_000, integral_dens: vec![1, 2], frac_bound: 200 }
    }
}

impl KBox {
    pub fn describe(&self) -> String {
        format!(
            "X = (x1 + x2*sqrt(-3))/d with |x1|,|x2| <= {} for d in {:?}, and |x1|,|x2|,d <= {}",
            self.integral_bound, self.integral_dens, self.frac_bound
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KPoint {
    pub x: String,
    pub y: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KSearch {
    pub candidates: u64,
    pub points: Vec<KPoint>,
}

/// Square root in O_K of an element given by `4γ = c1 + c2√−3`, returned
/// as `(B1, B2)` with `(B1 + B2√−3)² = 4γ`.
fn sqrt_in_z_sqrt_minus3(c1: i128, c2: i128) -> Option<(i128, i128)> {
    let norm = c1.checked_mul(c1)?.checked_add(3i128.checked_mul(c2)?.checked_mul(c2)?)?;
    let m = is_square_i128(norm)?;
    let (t1, t2) = (c1 + m, m - c1);
    if t1 % 2 != 0 || t2 % 6 != 0 {
        return None;
    }
    let b1 = is_square_i128(t1 / 2)?;
    let b2 = is_square_i128(t2 / 6)?;
    if 2 * b1 * b2 == c2 {
        Some((b1, b2))
    } else if -2 * b1 * b2 == c2 {
        Some((b1, -b2))
    } else {
        None
    }
}

/// Points of `Y² = X³ + k` over Q(√−3) inside `bx`.
///
/// With `A = x₁ + x₂√−3`, `X³ + k` is a square iff `G = d·A³ + k·d⁴` is;
/// candidates are screened by whether `N(G)` is a square modulo small
/// moduli, then tested exactly.
pub fn kbox_points(k: i64, bx: &KBox) -> KSearch {
    let mut tiers: Vec<(i64, i64)> = bx.integral_dens.iter().map(|&d| (d, bx.integral_bound)).collect();
    tiers.extend((1..=bx.frac_bound).filter(|d| !bx.integral_dens.contains(d)).map(|d| (d, bx.frac_bound)));
    let found: Vec<(u64, Vec<(i128, i128, i128, i128, i128)>)> =
        tiers.par_iter().map(|&(d, bound)| kbox_tier(k, d, bound)).collect();
    let mut candidates = 0;
    let mut raw = Vec::new();
    for (c, pts) in found {
        candidates += c;
        raw.extend(pts);
    }
    let mut points: Vec<(KElem, KElem)> = raw
        .into_iter()
        .map(|(x1, x2, d, b1, b2)| {
            let x = KElem::new(BigInt::from(x1), BigInt::from(x2), BigInt::from(d)).expect("d > 0");
            let y = KElem::new(BigInt::from(b1), BigInt::from(b2), BigInt::from(2 * d * d)).expect("d > 0");
            (x, y)
        })
        .collect();
    points.sort_by_key(|(x, y)| (x.to_string(), y.to_string()));
    points.dedup();
    KSearch {
        candidates,
        points: points.into_iter().map(|(x, y)| KPoint { x: x.to_string(), y: y.to_string() }).collect(),
    }
}

fn kbox_tier(k: i64, d: i64, bound: i64) -> (u64, Vec<(i128, i128, i128, i128, i128)>) {
    let (k, d128) = (k as i128, d as i128);
    let d4 = d128.pow(4);
    // per-modulus tables of "N(G) mod m is a square" indexed by (x1 mod m, x2 mod m)
    let tables: Vec<(u64, Vec<bool>)> = FILTER_MODULI
        .iter()
        .map(|&m| {
            let sq = square_table(m);
            let mi = m as i128;
            let mut t = vec![false; (m * m) as usize];
            for a1 in 0..mi {
                for a2 in 0..mi {
                    let g1 = (d128 * (a1 * a1 * a1 - 9 * a1 * a2 * a2) + k * d4).rem_euclid(mi);
                    let g2 = (d128 * (3 * a1 * a1 * a2 - 3 * a2 * a2 * a2)).rem_euclid(mi);
                    t[(a1 * mi + a2) as usize] = sq[((g1 * g1 + 3 * g2 * g2) % mi) as usize];
                }
            }
            (m, t)
        })
        .collect();
    let residues: Vec<Vec<u64>> = FILTER_MODULI
        .iter()
        .map(|&m| (-bound..=bound).map(|x| x.rem_euclid(m as i64) as u64).collect())
        .collect();
    let mut hits = Vec::new();
    let width = (2 * bound + 1) as u64;
    for i1 in 0..(2 * bound + 1) as usize {
        'cell: for i2 in 0..(2 * bound + 1) as usize {
            for (j, (m, t)) in tables.iter().enumerate() {
                if !t[(residues[j][i1] * m + residues[j][i2]) as usize] {
                    continue 'cell;
                }
            }
            let (x1, x2) = (i1 as i128 - bound as i128, i2 as i128 - bound as i128);
            if x1.gcd(&x2).gcd(&d128) != 1 {
                continue;
            }
            let g1 = d128 * (x1 * x1 * x1 - 9 * x1 * x2 * x2) + k * d4;
            let g2 = d128 * (3 * x1 * x1 * x2 - 3 * x2 * x2 * x2);
            if let Some((b1, b2)) = sqrt_in_z_sqrt_minus3(4 * g1, 4 * g2) {
                hits.push((x1, x2, d128, b1, b2));
                if b1 != 0 || b2 != 0 {
                    hits.push((x1, x2, d128, -b1, -b2));
                }
            }
        }
    }
    (width * width, hits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn mordell_search_finds_known_points() {
        let pts = mordell_points(48, 400);
        let xs: Vec<_> = pts.iter().map(|p| p.x.clone()).collect();
        assert!(xs.contains(&r(1, 1)));
        assert!(xs.contains(&r(-383, 196)));
        // y² = x³ + 1: (−1, 0), (0, ±1), (2, ±3)
        assert_eq!(mordell_points(1, 50).len(), 5);
    }

    #[test]
    fn sextic_search_small() {
        let pts = sextic_points(48, 200);
        assert_eq!(pts.len(), 4);
        assert!(pts.iter().all(|p| p.x == r(1, 1) || p.x == r(-1, 1)));
        // Y² = X⁶ + 1: X = 0 only
        assert_eq!(sextic_points(1, 100).len(), 2);
    }

    #[test]
    fn kbox_finds_conjugate_points() {
        // Y² = X³ + 1 has (2ζ₃, ±3) with 2ζ₃ = −1 + √−3 besides the rational points.
        let bx = KBox { integral_bound: 6, integral_dens: vec![1, 2], frac_bound: 4 };
        let found = kbox_points(1, &bx);
        let xs: Vec<&str> = found.points.iter().map(|p| p.x.as_str()).collect();
        assert!(xs.contains(&"-1 + 1*s"), "{xs:?}");
        assert!(xs.contains(&"2"));
        assert!(xs.contains(&"-1"));
        assert_eq!(found.candidates, 2 * 13 * 13 + 2 * 9 * 9);
    }

    #[test]
    fn o_k_square_roots() {
        // (1 + √−3)² = −2 + 2√−3, times 4
        assert_eq!(sqrt_in_z_sqrt_minus3(-8, 8), Some((2, 2)));
        assert_eq!(sqrt_in_z_sqrt_minus3(20, 0), None);
    }
}
