//! n = 7: the cubic covariants of f, their resultants, and the cube-class
//! group of Q(√−3) for S = {2, 3, 7}.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::DescentReport;
use crate::arith;
use crate::kfield::{self, KElem, ResidueElem, RootChoice};
use crate::mpoly::MPoly;
use crate::poly::{self, Poly};

fn binary_form(c: &[i64]) -> MPoly {
    // c[i] is the coefficient of u^(d-i) v^i
    let d = (c.len() - 1) as u32;
    c.iter()
        .enumerate()
        .fold(MPoly::zero(2), |acc, (i, &k)| &acc + &MPoly::monomial(k, &[d - i as u32, i as u32]))
}

/// `(f, g, h)` in variables (u, v).
pub fn covariants() -> (MPoly, MPoly, MPoly) {
    let f = binary_form(&[7, 0, -105, 0, 189, 0, -27]);
    let g = binary_form(&[91, 0, -189, 0, -567, 0, 729]);
    let h = binary_form(&[7, 0, -18, 0, 27]);
    (f, g, h)
}

/// Res(f, g) with respect to variable `i`, as a polynomial in the other.
fn resultant_in(f: &MPoly, g: &MPoly, i: usize) -> Poly {
    poly::resultant(&f.coeffs_in(i), &g.coeffs_in(i))
}

fn show_monomial(p: &Poly, var: &str) -> String {
    match p.degree() {
        Some(d) if (0..d).all(|i| p.coeff(i) == BigInt::from(0)) => format!("{}*{var}^{d}", p.lead()),
        _ => format!("{p:?} (in {var})"),
    }
}

const GENERATORS: [&str; 5] = ["omega", "2", "sqrt(-3)", "2 + sqrt(-3)", "2 - sqrt(-3)"];

fn generator_elems() -> [KElem; 5] {
    let omega = KElem::new(BigInt::from(1), BigInt::from(1), BigInt::from(2)).expect("d > 0");
    [omega, KElem::from_int(2), KElem::sqrt_minus3(), KElem::from_coords(2, 1), KElem::from_coords(2, -1)]
}

/// A cubic residue character: a prime above q ≡ 1 (mod 3) and a fixed
/// primitive cube root of unity in F_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CubicCharacter {
    pub q: u64,
    pub root: u64,
    #[serde(skip)]
    choice: RootChoice,
    #[serde(skip)]
    zeta: u64,
}

impl CubicCharacter {
    fn new(q: u64, choice: RootChoice) -> Self {
        let e = (q - 1) / 3;
        let zeta = (2..q).map(|g| arith::pow_mod(g, e, q)).find(|&z| z != 1).expect("q = 1 mod 3");
        let root = kfield::root_for(q, choice).expect("split prime");
        CubicCharacter { q, root, choice, zeta }
    }

    /// Exponent of ζ in x^((q−1)/3), for x a unit at the prime.
    fn eval(&self, x: &KElem) -> u8 {
        let ResidueElem::Fq(r) = kfield::reduce(x, self.q, self.choice).expect("q-integral") else {
            unreachable!("split prime")
        };
        assert!(r != 0, "element not a unit at q = {}", self.q);
        let t = arith::pow_mod(r, (self.q - 1) / 3, self.q);
        if t == 1 {
            0
        } else if t == self.zeta {
            1
        } else {
            2
        }
    }
}

fn rank_mod3(rows: &[Vec<u8>]) -> usize {
    let mut m: Vec<Vec<u8>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, p);
        let inv = m[rank][c]; // 1 and 2 are their own inverses mod 3
        for x in m[rank].iter_mut() {
            *x = *x * inv % 3;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let k = m[r][c];
                for j in 0..cols {
                    m[r][j] = (m[r][j] + 3 * 3 - k * m[rank][j]) % 3;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CubeClassGroup {
    pub generators: Vec<String>,
    pub characters: Vec<CubicCharacter>,
    /// F_3-rank of the generators' character matrix.
    pub rank: usize,
    /// Distinct character vectors over all products of generators.
    pub classes: usize,
    /// Ordered pairs (d1, d2) of class representatives with d1·d2/28 a cube.
    pub pairs: usize,
    /// Pairs that also satisfy d2 ≡ conj(d1), as f and g are rational.
    pub conjugate_pairs: Vec<(String, String)>,
    /// `6a·sqrt(-3) X3^3 = d1 X1^3 - d2 X2^3` for a ∈ {1, 7} over the conjugate pairs.
    pub cubic_forms: Vec<String>,
}

fn product(gens: &[KElem; 5], e: &[u8; 5]) -> KElem {
    gens.iter().zip(e).fold(KElem::one(), |acc, (g, &k)| &acc * &g.pow(k as u32))
}

fn exponent_vectors() -> Vec<[u8; 5]> {
    (0..243u32)
        .map(|mut i| {
            let mut e = [0u8; 5];
            for x in e.iter_mut() {
                *x = (i % 3) as u8;
                i /= 3;
            }
            e
        })
        .collect()
}

/// Build the group from cubic residue characters at split primes q ≠ 7,
/// adding primes until the generators are independent mod cubes.
pub fn cube_class_group() -> CubeClassGroup {
    let gens = generator_elems();
    let mut chars = Vec::new();
    let mut q = 13;
    loop {
        if q % 3 == 1 && arith::is_prime(q) {
            chars.push(CubicCharacter::new(q, RootChoice::Canonical));
            chars.push(CubicCharacter::new(q, RootChoice::Conjugate));
            let rows: Vec<Vec<u8>> = gens.iter().map(|g| chars.iter().map(|c| c.eval(g)).collect()).collect();
            if rank_mod3(&rows) == 5 || q > 500 {
                break;
            }
        }
        q += 1;
    }
    let rows: Vec<Vec<u8>> = gens.iter().map(|g| chars.iter().map(|c| c.eval(g)).collect()).collect();
    let rank = rank_mod3(&rows);

    let vecs = exponent_vectors();
    let elems: Vec<KElem> = vecs.iter().map(|e| product(&gens, e)).collect();
    let signature = |x: &KElem| -> Vec<u8> { chars.iter().map(|c| c.eval(x)).collect() };
    let classes = elems.iter().map(signature).collect::<BTreeSet<_>>().len();

    let inv28 = KElem::from_int(28).inv().expect("nonzero");
    let zero: Vec<u8> = vec![0; chars.len()];
    let mut pairs = 0;
    let mut conjugate_pairs = Vec::new();
    for d1 in &elems {
        let d1_over_28 = d1 * &inv28;
        let conj_d1 = d1.conj();
        for d2 in &elems {
            if signature(&(&d1_over_28 * d2)) != zero {
                continue;
            }
            pairs += 1;
            if signature(&(d2 * &conj_d1.inv().expect("nonzero"))) == zero {
                conjugate_pairs.push((d1.to_string(), d2.to_string()));
            }
        }
    }
    let cubic_forms = [1, 7]
        .iter()
        .flat_map(|a| {
            conjugate_pairs.iter().map(move |(d1, d2)| format!("{}*sqrt(-3) X3^3 = ({d1}) X1^3 - ({d2}) X2^3", 6 * a))
        })
        .collect();
    CubeClassGroup {
        generators: GENERATORS.iter().map(|s| s.to_string()).collect(),
        characters: chars,
        rank,
        classes,
        pairs,
        conjugate_pairs,
        cubic_forms,
    }
}

fn icbrt(n: i128) -> Option<i128> {
    let r = (n.abs() as f64).cbrt().round() as i128;
    let r = (r - 1..=r + 1).find(|x| x * x * x == n.abs())?;
    Some(if n < 0 { -r } else { r })
}

/// Direct search: v = b₁³ or 49b₁³ with f(u, v) resp. f(u, v)/7 a cube.
/// Returns (primitive hits, non-primitive hits), where a hit gives
/// a = f₁(u, v) ≠ 0, b³ = v·f(u, v), and primitive means gcd(a, b) = 1.
fn parametric_search(u_bound: i64, b1_bound: i64) -> (Vec<(i64, i64)>, Vec<(i64, i64)>) {
    let (f1, _) = super::lemma11_polys(7);
    let (f, ..) = covariants();
    let (mut primitive, mut imprimitive) = (Vec::new(), Vec::new());
    for b1 in 1..=b1_bound {
        for (scale, div) in [(1i128, 1i128), (49, 7)] {
            let v = scale * (b1 as i128).pow(3);
            for u in -u_bound..=u_bound {
                if (u as i128).gcd(&v) != 1 {
                    continue;
                }
                let (u2, v2) = ((u as i128).pow(2), v * v);
                let fv = 7 * u2.pow(3) - 105 * u2 * u2 * v2 + 189 * u2 * v2 * v2 - 27 * v2.pow(3);
                if fv % div != 0 || icbrt(fv / div).is_none() {
                    continue;
                }
                let pt = [BigInt::from(u), BigInt::from(v)];
                let a = f1.eval(&pt);
                if a.is_zero() {
                    continue;
                }
                let b3 = BigInt::from(v) * f.eval(&pt);
                if a.gcd(&b3).is_one() {
                    primitive.push((u, v as i64));
                } else {
                    imprimitive.push((u, v as i64));
                }
            }
        }
    }
    (primitive, imprimitive)
}

/// Covariant identity, resultants and the cube-class count.
pub(crate) fn algebra(rep: &mut DescentReport) {
    let (f, g, h) = covariants();
    let (_, f2) = super::lemma11_polys(7);
    let v = MPoly::var(2, 1);
    let ident = h.pow(3).scale(28) == &g.pow(2) + &f.pow(2).scale(27);
    rep.check(
        "covariants",
        ident && &f * &v == f2,
        "28h^3 = g^2 + 27f^2 and v f(u, v) = f2(u, v) for p = 7",
    );

    let c = BigInt::from(2).pow(42) * BigInt::from(3).pow(18) * BigInt::from(7).pow(6);
    let expected = Poly::monomial(c, 36);
    let (ru, rv) = rayon::join(|| resultant_in(&f, &g, 0), || resultant_in(&f, &g, 1));
    rep.check(
        "resultants",
        ru == expected && rv == expected,
        format!(
            "Res(f, g; u) = {}, Res(f, g; v) = {}; expected 2^42 3^18 7^6 = {}",
            show_monomial(&ru, "v"),
            show_monomial(&rv, "u"),
            expected.lead()
        ),
    );

    let grp = cube_class_group();
    let qs: Vec<u64> = grp.characters.iter().map(|c| c.q).collect::<BTreeSet<_>>().into_iter().collect();
    rep.check(
        "cube classes",
        grp.rank == 5 && grp.classes == 243,
        format!(
            "generators {} have F3-rank {} under cubic characters at primes above {qs:?}; {} classes",
            grp.generators.join(", "),
            grp.rank,
            grp.classes
        ),
    );
    rep.check(
        "(d1, d2) pairs",
        grp.pairs == 243 && grp.conjugate_pairs.len() == 9,
        format!(
            "{} pairs with d1 d2/28 a cube; {} with d2 = conj(d1) mod cubes; {} cubic forms for a in {{1, 7}}",
            grp.pairs,
            grp.conjugate_pairs.len(),
            grp.cubic_forms.len()
        ),
    );

}

pub fn n7_verify() -> DescentReport {
    let mut rep = DescentReport::new("n = 7: b^3 = v f(u, v)", Some(7));
    algebra(&mut rep);
    let (ub, bb) = (2000, 12);
    let (hits, imprimitive) = parametric_search(ub, bb);
    let skipped: Vec<String> = imprimitive.iter().map(|(u, v)| format!("({u}, {v})")).collect();
    rep.evidence(
        "parametric search",
        hits.is_empty(),
        format!(
            "v in {{b1^3, 49 b1^3}}, 1 <= b1 <= {bb}, |u| <= {ub}, gcd(u, v) = 1, f1(u, v) != 0: {} primitive hits; non-primitive (u, v): {}",
            hits.len(),
            if skipped.is_empty() { "none".to_string() } else { skipped.join(" ") }
        ),
    );
    rep
}
