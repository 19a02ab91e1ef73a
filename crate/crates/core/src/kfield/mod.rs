//! Exact arithmetic in K = Q(√−3), its residue fields, and the splitting
//! behaviour of rational primes in K.

mod elem;
mod residue;

pub use elem::KElem;
pub use residue::{FiniteField, PrimeField, QuadField, ResidueElem, ResidueField};

use thiserror::Error;

use crate::arith;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KFieldError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{q} is not split in Q(sqrt(-3)) (it is {kind})")]
    NotSplit { q: u64, kind: SplitType },
    #[error("element is not {0}-integral")]
    NotIntegral(u64),
    #[error("reduction at the ramified prime 3 is not supported")]
    Ramified,
    #[error("zero denominator")]
    ZeroDenominator,
}

/// Factorization type of an odd rational prime in Q(√−3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
}

impl std::fmt::Display for SplitType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SplitType::Split => "split",
            SplitType::Inert => "inert",
            SplitType::Ramified => "ramified",
        })
    }
}

/// Which of the two square roots of −3 modulo a split prime `√−3` maps to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootChoice {
    /// The smaller root `r` in `(0, q)`.
    Canonical,
    /// The other root `q − r`.
    Conjugate,
}

impl RootChoice {
    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            0 => Some(RootChoice::Canonical),
            1 => Some(RootChoice::Conjugate),
            _ => None,
        }
    }
}

fn check_odd_prime(q: u64) -> Result<(), KFieldError> {
    if q == 2 || !arith::is_prime(q) {
        return Err(KFieldError::NotOddPrime(q));
    }
    Ok(())
}

/// Splitting type of `q` via the Kronecker symbol (−3 / q), evaluated by
/// Euler's criterion.
pub fn split_type(q: u64) -> Result<SplitType, KFieldError> {
    check_odd_prime(q)?;
    if q == 3 {
        return Ok(SplitType::Ramified);
    }
    let minus3 = q - 3 % q;
    if arith::pow_mod(minus3, (q - 1) / 2, q) == 1 {
        Ok(SplitType::Split)
    } else {
        Ok(SplitType::Inert)
    }
}

/// Canonical square root of −3 modulo a split prime: the smaller of the two.
pub fn sqrt_minus3(q: u64) -> Result<u64, KFieldError> {
    match split_type(q)? {
        SplitType::Split => {}
        kind => return Err(KFieldError::NotSplit { q, kind }),
    }
    let target = q - 3;
    let r = residue::sqrt_mod(target, q).expect("split prime has a root of -3");
    Ok(r.min(q - r))
}

/// Image of `√−3` under the chosen embedding into F_q.
pub fn root_for(q: u64, choice: RootChoice) -> Result<u64, KFieldError> {
    let r = sqrt_minus3(q)?;
    Ok(match choice {
        RootChoice::Canonical => r,
        RootChoice::Conjugate => q - r,
    })
}

/// Residue field of O_K at a prime above `q` (`q ≠ 3`): F_q for split `q`,
/// F_q[t]/(t² + 3) for inert `q`.
pub fn residue_field(q: u64) -> Result<ResidueField, KFieldError> {
    match split_type(q)? {
        SplitType::Split => Ok(ResidueField::Prime { q }),
        SplitType::Inert => Ok(ResidueField::Quadratic { q, nonresidue: q - 3 }),
        SplitType::Ramified => Err(KFieldError::Ramified),
    }
}

/// Reduce a q-integral element of K modulo a prime above `q`.
///
/// For split `q` the root choice selects the prime; for inert `q` it is
/// ignored and `√−3 ↦ t` in F_q[t]/(t² + 3).
pub fn reduce(e: &KElem, q: u64, choice: RootChoice) -> Result<ResidueElem, KFieldError> {
    let field = residue_field(q)?;
    let den = arith::big_mod_u64(e.den(), q);
    if den == 0 {
        return Err(KFieldError::NotIntegral(q));
    }
    let den_inv = arith::pow_mod(den, q - 2, q);
    let x = arith::mul_mod(arith::big_mod_u64(e.x(), q), den_inv, q);
    let y = arith::mul_mod(arith::big_mod_u64(e.y(), q), den_inv, q);
    match field {
        ResidueField::Prime { q } => {
            let r = root_for(q, choice)?;
            Ok(ResidueElem::Fq((x + arith::mul_mod(y, r, q)) % q))
        }
        ResidueField::Quadratic { .. } => Ok(ResidueElem::Fq2(x, y)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn split_examples() {
        assert_eq!(split_type(7), Ok(SplitType::Split));
        assert_eq!(split_type(5), Ok(SplitType::Inert));
        assert_eq!(split_type(3), Ok(SplitType::Ramified));
        assert_eq!(split_type(2), Err(KFieldError::NotOddPrime(2)));
        assert_eq!(split_type(9), Err(KFieldError::NotOddPrime(9)));
    }

    #[test]
    fn split_type_follows_q_mod_3() {
        for q in crate::arith::primes_in(5, 10_000) {
            let expected = if q % 3 == 1 { SplitType::Split } else { SplitType::Inert };
            assert_eq!(split_type(q).unwrap(), expected, "q = {q}");
        }
    }

    #[test]
    fn canonical_roots() {
        // Oracle: exhaustive search for the smallest r with r^2 = -3 mod q.
        for q in [7u64, 13, 31, 37, 43, 1009] {
            let brute = (1..q).find(|r| (r * r + 3) % q == 0).unwrap();
            assert_eq!(sqrt_minus3(q).unwrap(), brute);
        }
        assert_eq!(sqrt_minus3(7).unwrap(), 2);
        assert_eq!(sqrt_minus3(13).unwrap(), 6);
        assert_eq!(sqrt_minus3(31).unwrap(), 11);
        assert!(matches!(sqrt_minus3(5), Err(KFieldError::NotSplit { .. })));
        assert!(matches!(sqrt_minus3(3), Err(KFieldError::NotSplit { .. })));
    }

    #[test]
    fn reduce_sqrt_minus3() {
        let s = KElem::sqrt_minus3();
        assert_eq!(reduce(&s, 7, RootChoice::Canonical), Ok(ResidueElem::Fq(2)));
        assert_eq!(reduce(&s, 7, RootChoice::Conjugate), Ok(ResidueElem::Fq(5)));
        let t = reduce(&s, 5, RootChoice::Canonical).unwrap();
        assert_eq!(t, ResidueElem::Fq2(0, 1));
        let field = residue_field(5).unwrap();
        assert_eq!(field.mul(&t, &t), ResidueElem::Fq2(2, 0)); // -3 mod 5
    }

    #[test]
    fn reduce_rejects_bad_inputs() {
        let half = KElem::new(BigInt::from(1), BigInt::from(1), BigInt::from(2)).unwrap();
        assert!(reduce(&half, 7, RootChoice::Canonical).is_ok());
        let seventh = KElem::new(BigInt::from(1), BigInt::from(0), BigInt::from(7)).unwrap();
        assert_eq!(
            reduce(&seventh, 7, RootChoice::Canonical),
            Err(KFieldError::NotIntegral(7))
        );
        assert_eq!(reduce(&seventh, 3, RootChoice::Canonical), Err(KFieldError::Ramified));
    }
    fn random_elem(rng: &mut rand_chacha::ChaCha8Rng) -> KElem {
        use rand::Rng;
        let den: i64 = if rng.gen_bool(0.5) { 1 } else { 2 };
        KElem::new(rng.gen_range(-1000i64..=1000).into(), rng.gen_range(-1000i64..=1000).into(), den.into()).unwrap()
    }

    #[test]
    fn reduction_is_a_ring_homomorphism() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        for q in [5u64, 7, 13] {
            let field = residue_field(q).unwrap();
            for choice in [RootChoice::Canonical, RootChoice::Conjugate] {
                for _ in 0..200 {
                    let (x, y) = (random_elem(&mut rng), random_elem(&mut rng));
                    let (rx, ry) = (reduce(&x, q, choice).unwrap(), reduce(&y, q, choice).unwrap());
                    assert_eq!(reduce(&(&x * &y), q, choice).unwrap(), field.mul(&rx, &ry), "q = {q}");
                    assert_eq!(reduce(&(&x + &y), q, choice).unwrap(), field.add(&rx, &ry), "q = {q}");
                }
            }
        }
    }

    #[test]
    fn conjugation_exchanges_root_choices() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for q in crate::arith::primes_in(5, 200).into_iter().filter(|q| q % 3 == 1) {
            for _ in 0..50 {
                let x = random_elem(&mut rng);
                assert_eq!(
                    reduce(&x.conj(), q, RootChoice::Canonical).unwrap(),
                    reduce(&x, q, RootChoice::Conjugate).unwrap()
                );
            }
        }
    }
}
