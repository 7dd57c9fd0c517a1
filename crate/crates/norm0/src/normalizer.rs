//! The named elements of `Norm(Γ₀(N))` and the membership pattern test.
//!
//! An Atkin-Lehner involution `w_m` (for an exact divisor `m ‖ N`) is the
//! class of `(1/√m)·[[ma, b], [Nc, md]]` with determinant 1; a shift
//! `S_{v'}` is the class of `[[1, 1/v'], [0, 1]]`, in the normalizer
//! exactly when `v'` divides `v(N)`. Membership of an arbitrary candidate
//! is decided by searching the divisor pattern: `M = p/√det(p)` normalizes
//! `Γ₀(N)` iff for some `δ | q` and `Δ | σ/v` the scaled matrix `λ·p`
//! (with `λ² = v²Δ²δ/det(p)`) has both diagonal entries divisible by
//! `vδΔ²` and lower-left entry divisible by `N`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use std::fmt;

use crate::arith::{factorize, gcd_u64, inv_mod, is_perfect_square};
use crate::gamma0::Level;
use crate::mat2::{canonicalize, Mat2, ProjectiveMatrix};
use crate::{Error, Result, DEFAULT_FACTOR_CAP};

/// Witness for a positive membership verdict: the divisor pair `(δ, Δ)`
/// and the integer scale `λ` with `λ²·det = v²Δ²δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MembershipWitness {
    pub delta: u64,
    pub big_delta: u64,
    pub lambda: u64,
}

impl fmt::Display for MembershipWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "delta={}, Delta={}, lambda={}",
            self.delta, self.big_delta, self.lambda
        )
    }
}

/// The Atkin-Lehner involution `w_m` for an exact divisor `m ‖ N`.
///
/// Returns the canonical solution `[[mα, β], [N, m]]` where `β` is the
/// minimal nonnegative integer with `(N/m)·β ≡ -1 (mod m)` and
/// `α = (1 + (N/m)β)/m`. Different valid solutions represent the same
/// coset; compare with `coset_equal`, never entrywise.
pub fn atkin_lehner(level: &Level, m: u64) -> Result<ProjectiveMatrix> {
    let n = level.n();
    if m == 0 || !n.is_multiple_of(m) || gcd_u64(m, n / m) != 1 {
        return Err(Error::NotExactDivisor { m, n });
    }
    let cofactor = n / m;
    let inv = inv_mod(cofactor % m.max(1), m).expect("exact divisor cofactor is invertible");
    let beta = if m == 1 { 0 } else { (m - inv % m) % m };
    debug_assert_eq!((cofactor as u128 * beta as u128 + 1) % m as u128, 0);
    let alpha = (1 + cofactor as u128 * beta as u128) / m as u128;
    let mat = Mat2::new(
        BigInt::from(m as u128 * alpha),
        BigInt::from(beta),
        BigInt::from(n),
        BigInt::from(m),
    );
    let p = canonicalize(&mat)?;
    debug_assert_eq!(p.det(), &BigInt::from(m));
    Ok(p)
}

/// The shift `S_{v'}`, represented by `[[v', 1], [0, v']]` of determinant
/// `v'²`. Rejected at construction when `v'` does not divide `v(N)`.
pub fn shift(level: &Level, vp: u64) -> Result<ProjectiveMatrix> {
    let v = level.v();
    if vp == 0 || !v.is_multiple_of(vp) {
        return Err(Error::ShiftNotInNormalizer { vp, v });
    }
    canonicalize(&Mat2::new(
        BigInt::from(vp),
        BigInt::from(1),
        BigInt::from(0),
        BigInt::from(vp),
    ))
}

/// Membership pattern test for `Norm(Γ₀(N))`.
///
/// Searches divisor pairs in a fixed `(δ asc, Δ asc)` order so the
/// returned witness is deterministic; only existence carries meaning.
pub fn membership_witness(level: &Level, p: &ProjectiveMatrix) -> Option<MembershipWitness> {
    let v = level.v();
    let det = p.det();
    let deltas = factorize(level.q(), DEFAULT_FACTOR_CAP)
        .expect("q divides an already-factored level")
        .divisors();
    let big_deltas = factorize(level.sigma() / v, DEFAULT_FACTOR_CAP)
        .expect("sigma/v divides an already-factored level")
        .divisors();
    let n_big = BigInt::from(level.n());
    for &delta in &deltas {
        for &big_delta in &big_deltas {
            let target = BigInt::from(v as u128 * v as u128 * big_delta as u128 * big_delta as u128 * delta as u128);
            let (lambda_sq, rem) = target.div_rem(det);
            if !rem.is_zero() {
                continue;
            }
            let Some(lambda) = is_perfect_square(&lambda_sq) else {
                continue;
            };
            let modulus = BigInt::from(v as u128 * delta as u128 * big_delta as u128 * big_delta as u128);
            if (p.a() * &lambda).mod_floor(&modulus).is_zero()
                && (p.d() * &lambda).mod_floor(&modulus).is_zero()
                && (p.c() * &lambda).mod_floor(&n_big).is_zero()
            {
                use num_traits::ToPrimitive;
                return Some(MembershipWitness {
                    delta,
                    big_delta,
                    lambda: lambda.to_u64().expect("lambda^2 divides v^2 Delta^2 delta <= N"),
                });
            }
        }
    }
    None
}

/// Named generating set of the quotient: `w_{p^{v_p(N)}}` for each prime
/// `p | N` (ascending), then `S_{v(N)}` when `v(N) > 1`.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    n: u64,
    gens: Vec<(String, ProjectiveMatrix)>,
}

impl GeneratorSet {
    pub fn new(n: u64, gens: Vec<(String, ProjectiveMatrix)>) -> Result<Self> {
        let mut names: Vec<&str> = gens.iter().map(|(name, _)| name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        if names.len() != gens.len() {
            return Err(Error::InvalidInput("duplicate generator name".into()));
        }
        Ok(GeneratorSet { n, gens })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &ProjectiveMatrix)> {
        self.gens.iter().map(|(name, m)| (name.as_str(), m))
    }

    pub fn get(&self, name: &str) -> Option<&ProjectiveMatrix> {
        self.gens
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
    }

    pub fn names(&self) -> Vec<&str> {
        self.gens.iter().map(|(n, _)| n.as_str()).collect()
    }
}

/// Standard generator names: `w{m}` and `S{v}`.
pub fn w_name(m: u64) -> String {
    format!("w{m}")
}
pub fn s_name(v: u64) -> String {
    format!("S{v}")
}

pub fn canonical_generators(level: &Level) -> Result<GeneratorSet> {
    let mut gens = Vec::new();
    for &(p, e) in &level.factorization().factors {
        let m = p.pow(e);
        let w = atkin_lehner(level, m)?;
        debug_assert!(membership_witness(level, &w).is_some());
        gens.push((w_name(m), w));
    }
    let v = level.v();
    if v > 1 {
        let s = shift(level, v)?;
        debug_assert!(membership_witness(level, &s).is_some());
        gens.push((s_name(v), s));
    }
    GeneratorSet::new(level.n(), gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(a: i64, b: i64, c: i64, d: i64) -> ProjectiveMatrix {
        canonicalize(&Mat2::from_i64(a, b, c, d)).unwrap()
    }

    #[test]
    fn atkin_lehner_construction() {
        let level = Level::new(48).unwrap();
        let w1 = atkin_lehner(&level, 1).unwrap();
        assert!(level.coset_equal(&w1, &ProjectiveMatrix::identity()));

        // Fricke involution: same coset as [[0,-1],[48,0]]
        let wn = atkin_lehner(&level, 48).unwrap();
        assert!(level.coset_equal(&wn, &pm(0, -1, 48, 0)));

        let w3 = atkin_lehner(&level, 3).unwrap();
        assert_eq!(w3.det(), &BigInt::from(3));
        assert!(w3.c().mod_floor(&BigInt::from(48)).is_zero());
        assert!(w3.a().mod_floor(&BigInt::from(3)).is_zero());
        assert!(w3.d().mod_floor(&BigInt::from(3)).is_zero());
        assert!(level.coset_equal(&w3, &pm(3, 2, 48, 33)));

        assert!(matches!(
            atkin_lehner(&level, 2),
            Err(Error::NotExactDivisor { m: 2, n: 48 })
        ));
        assert!(matches!(
            atkin_lehner(&level, 5),
            Err(Error::NotExactDivisor { m: 5, n: 48 })
        ));
    }

    #[test]
    fn atkin_lehner_is_involution() {
        for n in [4u64, 9, 12, 45, 48, 63, 144] {
            let level = Level::new(n).unwrap();
            for m in level.factorization().exact_divisors() {
                let w = atkin_lehner(&level, m).unwrap();
                let sq = w.compose(&w);
                assert!(
                    level.coset_equal(&sq, &ProjectiveMatrix::identity()),
                    "w_{m}^2 != 1 at N={n}"
                );
            }
        }
    }

    #[test]
    fn atkin_lehner_multiplicative_on_coprime_exact_divisors() {
        for n in [45u64, 48, 63, 90, 144, 315] {
            let level = Level::new(n).unwrap();
            let exact = level.factorization().exact_divisors();
            for &m1 in &exact {
                for &m2 in &exact {
                    if gcd_u64(m1, m2) != 1 {
                        continue;
                    }
                    let lhs = atkin_lehner(&level, m1)
                        .unwrap()
                        .compose(&atkin_lehner(&level, m2).unwrap());
                    let rhs = atkin_lehner(&level, m1 * m2).unwrap();
                    assert!(level.coset_equal(&lhs, &rhs), "w_{m1} w_{m2} != w_{} at N={n}", m1 * m2);
                }
            }
        }
    }

    #[test]
    fn shift_construction() {
        let level = Level::new(48).unwrap();
        assert_eq!(shift(&level, 4).unwrap(), pm(4, 1, 0, 4));
        assert!(matches!(
            shift(&level, 8),
            Err(Error::ShiftNotInNormalizer { vp: 8, v: 4 })
        ));
        let s1 = shift(&level, 1).unwrap();
        assert_eq!(s1, pm(1, 1, 0, 1));
        assert!(level.coset_equal(&s1, &ProjectiveMatrix::identity()));
    }

    #[test]
    fn shift_power_is_identity() {
        for n in [4u64, 9, 16, 48, 63, 144, 256] {
            let level = Level::new(n).unwrap();
            let v = level.v();
            for vp in factorize(v, 1 << 30).unwrap().divisors() {
                let s = shift(&level, vp).unwrap();
                let mut acc = ProjectiveMatrix::identity();
                for _ in 0..vp {
                    acc = acc.compose(&s);
                }
                assert!(
                    level.coset_equal(&acc, &ProjectiveMatrix::identity()),
                    "S_{vp}^{vp} != 1 at N={n}"
                );
            }
        }
    }

    #[test]
    fn membership_witness_examples() {
        let level = Level::new(48).unwrap();
        let w = membership_witness(&level, &pm(4, 1, 0, 4)).unwrap();
        assert_eq!((w.delta, w.big_delta, w.lambda), (1, 1, 1));

        let w = membership_witness(&level, &pm(3, 2, 48, 33)).unwrap();
        assert_eq!((w.delta, w.big_delta, w.lambda), (3, 1, 4));

        assert!(membership_witness(&level, &pm(5, 1, 0, 5)).is_none());
        assert!(membership_witness(&level, &pm(2, 1, 1, 1)).is_none());
        // scaled pattern: lambda = 4 makes [[1,0],[24,1]] a member at N=48
        let w = membership_witness(&level, &pm(1, 0, 24, 1)).unwrap();
        assert_eq!((w.delta, w.big_delta, w.lambda), (1, 1, 4));
    }

    #[test]
    fn membership_closed_under_products() {
        let level = Level::new(48).unwrap();
        let gens = canonical_generators(&level).unwrap();
        let mats: Vec<ProjectiveMatrix> = gens.iter().map(|(_, m)| m.clone()).collect();
        for x in &mats {
            for y in &mats {
                let prod = x.compose(y);
                assert!(
                    membership_witness(&level, &prod).is_some(),
                    "product {x} * {y} left the normalizer"
                );
            }
        }
    }

    #[test]
    fn canonical_generator_names() {
        let level = Level::new(5).unwrap();
        assert_eq!(canonical_generators(&level).unwrap().names(), vec!["w5"]);

        let level = Level::new(48).unwrap();
        assert_eq!(
            canonical_generators(&level).unwrap().names(),
            vec!["w16", "w3", "S4"]
        );

        let level = Level::new(63).unwrap();
        assert_eq!(
            canonical_generators(&level).unwrap().names(),
            vec!["w9", "w7", "S3"]
        );

        let level = Level::new(1).unwrap();
        assert!(canonical_generators(&level).unwrap().is_empty());
    }

    #[test]
    fn generators_pass_membership() {
        for n in [2u64, 4, 8, 9, 16, 27, 32, 45, 48, 63, 96, 144, 256, 1800] {
            let level = Level::new(n).unwrap();
            for (name, m) in canonical_generators(&level).unwrap().iter() {
                assert!(
                    membership_witness(&level, m).is_some(),
                    "{name} fails membership at N={n}"
                );
            }
        }
    }
}
