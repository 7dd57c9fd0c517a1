//! Exact 2×2 integer matrices and their canonical projective form.
//!
//! A [`ProjectiveMatrix`] is a primitive integer matrix with positive
//! determinant, sign-normalized so the first nonzero entry in the scan
//! order `(a, b, c, d)` is positive. It represents the real matrix
//! `(1/√det)·[[a, b], [c, d]]` up to sign, which is exactly one element
//! of `SL₂(ℝ)/{±1}`. All determinant bookkeeping is exact: the square
//! root is never materialized.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::{Error, Result};

/// Raw 2×2 integer matrix, no invariants. Scratch type for products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Mat2::from_i64(1, 0, 0, 1)
    }

    /// Standard matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }

    /// `[[d, -b], [-c, a]]`; satisfies `m · adjugate(m) = det(m) · I`.
    pub fn adjugate(&self) -> Mat2 {
        Mat2 {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    /// gcd of the entries (0 for the zero matrix).
    pub fn content(&self) -> BigInt {
        let g = self.a.gcd(&self.b);
        let g = g.gcd(&self.c);
        g.gcd(&self.d)
    }

    pub fn scale(&self, k: &BigInt) -> Mat2 {
        Mat2 {
            a: &self.a * k,
            b: &self.b * k,
            c: &self.c * k,
            d: &self.d * k,
        }
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Primitive, sign-canonical integer matrix with positive determinant.
///
/// Invariants, enforced by [`canonicalize`]:
/// - `gcd(a, b, c, d) = 1`
/// - `det = ad - bc > 0` (cached)
/// - the first nonzero entry in the order `(a, b, c, d)` is positive
///
/// Entrywise equality of two `ProjectiveMatrix` values means equality as
/// elements of `SL₂(ℝ)/{±1}`; it does *not* mean equality of cosets
/// modulo `Γ₀(N)` — use [`crate::gamma0::Level::coset_equal`] for that.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectiveMatrix {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
    det: BigInt,
}

impl ProjectiveMatrix {
    pub fn identity() -> Self {
        ProjectiveMatrix {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
            det: BigInt::one(),
        }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// Cached positive determinant; authoritative downstream.
    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn mat(&self) -> Mat2 {
        Mat2::new(self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone())
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    /// Canonical product of the underlying projective classes.
    pub fn compose(&self, rhs: &ProjectiveMatrix) -> ProjectiveMatrix {
        canonicalize(&self.mat().mul(&rhs.mat())).expect("product of positive determinants")
    }

    /// Projective inverse (the canonicalized adjugate).
    pub fn inverse(&self) -> ProjectiveMatrix {
        canonicalize(&self.mat().adjugate()).expect("adjugate keeps the determinant")
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

impl fmt::Display for ProjectiveMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Divide out the content and fix the global sign.
///
/// Fails with [`Error::SingularMatrix`] on determinant zero and
/// [`Error::OrientationReversing`] on negative determinant (a global sign
/// flip cannot fix the sign of a 2×2 determinant).
pub fn canonicalize(m: &Mat2) -> Result<ProjectiveMatrix> {
    let det = m.det();
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    if det.is_negative() {
        return Err(Error::OrientationReversing);
    }
    let content = m.content();
    debug_assert!(content.is_positive());
    let mut a = &m.a / &content;
    let mut b = &m.b / &content;
    let mut c = &m.c / &content;
    let mut d = &m.d / &content;
    let first_nonzero_negative = [&a, &b, &c, &d]
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| x.is_negative())
        .unwrap_or(false);
    if first_nonzero_negative {
        a = -a;
        b = -b;
        c = -c;
        d = -d;
    }
    let det = det / (&content * &content);
    debug_assert_eq!(det, &a * &d - &b * &c);
    Ok(ProjectiveMatrix { a, b, c, d, det })
}

// Serialize as a quadruple of decimal strings; entries routinely exceed
// the exact range of JSON numbers.
impl serde::Serialize for ProjectiveMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let quad = [
            self.a.to_string(),
            self.b.to_string(),
            self.c.to_string(),
            self.d.to_string(),
        ];
        quad.serialize(serializer)
    }
}

impl<'de> serde::Deserialize<'de> for ProjectiveMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let quad = <[String; 4]>::deserialize(deserializer)?;
        let parse = |s: &String| s.parse::<BigInt>().map_err(D::Error::custom);
        let m = Mat2::new(parse(&quad[0])?, parse(&quad[1])?, parse(&quad[2])?, parse(&quad[3])?);
        let p = canonicalize(&m).map_err(D::Error::custom)?;
        if p.mat() != m {
            return Err(D::Error::custom("matrix is not in canonical form"));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(a: i64, b: i64, c: i64, d: i64) -> ProjectiveMatrix {
        canonicalize(&Mat2::from_i64(a, b, c, d)).unwrap()
    }

    #[test]
    fn mul_matches_hand_products() {
        let t = Mat2::from_i64(1, 1, 0, 1);
        let l = Mat2::from_i64(1, 0, 1, 1);
        assert_eq!(t.mul(&l), Mat2::from_i64(2, 1, 1, 1));
        let x = Mat2::from_i64(3, 2, 48, 33);
        assert_eq!(x.mul(&Mat2::identity()), x);
        // [[3,2],[48,33]]^2, recomputed by hand:
        // a = 9 + 96 = 105, b = 6 + 66 = 72, c = 144 + 1584 = 1728, d = 96 + 1089 = 1185
        assert_eq!(x.mul(&x), Mat2::from_i64(105, 72, 1728, 1185));
    }

    #[test]
    fn adjugate_is_inverse_up_to_det() {
        for m in [
            Mat2::identity(),
            Mat2::from_i64(1, 1, 0, 1),
            Mat2::from_i64(4, 1, 0, 4),
            Mat2::from_i64(3, 2, 48, 33),
        ] {
            let prod = m.mul(&m.adjugate());
            assert_eq!(prod, Mat2::identity().scale(&m.det()));
        }
        assert_eq!(Mat2::from_i64(1, 1, 0, 1).adjugate(), Mat2::from_i64(1, -1, 0, 1));
        assert_eq!(Mat2::from_i64(4, 1, 0, 4).adjugate(), Mat2::from_i64(4, -1, 0, 4));
    }

    #[test]
    fn canonicalize_divides_content_and_fixes_sign() {
        assert_eq!(pm(2, 0, 0, 2), ProjectiveMatrix::identity());
        assert_eq!(pm(-4, -1, 0, -4), pm(4, 1, 0, 4));
        assert_eq!(pm(6, 4, 96, 66), pm(3, 2, 48, 33));
        // first nonzero entry may be b
        let p = pm(0, -1, 48, 0);
        assert_eq!(p.entries().map(|x| x.clone()), [
            BigInt::from(0),
            BigInt::from(1),
            BigInt::from(-48),
            BigInt::from(0)
        ]);
    }

    #[test]
    fn canonicalize_rejects_bad_determinants() {
        assert!(matches!(
            canonicalize(&Mat2::from_i64(1, 2, 2, 4)),
            Err(Error::SingularMatrix)
        ));
        assert!(matches!(
            canonicalize(&Mat2::from_i64(0, 1, 1, 0)),
            Err(Error::OrientationReversing)
        ));
    }

    #[test]
    fn canonicalize_is_idempotent_and_scale_invariant() {
        let cases = [
            Mat2::from_i64(6, 4, 96, 66),
            Mat2::from_i64(-4, -1, 0, -4),
            Mat2::from_i64(0, -3, 21, 0),
        ];
        for m in cases {
            let p = canonicalize(&m).unwrap();
            let again = canonicalize(&p.mat()).unwrap();
            assert_eq!(p, again);
            for k in [-3i64, -1, 2, 7] {
                let scaled = m.scale(&BigInt::from(k));
                assert_eq!(canonicalize(&scaled).unwrap(), p);
            }
        }
    }

    #[test]
    fn det_is_cached_correctly() {
        let p = pm(6, 4, 96, 66);
        assert_eq!(p.det(), &BigInt::from(3));
        let m = Mat2::from_i64(6, 4, 96, 66);
        // det(canonicalize(x)) = det(x) / content(x)^2
        assert_eq!(m.det(), BigInt::from(12));
        assert_eq!(m.content(), BigInt::from(2));
    }

    #[test]
    fn serde_round_trip_rejects_non_canonical() {
        let p = pm(3, 2, 48, 33);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"["3","2","48","33"]"#);
        let back: ProjectiveMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<ProjectiveMatrix>(r#"["6","4","96","66"]"#).is_err());
        assert!(serde_json::from_str::<ProjectiveMatrix>(r#"["1","2","2","4"]"#).is_err());
    }
}
