//! Per-level context for `Γ₀(N)`: membership, coset equality in the
//! quotient, coset fingerprints, and the invariants `ε(N)` and `v(N)`.
//!
//! All of this is projective: `-I ∈ Γ₀(N)` for every `N`, so the quotient
//! `Norm(Γ₀(N))/Γ₀(N)` is insensitive to global sign and we may work with
//! sign-canonical primitive matrices throughout, even though the ambient
//! group is `SL₂(ℝ)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::sync::OnceLock;

use crate::arith::{factorize, gcd_u64, squarefree_decompose, Factorization, SqfDecomp};
use crate::mat2::ProjectiveMatrix;
use crate::{Result, DEFAULT_FACTOR_CAP};

/// The shift invariant `v(N) = 2^mu * 3^w` with `mu = min(3, ⌊v₂(N)/2⌋)`
/// and `w = min(1, ⌊v₃(N)/2⌋)`; `S_{v'}` normalizes `Γ₀(N)` exactly when
/// `v'` divides `v(N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VParams {
    pub n: u64,
    pub mu: u32,
    pub w: u32,
    pub v: u64,
}

/// Closed form of `v(N)`; equals `gcd(sigma(N), epsilon(N))`.
pub fn v_params(n: u64) -> VParams {
    let v2 = valuation_u64(n, 2);
    let v3 = valuation_u64(n, 3);
    let mu = (v2 / 2).min(3);
    let w = (v3 / 2).min(1);
    VParams {
        n,
        mu,
        w,
        v: (1u64 << mu) * 3u64.pow(w),
    }
}

fn valuation_u64(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

/// `ε(N)`: the gcd of all `a - d` over matrices `[[a, b], [Nc, d]] ∈ Γ₀(N)`.
///
/// A diagonal pair `(a, d)` is realizable iff `ad ≡ 1 (mod N)`, so the
/// realizable differences are exactly `a - a⁻¹ - tN` for units `a` and
/// `t ∈ ℤ`, and since multiplying by the unit `a` preserves gcds with `N`,
/// `gcd(a - a⁻¹, N) = gcd(a² - 1, N)`. Hence
/// `ε(N) = gcd over units a of gcd(a² - 1, N)`, with `ε(1) = 1`.
pub fn epsilon(n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    let mut g = n; // the unit a = 1 contributes gcd(0, n) = n
    for a in 2..n {
        if gcd_u64(a, n) != 1 {
            continue;
        }
        let sq = (a as u128 * a as u128 - 1) % n as u128;
        g = gcd_u64(g, gcd_u64(sq as u64, n));
        if g == 1 {
            break;
        }
    }
    g
}

/// One element of `Norm(Γ₀(N))/Γ₀(N)`: a canonical representative plus its
/// coset fingerprint for hashing.
#[derive(Clone, Debug)]
pub struct CosetElement {
    pub rep: ProjectiveMatrix,
    pub fp: Fingerprint,
}

/// Coset-invariant hash key: the determinant of the primitive
/// representative and the lexicographic minimum of `(u·a mod N, u·c mod N)`
/// over units `u` of `ℤ/N`.
///
/// Sound but not necessarily injective: equal cosets always collide,
/// distinct cosets may.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    pub det: BigInt,
    pub col: (u64, u64),
}

/// Cached context for one level `N`.
///
/// Immutable after construction; the lazily-computed unit list and `ε` are
/// guarded by `OnceLock`, so sharing across threads is safe.
#[derive(Debug)]
pub struct Level {
    n: u64,
    factorization: Factorization,
    sqf: SqfDecomp,
    vp: VParams,
    units: OnceLock<Vec<u64>>,
    eps: OnceLock<u64>,
}

impl Clone for Level {
    fn clone(&self) -> Self {
        Level {
            n: self.n,
            factorization: self.factorization.clone(),
            sqf: self.sqf,
            vp: self.vp,
            units: self.units.clone(),
            eps: self.eps.clone(),
        }
    }
}

impl Level {
    pub fn new(n: u64) -> Result<Level> {
        Level::with_factor_cap(n, DEFAULT_FACTOR_CAP)
    }

    pub fn with_factor_cap(n: u64, cap: u64) -> Result<Level> {
        let factorization = factorize(n, cap)?;
        let sqf = squarefree_decompose(n, cap)?;
        Ok(Level {
            n,
            factorization,
            sqf,
            vp: v_params(n),
            units: OnceLock::new(),
            eps: OnceLock::new(),
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }
    pub fn sigma(&self) -> u64 {
        self.sqf.sigma
    }
    pub fn q(&self) -> u64 {
        self.sqf.q
    }
    pub fn v_params(&self) -> VParams {
        self.vp
    }
    pub fn v(&self) -> u64 {
        self.vp.v
    }

    pub fn epsilon(&self) -> u64 {
        *self.eps.get_or_init(|| epsilon(self.n))
    }

    /// Units of `ℤ/N`, sorted; `[0]` for `N = 1` (the zero ring).
    pub fn units(&self) -> &[u64] {
        self.units.get_or_init(|| {
            if self.n == 1 {
                return vec![0];
            }
            (1..self.n).filter(|&u| gcd_u64(u, self.n) == 1).collect()
        })
    }

    /// Does `p` represent `±γ` with `γ ∈ Γ₀(N)`? True iff `det = 1` and the
    /// lower-left entry is divisible by `N`.
    pub fn is_gamma0(&self, p: &ProjectiveMatrix) -> bool {
        p.det().is_one() && p.c().mod_floor(&BigInt::from(self.n)).is_zero()
    }

    /// Equality in `Norm(Γ₀(N))/Γ₀(N)`: `p1 · p2⁻¹ ∈ ±Γ₀(N)`, decided
    /// exactly. With `Q = p1 · adjugate(p2)` and `g = content(Q)`, the
    /// quotient `p1 p2⁻¹` is `Q/√(det p1 · det p2)`; it is an integer
    /// matrix of determinant 1 iff `g² = det p1 · det p2`, and then only
    /// the lower-left congruence remains to check.
    pub fn coset_equal(&self, p1: &ProjectiveMatrix, p2: &ProjectiveMatrix) -> bool {
        let q = p1.mat().mul(&p2.mat().adjugate());
        let g = q.content();
        if &g * &g != p1.det() * p2.det() {
            return false;
        }
        debug_assert!((q.det() / (&g * &g)).is_one());
        (q.c / g).mod_floor(&BigInt::from(self.n)).is_zero()
    }

    /// Coset fingerprint of `p`. Right multiplication by `γ ∈ Γ₀(N)`
    /// preserves the content (γ is unimodular) and hence the determinant,
    /// and sends the first column to a unit multiple mod `N`, so equal
    /// cosets get equal fingerprints.
    pub fn fingerprint(&self, p: &ProjectiveMatrix) -> Fingerprint {
        let col = self.unit_orbit_min(to_residue(p.a(), self.n), to_residue(p.c(), self.n));
        Fingerprint {
            det: p.det().clone(),
            col,
        }
    }

    /// Lexicographic minimum of `(u*a mod N, u*c mod N)` over units `u`.
    pub(crate) fn unit_orbit_min(&self, a: u64, c: u64) -> (u64, u64) {
        let n = self.n as u128;
        let mut best = (u64::MAX, u64::MAX);
        for &u in self.units() {
            let cand = (
                ((u as u128 * a as u128) % n) as u64,
                ((u as u128 * c as u128) % n) as u64,
            );
            if cand < best {
                best = cand;
            }
        }
        best
    }

    pub fn coset_element(&self, rep: ProjectiveMatrix) -> CosetElement {
        let fp = self.fingerprint(&rep);
        CosetElement { rep, fp }
    }
}

pub(crate) fn to_residue(x: &BigInt, n: u64) -> u64 {
    x.mod_floor(&BigInt::from(n)).to_u64().expect("residue fits in u64")
}

/// Brute-force ε oracle: gcd of `a - d` over matrices in `Γ₀(N)` with all
/// entries bounded by `B`. Test-only cross-check for the unit formula; the
/// caller watches for stabilization as `B` grows.
pub fn epsilon_sampling_oracle(n: u64, bound: i64) -> u64 {
    let mut g: u64 = 0;
    let ni = n as i64;
    for a in -bound..=bound {
        let am = a.rem_euclid(ni) as u64;
        let Some(inv) = crate::arith::inv_mod(am, n) else {
            continue;
        };
        // d ranges over the progression d ≡ a⁻¹ (mod N) within the bound
        let mut d = inv as i64 - ((inv as i64 + bound).div_euclid(ni)) * ni;
        while d <= bound {
            let prod = a as i128 * d as i128 - 1;
            debug_assert_eq!(prod.rem_euclid(ni as i128), 0);
            let k = prod / ni as i128;
            // need b*c = k with |b|, |c| <= bound
            let representable = if k == 0 {
                true
            } else {
                let ka = k.unsigned_abs();
                let mut found = false;
                let mut b = 1u128;
                while b * b <= ka && b as i128 <= bound as i128 {
                    if ka.is_multiple_of(b) && (ka / b) as i128 <= bound as i128 {
                        found = true;
                        break;
                    }
                    b += 1;
                }
                found
            };
            if representable {
                g = gcd_u64(g, (a - d).unsigned_abs());
            }
            d += ni;
        }
    }
    if g == 0 {
        // only a = d realized within the bound; gcd over {0} degenerates
        n
    } else {
        g
    }
}
