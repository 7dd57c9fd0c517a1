//! Integer helpers: trial-division factorization, squarefree decomposition,
//! extended gcd, perfect-square testing, divisor enumeration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::{Error, Result, DEFAULT_FACTOR_CAP};

/// Prime factorization with strictly increasing primes and exponents >= 1.
///
/// `cofactor` records an unfactored remainder should trial division ever be
/// stopped early; with the level cap enforced up front it stays `None`, and
/// `value()` folds it in regardless.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(u64, u32)>,
    pub cofactor: Option<u64>,
}

impl Factorization {
    /// Reconstructs the factored integer.
    pub fn value(&self) -> u64 {
        let mut n = self.cofactor.unwrap_or(1);
        for &(p, e) in &self.factors {
            n *= p.pow(e);
        }
        n
    }

    pub fn valuation(&self, prime: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(p, _)| p == prime)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    /// All divisors, sorted ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
            for &d in &divs {
                let mut pk = 1u64;
                for _ in 0..=e {
                    next.push(d * pk);
                    pk = pk.saturating_mul(p);
                }
            }
            divs = next;
        }
        divs.sort_unstable();
        divs
    }

    /// Exact divisors m (m | n, gcd(m, n/m) = 1), sorted ascending.
    pub fn exact_divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let pe = p.pow(e);
            let mut next = Vec::with_capacity(divs.len() * 2);
            for &d in &divs {
                next.push(d);
                next.push(d * pe);
            }
            divs = next;
        }
        divs.sort_unstable();
        divs
    }

    /// Number of distinct prime divisors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }
}

/// Complete trial-division factorization of `n`, `1 <= n <= cap`.
pub fn factorize(n: u64, cap: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    if n > cap {
        return Err(Error::CapExceeded { value: n, cap });
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut d = 2u64;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            let mut e = 0u32;
            while rest.is_multiple_of(d) {
                rest /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    let f = Factorization { factors, cofactor: None };
    debug_assert_eq!(f.value(), n);
    Ok(f)
}

/// Maximal decomposition `n = sigma^2 * q` with `q` squarefree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SqfDecomp {
    pub sigma: u64,
    pub q: u64,
}

pub fn squarefree_decompose(n: u64, cap: u64) -> Result<SqfDecomp> {
    let f = factorize(n, cap)?;
    let mut sigma = 1u64;
    let mut q = 1u64;
    for &(p, e) in &f.factors {
        sigma *= p.pow(e / 2);
        if e % 2 == 1 {
            q *= p;
        }
    }
    debug_assert_eq!(sigma * sigma * q, n);
    Ok(SqfDecomp { sigma, q })
}

/// Extended gcd: returns `(g, x, y)` with `g = gcd(a, b) > 0` and
/// `a*x + b*y = g`. Undefined for `(0, 0)`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt, BigInt)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::InvalidInput("ext_gcd(0, 0) is undefined".into()));
    }
    let e = a.extended_gcd(b);
    debug_assert!(e.gcd.is_positive());
    debug_assert_eq!(a * &e.x + b * &e.y, e.gcd);
    Ok((e.gcd, e.x, e.y))
}

/// Integer square root test: `Some(r)` with `r*r = n`, or `None`.
pub fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Inverse of `a` modulo `m` (`m >= 1`), if `gcd(a, m) = 1`.
/// By convention everything is invertible mod 1 (inverse 0).
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Convenience wrapper using the default cap.
pub fn factorize_default(n: u64) -> Result<Factorization> {
    factorize(n, DEFAULT_FACTOR_CAP)
}
