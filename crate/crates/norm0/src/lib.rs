//! Exact computation of the group structure of `Norm(Γ₀(N))/Γ₀(N)`.
//!
//! `Γ₀(N)` is the Hecke congruence subgroup of `SL₂(ℤ)` (lower-left entry
//! divisible by `N`); its normalizer in `SL₂(ℝ)` is generated modulo
//! `Γ₀(N)` by the Atkin-Lehner involutions `w_m` and the shift elements
//! `S_{v'} = [[1, 1/v'], [0, 1]]`. This crate enumerates the finite
//! quotient with exact integer arithmetic and answers structural
//! questions about it: element orders, commutation, direct-product
//! decompositions, and the validity of the classical Atkin-Lehner
//! direct-product description for a given level.
//!
//! Everything works projectively: `-I ∈ Γ₀(N)`, so a coset is represented
//! by a primitive integer matrix with positive determinant, canonical up
//! to the sign convention of [`mat2::ProjectiveMatrix`]. The matrix
//! `[[a, b], [c, d]]` stands for the real matrix `(1/√det)·[[a, b], [c, d]]`.
//!
//! Modules:
//!
//! - [`mat2`] / [`arith`] — exact 2×2 matrices and integer helpers
//! - [`gamma0`] — per-level context: coset equality, fingerprints, ε(N), v(N)
//! - [`schreier`] — coset graph of `Γ₀(N)\SL₂(ℤ)` and the conjugation oracle
//! - [`normalizer`] — `w_m`, `S_{v'}`, and the membership pattern test
//! - [`word`] / [`group`] — word grammar and finite quotient enumeration
//! - [`structure`] — predicted structures, claim checking, decompositions
//! - [`report`] / [`cache`] / [`export`] — serialization surfaces
//! - [`selftest`] — the regression suite driven by the CLI and tests

pub mod arith;
pub mod cache;
pub mod derived;
pub mod export;
pub mod gamma0;
pub mod group;
pub mod mat2;
pub mod normalizer;
pub mod report;
pub mod schreier;
pub mod selftest;
pub mod structure;
pub mod word;

pub use arith::{ext_gcd, factorize, is_perfect_square, squarefree_decompose, Factorization, SqfDecomp};
pub use gamma0::{epsilon, v_params, CosetElement, Fingerprint, Level, VParams};
pub use group::{close, close_canonical, DirectProductVerdict, ProductFailure, QuotientGroup};
pub use mat2::{canonicalize, Mat2, ProjectiveMatrix};
pub use normalizer::{atkin_lehner, canonical_generators, shift, membership_witness, GeneratorSet, MembershipWitness};
pub use word::Word;

/// Hard cap for trial-division factorization (override per call site).
pub const DEFAULT_FACTOR_CAP: u64 = 1_000_000_000;
/// Element budget for quotient closure; the quotient is finite, so hitting
/// this means a membership bug, not a big group.
pub const DEFAULT_CLOSURE_BUDGET: usize = 100_000;
/// Largest level for which the Schreier coset-graph oracle is built.
pub const DEFAULT_ORACLE_CAP: u64 = 10_000;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix is singular (determinant zero)")]
    SingularMatrix,
    #[error("matrix has negative determinant (orientation-reversing)")]
    OrientationReversing,
    #[error("value {value} exceeds cap {cap}")]
    CapExceeded { value: u64, cap: u64 },
    #[error("{m} is not an exact divisor of {n} (need m | n and gcd(m, n/m) = 1)")]
    NotExactDivisor { m: u64, n: u64 },
    #[error("S{vp} is not in the normalizer at this level: {vp} does not divide v = {v}")]
    ShiftNotInNormalizer { vp: u64, v: u64 },
    #[error("closure exceeded the element budget of {budget}")]
    BudgetExceeded { budget: usize },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("word parse error: {0}")]
    WordParse(String),
    #[error("factor {factor} is not a subgroup (not closed under the group operation)")]
    NotASubgroup { factor: usize },
    #[error("matrix is not in the normalizer of Gamma_0({n})")]
    NotNormalizerMember { n: u64 },
    #[error("decomposition failed: {0}")]
    DecompositionFailed(String),
    #[error("commutation rule not applicable: {0}")]
    RuleNotApplicable(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
