//! Predicted quotient structures as data, verified against enumerated
//! groups: the classical Atkin-Lehner direct-product description, the
//! corrected per-prime product description, the `w = w_m·Ω`
//! decomposition, and the shift commutation rules.
//!
//! The predictions are relation-word tables keyed on the 2- and 3-adic
//! valuations of `N`, so the verifier literally replays the case analysis.
//! Stated *non*-relations are first-class entries with `expected = false`;
//! a failing expected-false entry is as much a verdict as a holding
//! expected-true one.

use std::fmt;

use crate::gamma0::Level;
use crate::group::{close, ProductFailure, QuotientGroup};
use crate::mat2::{canonicalize, ProjectiveMatrix};
use crate::normalizer::{atkin_lehner, s_name, membership_witness, w_name, GeneratorSet};
use crate::word::Word;
use crate::{Error, Result};

/// Which structure prediction to transcribe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prediction {
    /// The classical claim: the quotient is the *direct* product of the
    /// per-prime factors below.
    AtkinLehner,
    /// The corrected description: same factors, product only, with the
    /// 2-part relations amended for `v₂(N) ≥ 5`.
    Corrected,
}

impl Prediction {
    pub fn as_str(self) -> &'static str {
        match self {
            Prediction::AtkinLehner => "atkin-lehner",
            Prediction::Corrected => "corrected",
        }
    }
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One relation to check, with the truth value the prediction assigns it.
#[derive(Clone, Debug)]
pub struct RelationSpec {
    pub label: String,
    pub word: Word,
    pub expected: bool,
}

/// Per-prime factor: generator names, relations, and the claimed order
/// where the prediction states one.
#[derive(Clone, Debug)]
pub struct FactorSpec {
    pub prime: u64,
    pub generators: Vec<String>,
    pub relations: Vec<RelationSpec>,
    pub claimed_order: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct StructureDescriptor {
    pub n: u64,
    pub prediction: Prediction,
    pub factors: Vec<FactorSpec>,
    /// Whether the prediction asserts a *direct* product between factors.
    pub direct_product: bool,
}

fn rel(label: impl Into<String>, word: Word, expected: bool) -> RelationSpec {
    RelationSpec { label: label.into(), word, expected }
}

/// `x y x⁻¹ y⁻¹`; the identity iff `x` and `y` commute.
fn commutator(x: &Word, y: &Word) -> Word {
    x.concat(y).concat(&x.inverse()).concat(&y.inverse())
}

/// Transcribes the predicted structure for `N` into relation words and
/// claimed orders.
pub fn predicted_structure(level: &Level, prediction: Prediction) -> StructureDescriptor {
    let mut factors = Vec::new();
    for &(p, e) in &level.factorization().factors {
        let factor = match p {
            2 => two_part(p, e, prediction),
            3 => three_part(p, e),
            _ => {
                let w = w_name(p.pow(e));
                FactorSpec {
                    prime: p,
                    generators: vec![w.clone()],
                    relations: vec![rel(format!("{w}^2"), Word::from_pairs(vec![(&w, 2)]), true)],
                    claimed_order: Some(2),
                }
            }
        };
        factors.push(factor);
    }
    StructureDescriptor {
        n: level.n(),
        prediction,
        factors,
        direct_product: prediction == Prediction::AtkinLehner,
    }
}

fn three_part(p: u64, e: u32) -> FactorSpec {
    let w = w_name(p.pow(e));
    let s3 = s_name(3);
    match e {
        1 => FactorSpec {
            prime: p,
            generators: vec![w.clone()],
            relations: vec![rel(format!("{w}^2"), Word::from_pairs(vec![(&w, 2)]), true)],
            claimed_order: Some(2),
        },
        2 => FactorSpec {
            prime: p,
            generators: vec![w.clone(), s3.clone()],
            relations: vec![
                rel(format!("{w}^2"), Word::from_pairs(vec![(&w, 2)]), true),
                rel(format!("{s3}^3"), Word::from_pairs(vec![(&s3, 3)]), true),
                rel(
                    format!("({w} {s3})^3"),
                    Word::from_pairs(vec![(&w, 1), (&s3, 1)]).pow(3),
                    true,
                ),
            ],
            claimed_order: Some(12),
        },
        _ => {
            let conj = Word::from_pairs(vec![(&w, 1), (&s3, 1), (&w, 1)]);
            FactorSpec {
                prime: p,
                generators: vec![w.clone(), s3.clone()],
                relations: vec![
                    rel(format!("{w}^2"), Word::from_pairs(vec![(&w, 2)]), true),
                    rel(format!("{s3}^3"), Word::from_pairs(vec![(&s3, 3)]), true),
                    rel(
                        format!("[{s3}, {w} {s3} {w}]"),
                        commutator(&Word::gen(&s3), &conj),
                        true,
                    ),
                ],
                claimed_order: Some(18),
            }
        }
    }
}

fn two_part(p: u64, lambda: u32, prediction: Prediction) -> FactorSpec {
    let w = w_name(p.pow(lambda));
    let mu = (lambda / 2).min(3);
    let shift_ord = 1u64 << mu;
    let s = s_name(shift_ord);
    if lambda == 1 {
        return FactorSpec {
            prime: p,
            generators: vec![w.clone()],
            relations: vec![rel(format!("{w}^2"), Word::from_pairs(vec![(&w, 2)]), true)],
            claimed_order: Some(2),
        };
    }

    let mut relations = vec![
        rel(format!("{w}^2"), Word::from_pairs(vec![(&w, 2)]), true),
        rel(
            format!("{s}^{shift_ord}"),
            Word::from_pairs(vec![(&s, shift_ord as i64)]),
            true,
        ),
    ];
    let ws = Word::from_pairs(vec![(&w, 1), (&s, 1)]);
    let conj = Word::from_pairs(vec![(&w, 1), (&s, 1), (&w, 1)]);
    let commute_label = format!("[{s}, {w} {s} {w}]");

    let claimed_order;
    if lambda == 2 * mu {
        // v2(N) in {2, 4, 6}
        relations.push(rel(format!("({w} {s})^3"), ws.pow(3), true));
        claimed_order = Some(match lambda {
            2 => 6,
            4 => 24,
            _ => 96,
        });
        if prediction == Prediction::Corrected && lambda == 6 {
            // the braid with the conjugated shift fails at this valuation
            relations.push(rel(commute_label, commutator(&Word::gen(&s), &conj), false));
        }
    } else {
        match prediction {
            Prediction::AtkinLehner => {
                relations.push(rel(commute_label, commutator(&Word::gen(&s), &conj), true));
                claimed_order = Some(2 * (shift_ord * shift_ord) as usize);
            }
            Prediction::Corrected => match lambda {
                3 | 5 | 7 => {
                    relations.push(rel(format!("({w} {s})^4"), ws.pow(4), true));
                    match lambda {
                        3 => {
                            relations.push(rel(
                                commute_label,
                                commutator(&Word::gen(&s), &conj),
                                true,
                            ));
                            claimed_order = Some(8);
                        }
                        5 => {
                            relations.push(rel(
                                commute_label,
                                commutator(&Word::gen(&s), &conj),
                                false,
                            ));
                            claimed_order = Some(32);
                        }
                        _ => {
                            relations.push(rel(
                                commute_label,
                                commutator(&Word::gen(&s), &conj),
                                false,
                            ));
                            claimed_order = None;
                        }
                    }
                }
                8 => {
                    relations.push(rel(
                        format!("{w} {s} {w} {s} {w} {s}^3 {w} {s}^3"),
                        Word::from_pairs(vec![
                            (&w, 1),
                            (&s, 1),
                            (&w, 1),
                            (&s, 1),
                            (&w, 1),
                            (&s, 3),
                            (&w, 1),
                            (&s, 3),
                        ]),
                        true,
                    ));
                    relations.push(rel(format!("({w} {s})^3"), ws.pow(3), false));
                    relations.push(rel(commute_label, commutator(&Word::gen(&s), &conj), false));
                    claimed_order = None;
                }
                _ => {
                    // v2(N) >= 9: the conjugated shift commutes again,
                    // while the short braid relations fail
                    relations.push(rel(commute_label, commutator(&Word::gen(&s), &conj), true));
                    if lambda % 2 == 1 {
                        relations.push(rel(format!("({w} {s})^4"), ws.pow(4), false));
                    } else {
                        relations.push(rel(format!("({w} {s})^3"), ws.pow(3), false));
                    }
                    claimed_order = None;
                }
            },
        }
    }

    FactorSpec {
        prime: p,
        generators: vec![w, s],
        relations,
        claimed_order,
    }
}

/// Outcome of checking one relation in an enumerated group.
#[derive(Clone, Debug)]
pub struct RelationOutcome {
    pub label: String,
    pub word: Word,
    pub expected: bool,
    pub holds: bool,
}

impl RelationOutcome {
    pub fn ok(&self) -> bool {
        self.expected == self.holds
    }
}

#[derive(Clone, Debug)]
pub struct FactorOutcome {
    pub prime: u64,
    pub generators: Vec<String>,
    pub relations: Vec<RelationOutcome>,
    pub claimed_order: Option<usize>,
    pub subgroup_order: usize,
}

impl FactorOutcome {
    pub fn passed(&self) -> bool {
        self.relations.iter().all(|r| r.ok())
            && self.claimed_order.is_none_or(|c| c == self.subgroup_order)
    }
}

#[derive(Clone, Debug)]
pub struct StructureOutcome {
    pub n: u64,
    pub prediction: Prediction,
    pub factors: Vec<FactorOutcome>,
}

impl StructureOutcome {
    pub fn passed(&self) -> bool {
        self.factors.iter().all(|f| f.passed())
    }
}

/// Checks every relation word and claimed order of the prediction against
/// the enumerated quotient.
pub fn verify_structure(group: &QuotientGroup, prediction: Prediction) -> Result<StructureOutcome> {
    let desc = predicted_structure(group.level(), prediction);
    let mut factors = Vec::new();
    for factor in &desc.factors {
        let mut relations = Vec::new();
        for r in &factor.relations {
            let holds = group.is_relation(&r.word)?;
            relations.push(RelationOutcome {
                label: r.label.clone(),
                word: r.word.clone(),
                expected: r.expected,
                holds,
            });
        }
        let seeds = factor
            .generators
            .iter()
            .map(|name| group.resolve_name(name))
            .collect::<Result<Vec<_>>>()?;
        let subgroup_order = group.subgroup(&seeds).len();
        factors.push(FactorOutcome {
            prime: factor.prime,
            generators: factor.generators.clone(),
            relations,
            claimed_order: factor.claimed_order,
            subgroup_order,
        });
    }
    Ok(StructureOutcome {
        n: desc.n,
        prediction,
        factors,
    })
}

/// Witness for a failed direct-product claim: the earliest failing check
/// in the fixed order relations, orders, commuting, product, intersection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClaimWitness {
    RelationFailed { prime: u64, label: String, expected: bool },
    FactorOrderMismatch { prime: u64, claimed: usize, actual: usize },
    NonCommuting { x: Word, y: Word },
    ProductOrderMismatch { product: u128, group_order: usize },
    NontrivialIntersection { prime: u64, element: Word },
}

impl fmt::Display for ClaimWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClaimWitness::RelationFailed { prime, label, expected } => write!(
                f,
                "relation {label} in the {prime}-factor: expected {}, found {}",
                if *expected { "to hold" } else { "to fail" },
                if *expected { "it fails" } else { "it holds" }
            ),
            ClaimWitness::FactorOrderMismatch { prime, claimed, actual } => write!(
                f,
                "the {prime}-factor has order {actual}, claimed {claimed}"
            ),
            ClaimWitness::NonCommuting { x, y } => {
                write!(f, "elements {x} and {y} do not commute")
            }
            ClaimWitness::ProductOrderMismatch { product, group_order } => write!(
                f,
                "factor orders multiply to {product}, but the quotient has order {group_order}"
            ),
            ClaimWitness::NontrivialIntersection { prime, element } => write!(
                f,
                "the {prime}-factor meets the other factors in the nontrivial element {element}"
            ),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClaimOutcome {
    pub holds: bool,
    pub witness: Option<ClaimWitness>,
}

/// Decides the direct-product claim for the full quotient, with a concrete
/// witness on failure.
pub fn check_claim_al(group: &QuotientGroup) -> Result<ClaimOutcome> {
    let desc = predicted_structure(group.level(), Prediction::AtkinLehner);

    for factor in &desc.factors {
        for r in &factor.relations {
            let holds = group.is_relation(&r.word)?;
            if holds != r.expected {
                return Ok(ClaimOutcome {
                    holds: false,
                    witness: Some(ClaimWitness::RelationFailed {
                        prime: factor.prime,
                        label: r.label.clone(),
                        expected: r.expected,
                    }),
                });
            }
        }
    }

    let mut factor_sets = Vec::new();
    for factor in &desc.factors {
        let seeds = factor
            .generators
            .iter()
            .map(|name| group.resolve_name(name))
            .collect::<Result<Vec<_>>>()?;
        let sub = group.subgroup(&seeds);
        if let Some(claimed) = factor.claimed_order {
            if claimed != sub.len() {
                return Ok(ClaimOutcome {
                    holds: false,
                    witness: Some(ClaimWitness::FactorOrderMismatch {
                        prime: factor.prime,
                        claimed,
                        actual: sub.len(),
                    }),
                });
            }
        }
        factor_sets.push(sub);
    }

    let verdict = group.internal_direct_product(&factor_sets)?;
    let witness = verdict.failure.map(|failure| match failure {
        ProductFailure::NonCommuting { x, y, .. } => ClaimWitness::NonCommuting {
            x: group.word(x).clone(),
            y: group.word(y).clone(),
        },
        ProductFailure::OrderMismatch { product, group_order } => {
            ClaimWitness::ProductOrderMismatch { product, group_order }
        }
        ProductFailure::NontrivialIntersection { factor, element } => {
            ClaimWitness::NontrivialIntersection {
                prime: desc.factors[factor].prime,
                element: group.word(element).clone(),
            }
        }
    });
    Ok(ClaimOutcome {
        holds: verdict.holds,
        witness,
    })
}

/// Constructive `w = w_m·Ω` decomposition: `m ‖ N` with `gcd(m, 6) = 1`
/// and `Ω` in the subgroup generated by `S_{v(N)}` and the involutions at
/// 2 and 3.
pub struct OmegaDecomposer {
    omega: QuotientGroup,
    candidates: Vec<u64>,
}

impl OmegaDecomposer {
    pub fn new(level: &Level, budget: usize) -> Result<OmegaDecomposer> {
        let mut gens = Vec::new();
        for &(p, e) in &level.factorization().factors {
            if p == 2 || p == 3 {
                let m = p.pow(e);
                gens.push((w_name(m), atkin_lehner(level, m)?));
            }
        }
        let v = level.v();
        if v > 1 {
            gens.push((s_name(v), crate::normalizer::shift(level, v)?));
        }
        let omega = close(level, GeneratorSet::new(level.n(), gens)?, budget)?;

        let mut candidates = vec![1u64];
        for &(p, e) in &level.factorization().factors {
            if p >= 5 {
                let pe = p.pow(e);
                let mut next = Vec::with_capacity(candidates.len() * 2);
                for &c in &candidates {
                    next.push(c);
                    next.push(c * pe);
                }
                candidates = next;
            }
        }
        candidates.sort_unstable();
        Ok(OmegaDecomposer { omega, candidates })
    }

    /// The enumerated `Ω`-part.
    pub fn omega_group(&self) -> &QuotientGroup {
        &self.omega
    }

    /// Decomposes a normalizer element, searching candidate `m` ascending.
    /// Failure would contradict the decomposition theorem and is treated
    /// as a bug signal.
    pub fn decompose(&self, p: &ProjectiveMatrix) -> Result<(u64, Word)> {
        let level = self.omega.level();
        if membership_witness(level, p).is_none() {
            return Err(Error::NotNormalizerMember { n: level.n() });
        }
        for &m in &self.candidates {
            let w = atkin_lehner(level, m)?;
            let omega_rep = canonicalize(&w.mat().adjugate().mul(&p.mat()))?;
            if let Some(idx) = self.omega.find(&omega_rep) {
                return Ok((m, self.omega.word(idx).clone()));
            }
        }
        Err(Error::DecompositionFailed(format!(
            "{p} admits no w_m * Omega expression at level {}",
            level.n()
        )))
    }
}

/// Predicted and verified shift commutation rule: `w_{pⁿ}·S_s = S_s^k·w_{pⁿ}`
/// with `k = pⁿ mod s`, for `s ∈ {3, 4, 8}` dividing `v(N)` and `pⁿ` an
/// exact prime-power divisor coprime to the shift's prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CommutationRule {
    pub pn: u64,
    pub shift_order: u64,
    pub exponent: u64,
    pub verified: bool,
}

pub fn commutation_rule(group: &QuotientGroup, pn: u64, shift_order: u64) -> Result<CommutationRule> {
    let level = group.level();
    if !matches!(shift_order, 3 | 4 | 8) {
        return Err(Error::RuleNotApplicable(format!(
            "shift order {shift_order} is not one of 3, 4, 8"
        )));
    }
    if !level.v().is_multiple_of(shift_order) {
        return Err(Error::ShiftNotInNormalizer {
            vp: shift_order,
            v: level.v(),
        });
    }
    let shift_prime = if shift_order == 3 { 3 } else { 2 };
    if pn.is_multiple_of(shift_prime) {
        return Err(Error::RuleNotApplicable(format!(
            "{pn} shares the prime {shift_prime} with S{shift_order}"
        )));
    }
    // pn must name an Atkin-Lehner involution at this level
    atkin_lehner(level, pn)?;
    let w_idx = group.resolve_name(&w_name(pn))?;
    let s_idx = group.resolve_name(&s_name(shift_order))?;

    let exponent = pn % shift_order;
    let lhs = group.op(w_idx, s_idx);
    let mut rhs = group.identity();
    for _ in 0..exponent {
        rhs = group.op(rhs, s_idx);
    }
    rhs = group.op(rhs, w_idx);
    Ok(CommutationRule {
        pn,
        shift_order,
        exponent,
        verified: lhs == rhs,
    })
}
