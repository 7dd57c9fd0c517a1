//! Serializable per-level report: invariants, factor relation verdicts,
//! the direct-product claim verdict with witness, and sample
//! `w_m·Ω` decompositions.
//!
//! Schema `norm0-report/1`; field order is fixed by struct order and the
//! JSON output is deterministic, so equal inputs give byte-identical
//! reports.

use serde::{Deserialize, Serialize};

use crate::group::QuotientGroup;
use crate::structure::{
    check_claim_al, verify_structure, OmegaDecomposer, ClaimWitness, Prediction,
};
use crate::Result;

pub const REPORT_SCHEMA: &str = "norm0-report/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub n: u64,
    pub sigma: u64,
    pub q: u64,
    pub v: u64,
    pub epsilon: u64,
    pub order: usize,
    pub factors: Vec<FactorVerdict>,
    pub claim_al: ClaimVerdict,
    pub decompositions: Vec<DecompositionSample>,
    /// Milliseconds spent enumerating the group when it was first built;
    /// cached groups report their original build time so cache hits and
    /// misses serialize identically.
    pub timing_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorVerdict {
    pub prime: u64,
    pub prediction: String,
    pub generators: Vec<String>,
    pub relations: Vec<RelationVerdict>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub claimed_order: Option<usize>,
    pub subgroup_order: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationVerdict {
    pub label: String,
    pub expected: bool,
    pub holds: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimVerdict {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<WitnessVerdict>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessVerdict {
    pub kind: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub y: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionSample {
    pub element: String,
    pub m: u64,
    pub omega: String,
}

pub fn witness_verdict(w: &ClaimWitness) -> WitnessVerdict {
    let (kind, x, y) = match w {
        ClaimWitness::RelationFailed { .. } => ("relation_failed", None, None),
        ClaimWitness::FactorOrderMismatch { .. } => ("factor_order_mismatch", None, None),
        ClaimWitness::NonCommuting { x, y } => {
            ("non_commuting", Some(x.to_string()), Some(y.to_string()))
        }
        ClaimWitness::ProductOrderMismatch { .. } => ("product_order_mismatch", None, None),
        ClaimWitness::NontrivialIntersection { .. } => ("nontrivial_intersection", None, None),
    };
    WitnessVerdict {
        kind: kind.to_string(),
        detail: w.to_string(),
        x,
        y,
    }
}

/// Builds the full report for an enumerated quotient. `timing_ms` is the
/// group's build time (stored alongside cached groups).
pub fn build_report(group: &QuotientGroup, decomposer_budget: usize, timing_ms: u64) -> Result<Report> {
    let level = group.level();
    let outcome = verify_structure(group, Prediction::Corrected)?;
    let claim = check_claim_al(group)?;

    let factors = outcome
        .factors
        .iter()
        .map(|f| FactorVerdict {
            prime: f.prime,
            prediction: Prediction::Corrected.as_str().to_string(),
            generators: f.generators.clone(),
            relations: f
                .relations
                .iter()
                .map(|r| RelationVerdict {
                    label: r.label.clone(),
                    expected: r.expected,
                    holds: r.holds,
                    ok: r.ok(),
                })
                .collect(),
            claimed_order: f.claimed_order,
            subgroup_order: f.subgroup_order,
            passed: f.passed(),
        })
        .collect();

    let decomposer = OmegaDecomposer::new(level, decomposer_budget)?;
    let mut sample_indices: Vec<usize> = group.gen_indices().to_vec();
    let deepest = group.order() - 1;
    if !sample_indices.contains(&deepest) {
        sample_indices.push(deepest);
    }
    let mut decompositions = Vec::new();
    for idx in sample_indices {
        let (m, omega) = decomposer.decompose(&group.element(idx).rep)?;
        decompositions.push(DecompositionSample {
            element: group.word(idx).to_string(),
            m,
            omega: omega.to_string(),
        });
    }

    Ok(Report {
        schema: REPORT_SCHEMA.to_string(),
        n: level.n(),
        sigma: level.sigma(),
        q: level.q(),
        v: level.v(),
        epsilon: level.epsilon(),
        order: group.order(),
        factors,
        claim_al: ClaimVerdict {
            holds: claim.holds,
            witness: claim.witness.as_ref().map(witness_verdict),
        },
        decompositions,
        timing_ms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::close_canonical;
    use crate::{Level, DEFAULT_CLOSURE_BUDGET};

    #[test]
    fn report_round_trips_through_json() {
        for n in [1u64, 9, 45, 48, 63] {
            let g = close_canonical(&Level::new(n).unwrap()).unwrap();
            let report = build_report(&g, DEFAULT_CLOSURE_BUDGET, 7).unwrap();
            let json = serde_json::to_string_pretty(&report).unwrap();
            let back: Report = serde_json::from_str(&json).unwrap();
            assert_eq!(back, report, "round trip at N={n}");
        }
    }

    #[test]
    fn report_contents_match_verdicts() {
        let g = close_canonical(&Level::new(48).unwrap()).unwrap();
        let report = build_report(&g, DEFAULT_CLOSURE_BUDGET, 0).unwrap();
        assert_eq!(report.schema, REPORT_SCHEMA);
        assert_eq!((report.n, report.sigma, report.q, report.v), (48, 4, 3, 4));
        assert_eq!(report.epsilon, 24);
        assert_eq!(report.order, crate::derived::G48_ORDER);
        assert!(!report.claim_al.holds);
        let witness = report.claim_al.witness.as_ref().unwrap();
        assert_eq!(witness.kind, "non_commuting");
        assert_eq!(witness.x.as_deref(), Some("S4"));
        assert_eq!(witness.y.as_deref(), Some("w3"));
        assert!(report.factors.iter().all(|f| f.passed));
        // every sample decomposes with m = 1 at this level (no primes >= 5)
        assert!(report.decompositions.iter().all(|s| s.m == 1));

        let g63 = close_canonical(&Level::new(63).unwrap()).unwrap();
        let report63 = build_report(&g63, DEFAULT_CLOSURE_BUDGET, 0).unwrap();
        assert!(report63.claim_al.holds);
        assert!(report63.claim_al.witness.is_none());
        assert!(report63.decompositions.iter().any(|s| s.m == 7));
    }
}
