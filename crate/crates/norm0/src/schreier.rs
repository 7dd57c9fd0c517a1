//! Independent normalizer-membership oracle built from the coset action of
//! `SL₂(ℤ)` on `ℙ¹(ℤ/N)`.
//!
//! Cosets `Γ₀(N)·g` correspond to bottom rows `(c : d)` in `ℙ¹(ℤ/N)`. A
//! breadth-first walk under the standard generators `T = [[1,1],[0,1]]` and
//! `S = [[0,-1],[1,0]]` yields a transversal; the non-tree edges give
//! Schreier generators of `Γ₀(N)`. A candidate normalizes `Γ₀(N)` iff
//! conjugation in both directions maps every Schreier generator back into
//! `±Γ₀(N)` — checked with exact adjugate-and-content arithmetic, never
//! via the membership pattern this oracle is meant to cross-check.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;

use crate::gamma0::Level;
use crate::mat2::{canonicalize, Mat2, ProjectiveMatrix};
use crate::{Error, Result};

/// Coset graph of `Γ₀(N)\SL₂(ℤ)` on `ℙ¹(ℤ/N)` plus the Schreier
/// generators collected from its non-tree edges.
#[derive(Debug)]
pub struct CosetGraph {
    n: u64,
    points: Vec<(u64, u64)>,
    schreier: Vec<ProjectiveMatrix>,
}

impl CosetGraph {
    /// Builds the graph for `level`; `Err(CapExceeded)` above `cap`.
    pub fn build(level: &Level, cap: u64) -> Result<CosetGraph> {
        let n = level.n();
        if n > cap {
            return Err(Error::CapExceeded { value: n, cap });
        }
        let gens = [Mat2::from_i64(1, 1, 0, 1), Mat2::from_i64(0, -1, 1, 0)];

        let mut points: Vec<(u64, u64)> = Vec::new();
        let mut index: BTreeMap<(u64, u64), usize> = BTreeMap::new();
        let mut transversal: Vec<Mat2> = Vec::new();
        let mut schreier: Vec<ProjectiveMatrix> = Vec::new();
        let mut seen_gens: BTreeSet<(BigInt, BigInt, BigInt, BigInt)> = BTreeSet::new();

        let base = canonical_point(level, 0, 1);
        index.insert(base, 0);
        points.push(base);
        transversal.push(Mat2::identity());

        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            let (c, d) = points[x];
            for h in &gens {
                let moved = act_bottom_row(level, c, d, h);
                let y_pt = canonical_point(level, moved.0, moved.1);
                match index.get(&y_pt) {
                    None => {
                        let y = points.len();
                        index.insert(y_pt, y);
                        points.push(y_pt);
                        transversal.push(transversal[x].mul(h));
                        queue.push_back(y);
                    }
                    Some(&y) => {
                        // non-tree edge: g_x · h · g_y⁻¹ ∈ Γ₀(N)
                        let raw = transversal[x].mul(h).mul(&transversal[y].adjugate());
                        let p = canonicalize(&raw)?;
                        debug_assert!(level.is_gamma0(&p), "Schreier generator outside Gamma_0");
                        if !p.is_identity() {
                            let key = (p.a().clone(), p.b().clone(), p.c().clone(), p.d().clone());
                            if seen_gens.insert(key) {
                                schreier.push(p);
                            }
                        }
                    }
                }
            }
        }

        Ok(CosetGraph { n, points, schreier })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of cosets; equals `N · ∏_{p|N} (1 + 1/p)`.
    pub fn coset_count(&self) -> usize {
        self.points.len()
    }

    /// Generating set of `Γ₀(N)` from the non-tree edges.
    pub fn generators(&self) -> &[ProjectiveMatrix] {
        &self.schreier
    }

    /// Does conjugation by `p` (both directions) keep every Schreier
    /// generator inside `±Γ₀(N)`? Since the generators generate `Γ₀(N)`,
    /// this holds iff `p` normalizes `Γ₀(N)`.
    pub fn conjugation_normalizes(&self, level: &Level, p: &ProjectiveMatrix) -> bool {
        let m = p.mat();
        let adj = m.adjugate();
        self.schreier.iter().all(|g| {
            let gm = g.mat();
            conjugate_in_gamma0(level, &m, &gm, &adj) && conjugate_in_gamma0(level, &adj, &gm, &m)
        })
    }
}

fn conjugate_in_gamma0(level: &Level, left: &Mat2, mid: &Mat2, right: &Mat2) -> bool {
    let conj = left.mul(mid).mul(right);
    match canonicalize(&conj) {
        Ok(p) => level.is_gamma0(&p),
        Err(_) => false,
    }
}

/// Right action of `h` on a bottom row `(c, d)` mod `N`.
fn act_bottom_row(level: &Level, c: u64, d: u64, h: &Mat2) -> (u64, u64) {
    let n = BigInt::from(level.n());
    let c = BigInt::from(c);
    let d = BigInt::from(d);
    let nc = (&c * &h.a + &d * &h.c) % &n;
    let nd = (&c * &h.b + &d * &h.d) % &n;
    (
        crate::gamma0::to_residue(&nc, level.n()),
        crate::gamma0::to_residue(&nd, level.n()),
    )
}

/// Canonical representative of `(c : d)` in `ℙ¹(ℤ/N)`: the lexicographic
/// minimum of `(u·c mod N, u·d mod N)` over units `u`.
fn canonical_point(level: &Level, c: u64, d: u64) -> (u64, u64) {
    level.unit_orbit_min(c % level.n().max(1), d % level.n().max(1))
}

/// Convenience wrapper: build the graph and test one candidate.
pub fn conjugation_normalizes(level: &Level, p: &ProjectiveMatrix, cap: u64) -> Result<bool> {
    let graph = CosetGraph::build(level, cap)?;
    Ok(graph.conjugation_normalizes(level, p))
}
