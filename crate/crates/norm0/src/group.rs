//! Finite quotient enumeration: breadth-first closure with exact coset
//! equality, Cayley table, and group-theoretic queries.
//!
//! Deduplication never trusts fingerprints alone: elements hash into
//! fingerprint buckets, and equality inside a bucket is decided by
//! `coset_equal`. Element indexing is deterministic (BFS layer, then
//! generator order), so identical generator sets enumerate identically
//! across runs.

use std::collections::BTreeMap;

use crate::gamma0::{CosetElement, Fingerprint, Level};
use crate::mat2::ProjectiveMatrix;
use crate::normalizer::{atkin_lehner, canonical_generators, shift, membership_witness, GeneratorSet};
use crate::word::Word;
use crate::{Error, Result, DEFAULT_CLOSURE_BUDGET};

/// Enumerated quotient group. Index 0 is the identity; all tables are
/// immutable after construction.
#[derive(Debug, Clone)]
pub struct QuotientGroup {
    level: Level,
    gens: GeneratorSet,
    gen_indices: Vec<usize>,
    elements: Vec<CosetElement>,
    words: Vec<Word>,
    cayley: Vec<Vec<usize>>,
    inv: Vec<usize>,
    buckets: BTreeMap<Fingerprint, Vec<usize>>,
}

/// Verdict of an internal-direct-product test, with a concrete witness on
/// failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectProductVerdict {
    pub holds: bool,
    pub failure: Option<ProductFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProductFailure {
    /// Elements of two distinct factors that do not commute.
    NonCommuting { x: usize, y: usize, factor_x: usize, factor_y: usize },
    /// Product of factor orders differs from the group order.
    OrderMismatch { product: u128, group_order: usize },
    /// A factor meets the subgroup generated by the others nontrivially.
    NontrivialIntersection { factor: usize, element: usize },
}

/// BFS closure of `gens` under multiplication, up to `budget` elements.
///
/// Every generator must pass the membership pattern test; the quotient is
/// finite, so exceeding the budget signals a bug rather than a big group.
pub fn close(level: &Level, gens: GeneratorSet, budget: usize) -> Result<QuotientGroup> {
    for (name, m) in gens.iter() {
        if membership_witness(level, m).is_none() {
            return Err(Error::InvalidInput(format!(
                "generator {name} = {m} is not in the normalizer at level {}",
                level.n()
            )));
        }
    }

    let mut elements: Vec<CosetElement> = vec![level.coset_element(ProjectiveMatrix::identity())];
    let mut words: Vec<Word> = vec![Word::empty()];
    let mut buckets: BTreeMap<Fingerprint, Vec<usize>> = BTreeMap::new();
    buckets.insert(elements[0].fp.clone(), vec![0]);
    // parents[j] = (i, gi) with element j first reached as element i times
    // generator gi; the table fill below recurses on this
    let mut parents: Vec<(usize, usize)> = vec![(0, 0)];
    // gen_cols[gi][i] = index of element i times generator gi; every element
    // passes through the frontier exactly once, in index order
    let mut gen_cols: Vec<Vec<usize>> = vec![Vec::new(); gens.len()];

    let mut frontier: Vec<usize> = vec![0];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &i in &frontier {
            for (gi, (name, gmat)) in gens.iter().enumerate() {
                let prod = elements[i].rep.compose(gmat);
                let fp = level.fingerprint(&prod);
                let bucket = buckets.entry(fp.clone()).or_default();
                let found = bucket
                    .iter()
                    .copied()
                    .find(|&j| level.coset_equal(&prod, &elements[j].rep));
                let idx = match found {
                    Some(j) => j,
                    None => {
                        if elements.len() >= budget {
                            return Err(Error::BudgetExceeded { budget });
                        }
                        let idx = elements.len();
                        bucket.push(idx);
                        elements.push(CosetElement { rep: prod, fp });
                        let mut w = words[i].clone();
                        w.push(name, 1);
                        words.push(w);
                        parents.push((i, gi));
                        next.push(idx);
                        idx
                    }
                };
                debug_assert_eq!(gen_cols[gi].len(), i);
                gen_cols[gi].push(idx);
            }
        }
        frontier = next;
    }

    // Fill the table from the generator columns: with word_j = word_p · g,
    // op(i, j) = gen_cols[g][op(i, p)]. Parent indices precede children, so
    // ascending j keeps the recursion grounded; no further matrix products
    // are needed.
    let n = elements.len();
    let mut cayley = vec![vec![0usize; n]; n];
    for (i, row) in cayley.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 1..n {
        let (p, gi) = parents[j];
        for i in 0..n {
            cayley[i][j] = gen_cols[gi][cayley[i][p]];
        }
    }

    finish_group(level.clone(), gens, elements, words, buckets, cayley)
}

/// Closure with the level's canonical generators and the default budget.
pub fn close_canonical(level: &Level) -> Result<QuotientGroup> {
    close(level, canonical_generators(level)?, DEFAULT_CLOSURE_BUDGET)
}

fn finish_group(
    level: Level,
    gens: GeneratorSet,
    elements: Vec<CosetElement>,
    words: Vec<Word>,
    buckets: BTreeMap<Fingerprint, Vec<usize>>,
    cayley: Vec<Vec<usize>>,
) -> Result<QuotientGroup> {
    let n = elements.len();
    let find = |p: &ProjectiveMatrix| -> Option<usize> {
        let fp = level.fingerprint(p);
        buckets
            .get(&fp)?
            .iter()
            .copied()
            .find(|&j| level.coset_equal(p, &elements[j].rep))
    };

    let mut inv = vec![usize::MAX; n];
    for i in 0..n {
        let j = cayley[i]
            .iter()
            .position(|&k| k == 0)
            .ok_or_else(|| Error::InvalidInput("element without inverse in table".into()))?;
        inv[i] = j;
    }

    let mut gen_indices = Vec::with_capacity(gens.len());
    for (name, m) in gens.iter() {
        let idx = find(m).ok_or_else(|| {
            Error::InvalidInput(format!("generator {name} missing from closure"))
        })?;
        gen_indices.push(idx);
    }

    Ok(QuotientGroup {
        level,
        gens,
        gen_indices,
        elements,
        words,
        cayley,
        inv,
        buckets,
    })
}

impl QuotientGroup {
    /// Rebuilds a group from stored parts (the cache path), validating
    /// enough structure that corrupt input is rejected rather than trusted:
    /// identity at index 0, canonical primitive members, bucket-level
    /// duplicate freedom, Latin-square table, and witness-word soundness.
    pub fn from_parts(
        level: Level,
        gens: GeneratorSet,
        reps: Vec<ProjectiveMatrix>,
        words: Vec<Word>,
        cayley: Vec<Vec<usize>>,
    ) -> Result<QuotientGroup> {
        let n = reps.len();
        let bad = |msg: &str| Error::InvalidInput(format!("stored group rejected: {msg}"));
        if n == 0 || !reps[0].is_identity() {
            return Err(bad("identity must be at index 0"));
        }
        if words.len() != n || cayley.len() != n || cayley.iter().any(|row| row.len() != n) {
            return Err(bad("table dimensions do not match the element list"));
        }
        for row in &cayley {
            let mut seen = vec![false; n];
            for &k in row {
                if k >= n || seen[k] {
                    return Err(bad("table row is not a permutation"));
                }
                seen[k] = true;
            }
        }
        for col in 0..n {
            let mut seen = vec![false; n];
            for row in &cayley {
                if seen[row[col]] {
                    return Err(bad("table column is not a permutation"));
                }
                seen[row[col]] = true;
            }
        }
        #[allow(clippy::needless_range_loop)]
        for j in 0..n {
            if cayley[0][j] != j || cayley[j][0] != j {
                return Err(bad("index 0 does not act as the identity"));
            }
        }

        let mut elements: Vec<CosetElement> = Vec::with_capacity(n);
        let mut buckets: BTreeMap<Fingerprint, Vec<usize>> = BTreeMap::new();
        for (idx, rep) in reps.into_iter().enumerate() {
            if membership_witness(&level, &rep).is_none() {
                return Err(bad("element outside the normalizer"));
            }
            let fp = level.fingerprint(&rep);
            let bucket = buckets.entry(fp.clone()).or_default();
            if bucket.iter().any(|&j| level.coset_equal(&rep, &elements[j].rep)) {
                return Err(bad("duplicate coset in element list"));
            }
            bucket.push(idx);
            elements.push(CosetElement { rep, fp });
        }

        let group = finish_group(level, gens, elements, words, buckets, cayley)?;
        for i in 0..group.order() {
            if group.eval_word(group.word(i))? != i {
                return Err(bad("witness word does not reproduce its element"));
            }
        }
        Ok(group)
    }

    pub fn level(&self) -> &Level {
        &self.level
    }

    pub fn gens(&self) -> &GeneratorSet {
        &self.gens
    }

    /// Element indices of the generators, in generator order.
    pub fn gen_indices(&self) -> &[usize] {
        &self.gen_indices
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn element(&self, i: usize) -> &CosetElement {
        &self.elements[i]
    }

    pub fn elements(&self) -> impl Iterator<Item = &CosetElement> {
        self.elements.iter()
    }

    /// Shortest positive generator word reaching element `i`.
    pub fn word(&self, i: usize) -> &Word {
        &self.words[i]
    }

    pub fn op(&self, i: usize, j: usize) -> usize {
        self.cayley[i][j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inv[i]
    }

    /// Index of the coset represented by `p`, if enumerated.
    pub fn find(&self, p: &ProjectiveMatrix) -> Option<usize> {
        let fp = self.level.fingerprint(p);
        self.buckets
            .get(&fp)?
            .iter()
            .copied()
            .find(|&j| self.level.coset_equal(p, &self.elements[j].rep))
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut acc = i;
        while acc != 0 {
            acc = self.op(acc, i);
            k += 1;
        }
        k
    }

    pub fn commutes(&self, i: usize, j: usize) -> bool {
        self.op(i, j) == self.op(j, i)
    }

    /// Resolves a generator name to an element index. Names in the
    /// generator set win; otherwise `S{k}` for any `k | v(N)` and `w{m}`
    /// for any exact divisor `m ‖ N` are constructed and located, so
    /// relation words may mention shifts and involutions that are not
    /// themselves canonical generators (e.g. `S4` when the generator is
    /// `S12`).
    pub fn resolve_name(&self, name: &str) -> Result<usize> {
        if let Some(pos) = self.gens.names().iter().position(|&n| n == name) {
            return Ok(self.gen_indices[pos]);
        }
        if let Some(rest) = name.strip_prefix('S') {
            if let Ok(k) = rest.parse::<u64>() {
                if k >= 1 && self.level.v().is_multiple_of(k) {
                    let s = shift(&self.level, k)?;
                    return self.find(&s).ok_or_else(|| Error::UnknownGenerator(name.into()));
                }
            }
        }
        if let Some(rest) = name.strip_prefix('w') {
            if let Ok(m) = rest.parse::<u64>() {
                if let Ok(w) = atkin_lehner(&self.level, m) {
                    return self.find(&w).ok_or_else(|| Error::UnknownGenerator(name.into()));
                }
            }
        }
        Err(Error::UnknownGenerator(name.into()))
    }

    /// Left-to-right product of the word's generator powers.
    pub fn eval_word(&self, w: &Word) -> Result<usize> {
        let mut acc = 0usize;
        for (name, exp) in w.iter() {
            let g = self.resolve_name(name)?;
            let g = if exp < 0 { self.inverse(g) } else { g };
            let ord = self.element_order(g) as u64;
            let k = exp.unsigned_abs() % ord;
            for _ in 0..k {
                acc = self.op(acc, g);
            }
        }
        Ok(acc)
    }

    pub fn is_relation(&self, w: &Word) -> Result<bool> {
        Ok(self.eval_word(w)? == 0)
    }

    /// Elements commuting with every generator (equivalently, with the
    /// whole group).
    pub fn center(&self) -> Vec<usize> {
        (0..self.order())
            .filter(|&i| self.gen_indices.iter().all(|&g| self.commutes(i, g)))
            .collect()
    }

    /// Closure of the seeds under the group operation, in deterministic
    /// discovery order (identity first, then seeds, then products).
    pub fn subgroup(&self, seeds: &[usize]) -> Vec<usize> {
        let mut members: Vec<usize> = vec![0];
        let mut in_set = vec![false; self.order()];
        in_set[0] = true;
        for &s in seeds {
            if !in_set[s] {
                in_set[s] = true;
                members.push(s);
            }
        }
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            let mut j = 0;
            while j < members.len() {
                let y = members[j];
                for z in [self.op(x, y), self.op(y, x)] {
                    if !in_set[z] {
                        in_set[z] = true;
                        members.push(z);
                    }
                }
                j += 1;
            }
            i += 1;
        }
        members
    }

    fn check_subgroup(&self, factor: usize, members: &[usize]) -> Result<()> {
        let mut in_set = vec![false; self.order()];
        for &x in members {
            in_set[x] = true;
        }
        if members.is_empty() || !in_set[0] {
            return Err(Error::NotASubgroup { factor });
        }
        for &x in members {
            for &y in members {
                if !in_set[self.op(x, y)] {
                    return Err(Error::NotASubgroup { factor });
                }
            }
        }
        Ok(())
    }

    /// Internal-direct-product test: pairwise elementwise commutation,
    /// order product, and trivial pairwise-vs-rest intersections, in that
    /// order; the first failing check provides the witness.
    pub fn internal_direct_product(&self, factors: &[Vec<usize>]) -> Result<DirectProductVerdict> {
        for (k, f) in factors.iter().enumerate() {
            self.check_subgroup(k, f)?;
        }
        for fi in 0..factors.len() {
            for fj in fi + 1..factors.len() {
                for &x in &factors[fi] {
                    for &y in &factors[fj] {
                        if !self.commutes(x, y) {
                            return Ok(DirectProductVerdict {
                                holds: false,
                                failure: Some(ProductFailure::NonCommuting {
                                    x,
                                    y,
                                    factor_x: fi,
                                    factor_y: fj,
                                }),
                            });
                        }
                    }
                }
            }
        }
        let product: u128 = factors.iter().map(|f| f.len() as u128).product();
        if product != self.order() as u128 {
            return Ok(DirectProductVerdict {
                holds: false,
                failure: Some(ProductFailure::OrderMismatch {
                    product,
                    group_order: self.order(),
                }),
            });
        }
        for k in 0..factors.len() {
            let mut other_seeds = Vec::new();
            for (j, f) in factors.iter().enumerate() {
                if j != k {
                    other_seeds.extend_from_slice(f);
                }
            }
            let others = self.subgroup(&other_seeds);
            let mut in_others = vec![false; self.order()];
            for &x in &others {
                in_others[x] = true;
            }
            if let Some(&x) = factors[k].iter().find(|&&x| x != 0 && in_others[x]) {
                return Ok(DirectProductVerdict {
                    holds: false,
                    failure: Some(ProductFailure::NontrivialIntersection { factor: k, element: x }),
                });
            }
        }
        Ok(DirectProductVerdict { holds: true, failure: None })
    }

    /// Left-regular permutation action of each generator: entry `i` of the
    /// image list is `op(g, i)`. Faithful; order is preserved.
    pub fn regular_representation(&self) -> Vec<(String, Vec<usize>)> {
        self.gens
            .iter()
            .zip(&self.gen_indices)
            .map(|((name, _), &g)| {
                let images = (0..self.order()).map(|i| self.op(g, i)).collect();
                (name.to_string(), images)
            })
            .collect()
    }
}
