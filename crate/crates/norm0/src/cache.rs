//! On-disk cache of enumerated groups: one JSON file per level under the
//! cache directory, written atomically (temp file + rename). The cache is
//! advisory — anything that fails validation is silently recomputed.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::gamma0::Level;
use crate::group::{close, QuotientGroup};
use crate::mat2::ProjectiveMatrix;
use crate::normalizer::canonical_generators;
use crate::word::Word;
use crate::Result;

pub const CACHE_SCHEMA: &str = "norm0-cache/1";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    schema: String,
    n: u64,
    build_ms: u64,
    generators: Vec<GeneratorEntry>,
    elements: Vec<ProjectiveMatrix>,
    words: Vec<Word>,
    cayley: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GeneratorEntry {
    name: String,
    matrix: ProjectiveMatrix,
}

/// Cache of full-quotient enumerations keyed by level.
#[derive(Clone, Debug)]
pub struct GroupCache {
    dir: PathBuf,
}

impl GroupCache {
    pub fn new(dir: impl Into<PathBuf>) -> GroupCache {
        GroupCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, n: u64) -> PathBuf {
        self.dir.join(format!("N{n}.json"))
    }

    /// Returns the canonical full quotient for `level` and its build time
    /// in milliseconds, loading from the cache when a valid entry exists
    /// and recomputing (then storing) otherwise. The reported build time
    /// is the one recorded when the group was actually enumerated, so a
    /// hit and the miss that produced it serialize identically.
    pub fn load_or_compute(&self, level: &Level, budget: usize) -> Result<(QuotientGroup, u64)> {
        if let Some(hit) = self.try_load(level) {
            return Ok(hit);
        }
        let start = Instant::now();
        let group = close(level, canonical_generators(level)?, budget)?;
        let build_ms = start.elapsed().as_millis() as u64;
        if let Err(err) = self.store(&group, build_ms) {
            eprintln!("warning: could not write cache entry for N={}: {err}", level.n());
        }
        Ok((group, build_ms))
    }

    fn try_load(&self, level: &Level) -> Option<(QuotientGroup, u64)> {
        let text = fs::read_to_string(self.path_for(level.n())).ok()?;
        let file: CacheFile = serde_json::from_str(&text).ok()?;
        if file.schema != CACHE_SCHEMA || file.n != level.n() {
            return None;
        }
        let gens = canonical_generators(level).ok()?;
        if file.generators.len() != gens.len() {
            return None;
        }
        for ((name, mat), entry) in gens.iter().zip(&file.generators) {
            if entry.name != name || !level.coset_equal(&entry.matrix, mat) {
                return None;
            }
        }
        let group =
            QuotientGroup::from_parts(level.clone(), gens, file.elements, file.words, file.cayley)
                .ok()?;
        Some((group, file.build_ms))
    }

    /// Atomic write: serialize to a temp file in the same directory, then
    /// rename over the target (last writer wins).
    pub fn store(&self, group: &QuotientGroup, build_ms: u64) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let file = CacheFile {
            schema: CACHE_SCHEMA.to_string(),
            n: group.level().n(),
            build_ms,
            generators: group
                .gens()
                .iter()
                .map(|(name, matrix)| GeneratorEntry {
                    name: name.to_string(),
                    matrix: matrix.clone(),
                })
                .collect(),
            elements: group.elements().map(|e| e.rep.clone()).collect(),
            words: (0..group.order()).map(|i| group.word(i).clone()).collect(),
            cayley: (0..group.order())
                .map(|i| (0..group.order()).map(|j| group.op(i, j)).collect())
                .collect(),
        };
        let target = self.path_for(file.n);
        let tmp = self.dir.join(format!(".N{}.json.tmp-{}", file.n, std::process::id()));
        fs::write(&tmp, serde_json::to_string(&file)?)?;
        fs::rename(&tmp, &target)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_CLOSURE_BUDGET;

    #[test]
    fn cache_round_trip_reproduces_the_group() {
        let dir = tempfile::tempdir().unwrap();
        let cache = GroupCache::new(dir.path());
        let level = Level::new(48).unwrap();

        let (fresh, ms1) = cache.load_or_compute(&level, DEFAULT_CLOSURE_BUDGET).unwrap();
        assert!(cache.path_for(48).exists());
        let (cached, ms2) = cache.load_or_compute(&level, DEFAULT_CLOSURE_BUDGET).unwrap();
        assert_eq!(ms1, ms2, "cache hit must report the original build time");
        assert_eq!(fresh.order(), cached.order());
        for i in 0..fresh.order() {
            assert_eq!(fresh.element(i).rep, cached.element(i).rep);
            assert_eq!(fresh.word(i), cached.word(i));
            for j in 0..fresh.order() {
                assert_eq!(fresh.op(i, j), cached.op(i, j));
            }
        }
    }

    #[test]
    fn corrupt_cache_entries_are_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let cache = GroupCache::new(dir.path());
        let level = Level::new(9).unwrap();
        let (g, _) = cache.load_or_compute(&level, DEFAULT_CLOSURE_BUDGET).unwrap();
        assert_eq!(g.order(), 12);

        for garbage in ["not json", "{}", "{\"schema\":\"norm0-cache/1\",\"n\":9}"] {
            fs::write(cache.path_for(9), garbage).unwrap();
            let (g, _) = cache.load_or_compute(&level, DEFAULT_CLOSURE_BUDGET).unwrap();
            assert_eq!(g.order(), 12, "garbage `{garbage}` was not recomputed");
        }

        // structurally valid JSON with a tampered table must also be rejected
        let (g, ms) = cache.load_or_compute(&level, DEFAULT_CLOSURE_BUDGET).unwrap();
        cache.store(&g, ms).unwrap();
        let text = fs::read_to_string(cache.path_for(9)).unwrap();
        let mut file: serde_json::Value = serde_json::from_str(&text).unwrap();
        file["cayley"][1][1] = serde_json::json!(0);
        fs::write(cache.path_for(9), serde_json::to_string(&file).unwrap()).unwrap();
        let (g, _) = cache.load_or_compute(&level, DEFAULT_CLOSURE_BUDGET).unwrap();
        assert_eq!(g.order(), 12);
        // the rewritten entry is valid again
        let text = fs::read_to_string(cache.path_for(9)).unwrap();
        let file: CacheFile = serde_json::from_str(&text).unwrap();
        assert_eq!(file.schema, CACHE_SCHEMA);
    }

    #[test]
    fn wrong_level_entries_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let cache = GroupCache::new(dir.path());
        let level9 = Level::new(9).unwrap();
        let (g9, ms) = cache.load_or_compute(&level9, DEFAULT_CLOSURE_BUDGET).unwrap();
        // masquerade the N=9 entry as N=27
        let text = fs::read_to_string(cache.path_for(9)).unwrap();
        fs::write(cache.path_for(27), text).unwrap();
        let level27 = Level::new(27).unwrap();
        let (g27, _) = cache.load_or_compute(&level27, DEFAULT_CLOSURE_BUDGET).unwrap();
        assert_eq!(g27.order(), 18);
        assert_eq!(g9.order(), 12);
        let _ = ms;
    }
}
