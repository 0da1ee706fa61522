//! Maximization engines for `μ(S,n,k)`, `μ_r(S,n,k)` and `μ̂(S,n,k)`.
//!
//! Exhaustive searches split the space by canonical prefix, exhaust each
//! prefix sub-stream on the worker pool and merge the partial results. The
//! merge keeps the maximum, adds up witness totals and keeps the
//! lexicographically smallest witnesses up to the configured limit, so the
//! outcome does not depend on the number of workers or the merge order.
//!
//! The structured searches (`max_layered`, `max_two_block`) scan only the
//! families singled out by the layered dominance theorem and the two-block
//! lemmas; they are exact over those families and are cross-checked against
//! the exhaustive search where that is affordable.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};
use serde::Serialize;

use crate::count::{count_pattern, serialize_ratio, Counter};
use crate::enumerate::{
    layered_partitions, partitions, space_size, two_block_candidates, words, Direction, RgsCursor, WordCursor,
};
use crate::error::{Error, Result};
use crate::ratio::{binomial, ratio, Rational};
use crate::word::{canonize, CanonicalWord, Layering, Mode, PatternSet, Word};

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Largest `|Π_{n,k}|` an exhaustive partition search may scan.
    pub candidate_cap: u64,
    /// Largest `k^n` a word search may scan.
    pub word_cap: u64,
    /// Lift both caps.
    pub unsafe_large: bool,
    /// Witnesses kept per result; the total is always exact.
    pub witness_limit: usize,
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
    /// Length of the canonical prefixes used to split exhaustive searches.
    pub prefix_len: usize,
    /// Confirm layered maxima against the exhaustive search when in cap.
    pub layered_cross_check: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            candidate_cap: 5_000_000,
            word_cap: 5_000_000,
            unsafe_large: false,
            witness_limit: 100,
            threads: None,
            prefix_len: 3,
            layered_cross_check: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SearchSpace {
    #[serde(rename = "all")]
    Partitions,
    #[serde(rename = "words")]
    Words,
    #[serde(rename = "layered")]
    Layered,
    #[serde(rename = "two-block")]
    TwoBlock,
}

impl fmt::Display for SearchSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchSpace::Partitions => "all",
            SearchSpace::Words => "words",
            SearchSpace::Layered => "layered",
            SearchSpace::TwoBlock => "two-block",
        })
    }
}

impl std::str::FromStr for SearchSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(SearchSpace::Partitions),
            "words" => Ok(SearchSpace::Words),
            "layered" => Ok(SearchSpace::Layered),
            "two-block" => Ok(SearchSpace::TwoBlock),
            other => Err(Error::InvalidArgument(format!("unknown search space {other:?}"))),
        }
    }
}

/// Maximum count over a family, with its maximizers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult<W = CanonicalWord> {
    pub space: SearchSpace,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub mu: u64,
    #[serde(serialize_with = "serialize_ratio")]
    pub density: Rational,
    /// Lexicographically smallest maximizers, at most the witness limit.
    pub witnesses: Vec<W>,
    /// Number of maximizers in the family.
    pub witness_total: u64,
    /// Candidates scanned; equals the family size.
    pub examined: u64,
}

impl<W> SearchResult<W> {
    pub fn primary_witness(&self) -> Option<&W> {
        self.witnesses.first()
    }
}

/// Running maximum over one stream.
#[derive(Debug, Clone)]
struct Best<W> {
    mu: u64,
    witnesses: Vec<W>,
    total: u64,
    examined: u64,
}

impl<W: Ord> Best<W> {
    fn empty() -> Self {
        Best {
            mu: 0,
            witnesses: Vec::new(),
            total: 0,
            examined: 0,
        }
    }

    /// Streams feed candidates in increasing order, so pushing keeps the
    /// witness list sorted.
    #[inline]
    fn offer(&mut self, value: u64, limit: usize, witness: impl FnOnce() -> W) {
        self.examined += 1;
        if self.total == 0 || value > self.mu {
            self.mu = value;
            self.witnesses.clear();
            self.witnesses.push(witness());
            self.total = 1;
        } else if value == self.mu {
            self.total += 1;
            if self.witnesses.len() < limit {
                self.witnesses.push(witness());
            }
        }
        if limit == 0 {
            self.witnesses.clear();
        }
    }

    fn merge(mut self, other: Self, limit: usize) -> Self {
        let examined = self.examined + other.examined;
        let mut merged = if other.total == 0 {
            self
        } else if self.total == 0 || other.mu > self.mu {
            other
        } else if other.mu < self.mu {
            self
        } else {
            self.witnesses.extend(other.witnesses);
            self.witnesses.sort();
            self.witnesses.truncate(limit);
            self.total += other.total;
            self
        };
        merged.examined = examined;
        merged
    }
}

fn finish<W>(best: Best<W>, space: SearchSpace, n: usize, k: usize, m: usize) -> Result<SearchResult<W>> {
    let denom = binomial(n as u64, m as u64)?;
    Ok(SearchResult {
        space,
        n,
        k,
        m,
        mu: best.mu,
        density: ratio(best.mu, denom),
        witnesses: best.witnesses,
        witness_total: best.total,
        examined: best.examined,
    })
}

/// Pair of exact signed deltas from swapping an adjacent `21`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SwapContext {
    /// Ones before the swapped pair.
    pub a: usize,
    /// Twos before the swapped pair.
    pub b: usize,
    /// Ones after the swapped pair.
    pub c: usize,
    /// Twos after the swapped pair.
    pub d: usize,
}

impl SwapContext {
    /// Context of the `21` at 1-based positions `(i, i+1)` of a two-block
    /// partition.
    pub fn new(p: &CanonicalWord, i: usize) -> Result<Self> {
        let letters = p.letters();
        if p.blocks() != 2 {
            return Err(Error::Precondition(format!("{p} does not have exactly two blocks")));
        }
        if i == 0 || i >= letters.len() || letters[i - 1] != 2 || letters[i] != 1 {
            return Err(Error::Precondition(format!("{p} has no 21 at positions ({i},{})", i + 1)));
        }
        let ones = |s: &[u8]| s.iter().filter(|&&x| x == 1).count();
        let (before, after) = (&letters[..i - 1], &letters[i + 1..]);
        Ok(SwapContext {
            a: ones(before),
            b: before.len() - ones(before),
            c: ones(after),
            d: after.len() - ones(after),
        })
    }

    /// `(b + c) - (a + d)`.
    pub fn predicted_delta(&self) -> i64 {
        (self.b + self.c) as i64 - (self.a + self.d) as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwapOutcome {
    pub context: SwapContext,
    pub predicted: i64,
    pub actual: i64,
    pub swapped: CanonicalWord,
}

/// Swaps the `21` at 1-based positions `(i, i+1)` and compares the change
/// in unrestricted `121` copies with the `(b+c)-(a+d)` prediction.
pub fn swap_adjacent_delta(p: &CanonicalWord, i: usize) -> Result<SwapOutcome> {
    let context = SwapContext::new(p, i)?;
    let mut letters = p.letters().to_vec();
    letters.swap(i - 1, i);
    let swapped = canonize(&letters);
    let before = count_pattern(&[1, 2, 1], p.letters(), Mode::Unrestricted) as i64;
    let after = count_pattern(&[1, 2, 1], swapped.letters(), Mode::Unrestricted) as i64;
    Ok(SwapOutcome {
        context,
        predicted: context.predicted_delta(),
        actual: after - before,
        swapped,
    })
}

/// Rewrites a word into a partition without losing restricted copies of
/// any pattern: relabel onto the smallest alphabet, then repeatedly move
/// the first occurrence of the missing next letter forward to the first
/// position that breaks the growth condition.
pub fn word_to_partition(w: &Word) -> CanonicalWord {
    let mut letters = dense_relabel(w.letters());
    loop {
        let mut max = 0u8;
        let mut violation = None;
        for (i, &x) in letters.iter().enumerate() {
            if x > max + 1 {
                violation = Some((i, max + 1));
                break;
            }
            max = max.max(x);
        }
        let Some((i, wanted)) = violation else {
            return CanonicalWord::from_canonical_unchecked(letters);
        };
        // every value up to the alphabet size occurs, and none of them
        // at or before i equals `wanted`
        let t = letters[i..]
            .iter()
            .position(|&x| x == wanted)
            .map(|off| i + off)
            .expect("dense alphabet contains every smaller value");
        let moved = letters.remove(t);
        letters.insert(i, moved);
    }
}

/// Smallest value becomes 1, the next smallest 2, and so on.
fn dense_relabel(letters: &[u8]) -> Vec<u8> {
    let mut present = [false; 256];
    for &x in letters {
        present[x as usize] = true;
    }
    let mut rank = [0u8; 256];
    let mut next = 0u8;
    for v in 0..256 {
        if present[v] {
            next += 1;
            rank[v] = next;
        }
    }
    letters.iter().map(|&x| rank[x as usize]).collect()
}

/// Layered maximum, with the exhaustive comparison when it was run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayeredSearch {
    pub result: SearchResult,
    pub direction: Direction,
    /// `Some(true)` when the exhaustive maximum over `Π_{n,k}` agrees.
    pub exhaustive_agrees: Option<bool>,
}

/// How `k` moves with `n` along a density sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KPolicy {
    /// `k = n`.
    Diagonal,
    Fixed(usize),
}

impl KPolicy {
    pub fn k_for(self, n: usize) -> usize {
        match self {
            KPolicy::Diagonal => n,
            KPolicy::Fixed(k) => k,
        }
    }
}

impl fmt::Display for KPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KPolicy::Diagonal => f.write_str("k=n"),
            KPolicy::Fixed(k) => write!(f, "k={k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    First,
    Decrease,
    Equal,
    Increase,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensitySequenceRow {
    pub n: usize,
    pub k: usize,
    pub mu: u64,
    #[serde(serialize_with = "serialize_ratio")]
    pub delta: Rational,
    pub witness: CanonicalWord,
    pub engine: SearchSpace,
    pub trend: Trend,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensitySequence {
    pub rows: Vec<DensitySequenceRow>,
    /// Why the sequence stopped short of `n_max`, if it did.
    pub truncated: Option<String>,
}

impl DensitySequence {
    pub fn is_nonincreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].delta <= w[0].delta)
    }
}

/// Maximum count for every exact number of blocks, from one pass over `Π_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockProfile {
    pub n: usize,
    /// `by_blocks[b - 1]` is the maximum over partitions with exactly `b`
    /// blocks.
    pub by_blocks: Vec<u64>,
}

impl BlockProfile {
    /// `μ(S,n,k)`: maximum over partitions with at most `k` blocks.
    pub fn mu(&self, k: usize) -> u64 {
        self.by_blocks.iter().take(k).copied().max().unwrap_or(0)
    }
}

/// Search engine bound to a configuration and a worker pool.
#[derive(Clone)]
pub struct Searcher {
    config: SearchConfig,
    pool: Arc<ThreadPool>,
}

impl fmt::Debug for Searcher {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Searcher")
            .field("config", &self.config)
            .field("threads", &self.pool.current_num_threads())
            .finish()
    }
}

impl Searcher {
    pub fn new(config: SearchConfig) -> Result<Self> {
        let pool = ThreadPoolBuilder::new()
            .num_threads(config.threads.unwrap_or(0))
            .build()
            .map_err(|e| Error::ThreadPool(e.to_string()))?;
        Ok(Searcher {
            config,
            pool: Arc::new(pool),
        })
    }

    pub fn config(&self) -> &SearchConfig {
        &self.config
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Runs `f` on this searcher's pool.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }

    fn check_partition_cap(&self, n: usize, k: usize) -> Result<()> {
        if self.config.unsafe_large {
            return Ok(());
        }
        match space_size(n, k) {
            Ok(size) if size <= self.config.candidate_cap => Ok(()),
            Ok(size) => Err(Error::CapExceeded {
                space: format!("partition (n={n}, k={k})"),
                size: size.to_string(),
                cap: self.config.candidate_cap,
            }),
            Err(_) => Err(Error::CapExceeded {
                space: format!("partition (n={n}, k={k})"),
                size: "more than 5.1e13".into(),
                cap: self.config.candidate_cap,
            }),
        }
    }

    /// True when an exhaustive scan of `Π_{n,k}` fits under the cap.
    pub fn within_partition_cap(&self, n: usize, k: usize) -> bool {
        self.check_partition_cap(n, k).is_ok()
    }

    fn prefixes(&self, n: usize, k: usize) -> Result<Vec<Vec<u8>>> {
        let len = self.config.prefix_len.min(n);
        Ok(partitions(len, k)?.map(|p| p.letters().to_vec()).collect())
    }

    /// Exhaustive `μ(S,n,k)` (or `μ_r`, by the set's mode) over `Π_{n,k}`.
    pub fn max_over_partitions(&self, set: &PatternSet, n: usize, k: usize) -> Result<SearchResult> {
        let m = set.m();
        if m > n {
            return Err(Error::PatternTooLong { m, n });
        }
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        self.check_partition_cap(n, k)?;
        let counter = Counter::new(set);
        let limit = self.config.witness_limit;
        let prefixes = self.prefixes(n, k)?;
        let best = self.pool.install(|| {
            prefixes
                .par_iter()
                .map(|prefix| {
                    let mut best = Best::empty();
                    let mut cursor = RgsCursor::with_prefix(prefix, n, k).expect("k >= 1");
                    while cursor.advance() {
                        let letters = cursor.letters();
                        best.offer(counter.count(letters), limit, || {
                            CanonicalWord::from_canonical_unchecked(letters.to_vec())
                        });
                    }
                    best
                })
                .reduce(Best::empty, |a, b| a.merge(b, limit))
        });
        finish(best, SearchSpace::Partitions, n, k, m)
    }

    /// Per-block-count maxima over all of `Π_n`, for whole `k` grids at once.
    pub fn block_profile(&self, set: &PatternSet, n: usize) -> Result<BlockProfile> {
        let m = set.m();
        if m > n {
            return Err(Error::PatternTooLong { m, n });
        }
        self.check_partition_cap(n, n)?;
        let counter = Counter::new(set);
        let prefixes = self.prefixes(n, n)?;
        let by_blocks = self.pool.install(|| {
            prefixes
                .par_iter()
                .map(|prefix| {
                    let mut maxima = vec![0u64; n];
                    let mut cursor = RgsCursor::with_prefix(prefix, n, n).expect("k >= 1");
                    while cursor.advance() {
                        let slot = &mut maxima[cursor.blocks() as usize - 1];
                        *slot = (*slot).max(counter.count(cursor.letters()));
                    }
                    maxima
                })
                .reduce(
                    || vec![0u64; n],
                    |a, b| a.iter().zip(&b).map(|(x, y)| *x.max(y)).collect(),
                )
        });
        Ok(BlockProfile { n, by_blocks })
    }

    /// Exhaustive `μ̂(S,n,k)` over `[k]^n`; restricted sense only.
    pub fn max_over_words(&self, set: &PatternSet, n: usize, k: usize) -> Result<SearchResult<Word>> {
        if set.mode() != Mode::Restricted {
            return Err(Error::Unsupported(
                "word maximization is defined for restricted containment only".into(),
            ));
        }
        let m = set.m();
        if m > n {
            return Err(Error::PatternTooLong { m, n });
        }
        if k == 0 || k > u8::MAX as usize {
            return Err(Error::InvalidArgument(format!("alphabet size {k} outside [1,255]")));
        }
        let size = (k as u64).checked_pow(n as u32);
        if !self.config.unsafe_large && size.map_or(true, |s| s > self.config.word_cap) {
            return Err(Error::CapExceeded {
                space: format!("word (n={n}, k={k})"),
                size: size.map_or_else(|| format!("{k}^{n}"), |s| s.to_string()),
                cap: self.config.word_cap,
            });
        }
        let counter = Counter::new(set);
        let limit = self.config.witness_limit;
        let prefixes: Vec<Vec<u8>> = words(n.min(2), k)?.map(|w| w.letters().to_vec()).collect();
        let best = self.pool.install(|| {
            prefixes
                .par_iter()
                .map(|prefix| {
                    let mut best = Best::empty();
                    let mut cursor = WordCursor::with_prefix(prefix, n, k).expect("valid alphabet");
                    while cursor.advance() {
                        let letters = cursor.letters();
                        best.offer(counter.count(letters), limit, || {
                            Word::new(letters.to_vec(), k as u8).expect("cursor stays in alphabet")
                        });
                    }
                    best
                })
                .reduce(Best::empty, |a, b| a.merge(b, limit))
        });
        finish(best, SearchSpace::Words, n, k, m)
    }

    fn layered_scan(&self, pattern: &CanonicalWord, n: usize, k: usize) -> Result<(SearchResult, Direction)> {
        let direction = match pattern.layering() {
            Layering::MonotoneIncreasing => Direction::Increasing,
            Layering::MonotoneDecreasing => Direction::Decreasing,
            other => {
                return Err(Error::Precondition(format!(
                    "{pattern} is not monotone layered ({other:?})"
                )))
            }
        };
        let m = pattern.len();
        if m > n {
            return Err(Error::PatternTooLong { m, n });
        }
        let mut candidates = layered_partitions(n, k)?;
        if direction == Direction::Decreasing {
            candidates = candidates.iter().map(CanonicalWord::reverse_canonize).collect();
            candidates.sort();
        }
        let limit = self.config.witness_limit;
        let mut best = Best::empty();
        for c in candidates {
            let value = count_pattern(pattern.letters(), c.letters(), Mode::Unrestricted);
            best.offer(value, limit, || c.clone());
        }
        Ok((finish(best, SearchSpace::Layered, n, k, m)?, direction))
    }

    /// Maximum of unrestricted `ν(p,·)` over monotone layered partitions in
    /// the pattern's own direction (decreasing patterns are handled through
    /// reversal).
    pub fn max_layered(&self, pattern: &CanonicalWord, n: usize, k: usize) -> Result<LayeredSearch> {
        let (result, direction) = self.layered_scan(pattern, n, k)?;
        let exhaustive_agrees = if self.config.layered_cross_check && self.within_partition_cap(n, k) {
            let set = PatternSet::single(pattern.clone(), Mode::Unrestricted)?;
            Some(self.max_over_partitions(&set, n, k)?.mu == result.mu)
        } else {
            None
        };
        Ok(LayeredSearch {
            result,
            direction,
            exhaustive_agrees,
        })
    }

    /// Maximum of unrestricted `ν(121,·)` over the two-block family plus the
    /// all-ones word.
    pub fn max_two_block(&self, n: usize) -> Result<SearchResult> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!("two-block search needs n >= 3, got {n}")));
        }
        let mut candidates = two_block_candidates(n)?;
        let ones = CanonicalWord::ones(n);
        if !candidates.contains(&ones) {
            candidates.push(ones);
            candidates.sort();
        }
        let limit = self.config.witness_limit;
        let mut best = Best::empty();
        for c in candidates {
            let value = count_pattern(&[1, 2, 1], c.letters(), Mode::Unrestricted);
            best.offer(value, limit, || c.clone());
        }
        finish(best, SearchSpace::TwoBlock, n, 2, 3)
    }

    /// Rows `n = m..=n_max` of `δ(S,n,k)`. Unrestricted singleton sets use
    /// the layered search for monotone layered patterns and the two-block
    /// search for `121`; everything else is exhaustive, and the sequence
    /// stops with a notice at the first row over the cap.
    pub fn density_sequence(&self, set: &PatternSet, n_max: usize, policy: KPolicy) -> Result<DensitySequence> {
        let m = set.m();
        let mut rows: Vec<DensitySequenceRow> = Vec::new();
        let mut truncated = None;
        for n in m..=n_max {
            let k = policy.k_for(n);
            if k == 0 {
                return Err(Error::InvalidArgument("k must be at least 1".into()));
            }
            let fast = match (set.mode(), set.as_single()) {
                (Mode::Unrestricted, Some(p)) if p.layering().is_monotone() => {
                    Some(self.layered_scan(p, n, k)?.0)
                }
                (Mode::Unrestricted, Some(p)) if p.letters() == [1, 2, 1] && k >= 2 => Some(self.max_two_block(n)?),
                _ => None,
            };
            let result = match fast {
                Some(r) => r,
                None => match self.max_over_partitions(set, n, k) {
                    Ok(r) => r,
                    Err(e @ Error::CapExceeded { .. }) => {
                        truncated = Some(format!("stopped before n = {n}: {e}"));
                        break;
                    }
                    Err(e) => return Err(e),
                },
            };
            let delta = result.density;
            let trend = match rows.last() {
                None => Trend::First,
                Some(prev) if delta < prev.delta => Trend::Decrease,
                Some(prev) if delta == prev.delta => Trend::Equal,
                Some(_) => Trend::Increase,
            };
            rows.push(DensitySequenceRow {
                n,
                k,
                mu: result.mu,
                delta,
                witness: result.witnesses.first().cloned().unwrap_or_default(),
                engine: result.space,
                trend,
            });
        }
        Ok(DensitySequence { rows, truncated })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{count_restricted, count_unrestricted};
    use crate::enumerate::{layered_from_structure, partitions};
    use proptest::prelude::*;

    fn cw(s: &str) -> CanonicalWord {
        s.parse().unwrap()
    }

    fn searcher() -> Searcher {
        Searcher::new(SearchConfig::default()).unwrap()
    }

    fn set(p: &str, mode: Mode) -> PatternSet {
        PatternSet::parse(&[p], mode).unwrap()
    }

    #[test]
    fn exhaustive_121() {
        let s = searcher();
        let r = s.max_over_partitions(&set("121", Mode::Unrestricted), 5, 5).unwrap();
        assert_eq!(r.mu, 5);
        assert!(r.witnesses.contains(&cw("12121")));
        assert_eq!(r.examined, 52);
        let r = s.max_over_partitions(&set("121", Mode::Unrestricted), 4, 4).unwrap();
        assert_eq!(r.mu, 2);
        assert_eq!(r.examined, 15);
    }

    #[test]
    fn all_ones_pattern() {
        let s = searcher();
        for mode in [Mode::Restricted, Mode::Unrestricted] {
            for (n, k) in [(3, 1), (5, 3), (7, 7)] {
                let r = s.max_over_partitions(&set("111", mode), n, k).unwrap();
                assert_eq!(r.mu, binomial(n as u64, 3).unwrap());
                assert_eq!(r.primary_witness(), Some(&CanonicalWord::ones(n)));
                assert_eq!(r.density, ratio(1, 1));
            }
        }
    }

    #[test]
    fn witnesses_are_exactly_the_argmax() {
        let s = searcher();
        let pattern = set("121", Mode::Unrestricted);
        let r = s.max_over_partitions(&pattern, 6, 6).unwrap();
        let brute: Vec<CanonicalWord> = partitions(6, 6)
            .unwrap()
            .filter(|p| count_unrestricted(&pattern, p).unwrap() == r.mu)
            .collect();
        assert_eq!(r.witnesses, brute);
        assert_eq!(r.witness_total as usize, brute.len());
    }

    #[test]
    fn witness_limit_keeps_smallest() {
        let config = SearchConfig {
            witness_limit: 2,
            threads: Some(3),
            ..SearchConfig::default()
        };
        let limited = Searcher::new(config).unwrap();
        let pattern = set("12", Mode::Unrestricted);
        let full = searcher().max_over_partitions(&pattern, 7, 3).unwrap();
        let r = limited.max_over_partitions(&pattern, 7, 3).unwrap();
        assert_eq!(r.witnesses, full.witnesses[..2].to_vec());
        assert_eq!(r.witness_total, full.witness_total);
    }

    #[test]
    fn results_independent_of_threads() {
        let pattern = set("1212", Mode::Unrestricted);
        let results: Vec<_> = [1, 2, 5, 8]
            .iter()
            .map(|&t| {
                let s = Searcher::new(SearchConfig {
                    threads: Some(t),
                    ..SearchConfig::default()
                })
                .unwrap();
                s.max_over_partitions(&pattern, 9, 9).unwrap()
            })
            .collect();
        assert!(results.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn caps_refuse() {
        let s = Searcher::new(SearchConfig {
            candidate_cap: 100,
            word_cap: 10,
            ..SearchConfig::default()
        })
        .unwrap();
        let err = s.max_over_partitions(&set("121", Mode::Unrestricted), 6, 6).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
        assert!(err.to_string().contains("--unsafe-large"));
        assert!(s.max_over_words(&set("12", Mode::Restricted), 4, 2).is_err());
        assert!(searcher().max_over_partitions(&set("121", Mode::Unrestricted), 21, 3).is_err());
        assert!(matches!(
            searcher().max_over_partitions(&set("1212", Mode::Unrestricted), 3, 3),
            Err(Error::PatternTooLong { .. })
        ));
    }

    #[test]
    fn word_maxima() {
        let s = searcher();
        let r = s.max_over_words(&set("121", Mode::Restricted), 3, 2).unwrap();
        assert_eq!(r.mu, 1);
        assert!(r.witnesses.iter().any(|w| w.letters() == [1, 2, 1]));
        let r = s.max_over_words(&set("111", Mode::Restricted), 4, 1).unwrap();
        assert_eq!(r.mu, 4);
        let words = s.max_over_words(&set("112", Mode::Restricted), 6, 2).unwrap();
        let parts = s.max_over_partitions(&set("112", Mode::Restricted), 6, 2).unwrap();
        assert_eq!(words.mu, 12);
        assert_eq!(parts.mu, 12);
        assert!(s.max_over_words(&set("112", Mode::Unrestricted), 6, 2).is_err());
    }

    #[test]
    fn word_to_partition_examples() {
        let out = word_to_partition(&"2231".parse().unwrap());
        assert_eq!(out, cw("1223"));
        let s112 = set("112", Mode::Restricted);
        assert_eq!(count_restricted(&s112, &[2, 2, 3, 1]).unwrap(), 1);
        assert_eq!(count_restricted(&s112, out.letters()).unwrap(), 1);
        assert_eq!(word_to_partition(&"1231123".parse().unwrap()), cw("1231123"));
        assert_eq!(word_to_partition(&"333".parse().unwrap()), cw("111"));
    }

    #[test]
    fn layered_maxima() {
        let s = searcher();
        let r = s.max_layered(&cw("112"), 6, 6).unwrap();
        assert_eq!(r.result.mu, 12);
        assert!(r.result.witnesses.contains(&cw("111122")));
        assert_eq!(r.direction, Direction::Decreasing);
        assert_eq!(r.exhaustive_agrees, Some(true));
        assert_eq!(r.result.examined, 11);
        let r = s.max_layered(&cw("112"), 3, 3).unwrap();
        assert_eq!((r.result.mu, r.result.witnesses.clone()), (1, vec![cw("112")]));
        for n in 2..=9 {
            let r = s.max_layered(&cw("11"), n, n).unwrap();
            assert_eq!(r.result.mu, binomial(n as u64, 2).unwrap());
            assert_eq!(r.result.primary_witness(), Some(&CanonicalWord::ones(n)));
        }
        assert!(s.max_layered(&cw("121"), 5, 5).is_err());
        assert!(s.max_layered(&cw("111233"), 8, 8).is_err());
    }

    #[test]
    fn layered_agrees_with_exhaustive_for_small_patterns() {
        let s = searcher();
        for p in ["112", "122", "1122", "1123", "1233", "1222", "1112"] {
            for n in 4..=8 {
                let r = s.max_layered(&cw(p), n, n).unwrap();
                assert_eq!(r.exhaustive_agrees, Some(true), "{p} n={n}");
            }
        }
    }

    #[test]
    fn two_block_maxima() {
        let s = searcher();
        let r = s.max_two_block(9).unwrap();
        assert_eq!(r.mu, 30);
        assert!(r.witnesses.contains(&cw("121212121")));
        let r = s.max_two_block(6).unwrap();
        assert_eq!(r.mu, 8);
        assert!(r.witnesses.contains(&cw("121212")));
        let exhaustive = s.max_over_partitions(&set("121", Mode::Unrestricted), 6, 6).unwrap();
        assert_eq!(exhaustive.mu, 8);
        let r = s.max_two_block(3).unwrap();
        assert_eq!((r.mu, r.witnesses.clone()), (1, vec![cw("121")]));
        assert!(s.max_two_block(2).is_err());
    }

    #[test]
    fn swap_examples() {
        let out = swap_adjacent_delta(&cw("121"), 2).unwrap();
        assert_eq!((out.predicted, out.actual, out.swapped.clone()), (-1, -1, cw("112")));
        let out = swap_adjacent_delta(&cw("1221"), 3).unwrap();
        assert_eq!((out.predicted, out.actual, out.swapped.clone()), (0, 0, cw("1212")));
        assert!(swap_adjacent_delta(&cw("1221"), 2).is_err());
        assert!(swap_adjacent_delta(&cw("1231"), 3).is_err());
        assert!(swap_adjacent_delta(&cw("111"), 1).is_err());
    }

    #[test]
    fn swap_prediction_exhaustive() {
        for n in 2..=10 {
            for p in partitions(n, 2).unwrap().filter(|p| p.blocks() == 2) {
                for i in 1..n {
                    if p.letters()[i - 1] == 2 && p.letters()[i] == 1 {
                        let out = swap_adjacent_delta(&p, i).unwrap();
                        assert_eq!(out.predicted, out.actual, "{p} at {i}");
                    }
                }
            }
        }
    }

    #[test]
    fn density_sequences() {
        let s = searcher();
        let seq = s.density_sequence(&set("121", Mode::Unrestricted), 6, KPolicy::Diagonal).unwrap();
        let deltas: Vec<Rational> = seq.rows.iter().map(|r| r.delta).collect();
        assert_eq!(deltas, [ratio(1, 1), ratio(1, 2), ratio(1, 2), ratio(2, 5)]);
        assert_eq!(seq.rows[0].trend, Trend::First);
        assert_eq!(seq.rows[2].trend, Trend::Equal);
        assert!(seq.rows.iter().all(|r| r.engine == SearchSpace::TwoBlock));

        let seq = s.density_sequence(&set("111", Mode::Restricted), 8, KPolicy::Diagonal).unwrap();
        assert!(seq.rows.iter().all(|r| r.delta == ratio(1, 1)));

        let bound = 2.0 * 3f64.sqrt() - 3.0;
        let seq = s.density_sequence(&set("112", Mode::Unrestricted), 9, KPolicy::Diagonal).unwrap();
        assert!(seq.is_nonincreasing());
        assert!(seq.rows.iter().all(|r| crate::ratio::to_f64(&r.delta) >= bound));

        let capped = Searcher::new(SearchConfig {
            candidate_cap: 1000,
            ..SearchConfig::default()
        })
        .unwrap();
        let seq = capped.density_sequence(&set("121", Mode::Restricted), 9, KPolicy::Diagonal).unwrap();
        assert_eq!(seq.rows.last().unwrap().n, 7);
        assert!(seq.truncated.is_some());
    }

    #[test]
    fn block_profile_matches_direct_search() {
        let s = searcher();
        let pattern = set("121", Mode::Unrestricted);
        let profile = s.block_profile(&pattern, 7).unwrap();
        for k in 1..=7 {
            assert_eq!(profile.mu(k), s.max_over_partitions(&pattern, 7, k).unwrap().mu);
        }
    }

    #[test]
    fn proposition_one_small_grid() {
        let s = searcher();
        for p in ["111", "112", "121", "122", "123"] {
            let pattern = set(p, Mode::Restricted);
            for n in 3..=6 {
                for k in 1..=3 {
                    assert_eq!(
                        s.max_over_partitions(&pattern, n, k).unwrap().mu,
                        s.max_over_words(&pattern, n, k).unwrap().mu,
                        "{p} n={n} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn layered_dominance_small() {
        for (p, dir) in [("112", Direction::Decreasing), ("1122", Direction::Increasing)] {
            let pattern = cw(p);
            for n in pattern.len()..=7 {
                for sigma in partitions(n, n).unwrap() {
                    let layered = layered_from_structure(&sigma.block_structure(), dir).unwrap();
                    assert!(
                        count_pattern(pattern.letters(), layered.letters(), Mode::Unrestricted)
                            >= count_pattern(pattern.letters(), sigma.letters(), Mode::Unrestricted),
                        "{p} {sigma}"
                    );
                }
            }
        }
    }

    #[test]
    fn word_to_partition_can_lose_copies_off_the_maximum() {
        let w: Word = "533334".parse().unwrap();
        let out = word_to_partition(&w);
        assert_eq!(out, cw("123111"));
        let s12 = set("12", Mode::Restricted);
        assert_eq!(count_restricted(&s12, w.letters()).unwrap(), 4);
        assert_eq!(count_restricted(&s12, out.letters()).unwrap(), 3);
    }

    #[test]
    fn word_to_partition_keeps_maximizers() {
        for p in ["12", "112", "121", "122", "123", "1212"] {
            let pattern = set(p, Mode::Restricted);
            for n in pattern.m()..=7 {
                for k in 1..=4 {
                    let all: Vec<(Vec<u8>, u64)> = words(n, k)
                        .unwrap()
                        .map(|w| {
                            let c = count_restricted(&pattern, w.letters()).unwrap();
                            (w.letters().to_vec(), c)
                        })
                        .collect();
                    let max = all.iter().map(|(_, c)| *c).max().unwrap();
                    for (w, c) in all.iter().filter(|(_, c)| *c == max) {
                        let out = word_to_partition(&Word::new(w.clone(), k as u8).unwrap());
                        assert!(out.blocks() <= k);
                        assert_eq!(count_restricted(&pattern, out.letters()).unwrap(), *c, "{p} {w:?}");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn word_to_partition_is_canonical(raw in prop::collection::vec(1u8..=5, 1..=9)) {
            let w = Word::from_letters(raw.clone()).unwrap();
            let out = word_to_partition(&w);
            prop_assert_eq!(out.len(), raw.len());
            prop_assert!(crate::word::is_canonical(out.letters()));
            prop_assert!(out.blocks() <= w.alphabet() as usize);
        }

        #[test]
        fn mu_monotone_in_k(n in 3usize..=7, k in 1usize..=6) {
            let s = searcher();
            let pattern = set("121", Mode::Unrestricted);
            prop_assert!(s.max_over_partitions(&pattern, n, k).unwrap().mu
                <= s.max_over_partitions(&pattern, n, k + 1).unwrap().mu);
        }
    }
}
