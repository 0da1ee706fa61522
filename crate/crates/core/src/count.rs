//! Occurrence counting `ν_r(S,t)`, `ν(S,t)` and the densities `d_r`, `d`.
//!
//! Counting walks the `C(n,m)` index subsets depth first and abandons a
//! branch as soon as the chosen prefix can no longer match the pattern
//! prefix. Both senses are prefix-closed: a subsequence prefix canonizes to
//! the pattern prefix (resp. is order-isomorphic to it) whenever the whole
//! subsequence does.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ratio::{binomial, ratio, render, Rational};
use crate::word::{CanonicalWord, Mode, PatternSet};

/// 1-based, strictly increasing positions of one occurrence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Occurrence {
    pub indices: Vec<usize>,
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `ν / C(n,m)` kept exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityValue {
    pub numerator: u64,
    pub denominator: u64,
    #[serde(serialize_with = "serialize_ratio")]
    pub value: Rational,
}

pub(crate) fn serialize_ratio<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&render(r))
}

impl DensityValue {
    pub fn new(numerator: u64, denominator: u64) -> Self {
        DensityValue {
            numerator,
            denominator,
            value: ratio(numerator, denominator),
        }
    }
}

impl fmt::Display for DensityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} = {}", self.numerator, self.denominator, render(&self.value))
    }
}

trait Sink {
    fn hit(&mut self, indices: &[usize]);
}

struct Tally(u64);

impl Sink for Tally {
    #[inline]
    fn hit(&mut self, _: &[usize]) {
        self.0 += 1;
    }
}

struct Collect(Vec<Occurrence>);

impl Sink for Collect {
    fn hit(&mut self, indices: &[usize]) {
        self.0.push(Occurrence {
            indices: indices.iter().map(|i| i + 1).collect(),
        });
    }
}

struct Matcher<'a, S> {
    pattern: &'a [u8],
    target: &'a [u8],
    mode: Mode,
    // unrestricted: pattern letter -> target letter, and the reverse marks
    image: [u8; 256],
    taken: [bool; 256],
    // restricted: target values chosen so far
    chosen: Vec<u8>,
    indices: Vec<usize>,
    sink: S,
}

impl<'a, S: Sink> Matcher<'a, S> {
    fn new(pattern: &'a [u8], target: &'a [u8], mode: Mode, sink: S) -> Self {
        Matcher {
            pattern,
            target,
            mode,
            image: [0; 256],
            taken: [false; 256],
            chosen: Vec::with_capacity(pattern.len()),
            indices: Vec::with_capacity(pattern.len()),
            sink,
        }
    }

    fn run(mut self, end: usize) -> S {
        if self.pattern.len() <= end {
            self.descend(0, end);
        }
        self.sink
    }

    /// Index sets drawn from `[start, end)`.
    fn descend(&mut self, start: usize, end: usize) {
        let depth = self.indices.len();
        let m = self.pattern.len();
        if depth == m {
            self.sink.hit(&self.indices);
            return;
        }
        let last = end - (m - depth);
        let q = self.pattern[depth];
        for j in start..=last {
            let x = self.target[j];
            match self.mode {
                Mode::Unrestricted => {
                    let mapped = self.image[q as usize];
                    if mapped != 0 {
                        if mapped != x {
                            continue;
                        }
                        self.indices.push(j);
                        self.descend(j + 1, end);
                        self.indices.pop();
                    } else {
                        // q is the next new pattern letter; x must be fresh too
                        if self.taken[x as usize] {
                            continue;
                        }
                        self.image[q as usize] = x;
                        self.taken[x as usize] = true;
                        self.indices.push(j);
                        self.descend(j + 1, end);
                        self.indices.pop();
                        self.image[q as usize] = 0;
                        self.taken[x as usize] = false;
                    }
                }
                Mode::Restricted => {
                    let consistent = self
                        .chosen
                        .iter()
                        .zip(self.pattern)
                        .all(|(&c, &pc)| x.cmp(&c) == q.cmp(&pc));
                    if !consistent {
                        continue;
                    }
                    self.chosen.push(x);
                    self.indices.push(j);
                    self.descend(j + 1, end);
                    self.indices.pop();
                    self.chosen.pop();
                }
            }
        }
    }
}

fn check_lengths(m: usize, n: usize) -> Result<()> {
    if m > n {
        Err(Error::PatternTooLong { m, n })
    } else {
        Ok(())
    }
}

/// Occurrences of a single pattern in the given sense. Returns zero when the
/// pattern is longer than the target.
pub fn count_pattern(pattern: &[u8], target: &[u8], mode: Mode) -> u64 {
    Matcher::new(pattern, target, mode, Tally(0)).run(target.len()).0
}

fn count_in_mode(set: &PatternSet, target: &[u8], mode: Mode) -> Result<u64> {
    check_lengths(set.m(), target.len())?;
    Ok(set
        .patterns()
        .iter()
        .map(|p| count_pattern(p.letters(), target, mode))
        .sum())
}

/// Occurrences of patterns from `set` in `target`, in the set's own mode.
pub fn count(set: &PatternSet, target: &[u8]) -> Result<u64> {
    count_in_mode(set, target, set.mode())
}

/// `ν_r(S,t)`: order-isomorphic subsequences. `target` may be any word.
pub fn count_restricted(set: &PatternSet, target: &[u8]) -> Result<u64> {
    count_in_mode(set, target, Mode::Restricted)
}

/// `ν(S,t)`: subsequences canonizing to a pattern of `set`.
pub fn count_unrestricted(set: &PatternSet, target: &CanonicalWord) -> Result<u64> {
    count_in_mode(set, target.letters(), Mode::Unrestricted)
}

/// All occurrences in the set's mode, sorted by index tuple.
pub fn occurrences(set: &PatternSet, target: &[u8]) -> Result<Vec<Occurrence>> {
    check_lengths(set.m(), target.len())?;
    let mut all = Vec::new();
    for p in set.patterns() {
        let Collect(found) = Matcher::new(p.letters(), target, set.mode(), Collect(Vec::new())).run(target.len());
        all.extend(found);
    }
    all.sort();
    Ok(all)
}

/// Occurrences whose last index is the final position of `target`.
///
/// Computed by filtering the occurrence list; truncating a canonical word
/// and recounting is not equivalent since the truncation may not be
/// canonical.
pub fn count_with_last(pattern: &CanonicalWord, target: &CanonicalWord, mode: Mode) -> Result<u64> {
    let set = PatternSet::single(pattern.clone(), mode)?;
    let n = target.len();
    Ok(occurrences(&set, target.letters())?
        .iter()
        .filter(|o| o.indices.last() == Some(&n))
        .count() as u64)
}

/// `d(S,t) = ν(S,t) / C(n,m)` in the set's mode.
pub fn density(set: &PatternSet, target: &[u8]) -> Result<DensityValue> {
    let numerator = count(set, target)?;
    let denominator = binomial(target.len() as u64, set.m() as u64)?;
    Ok(DensityValue::new(numerator, denominator))
}

/// Reusable counter for hot loops: no length checks, no allocation per call.
#[derive(Debug, Clone)]
pub struct Counter {
    patterns: Vec<Vec<u8>>,
    mode: Mode,
}

impl Counter {
    pub fn new(set: &PatternSet) -> Self {
        Counter {
            patterns: set.patterns().iter().map(|p| p.letters().to_vec()).collect(),
            mode: set.mode(),
        }
    }

    #[inline]
    pub fn count(&self, target: &[u8]) -> u64 {
        self.patterns
            .iter()
            .map(|p| count_pattern(p, target, self.mode))
            .sum()
    }
}
