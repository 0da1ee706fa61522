//! Exhaustive streams over the search spaces: `Π_{n,k}`, `[k]^n`, monotone
//! layered partitions, and the two-block alternating family.
//!
//! Every stream is lexicographic and restartable. The cursor types hand out
//! borrowed letter slices so hot loops do not allocate; the iterator
//! adapters clone into owned words.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{is_canonical, BlockStructure, CanonicalWord, Word};

/// Largest `n` accepted by [`space_size`].
pub const SPACE_SIZE_MAX_N: usize = 20;

/// Streaming enumerator of restricted-growth strings of length `n` with at
/// most `k` blocks that extend a fixed prefix.
#[derive(Debug, Clone)]
pub struct RgsCursor {
    k: u8,
    fixed: usize,
    letters: Vec<u8>,
    running_max: Vec<u8>,
    started: bool,
    done: bool,
}

impl RgsCursor {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        RgsCursor::with_prefix(&[], n, k)
    }

    /// All strings of `Π_{n,k}` starting with `prefix`. A prefix that is
    /// not canonical, uses more than `k` blocks, or is longer than `n`
    /// yields an empty stream.
    pub fn with_prefix(prefix: &[u8], n: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        let k = k.min(u8::MAX as usize) as u8;
        let feasible = prefix.len() <= n
            && is_canonical(prefix)
            && prefix.iter().all(|&x| x <= k);
        let mut letters = prefix.to_vec();
        letters.resize(n, 1);
        let mut running_max = Vec::with_capacity(n);
        let mut max = 0u8;
        for &x in &letters {
            max = max.max(x);
            running_max.push(max);
        }
        Ok(RgsCursor {
            k,
            fixed: prefix.len().max(1),
            letters,
            running_max,
            started: false,
            done: !feasible,
        })
    }

    /// Moves to the next string; false once the stream is exhausted.
    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            return true;
        }
        let n = self.letters.len();
        let mut i = n;
        while i > self.fixed {
            i -= 1;
            let ceiling = (self.running_max[i - 1] + 1).min(self.k);
            if self.letters[i] < ceiling {
                self.letters[i] += 1;
                let max = self.running_max[i - 1].max(self.letters[i]);
                self.running_max[i] = max;
                for j in (i + 1)..n {
                    self.letters[j] = 1;
                    self.running_max[j] = max;
                }
                return true;
            }
        }
        self.done = true;
        false
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// Number of blocks of the current string.
    pub fn blocks(&self) -> u8 {
        self.running_max.last().copied().unwrap_or(0)
    }
}

/// Iterator over `Π_{n,k}` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Partitions {
    cursor: RgsCursor,
}

impl Iterator for Partitions {
    type Item = CanonicalWord;

    fn next(&mut self) -> Option<CanonicalWord> {
        self.cursor
            .advance()
            .then(|| CanonicalWord::from_canonical_unchecked(self.cursor.letters().to_vec()))
    }
}

/// Every partition of `[n]` with at most `k_max` blocks.
pub fn partitions(n: usize, k_max: usize) -> Result<Partitions> {
    Ok(Partitions {
        cursor: RgsCursor::new(n, k_max)?,
    })
}

/// Every partition of `Π_{n,k}` extending `prefix`.
pub fn partitions_with_prefix(prefix: &[u8], n: usize, k_max: usize) -> Result<Partitions> {
    Ok(Partitions {
        cursor: RgsCursor::with_prefix(prefix, n, k_max)?,
    })
}

/// Odometer over `[k]^n` restricted to a fixed prefix.
#[derive(Debug, Clone)]
pub struct WordCursor {
    k: u8,
    fixed: usize,
    letters: Vec<u8>,
    started: bool,
    done: bool,
}

impl WordCursor {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        WordCursor::with_prefix(&[], n, k)
    }

    pub fn with_prefix(prefix: &[u8], n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > u8::MAX as usize {
            return Err(Error::InvalidArgument(format!("alphabet size {k} outside [1,255]")));
        }
        let k = k as u8;
        let feasible = prefix.len() <= n && prefix.iter().all(|&x| (1..=k).contains(&x));
        let mut letters = prefix.to_vec();
        letters.resize(n, 1);
        Ok(WordCursor {
            k,
            fixed: prefix.len(),
            letters,
            started: false,
            done: !feasible,
        })
    }

    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            return true;
        }
        let mut i = self.letters.len();
        while i > self.fixed {
            i -= 1;
            if self.letters[i] < self.k {
                self.letters[i] += 1;
                for x in &mut self.letters[i + 1..] {
                    *x = 1;
                }
                return true;
            }
        }
        self.done = true;
        false
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn alphabet(&self) -> u8 {
        self.k
    }
}

#[derive(Debug, Clone)]
pub struct Words {
    cursor: WordCursor,
}

impl Iterator for Words {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if !self.cursor.advance() {
            return None;
        }
        Some(
            Word::new(self.cursor.letters().to_vec(), self.cursor.alphabet())
                .expect("cursor letters stay inside the alphabet"),
        )
    }
}

/// All `k^n` words of length `n` over `[k]`.
pub fn words(n: usize, k: usize) -> Result<Words> {
    Ok(Words {
        cursor: WordCursor::new(n, k)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// The layered word whose layer sizes, read left to right, are the block
/// structure sorted in `direction`.
pub fn layered_from_structure(structure: &BlockStructure, direction: Direction) -> Result<CanonicalWord> {
    if structure.is_empty() {
        return Err(Error::InvalidArgument("empty block structure".into()));
    }
    if structure.blocks() > u8::MAX as usize {
        return Err(Error::InvalidArgument("more than 255 blocks".into()));
    }
    let mut sizes = structure.sizes().to_vec();
    if direction == Direction::Decreasing {
        sizes.reverse();
    }
    Ok(layered_word(&sizes))
}

fn layered_word(sizes: &[usize]) -> CanonicalWord {
    let mut letters = Vec::with_capacity(sizes.iter().sum());
    for (i, &s) in sizes.iter().enumerate() {
        letters.extend(std::iter::repeat(i as u8 + 1).take(s));
    }
    CanonicalWord::from_canonical_unchecked(letters)
}

/// Integer partitions of `n` into at most `max_parts` parts, each listed
/// nondecreasing.
pub fn integer_partitions(n: usize, max_parts: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, min_part: usize, parts_left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        if parts_left == 0 {
            return;
        }
        for part in min_part..=remaining {
            // the rest must fit into parts no smaller than `part`
            if remaining - part != 0 && remaining - part < part {
                continue;
            }
            cur.push(part);
            rec(remaining - part, part, parts_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    rec(n, 1, max_parts, &mut Vec::new(), &mut out);
    out
}

/// One monotone increasing layered word per integer partition of `n` into
/// at most `k_max` parts, in lexicographic order.
pub fn layered_partitions(n: usize, k_max: usize) -> Result<Vec<CanonicalWord>> {
    if n == 0 {
        return Err(Error::InvalidArgument("layered partitions need n >= 1".into()));
    }
    if k_max == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let mut out: Vec<CanonicalWord> = integer_partitions(n, k_max.min(u8::MAX as usize))
        .iter()
        .map(|sizes| layered_word(sizes))
        .collect();
    out.sort();
    Ok(out)
}

/// Shape `1^{front} (12)^{pairs} [1] 1^{back}` of a two-block word; the
/// bracketed 1 is present unless the alternating run ends in 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TwoBlockShape {
    pub front_ones: usize,
    pub alt_pairs: usize,
    pub alt_ends_in_two: bool,
    pub back_ones: usize,
}

impl TwoBlockShape {
    pub fn new(front_ones: usize, alt_pairs: usize, alt_ends_in_two: bool, back_ones: usize) -> Result<Self> {
        if alt_ends_in_two && back_ones != 0 {
            return Err(Error::InvalidArgument(
                "an alternating run ending in 2 cannot be followed by ones".into(),
            ));
        }
        Ok(TwoBlockShape {
            front_ones,
            alt_pairs,
            alt_ends_in_two,
            back_ones,
        })
    }

    pub fn len(&self) -> usize {
        self.front_ones + 2 * self.alt_pairs + usize::from(!self.alt_ends_in_two) + self.back_ones
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// No ones outside the alternating run.
    pub fn is_unpadded(&self) -> bool {
        self.front_ones == 0 && self.back_ones == 0
    }

    pub fn realize(&self) -> CanonicalWord {
        let mut letters = vec![1u8; self.front_ones];
        for _ in 0..self.alt_pairs {
            letters.extend_from_slice(&[1, 2]);
        }
        if !self.alt_ends_in_two {
            letters.push(1);
        }
        letters.extend(std::iter::repeat(1).take(self.back_ones));
        crate::word::canonize(&letters)
    }
}

impl fmt::Display for TwoBlockShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "1^{} (12)^{}{} 1^{}",
            self.front_ones,
            self.alt_pairs,
            if self.alt_ends_in_two { "" } else { " 1" },
            self.back_ones
        )
    }
}

/// Every two-block shape of total length `n`.
pub fn two_block_shapes(n: usize) -> Vec<TwoBlockShape> {
    let mut out = Vec::new();
    for pairs in 0..=n / 2 {
        out.push(TwoBlockShape {
            front_ones: n - 2 * pairs,
            alt_pairs: pairs,
            alt_ends_in_two: true,
            back_ones: 0,
        });
        if 2 * pairs < n {
            let rest = n - 2 * pairs - 1;
            for front in 0..=rest {
                out.push(TwoBlockShape {
                    front_ones: front,
                    alt_pairs: pairs,
                    alt_ends_in_two: false,
                    back_ones: rest - front,
                });
            }
        }
    }
    out
}

/// Realizations of every two-block shape of length `n`, deduplicated and
/// sorted.
pub fn two_block_candidates(n: usize) -> Result<Vec<CanonicalWord>> {
    if n == 0 {
        return Err(Error::InvalidArgument("two-block candidates need n >= 1".into()));
    }
    let mut out: Vec<CanonicalWord> = two_block_shapes(n).iter().map(TwoBlockShape::realize).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// `|Π_{n,k}|` from the Stirling recurrence `S(i,j) = j S(i-1,j) + S(i-1,j-1)`.
pub fn space_size(n: usize, k_max: usize) -> Result<u64> {
    if n > SPACE_SIZE_MAX_N {
        return Err(Error::InvalidArgument(format!(
            "space_size supports n <= {SPACE_SIZE_MAX_N}, got {n}"
        )));
    }
    let mut row = vec![0u64; n + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=i).rev() {
            row[j] = (j as u64)
                .checked_mul(row[j])
                .and_then(|x| x.checked_add(row[j - 1]))
                .ok_or(Error::Overflow("space_size"))?;
        }
        row[0] = 0;
    }
    Ok(row.iter().take(k_max.min(n) + 1).sum())
}
