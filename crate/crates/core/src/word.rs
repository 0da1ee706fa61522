//! Set partitions as restricted-growth strings, plain words over `[k]`, and
//! the structural transforms used throughout the crate.
//!
//! Letters are 1-based block indices stored as `u8`, so a partition may have
//! at most 255 blocks. Words print as digit strings when every letter is at
//! most 9 and as comma-separated integers otherwise; both syntaxes parse.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A set partition encoded as its restricted-growth string.
///
/// The first letter is 1 and every letter is at most one more than the
/// maximum of the letters before it. The maximum letter is the number of
/// blocks.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CanonicalWord(Vec<u8>);

/// A word over the alphabet `[k]` with no growth condition.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<u8>,
    alphabet: u8,
}

/// Containment sense for pattern occurrences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Subsequence order-isomorphic to the pattern.
    Restricted,
    /// Subsequence whose canonization equals the pattern.
    Unrestricted,
}

/// A nonempty set of distinct canonical patterns of one common length,
/// counted in a single [`Mode`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatternSet {
    patterns: Vec<CanonicalWord>,
    mode: Mode,
}

/// The multiset of block sizes of a partition, sorted nondecreasing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BlockStructure(Vec<usize>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Layering {
    NotLayered,
    LayeredOnly,
    MonotoneIncreasing,
    MonotoneDecreasing,
}

impl Layering {
    pub fn is_layered(self) -> bool {
        self != Layering::NotLayered
    }

    pub fn is_monotone(self) -> bool {
        matches!(self, Layering::MonotoneIncreasing | Layering::MonotoneDecreasing)
    }
}

fn parse_err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

/// Parses either the digit syntax (`1231123`) or the comma syntax
/// (`1,2,10,3`). Positions in errors are 1-based character columns.
pub fn parse_letters(s: &str) -> Result<Vec<u8>> {
    let s = s.trim();
    if s.contains(',') {
        let mut letters = Vec::new();
        let mut column = 1;
        for item in s.split(',') {
            let trimmed = item.trim();
            let offset = item.len() - item.trim_start().len();
            let value: u32 = trimmed.parse().map_err(|_| {
                parse_err(column + offset, format!("expected a positive integer, found {trimmed:?}"))
            })?;
            if value == 0 || value > u32::from(u8::MAX) {
                return Err(parse_err(
                    column + offset,
                    format!("letter {value} outside [1,{}]", u8::MAX),
                ));
            }
            letters.push(value as u8);
            column += item.chars().count() + 1;
        }
        Ok(letters)
    } else {
        s.chars()
            .enumerate()
            .map(|(i, c)| match c.to_digit(10) {
                Some(d) if d >= 1 => Ok(d as u8),
                Some(_) => Err(parse_err(i + 1, "letter 0 is not allowed; letters start at 1")),
                None => Err(parse_err(i + 1, format!("unexpected character {c:?}"))),
            })
            .collect()
    }
}

fn format_letters(letters: &[u8], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if letters.iter().all(|&x| x <= 9) {
        for &x in letters {
            write!(f, "{x}")?;
        }
        Ok(())
    } else {
        for (i, &x) in letters.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// True iff `letters` is a restricted-growth string.
pub fn is_canonical(letters: &[u8]) -> bool {
    let mut max = 0u8;
    for &x in letters {
        if x == 0 || x > max.saturating_add(1) {
            return false;
        }
        max = max.max(x);
    }
    true
}

/// Relabels letters by order of first occurrence.
pub fn canonize(letters: &[u8]) -> CanonicalWord {
    let mut relabel = [0u8; 256];
    let mut next = 0u8;
    let out = letters
        .iter()
        .map(|&x| {
            let slot = &mut relabel[x as usize];
            if *slot == 0 {
                next += 1;
                *slot = next;
            }
            *slot
        })
        .collect();
    CanonicalWord(out)
}

/// `u_i <= u_j` iff `w_i <= w_j` for every pair of positions.
pub fn is_order_isomorphic(u: &[u8], w: &[u8]) -> Result<bool> {
    if u.len() != w.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: w.len(),
        });
    }
    for i in 0..u.len() {
        for j in (i + 1)..u.len() {
            if u[i].cmp(&u[j]) != w[i].cmp(&w[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl CanonicalWord {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if is_canonical(&letters) {
            Ok(CanonicalWord(letters))
        } else {
            Err(Error::NotCanonical(Word::from_letters(letters)?.to_string()))
        }
    }

    /// Wraps letters already known to be canonical.
    pub(crate) fn from_canonical_unchecked(letters: Vec<u8>) -> Self {
        debug_assert!(is_canonical(&letters));
        CanonicalWord(letters)
    }

    pub fn empty() -> Self {
        CanonicalWord(Vec::new())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn blocks(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0) as usize
    }

    pub fn into_word(self) -> Word {
        let alphabet = self.blocks().max(1) as u8;
        Word {
            letters: self.0,
            alphabet,
        }
    }

    /// `1^n`, the single-block partition.
    pub fn ones(n: usize) -> Self {
        CanonicalWord(vec![1; n])
    }

    /// `12...n`, the partition into singletons. Requires `n <= 255`.
    pub fn singletons(n: usize) -> Result<Self> {
        if n > u8::MAX as usize {
            return Err(Error::InvalidArgument(format!("{n} blocks exceed 255")));
        }
        Ok(CanonicalWord((1..=n as u8).collect()))
    }

    /// The alternating two-block partition `1212...` of length `n`.
    pub fn alternating(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("alternating word needs n >= 1".into()));
        }
        Ok(CanonicalWord((0..n).map(|i| if i % 2 == 0 { 1 } else { 2 }).collect()))
    }

    /// Builds the word of a partition given as blocks of 1-based elements.
    /// Blocks may be listed in any order; they are numbered by their minima.
    pub fn from_blocks<B: AsRef<[usize]>>(blocks: &[B]) -> Result<Self> {
        let n: usize = blocks.iter().map(|b| b.as_ref().len()).sum();
        if blocks.len() > u8::MAX as usize {
            return Err(Error::NotAPartition(format!("{} blocks exceed 255", blocks.len())));
        }
        let mut order: Vec<(usize, &[usize])> = Vec::with_capacity(blocks.len());
        for b in blocks {
            let b = b.as_ref();
            let min = *b
                .iter()
                .min()
                .ok_or_else(|| Error::NotAPartition("empty block".into()))?;
            order.push((min, b));
        }
        order.sort_by_key(|&(min, _)| min);
        let mut letters = vec![0u8; n];
        for (label, (_, block)) in order.iter().enumerate() {
            for &element in block.iter() {
                if element == 0 || element > n {
                    return Err(Error::NotAPartition(format!(
                        "element {element} outside [1,{n}]"
                    )));
                }
                let slot = &mut letters[element - 1];
                if *slot != 0 {
                    return Err(Error::NotAPartition(format!(
                        "element {element} appears more than once"
                    )));
                }
                *slot = label as u8 + 1;
            }
        }
        // n elements placed without repeats inside [1,n] covers [n]
        Ok(CanonicalWord(letters))
    }

    /// Blocks of 1-based elements, ordered by minima, each sorted.
    pub fn to_blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.blocks()];
        for (i, &x) in self.0.iter().enumerate() {
            blocks[x as usize - 1].push(i + 1);
        }
        blocks
    }

    /// Slash notation, e.g. `145/26/37`. Elements above 9 are comma-joined.
    pub fn blocks_notation(&self) -> String {
        let wide = self.0.len() > 9;
        self.to_blocks()
            .iter()
            .map(|b| {
                let parts: Vec<String> = b.iter().map(|e| e.to_string()).collect();
                parts.join(if wide { "," } else { "" })
            })
            .collect::<Vec<_>>()
            .join("/")
    }

    /// Canonization of the letter reversal.
    pub fn reverse_canonize(&self) -> CanonicalWord {
        let reversed: Vec<u8> = self.0.iter().rev().copied().collect();
        canonize(&reversed)
    }

    pub fn block_structure(&self) -> BlockStructure {
        let mut sizes = vec![0usize; self.blocks()];
        for &x in &self.0 {
            sizes[x as usize - 1] += 1;
        }
        BlockStructure::from_sizes(sizes)
    }

    /// Sizes of blocks 1, 2, ..., k in label order.
    pub fn block_sizes_in_order(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.blocks()];
        for &x in &self.0 {
            sizes[x as usize - 1] += 1;
        }
        sizes
    }

    /// Layered means weakly increasing letters. Words that are monotone in
    /// both directions (including single-block and empty words) report
    /// [`Layering::MonotoneIncreasing`].
    pub fn layering(&self) -> Layering {
        if self.0.windows(2).any(|w| w[0] > w[1]) {
            return Layering::NotLayered;
        }
        let sizes = self.block_sizes_in_order();
        if sizes.windows(2).all(|w| w[0] <= w[1]) {
            Layering::MonotoneIncreasing
        } else if sizes.windows(2).all(|w| w[0] >= w[1]) {
            Layering::MonotoneDecreasing
        } else {
            Layering::LayeredOnly
        }
    }
}

impl AsRef<[u8]> for CanonicalWord {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for CanonicalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_letters(&self.0, f)
    }
}

impl fmt::Debug for CanonicalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalWord({self})")
    }
}

impl FromStr for CanonicalWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = parse_letters(s)?;
        let mut max = 0u8;
        for (i, &x) in letters.iter().enumerate() {
            if x > max.saturating_add(1) {
                return Err(parse_err(
                    i + 1,
                    format!("letter {x} at index {} breaks the restricted-growth condition", i + 1),
                ));
            }
            max = max.max(x);
        }
        Ok(CanonicalWord(letters))
    }
}

impl Serialize for CanonicalWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Word {
    pub fn new(letters: Vec<u8>, alphabet: u8) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::InvalidArgument("alphabet size must be at least 1".into()));
        }
        if let Some(&bad) = letters.iter().find(|&&x| x == 0 || x > alphabet) {
            return Err(Error::LetterOutOfRange {
                letter: u32::from(bad),
                alphabet: u32::from(alphabet),
            });
        }
        Ok(Word { letters, alphabet })
    }

    /// Uses the largest letter as the alphabet bound.
    pub fn from_letters(letters: Vec<u8>) -> Result<Self> {
        let alphabet = letters.iter().copied().max().unwrap_or(1);
        Word::new(letters, alphabet)
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        is_canonical(&self.letters)
    }

    pub fn canonize(&self) -> CanonicalWord {
        canonize(&self.letters)
    }

    /// Reads the word as a partition when it is already canonical.
    pub fn to_canonical(&self) -> Option<CanonicalWord> {
        self.is_canonical()
            .then(|| CanonicalWord(self.letters.clone()))
    }
}

impl AsRef<[u8]> for Word {
    fn as_ref(&self) -> &[u8] {
        &self.letters
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_letters(&self.letters, f)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self} over [{}])", self.alphabet)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::from_letters(parse_letters(s)?)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl From<CanonicalWord> for Word {
    fn from(w: CanonicalWord) -> Self {
        w.into_word()
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Restricted => "restricted",
            Mode::Unrestricted => "unrestricted",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "restricted" | "r" => Ok(Mode::Restricted),
            "unrestricted" | "u" => Ok(Mode::Unrestricted),
            other => Err(Error::InvalidArgument(format!("unknown mode {other:?}"))),
        }
    }
}

impl PatternSet {
    /// Patterns are stored sorted; duplicates, mixed lengths and empty
    /// patterns are rejected.
    pub fn new(mut patterns: Vec<CanonicalWord>, mode: Mode) -> Result<Self> {
        let Some(first) = patterns.first() else {
            return Err(Error::InvalidPatternSet("no patterns given".into()));
        };
        let m = first.len();
        if m == 0 {
            return Err(Error::InvalidPatternSet("patterns must be nonempty".into()));
        }
        if let Some(p) = patterns.iter().find(|p| p.len() != m) {
            return Err(Error::InvalidPatternSet(format!(
                "pattern {p} has length {} but {first} has length {m}",
                p.len()
            )));
        }
        patterns.sort();
        if let Some(w) = patterns.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidPatternSet(format!("pattern {} repeated", w[0])));
        }
        Ok(PatternSet { patterns, mode })
    }

    pub fn single(pattern: CanonicalWord, mode: Mode) -> Result<Self> {
        PatternSet::new(vec![pattern], mode)
    }

    /// Parses each pattern string; a convenience for tests and the CLI.
    pub fn parse<S: AsRef<str>>(patterns: &[S], mode: Mode) -> Result<Self> {
        let parsed = patterns
            .iter()
            .map(|s| s.as_ref().parse())
            .collect::<Result<Vec<CanonicalWord>>>()?;
        PatternSet::new(parsed, mode)
    }

    pub fn patterns(&self) -> &[CanonicalWord] {
        &self.patterns
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Common pattern length.
    pub fn m(&self) -> usize {
        self.patterns[0].len()
    }

    pub fn with_mode(&self, mode: Mode) -> PatternSet {
        PatternSet {
            patterns: self.patterns.clone(),
            mode,
        }
    }

    /// The lone pattern of a singleton set.
    pub fn as_single(&self) -> Option<&CanonicalWord> {
        match self.patterns.as_slice() {
            [p] => Some(p),
            _ => None,
        }
    }

    /// Stable textual key, e.g. `112+121`.
    pub fn key(&self) -> String {
        self.patterns
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join("+")
    }
}

impl fmt::Display for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}} ({})", self.key().replace('+', ", "), self.mode)
    }
}

impl BlockStructure {
    pub fn from_sizes(sizes: impl IntoIterator<Item = usize>) -> Self {
        let mut sizes: Vec<usize> = sizes.into_iter().filter(|&s| s > 0).collect();
        sizes.sort_unstable();
        BlockStructure(sizes)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn blocks(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for BlockStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cw(s: &str) -> CanonicalWord {
        s.parse().unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(w("1231123").is_canonical());
        assert!(!w("2231").is_canonical());
        assert!(is_canonical(&[]));
        assert!(!is_canonical(&[1, 3]));
    }

    #[test]
    fn canonize_examples() {
        assert_eq!(w("3471344574").canonize(), cw("1234122532"));
        assert_eq!(w("111").canonize(), cw("111"));
        assert_eq!(w("2221").canonize(), cw("1112"));
    }

    #[test]
    fn blocks_round_trip() {
        let p = CanonicalWord::from_blocks(&[vec![1, 4, 5], vec![2, 6], vec![3, 7]]).unwrap();
        assert_eq!(p, cw("1231123"));
        assert_eq!(p.blocks_notation(), "145/26/37");
        assert_eq!(
            CanonicalWord::from_blocks(&[vec![1], vec![2], vec![3]]).unwrap(),
            cw("123")
        );
        assert_eq!(CanonicalWord::from_blocks(&[vec![1, 2, 3]]).unwrap(), cw("111"));
        assert_eq!(cw("111").to_blocks(), vec![vec![1, 2, 3]]);
        assert_eq!(cw("12").to_blocks(), vec![vec![1], vec![2]]);
        // listed out of order, same partition
        assert_eq!(
            CanonicalWord::from_blocks(&[vec![3, 7], vec![5, 4, 1], vec![2, 6]]).unwrap(),
            cw("1231123")
        );
    }

    #[test]
    fn from_blocks_rejects_non_partitions() {
        assert!(CanonicalWord::from_blocks(&[vec![1, 2], vec![2]]).is_err());
        assert!(CanonicalWord::from_blocks(&[vec![1], vec![3]]).is_err());
        assert!(CanonicalWord::from_blocks(&[vec![1], vec![]]).is_err());
        assert!(CanonicalWord::from_blocks(&[vec![0, 1]]).is_err());
    }

    #[test]
    fn order_isomorphism() {
        assert!(is_order_isomorphic(&[2, 3, 2], &[1, 2, 1]).unwrap());
        assert!(!is_order_isomorphic(&[2, 1, 2], &[1, 2, 1]).unwrap());
        assert!(is_order_isomorphic(&[3, 1, 4], &[3, 1, 4]).unwrap());
        assert!(is_order_isomorphic(&[1, 2], &[1, 2, 3]).is_err());
    }

    #[test]
    fn reverse() {
        assert_eq!(cw("112").reverse_canonize(), cw("122"));
        assert_eq!(cw("111").reverse_canonize(), cw("111"));
        assert_eq!(cw("1212").reverse_canonize(), cw("1212"));
    }

    #[test]
    fn block_structures() {
        assert_eq!(cw("1121222333").block_structure().sizes(), &[3, 3, 4]);
        assert_eq!(cw("123").block_structure().sizes(), &[1, 1, 1]);
        assert_eq!(cw("1231123").block_structure().sizes(), &[2, 2, 3]);
        assert_eq!(cw("1121222333").block_structure().to_string(), "{3,3,4}");
    }

    #[test]
    fn layering() {
        assert_eq!(cw("1112223").layering(), Layering::MonotoneDecreasing);
        assert_eq!(cw("111233").layering(), Layering::LayeredOnly);
        assert_eq!(cw("122113").layering(), Layering::NotLayered);
        assert_eq!(cw("1111").layering(), Layering::MonotoneIncreasing);
        assert_eq!(CanonicalWord::empty().layering(), Layering::MonotoneIncreasing);
        assert_eq!(cw("1122").layering(), Layering::MonotoneIncreasing);
        assert_eq!(cw("112").layering(), Layering::MonotoneDecreasing);
        assert_eq!(cw("122").layering(), Layering::MonotoneIncreasing);
    }

    #[test]
    fn alternating_words() {
        assert_eq!(CanonicalWord::alternating(5).unwrap(), cw("12121"));
        assert_eq!(CanonicalWord::alternating(4).unwrap(), cw("1212"));
        assert_eq!(CanonicalWord::alternating(1).unwrap(), cw("1"));
        assert!(CanonicalWord::alternating(0).is_err());
    }

    #[test]
    fn parsing_and_display() {
        let wide = cw("1,2,3,4,5,6,7,8,9,10,1");
        assert_eq!(wide.to_string(), "1,2,3,4,5,6,7,8,9,10,1");
        assert_eq!(wide.blocks(), 10);
        match "12a".parse::<CanonicalWord>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 3),
            other => panic!("unexpected {other:?}"),
        }
        match "1213".parse::<CanonicalWord>() {
            Ok(_) => {}
            other => panic!("unexpected {other:?}"),
        }
        match "1231523".parse::<CanonicalWord>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("unexpected {other:?}"),
        }
        match "1, 2,x".parse::<Word>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!("102".parse::<Word>().is_err());
        assert_eq!("".parse::<CanonicalWord>().unwrap(), CanonicalWord::empty());
    }

    #[test]
    fn pattern_sets() {
        let set = PatternSet::parse(&["121", "112"], Mode::Unrestricted).unwrap();
        assert_eq!(set.key(), "112+121");
        assert_eq!(set.m(), 3);
        assert!(PatternSet::parse(&["121", "121"], Mode::Restricted).is_err());
        assert!(PatternSet::parse(&["121", "11"], Mode::Restricted).is_err());
        assert!(PatternSet::parse::<&str>(&[], Mode::Restricted).is_err());
        assert!(PatternSet::parse(&[""], Mode::Restricted).is_err());
    }

    #[test]
    fn word_alphabet_bound() {
        assert!(Word::new(vec![1, 3], 2).is_err());
        assert_eq!(Word::new(vec![1, 2], 4).unwrap().alphabet(), 4);
    }

    fn any_word() -> impl Strategy<Value = Vec<u8>> {
        prop::collection::vec(1u8..=6, 0..12)
    }

    fn any_canonical() -> impl Strategy<Value = CanonicalWord> {
        any_word().prop_map(|w| canonize(&w))
    }

    proptest! {
        #[test]
        fn canonize_is_idempotent(word in any_word()) {
            let once = canonize(&word);
            prop_assert!(is_canonical(once.letters()));
            prop_assert_eq!(canonize(once.letters()), once);
        }

        #[test]
        fn blocks_invert(p in any_canonical()) {
            let blocks = p.to_blocks();
            prop_assert_eq!(CanonicalWord::from_blocks(&blocks).unwrap(), p);
        }

        #[test]
        fn reverse_is_involution(p in any_canonical()) {
            prop_assert_eq!(p.reverse_canonize().reverse_canonize(), p);
        }

        // Order isomorphism determines the canonization class; the converse
        // fails (12 and 21 canonize alike).
        #[test]
        fn order_isomorphic_implies_same_canonization(
            u in prop::collection::vec(1u8..=4, 5),
            w in prop::collection::vec(1u8..=4, 5),
        ) {
            if is_order_isomorphic(&u, &w).unwrap() {
                prop_assert_eq!(canonize(&u), canonize(&w));
            }
        }

        #[test]
        fn layered_iff_weakly_increasing(p in any_canonical()) {
            let increasing = p.letters().windows(2).all(|w| w[0] <= w[1]);
            prop_assert_eq!(p.layering().is_layered(), increasing);
        }

        #[test]
        fn display_parses_back(p in any_canonical()) {
            prop_assert_eq!(p.to_string().parse::<CanonicalWord>().unwrap(), p);
        }
    }

    #[test]
    fn order_isomorphism_is_strictly_finer() {
        assert_eq!(canonize(&[1, 2]), canonize(&[2, 1]));
        assert!(!is_order_isomorphic(&[1, 2], &[2, 1]).unwrap());
    }
}
