//! Search results against oracles that share no code with the library:
//! partitions are generated as block lists and copies are found by testing
//! every index subset.

use std::collections::BTreeSet;

use partpack_core::closedform::alternating_count_exact;
use partpack_core::enumerate::space_size;
use partpack_core::search::KPolicy;
use partpack_core::{CanonicalWord, Mode, PatternSet, SearchConfig, Searcher};
use proptest::prelude::*;

/// Every set partition of `[n]`, as letter vectors labelled by block minima.
fn set_partitions(n: usize) -> Vec<Vec<u8>> {
    fn rec(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<u8>>) {
        if i == n {
            let mut word = vec![0u8; n];
            for (b, block) in blocks.iter().enumerate() {
                for &x in block {
                    word[x] = b as u8 + 1;
                }
            }
            out.push(word);
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            rec(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        rec(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

fn canon(s: &[u8]) -> Vec<u8> {
    let mut seen: Vec<u8> = Vec::new();
    s.iter()
        .map(|x| match seen.iter().position(|y| y == x) {
            Some(i) => i as u8 + 1,
            None => {
                seen.push(*x);
                seen.len() as u8
            }
        })
        .collect()
}

fn order_iso(a: &[u8], b: &[u8]) -> bool {
    (0..a.len()).all(|i| (0..a.len()).all(|j| a[i].cmp(&a[j]) == b[i].cmp(&b[j])))
}

fn copies(p: &[u8], w: &[u8], restricted: bool) -> u64 {
    let (m, n) = (p.len(), w.len());
    (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == m)
        .filter(|mask| {
            let sub: Vec<u8> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| w[i]).collect();
            if restricted {
                order_iso(&sub, p)
            } else {
                canon(&sub) == p
            }
        })
        .count() as u64
}

fn blocks(w: &[u8]) -> usize {
    w.iter().copied().max().unwrap_or(0) as usize
}

fn oracle_mu(p: &str, n: usize, k: usize, restricted: bool) -> (u64, BTreeSet<Vec<u8>>) {
    let p: Vec<u8> = p.bytes().map(|b| b - b'0').collect();
    let scored: Vec<(Vec<u8>, u64)> = set_partitions(n)
        .into_iter()
        .filter(|w| blocks(w) <= k)
        .map(|w| {
            let c = copies(&p, &w, restricted);
            (w, c)
        })
        .collect();
    let mu = scored.iter().map(|(_, c)| *c).max().unwrap();
    let argmax = scored.into_iter().filter(|(_, c)| *c == mu).map(|(w, _)| w).collect();
    (mu, argmax)
}

fn searcher() -> Searcher {
    Searcher::new(SearchConfig::default()).unwrap()
}

#[test]
fn bell_numbers() {
    let bell = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140, 21147];
    for (n, &b) in bell.iter().enumerate().skip(1) {
        assert_eq!(set_partitions(n).len() as u64, b);
        assert_eq!(space_size(n, n).unwrap(), b);
    }
}

#[test]
fn exhaustive_search_matches_oracle() {
    let s = searcher();
    let patterns = ["111", "112", "121", "122", "123", "1212", "1122", "1213", "1231"];
    for p in patterns {
        for (mode, restricted) in [(Mode::Restricted, true), (Mode::Unrestricted, false)] {
            let set = PatternSet::parse(&[p], mode).unwrap();
            for n in p.len()..=8 {
                for k in [2, 3, n] {
                    let (mu, argmax) = oracle_mu(p, n, k, restricted);
                    let r = s.max_over_partitions(&set, n, k).unwrap();
                    assert_eq!(r.mu, mu, "{p} {mode} n={n} k={k}");
                    let got: Vec<Vec<u8>> = r.witnesses.iter().map(|w| w.letters().to_vec()).collect();
                    let limit = SearchConfig::default().witness_limit;
                    let want: Vec<Vec<u8>> = argmax.iter().take(limit).cloned().collect();
                    assert_eq!(got, want, "{p} {mode} n={n} k={k}");
                    assert_eq!(r.witness_total as usize, argmax.len());
                }
            }
        }
    }
}

#[test]
fn pattern_sets_add_up() {
    let s = searcher();
    let set = PatternSet::parse(&["112", "121"], Mode::Unrestricted).unwrap();
    for n in 3..=8 {
        let mu = set_partitions(n)
            .iter()
            .map(|w| copies(&[1, 1, 2], w, false) + copies(&[1, 2, 1], w, false))
            .max()
            .unwrap();
        assert_eq!(s.max_over_partitions(&set, n, n).unwrap().mu, mu, "n={n}");
    }
}

#[test]
fn restricted_maxima_sequences() {
    let s = searcher();
    let expect = [
        ("112", [1u64, 3, 6, 12, 20, 31, 46]),
        ("121", [1u64, 2, 4, 8, 13, 19, 28]),
    ];
    for (p, values) in expect {
        let set = PatternSet::parse(&[p], Mode::Restricted).unwrap();
        let got: Vec<u64> = (3..=9).map(|n| s.max_over_partitions(&set, n, n).unwrap().mu).collect();
        assert_eq!(got, values, "{p}");
    }
}

#[test]
fn alternating_maximizes_121() {
    let s = searcher();
    let set = PatternSet::parse(&["121"], Mode::Unrestricted).unwrap();
    for n in 3..=9 {
        let (mu, argmax) = oracle_mu("121", n, n, false);
        assert_eq!(mu, alternating_count_exact(n as u64));
        assert!(argmax.contains(CanonicalWord::alternating(n).unwrap().letters()));
        assert_eq!(s.max_two_block(n).unwrap().mu, mu);
        assert_eq!(s.max_over_partitions(&set, n, n).unwrap().mu, mu);
    }
}

#[test]
fn layered_patterns_unrestricted_maxima() {
    let s = searcher();
    let expect = [1u64, 3, 9, 18, 36, 60];
    for p in ["1122", "1123", "1233"] {
        let set = PatternSet::parse(&[p], Mode::Unrestricted).unwrap();
        let seq = s.density_sequence(&set, 9, KPolicy::Diagonal).unwrap();
        let mus: Vec<u64> = seq.rows.iter().map(|r| r.mu).collect();
        assert_eq!(mus, expect, "{p}");
        for n in 4..=7 {
            assert_eq!(oracle_mu(p, n, n, false).0, expect[n - 4], "{p} n={n}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_small_queries(
        pattern in prop::sample::select(vec!["11", "12", "111", "112", "121", "122", "123", "1221", "1232"]),
        n in 4usize..=7,
        k in 1usize..=5,
        restricted in any::<bool>(),
        threads in 1usize..=4,
    ) {
        let mode = if restricted { Mode::Restricted } else { Mode::Unrestricted };
        let set = PatternSet::parse(&[pattern], mode).unwrap();
        let s = Searcher::new(SearchConfig { threads: Some(threads), ..SearchConfig::default() }).unwrap();
        let r = s.max_over_partitions(&set, n, k).unwrap();
        let (mu, argmax) = oracle_mu(pattern, n, k, restricted);
        prop_assert_eq!(r.mu, mu);
        prop_assert_eq!(r.witness_total as usize, argmax.len());
        prop_assert_eq!(r.examined, space_size(n, k).unwrap());
    }
}
