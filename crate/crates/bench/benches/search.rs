use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use partpack_core::count::count_pattern;
use partpack_core::{CanonicalWord, Mode, PatternSet, SearchConfig, Searcher};

fn counting(c: &mut Criterion) {
    let target = CanonicalWord::alternating(14).unwrap();
    let mut group = c.benchmark_group("count_pattern");
    for p in ["121", "1212", "1123"] {
        let pattern: CanonicalWord = p.parse().unwrap();
        for mode in [Mode::Restricted, Mode::Unrestricted] {
            group.bench_function(BenchmarkId::new(p, mode), |b| {
                b.iter(|| count_pattern(black_box(pattern.letters()), black_box(target.letters()), mode))
            });
        }
    }
    group.finish();
}

fn searching(c: &mut Criterion) {
    let searcher = Searcher::new(SearchConfig {
        layered_cross_check: false,
        ..SearchConfig::default()
    })
    .unwrap();
    let set = PatternSet::parse(&["121"], Mode::Unrestricted).unwrap();
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    for n in [7, 8, 9] {
        group.bench_with_input(BenchmarkId::new("partitions_121", n), &n, |b, &n| {
            b.iter(|| searcher.max_over_partitions(&set, n, n).unwrap())
        });
    }
    for n in [10, 14] {
        group.bench_with_input(BenchmarkId::new("two_block_121", n), &n, |b, &n| {
            b.iter(|| searcher.max_two_block(n).unwrap())
        });
    }
    let p112: CanonicalWord = "112".parse().unwrap();
    for n in [10, 14] {
        group.bench_with_input(BenchmarkId::new("layered_112", n), &n, |b, &n| {
            b.iter(|| searcher.max_layered(&p112, n, n).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, counting, searching);
criterion_main!(benches);
