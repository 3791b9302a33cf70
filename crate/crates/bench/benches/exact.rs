use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zpdehn_core::anomalous::containment_cascade;
use zpdehn_core::cusplemmas::exhaustive_lemma_sweep;
use zpdehn_core::interchange::{find_deficient_subset, random_dependent_family};
use zpdehn_core::{kernel_basis, IntMatrix, SubgroupSpec, TauMode};

fn lemma_sweep(c: &mut Criterion) {
    c.bench_function("block sweep bound 1", |b| {
        b.iter(|| exhaustive_lemma_sweep(black_box(1), TauMode::OneTau).unwrap())
    });
}

fn kernel(c: &mut Criterion) {
    let m = IntMatrix::from_rows(
        6,
        &[
            vec![3, -7, 11, 2, 0, 5],
            vec![-4, 9, 1, 13, -6, 2],
            vec![8, 0, -5, 7, 3, -1],
        ],
    );
    c.bench_function("kernel 3x6", |b| b.iter(|| kernel_basis(black_box(&m))));
}

fn deficient_subset(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let fams: Vec<_> = (0..32)
        .map(|_| random_dependent_family(&mut rng, 5))
        .collect();
    c.bench_function("deficient subset n=5 x32", |b| {
        b.iter(|| {
            fams.iter()
                .map(|f| find_deficient_subset(f).unwrap().len())
                .sum::<usize>()
        })
    });
}

fn cascade(c: &mut Criterion) {
    let rows = [
        vec![1, 1, 0, 0, 0, 0],
        vec![0, 0, 1, 0, 0, 0],
        vec![0, 0, 0, 1, 0, 0],
    ];
    let spec = SubgroupSpec::from_rows(3, 1, &rows).unwrap();
    c.bench_function("containment cascade 3 cusps", |b| {
        b.iter(|| containment_cascade(black_box(&spec)).unwrap())
    });
}

criterion_group!(benches, lemma_sweep, kernel, deficient_subset, cascade);
criterion_main!(benches);
