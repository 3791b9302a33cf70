use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use zpdehn_core::heights::{weil_height, ZPoly};
use zpdehn_core::lattice::siegel_basis;
use zpdehn_core::nzdehn::{cosmetic_scan, solve_filling, synth_potential, SynthConfig};
use zpdehn_core::{AlgebraicNumber, FillingCoefficient, IntMatrix};

fn height(c: &mut Criterion) {
    let a = AlgebraicNumber::new(ZPoly::from_i64(&[1, -1, 0, 1]), 1, 256).unwrap();
    c.bench_function("weil height cubic", |b| {
        b.iter(|| weil_height(black_box(&a)).unwrap())
    });
}

fn siegel(c: &mut Criterion) {
    let m = IntMatrix::from_rows(5, &[vec![912_447, -381_220, 57_301, 774_015, -266_893]]);
    c.bench_function("siegel basis 1x5", |b| {
        b.iter(|| siegel_basis(black_box(&m)).unwrap())
    });
}

fn filling(c: &mut Criterion) {
    let pot = synth_potential(0, 2, 8, &SynthConfig::default()).unwrap();
    let coeff = FillingCoefficient::parse("5/1,7/2").unwrap();
    c.bench_function("solve filling 2 cusps", |b| {
        b.iter(|| solve_filling(&pot, black_box(&coeff)).unwrap())
    });
    let one = synth_potential(0, 1, 8, &SynthConfig::default()).unwrap();
    c.bench_function("cosmetic scan bound 25", |b| {
        b.iter(|| cosmetic_scan(&one, black_box(25), 1e-8).unwrap())
    });
}

criterion_group!(benches, height, siegel, filling);
criterion_main!(benches);
