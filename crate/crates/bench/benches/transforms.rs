use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use apnforge_core::catalog::{build, Family, FamilySpec};
use apnforge_core::exclude::{exclude_histogram_only, ExcludeSpectrum};
use apnforge_core::field::FieldSpec;
use apnforge_core::spectral::{fwht_in_place, WalshSpectrum};
use apnforge_core::theory::{kloosterman_table, power_exclude_histogram};
use apnforge_core::vbf::VectorialFunc;

fn gold(n: u32) -> VectorialFunc {
    VectorialFunc::from_monomial(&Arc::new(FieldSpec::new(n).unwrap()), 3)
}

fn bench_fwht(c: &mut Criterion) {
    let mut group = c.benchmark_group("fwht_i64");
    for bits in [16u32, 20] {
        let size = 1usize << bits;
        let data: Vec<i64> = (0..size as i64).map(|x| (x * 31) % 257 - 128).collect();
        group.bench_with_input(BenchmarkId::from_parameter(bits), &data, |b, data| {
            b.iter(|| {
                let mut work = data.clone();
                fwht_in_place(&mut work);
                black_box(work[0])
            })
        });
    }
    group.finish();
}

fn bench_field_mul(c: &mut Criterion) {
    let field = FieldSpec::new(13).unwrap();
    c.bench_function("field_mul_n13", |b| {
        b.iter(|| {
            let mut acc = 1u16;
            for x in 1..1024u16 {
                acc = field.mul(acc, black_box(x | 1));
            }
            black_box(acc)
        })
    });
}

fn bench_walsh_spectrum(c: &mut Criterion) {
    let f = gold(8);
    c.bench_function("walsh_spectrum_n8", |b| {
        b.iter(|| black_box(WalshSpectrum::compute(&f).linearity()))
    });
}

fn bench_exclude(c: &mut Criterion) {
    let f8 = gold(8);
    c.bench_function("exclude_spectrum_n8", |b| {
        b.iter(|| black_box(ExcludeSpectrum::compute(&f8).unwrap().e_min()))
    });
    let f10 = gold(10);
    c.bench_function("exclude_histogram_n10", |b| {
        b.iter(|| black_box(exclude_histogram_only(&f10).unwrap().e_min()))
    });
    let inverse9 = build(&FamilySpec {
        family: Family::Inverse,
        field: Arc::new(FieldSpec::new(9).unwrap()),
    })
    .unwrap();
    c.bench_function("power_row_histogram_inverse_n9", |b| {
        b.iter(|| black_box(power_exclude_histogram(&inverse9).unwrap().e_min()))
    });
}

fn bench_kloosterman(c: &mut Criterion) {
    let spec = FieldSpec::new(11).unwrap();
    c.bench_function("kloosterman_table_n11", |b| {
        b.iter(|| black_box(kloosterman_table(&spec).unwrap().max_dev()))
    });
}

criterion_group!(
    benches,
    bench_fwht,
    bench_field_mul,
    bench_walsh_spectrum,
    bench_exclude,
    bench_kloosterman
);
criterion_main!(benches);
