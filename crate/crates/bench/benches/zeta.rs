use criterion::{criterion_group, criterion_main, Criterion};
use mtz_core::coeff::{GradedMonomial, GradedSeries, LefschetzLaurent, Truncation};
use mtz_core::cone_zeta::{residue_check, subdivided_cone};
use mtz_core::euler::euler_product_genus0;
use mtz_core::fq::{count_hom_fq, DEFAULT_BUDGET};
use mtz_core::height_zeta::{leading_constant, zeta_direct_genus0, zeta_fourier_genus0};
use mtz_core::toric::{preset, DegreeVector};
use mtz_core::CurveData;
use std::hint::black_box;

fn zeta_routes(c: &mut Criterion) {
    let p2 = preset("P2").unwrap();
    let quadric = preset("P1xP1").unwrap();
    c.bench_function("direct P2 dmax 3", |b| b.iter(|| zeta_direct_genus0(black_box(&p2), &[3, 3, 3]).unwrap()));
    c.bench_function("fourier P2 dmax 3", |b| b.iter(|| zeta_fourier_genus0(black_box(&p2), &[3, 3, 3]).unwrap()));
    c.bench_function("direct P1xP1 dmax 2", |b| {
        b.iter(|| zeta_direct_genus0(black_box(&quadric), &[2, 2, 2, 2]).unwrap())
    });
    c.bench_function("fourier P1xP1 dmax 2", |b| {
        b.iter(|| zeta_fourier_genus0(black_box(&quadric), &[2, 2, 2, 2]).unwrap())
    });
}

fn euler_products(c: &mut Criterion) {
    let mut f = GradedSeries::one(vec!["T".into()], 0, Truncation::total(10));
    f.add_term(GradedMonomial { t: vec![1], z: vec![] }, LefschetzLaurent::l());
    f.add_term(GradedMonomial { t: vec![2], z: vec![] }, LefschetzLaurent::one());
    c.bench_function("euler product degree 10", |b| b.iter(|| euler_product_genus0(black_box(&f)).unwrap()));
    let bl = preset("Bl1P2").unwrap();
    c.bench_function("leading constant Bl1P2 precision 10", |b| {
        b.iter(|| leading_constant(black_box(&bl), &CurveData::genus0(), 10).unwrap())
    });
}

fn oracle_and_cones(c: &mut Criterion) {
    let p2 = preset("P2").unwrap();
    let d = DegreeVector(vec![3, 3, 3]);
    c.bench_function("count P2 d 3 q 2", |b| b.iter(|| count_hom_fq(black_box(&p2), &d, 2, DEFAULT_BUDGET).unwrap()));
    let cone = subdivided_cone();
    c.bench_function("residue subdivided cone", |b| b.iter(|| residue_check(black_box(&cone), &[1, 1]).unwrap()));
}

criterion_group!(benches, zeta_routes, euler_products, oracle_and_cones);
criterion_main!(benches);
