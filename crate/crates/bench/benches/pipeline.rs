use std::hint::black_box;

use cmw_core::hermitian::fischer_split_22;
use cmw_core::hypersurfaces::{segre_interior_witness, sphere_perturbation_local, verify_witness, KNParams};
use cmw_core::normalform::{extract_cmw, normalize_to_order4};
use cmw_core::polycore::{rat, CRational, RealPoly};
use cmw_core::Signature;
use criterion::{criterion_group, criterion_main, Criterion};

/// A fixed pre-normal input with weight 3 and weight 4 terms.
fn sample_input(sig: &Signature) -> RealPoly {
    let n = sig.n();
    let e = |j: usize, d: u16| {
        let mut v = vec![0u16; n];
        v[j] = d;
        v
    };
    let mut p = sig.levi_poly().neg();
    p.add_real_pair(&e(0, 2), &e(n - 1, 1), 0, &CRational::from_ratios(1, 2, 1, 3));
    p.add_real_pair(&e(1, 1), &e(0, 1), 1, &CRational::from_ratios(0, 1, 2, 1));
    p.add_real_pair(&e(0, 2), &e(1, 2), 0, &CRational::from_ratios(3, 4, 0, 1));
    p.add_real_pair(&e(n - 1, 2), &e(n - 1, 2), 0, &CRational::from_int(-1));
    p.add_real_pair(&e(0, 1), &e(1, 1), 1, &CRational::from_ratios(1, 5, -1, 2));
    p
}

fn normalize(c: &mut Criterion) {
    for (n, l) in [(2, 1), (3, 1)] {
        let sig = Signature::new(n, l).unwrap();
        let p = sample_input(&sig);
        c.bench_function(&format!("normalize n={n} l={l}"), |b| {
            b.iter(|| extract_cmw(&normalize_to_order4(black_box(&p), &sig).unwrap()).unwrap())
        });
    }
    let sig = Signature::new(4, 2).unwrap();
    let (p, _) = sphere_perturbation_local(4, 2, &rat(1, 100)).unwrap();
    c.bench_function("sphere chart n=4 l=2", |b| b.iter(|| sphere_perturbation_local(4, 2, black_box(&rat(1, 100))).unwrap()));
    c.bench_function("normalize sphere n=4 l=2", |b| b.iter(|| normalize_to_order4(black_box(&p), &sig).unwrap()));
}

fn fischer(c: &mut Criterion) {
    let sig = Signature::new(4, 2).unwrap();
    let q = sample_input(&sig).weighted_component(4).filter(|e| e[8] == 0);
    c.bench_function("fischer split n=4", |b| b.iter(|| fischer_split_22(black_box(&q), &sig).unwrap()));
}

fn segre(c: &mut Criterion) {
    let params = KNParams::default().with_eps(rat(0, 1));
    c.bench_function("segre witness", |b| {
        b.iter(|| {
            let w = segre_interior_witness(black_box(&params)).unwrap();
            verify_witness(&w).unwrap()
        })
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = normalize, fischer, segre
}
criterion_main!(benches);
