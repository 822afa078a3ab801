use criterion::{black_box, criterion_group, criterion_main, Criterion};
use drinfeld_ext::oracle::verify_structure;
use drinfeld_ext::*;

fn module(k: &Field, s: &str) -> TModule {
    parse_module(k, Var::Tau, s).unwrap()
}

fn ext_structures(c: &mut Criterion) {
    let k = parse_field("GF(3)(th)").unwrap();
    let (phi, psi) = (module(&k, "th + tau^5"), module(&k, "th + tau^3"));
    c.bench_function("ext rank 5 over rank 3, GF(3)(th)", |b| {
        b.iter(|| ext_drinfeld_structure(black_box(&phi), black_box(&psi)).unwrap())
    });

    let f = parse_field("FTF(3; gens=a,b,th; inv=a)").unwrap();
    let (phi, psi) = (module(&f, "th + a*tau^3"), module(&f, "th + b*tau^2"));
    c.bench_function("ext rank 3 over rank 2, formal field", |b| {
        b.iter(|| ext_drinfeld_structure(black_box(&phi), black_box(&psi)).unwrap())
    });

    let phi = module(&k, "th + tau^3");
    c.bench_function("ext by C^(x)3", |b| b.iter(|| ext_carlitz_target(black_box(&phi), 3).unwrap()));
}

fn reduction(c: &mut Criterion) {
    let k = parse_field("GF(3^2)").unwrap();
    let (phi, psi) = (module(&k, "th + tau^3"), module(&k, "th + g*tau^2"));
    let m = parse_matrix(&k, Var::Tau, "g + tau + g*tau^4 + tau^7 + g*tau^11").unwrap();
    let d = Biderivation::new(&phi, &psi, m).unwrap();
    c.bench_function("reduce degree 11 over F_9", |b| b.iter(|| reduce_canonical(black_box(&d)).unwrap()));
}

fn oracle(c: &mut Criterion) {
    let k = parse_field("GF(2^3)").unwrap();
    let e = ext_drinfeld_structure(&module(&k, "th + tau^3"), &module(&k, "th + tau^2")).unwrap();
    c.bench_function("verify structure, 50 samples over F_8", |b| {
        b.iter(|| verify_structure(black_box(&e), 50, 1).unwrap())
    });
}

criterion_group!(benches, ext_structures, reduction, oracle);
criterion_main!(benches);
