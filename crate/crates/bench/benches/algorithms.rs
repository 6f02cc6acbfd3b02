use criterion::{black_box, criterion_group, criterion_main, Criterion};

use cikit::ci_ideal::sum_ci_ideals;
use cikit::ci_model::enumerate_elementary;
use cikit::cone::Cone;
use cikit::imset::build_matrix;
use cikit::poly::{dim_degree, MonomialOrder};
use cikit::toric::{graver_basis, markov_basis};
use cikit::verify::verify_text;
use cikit::StateVector;
use cikit_bench::{appendix_corrected, budget, full_model, statements};

fn imsets(c: &mut Criterion) {
    c.bench_function("enumerate_elementary n=5", |b| b.iter(|| enumerate_elementary(black_box(5)).unwrap()));
    c.bench_function("build_matrix n=4", |b| b.iter(|| build_matrix(black_box(4)).unwrap()));
    let text = appendix_corrected();
    c.bench_function("verify appendix n=4", |b| b.iter(|| verify_text(black_box(&text), 4)));
}

fn toric(c: &mut Criterion) {
    let a3 = build_matrix(3).unwrap();
    let a4 = build_matrix(4).unwrap();
    c.bench_function("markov n=3", |b| b.iter(|| markov_basis(&a3, &budget()).unwrap()));
    c.bench_function("graver n=3", |b| b.iter(|| graver_basis(&a3, &budget()).unwrap()));
    let mut slow = c.benchmark_group("toric n=4");
    slow.sample_size(10);
    slow.bench_function("markov", |b| b.iter(|| markov_basis(&a4, &budget()).unwrap()));
    slow.bench_function("graver", |b| b.iter(|| graver_basis(&a4, &budget()).unwrap()));
    slow.finish();
}

fn cone(c: &mut Criterion) {
    c.bench_function("face lattice n=3", |b| b.iter(|| Cone::new(3).unwrap().face_lattice().unwrap()));
    let mut slow = c.benchmark_group("cone n=4");
    slow.sample_size(10);
    slow.bench_function("facets", |b| b.iter(|| Cone::new(4).unwrap().facets().unwrap()));
    slow.bench_function("face lattice", |b| b.iter(|| Cone::new(4).unwrap().face_lattice().unwrap()));
    slow.finish();
}

fn ideals(c: &mut Criterion) {
    let binary = StateVector::binary(3);
    let m4 = full_model();
    c.bench_function("grevlex GB of I(M4), binary n=3", |b| {
        b.iter(|| sum_ci_ideals(&m4, &binary).unwrap().groebner_basis(&MonomialOrder::GrevLex, &budget()).unwrap())
    });
    c.bench_function("lex GB of I(M4), binary n=3", |b| {
        b.iter(|| sum_ci_ideals(&m4, &binary).unwrap().groebner_basis(&MonomialOrder::Lex, &budget()).unwrap())
    });
    let j3 = statements(&["1 _||_ 23 | e"]);
    let states = StateVector::parse("2,2,3").unwrap();
    c.bench_function("dim/degree of I(1⊥23) at (2,2,3)", |b| {
        b.iter(|| dim_degree(&sum_ci_ideals(&j3, &states).unwrap(), &budget()).unwrap())
    });
}

criterion_group!(benches, imsets, toric, cone, ideals);
criterion_main!(benches);
