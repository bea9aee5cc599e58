use std::hint::black_box;

use bracketforge::corpus::jacobi_corpus;
use bracketforge::jacobi::jacobi_violations;
use bracketforge::nr::compatibility_residuals;
use bracketforge::{sample, solve_leibniz_space, AlgebraSpec, PolyAlgebra};
use criterion::{criterion_group, criterion_main, Criterion};

fn leibniz(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_leibniz");
    group.sample_size(10);
    for n in [2, 3] {
        let alg = AlgebraSpec::gl(n);
        group.bench_function(format!("gl{n}"), |b| b.iter(|| solve_leibniz_space(black_box(&alg)).len()));
    }
    group.finish();
}

fn jacobi(c: &mut Criterion) {
    let corpus = jacobi_corpus();
    let entry = corpus.iter().find(|e| e.name == "contact-like").expect("corpus entry");
    let bracket = entry.pair.reconstruct();
    let mut group = c.benchmark_group("jacobi");
    group.sample_size(10);
    group.bench_function("grid scan xyz deg 3", |b| {
        b.iter(|| jacobi_violations(&entry.algebra, black_box(&bracket), 3).len())
    });
    group.bench_function("nr residuals xyz deg 3", |b| {
        b.iter(|| compatibility_residuals(&entry.algebra, black_box(&entry.pair), 3).is_zero())
    });
    let xy = PolyAlgebra::new(["x", "y"]).expect("static algebra");
    let pair = sample::pair(&mut sample::rng(0), &xy, 2);
    let random = pair.reconstruct();
    group.bench_function("grid scan xy deg 4", |b| b.iter(|| jacobi_violations(&xy, black_box(&random), 4).len()));
    group.finish();
}

fn weyl(c: &mut Criterion) {
    let mut rng = sample::rng(0);
    let a = sample::weyl(&mut rng, 6, 8);
    let b = sample::weyl(&mut rng, 6, 8);
    c.bench_function("weyl mul deg 6", |bench| bench.iter(|| black_box(&a).mul(black_box(&b))));
}

criterion_group!(benches, leibniz, jacobi, weyl);
criterion_main!(benches);
