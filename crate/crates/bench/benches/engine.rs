use criterion::{black_box, criterion_group, criterion_main, Criterion};

use hurwitz_core::directrix::{rotating_directrix_class, DirectrixFamily};
use hurwitz_core::family_calc::pentagonal_pencil_numbers;
use hurwitz_core::graphs::enumerate_two_vertex;
use hurwitz_core::yeff::certify;

fn certification(c: &mut Criterion) {
    for (d, g) in [(3, 8), (4, 15), (5, 36)] {
        c.bench_function(&format!("certify d={d} g={g}"), |b| {
            b.iter(|| certify(black_box(d), black_box(g)).unwrap())
        });
    }
}

fn kernels(c: &mut Criterion) {
    c.bench_function("directrix N=6 r=2", |b| {
        let fam = DirectrixFamily::new(6, 2, 3, -1).unwrap();
        b.iter(|| rotating_directrix_class(black_box(fam)).unwrap())
    });
    c.bench_function("pentagonal surface gR=16", |b| {
        b.iter(|| pentagonal_pencil_numbers(black_box(16)).unwrap())
    });
    c.bench_function("enumerate d=5 g=20", |b| {
        b.iter(|| enumerate_two_vertex(black_box(5), black_box(20)))
    });
}

criterion_group!(benches, certification, kernels);
criterion_main!(benches);
