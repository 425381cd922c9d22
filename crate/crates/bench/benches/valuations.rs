use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vallab_core::dehn::{dehn_symbol, regular_tetrahedron, symbol_equal, DEFAULT_DIGITS, DEFAULT_HEIGHT};
use vallab_core::fconv::{conjugate_max_affine, MaxAffineFunc};
use vallab_core::fval::exp_integral;
use vallab_core::geom::{hull, Polytope, Vector};
use vallab_core::intrinsic::kinematic_integral_mc;

fn cloud(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<Vector> {
    (0..count).map(|_| Vector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0))).collect()
}

fn bench_hull(c: &mut Criterion) {
    let mut group = c.benchmark_group("hull");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (n, count) in [(2, 1000), (3, 200), (3, 1000)] {
        let points = cloud(&mut rng, n, count);
        group.bench_with_input(BenchmarkId::new(format!("{n}d"), count), &points, |b, pts| {
            b.iter(|| hull(pts).unwrap())
        });
    }
    group.finish();
}

fn bench_kinematic(c: &mut Criterion) {
    let square = Polytope::cube(2, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let blob = hull(&cloud(&mut rng, 2, 30)).unwrap();
    c.bench_function("kinematic/1e5", |b| b.iter(|| kinematic_integral_mc(&square, &blob, 100_000, 0).unwrap()));
}

fn bench_relations(c: &mut Criterion) {
    let cube = dehn_symbol(&Polytope::cube(3, 1.0).unwrap()).unwrap();
    let tetra = dehn_symbol(&regular_tetrahedron(1.0).unwrap()).unwrap();
    c.bench_function("dehn/cube_vs_tetrahedron", |b| {
        b.iter(|| symbol_equal(&tetra, &cube, DEFAULT_HEIGHT, DEFAULT_DIGITS).unwrap())
    });
}

fn bench_exp_integral(c: &mut Criterion) {
    let mut group = c.benchmark_group("exp_integral");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for pieces in [8, 32, 128] {
        let v = MaxAffineFunc::new(
            (0..pieces)
                .map(|_| (Vector::from_fn(2, |_, _| rng.gen_range(-2.0..2.0)), rng.gen_range(-1.0..1.0)))
                .collect(),
        )
        .unwrap();
        let u = conjugate_max_affine(&v).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(pieces), &u, |b, u| b.iter(|| exp_integral(u).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench_hull, bench_kinematic, bench_relations, bench_exp_integral);
criterion_main!(benches);
