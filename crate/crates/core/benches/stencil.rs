//! Spatial operator and prolongation throughput on one thread versus the
//! default rayon pool. Built without the `parallel` feature, both arms run
//! the sequential code path.

use std::f64::consts::PI;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sgweno::grid::{Boundary, DomainBox, GridField, GridGeometry, LevelIndex};
use sgweno::interp::{prolong, Prolongation};
use sgweno::models::{conservation_law_rhs, ScalarConservationLaw};
use sgweno::weno::WenoParams;

fn field(n: usize, level: LevelIndex) -> GridField {
    let g = GridGeometry::uniform(DomainBox::cube(3, 0.0, 2.0 * PI).unwrap(), n, level, Boundary::Periodic).unwrap();
    GridField::restrict(g, |x| 0.3 + 0.7 * (x[0] + x[1] + x[2]).sin())
}

fn pools() -> Vec<(String, rayon::ThreadPool)> {
    let all = rayon::current_num_threads();
    let mut out = vec![("sequential".to_string(), rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap())];
    if all > 1 {
        out.push((format!("parallel-{all}"), rayon::ThreadPoolBuilder::new().num_threads(all).build().unwrap()));
    }
    out
}

fn rhs(c: &mut Criterion) {
    let law = ScalarConservationLaw::burgers(3);
    let p = WenoParams::default();
    let mut group = c.benchmark_group("burgers_rhs_3d");
    group.sample_size(10);
    for n in [32, 64] {
        let u = field(n, LevelIndex::uniform(3, 0));
        for (name, pool) in pools() {
            group.bench_with_input(BenchmarkId::new(name, n), &u, |b, u| {
                b.iter(|| pool.install(|| conservation_law_rhs(u, &law, &p).unwrap()))
            });
        }
    }
    group.finish();
}

fn prolongation(c: &mut Criterion) {
    let u = field(8, LevelIndex::new(vec![3, 0, 0]));
    let target = LevelIndex::uniform(3, 3);
    let mut group = c.benchmark_group("weno_prolong_3d");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(name, |b| {
            b.iter(|| pool.install(|| prolong(&u, &target, Prolongation::Weno, 1e-3).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, rhs, prolongation);
criterion_main!(benches);
