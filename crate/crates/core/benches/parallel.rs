//! Sequential vs rayon on the three hot paths: batches of Smith forms, Ext
//! sweeps, and the three-leg base-change check.
//!
//! Run with: cargo bench -p tiltbase-core

use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tiltbase_core::algebra::CentralElement;
use tiltbase_core::catalog;
use tiltbase_core::homalg::ext;
use tiltbase_core::linalg::{smith_normal_form, BaseRing, Matrix};
use tiltbase_core::par::Exec;
use tiltbase_core::tilting::{check_main_theorem, TiltingOptions};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn snf_batch(c: &mut Criterion) {
    let mut rng = StdRng::seed_from_u64(7);
    let z = BaseRing::Integers;
    let batch: Vec<Matrix> = (0..256)
        .map(|_| {
            let e: Vec<i64> = (0..64).map(|_| rng.gen_range(-50..=50)).collect();
            Matrix::from_ints(&z, 8, 8, &e)
        })
        .collect();
    let mut g = c.benchmark_group("snf_batch_256x8x8");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| exec.map(&batch, |m| smith_normal_form(black_box(m)).rank))
        });
    }
    g.finish();
}

fn ext_sweep(c: &mut Criterion) {
    let z = Arc::new(catalog::integers());
    let pairs: Vec<(i64, i64)> = (2..=17).flat_map(|a| (2..=17).map(move |b| (a, b))).collect();
    let mut g = c.benchmark_group("ext_sweep_z");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                exec.map(&pairs, |&(a, bb)| {
                    let (m, n) = (catalog::z_module(&z, &[a]), catalog::z_module(&z, &[bb]));
                    ext(&m, &n, 1).expect("ext").normal_form
                })
            })
        });
    }
    g.finish();
}

fn main_theorem(c: &mut Criterion) {
    let tri = Arc::new(catalog::lower_triangular());
    let t = catalog::tri_tilting(&tri);
    let x = CentralElement::scalar(&tri, 2);
    let mut g = c.benchmark_group("base_change_triangular");
    g.sample_size(20);
    for (name, exec) in MODES {
        let opts = TiltingOptions { exec, ..TiltingOptions::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| check_main_theorem(black_box(&t), &x, 1, &opts).expect("runs").status)
        });
    }
    g.finish();
}

criterion_group!(benches, snf_batch, ext_sweep, main_theorem);
criterion_main!(benches);
