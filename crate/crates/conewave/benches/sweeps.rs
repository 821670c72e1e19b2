//! Parallel vs sequential EL sweeps. `par::map` fans out over rayon with the
//! default `parallel` feature; the "sequential" rows are the plain iterator the
//! fallback compiles to (`cargo bench --no-default-features` makes both rows
//! sequential).

use std::hint::black_box;

use conewave::cone::make_exponents;
use conewave::euler_lagrange::el_report;
use conewave::par;
use conewave::quadrature::QuadratureConfig;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn grid() -> Vec<(u32, f64, usize)> {
    let mut g = Vec::new();
    for d in [2, 3, 4] {
        for p in [1.3, 1.8, 2.5] {
            for k in 2..=6 {
                g.push((d, p, k));
            }
        }
    }
    g
}

fn sweep(c: &mut Criterion) {
    let cfg = QuadratureConfig::default();
    let points = grid();
    let run = |&(d, p, k): &(u32, f64, usize)| el_report(&make_exponents(d, p).unwrap(), k, &cfg, false).unwrap().ratio_abs;
    let mut group = c.benchmark_group("el_sweep");
    group.sample_size(10);
    group.bench_with_input(BenchmarkId::new("parallel", points.len()), &points, |b, pts| b.iter(|| black_box(par::map(pts, run))));
    group.bench_with_input(BenchmarkId::new("sequential", points.len()), &points, |b, pts| {
        b.iter(|| black_box(pts.iter().map(run).collect::<Vec<_>>()))
    });
    group.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
