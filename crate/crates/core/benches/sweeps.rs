use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use eqlines::bounds::corollary_table;
use eqlines::designs::{profile, Configuration};
use eqlines::exact::rat;
use eqlines::lp::{triangle_bound, Simplex, TriangleLpInstance};
use eqlines::{Exec, Rational};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn table(c: &mut Criterion) {
    let mut g = c.benchmark_group("corollary_table_2_50");
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| corollary_table(2, black_box(50), exec).unwrap()));
    }
    g.finish();
}

fn instance_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("instance_build_23_defaults");
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| TriangleLpInstance::build(23, rat(1, 3), rat(-1, 3), 10, 6, 3, exec).unwrap())
        });
    }
    g.finish();
}

/// `(3,3,-1,...,-1)` and permutations in `R^m`, repeated `copies` times.
fn lines(m: usize, copies: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for _ in 0..copies {
        for a in 0..m {
            for b in a + 1..m {
                out.push((0..m).map(|k| rat(if k == a || k == b { 3 } else { -1 }, 1)).collect());
            }
        }
    }
    out
}

fn gram_profile(c: &mut Criterion) {
    let mut g = c.benchmark_group("gram_and_profile");
    g.sample_size(20);
    for size in [28usize, 112] {
        let pts = lines(8, size / 28);
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, size), &pts, |b, pts| {
                b.iter(|| profile(&Configuration::exact_directions(8, pts.clone(), exec).unwrap()))
            });
        }
    }
    g.finish();
}

fn lp_sweep(c: &mut Criterion) {
    let cases: Vec<(usize, Rational)> = vec![
        (23, rat(1, 3)),
        (71, rat(1, 5)),
        (11, rat(1, 2)),
        (26, rat(26, 100)),
        (143, rat(1, 7)),
        (30, rat(1, 3)),
        (60, rat(1, 5)),
        (15, rat(2, 5)),
    ];
    let tol = rat(1, 1 << 20);
    let solver = Simplex::default();
    let mut g = c.benchmark_group("minimal_lp_sweep_8");
    g.sample_size(20);
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| {
                exec.try_map(&cases, |(n, a)| {
                    let inst = TriangleLpInstance::minimal(*n, a.clone())?;
                    triangle_bound(&inst, &tol, &solver)
                })
                .unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, table, instance_build, gram_profile, lp_sweep);
criterion_main!(benches);
