//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs without the libtest harness so the lines always print.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use eqlines::bounds::{
    corollary_bound, corollary_dimension, corollary_table, gerzon_bound, lemmens_seidel_bound,
    okuda_yu_bound, window_denominators, Branch,
};
use eqlines::designs::{harmonic_index_design_test, profile, tightness_check, Configuration, Scalar};
use eqlines::exact::rat;
use eqlines::gegenbauer::gegenbauer_eval;
use eqlines::lp::{
    feasibility_at_level, triangle_bound, verify_proposition_33, Feasibility, LinearSystem, LpOutcome,
    Row, Sense, Simplex, TriangleLpInstance,
};
use eqlines::threepoint::{lemma32_reference, lemma32_scale, unnormalized_entry, Lemma32Pattern};
use eqlines::{Exec, Rational, RationalExt};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn s(r: &Rational) -> String {
    r.to_exact_string()
}

fn big(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn random_unit_fraction(rng: &mut ChaCha8Rng) -> Rational {
    let q = rng.gen_range(2..500i64);
    rat(rng.gen_range(1..q), q)
}

fn corollary_value(k: i64) -> Rational {
    Rational::from_integer(BigInt::from(2 * (k - 1)) * BigInt::from(4 * k * k * k - k - 1))
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let rows = ok(corollary_table(2, 50, Exec::Parallel))?;
    let elapsed = start.elapsed();
    ensure!(rows.len() == 49, "expected 49 rows, got {}", rows.len());
    for row in &rows {
        let k = row.k as i64;
        let expected = corollary_value(k);
        ensure!(row.bound == expected, "k={k}: bound {} != {}", s(&row.bound), s(&expected));
        let general = ok(okuda_yu_bound(corollary_dimension(row.k), &rat(1, 2 * k - 1)))?;
        ensure!(
            general.value.as_ref() == Some(&expected),
            "k={k}: general bound {:?} != {}",
            general.value.as_ref().map(s),
            s(&expected)
        );
    }
    ensure!(elapsed < Duration::from_secs(1), "table took {elapsed:?}");
    Ok(format!("k=2..50 exact, table built in {:.1} ms", elapsed.as_secs_f64() * 1e3))
}

fn criterion_2() -> Check {
    for k in 2..=50usize {
        let c = ok(corollary_bound(k))?;
        let n = BigInt::from(corollary_dimension(k));
        let tight = (&n + 1) * (&n + 2) / 6;
        ensure!(c.tight_cardinality == tight, "k={k}: tight cardinality mismatch");
        ensure!(c.bound < Rational::from_integer(tight.clone()), "k={k}: bound not below {tight}");
        ensure!(c.verdict, "k={k}: verdict not set");
    }
    let row = |k| -> Result<(usize, String, String, String), String> {
        let c = ok(corollary_bound(k))?;
        Ok((c.n_k, s(&c.alpha_k), s(&c.bound), c.tight_cardinality.to_string()))
    };
    let r2 = row(2)?;
    let r3 = row(3)?;
    ensure!(r2 == (23, "1/3".into(), "58".into(), "100".into()), "k=2 row {r2:?}");
    ensure!(r3 == (71, "1/5".into(), "416".into(), "876".into()), "k=3 row {r3:?}");
    Ok(format!("k=2..50 nonexistent; k=2 {r2:?}, k=3 {r3:?}"))
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3a7);
    let mut checked = 0;
    for n in 3..=30usize {
        let alphas: Vec<Rational> = (0..5).map(|_| random_unit_fraction(&mut rng)).collect();
        let args = Lemma32Pattern::AlphaAlphaOne.args(&alphas[0]);
        let entry = ok(unnormalized_entry(n, 3, 1, 1, &args[0], &args[1], &args[2]))?;
        ensure!(!entry.is_zero(), "n={n}: zero calibration entry");
        let lambda = ok(lemma32_reference(n, Lemma32Pattern::AlphaAlphaOne, &alphas[0]))? / entry;
        ensure!(lambda.is_positive(), "n={n}: lambda {} not positive", s(&lambda));
        for alpha in &alphas {
            for pattern in Lemma32Pattern::ALL {
                let [u, v, t] = pattern.args(alpha);
                let entry = ok(unnormalized_entry(n, 3, 1, 1, &u, &v, &t))?;
                let reference = ok(lemma32_reference(n, pattern, alpha))?;
                ensure!(
                    reference == &lambda * &entry,
                    "n={n}, alpha={}, {pattern:?}: {} != {} * {}",
                    s(alpha),
                    s(&reference),
                    s(&lambda),
                    s(&entry)
                );
                checked += 1;
            }
        }
        ensure!(lambda == lemma32_scale(n), "n={n}: lambda {} differs from the reported scale", s(&lambda));
    }
    Ok(format!("{checked} identities exact, one positive lambda(n) per n=3..30"))
}

fn criterion_4() -> Check {
    let mut pairs: Vec<(usize, Rational)> = vec![(23, rat(1, 3)), (71, rat(1, 5)), (11, rat(1, 2))];
    let mut rng = ChaCha8Rng::seed_from_u64(0x33);
    let (mut minus, mut plus) = (0, 0);
    while minus + plus < 20 {
        let n = rng.gen_range(3..200usize);
        let alpha = random_unit_fraction(&mut rng);
        let (dm, dp) = window_denominators(n, &alpha);
        if !dm.is_positive() || !dp.is_positive() {
            continue;
        }
        let branch = ok(okuda_yu_bound(n, &alpha))?.branch;
        match branch {
            Some(Branch::MinusCube) if minus < 10 => minus += 1,
            Some(Branch::PlusCube) if plus < 10 => plus += 1,
            _ => continue,
        }
        pairs.push((n, alpha));
    }
    for (n, alpha) in &pairs {
        let replay = ok(verify_proposition_33(*n, alpha))?;
        ensure!(replay.holds, "n={n}, alpha={}: replay failed {:?}", s(alpha), replay.steps);
        let closed = ok(okuda_yu_bound(*n, alpha))?.value;
        ensure!(
            closed.as_ref() == Some(&replay.objective_max),
            "n={n}, alpha={}: root {} vs closed form {:?}",
            s(alpha),
            s(&replay.objective_max),
            closed.as_ref().map(s)
        );
    }
    Ok(format!("3 fixed + 20 random pairs ({minus} first case, {plus} second case) replayed"))
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let inst = ok(TriangleLpInstance::minimal(23, rat(1, 3)))?;
    let tol = rat(1, 1 << 20);
    let b = ok(triangle_bound(&inst, &tol, &Simplex::default()))?;
    let elapsed = start.elapsed();
    let (lo, hi) = (big(58) - rat(1, 1 << 19), big(58));
    for (name, v) in [("lower", &b.lower), ("certified upper", &b.certified_upper)] {
        ensure!(v >= &lo && v <= &hi, "{name} {} outside [58 - 2^-19, 58]", s(v));
    }
    ensure!(b.upper > hi && b.upper <= &hi + &tol, "upper {} not in (58, 58 + tol]", s(&b.upper));
    ok(b.upper_certificate.verify(&inst, &b.upper_level))?;
    ensure!(inst.contains(&b.lower_point), "lower point infeasible");
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!(
        "lower {}, certified upper {}, upper {} (Farkas re-verified), {:.1} ms",
        s(&b.lower),
        s(&b.certified_upper),
        s(&b.upper),
        elapsed.as_secs_f64() * 1e3
    ))
}

fn criterion_6() -> Check {
    // a two-distance setting where the extra rows actually cut
    let (n, alpha, beta) = (10, rat(1, 3), rat(-1, 5));
    let chain: [(usize, usize, usize); 10] = [
        (0, 3, 1),
        (1, 3, 1),
        (2, 3, 1),
        (2, 4, 1),
        (3, 4, 2),
        (4, 4, 2),
        (4, 5, 2),
        (5, 5, 3),
        (6, 6, 3),
        (10, 6, 3),
    ];
    let tol = rat(1, 1 << 12);
    let solver = Simplex::default();
    let bounds = Exec::Parallel.try_map(&chain, |&(lp, ls, is)| {
        let inst = TriangleLpInstance::build(n, alpha.clone(), beta.clone(), lp, ls, is, Exec::Sequential)?;
        triangle_bound(&inst, &tol, &solver).map(|b| b.certified_upper)
    });
    let bounds = ok(bounds)?;
    for (w, t) in bounds.windows(2).zip(chain.windows(2)) {
        ensure!(w[1] <= w[0], "{:?} -> {:?} raised the bound {} -> {}", t[0], t[1], s(&w[0]), s(&w[1]));
    }

    // rescaling never changes a feasibility verdict
    let base = ok(TriangleLpInstance::build(23, rat(1, 3), rat(-1, 3), 4, 4, 2, Exec::Sequential))?;
    let levels = [big(0), big(10), big(57), big(57) + rat(1, 1000), big(100)];
    let verdicts = |inst: &TriangleLpInstance| -> Result<Vec<bool>, String> {
        levels
            .iter()
            .map(|l| ok(feasibility_at_level(inst, l, &solver)).map(|r| r.is_feasible()))
            .collect()
    };
    let expected = verdicts(&base)?;
    let factors = [lemma32_scale(23), rat(1, 7), big(1000)];
    let mut rescaled = 0;
    for index in 0..base.constraints.len() {
        for f in &factors {
            let mut inst = base.clone();
            ok(inst.rescale(index, f))?;
            ensure!(verdicts(&inst)? == expected, "rescaling constraint {index} by {} changed a verdict", s(f));
            rescaled += 1;
        }
    }
    let mut all = base.clone();
    for index in 0..all.constraints.len() {
        ok(all.rescale(index, &lemma32_scale(23)))?;
    }
    let a = ok(triangle_bound(&base, &tol, &solver))?;
    let b = ok(triangle_bound(&all, &tol, &solver))?;
    ensure!(
        (a.lower.clone(), a.upper.clone(), a.certified_upper.clone())
            == (b.lower.clone(), b.upper.clone(), b.certified_upper.clone()),
        "global rescale changed the bound"
    );
    let strict = bounds.windows(2).filter(|w| w[1] < w[0]).count();
    Ok(format!(
        "10-instance chain non-increasing (~{:.4} -> ~{:.4}, {strict} strict drops), {rescaled} rescalings x {} levels unchanged",
        bounds[0].to_f64_lossy(),
        bounds[9].to_f64_lossy(),
        levels.len()
    ))
}

fn criterion_7() -> Check {
    let g = ok(gerzon_bound(23))?;
    ensure!(g.value == Some(big(276)), "gerzon(23) = {:?}", g.value.as_ref().map(s));
    let ls = ok(lemmens_seidel_bound(23, &rat(1, 5)))?;
    ensure!(ls.value == Some(big(276)), "lemmens_seidel(23, 1/5) = {:?}", ls.value.as_ref().map(s));
    for k in 2..=10i64 {
        let r = ok(lemmens_seidel_bound(corollary_dimension(k as usize), &rat(1, 2 * k - 1)))?;
        let expected = rat(-2 * (4 * k * k - 4 * k - 1), (2 * k - 1) * (2 * k - 1));
        ensure!(!r.applicable, "k={k}: Lemmens-Seidel should not apply");
        ensure!(r.witness.as_ref() == Some(&expected), "k={k}: witness {:?}", r.witness.as_ref().map(s));
    }
    Ok("gerzon(23)=276, lemmens_seidel(23,1/5)=276, k=2..10 witnesses match".into())
}

fn criterion_8() -> Check {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let pair = ok(Configuration::approximate_points(2, vec![vec![1.0, 0.0], vec![h, h]], 1e-9, Exec::Sequential))?;
    let d = ok(harmonic_index_design_test(&pair, 4))?;
    ensure!(d.is_design && d.sum.to_f64().abs() <= 1e-9, "circle pair sum {}", d.sum.to_f64());
    let t = ok(tightness_check(&pair))?;
    ensure!(t.tight && !t.contradiction, "circle pair not tight: {}", t.message);

    for n in 3..=8usize {
        let gram: Vec<Vec<Rational>> = (0..=n)
            .map(|i| (0..=n).map(|j| if i == j { big(1) } else { rat(-1, n as i64) }).collect())
            .collect();
        let c = ok(Configuration::exact_gram(gram, Some(n)))?;
        let d = ok(harmonic_index_design_test(&c, 2))?;
        ensure!(d.is_design && d.sum == Scalar::Exact(big(0)), "simplex n={n}: sum {:?}", d.sum);
    }

    let mut vectors = Vec::new();
    for a in 0..8 {
        for b in a + 1..8 {
            vectors.push((0..8).map(|k| if k == a || k == b { 3i64 } else { -1 }).collect::<Vec<_>>());
        }
    }
    let gram: Vec<Vec<Rational>> = vectors
        .iter()
        .map(|u| vectors.iter().map(|v| rat(u.iter().zip(v).map(|(x, y)| x * y).sum(), 24)).collect())
        .collect();
    let c = ok(Configuration::exact_gram(gram, Some(7)))?;
    let p = profile(&c);
    ensure!(p.equiangular_with == Some(Scalar::Exact(rat(1, 3))), "28 lines: {:?}", p.equiangular_with);
    ensure!(p.rank == Some(7), "28 lines: rank {:?}", p.rank);
    Ok(format!("circle pair tight (sum {:.1e}), simplex t=2 for n=3..8, 28 lines alpha=1/3 rank 7", d.sum.to_f64()))
}

fn sphere_point(y: &[Rational]) -> Vec<Rational> {
    let s: Rational = y.iter().map(|v| v * v).sum();
    let d = &s + big(1);
    let mut p: Vec<Rational> = y.iter().map(|v| big(2) * v / &d).collect();
    p.push((&s - big(1)) / &d);
    p
}

fn verify_outcome(sys: &LinearSystem, objective: &[Rational], solver: &Simplex) -> Result<(), String> {
    match ok(solver.feasibility(sys))? {
        Feasibility::Feasible(x) => ensure!(sys.is_feasible_point(&x), "feasible point violates the system"),
        Feasibility::Infeasible(cert) => ok(cert.verify(sys))?,
    }
    match ok(solver.maximize(sys, objective))? {
        LpOutcome::Optimal(opt) => ok(opt.verify(sys, objective))?,
        LpOutcome::Infeasible(cert) => ok(cert.verify(sys))?,
        LpOutcome::Unbounded { point, ray } => {
            let gain: Rational = objective.iter().zip(&ray).map(|(c, r)| c * r).sum();
            ensure!(sys.is_feasible_point(&point), "unbounded start point infeasible");
            ensure!(ray.iter().all(|r| !r.is_negative()) && gain.is_positive(), "bad ray");
            for row in &sys.rows {
                let a: Rational = row.coeffs.iter().zip(&ray).map(|(c, r)| c * r).sum();
                let fine = match row.sense {
                    Sense::Ge => !a.is_negative(),
                    Sense::Le => !a.is_positive(),
                    Sense::Eq => a.is_zero(),
                };
                ensure!(fine, "ray leaves the feasible region");
            }
        }
    }
    Ok(())
}

fn criterion_9() -> Check {
    for n in 2..=12usize {
        for l in 0..=10usize {
            let v = ok(gegenbauer_eval(n, l, &Rational::one()))?;
            ensure!(v.is_one(), "P^{n}_{l}(1) = {}", s(&v));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x9);
    for case in 0..100 {
        let n = rng.gen_range(2..6usize);
        let m = rng.gen_range(1..12usize);
        let pts: Vec<Vec<Rational>> = (0..m)
            .map(|_| {
                let y: Vec<Rational> = (0..n - 1).map(|_| rat(rng.gen_range(-9..10), rng.gen_range(1..6))).collect();
                sphere_point(&y)
            })
            .collect();
        let c = ok(Configuration::exact_points(n, pts, Exec::Sequential))?;
        let t = rng.gen_range(1..7usize);
        let d = ok(harmonic_index_design_test(&c, t))?;
        ensure!(!d.sum.as_exact().unwrap().is_negative(), "set {case}: negative sum {:?}", d.sum);
    }

    let solver = Simplex::default();
    let mut solves = 0;
    for case in 0..300 {
        let vars = rng.gen_range(1..5usize);
        let mut sys = LinearSystem::new(vars);
        for _ in 0..rng.gen_range(1..6) {
            let coeffs = (0..vars).map(|_| big(rng.gen_range(-5..6))).collect();
            let sense = [Sense::Ge, Sense::Le, Sense::Eq][rng.gen_range(0..3)];
            sys.rows.push(Row::new(coeffs, sense, big(rng.gen_range(-5..6))));
        }
        let objective: Vec<Rational> = (0..vars).map(|_| big(rng.gen_range(-3..4))).collect();
        verify_outcome(&sys, &objective, &solver).map_err(|e| format!("system {case}: {e}"))?;
        solves += 2;
    }
    Ok(format!("normalization n<=12 l<=10, 100 sums >= 0, {solves} simplex answers re-verified, 0 failures"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("corollary table", criterion_1),
        ("nonexistence certificate", criterion_2),
        ("three-point calibration", criterion_3),
        ("proof replay", criterion_4),
        ("LP agreement", criterion_5),
        ("monotonicity and rescaling", criterion_6),
        ("classical bounds", criterion_7),
        ("design checks", criterion_8),
        ("property suites", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match result {
            Ok(detail) => println!("PASS {}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
