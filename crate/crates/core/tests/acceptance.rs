//! End-to-end acceptance checks. Prints one line per criterion and exits
//! nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use projconst::closed_form::{blatter_cheney, curve_g, h_an};
use projconst::sweep::agreement_sweep;
use projconst::{
    brute_force_norm, conjugate_vector, design_for_target, lower_bound_witness, min_projection_norm, mixed_lambda,
    operator_norm, real_part_reduce, sign_normalize, truncation_gaps, verify_certificate, BigRational, CertificateKind,
    Complex64, ExtendedVector, HyperplaneFunctional,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SYMMETRIC_FORMULA_TOL: f64 = 1e-12;
const SYMMETRIC_SOLVER_TOL: f64 = 1e-8;
const SYMMETRIC_BUDGET: Duration = Duration::from_secs(1);
const GAP_TOL: f64 = 1e-10;
const SWEEP_COUNT: usize = 500;
const SWEEP_TOL: f64 = 1e-7;
const SWEEP_BUDGET: Duration = Duration::from_secs(10);
const DESIGN_TARGETS: [f64; 8] = [1.05, 1.1, 1.3, 1.5, 1.7, 1.9, 1.99, 2.0];
const DESIGN_SOLVER_TOL: f64 = 1e-10;
const DESIGN_TARGET_TOL: f64 = 1e-9;
const DESIGN_GAP_CEILING: f64 = 1e-3;
const CURVE_SAMPLES: usize = 50;
const CURVE_TOL: f64 = 1e-12;
const GRID_STEP: f64 = 1e-3;
const GRID_RANGE: (f64, f64) = (-0.5, 3.0);
const GRID_TOL: f64 = 1e-3;
const ENUMERATION_CASES: usize = 1000;
const ENUMERATION_TOL: f64 = 1e-12;
const ORACLE_BUDGET: Duration = Duration::from_secs(60);
const COMPLEX_CASES: usize = 200;
const COMPLEX_SLACK: f64 = 1e-12;
const INVARIANCE_CASES: usize = 200;
const INVARIANCE_SOLVER_TOL: f64 = 1e-10;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, budget: Duration) -> Result<(), String> {
    let used = start.elapsed();
    ensure(used < budget, || format!("took {used:?}, budget {budget:?}"))
}

fn symmetric_kernels() -> Outcome {
    let start = Instant::now();
    let mut worst_formula = 0.0f64;
    let mut worst_solver = 0.0f64;
    for n in 3..=12usize {
        let expected = 2.0 - 2.0 / n as f64;
        let h = vec![1.0 / n as f64; n];
        worst_formula = worst_formula.max((blatter_cheney(&h).map_err(|e| e.to_string())? - expected).abs());
        let exact = blatter_cheney(&vec![q(1, n as i64); n]).map_err(|e| e.to_string())?;
        ensure(exact == q(2 * n as i64 - 2, n as i64), || format!("n = {n}: exact value {exact}"))?;
        let f = HyperplaneFunctional::new(h, 0.0, true).map_err(|e| e.to_string())?;
        let solved = min_projection_norm(&f, 1e-9).map_err(|e| e.to_string())?;
        worst_solver = worst_solver.max((solved.lambda - expected).abs());
    }
    ensure(worst_formula <= SYMMETRIC_FORMULA_TOL, || format!("formula error {worst_formula:e}"))?;
    ensure(worst_solver <= SYMMETRIC_SOLVER_TOL, || format!("solver error {worst_solver:e}"))?;
    within_budget(start, SYMMETRIC_BUDGET)?;
    Ok(format!("formula err {worst_formula:.1e}, solver err {worst_solver:.1e}"))
}

fn pure_singular() -> Outcome {
    let attaining = HyperplaneFunctional::<f64>::new(vec![], 1.0, true).map_err(|e| e.to_string())?;
    let solved = min_projection_norm(&attaining, 1e-9).map_err(|e| e.to_string())?;
    ensure(solved.lambda == 2.0 && solved.attained, || format!("attaining case gave {solved:?}"))?;
    let y = solved.minimizer.ok_or("missing minimizer")?;
    let norm = operator_norm(&attaining, &y).map_err(|e| e.to_string())?.norm;
    ensure(norm == 2.0, || format!("witness norm {norm}"))?;

    let open = HyperplaneFunctional::<f64>::new(vec![], 1.0, false).map_err(|e| e.to_string())?;
    let solved = min_projection_norm(&open, 1e-9).map_err(|e| e.to_string())?;
    ensure(solved.lambda == 2.0 && !solved.attained, || format!("non-attaining case gave {solved:?}"))?;
    let gaps = truncation_gaps(&open, &[11, 101, 1001]).map_err(|e| e.to_string())?;
    for (&m, &d) in gaps.levels.iter().zip(&gaps.gaps) {
        let expected = 1.0 / (m as f64 - 1.0);
        ensure((d - expected).abs() <= GAP_TOL, || format!("m = {m}: gap {d}, expected {expected}"))?;
    }
    let probe = ExtendedVector::new(vec![], 1.5, 1.0).map_err(|e| e.to_string())?;
    let w = lower_bound_witness(&open, &probe, 1e-3).map_err(|e| e.to_string())?;
    ensure(w.bound <= operator_norm(&open, &probe).map_err(|e| e.to_string())?.norm, || "witness bound exceeds norm".into())?;
    Ok(format!("gaps {:?}", gaps.gaps))
}

fn formula_sweep() -> Outcome {
    let start = Instant::now();
    let rows = agreement_sweep(2024, SWEEP_COUNT, 1e-9).map_err(|e| e.to_string())?;
    ensure(rows.len() == SWEEP_COUNT, || format!("{} rows", rows.len()))?;
    let worst = rows.iter().map(|r| r.delta.abs()).fold(0.0, f64::max);
    ensure(worst <= SWEEP_TOL, || format!("max |delta| {worst:e}"))?;
    within_budget(start, SWEEP_BUDGET)?;
    Ok(format!("{SWEEP_COUNT} instances, max |delta| {worst:.1e}"))
}

fn designer_grid() -> Outcome {
    let mut worst = 0.0f64;
    for &target in &DESIGN_TARGETS {
        let c = design_for_target(target, DESIGN_SOLVER_TOL).map_err(|e| format!("target {target}: {e}"))?;
        ensure(verify_certificate(&c).map_err(|e| e.to_string())?, || format!("target {target}: verification failed"))?;
        let err = (c.lambda_closed_form - target).abs();
        worst = worst.max(err);
        ensure(err <= DESIGN_TARGET_TOL, || format!("target {target}: closed form {}", c.lambda_closed_form))?;
        if let CertificateKind::Mixed(_) = c.kind {
            let g = &c.gap_evidence;
            let last = g.levels.iter().position(|&m| m == 10_000).map(|i| g.gaps[i]);
            ensure(g.is_strictly_positive() && g.is_nonincreasing(), || format!("target {target}: gaps {:?}", g.gaps))?;
            ensure(last.is_some_and(|d| d <= DESIGN_GAP_CEILING), || format!("target {target}: gap at 10^4 {last:?}"))?;
        }
    }
    Ok(format!("{} targets, max |closed - target| {worst:.1e}", DESIGN_TARGETS.len()))
}

fn curve_endpoints() -> Outcome {
    let mut worst = 0.0f64;
    for n in 3..=10usize {
        let right = curve_g(n, q(1, 1)).map_err(|e| e.to_string())?;
        ensure(right == q(2 * n as i64 - 2, n as i64), || format!("n = {n}: g(1) = {right}"))?;
        let left = curve_g(n, q(1, n as i64 - 1)).map_err(|e| e.to_string())?;
        ensure(left == q(1, 1), || format!("n = {n}: g(1/(n-1)) = {left}"))?;
        let float_right = curve_g(n, 1.0).map_err(|e| e.to_string())?;
        ensure((float_right - (2.0 - 2.0 / n as f64)).abs() <= 4.0 * f64::EPSILON, || format!("n = {n}: float g(1) = {float_right}"))?;
        let lo = 1.0 / (n as f64 - 1.0);
        for k in 0..CURVE_SAMPLES {
            let a = lo + (1.0 - lo) * (k as f64 + 0.5) / CURVE_SAMPLES as f64;
            let direct = blatter_cheney(&h_an(n, a).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            worst = worst.max((curve_g(n, a).map_err(|e| e.to_string())? - direct).abs());
        }
    }
    ensure(worst <= CURVE_TOL, || format!("interior error {worst:e}"))?;
    Ok(format!("interior err {worst:.1e}"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let grid: Vec<f64> = (1..=9).map(|i| i as f64 * 0.05).collect();
    let mut triples = Vec::new();
    for (i, &a) in grid.iter().enumerate() {
        for (j, &b) in grid.iter().enumerate() {
            let c = 1.0 - a - b;
            let k = (c / 0.05).round() as usize;
            if (1..=9).contains(&k) && i + j + k + 2 == 20 {
                triples.push([a, b, c]);
            }
        }
    }
    let mut worst_grid = 0.0f64;
    for h in &triples {
        let f = HyperplaneFunctional::new(h.to_vec(), 0.0, true).map_err(|e| e.to_string())?;
        let lambda = min_projection_norm(&f, 1e-9).map_err(|e| e.to_string())?.lambda;
        let searched = common::grid_search_lambda(*h, GRID_STEP, GRID_RANGE.0, GRID_RANGE.1);
        ensure(searched >= lambda - 1e-9, || format!("{h:?}: grid {searched} below solver {lambda}"))?;
        worst_grid = worst_grid.max(searched - lambda);
    }
    ensure(worst_grid <= GRID_TOL, || format!("grid excess {worst_grid:e}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_enum = 0.0f64;
    for _ in 0..ENUMERATION_CASES {
        let f = common::random_real_functional(&mut rng, 12, Some(0.0), true);
        let y = common::random_real_vector(&mut rng, &f);
        let exact = operator_norm(&f, &y).map_err(|e| e.to_string())?.norm;
        let enumerated = brute_force_norm(&f, &y, 1).map_err(|e| e.to_string())?;
        worst_enum = worst_enum.max((exact - enumerated).abs() / exact.max(1.0));
    }
    ensure(worst_enum <= ENUMERATION_TOL, || format!("enumeration err {worst_enum:e}"))?;
    within_budget(start, ORACLE_BUDGET)?;
    Ok(format!("{} grid functionals, grid excess {worst_grid:.1e}, enumeration err {worst_enum:.1e}", triples.len()))
}

fn complex_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..COMPLEX_CASES {
        let attains = rng.gen();
        let base = common::random_real_functional(&mut rng, 8, None, attains);
        let (f, _) = sign_normalize(&base);
        let fc = f.to_complex();
        let w = common::random_complex_vector(&mut rng, &fc);
        let y = real_part_reduce(&f, &w).map_err(|e| e.to_string())?;
        let before = operator_norm(&fc, &w).map_err(|e| e.to_string())?.norm;
        let after = operator_norm(&f, &y).map_err(|e| e.to_string())?.norm;
        worst = worst.max(after - before);
        ensure(after <= before + COMPLEX_SLACK, || format!("{after} > {before}"))?;
    }
    Ok(format!("{COMPLEX_CASES} cases, max (reduced - original) {worst:.1e}"))
}

fn invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..INVARIANCE_CASES {
        let attains = rng.gen();
        let f = common::random_real_functional(&mut rng, 8, None, attains);
        let units: Vec<Complex64> = (0..f.dim()).map(|_| common::random_quarter_turn(&mut rng)).collect();
        let fc = common::rotate(&f, &units);
        let w = common::random_complex_vector(&mut rng, &fc);
        let (g, t) = sign_normalize(&fc);
        let z = conjugate_vector(&t, &w).map_err(|e| e.to_string())?;
        let before = operator_norm(&fc, &w).map_err(|e| e.to_string())?.norm;
        let after = operator_norm(&g, &z).map_err(|e| e.to_string())?.norm;
        ensure(before == after, || format!("complex norm changed: {before} vs {after}"))?;

        let y = common::random_real_vector(&mut rng, &f);
        let (fr, tr) = sign_normalize(&f);
        let yr = conjugate_vector(&tr, &y).map_err(|e| e.to_string())?;
        let before = operator_norm(&f, &y).map_err(|e| e.to_string())?.norm;
        let after = operator_norm(&fr, &yr).map_err(|e| e.to_string())?.norm;
        ensure(before == after, || format!("real norm changed: {before} vs {after}"))?;

        let a = min_projection_norm(&f, 1e-12).map_err(|e| e.to_string())?.lambda;
        let b = min_projection_norm(&g.to_real().map_err(|e| e.to_string())?, 1e-12).map_err(|e| e.to_string())?.lambda;
        worst = worst.max((a - b).abs());
        if fr.atomic_sup() < 0.5 {
            ensure((mixed_lambda(&fr).unwrap() - b).abs() <= 1e-7, || "formula drift".into())?;
        }
    }
    ensure(worst <= INVARIANCE_SOLVER_TOL, || format!("solver drift {worst:e}"))?;
    Ok(format!("{INVARIANCE_CASES} conjugations, solver drift {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("symmetric kernels", symmetric_kernels),
        ("pure singular dichotomy", pure_singular),
        ("formula vs solver sweep", formula_sweep),
        ("designer grid", designer_grid),
        ("curve endpoints", curve_endpoints),
        ("oracle equivalence", oracle_equivalence),
        ("complex reduction", complex_reduction),
        ("isometry invariance", invariance),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL  {name} ({elapsed:.2?}): {detail}", i + 1);
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
