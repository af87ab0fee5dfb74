//! Seeded formula-versus-solver sweeps and samples of the family curve.
//!
//! Instances are drawn sequentially from a single ChaCha stream, then solved
//! in parallel; results come back in instance order, so output depends only
//! on the seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::closed_form::{curve_g, mixed_lambda};
use crate::error::{Error, Result};
use crate::functional_model::HyperplaneFunctional;
use crate::minimax_solver::min_projection_norm;

pub const MAX_SWEEP_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub id: usize,
    pub functional: HyperplaneFunctional<f64>,
    pub closed_form: f64,
    pub solver: f64,
    pub delta: f64,
    pub attained: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub n: usize,
    pub a: f64,
    pub g: f64,
}

/// A random normalized real functional with every `|h_i| < 1/2`.
///
/// Dimension is uniform in `1..=8` and `gamma` uniform in `[0, 1)`; draws
/// that break the coefficient bound are rejected and redrawn.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R) -> HyperplaneFunctional<f64> {
    loop {
        let dim = rng.gen_range(1..=MAX_SWEEP_DIM);
        let gamma: f64 = rng.gen_range(0.0..1.0);
        let raw: Vec<f64> = (0..dim)
            .map(|_| {
                let m: f64 = 1.0 - rng.gen::<f64>();
                if rng.gen_bool(0.5) { m } else { -m }
            })
            .collect();
        let total: f64 = raw.iter().map(|v| v.abs()).sum();
        let h: Vec<f64> = raw.iter().map(|v| v * (1.0 - gamma) / total).collect();
        if h.iter().all(|v| v.abs() < 0.5) {
            if let Ok(f) = HyperplaneFunctional::new(h, gamma, rng.gen_bool(0.5)) {
                return f;
            }
        }
    }
}

pub fn random_instances(seed: u64, count: usize) -> Vec<HyperplaneFunctional<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_instance(&mut rng)).collect()
}

/// Closed form against solver on `count` seeded instances.
pub fn agreement_sweep(seed: u64, count: usize, tol: f64) -> Result<Vec<SweepRow>> {
    random_instances(seed, count)
        .into_par_iter()
        .enumerate()
        .map(|(id, functional)| {
            let closed_form = mixed_lambda(&functional)?;
            let solved = min_projection_norm(&functional, tol)?;
            Ok(SweepRow {
                id,
                closed_form,
                solver: solved.lambda,
                delta: solved.lambda - closed_form,
                attained: solved.attained,
                functional,
            })
        })
        .collect()
}

/// `count` evenly spaced samples of `a -> g(a)` on `[1/(n-1), 1]`, endpoints
/// included.
pub fn curve_samples(n: usize, count: usize) -> Result<Vec<CurveRow>> {
    if count < 2 {
        return Err(Error::OutOfRange(format!("curve needs at least 2 samples, got {count}")));
    }
    if n < 3 {
        return Err(Error::OutOfRange(format!("n = {n} must be at least 3")));
    }
    let lo = 1.0 / (n as f64 - 1.0);
    (0..count)
        .map(|i| {
            let a = if i == count - 1 { 1.0 } else { lo + (1.0 - lo) * i as f64 / (count - 1) as f64 };
            Ok(CurveRow { n, a, g: curve_g(n, a)? })
        })
        .collect()
}
