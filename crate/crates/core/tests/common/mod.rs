//! Test-only generators and oracles. Nothing here calls the solver.
#![allow(dead_code)]

use projconst::{Complex64, ExtendedVector, HyperplaneFunctional};
use rand::Rng;

/// `|1 - h y| + |y| (1 - |h|)`, written out independently of the library.
pub fn row(h: f64, y: f64) -> f64 {
    (1.0 - h * y).abs() + y.abs() * (1.0 - h.abs())
}

/// Minimum of `max_j row(h_j, y_j)` over a square grid in the two
/// coordinates with the smallest `|h|`; the remaining coordinate is solved
/// from `<h, y> = 1`. Every grid point is admissible, so the result bounds the
/// true infimum from above.
pub fn grid_search_lambda(h: [f64; 3], step: f64, lo: f64, hi: f64) -> f64 {
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| h[i].abs().partial_cmp(&h[j].abs()).unwrap());
    let (p, q, r) = (h[order[0]], h[order[1]], h[order[2]]);
    let steps = ((hi - lo) / step).round() as usize;
    let mut best = f64::INFINITY;
    for i in 0..=steps {
        let yp = lo + i as f64 * step;
        let row_p = row(p, yp);
        if row_p >= best {
            continue;
        }
        for j in 0..=steps {
            let yq = lo + j as f64 * step;
            let yr = (1.0 - p * yp - q * yq) / r;
            let v = row_p.max(row(q, yq)).max(row(r, yr)).max(1.0);
            if v < best {
                best = v;
            }
        }
    }
    best
}

/// A random real functional with dimension in `1..=max_dim`, random signs and
/// singular weight drawn from `gamma_range`.
pub fn random_real_functional<R: Rng>(rng: &mut R, max_dim: usize, gamma: Option<f64>, attains: bool) -> HyperplaneFunctional<f64> {
    let dim = rng.gen_range(1..=max_dim);
    let raw: Vec<f64> = (0..dim)
        .map(|_| {
            let m = rng.gen_range(0.01..1.0);
            if rng.gen_bool(0.5) { m } else { -m }
        })
        .collect();
    let gamma = gamma.unwrap_or_else(|| rng.gen_range(0.0..0.9));
    let total: f64 = raw.iter().map(|v| v.abs()).sum();
    let h = raw.iter().map(|v| v * (1.0 - gamma) / total).collect();
    HyperplaneFunctional::new(h, gamma, attains).unwrap()
}

/// A random real `y` with `<f, y> = 1`, obtained by rescaling a random draw.
pub fn random_real_vector<R: Rng>(rng: &mut R, f: &HyperplaneFunctional<f64>) -> ExtendedVector<f64> {
    loop {
        let z: Vec<f64> = (0..f.dim()).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let t0: f64 = rng.gen_range(0.0..2.0);
        let s0: f64 = if f.has_singular_part() { rng.gen_range(-t0..=t0) } else { 0.0 };
        let p: f64 = f.atomic().iter().zip(&z).map(|(h, v)| h * v).sum::<f64>() + f.singular_weight() * s0;
        if p.abs() < 0.05 {
            continue;
        }
        let prefix = z.iter().map(|v| v / p).collect();
        let t = t0 / p.abs();
        let s = (s0 / p).clamp(-t, t);
        return ExtendedVector::new(prefix, t, s).unwrap();
    }
}

pub fn random_unit<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// One of `1, i, -1, -i`.
pub fn random_quarter_turn<R: Rng>(rng: &mut R) -> Complex64 {
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)]
        [rng.gen_range(0..4)]
}

/// A complex `w` with `<f, w> = 1`.
pub fn random_complex_vector<R: Rng>(rng: &mut R, f: &HyperplaneFunctional<Complex64>) -> ExtendedVector<Complex64> {
    loop {
        let z: Vec<Complex64> = (0..f.dim())
            .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect();
        let t0: f64 = rng.gen_range(0.0..2.0);
        let s0 = if f.has_singular_part() { random_unit(rng) * rng.gen_range(0.0..=t0) } else { Complex64::new(0.0, 0.0) };
        let p: Complex64 = f.atomic().iter().zip(&z).map(|(h, v)| h * v).sum::<Complex64>() + s0 * f.singular_weight();
        if p.norm() < 0.05 {
            continue;
        }
        let prefix = z.iter().map(|v| v / p).collect();
        let t = t0 / p.norm();
        let mut s = s0 / p;
        if s.norm() > t {
            s = s * (t / s.norm());
        }
        return ExtendedVector::new(prefix, t, s).unwrap();
    }
}

/// Complex functional `|h_j| u_j` built from a real one and unimodular `u_j`.
pub fn rotate(f: &HyperplaneFunctional<f64>, units: &[Complex64]) -> HyperplaneFunctional<Complex64> {
    let atomic = f.atomic().iter().zip(units).map(|(h, u)| u * h.abs()).collect();
    HyperplaneFunctional::new(atomic, f.singular_weight(), f.singular_attains()).unwrap()
}
