//! Norm of the projection `P_y x = x - <f, x> y` onto `ker f`.
//!
//! Row `j` of `P_y` is the functional `e_j - y_j f`, of norm
//! `|1 - h_j y_j| + |y_j| (1 - |h_j|)` when `||f|| = 1`. Rows beyond the atomic
//! support contribute `1 + |y_j|`, whose supremum over the tail is `1 + t`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::functional_model::{ExtendedVector, HyperplaneFunctional};
use crate::json;
use crate::scalar::Scalar;

/// Accepted deviation of `<f, y>` from 1.
pub const PAIRING_TOLERANCE: f64 = 1e-10;

/// Largest number of coordinates `brute_force_norm` will enumerate.
pub const MAX_ENUMERATION_COORDS: usize = 24;

/// Per-row contributions to `||P_y||`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormReport<S = f64> {
    pub per_coord: Vec<f64>,
    pub tail_value: f64,
    pub norm: f64,
    pub pairing: S,
}

fn check_lengths<S: Scalar>(f: &HyperplaneFunctional<S>, y: &ExtendedVector<S>) -> Result<()> {
    if f.dim() != y.prefix().len() {
        return Err(Error::LengthMismatch { expected: f.dim(), actual: y.prefix().len() });
    }
    Ok(())
}

/// `<f, y> = sum_j h_j y_j + gamma s`.
pub fn pairing<S: Scalar>(f: &HyperplaneFunctional<S>, y: &ExtendedVector<S>) -> Result<S> {
    check_lengths(f, y)?;
    let atomic = f.atomic().iter().zip(y.prefix()).map(|(&h, &v)| h * v);
    let singular = y.tail_pair().scale(f.singular_weight());
    Ok(S::sum(atomic.chain(std::iter::once(singular))))
}

/// Norm of row `j`: `|1 - h y| + |y| (1 - |h|)`.
pub fn row_norm<S: Scalar>(h: S, y: S) -> f64 {
    (S::from_real(1.0) - h * y).modulus() + y.modulus() * (1.0 - h.modulus())
}

fn check_projection<S: Scalar>(p: S) -> Result<()> {
    if (p - S::from_real(1.0)).modulus() > PAIRING_TOLERANCE {
        return Err(Error::NotAProjection(p.json_text()));
    }
    Ok(())
}

/// Exact norm of `P_y` on the modeled space.
pub fn operator_norm<S: Scalar>(f: &HyperplaneFunctional<S>, y: &ExtendedVector<S>) -> Result<NormReport<S>> {
    let p = pairing(f, y)?;
    check_projection(p)?;
    let per_coord: Vec<f64> = f.atomic().iter().zip(y.prefix()).map(|(&h, &v)| row_norm(h, v)).collect();
    let tail_value = 1.0 + y.tail_mag();
    let norm = per_coord.iter().copied().fold(tail_value, f64::max);
    Ok(NormReport { per_coord, tail_value, norm, pairing: p })
}

/// Maximizes `||P_y x||_inf` over the sign vectors `x` of a finite
/// truncation: the prefix plus `tail_coords` extra coordinates where `y`
/// alternates `+t, -t` and `h` vanishes.
///
/// The singular part is invisible on finitely supported `x`, so for
/// `gamma > 0` this under-approximates; for `gamma = 0` it is exact.
pub fn brute_force_norm(f: &HyperplaneFunctional<f64>, y: &ExtendedVector<f64>, tail_coords: usize) -> Result<f64> {
    check_lengths(f, y)?;
    if f.has_singular_part() && tail_coords == 0 {
        return Err(Error::Precondition("a singular part needs at least one tail coordinate".into()));
    }
    let coords = f.dim() + tail_coords;
    if coords > MAX_ENUMERATION_COORDS {
        return Err(Error::EnumerationTooLarge(coords));
    }
    if coords == 0 {
        return Err(Error::Precondition("nothing to enumerate".into()));
    }

    let t = y.tail_mag();
    let ys: Vec<f64> = y
        .prefix()
        .iter()
        .copied()
        .chain((0..tail_coords).map(|i| if i % 2 == 0 { t } else { -t }))
        .collect();
    let hs: Vec<f64> = f.atomic().iter().copied().chain(std::iter::repeat_n(0.0, tail_coords)).collect();

    let eval = |mask: u64| -> f64 {
        // x and -x give the same value, so the first sign is fixed to +1
        let x = |i: usize| if i == 0 || mask & (1 << (i - 1)) != 0 { 1.0 } else { -1.0 };
        let hx: f64 = hs.iter().enumerate().map(|(i, h)| h * x(i)).sum();
        ys.iter().enumerate().map(|(i, yi)| (x(i) - hx * yi).abs()).fold(0.0, f64::max)
    };

    let count = 1u64 << (coords - 1);
    let best = if coords >= 14 {
        (0..count).into_par_iter().map(eval).reduce(|| 0.0, f64::max)
    } else {
        (0..count).map(eval).fold(0.0, f64::max)
    };
    Ok(best)
}

/// Replaces a complex `w` by `Re w`, which keeps `<f, w> = 1` and does not
/// increase the norm when the atomic coefficients are nonnegative reals.
pub fn real_part_reduce<S: Scalar>(f: &HyperplaneFunctional<S>, w: &ExtendedVector<Complex64>) -> Result<ExtendedVector<f64>> {
    if f.dim() != w.prefix().len() {
        return Err(Error::LengthMismatch { expected: f.dim(), actual: w.prefix().len() });
    }
    if f.atomic().iter().any(|h| !h.is_real() || h.re() < 0.0) {
        return Err(Error::Precondition(
            "non-real atomic coefficients: sign-normalize the functional first".into(),
        ));
    }
    let lifted = HyperplaneFunctional::from_parts_unchecked(
        f.atomic().iter().map(|h| Complex64::new(h.re(), 0.0)).collect(),
        f.singular_weight(),
        f.singular_attains(),
    );
    check_projection(pairing(&lifted, w)?)?;
    Ok(w.real_part())
}

/// Truncated lower-bound construction for a purely singular functional.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundWitness {
    /// Index of the tail coordinate used (first coordinate past the prefix).
    pub coordinate: usize,
    /// Guaranteed `|y_j|` at that coordinate: `t - eps`.
    pub y_magnitude: f64,
    /// Guaranteed `<g, x>` for the unit tail vector `x`: `1 - eps`.
    pub x_pairing: f64,
    /// `w_j = -sgn(<g, x>) sgn(y_j)`; `x^1 = w + x` has norm one.
    pub w_value: f64,
    /// `|(P x^1)_j| = 1 + |<g, x>| |y_j|`.
    pub bound: f64,
}

pub fn lower_bound_witness<S: Scalar>(f: &HyperplaneFunctional<S>, y: &ExtendedVector<S>, eps: f64) -> Result<LowerBoundWitness> {
    if f.dim() != 0 || (f.singular_weight() - 1.0).abs() > crate::functional_model::NORM_TOLERANCE {
        return Err(Error::Precondition("the witness needs a purely singular functional (gamma = 1)".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::OutOfRange(format!("eps = {eps} outside (0, 1)")));
    }
    check_projection(pairing(f, y)?)?;
    let y_magnitude = (y.tail_mag() - eps).max(0.0);
    let x_pairing = 1.0 - eps;
    Ok(LowerBoundWitness {
        coordinate: y.prefix().len(),
        y_magnitude,
        x_pairing,
        w_value: -1.0,
        bound: 1.0 + x_pairing * y_magnitude,
    })
}

impl<S: Scalar> Serialize for NormReport<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut st = serializer.serialize_struct("NormReport", 4)?;
        st.serialize_field("per_coord", &json::list(&self.per_coord))?;
        st.serialize_field("tail_value", &json::real(self.tail_value))?;
        st.serialize_field("norm", &json::real(self.norm))?;
        st.serialize_field("pairing", &json::scalar(self.pairing))?;
        st.end()
    }
}
