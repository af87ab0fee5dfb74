//! Projection constant `lambda(ker f) = inf ||P_y||` over all `y` with
//! `<f, y> = 1`, and whether the infimum is attained.
//!
//! For a candidate norm `tau`, coordinate `j` can carry at most
//! `|h_j| * reach(|h_j|, tau)` of the pairing, where `reach` is the right end
//! of the interval `{y : |1 - |h_j| y| + |y| (1 - |h_j|) <= tau}`. The singular
//! part can carry `gamma * (tau - 1)` (since `|s| <= t <= tau - 1`). `tau` is
//! feasible iff these maxima add up to at least 1, which is monotone in `tau`,
//! so the infimum is found by bisection on `[1, 2]`.

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::functional_model::{ExtendedVector, HyperplaneFunctional, NORM_TOLERANCE};
use crate::json;
use crate::numeric::compensated_sum;

pub const MAX_BISECTION_STEPS: usize = 200;

/// Solver tolerances must lie strictly inside this range.
pub const TOLERANCE_RANGE: (f64, f64) = (1e-14, 1e-2);

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Bisection width used for each level of a gap sequence.
const GAP_TOLERANCE: f64 = 1e-13;

/// Why a minimal projection does or does not exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttainmentTag {
    FiniteDimensional,
    SingularAttaining,
    SingularNonAttaining,
    SingularUnused,
}

impl AttainmentTag {
    pub fn as_str(self) -> &'static str {
        match self {
            AttainmentTag::FiniteDimensional => "finite-dimensional",
            AttainmentTag::SingularAttaining => "singular-attaining",
            AttainmentTag::SingularNonAttaining => "singular-non-attaining",
            AttainmentTag::SingularUnused => "singular-unused",
        }
    }
}

impl std::fmt::Display for AttainmentTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    pub lambda: f64,
    pub attained: bool,
    /// Present iff `attained`.
    pub minimizer: Option<ExtendedVector<f64>>,
    pub iterations: usize,
    pub tolerance: f64,
}

/// Excess `lambda_m - lambda` of the problems where the singular pairing is
/// kept off the boundary, `|s| <= (1 - 1/m) t`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapSequence {
    pub levels: Vec<u64>,
    pub gaps: Vec<f64>,
}

impl GapSequence {
    pub fn is_strictly_positive(&self) -> bool {
        self.gaps.iter().all(|&d| d > 0.0)
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.gaps.windows(2).all(|w| w[1] <= w[0])
    }

    pub fn last_gap(&self) -> Option<f64> {
        self.gaps.last().copied()
    }

    /// Positive, nonincreasing, and ending below `threshold`.
    pub fn is_evidence(&self, threshold: f64) -> bool {
        !self.gaps.is_empty()
            && self.levels.len() == self.gaps.len()
            && self.is_strictly_positive()
            && self.is_nonincreasing()
            && self.last_gap().is_some_and(|d| d < threshold)
    }
}

/// Right end of `{y >= 0 : |1 - h y| + y (1 - h) <= tau}` for `h >= 0`.
///
/// Below `1/h` the row norm is `1 + y (1 - 2h)`, above it is `y - 1`.
pub fn coordinate_reach(h: f64, tau: f64) -> f64 {
    match Piece::at(h, tau) {
        Piece::Free => tau - 1.0,
        Piece::Linear => (tau - 1.0) / (1.0 - 2.0 * h),
        Piece::Saturated => tau + 1.0,
    }
}

/// Linear regime of `tau -> h * reach(h, tau)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Piece {
    /// `h = 0`: contributes nothing.
    Free,
    /// `h (tau - 1) / (1 - 2h)`.
    Linear,
    /// `h (tau + 1)`, once `1 + (1 - 2h)/h <= tau`.
    Saturated,
}

impl Piece {
    fn at(h: f64, tau: f64) -> Self {
        if h == 0.0 {
            Piece::Free
        } else if 2.0 * h >= 1.0 || h * (tau + 1.0) >= 1.0 {
            Piece::Saturated
        } else {
            Piece::Linear
        }
    }

    /// `(slope, offset)` with contribution `slope (tau - 1) + offset`.
    fn coefficients(self, h: f64) -> (f64, f64) {
        match self {
            Piece::Free => (0.0, 0.0),
            Piece::Linear => (h / (1.0 - 2.0 * h), 0.0),
            Piece::Saturated => (h, 2.0 * h),
        }
    }
}

/// Pairing budget of a real functional at norm level `tau`, with the
/// singular part scaled by `singular_factor`.
struct Budget {
    magnitudes: Vec<f64>,
    singular: f64,
}

impl Budget {
    fn new(f: &HyperplaneFunctional<f64>, singular_factor: f64) -> Self {
        Self {
            magnitudes: f.atomic().iter().map(|h| h.abs()).collect(),
            singular: f.singular_weight() * singular_factor,
        }
    }

    fn atomic(&self, tau: f64) -> f64 {
        compensated_sum(self.magnitudes.iter().map(|&h| h * coordinate_reach(h, tau)))
    }

    fn total(&self, tau: f64) -> f64 {
        self.atomic(tau) + self.singular * (tau - 1.0)
    }

    fn pieces(&self, tau: f64) -> Vec<Piece> {
        self.magnitudes.iter().map(|&h| Piece::at(h, tau)).collect()
    }

    /// Root of the linear function that agrees with `total` near `tau`.
    fn linear_root(&self, tau: f64) -> Option<f64> {
        let (slopes, offsets): (Vec<f64>, Vec<f64>) = self
            .magnitudes
            .iter()
            .map(|&h| Piece::at(h, tau).coefficients(h))
            .unzip();
        let slope = compensated_sum(slopes.into_iter().chain(std::iter::once(self.singular)));
        let offset = compensated_sum(offsets);
        (slope > 0.0).then(|| 1.0 + (1.0 - offset) / slope)
    }
}

/// Largest achievable `<f, y>` over `y` with `||P_y|| <= tau`.
pub fn max_pairing(f: &HyperplaneFunctional<f64>, tau: f64) -> f64 {
    Budget::new(f, 1.0).total(tau)
}

/// Whether some `y` with `<f, y> = 1` has `||P_y|| <= tau`.
pub fn is_feasible(f: &HyperplaneFunctional<f64>, tau: f64) -> bool {
    tau >= 1.0 && max_pairing(f, tau) >= 1.0
}

struct Solution {
    tau: f64,
    iterations: usize,
    /// The atomic part alone reaches pairing 1 at `tau = 1`.
    atomic_alone: bool,
}

fn check_inputs(f: &HyperplaneFunctional<f64>, tol: f64) -> Result<()> {
    let (lo, hi) = TOLERANCE_RANGE;
    if !(tol > lo && tol < hi) {
        return Err(Error::OutOfRange(format!("tolerance {tol} outside ({lo}, {hi})")));
    }
    let total = f.atomic_l1() + f.singular_weight();
    if (total - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized(total));
    }
    Ok(())
}

fn solve(f: &HyperplaneFunctional<f64>, tol: f64, singular_factor: f64) -> Result<Solution> {
    let budget = Budget::new(f, singular_factor);
    if budget.atomic(1.0) >= 1.0 {
        return Ok(Solution { tau: 1.0, iterations: 0, atomic_alone: true });
    }

    // each coordinate carries at least h (tau - 1), so this level is feasible
    let mut hi = 1.0 + 1.0 / (f.atomic_l1() + budget.singular);
    let mut nudges = 0;
    while budget.total(hi) < 1.0 {
        hi = hi.next_up();
        nudges += 1;
        if nudges > 64 || !hi.is_finite() {
            return Err(Error::OutsideClosedFormRegime);
        }
    }

    let mut lo = 1.0;
    let mut iterations = 0;
    while iterations < MAX_BISECTION_STEPS && hi - lo > tol {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if budget.total(mid) >= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }

    // the bracket sits on a single linear piece once it is narrow enough
    let tau = match budget.linear_root(hi) {
        Some(root) if root >= lo && root <= hi && budget.pieces(root) == budget.pieces(hi) => root,
        _ => hi,
    };
    Ok(Solution { tau, iterations, atomic_alone: false })
}

fn classify(f: &HyperplaneFunctional<f64>, sol: &Solution) -> (bool, AttainmentTag) {
    if !f.has_singular_part() {
        (true, AttainmentTag::FiniteDimensional)
    } else if sol.atomic_alone {
        log::info!("optimum reachable with s = 0; singular part unused");
        (true, AttainmentTag::SingularUnused)
    } else if f.singular_attains() {
        (true, AttainmentTag::SingularAttaining)
    } else {
        // the optimum forces s = t = tau - 1 > 0, which a non-attaining g forbids
        (false, AttainmentTag::SingularNonAttaining)
    }
}

/// A `y` with `<f, y> = 1` and `||P_y|| = tau`: every coordinate at the right
/// end of its feasible interval, scaled uniformly onto the constraint.
/// Coordinates with `h_j = 0` sit at the midpoint 0 of their interval.
fn minimizer(f: &HyperplaneFunctional<f64>, tau: f64, use_singular: bool) -> Result<ExtendedVector<f64>> {
    let reach: Vec<f64> = f
        .atomic()
        .iter()
        .map(|&h| if h == 0.0 { 0.0 } else { coordinate_reach(h.abs(), tau) })
        .collect();
    let atomic = compensated_sum(f.atomic().iter().zip(&reach).map(|(h, r)| h.abs() * r));
    let singular = if use_singular { f.singular_weight() * (tau - 1.0) } else { 0.0 };
    let theta = 1.0 / (atomic + singular);
    let prefix = f.atomic().iter().zip(&reach).map(|(&h, &r)| h.signum() * theta * r).collect();
    let s = if use_singular { theta * (tau - 1.0) } else { 0.0 };
    ExtendedVector::new(prefix, s, s)
}

/// Infimum of `||P_y||` over admissible `y`, with attainment verdict and a
/// minimizer when one exists.
pub fn min_projection_norm(f: &HyperplaneFunctional<f64>, tol: f64) -> Result<SolverResult> {
    check_inputs(f, tol)?;
    let sol = solve(f, tol, 1.0)?;
    let (attained, tag) = classify(f, &sol);
    let minimizer = if attained {
        let use_singular = tag == AttainmentTag::SingularAttaining;
        Some(minimizer(f, sol.tau, use_singular)?)
    } else {
        None
    };
    Ok(SolverResult { lambda: sol.tau, attained, minimizer, iterations: sol.iterations, tolerance: tol })
}

/// Whether a minimal projection onto `ker f` exists, and why.
pub fn attainment_decision(f: &HyperplaneFunctional<f64>) -> Result<(bool, AttainmentTag)> {
    check_inputs(f, DEFAULT_TOLERANCE)?;
    let sol = solve(f, DEFAULT_TOLERANCE, 1.0)?;
    Ok(classify(f, &sol))
}

/// Gaps `lambda_m - lambda` for each level `m >= 2` (strictly increasing).
pub fn truncation_gaps(f: &HyperplaneFunctional<f64>, levels: &[u64]) -> Result<GapSequence> {
    if !f.has_singular_part() || f.singular_attains() {
        return Err(Error::GapUndefined);
    }
    check_inputs(f, GAP_TOLERANCE)?;
    if let Some(&m) = levels.iter().find(|&&m| m < 2) {
        return Err(Error::OutOfRange(format!("gap level {m} must be at least 2")));
    }
    if levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::OutOfRange("gap levels must be strictly increasing".into()));
    }
    let lambda = solve(f, GAP_TOLERANCE, 1.0)?.tau;
    let gaps = levels
        .iter()
        .map(|&m| Ok(solve(f, GAP_TOLERANCE, 1.0 - 1.0 / m as f64)?.tau - lambda))
        .collect::<Result<Vec<f64>>>()?;
    Ok(GapSequence { levels: levels.to_vec(), gaps })
}

impl Serialize for SolverResult {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut st = serializer.serialize_struct("SolverResult", 5)?;
        st.serialize_field("lambda", &json::real(self.lambda))?;
        st.serialize_field("attained", &self.attained)?;
        st.serialize_field("minimizer", &self.minimizer)?;
        st.serialize_field("iterations", &self.iterations)?;
        st.serialize_field("tolerance", &json::real(self.tolerance))?;
        st.end()
    }
}

impl Serialize for GapSequence {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut st = serializer.serialize_struct("GapSequence", 2)?;
        st.serialize_field("levels", &json::integers(&self.levels))?;
        st.serialize_field("gaps", &json::list(&self.gaps))?;
        st.end()
    }
}

#[derive(serde::Deserialize)]
struct GapRepr {
    levels: Vec<u64>,
    gaps: Vec<f64>,
}

impl<'de> serde::Deserialize<'de> for GapSequence {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = GapRepr::deserialize(deserializer)?;
        Ok(GapSequence { levels: r.levels, gaps: r.gaps })
    }
}
