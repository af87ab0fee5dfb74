//! Constructs, for a target `lambda` in `(1, 2]`, a hyperplane whose
//! projection constant is `lambda` but which admits no minimal projection,
//! and packages the construction as a self-checking certificate.
//!
//! For `lambda < 2` the functional is `f_{n,a,b} = (1-b) g + b h_{a,n}` with
//! `g` singular and non-attaining. `n` is the smallest integer with
//! `2 - 2/n > lambda`, `b` runs through `1 - 2^-k` until the family brackets
//! `lambda` over `a`, and `a` is then found by bisection. For `lambda = 2` the
//! functional is purely singular.

use serde::de::{Deserialize, Deserializer, Error as _};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::closed_form::{lambda_f_nab, mixed_lambda, FamilyParams};
use crate::error::{Error, Result};
use crate::functional_model::HyperplaneFunctional;
use crate::json;
use crate::minimax_solver::{min_projection_norm, truncation_gaps, GapSequence};

pub const DEFAULT_GAP_LEVELS: [u64; 4] = [10, 100, 1_000, 10_000];

/// Last exponent tried in the schedule `b = 1 - 2^-k`.
pub const MAX_SCHEDULE_STEPS: i32 = 40;

/// Certificate tolerances must lie strictly inside this range.
pub const TOLERANCE_RANGE: (f64, f64) = (1e-12, 1e-4);

const MAX_PARAMETER_STEPS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub enum CertificateKind {
    Mixed(FamilyParams<f64>),
    PureSingular,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleCertificate {
    pub target: f64,
    pub kind: CertificateKind,
    pub functional: HyperplaneFunctional<f64>,
    pub lambda_closed_form: f64,
    pub lambda_solver: f64,
    pub gap_evidence: GapSequence,
    pub tolerance: f64,
}

/// Smallest `n >= 3` with `2 - 2/n > lambda`.
pub fn smallest_admissible_n(lambda: f64) -> Result<usize> {
    if !(lambda > 1.0 && lambda < 2.0) {
        return Err(Error::OutOfRange(format!("target {lambda} outside (1, 2)")));
    }
    let bound = |n: usize| 2.0 - 2.0 / n as f64;
    let mut n = ((2.0 / (2.0 - lambda)).floor() as usize).max(3);
    while bound(n) <= lambda {
        n += 1;
    }
    while n > 3 && bound(n - 1) > lambda {
        n -= 1;
    }
    Ok(n)
}

/// `b = 1 - 2^-k`.
pub fn schedule_b(k: i32) -> f64 {
    1.0 - 2f64.powi(-k)
}

fn lambda_at(n: usize, a: f64, b: f64) -> Result<f64> {
    lambda_f_nab(&FamilyParams::new(n, a, b)?)
}

fn check_target(target: f64, tol: f64) -> Result<()> {
    if !(target > 1.0 && target <= 2.0) {
        return Err(Error::OutOfRange(format!("target {target} outside (1, 2]")));
    }
    let (lo, hi) = TOLERANCE_RANGE;
    if !(tol > lo && tol < hi) {
        return Err(Error::OutOfRange(format!("tolerance {tol} outside ({lo}, {hi})")));
    }
    Ok(())
}

/// First `b` of the schedule with `lambda(n, 1/(n-1), b) < target < lambda(n, 1, b)`.
pub fn bracket_b(n: usize, target: f64) -> Result<f64> {
    let a_min = 1.0 / (n as f64 - 1.0);
    for k in 1..=MAX_SCHEDULE_STEPS {
        let b = schedule_b(k);
        if lambda_at(n, a_min, b)? < target && target < lambda_at(n, 1.0, b)? {
            return Ok(b);
        }
    }
    Err(Error::Internal(format!("no b = 1 - 2^-k with k <= {MAX_SCHEDULE_STEPS} brackets {target} for n = {n}")))
}

/// Bisection on the continuous map `a -> lambda(n, a, b) - target`, which is
/// negative at `a = 1/(n-1)` and positive at `a = 1`.
fn solve_for_a(n: usize, b: f64, target: f64, tol: f64) -> Result<f64> {
    let mut lo = 1.0 / (n as f64 - 1.0);
    let mut hi = 1.0;
    let mut best = (f64::INFINITY, lo);
    for _ in 0..MAX_PARAMETER_STEPS {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let excess = lambda_at(n, mid, b)? - target;
        if excess.abs() < best.0 {
            best = (excess.abs(), mid);
        }
        if excess.abs() <= 0.5 * tol {
            break;
        }
        if excess < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if best.0 > tol {
        return Err(Error::Internal(format!("bisection on a stalled {} away from {target}", best.0)));
    }
    Ok(best.1)
}

pub fn design_for_target(target: f64, tol: f64) -> Result<ExampleCertificate> {
    design_for_target_with_levels(target, tol, &DEFAULT_GAP_LEVELS)
}

pub fn design_for_target_with_levels(target: f64, tol: f64, levels: &[u64]) -> Result<ExampleCertificate> {
    check_target(target, tol)?;

    let (kind, functional, lambda_closed_form) = if target == 2.0 {
        let f = HyperplaneFunctional::new(Vec::new(), 1.0, false)?;
        let closed = mixed_lambda(&f)?;
        (CertificateKind::PureSingular, f, closed)
    } else {
        let n = smallest_admissible_n(target)?;
        let b = bracket_b(n, target)?;
        let a = solve_for_a(n, b, target, tol)?;
        let params = FamilyParams::new(n, a, b)?;
        let f = params.functional()?;
        let closed = lambda_f_nab(&params)?;
        (CertificateKind::Mixed(params), f, closed)
    };

    let solved = min_projection_norm(&functional, tol)?;
    let gap_evidence = truncation_gaps(&functional, levels)?;
    let cert = ExampleCertificate {
        target,
        kind,
        functional,
        lambda_closed_form,
        lambda_solver: solved.lambda,
        gap_evidence,
        tolerance: tol,
    };
    if !verify_certificate(&cert)? {
        return Err(Error::Internal(format!("certificate for {target} failed its own checks")));
    }
    Ok(cert)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Recomputes everything a certificate claims and checks its invariants.
///
/// Structural problems (parameters out of range, mismatched gap arrays) are
/// errors; a well-formed certificate whose numbers do not hold up gives
/// `Ok(false)`.
pub fn verify_certificate(c: &ExampleCertificate) -> Result<bool> {
    let tol = c.tolerance;
    let (lo, hi) = TOLERANCE_RANGE;
    if !(tol > lo && tol < hi) {
        return Err(Error::MalformedCertificate(format!("tolerance {tol} outside ({lo}, {hi})")));
    }
    if c.gap_evidence.levels.len() != c.gap_evidence.gaps.len() || c.gap_evidence.levels.is_empty() {
        return Err(Error::MalformedCertificate("gap levels and values do not line up".into()));
    }
    if !(c.target > 1.0 && c.target <= 2.0) {
        return Ok(false);
    }

    let closed = match &c.kind {
        CertificateKind::Mixed(p) => {
            let params = FamilyParams::new(p.n, p.a, p.b)
                .map_err(|e| Error::MalformedCertificate(e.to_string()))?;
            if params.b >= 1.0 || params.n < 3 || smallest_admissible_n(c.target).ok() != Some(params.n) {
                return Ok(false);
            }
            let expected = params.atomic().map_err(|e| Error::MalformedCertificate(e.to_string()))?;
            let same_functional = c.functional.dim() == expected.len()
                && c.functional.atomic().iter().zip(&expected).all(|(x, y)| close(*x, *y, 1e-15))
                && close(c.functional.singular_weight(), params.singular_weight(), 1e-15)
                && !c.functional.singular_attains();
            if !same_functional {
                return Ok(false);
            }
            match lambda_f_nab(&params) {
                Ok(v) => v,
                Err(_) => return Ok(false),
            }
        }
        CertificateKind::PureSingular => {
            let f = &c.functional;
            if f.dim() != 0 || f.singular_weight() != 1.0 || f.singular_attains() {
                return Ok(false);
            }
            mixed_lambda(f)?
        }
    };

    if !close(closed, c.lambda_closed_form, tol) || !close(closed, c.target, tol) {
        return Ok(false);
    }

    let solved = min_projection_norm(&c.functional, tol)?;
    if solved.attained || !close(solved.lambda, closed, 10.0 * tol) || !close(c.lambda_solver, closed, 10.0 * tol) {
        return Ok(false);
    }

    let gaps = &c.gap_evidence;
    if !gaps.is_strictly_positive() || !gaps.is_nonincreasing() {
        return Ok(false);
    }
    let recomputed = truncation_gaps(&c.functional, &gaps.levels)
        .map_err(|e| Error::MalformedCertificate(e.to_string()))?;
    Ok(recomputed.gaps.iter().zip(&gaps.gaps).all(|(x, y)| close(*x, *y, 1e-12)))
}

impl Serialize for ExampleCertificate {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut st = serializer.serialize_struct("ExampleCertificate", 10)?;
        st.serialize_field("target", &json::real(self.target))?;
        match &self.kind {
            CertificateKind::Mixed(p) => {
                st.serialize_field("kind", "mixed")?;
                st.serialize_field("n", &p.n)?;
                st.serialize_field("a", &json::real(p.a))?;
                st.serialize_field("b", &json::real(p.b))?;
            }
            CertificateKind::PureSingular => {
                st.serialize_field("kind", "pure_singular")?;
                st.serialize_field("n", &None::<usize>)?;
                st.serialize_field("a", &None::<f64>)?;
                st.serialize_field("b", &None::<f64>)?;
            }
        }
        st.serialize_field("functional", &self.functional)?;
        st.serialize_field("lambda_closed_form", &json::real(self.lambda_closed_form))?;
        st.serialize_field("lambda_solver", &json::real(self.lambda_solver))?;
        st.serialize_field("gaps", &self.gap_evidence)?;
        st.serialize_field("tolerance", &json::real(self.tolerance))?;
        st.end()
    }
}

#[derive(serde::Deserialize)]
struct CertificateRepr {
    target: f64,
    kind: String,
    n: Option<usize>,
    a: Option<f64>,
    b: Option<f64>,
    functional: HyperplaneFunctional<f64>,
    lambda_closed_form: f64,
    lambda_solver: f64,
    gaps: GapSequence,
    tolerance: f64,
}

impl<'de> Deserialize<'de> for ExampleCertificate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = CertificateRepr::deserialize(deserializer)?;
        let kind = match (r.kind.as_str(), r.n, r.a, r.b) {
            ("mixed", Some(n), Some(a), Some(b)) => CertificateKind::Mixed(FamilyParams { n, a, b }),
            ("mixed", ..) => return Err(D::Error::custom("mixed certificate needs n, a and b")),
            ("pure_singular", None, None, None) => CertificateKind::PureSingular,
            ("pure_singular", ..) => return Err(D::Error::custom("pure_singular certificate has no parameters")),
            (other, ..) => return Err(D::Error::custom(format!("unknown certificate kind {other:?}"))),
        };
        Ok(ExampleCertificate {
            target: r.target,
            kind,
            functional: r.functional,
            lambda_closed_form: r.lambda_closed_form,
            lambda_solver: r.lambda_solver,
            gap_evidence: r.gaps,
            tolerance: r.tolerance,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_choice() {
        assert_eq!(smallest_admissible_n(1.5).unwrap(), 5);
        assert_eq!(smallest_admissible_n(1.9).unwrap(), 21);
        assert_eq!(smallest_admissible_n(1.05).unwrap(), 3);
        assert_eq!(smallest_admissible_n(1.34).unwrap(), 4);
        assert!(smallest_admissible_n(2.0).is_err());
    }

    #[test]
    fn n_choice_matches_scan() {
        for i in 1..2000 {
            let lambda = 1.0 + i as f64 / 2000.0;
            let scan = (3..).find(|&n| 2.0 - 2.0 / n as f64 > lambda).unwrap();
            assert_eq!(smallest_admissible_n(lambda).unwrap(), scan, "{lambda}");
        }
    }

    #[test]
    fn pure_singular_for_two() {
        let c = design_for_target(2.0, 1e-10).unwrap();
        assert_eq!(c.kind, CertificateKind::PureSingular);
        assert_eq!(c.lambda_closed_form, 2.0);
        assert_eq!(c.lambda_solver, 2.0);
        assert!(c.gap_evidence.is_strictly_positive());
    }

    #[test]
    fn mixed_for_one_and_a_half() {
        let c = design_for_target(1.5, 1e-10).unwrap();
        let CertificateKind::Mixed(p) = &c.kind else { panic!("expected mixed") };
        assert_eq!(p.n, 5);
        assert!(p.b < 1.0);
        assert!((c.lambda_closed_form - 1.5).abs() <= 1e-10);
        let a_min = 1.0 / (p.n as f64 - 1.0);
        assert!(lambda_at(p.n, a_min, p.b).unwrap() < 1.5);
        assert!(lambda_at(p.n, 1.0, p.b).unwrap() > 1.5);
        assert!(verify_certificate(&c).unwrap());
    }

    #[test]
    fn out_of_range_targets() {
        assert!(matches!(design_for_target(1.0, 1e-10), Err(Error::OutOfRange(_))));
        assert!(matches!(design_for_target(2.5, 1e-10), Err(Error::OutOfRange(_))));
        assert!(matches!(design_for_target(1.5, 1e-3), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn tampering_is_detected() {
        let c = design_for_target(1.3, 1e-10).unwrap();
        let mut bad = c.clone();
        if let CertificateKind::Mixed(p) = &mut bad.kind {
            p.b -= 0.05;
        }
        assert!(!verify_certificate(&bad).unwrap());

        let mut bad = c.clone();
        bad.gap_evidence.gaps[1] = 0.0;
        assert!(!verify_certificate(&bad).unwrap());

        let mut bad = c.clone();
        bad.lambda_solver += 1e-6;
        assert!(!verify_certificate(&bad).unwrap());

        let mut bad = c.clone();
        bad.gap_evidence.gaps.pop();
        assert!(matches!(verify_certificate(&bad), Err(Error::MalformedCertificate(_))));

        let mut bad = c;
        if let CertificateKind::Mixed(p) = &mut bad.kind {
            p.n = 1;
        }
        assert!(matches!(verify_certificate(&bad), Err(Error::MalformedCertificate(_))));
    }

    #[test]
    fn json_round_trip() {
        for target in [1.7, 2.0] {
            let c = design_for_target(target, 1e-10).unwrap();
            let text = serde_json::to_string(&c).unwrap();
            let back: ExampleCertificate = serde_json::from_str(&text).unwrap();
            assert_eq!(back, c);
            assert!(verify_certificate(&back).unwrap());
        }
        let c = design_for_target(2.0, 1e-10).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.starts_with(r#"{"target":2,"kind":"pure_singular","n":null,"a":null,"b":null,"functional":{"h":[],"gamma":1,"attains":false}"#), "{text}");
    }

    #[test]
    fn json_rejects_inconsistent_kind() {
        let c = design_for_target(2.0, 1e-10).unwrap();
        let text = serde_json::to_string(&c).unwrap().replace(r#""kind":"pure_singular""#, r#""kind":"mixed""#);
        assert!(serde_json::from_str::<ExampleCertificate>(&text).is_err());
    }
}
