//! Functionals `f = h + g` on the sup-norm sequence space and the finite model
//! of the vectors they are paired with.
//!
//! The singular part `g` has no computable representation. It is carried as
//! its norm `gamma` plus a flag recording whether `g` attains its norm. A
//! vector `y` meets `g` only through two numbers: the tail magnitude
//! `t = limsup |y_j|` and the normalized pairing `s = <g, y> / gamma`, subject
//! to `|s| <= t`, with strict inequality (or `s = 0`) when `g` is
//! non-attaining.

use serde::de::{Deserialize, Deserializer, Error as _};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::json;
use crate::numeric::compensated_sum;
use crate::scalar::Scalar;

/// Slack allowed on `||h||_1 + gamma = 1` for double-precision input.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Slack allowed on `|s| <= t` and on `|a_i| = 1`.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-12;

/// A norm-one functional with finitely supported atomic part and a modeled
/// singular part.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperplaneFunctional<S = f64> {
    atomic: Vec<S>,
    singular_weight: f64,
    singular_attains: bool,
}

impl<S: Scalar> HyperplaneFunctional<S> {
    /// Builds a functional that must already satisfy `||h||_1 + gamma = 1`.
    pub fn new(atomic: Vec<S>, singular_weight: f64, singular_attains: bool) -> Result<Self> {
        check_parts(&atomic, singular_weight)?;
        let total = l1_norm(&atomic) + singular_weight;
        if (total - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(total));
        }
        Ok(Self::from_parts_unchecked(atomic, singular_weight, singular_attains))
    }

    /// Rescales both parts by their common total so the result has norm one.
    pub fn normalize(atomic: Vec<S>, singular_weight: f64, singular_attains: bool) -> Result<Self> {
        check_parts(&atomic, singular_weight)?;
        let total = l1_norm(&atomic) + singular_weight;
        if total == 0.0 {
            return Err(Error::DegenerateFunctional);
        }
        if (total - 1.0).abs() <= f64::EPSILON {
            return Ok(Self::from_parts_unchecked(atomic, singular_weight, singular_attains));
        }
        let atomic = atomic.into_iter().map(|h| h.scale(1.0 / total)).collect();
        Ok(Self::from_parts_unchecked(atomic, singular_weight / total, singular_attains))
    }

    pub(crate) fn from_parts_unchecked(atomic: Vec<S>, singular_weight: f64, singular_attains: bool) -> Self {
        Self {
            atomic,
            singular_weight,
            // the flag carries no information without a singular part
            singular_attains: singular_attains || singular_weight == 0.0,
        }
    }

    pub fn atomic(&self) -> &[S] {
        &self.atomic
    }

    /// The norm `gamma` of the singular part.
    pub fn singular_weight(&self) -> f64 {
        self.singular_weight
    }

    pub fn singular_attains(&self) -> bool {
        self.singular_attains
    }

    /// Length of the atomic support.
    pub fn dim(&self) -> usize {
        self.atomic.len()
    }

    pub fn atomic_l1(&self) -> f64 {
        l1_norm(&self.atomic)
    }

    pub fn atomic_sup(&self) -> f64 {
        self.atomic.iter().map(|h| h.modulus()).fold(0.0, f64::max)
    }

    pub fn has_singular_part(&self) -> bool {
        self.singular_weight > 0.0
    }

    pub fn is_real(&self) -> bool {
        self.atomic.iter().all(|h| h.is_real())
    }
}

impl HyperplaneFunctional<f64> {
    pub fn to_complex(&self) -> HyperplaneFunctional<Complex64> {
        HyperplaneFunctional {
            atomic: self.atomic.iter().map(|&h| Complex64::new(h, 0.0)).collect(),
            singular_weight: self.singular_weight,
            singular_attains: self.singular_attains,
        }
    }
}

impl HyperplaneFunctional<Complex64> {
    /// Drops the imaginary parts, failing if any of them is nonzero.
    pub fn to_real(&self) -> Result<HyperplaneFunctional<f64>> {
        if !self.is_real() {
            return Err(Error::Precondition("non-real atomic coefficients".into()));
        }
        Ok(HyperplaneFunctional {
            atomic: self.atomic.iter().map(|h| h.re).collect(),
            singular_weight: self.singular_weight,
            singular_attains: self.singular_attains,
        })
    }
}

fn l1_norm<S: Scalar>(atomic: &[S]) -> f64 {
    compensated_sum(atomic.iter().map(|h| h.modulus()))
}

fn check_parts<S: Scalar>(atomic: &[S], singular_weight: f64) -> Result<()> {
    if !singular_weight.is_finite() || singular_weight < 0.0 {
        return Err(Error::InvalidValue(format!(
            "singular weight must be a nonnegative real, got {singular_weight}"
        )));
    }
    if let Some(h) = atomic.iter().find(|h| !h.is_finite()) {
        return Err(Error::InvalidValue(format!("non-finite atomic coefficient {h:?}")));
    }
    Ok(())
}

/// Finite model of a vector `y` in the sup-norm sequence space.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedVector<S = f64> {
    prefix: Vec<S>,
    tail_mag: f64,
    tail_pair: S,
}

impl<S: Scalar> ExtendedVector<S> {
    pub fn new(prefix: Vec<S>, tail_mag: f64, tail_pair: S) -> Result<Self> {
        if !tail_mag.is_finite() || tail_mag < 0.0 {
            return Err(Error::InvalidValue(format!(
                "tail magnitude must be a nonnegative real, got {tail_mag}"
            )));
        }
        if let Some(y) = prefix.iter().find(|y| !y.is_finite()) {
            return Err(Error::InvalidValue(format!("non-finite coordinate {y:?}")));
        }
        if !tail_pair.is_finite() || tail_pair.modulus() > tail_mag + FEASIBILITY_TOLERANCE * tail_mag.max(1.0) {
            return Err(Error::InvalidValue(format!(
                "singular pairing {tail_pair:?} exceeds tail magnitude {tail_mag}"
            )));
        }
        Ok(Self { prefix, tail_mag, tail_pair })
    }

    /// A vector with no tail: `t = 0` and `s = 0`.
    pub fn finite(prefix: Vec<S>) -> Result<Self> {
        Self::new(prefix, 0.0, S::from_real(0.0))
    }

    pub fn prefix(&self) -> &[S] {
        &self.prefix
    }

    /// `limsup |y_j|`.
    pub fn tail_mag(&self) -> f64 {
        self.tail_mag
    }

    /// `<g, y> / gamma`.
    pub fn tail_pair(&self) -> S {
        self.tail_pair
    }

    pub fn sup_norm(&self) -> f64 {
        self.prefix.iter().map(|y| y.modulus()).fold(self.tail_mag, f64::max)
    }

    /// Whether this vector is admissible against the singular part of `f`:
    /// a non-attaining `g` cannot be paired on the boundary `|s| = t`.
    pub fn is_feasible_for(&self, f: &HyperplaneFunctional<S>) -> bool {
        if !f.has_singular_part() || f.singular_attains() {
            return true;
        }
        self.tail_pair.modulus() == 0.0 || self.tail_pair.modulus() < self.tail_mag
    }
}

impl ExtendedVector<Complex64> {
    pub fn real_part(&self) -> ExtendedVector<f64> {
        ExtendedVector {
            prefix: self.prefix.iter().map(|y| y.re).collect(),
            tail_mag: self.tail_mag,
            tail_pair: self.tail_pair.re,
        }
    }
}

impl ExtendedVector<f64> {
    pub fn to_complex(&self) -> ExtendedVector<Complex64> {
        ExtendedVector {
            prefix: self.prefix.iter().map(|&y| Complex64::new(y, 0.0)).collect(),
            tail_mag: self.tail_mag,
            tail_pair: Complex64::new(self.tail_pair, 0.0),
        }
    }
}

/// Diagonal isometry `x -> (a_1 x_1, a_2 x_2, ...)` with unimodular `a_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalIsometry<S = f64> {
    signs: Vec<S>,
}

impl<S: Scalar> DiagonalIsometry<S> {
    pub fn new(signs: Vec<S>) -> Result<Self> {
        if let Some(a) = signs.iter().find(|a| (a.modulus() - 1.0).abs() > FEASIBILITY_TOLERANCE) {
            return Err(Error::InvalidValue(format!("sign {a:?} is not unimodular")));
        }
        Ok(Self { signs })
    }

    pub fn identity(len: usize) -> Self {
        Self { signs: vec![S::from_real(1.0); len] }
    }

    pub fn signs(&self) -> &[S] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }
}

/// Rewrites `f` with atomic coefficients `|h_i|`, returning the signs `a_i`
/// with `h_i a_i = |h_i|` (and `a_i = 1` where `h_i = 0`).
pub fn sign_normalize<S: Scalar>(f: &HyperplaneFunctional<S>) -> (HyperplaneFunctional<S>, DiagonalIsometry<S>) {
    let signs: Vec<S> = f.atomic.iter().map(|&h| h.sgn().conj()).collect();
    let atomic = f.atomic.iter().map(|&h| S::from_real(h.modulus())).collect();
    let functional = HyperplaneFunctional::from_parts_unchecked(atomic, f.singular_weight, f.singular_attains);
    (functional, DiagonalIsometry { signs })
}

/// Carries `y` along the isometry that takes `ker f` to `ker |h| + g`.
///
/// Coordinate `i` becomes `conj(a_i) y_i`, so that the pairing with the
/// sign-normalized functional equals the pairing of `y` with the original
/// one. For real signs this is `a_i y_i`.
pub fn conjugate_vector<S: Scalar>(isometry: &DiagonalIsometry<S>, y: &ExtendedVector<S>) -> Result<ExtendedVector<S>> {
    if isometry.len() != y.prefix.len() {
        return Err(Error::LengthMismatch { expected: isometry.len(), actual: y.prefix.len() });
    }
    let prefix = isometry.signs.iter().zip(&y.prefix).map(|(&a, &v)| a.conj() * v).collect();
    Ok(ExtendedVector { prefix, tail_mag: y.tail_mag, tail_pair: y.tail_pair })
}

/// Replaces every prefix coordinate with `|y_j| > 1` by `sgn(y_j)`.
///
/// The tail is left alone, so the singular pairing is unchanged. Requires
/// `t <= 1`; beyond that clipping would alter `<g, y>`.
pub fn clip_to_ball<S: Scalar>(y: &ExtendedVector<S>) -> Result<ExtendedVector<S>> {
    if y.tail_mag > 1.0 {
        return Err(Error::Precondition(format!(
            "clipping requires tail magnitude at most 1, got {}",
            y.tail_mag
        )));
    }
    let prefix = y
        .prefix
        .iter()
        .map(|&v| if v.modulus() > 1.0 { v.sgn() } else { v })
        .collect();
    Ok(ExtendedVector { prefix, tail_mag: y.tail_mag, tail_pair: y.tail_pair })
}

impl<S: Scalar> Serialize for HyperplaneFunctional<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut st = serializer.serialize_struct("HyperplaneFunctional", 3)?;
        st.serialize_field("h", &json::list(&self.atomic))?;
        st.serialize_field("gamma", &json::real(self.singular_weight))?;
        st.serialize_field("attains", &self.singular_attains)?;
        st.end()
    }
}

#[derive(serde::Deserialize)]
struct FunctionalRepr<S> {
    h: Vec<S>,
    gamma: f64,
    attains: bool,
}

impl<'de, S: Scalar + Deserialize<'de>> Deserialize<'de> for HyperplaneFunctional<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = FunctionalRepr::<S>::deserialize(deserializer)?;
        Self::new(repr.h, repr.gamma, repr.attains).map_err(D::Error::custom)
    }
}

impl<S: Scalar> Serialize for ExtendedVector<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut st = serializer.serialize_struct("ExtendedVector", 3)?;
        st.serialize_field("y", &json::list(&self.prefix))?;
        st.serialize_field("t", &json::real(self.tail_mag))?;
        st.serialize_field("s", &json::scalar(self.tail_pair))?;
        st.end()
    }
}

#[derive(serde::Deserialize)]
struct VectorRepr<S> {
    y: Vec<S>,
    #[serde(default)]
    t: f64,
    s: Option<S>,
}

impl<'de, S: Scalar + Deserialize<'de>> Deserialize<'de> for ExtendedVector<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = VectorRepr::<S>::deserialize(deserializer)?;
        let s = repr.s.unwrap_or(S::from_real(0.0));
        Self::new(repr.y, repr.t, s).map_err(D::Error::custom)
    }
}
