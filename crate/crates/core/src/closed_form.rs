//! Closed-form projection constants for hyperplanes `ker f`.
//!
//! All evaluators are generic over [`Field`], implemented for `f64`
//! (compensated summation) and for [`BigRational`] (exact arithmetic, used to
//! certify identities such as `2 - 2/n` without rounding).

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::functional_model::{HyperplaneFunctional, NORM_TOLERANCE};
use crate::numeric::compensated_sum;

pub trait Field: Clone + PartialOrd + Num + Signed + Debug {
    fn from_int(n: i64) -> Self;
    fn total<I: IntoIterator<Item = Self>>(values: I) -> Self;
    /// Slack accepted on `||h||_1 + gamma = 1`.
    fn unit_slack() -> Self;
    fn approx(&self) -> f64;
}

impl Field for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn total<I: IntoIterator<Item = Self>>(values: I) -> Self {
        compensated_sum(values)
    }
    fn unit_slack() -> Self {
        NORM_TOLERANCE
    }
    fn approx(&self) -> f64 {
        *self
    }
}

impl Field for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn total<I: IntoIterator<Item = Self>>(values: I) -> Self {
        values.into_iter().fold(Self::from_int(0), |acc, v| acc + v)
    }
    fn unit_slack() -> Self {
        Self::from_int(0)
    }
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

fn half<T: Field>() -> T {
    T::one() / T::from_int(2)
}

fn check_small_coefficients<T: Field>(h: &[T]) -> Result<()> {
    if let Some((i, v)) = h.iter().enumerate().find(|(_, v)| v.abs() >= half()) {
        return Err(Error::Hypothesis(format!("|h_{}| = {:?} is not below 1/2", i + 1, v.abs())));
    }
    Ok(())
}

/// `1 + (sum_k |h_k| / (1 - 2|h_k|))^-1`, the projection constant of `ker h`
/// for a finitely supported `h` with `||h||_1 = 1` and `||h||_inf < 1/2`.
pub fn blatter_cheney<T: Field>(h: &[T]) -> Result<T> {
    if h.iter().all(|v| v.is_zero()) {
        return Err(Error::DegenerateFunctional);
    }
    let l1 = T::total(h.iter().map(|v| v.abs()));
    if (l1.clone() - T::one()).abs() > T::unit_slack() {
        return Err(Error::Hypothesis(format!("||h||_1 = {l1:?}, expected 1")));
    }
    check_small_coefficients(h)?;
    mixed_lambda_parts(h, T::zero())
}

/// `1 + (gamma + sum_i |h_i| / (1 - 2|h_i|))^-1` for `f = h + g` with
/// `||h||_1 + gamma = 1` and every `|h_i| < 1/2`.
pub fn mixed_lambda_parts<T: Field>(h: &[T], gamma: T) -> Result<T> {
    if gamma < T::zero() {
        return Err(Error::InvalidValue(format!("negative singular weight {gamma:?}")));
    }
    let total = T::total(h.iter().map(|v| v.abs())) + gamma.clone();
    if (total.clone() - T::one()).abs() > T::unit_slack() {
        return Err(Error::NotNormalized(total.approx()));
    }
    check_small_coefficients(h)?;
    let two = T::from_int(2);
    let weights = h.iter().map(|v| {
        let m = v.abs();
        m.clone() / (T::one() - two.clone() * m)
    });
    let denominator = T::total(std::iter::once(gamma).chain(weights));
    if denominator.is_zero() {
        return Err(Error::DegenerateFunctional);
    }
    Ok(T::one() + T::one() / denominator)
}

/// Closed-form projection constant of `ker f` for a real functional.
pub fn mixed_lambda(f: &HyperplaneFunctional<f64>) -> Result<f64> {
    mixed_lambda_parts(f.atomic(), f.singular_weight())
}

fn check_family_range<T: Field>(n: usize, a: &T) -> Result<()> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("n = {n} must be at least 2")));
    }
    let lower = T::one() / T::from_int(n as i64 - 1);
    if *a < lower || *a > T::one() {
        return Err(Error::OutOfRange(format!("a = {a:?} outside [1/{}, 1]", n - 1)));
    }
    Ok(())
}

/// `(1, a, ..., a) / (1 + (n-1)a)` in `l_1^n`.
pub fn h_an<T: Field>(n: usize, a: T) -> Result<Vec<T>> {
    check_family_range(n, &a)?;
    let denom = T::one() + T::from_int(n as i64 - 1) * a.clone();
    let mut h = Vec::with_capacity(n);
    h.push(T::one() / denom.clone());
    h.extend(std::iter::repeat_n(a / denom, n - 1));
    Ok(h)
}

/// `g(a) = 1 + (1/(1+(n-1)a-2) + (n-1)a/(1+(n-3)a))^-1` on `[1/(n-1), 1]`,
/// extended by continuity with `g(1/(n-1)) = 1`.
pub fn curve_g<T: Field>(n: usize, a: T) -> Result<T> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("n = {n} must be at least 3")));
    }
    check_family_range(n, &a)?;
    let m = T::from_int(n as i64 - 1);
    let first_denom = T::one() + m.clone() * a.clone() - T::from_int(2);
    if first_denom <= T::zero() {
        return Ok(T::one());
    }
    let second = m * a.clone() / (T::one() + T::from_int(n as i64 - 3) * a);
    let sum = T::total([T::one() / first_denom, second]);
    Ok(T::one() + T::one() / sum)
}

/// Parameters `(n, a, b)` of the family `f = (1-b) g + b h_{a,n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyParams<T = f64> {
    pub n: usize,
    pub a: T,
    pub b: T,
}

impl<T: Field> FamilyParams<T> {
    pub fn new(n: usize, a: T, b: T) -> Result<Self> {
        check_family_range(n, &a)?;
        if b <= T::zero() || b > T::one() {
            return Err(Error::OutOfRange(format!("b = {b:?} outside (0, 1]")));
        }
        Ok(Self { n, a, b })
    }

    /// Atomic part `b h_{a,n}`.
    pub fn atomic(&self) -> Result<Vec<T>> {
        Ok(h_an(self.n, self.a.clone())?.into_iter().map(|v| v * self.b.clone()).collect())
    }

    pub fn singular_weight(&self) -> T {
        T::one() - self.b.clone()
    }
}

impl FamilyParams<f64> {
    /// `f_{n,a,b}` with a non-attaining singular part of norm `1 - b`.
    pub fn functional(&self) -> Result<HyperplaneFunctional<f64>> {
        HyperplaneFunctional::new(self.atomic()?, self.singular_weight(), false)
    }
}

/// Projection constant of `ker f_{n,a,b}`.
pub fn lambda_f_nab<T: Field>(p: &FamilyParams<T>) -> Result<T> {
    mixed_lambda_parts(&p.atomic()?, p.singular_weight())
}
