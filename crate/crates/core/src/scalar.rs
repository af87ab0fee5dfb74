use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::numeric::{compensated_sum, format_g17};

/// Field of scalars for functionals and vectors: `f64` or `Complex64`.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn from_real(re: f64) -> Self;
    /// Builds a scalar from its parts. Real scalars ignore `im`.
    fn from_parts(re: f64, im: f64) -> Self;
    fn re(self) -> f64;
    fn im(self) -> f64;
    fn modulus(self) -> f64;
    fn conj(self) -> Self;
    fn scale(self, k: f64) -> Self;
    fn unscale(self, k: f64) -> Self;

    /// Unimodular sign with `sgn(0) = 1`.
    fn sgn(self) -> Self {
        let m = self.modulus();
        if m == 0.0 {
            Self::from_real(1.0)
        } else {
            self.unscale(m)
        }
    }

    fn is_real(self) -> bool {
        self.im() == 0.0
    }

    fn is_finite(self) -> bool {
        self.re().is_finite() && self.im().is_finite()
    }

    /// JSON text for this scalar: a number for reals, `[re, im]` for complex.
    fn json_text(self) -> String;

    fn sum<I: IntoIterator<Item = Self>>(values: I) -> Self {
        let (re, im): (Vec<f64>, Vec<f64>) = values.into_iter().map(|v| (v.re(), v.im())).unzip();
        Self::from_parts(compensated_sum(re), compensated_sum(im))
    }
}

impl Scalar for f64 {
    fn from_real(re: f64) -> Self {
        re
    }
    fn from_parts(re: f64, _im: f64) -> Self {
        re
    }
    fn re(self) -> f64 {
        self
    }
    fn im(self) -> f64 {
        0.0
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn conj(self) -> Self {
        self
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn unscale(self, k: f64) -> Self {
        self / k
    }
    fn sgn(self) -> Self {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
    fn json_text(self) -> String {
        format_g17(self)
    }
    fn sum<I: IntoIterator<Item = Self>>(values: I) -> Self {
        compensated_sum(values)
    }
}

impl Scalar for Complex64 {
    fn from_real(re: f64) -> Self {
        Complex64::new(re, 0.0)
    }
    fn from_parts(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn im(self) -> f64 {
        self.im
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn unscale(self, k: f64) -> Self {
        Complex64::unscale(&self, k)
    }
    fn json_text(self) -> String {
        format!("[{},{}]", format_g17(self.re), format_g17(self.im))
    }
}
