//! Projection constants of hyperplanes in the space of bounded sequences.
//!
//! A hyperplane is the kernel of a norm-one functional `f = h + g`, where `h`
//! is a finitely supported atomic part and `g` a singular part vanishing on
//! null sequences. Every projection onto `ker f` has the form
//! `P_y x = x - <f, x> y` with `<f, y> = 1`, and the crate provides:
//!
//! * [`functional_model`]: the data model and the norm-preserving reductions
//!   (sign normalization, diagonal isometries, clipping);
//! * [`closed_form`]: exact formulas for the projection constant, generic over
//!   `f64` and exact rationals;
//! * [`projection_norm`]: the exact norm of `P_y`, an enumeration oracle, the
//!   complex-to-real reduction and the purely singular lower-bound witness;
//! * [`minimax_solver`]: the infimum over `y`, attainment, and truncation gaps
//!   evidencing that no minimal projection exists;
//! * [`designer`]: for any target in `(1, 2]`, a hyperplane with exactly that
//!   constant and no minimal projection, as a verifiable certificate.

pub mod closed_form;
pub mod designer;
pub mod error;
pub mod functional_model;
mod json;
pub mod minimax_solver;
pub mod numeric;
pub mod projection_norm;
pub mod scalar;
pub mod sweep;

pub use closed_form::{blatter_cheney, curve_g, h_an, lambda_f_nab, mixed_lambda, mixed_lambda_parts, FamilyParams, Field};
pub use designer::{design_for_target, verify_certificate, CertificateKind, ExampleCertificate};
pub use error::{Error, Result};
pub use functional_model::{clip_to_ball, conjugate_vector, sign_normalize, DiagonalIsometry, ExtendedVector, HyperplaneFunctional};
pub use minimax_solver::{attainment_decision, min_projection_norm, truncation_gaps, AttainmentTag, GapSequence, SolverResult};
pub use projection_norm::{brute_force_norm, lower_bound_witness, operator_norm, pairing, real_part_reduce, LowerBoundWitness, NormReport};
pub use scalar::Scalar;

pub use num_complex::Complex64;
pub use num_rational::BigRational;
