//! Toolkit for the uncertainty–perception (UP) tradeoff of restoration
//! problems.
//!
//! - [`numstats`]: covariance estimation, SPD algebra, special functions and
//!   Gaussian closed forms.
//! - [`estimators`]: Kozachenko–Leonenko entropy, KDE Rényi-½ and Hellinger
//!   divergences.
//! - [`bounds`]: the η multipliers, UP-plane regions and related bound checks.
//! - [`gaussianlab`]: linear-Gaussian problems, the numerically solved
//!   constrained UP problem, and Monte Carlo estimator families.
//! - [`imageval`]: image I/O, patch statistics, distortion metrics and the
//!   dataset evaluation pipeline.

// `!(x > 0.0)` comparisons deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod estimators;
pub mod gaussianlab;
pub mod imageval;
pub mod io;
pub mod numstats;
pub mod par;

pub use error::{Error, Result};
pub use par::Exec;
