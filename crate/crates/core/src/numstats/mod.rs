//! Numeric and statistical core: sample sets, SPD algebra, special functions
//! and Gaussian closed forms.

mod covariance;
mod gaussian;
mod sample;
mod spd;
pub mod special;

pub use covariance::{sample_covariance, sample_covariance_with};
pub use gaussian::{entropy_power, gaussian_entropy, gaussian_renyi_half, GaussianModel};
pub use sample::SampleSet;
pub use spd::SpdMatrix;
pub use special::{digamma, ln_gamma};
