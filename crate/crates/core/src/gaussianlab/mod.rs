//! Linear-Gaussian verification laboratory: posteriors, the numerically solved
//! constrained UP problem, and Monte Carlo estimator families.

mod family;
mod optimize;
mod oracle;
mod problem;

pub use family::{
    simulate_family, simulate_family_with, EstimatorFamilySpec, FamilySimulation, FamilySummary,
    MIN_FAMILY_SAMPLES,
};
pub use optimize::{solve_up_for_posterior, solve_up_gaussian, SolveOptions, UpSolution};
pub use oracle::{example1_divergence, example1_oracle, sweep_up, write_sweep_csv, SweepRow};
pub use problem::{
    build_problem, inherent_uncertainty, random_problem, scalar_denoising, LinearGaussianProblem,
};
