//! Closed-form tradeoff functions, UP-plane regions and bound checks.

mod curve;
mod eta;
mod example1;
mod plane;

pub use curve::{curve_rows, write_curve_csv, CurveRow, PGrid};
pub use eta::{eta, eta_hellinger, gamma, gamma_residual};
pub use example1::example1_up;
pub use plane::{
    check_distortion_bound, classify_point, eta_for, gaussianity_gap, theorem1_bounds, up_region_bounds,
    DivergenceKind, PlaneContext, Region, RegionVerdict, UpPoint, DEFAULT_REGION_TOL,
};
