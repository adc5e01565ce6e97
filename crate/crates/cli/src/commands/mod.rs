mod bounds;
mod estimators;
mod evaluate;
mod gaussian;

use std::time::{SystemTime, UNIX_EPOCH};

pub use bounds::{bounds, BoundsArgs};
pub use estimators::{divergence, entropy, DivergenceArgs, EntropyArgs};
pub use evaluate::{evaluate, make_fixture, EvaluateArgs, FixtureArgs};
pub use gaussian::{verify_example1, verify_gaussian, VerifyExample1Args, VerifyGaussianArgs};

use crate::config::Settings;

/// Generation stamp for SVG output, or `None` with `--no-timestamp`.
fn timestamp(settings: &Settings) -> Option<String> {
    settings.timestamp.then(|| {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        format!("unix time {secs}")
    })
}

const VERSION: &str = env!("CARGO_PKG_VERSION");
