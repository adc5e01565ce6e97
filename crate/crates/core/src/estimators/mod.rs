//! Sample-based estimators of differential entropy, entropy power and
//! divergences.

mod kde;
mod knn;
pub mod neighbors;
mod pooling;

pub use kde::{
    bandwidths, hellinger_distance, hellinger_from_log_bc, kde_log_bhattacharyya,
    kde_log_bhattacharyya_paired, kde_renyi_half, renyi_from_log_bc, BandwidthRule, Kde, KdeConfig,
    MIN_KDE_SAMPLES,
};
pub use knn::{knn_entropy, knn_entropy_with, sample_entropy_power, KnnConfig, JITTER_REL};
pub use neighbors::SearchStrategy;
pub use pooling::{conditional_pool, renyi_order_interval};
