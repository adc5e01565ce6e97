//! Image evaluation pipeline: decoding, patch statistics, distortion metrics,
//! and plane-ready records per restoration algorithm.

mod fixture;
mod image;
mod metrics;
mod patches;
mod pipeline;

pub use fixture::{read_context, write_gaussian_fixture, FixtureContext, GaussianFixtureSpec, CONTEXT_FILE};
pub use image::{load_image, save_pnm, save_raw_image, ImageTensor};
pub use metrics::{
    distortion_metrics, psnr_from_mse, ssim, Distortion, SSIM_K1, SSIM_K2, SSIM_SIGMA, SSIM_WINDOW,
};
pub use patches::{
    even_subsample, extract_patches, extract_patches_with, perception_index, uncertainty_upper, PatchSet,
    PerceptionConfig, DEFAULT_PATCH_SIZE, DEFAULT_RIDGE, DEFAULT_STRIDE,
};
pub use pipeline::{
    classify_records, discover_algorithms, evaluate_algorithm, read_manifest, write_records_csv,
    EvaluateConfig, EvaluationRecord, EvaluationReport, ManifestEntry, RunMetadata, MANIFEST_FILE,
    MAX_SKIP_FRACTION, POOLING_NOTE,
};
