//! Seeded Monte Carlo runs over sampled quadrangulations, census
//! verification and power-law fits.
//!
//! Every replica draws from its own ChaCha stream keyed by `(seed, n,
//! replica)`, and results are collected in replica order, so the output
//! bytes do not depend on the thread count.

mod census;
mod config;
mod covering;
mod fit;
mod scaling;
mod stars;

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

pub use census::{golden_files, verify_census, write_golden, CensusCheck, CensusReport};
pub use config::{ConfigError, ExperimentConfig, ExperimentKind};
pub use covering::{covering_records, run_covering, CoveringRecord, COVERING_HEADER};
pub use fit::{column_means, fit_exponent, fit_log_log, ColumnMean, PowerFit};
pub use scaling::{run_scaling, scaling_records, ScalingRecord, SCALING_HEADER};
pub use stars::{
    run_star_events, star_records, summarize_stars, StarRecord, StarSummary, STAR_HEADER, STAR_SUMMARY_HEADER,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

/// RNG for one replica at size `n`.
pub fn replica_rng(seed: u64, n: usize, replica: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 32) ^ replica as u64);
    rng
}

/// Maps `f` over `0..count` on `threads` workers, keeping index order.
pub fn run_ordered<T, F>(threads: usize, count: usize, f: F) -> Result<Vec<T>, ExperimentError>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if threads <= 1 {
        return Ok((0..count).map(f).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| ExperimentError::Pool(e.to_string()))?;
    Ok(pool.install(|| (0..count).into_par_iter().map(f).collect()))
}

/// Wilson score interval at 95%.
pub fn wilson_interval(hits: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = hits as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Runs the experiment named in the config and returns its CSV, or the
/// census report as text.
pub fn run(cfg: &ExperimentConfig) -> Result<String, ExperimentError> {
    match cfg.kind {
        ExperimentKind::Scaling => run_scaling(cfg),
        ExperimentKind::Stars => run_star_events(cfg),
        ExperimentKind::Covering => run_covering(cfg),
        ExperimentKind::Verify => Ok(verify_census(cfg).to_text()),
    }
}

/// Writes `text` to `path`, or to stdout when there is no path.
pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), ExperimentError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

/// Shortest decimal form that parses back to the same `f64`.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

#[cfg(test)]
mod tests;
