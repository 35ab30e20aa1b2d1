use rand::Rng;

use super::{fmt_f64, replica_rng, run_ordered, ExperimentConfig, ExperimentError};
use crate::cvs::sample_quadrangulation;
use crate::metric::scale;

pub const SCALING_HEADER: &str = "n,replica,v1,v2,distance,rescaled,mean_distance,rescaled_mean";

/// One sampled quadrangulation: the distance between the pointed vertex
/// and a second uniform vertex, and the mean distance from the pointed
/// vertex to all vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRecord {
    pub n: usize,
    pub replica: usize,
    pub v1: usize,
    pub v2: usize,
    pub distance: u32,
    pub mean_distance: f64,
}

impl ScalingRecord {
    pub fn rescaled(&self) -> f64 {
        self.distance as f64 / scale(self.n)
    }

    pub fn rescaled_mean(&self) -> f64 {
        self.mean_distance / scale(self.n)
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.replica,
            self.v1,
            self.v2,
            self.distance,
            fmt_f64(self.rescaled()),
            fmt_f64(self.mean_distance),
            fmt_f64(self.rescaled_mean())
        )
    }
}

fn one(seed: u64, n: usize, replica: usize) -> ScalingRecord {
    let mut rng = replica_rng(seed, n, replica);
    let pq = sample_quadrangulation(n, &mut rng);
    // The pointed vertex is uniform, so (v_star, v2) is a uniform pair.
    let d = pq.distance_profile();
    let v2 = rng.gen_range(0..d.len());
    let total: u64 = d.iter().map(|&x| x as u64).sum();
    ScalingRecord {
        n,
        replica,
        v1: pq.v_star,
        v2,
        distance: d[v2],
        mean_distance: total as f64 / d.len() as f64,
    }
}

pub fn scaling_records(cfg: &ExperimentConfig) -> Result<Vec<ScalingRecord>, ExperimentError> {
    cfg.validate()?;
    let mut out = Vec::with_capacity(cfg.n.len() * cfg.replicas);
    for &n in &cfg.n {
        out.extend(run_ordered(cfg.threads, cfg.replicas, |r| one(cfg.seed, n, r))?);
    }
    Ok(out)
}

/// Scaling records as CSV.
pub fn run_scaling(cfg: &ExperimentConfig) -> Result<String, ExperimentError> {
    let mut s = String::from(SCALING_HEADER);
    s.push('\n');
    for r in scaling_records(cfg)? {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    Ok(s)
}
