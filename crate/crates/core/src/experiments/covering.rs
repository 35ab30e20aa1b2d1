use rand::Rng;

use super::{fmt_f64, replica_rng, run_ordered, ExperimentConfig, ExperimentError};
use crate::cvs::sample_quadrangulation;
use crate::metric::{cover_bounds, scale, star_points_on_geodesic, DistanceCache, Graph};

pub const COVERING_HEADER: &str = "n,replica,eps,radius,geodesic_len,star_points,cover,packing";

/// Cover sizes of the 3-star points on the lex-min geodesic `v1 -> v2`
/// seen from `v3`, with balls of radius `eps * (8n/9)^{1/4}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoveringRecord {
    pub n: usize,
    pub replica: usize,
    pub eps: f64,
    pub geodesic_len: usize,
    pub star_points: usize,
    /// Greedy cover size (upper bound).
    pub cover: usize,
    /// Maximal packing size (lower bound).
    pub packing: usize,
}

impl CoveringRecord {
    pub fn radius(&self) -> f64 {
        self.eps * scale(self.n)
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.replica,
            fmt_f64(self.eps),
            fmt_f64(self.radius()),
            self.geodesic_len,
            self.star_points,
            self.cover,
            self.packing
        )
    }
}

fn one(cfg: &ExperimentConfig, n: usize, replica: usize) -> Vec<CoveringRecord> {
    let mut rng = replica_rng(cfg.seed, n, replica);
    let pq = sample_quadrangulation(n, &mut rng);
    let g = Graph::from_map(pq.q.map());
    let nv = g.num_vertices();
    let [v1, v2, v3]: [usize; 3] = std::array::from_fn(|_| rng.gen_range(0..nv));
    let cache = DistanceCache::new(&g);
    let star = star_points_on_geodesic(&cache, v1, v2, v3);
    let points = star.star_points();
    cfg.eps
        .iter()
        .map(|&eps| {
            let b = cover_bounds(&points, &cache, eps * scale(n));
            CoveringRecord {
                n,
                replica,
                eps,
                geodesic_len: star.geodesic.len() - 1,
                star_points: points.len(),
                cover: b.greedy,
                packing: b.packing,
            }
        })
        .collect()
}

pub fn covering_records(cfg: &ExperimentConfig) -> Result<Vec<CoveringRecord>, ExperimentError> {
    cfg.validate()?;
    let mut out = Vec::new();
    for &n in &cfg.n {
        for rows in run_ordered(cfg.threads, cfg.replicas, |r| one(cfg, n, r))? {
            out.extend(rows);
        }
    }
    Ok(out)
}

/// Covering records as CSV.
pub fn run_covering(cfg: &ExperimentConfig) -> Result<String, ExperimentError> {
    let mut s = String::from(COVERING_HEADER);
    s.push('\n');
    for r in covering_records(cfg)? {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    Ok(s)
}
