use rand::Rng;

use super::{fmt_f64, replica_rng, run_ordered, wilson_interval, ExperimentConfig, ExperimentError};
use crate::cvs::sample_quadrangulation;
use crate::metric::{event_a1, event_a2, DistanceCache, Graph};

pub const STAR_HEADER: &str = "n,replica,eps,beta,tuples,a1_hits,a2_hits";
pub const STAR_SUMMARY_HEADER: &str =
    "n,eps,beta,trials,a1_hits,a1_freq,a1_lo,a1_hi,a2_hits,a2_freq,a2_lo,a2_hi";

/// Event counts over the vertex tuples drawn in one sampled map.
#[derive(Clone, Debug, PartialEq)]
pub struct StarRecord {
    pub n: usize,
    pub replica: usize,
    pub eps: f64,
    pub beta: f64,
    pub tuples: usize,
    pub a1_hits: usize,
    pub a2_hits: usize,
}

impl StarRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.replica,
            fmt_f64(self.eps),
            fmt_f64(self.beta),
            self.tuples,
            self.a1_hits,
            self.a2_hits
        )
    }
}

/// Pooled frequencies at one `(n, eps, beta)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StarSummary {
    pub n: usize,
    pub eps: f64,
    pub beta: f64,
    pub trials: u64,
    pub a1_hits: u64,
    pub a2_hits: u64,
}

impl StarSummary {
    pub fn a1_freq(&self) -> f64 {
        self.a1_hits as f64 / self.trials as f64
    }

    pub fn a2_freq(&self) -> f64 {
        self.a2_hits as f64 / self.trials as f64
    }

    pub fn a1_interval(&self) -> (f64, f64) {
        wilson_interval(self.a1_hits, self.trials)
    }

    pub fn a2_interval(&self) -> (f64, f64) {
        wilson_interval(self.a2_hits, self.trials)
    }

    pub fn csv_row(&self) -> String {
        let (l1, h1) = self.a1_interval();
        let (l2, h2) = self.a2_interval();
        [
            self.n.to_string(),
            fmt_f64(self.eps),
            fmt_f64(self.beta),
            self.trials.to_string(),
            self.a1_hits.to_string(),
            fmt_f64(self.a1_freq()),
            fmt_f64(l1),
            fmt_f64(h1),
            self.a2_hits.to_string(),
            fmt_f64(self.a2_freq()),
            fmt_f64(l2),
            fmt_f64(h2),
        ]
        .join(",")
    }
}

fn one(cfg: &ExperimentConfig, n: usize, replica: usize) -> Vec<StarRecord> {
    let mut rng = replica_rng(cfg.seed, n, replica);
    let pq = sample_quadrangulation(n, &mut rng);
    let g = Graph::from_map(pq.q.map());
    let nv = g.num_vertices();
    let mut a1 = vec![vec![0usize; cfg.beta.len()]; cfg.eps.len()];
    let mut a2 = vec![0usize; cfg.eps.len()];
    for _ in 0..cfg.tuples {
        let v: [usize; 4] = std::array::from_fn(|_| rng.gen_range(0..nv));
        let cache = DistanceCache::new(&g);
        for (i, &eps) in cfg.eps.iter().enumerate() {
            a2[i] += event_a2(&cache, v, eps, n) as usize;
            for (j, &beta) in cfg.beta.iter().enumerate() {
                a1[i][j] += event_a1(&cache, v[0], v[1], v[2], eps, beta, n) as usize;
            }
        }
    }
    let mut out = Vec::new();
    for (i, &eps) in cfg.eps.iter().enumerate() {
        for (j, &beta) in cfg.beta.iter().enumerate() {
            out.push(StarRecord {
                n,
                replica,
                eps,
                beta,
                tuples: cfg.tuples,
                a1_hits: a1[i][j],
                a2_hits: a2[i],
            });
        }
    }
    out
}

/// Per-map event counts, ordered by `n`, replica, `eps`, `beta`.
pub fn star_records(cfg: &ExperimentConfig) -> Result<Vec<StarRecord>, ExperimentError> {
    cfg.validate()?;
    let mut out = Vec::new();
    for &n in &cfg.n {
        for rows in run_ordered(cfg.threads, cfg.replicas, |r| one(cfg, n, r))? {
            out.extend(rows);
        }
    }
    Ok(out)
}

/// Pools records over replicas, keeping the order of first appearance.
pub fn summarize_stars(records: &[StarRecord]) -> Vec<StarSummary> {
    let mut out: Vec<StarSummary> = Vec::new();
    for r in records {
        let pos = out
            .iter()
            .position(|s| s.n == r.n && s.eps == r.eps && s.beta == r.beta);
        let s = match pos {
            Some(p) => &mut out[p],
            None => {
                out.push(StarSummary {
                    n: r.n,
                    eps: r.eps,
                    beta: r.beta,
                    trials: 0,
                    a1_hits: 0,
                    a2_hits: 0,
                });
                out.last_mut().unwrap()
            }
        };
        s.trials += r.tuples as u64;
        s.a1_hits += r.a1_hits as u64;
        s.a2_hits += r.a2_hits as u64;
    }
    out
}

/// Frequencies with Wilson intervals per `(n, eps, beta)`, as CSV.
pub fn run_star_events(cfg: &ExperimentConfig) -> Result<String, ExperimentError> {
    let mut s = String::from(STAR_SUMMARY_HEADER);
    s.push('\n');
    for row in summarize_stars(&star_records(cfg)?) {
        s.push_str(&row.csv_row());
        s.push('\n');
    }
    Ok(s)
}
