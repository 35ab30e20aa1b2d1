use thiserror::Error;

use crate::encodings::ContourEncoding;

/// Largest contour (in steps) for which full tables are built.
pub const PSEUDO_METRIC_BOUND: usize = 2000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PseudoMetricError {
    #[error("contour of {steps} steps exceeds the table bound {bound}")]
    TooLarge { steps: usize, bound: usize },
}

/// Tree distance `d_e`, the label bound `D°` and the quotient metric `D*`
/// on the `2n` contour times of a labeled tree (time `2n` is time `0`).
#[derive(Clone, Debug)]
pub struct DiscretePseudoMetrics {
    pub steps: usize,
    pub labels: Vec<i64>,
    pub d_e: Vec<Vec<i64>>,
    pub d_circ: Vec<Vec<i64>>,
    /// `class[s]`: index of the tree vertex visited at time `s`.
    pub class: Vec<usize>,
    pub num_classes: usize,
    pub d_star: Vec<Vec<i64>>,
    /// A time where the label is minimal.
    pub s_star: usize,
}

impl DiscretePseudoMetrics {
    /// `D*` between the classes of two times.
    pub fn d_star_times(&self, s: usize, t: usize) -> i64 {
        self.d_star[self.class[s]][self.class[t]]
    }
}

pub fn discrete_pseudo_metrics(c: &ContourEncoding) -> Result<DiscretePseudoMetrics, PseudoMetricError> {
    let steps = c.l.len() - 1;
    if steps > PSEUDO_METRIC_BOUND {
        return Err(PseudoMetricError::TooLarge {
            steps,
            bound: PSEUDO_METRIC_BOUND,
        });
    }
    let h = &c.c[..steps.max(1)];
    let l = &c.l[..steps.max(1)];
    let m = l.len();

    let mut d_e = vec![vec![0i64; m]; m];
    for s in 0..m {
        let mut low = h[s];
        for t in s..m {
            low = low.min(h[t]);
            d_e[s][t] = h[s] + h[t] - 2 * low;
            d_e[t][s] = d_e[s][t];
        }
    }

    // Forward arc minima from s and backward arc minima into s, cyclically.
    let mut d_circ = vec![vec![0i64; m]; m];
    for s in 0..m {
        let mut fwd = vec![0i64; m];
        let mut low = l[s];
        for k in 0..m {
            let t = (s + k) % m;
            low = low.min(l[t]);
            fwd[t] = low;
        }
        let mut low = l[s];
        for k in 0..m {
            let t = (s + m - k) % m;
            low = low.min(l[t]);
            // fwd[t]: min over [s, t]; low: min over [t, s].
            d_circ[s][t] = l[s] + l[t] - 2 * fwd[t].max(low);
        }
    }

    let mut class = vec![usize::MAX; m];
    let mut num_classes = 0;
    for s in 0..m {
        if class[s] == usize::MAX {
            for t in s..m {
                if d_e[s][t] == 0 {
                    class[t] = num_classes;
                }
            }
            num_classes += 1;
        }
    }

    let mut d_star = vec![vec![i64::MAX; num_classes]; num_classes];
    for s in 0..m {
        for t in 0..m {
            let (a, b) = (class[s], class[t]);
            d_star[a][b] = d_star[a][b].min(d_circ[s][t]);
        }
    }
    for k in 0..num_classes {
        for i in 0..num_classes {
            for j in 0..num_classes {
                let via = d_star[i][k] + d_star[k][j];
                if via < d_star[i][j] {
                    d_star[i][j] = via;
                }
            }
        }
    }

    let s_star = (0..m).min_by_key(|&s| (l[s], s)).unwrap();
    Ok(DiscretePseudoMetrics {
        steps,
        labels: l.to_vec(),
        d_e,
        d_circ,
        class,
        num_classes,
        d_star,
        s_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::{all_labeled_trees, contour_of_tree, sample_labeled_tree};
    use rand::SeedableRng;

    fn audit(p: &DiscretePseudoMetrics) {
        let m = p.labels.len();
        let min = *p.labels.iter().min().unwrap();
        for t in 0..m {
            assert_eq!(p.d_circ[p.s_star][t], p.labels[t] - min);
            for s in 0..m {
                assert!(p.d_circ[s][t] >= (p.labels[s] - p.labels[t]).abs());
                assert_eq!(p.d_circ[s][t], p.d_circ[t][s]);
                assert!(p.d_star_times(s, t) <= p.d_circ[s][t]);
            }
        }
        for a in 0..p.num_classes {
            assert_eq!(p.d_star[a][a], 0);
            for b in 0..p.num_classes {
                for c in 0..p.num_classes {
                    assert!(p.d_star[a][c] <= p.d_star[a][b] + p.d_star[b][c]);
                }
            }
        }
    }

    #[test]
    fn exhaustive_small_trees() {
        for n in 0..=4 {
            for t in all_labeled_trees(n) {
                let p = discrete_pseudo_metrics(&contour_of_tree(&t)).unwrap();
                assert_eq!(p.num_classes, n + 1);
                audit(&p);
            }
        }
    }

    #[test]
    fn sampled_trees() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let t = sample_labeled_tree(60, &mut rng);
            audit(&discrete_pseudo_metrics(&contour_of_tree(&t)).unwrap());
        }
    }

    #[test]
    fn too_large() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let t = sample_labeled_tree(1001, &mut rng);
        assert!(matches!(
            discrete_pseudo_metrics(&contour_of_tree(&t)),
            Err(PseudoMetricError::TooLarge { .. })
        ));
    }
}
