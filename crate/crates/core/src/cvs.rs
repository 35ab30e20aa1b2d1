//! Labeled trees to pointed quadrangulations by successor arcs, and the
//! uniform sampler built on top.

use num_bigint::BigUint;
use rand::Rng;

use crate::encodings::{sample_labeled_tree, LabeledTree};
use crate::multipoint::{phi_reverse, LabeledMap, ReverseOutput, RootChoice};
use crate::planar_map::{CanonicalCode, Quadrangulation};

/// Quadrangulation with a distinguished vertex and the tree labels carried
/// over, so that `d(v_star, v) = label(v) - min + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedQuadrangulation {
    pub q: Quadrangulation,
    pub v_star: usize,
    /// Label per vertex of `q`; `v_star` carries `min - 1`.
    pub vertex_labels: Vec<i64>,
    /// Vertex of `q` for each tree vertex (preorder).
    pub tree_vertex: Vec<usize>,
}

impl PointedQuadrangulation {
    /// Distances from `v_star` read off the labels.
    pub fn distance_profile(&self) -> Vec<u32> {
        let base = self.vertex_labels[self.v_star];
        self.vertex_labels.iter().map(|&l| (l - base) as u32).collect()
    }

    /// Rooted code with the pointed vertex marked.
    pub fn code(&self) -> CanonicalCode {
        let m = self.q.map();
        CanonicalCode::rooted_with(m, m.root(), |order, _| {
            order.iter().map(|&d| (m.vertex(d) == self.v_star) as u32).collect()
        })
    }
}

/// The tree as a one-face labeled map, with the dart-to-tree-vertex table.
pub fn tree_labeled_map(t: &LabeledTree) -> Option<(LabeledMap, Vec<usize>)> {
    let (m, origin) = t.to_map()?;
    let mut labels = vec![0; m.num_vertices()];
    for d in 0..m.darts() {
        labels[m.vertex(d)] = t.labels()[origin[d]];
    }
    let lm = LabeledMap::new(m, vec![0], labels).expect("tree labels are Lipschitz");
    Some((lm, origin))
}

/// Successor arcs of a labeled tree with at least one edge.
pub fn cvs_reverse(t: &LabeledTree, choice: RootChoice) -> PointedQuadrangulation {
    let (lm, origin) = tree_labeled_map(t).expect("tree needs an edge");
    let ReverseOutput {
        delayed,
        labels,
        vertex_of_m,
        ..
    } = phi_reverse(&lm, choice).expect("trees always give quadrangulations");
    let mut tree_vertex = vec![0; t.num_vertices()];
    for d in 0..lm.m.darts() {
        tree_vertex[origin[d]] = vertex_of_m[lm.m.vertex(d)];
    }
    PointedQuadrangulation {
        v_star: delayed.v[0],
        q: delayed.q,
        vertex_labels: labels,
        tree_vertex,
    }
}

/// Uniform rooted quadrangulation with `n` faces and a uniform marked vertex.
pub fn sample_quadrangulation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PointedQuadrangulation {
    assert!(n >= 1, "at least one face");
    let t = sample_labeled_tree(n, rng);
    let choice = if rng.gen::<bool>() {
        RootChoice::Plus
    } else {
        RootChoice::Minus
    };
    cvs_reverse(&t, choice)
}

/// `#Q_n = 2 * 3^n * binom(2n, n) / ((n + 1)(n + 2))`.
pub fn count_quadrangulations(n: usize) -> BigUint {
    let mut binom = BigUint::from(1u32);
    for i in 0..n {
        binom = binom * (2 * n - i) / (i + 1);
    }
    BigUint::from(2u32) * BigUint::from(3u32).pow(n as u32) * binom / ((n + 1) * (n + 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::all_labeled_trees;
    use crate::metric::Graph;
    use crate::planar_map::enumerate_rooted_quadrangulations;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    use std::collections::HashMap;

    fn distance_identity(p: &PointedQuadrangulation) {
        let d = Graph::from_map(&p.q).bfs(p.v_star).dist;
        assert_eq!(d, p.distance_profile());
    }

    #[test]
    fn counts() {
        let expect = [2u32, 9, 54, 378, 2916];
        for (n, &c) in (1..=5).zip(&expect) {
            assert_eq!(count_quadrangulations(n), BigUint::from(c));
        }
    }

    #[test]
    fn single_edge() {
        for (lbl, far) in [(1, 2), (-1, 1)] {
            let t = LabeledTree::new(vec![vec![1], vec![]], vec![0, lbl]).unwrap();
            let p = cvs_reverse(&t, RootChoice::Plus);
            assert_eq!(p.q.num_faces(), 1);
            let d = p.distance_profile();
            assert_eq!(d[p.tree_vertex[0]], if lbl == 1 { 1 } else { 2 });
            assert_eq!(d[p.tree_vertex[1]], far);
        }
    }

    /// Every pointed rooted quadrangulation arises from exactly one tree and
    /// root choice.
    #[test]
    fn exhaustive_census() {
        for n in 1..=3 {
            let mut seen: HashMap<CanonicalCode, usize> = HashMap::new();
            for t in all_labeled_trees(n) {
                for choice in RootChoice::BOTH {
                    let p = cvs_reverse(&t, choice);
                    distance_identity(&p);
                    *seen.entry(p.code()).or_default() += 1;
                }
            }
            let mut census = std::collections::HashSet::new();
            for q in enumerate_rooted_quadrangulations(n).unwrap() {
                for v in 0..q.map().num_vertices() {
                    let p = PointedQuadrangulation {
                        q: q.clone(),
                        v_star: v,
                        vertex_labels: Vec::new(),
                        tree_vertex: Vec::new(),
                    };
                    census.insert(p.code());
                }
            }
            assert_eq!(seen.len(), census.len());
            assert!(seen.keys().all(|c| census.contains(c)));
            assert!(seen.values().all(|&m| m == 1));
        }
    }

    #[test]
    fn sampler_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (n, draws) in [(1usize, 20_000usize), (2, 100_000), (3, 100_000)] {
            let mut hist: HashMap<CanonicalCode, f64> = HashMap::new();
            for _ in 0..draws {
                *hist.entry(sample_quadrangulation(n, &mut rng).code()).or_default() += 1.0;
            }
            let classes = enumerate_rooted_quadrangulations(n)
                .unwrap()
                .iter()
                .map(|q| q.map().num_vertices())
                .sum::<usize>();
            assert_eq!(hist.len(), classes);
            let e = draws as f64 / classes as f64;
            let chi2: f64 = hist.values().map(|o| (o - e).powi(2) / e).sum();
            let p = 1.0 - ChiSquared::new((classes - 1) as f64).unwrap().cdf(chi2);
            assert!(p > 1e-4, "n={n} chi2={chi2} p={p}");
        }
    }

    #[test]
    fn samples_satisfy_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [1, 5, 40, 300, 2000] {
            for _ in 0..5 {
                let p = sample_quadrangulation(n, &mut rng);
                assert_eq!(p.q.num_faces(), n);
                distance_identity(&p);
            }
        }
    }
}
