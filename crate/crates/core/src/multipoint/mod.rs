//! Delayed multi-pointed quadrangulations and labeled maps with several
//! faces: the reverse construction, successors, leftmost geodesics, liquid
//! partitions and geodesic stars.

mod enumerate;
mod forward;
mod liquid;
mod reverse;

pub(crate) use enumerate::permutations;
pub use enumerate::{delayed_lm_codes, enumerate_lm, labeled_map_code, lipschitz_labelings, lm_images};
pub use forward::{phi_forward, star_to_labeled_map};
pub use liquid::{leftmost_chain, leftmost_geodesic, liquid_partition, LiquidPartition};
pub use reverse::{phi_reverse, successor, successors, Corner, ReverseOutput, RootChoice};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::DistanceCache;
use crate::planar_map::{HalfEdgeMap, MapError, Quadrangulation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultipointError {
    #[error("not a labeled map: {0}")]
    NotLabeledMap(&'static str),
    #[error("arcs do not form a quadrangulation: {0}")]
    ArcPlanarityFailure(MapError),
    #[error("delays violate the strict triangle or parity condition")]
    BadDelays,
    #[error("vertices are not a geodesic star")]
    NotGeodesicStar,
    #[error("forward construction does not invert the reverse one")]
    ForwardMismatch,
}

/// Delays `tau_0..tau_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DelayVector {
    pub tau: Vec<i64>,
}

/// `(q, v, tau)` with valid delays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelayedQuadrangulation {
    pub q: Quadrangulation,
    pub v: Vec<usize>,
    pub tau: DelayVector,
}

impl DelayedQuadrangulation {
    pub fn new(q: Quadrangulation, v: Vec<usize>, tau: DelayVector) -> Result<Self, MultipointError> {
        let g = crate::metric::Graph::from_map(&q);
        if v.len() != tau.tau.len() || !check_delays(&DistanceCache::new(&g), &v, &tau) {
            return Err(MultipointError::BadDelays);
        }
        Ok(Self { q, v, tau })
    }

    /// `l(v) = min_i (d(v, v_i) + tau_i)` on every vertex.
    pub fn labels(&self) -> Vec<i64> {
        let g = crate::metric::Graph::from_map(&self.q);
        delayed_labels(&g, &self.v, &self.tau.tau)
    }
}

pub(crate) fn delayed_labels(g: &crate::metric::Graph, v: &[usize], tau: &[i64]) -> Vec<i64> {
    let mut l = vec![i64::MAX; g.num_vertices()];
    for (&s, &t) in v.iter().zip(tau) {
        let d = g.bfs(s).dist;
        for (x, &dx) in l.iter_mut().zip(&d) {
            *x = (*x).min(dx as i64 + t);
        }
    }
    l
}

/// Map with named faces and integer vertex labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledMap {
    pub m: HalfEdgeMap,
    /// `face_names[i]` is the face id of `f_i`.
    pub face_names: Vec<usize>,
    pub labels: Vec<i64>,
}

impl LabeledMap {
    pub fn new(m: HalfEdgeMap, face_names: Vec<usize>, labels: Vec<i64>) -> Result<Self, MultipointError> {
        if face_names.len() != m.num_faces() {
            return Err(MultipointError::NotLabeledMap("face names are not a bijection"));
        }
        let mut seen = vec![false; m.num_faces()];
        for &f in &face_names {
            if f >= seen.len() || std::mem::replace(&mut seen[f], true) {
                return Err(MultipointError::NotLabeledMap("face names are not a bijection"));
            }
        }
        if labels.len() != m.num_vertices() {
            return Err(MultipointError::NotLabeledMap("one label per vertex"));
        }
        for d in 0..m.darts() {
            if (labels[m.vertex(d)] - labels[m.head(d)]).abs() > 1 {
                return Err(MultipointError::NotLabeledMap("labels jump by more than 1"));
            }
        }
        Ok(Self { m, face_names, labels })
    }

    pub fn num_faces(&self) -> usize {
        self.face_names.len()
    }

    /// Index `i` of the face `f_i` containing dart `d`.
    pub fn face_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.m.num_faces()];
        for (i, &f) in self.face_names.iter().enumerate() {
            idx[f] = i;
        }
        (0..self.m.darts()).map(|d| idx[self.m.face(d)]).collect()
    }

    /// Per face index, the set of incident vertices.
    pub fn face_vertices(&self) -> Vec<Vec<bool>> {
        let fi = self.face_index();
        let mut inc = vec![vec![false; self.m.num_vertices()]; self.num_faces()];
        for d in 0..self.m.darts() {
            inc[fi[d]][self.m.vertex(d)] = true;
        }
        inc
    }

    /// Common minimum of the labels over `V(f_0 ∩ f_i)`, `i >= 1`, if all
    /// these sets are non-empty and the minima agree.
    pub fn interface_minimum(&self) -> Option<i64> {
        let inc = self.face_vertices();
        let mut common = None;
        for i in 1..self.num_faces() {
            let m = (0..self.m.num_vertices())
                .filter(|&v| inc[0][v] && inc[i][v])
                .map(|v| self.labels[v])
                .min()?;
            if common.map_or(false, |c| c != m) {
                return None;
            }
            common = Some(m);
        }
        Some(common.unwrap_or(0))
    }

    /// Membership in `LM`: every `V(f_0 ∩ f_i)` is non-empty with label
    /// minimum 0.
    pub fn is_lm(&self) -> bool {
        self.interface_minimum() == Some(0)
    }

    /// Labels shifted by a constant.
    pub fn shifted(&self, by: i64) -> Self {
        Self {
            m: self.m.clone(),
            face_names: self.face_names.clone(),
            labels: self.labels.iter().map(|l| l + by).collect(),
        }
    }
}

/// Wire format of a labeled map: the map fields of
/// [`MapJson`](crate::planar_map::MapJson) plus `face_names` and `labels`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledMapJson {
    pub darts: usize,
    pub alpha: Vec<usize>,
    pub sigma: Vec<usize>,
    pub root: usize,
    pub face_names: Vec<usize>,
    pub labels: Vec<i64>,
}

#[derive(Debug, Error)]
pub enum LabeledMapJsonError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Labels(#[from] MultipointError),
}

impl LabeledMap {
    pub fn to_json(&self) -> String {
        let m = &self.m;
        let j = LabeledMapJson {
            darts: m.darts(),
            alpha: m.alpha_perm().to_vec(),
            sigma: m.sigma_perm().to_vec(),
            root: m.root(),
            face_names: self.face_names.clone(),
            labels: self.labels.clone(),
        };
        serde_json::to_string(&j).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, LabeledMapJsonError> {
        let j: LabeledMapJson = serde_json::from_str(s)?;
        if j.alpha.len() != j.darts {
            return Err(MapError::LengthMismatch {
                alpha: j.alpha.len(),
                sigma: j.darts,
            }
            .into());
        }
        let m = HalfEdgeMap::new(j.alpha, j.sigma, j.root)?;
        Ok(LabeledMap::new(m, j.face_names, j.labels)?)
    }
}

/// Strict triangle inequality and parity for every pair of sources.
pub fn check_delays(cache: &DistanceCache, v: &[usize], tau: &DelayVector) -> bool {
    let t = &tau.tau;
    if v.len() != t.len() {
        return false;
    }
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let d = cache.dist(v[i], v[j]) as i64;
            if (t[i] - t[j]).abs() >= d || (d + t[i] - t[j]).rem_euclid(2) != 0 {
                return false;
            }
        }
    }
    true
}

/// `tau_0 = -r'`, `tau_i = -d(v_0, v_i) + r'`.
pub fn delays_for_star(cache: &DistanceCache, v: &[usize], r_prime: i64) -> DelayVector {
    let d0 = cache.from(v[0]);
    let mut tau = vec![-r_prime];
    tau.extend(v[1..].iter().map(|&vi| -(d0[vi] as i64) + r_prime));
    DelayVector { tau }
}

/// Membership of `(q, v)` in the set of geodesic `r`-stars with `k = v.len() - 1`.
pub fn is_geodesic_star(cache: &DistanceCache, v: &[usize], r: u32) -> bool {
    let k = v.len() - 1;
    for a in 0..v.len() {
        for b in 0..v.len() {
            for c in b + 1..v.len() {
                if a != b && a != c && (v[a] == v[b] || v[a] == v[c] || cache.aligned(v[b], v[a], v[c])) {
                    return false;
                }
            }
        }
    }
    let d0 = cache.from(v[0]);
    if (1..=k).any(|i| d0[v[i]] < 3 * r) {
        return false;
    }
    let dists: Vec<_> = v[1..].iter().map(|&vi| cache.from(vi)).collect();
    for w in 0..d0.len() {
        if d0[w] < r {
            continue;
        }
        let on = (0..k).filter(|&i| d0[w] + dists[i][w] == d0[v[i + 1]]).count();
        if on >= 2 {
            return false;
        }
    }
    true
}
