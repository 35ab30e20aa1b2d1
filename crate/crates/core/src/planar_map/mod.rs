//! Rooted plane maps as pairs of permutations on darts.
//!
//! A map with `E` edges has `2E` darts (oriented edges) numbered densely from
//! zero. Two permutations describe it completely:
//!
//! * `alpha` is a fixed-point-free involution pairing each dart with its
//!   reverse;
//! * `sigma` rotates darts around their common origin.
//!
//! Faces are the orbits of `phi = sigma ∘ alpha`, i.e. `phi(d) = sigma(alpha(d))`.
//! Every dart has its face on the **left**: walking along `d` and then
//! turning onto `phi(d)` keeps the same face on the left. The *corner* of a
//! dart `d` is the angular sector at its origin between `sigma⁻¹(d)` and `d`;
//! it lies inside the face of `d`, and corners of a face come in the facial
//! order `d, phi(d), phi²(d), ...`. Drawn with faces on the left, `sigma`
//! turns clockwise and `sigma⁻¹` counterclockwise (mirror the picture to
//! get the other way round). Every other module inherits this convention.

mod canonical;
mod enumerate;
mod json;

pub use canonical::{canonical_dart_order, CanonicalCode};
pub use enumerate::{
    enumerate_rooted_maps, enumerate_rooted_quadrangulations, for_each_permutation,
    QUADRANGULATION_ORACLE_BOUND,
};
pub use json::{JsonMapError, MapJson};

use thiserror::Error;

/// Dart identifier, dense in `0..darts`.
pub type Dart = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("alpha has {alpha} entries but sigma has {sigma}")]
    LengthMismatch { alpha: usize, sigma: usize },
    #[error("a map needs at least one edge")]
    Empty,
    #[error("{which} is not a permutation of the dart set")]
    NotPermutation { which: &'static str },
    #[error("alpha is not a fixed-point-free involution at dart {dart}")]
    NotInvolution { dart: Dart },
    #[error("root dart {root} is out of range")]
    RootOutOfRange { root: Dart },
    #[error("the map is disconnected")]
    Disconnected,
    #[error("the map is not planar: V - E + F = {euler}")]
    NonPlanar { euler: i64 },
    #[error("face {face} has degree {degree}, expected 4")]
    FaceDegreeNot4 { face: usize, degree: usize },
    #[error("the vertex graph is not bipartite")]
    NotBipartite,
    #[error("{what} = {value} exceeds the oracle bound {bound}")]
    TooLarge {
        what: &'static str,
        value: usize,
        bound: usize,
    },
}

/// A validated, connected, genus-0 rooted map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfEdgeMap {
    alpha: Vec<Dart>,
    sigma: Vec<Dart>,
    sigma_inv: Vec<Dart>,
    root: Dart,
    vertex_of: Vec<usize>,
    face_of: Vec<usize>,
    num_vertices: usize,
    num_faces: usize,
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Labels the orbits of `step` in order of their smallest dart.
fn orbit_labels(n: usize, step: impl Fn(Dart) -> Dart) -> (Vec<usize>, usize) {
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let mut d = start;
        loop {
            label[d] = count;
            d = step(d);
            if d == start {
                break;
            }
        }
        count += 1;
    }
    (label, count)
}

impl HalfEdgeMap {
    /// Validates `(alpha, sigma, root)` and builds the map.
    pub fn new(alpha: Vec<Dart>, sigma: Vec<Dart>, root: Dart) -> Result<Self, MapError> {
        if alpha.len() != sigma.len() {
            return Err(MapError::LengthMismatch {
                alpha: alpha.len(),
                sigma: sigma.len(),
            });
        }
        let n = alpha.len();
        if n == 0 {
            return Err(MapError::Empty);
        }
        if !is_permutation(&alpha) {
            return Err(MapError::NotPermutation { which: "alpha" });
        }
        if let Some(dart) = (0..n).find(|&d| alpha[d] == d || alpha[alpha[d]] != d) {
            return Err(MapError::NotInvolution { dart });
        }
        if !is_permutation(&sigma) {
            return Err(MapError::NotPermutation { which: "sigma" });
        }
        if root >= n {
            return Err(MapError::RootOutOfRange { root });
        }
        let map = Self::assemble(alpha, sigma, root);
        if !map.is_connected() {
            return Err(MapError::Disconnected);
        }
        let euler = map.euler_characteristic();
        if euler != 2 {
            return Err(MapError::NonPlanar { euler });
        }
        Ok(map)
    }

    /// Builds without validation; callers guarantee the invariants.
    pub(crate) fn assemble(alpha: Vec<Dart>, sigma: Vec<Dart>, root: Dart) -> Self {
        let n = alpha.len();
        let mut sigma_inv = vec![0; n];
        for (d, &s) in sigma.iter().enumerate() {
            sigma_inv[s] = d;
        }
        let (vertex_of, num_vertices) = orbit_labels(n, |d| sigma[d]);
        let (face_of, num_faces) = orbit_labels(n, |d| sigma[alpha[d]]);
        Self {
            alpha,
            sigma,
            sigma_inv,
            root,
            vertex_of,
            face_of,
            num_vertices,
            num_faces,
        }
    }

    fn is_connected(&self) -> bool {
        let n = self.darts();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(d) = stack.pop() {
            for x in [self.alpha[d], self.sigma[d]] {
                if !seen[x] {
                    seen[x] = true;
                    count += 1;
                    stack.push(x);
                }
            }
        }
        count == n
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices as i64 - self.num_edges() as i64 + self.num_faces as i64
    }

    pub fn darts(&self) -> usize {
        self.alpha.len()
    }

    pub fn num_edges(&self) -> usize {
        self.alpha.len() / 2
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_faces(&self) -> usize {
        self.num_faces
    }

    pub fn root(&self) -> Dart {
        self.root
    }

    pub fn alpha(&self, d: Dart) -> Dart {
        self.alpha[d]
    }

    pub fn sigma(&self, d: Dart) -> Dart {
        self.sigma[d]
    }

    pub fn sigma_inv(&self, d: Dart) -> Dart {
        self.sigma_inv[d]
    }

    /// Next dart along the face to the left of `d`.
    pub fn phi(&self, d: Dart) -> Dart {
        self.sigma[self.alpha[d]]
    }

    pub fn phi_inv(&self, d: Dart) -> Dart {
        self.alpha[self.sigma_inv[d]]
    }

    pub fn alpha_perm(&self) -> &[Dart] {
        &self.alpha
    }

    pub fn sigma_perm(&self) -> &[Dart] {
        &self.sigma
    }

    /// Origin vertex of `d`.
    pub fn vertex(&self, d: Dart) -> usize {
        self.vertex_of[d]
    }

    /// Vertex `d` points to.
    pub fn head(&self, d: Dart) -> usize {
        self.vertex_of[self.alpha[d]]
    }

    /// Face lying to the left of `d`.
    pub fn face(&self, d: Dart) -> usize {
        self.face_of[d]
    }

    pub fn vertex_labels(&self) -> &[usize] {
        &self.vertex_of
    }

    pub fn face_labels(&self) -> &[usize] {
        &self.face_of
    }

    /// Same map, different root.
    pub fn with_root(&self, root: Dart) -> Self {
        assert!(root < self.darts(), "root out of range");
        Self {
            root,
            ..self.clone()
        }
    }

    /// Face cycles, each listed in facial order from its smallest dart.
    pub fn faces(&self) -> Vec<Vec<Dart>> {
        let mut out = vec![Vec::new(); self.num_faces];
        for d in 0..self.darts() {
            let f = self.face_of[d];
            if out[f].is_empty() {
                let mut x = d;
                loop {
                    out[f].push(x);
                    x = self.phi(x);
                    if x == d {
                        break;
                    }
                }
            }
        }
        out
    }

    /// Darts around each vertex in `sigma` order, from the smallest dart.
    pub fn vertex_darts(&self) -> Vec<Vec<Dart>> {
        let mut out = vec![Vec::new(); self.num_vertices];
        for d in 0..self.darts() {
            let v = self.vertex_of[d];
            if out[v].is_empty() {
                let mut x = d;
                loop {
                    out[v].push(x);
                    x = self.sigma[x];
                    if x == d {
                        break;
                    }
                }
            }
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.vertex_of.iter().filter(|&&w| w == v).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_vertices];
        for &v in &self.vertex_of {
            deg[v] += 1;
        }
        deg
    }

    pub fn face_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_faces];
        for &f in &self.face_of {
            deg[f] += 1;
        }
        deg
    }

    /// Rebuilds the map after renaming dart `d` to `perm[d]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.darts();
        let mut alpha = vec![0; n];
        let mut sigma = vec![0; n];
        for d in 0..n {
            alpha[perm[d]] = perm[self.alpha[d]];
            sigma[perm[d]] = perm[self.sigma[d]];
        }
        Self::assemble(alpha, sigma, perm[self.root])
    }

    /// BFS-canonical relabeling with the root as dart 0, plus the renaming used.
    pub fn canonicalize(&self) -> (Self, Vec<usize>) {
        let (order, _) = canonical_dart_order(self, self.root);
        let mut perm = vec![0; self.darts()];
        for (new, &old) in order.iter().enumerate() {
            perm[old] = new;
        }
        (self.relabel(&perm), perm)
    }

    pub fn canonical_code(&self) -> CanonicalCode {
        CanonicalCode::rooted(self, self.root)
    }

    /// Vertex adjacency in compressed form, one entry per dart.
    pub fn neighbor_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_vertices];
        for d in 0..self.darts() {
            adj[self.vertex(d)].push(self.head(d));
        }
        adj
    }

    /// Proper 2-coloring of the vertices if one exists.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let adj = self.neighbor_lists();
        let mut color = vec![u8::MAX; self.num_vertices];
        color[0] = 0;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[v];
                    queue.push_back(w);
                } else if color[w] == color[v] {
                    return None;
                }
            }
        }
        Some(color)
    }
}

/// A map whose faces all have degree four.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadrangulation(HalfEdgeMap);

impl Quadrangulation {
    pub fn new(map: HalfEdgeMap) -> Result<Self, MapError> {
        check_quadrangulation(&map)?;
        Ok(Self(map))
    }

    pub fn map(&self) -> &HalfEdgeMap {
        &self.0
    }

    pub fn into_map(self) -> HalfEdgeMap {
        self.0
    }

    pub fn num_faces(&self) -> usize {
        self.0.num_faces()
    }
}

impl std::ops::Deref for Quadrangulation {
    type Target = HalfEdgeMap;
    fn deref(&self) -> &HalfEdgeMap {
        &self.0
    }
}

/// Checks that every face has degree 4 and that the vertex graph is bipartite.
pub fn check_quadrangulation(map: &HalfEdgeMap) -> Result<(), MapError> {
    if let Some((face, &degree)) = map
        .face_degrees()
        .iter()
        .enumerate()
        .find(|(_, &deg)| deg != 4)
    {
        return Err(MapError::FaceDegreeNot4 { face, degree });
    }
    debug_assert_eq!(map.num_vertices(), map.num_faces() + 2);
    if map.bipartition().is_none() {
        return Err(MapError::NotBipartite);
    }
    Ok(())
}

/// Builds a map from raw permutations.
pub fn build_map(alpha: Vec<Dart>, sigma: Vec<Dart>, root: Dart) -> Result<HalfEdgeMap, MapError> {
    HalfEdgeMap::new(alpha, sigma, root)
}

/// Standard pairing `0↔1, 2↔3, ...`.
pub fn standard_alpha(darts: usize) -> Vec<Dart> {
    (0..darts).map(|d| d ^ 1).collect()
}
