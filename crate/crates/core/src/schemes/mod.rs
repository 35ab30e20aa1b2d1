//! Schemes: the cores left when a labeled map with `k + 1` faces is pruned
//! of its trees and its degree-2 chains are contracted. Enumeration of
//! pre-schemes and schemes, the factorization of labeled maps into scheme,
//! labeling, walk network and forests (plain and planted), and exact
//! counting.

mod count;
mod decompose;
mod enumerate;
mod json;

pub use count::{count_labeled_maps_exact, COUNT_BOUND};
pub use decompose::{
    decompose, decompose_planted, random_decomposition, reconstruct, reconstruct_planted, AdmissibleLabeling,
    SchemeDecomposition, WalkNetwork,
};
pub use enumerate::{enumerate_preschemes, enumerate_schemes, PreScheme, SCHEME_K_BOUND};
pub use json::{census_json, SchemeJson};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::planar_map::{CanonicalCode, Dart, HalfEdgeMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("not a scheme: {0}")]
    NotAScheme(&'static str),
    #[error("not a labeled map: {0}")]
    NotLabeledMap(&'static str),
    #[error("incompatible components: {0}")]
    IncompatibleComponents(String),
    #[error("{what} = {value} exceeds the bound {bound}")]
    TooLarge {
        what: &'static str,
        value: usize,
        bound: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexClass {
    /// `V_N`
    Null,
    /// `V_I`: on `f_0` and some other face, not null.
    Interface,
    /// `V_O`
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeClass {
    /// `E_N`: between `f_0` and some `f_i`, with a null extremity.
    Null,
    /// `E_I`: between `f_0` and some `f_i`, no null extremity.
    Interface,
    /// `E_O`
    Other,
}

/// An unrooted map with named faces and null vertices, stored in canonical
/// form: dart 0 is the root minimizing the decorated code, darts are
/// numbered in discovery order from it, and one orientation of each edge
/// is marked canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scheme {
    m: HalfEdgeMap,
    face_names: Vec<usize>,
    null: Vec<bool>,
    planted: Option<usize>,
    canonical: Vec<bool>,
}

/// Decorated code of a map with a face index per dart and flags per vertex.
pub(crate) fn decorated_code(
    m: &HalfEdgeMap,
    root: Dart,
    face_index: &[usize],
    vertex_flag: &[u32],
) -> CanonicalCode {
    CanonicalCode::rooted_with(m, root, |order, _| decorations(m, order, face_index, vertex_flag))
}

fn decorations(m: &HalfEdgeMap, order: &[Dart], face_index: &[usize], vertex_flag: &[u32]) -> Vec<u32> {
    let mut extra: Vec<u32> = order.iter().map(|&d| face_index[d] as u32).collect();
    extra.extend(order.iter().map(|&d| vertex_flag[m.vertex(d)]));
    extra
}

/// Relabels `m` so that the decorated code is minimal with the root at
/// dart 0. Returns the new map, the dart renaming and the number of roots
/// attaining the minimum (the automorphism count).
pub(crate) fn canonical_relabel(
    m: &HalfEdgeMap,
    face_index: &[usize],
    vertex_flag: &[u32],
) -> (HalfEdgeMap, Vec<usize>, usize) {
    let extra = |order: &[Dart], _: &[usize]| decorations(m, order, face_index, vertex_flag);
    let (best, root) = CanonicalCode::unrooted_with(m, extra);
    let autos = (0..m.darts())
        .filter(|&r| CanonicalCode::rooted_with(m, r, extra) == best)
        .count();
    let (cm, perm) = m.with_root(root).canonicalize();
    (cm, perm, autos)
}

impl Scheme {
    /// Validates the scheme conditions and brings the map to canonical form.
    /// `face_names[i]` is the face id of `f_i`, `null` and `planted` refer to
    /// vertex ids of `m`.
    pub fn new(
        m: &HalfEdgeMap,
        face_names: &[usize],
        null: &[bool],
        planted: Option<usize>,
    ) -> Result<Self, SchemeError> {
        Self::with_renaming(m, face_names, null, planted).map(|(s, _)| s)
    }

    /// As [`Scheme::new`], also returning where each dart of `m` went.
    pub(crate) fn with_renaming(
        m: &HalfEdgeMap,
        face_names: &[usize],
        null: &[bool],
        planted: Option<usize>,
    ) -> Result<(Self, Vec<usize>), SchemeError> {
        if face_names.len() != m.num_faces() || face_names.len() < 3 {
            return Err(SchemeError::NotAScheme("needs k + 1 >= 3 named faces"));
        }
        if null.len() != m.num_vertices() {
            return Err(SchemeError::NotAScheme("one null flag per vertex"));
        }
        let mut idx = vec![usize::MAX; m.num_faces()];
        for (i, &f) in face_names.iter().enumerate() {
            if f >= idx.len() || idx[f] != usize::MAX {
                return Err(SchemeError::NotAScheme("face names are not a bijection"));
            }
            idx[f] = i;
        }
        let fi: Vec<usize> = (0..m.darts()).map(|d| idx[m.face(d)]).collect();
        let mut flag: Vec<u32> = null.iter().map(|&b| b as u32).collect();
        if let Some(v) = planted {
            if v >= flag.len() {
                return Err(SchemeError::NotAScheme("planted vertex out of range"));
            }
            flag[v] |= 2;
        }
        let (cm, perm, autos) = canonical_relabel(m, &fi, &flag);
        if autos != 1 {
            return Err(SchemeError::NotAScheme("non-trivial automorphism"));
        }
        let mut cfi = vec![0; cm.darts()];
        let mut cflag = vec![0; cm.num_vertices()];
        for d in 0..m.darts() {
            cfi[perm[d]] = fi[d];
            cflag[cm.vertex(perm[d])] = flag[m.vertex(d)];
        }
        let mut names = vec![0; face_names.len()];
        for d in 0..cm.darts() {
            names[cfi[d]] = cm.face(d);
        }
        let mut s = Scheme {
            null: cflag.iter().map(|&f| f & 1 == 1).collect(),
            planted: cflag.iter().position(|&f| f & 2 == 2),
            face_names: names,
            canonical: vec![false; cm.darts()],
            m: cm,
        };
        s.check_conditions()?;
        s.canonical = s.orientation();
        Ok((s, perm))
    }

    pub fn map(&self) -> &HalfEdgeMap {
        &self.m
    }

    /// `k`, one less than the number of faces.
    pub fn k(&self) -> usize {
        self.face_names.len() - 1
    }

    pub fn face_names(&self) -> &[usize] {
        &self.face_names
    }

    pub fn null_vertices(&self) -> &[bool] {
        &self.null
    }

    pub fn is_planted(&self) -> bool {
        self.planted.is_some()
    }

    /// The degree-1 vertex `v**` of a planted scheme.
    pub fn planted_vertex(&self) -> Option<usize> {
        self.planted
    }

    /// `e**`, oriented toward `v**`.
    pub fn planted_edge(&self) -> Option<Dart> {
        let v = self.planted?;
        (0..self.m.darts()).find(|&d| self.m.head(d) == v)
    }

    /// `e'`: the dart following `e**` around their common origin.
    pub fn stolen_from(&self) -> Option<Dart> {
        self.planted_edge().map(|e| self.m.sigma(e))
    }

    /// Whether `d` carries the canonical orientation of its edge.
    pub fn is_canonical(&self, d: Dart) -> bool {
        self.canonical[d]
    }

    /// One dart per edge: the canonical orientations, in increasing order.
    pub fn canonical_darts(&self) -> Vec<Dart> {
        (0..self.m.darts()).filter(|&d| self.canonical[d]).collect()
    }

    /// Face index `i` (of `f_i`) on the left of each dart.
    pub fn face_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.m.num_faces()];
        for (i, &f) in self.face_names.iter().enumerate() {
            idx[f] = i;
        }
        (0..self.m.darts()).map(|d| idx[self.m.face(d)]).collect()
    }

    /// Per face index, whether each vertex has a corner in that face.
    fn incidence(&self) -> Vec<Vec<bool>> {
        let fi = self.face_index();
        let mut inc = vec![vec![false; self.m.num_vertices()]; self.face_names.len()];
        for d in 0..self.m.darts() {
            inc[fi[d]][self.m.vertex(d)] = true;
        }
        inc
    }

    fn interface_vertices(&self) -> Vec<bool> {
        let inc = self.incidence();
        (0..self.m.num_vertices())
            .map(|v| inc[0][v] && inc[1..].iter().any(|row| row[v]))
            .collect()
    }

    pub fn vertex_class(&self, v: usize) -> VertexClass {
        if self.null[v] {
            VertexClass::Null
        } else if self.interface_vertices()[v] {
            VertexClass::Interface
        } else {
            VertexClass::Other
        }
    }

    pub fn vertex_classes(&self) -> Vec<VertexClass> {
        let iface = self.interface_vertices();
        (0..self.m.num_vertices())
            .map(|v| {
                if self.null[v] {
                    VertexClass::Null
                } else if iface[v] {
                    VertexClass::Interface
                } else {
                    VertexClass::Other
                }
            })
            .collect()
    }

    /// Class of the edge carrying dart `d`.
    pub fn edge_class(&self, d: Dart) -> EdgeClass {
        let fi = self.face_index();
        let (a, b) = (fi[d], fi[self.m.alpha(d)]);
        let between = a != b && (a == 0 || b == 0);
        if !between {
            EdgeClass::Other
        } else if self.null[self.m.vertex(d)] || self.null[self.m.head(d)] {
            EdgeClass::Null
        } else {
            EdgeClass::Interface
        }
    }

    /// Thin edges: for a degree-2 null vertex, its `E_N` edge pointing to it
    /// with `f_0` on the left; and every `E_N` edge with a null extremity of
    /// degree at least 3.
    pub fn is_thin(&self, d: Dart) -> bool {
        if self.edge_class(d) != EdgeClass::Null {
            return false;
        }
        let deg = self.m.degrees();
        let c = if self.canonical[d] { d } else { self.m.alpha(d) };
        let ends = [self.m.vertex(c), self.m.head(c)];
        if ends.iter().any(|&v| self.null[v] && deg[v] >= 3) {
            return true;
        }
        let head = self.m.head(c);
        self.null[head] && deg[head] == 2 && self.face_index()[c] == 0
    }

    /// `(|V_N|, |V_I|, |V_O|)`.
    pub fn vertex_partition(&self) -> [usize; 3] {
        let mut out = [0; 3];
        for c in self.vertex_classes() {
            out[c as usize] += 1;
        }
        out
    }

    /// `(|E_N|, |E_I|, |E_O|)`.
    pub fn edge_partition(&self) -> [usize; 3] {
        let mut out = [0; 3];
        for d in self.canonical_darts() {
            out[self.edge_class(d) as usize] += 1;
        }
        out
    }

    pub fn num_thin(&self) -> usize {
        self.canonical_darts().into_iter().filter(|&d| self.is_thin(d)).count()
    }

    /// Exactly `k` null vertices, all of degree 2, every other vertex of
    /// degree 3 (`v**` excepted).
    pub fn is_dominant(&self) -> bool {
        let deg = self.m.degrees();
        let nulls = self.null.iter().filter(|&&b| b).count();
        nulls == self.k()
            && (0..self.m.num_vertices()).all(|v| {
                if self.null[v] {
                    deg[v] == 2
                } else {
                    Some(v) == self.planted || deg[v] == 3
                }
            })
    }

    /// Canonical orientation: `E_N` edges toward a null vertex, degree 2
    /// first; `e**` toward `v**`; otherwise the smaller dart.
    fn orientation(&self) -> Vec<bool> {
        let m = &self.m;
        let deg = m.degrees();
        let mut canon = vec![false; m.darts()];
        for d in 0..m.darts() {
            let a = m.alpha(d);
            if a < d {
                continue;
            }
            let toward = |x: Dart| {
                let h = m.head(x);
                if Some(h) == self.planted {
                    3
                } else if self.edge_class(x) == EdgeClass::Null && self.null[h] {
                    if deg[h] == 2 {
                        2
                    } else {
                        1
                    }
                } else {
                    0
                }
            };
            if toward(a) > toward(d) {
                canon[a] = true;
            } else {
                canon[d] = true;
            }
        }
        canon
    }

    fn check_conditions(&self) -> Result<(), SchemeError> {
        let bad = |s| Err(SchemeError::NotAScheme(s));
        let m = &self.m;
        let deg = m.degrees();
        let inc = self.incidence();
        let iface = self.interface_vertices();
        for row in &inc[1..] {
            if !(0..m.num_vertices()).any(|v| inc[0][v] && row[v]) {
                return bad("some V(f_0 ∩ f_i) is empty");
            }
            if !(0..m.num_vertices()).any(|v| self.null[v] && row[v]) {
                return bad("some f_i misses every null vertex");
            }
        }
        for v in 0..m.num_vertices() {
            if Some(v) == self.planted {
                if deg[v] != 1 || self.null[v] {
                    return bad("v** must be a non-null degree-1 vertex");
                }
                continue;
            }
            if deg[v] < 2 {
                return bad("degree-1 vertex");
            }
            if self.null[v] && !iface[v] {
                return bad("null vertex off every V(f_0 ∩ f_i)");
            }
            if deg[v] == 2 && !self.null[v] {
                return bad("degree-2 vertex that is not null");
            }
        }
        for d in 0..m.darts() {
            let (a, b) = (m.vertex(d), m.head(d));
            if deg[a] == 2 && self.null[a] && a != b && self.null[b] {
                return bad("degree-2 vertex adjacent to another null vertex");
            }
        }
        Ok(())
    }

    /// Decorated code at the canonical root; equal codes mean equal schemes.
    pub fn code(&self) -> CanonicalCode {
        decorated_code(&self.m, 0, &self.face_index(), &self.vertex_flags())
    }

    pub(crate) fn vertex_flags(&self) -> Vec<u32> {
        (0..self.m.num_vertices())
            .map(|v| self.null[v] as u32 | ((Some(v) == self.planted) as u32) << 1)
            .collect()
    }
}
