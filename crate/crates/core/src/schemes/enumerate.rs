use std::collections::HashSet;

use super::{canonical_relabel, decorated_code, Scheme, SchemeError};
use crate::multipoint::permutations;
use crate::planar_map::{for_each_permutation, standard_alpha, CanonicalCode, Dart, HalfEdgeMap};

/// Largest `k` accepted by the enumerators.
pub const SCHEME_K_BOUND: usize = 3;

/// A map with `k + 1` named faces, all degrees at least 3 and every
/// `V(f_0 ∩ f_i)` non-empty, in canonical unrooted form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreScheme {
    pub m: HalfEdgeMap,
    pub face_names: Vec<usize>,
}

impl PreScheme {
    pub fn k(&self) -> usize {
        self.face_names.len() - 1
    }

    /// `3k - 3` edges, hence `2k - 2` vertices all of degree 3.
    pub fn is_dominant(&self) -> bool {
        self.m.num_edges() == 3 * self.k() - 3
    }

    pub fn face_index(&self) -> Vec<usize> {
        face_index(&self.m, &self.face_names)
    }

    /// Unrooted code remembering only which face is `f_0`.
    pub fn shape_code(&self) -> CanonicalCode {
        let outer: Vec<usize> = self.face_index().iter().map(|&i| (i == 0) as usize).collect();
        CanonicalCode::unrooted_with(&self.m, |order, _| order.iter().map(|&d| outer[d] as u32).collect()).0
    }
}

fn face_index(m: &HalfEdgeMap, names: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; m.num_faces()];
    for (i, &f) in names.iter().enumerate() {
        idx[f] = i;
    }
    (0..m.darts()).map(|d| idx[m.face(d)]).collect()
}

fn check_k(k: usize) -> Result<(), SchemeError> {
    if k < 2 || k > SCHEME_K_BOUND {
        return Err(SchemeError::TooLarge {
            what: "k",
            value: k,
            bound: SCHEME_K_BOUND,
        });
    }
    Ok(())
}

fn interface_ok(m: &HalfEdgeMap, fi: &[usize], faces: usize) -> bool {
    let mut inc = vec![vec![false; m.num_vertices()]; faces];
    for d in 0..m.darts() {
        inc[fi[d]][m.vertex(d)] = true;
    }
    (1..faces).all(|i| (0..m.num_vertices()).any(|v| inc[0][v] && inc[i][v]))
}

/// All pre-schemes with `k + 1` faces.
///
/// Vertex rotations with every cycle of length at least 3 are generated
/// directly, kept when planar with `k + 1` faces, then every naming of the
/// faces is tried and the results are quotiented by their unrooted
/// decorated code.
pub fn enumerate_preschemes(k: usize) -> Result<Vec<PreScheme>, SchemeError> {
    check_k(k)?;
    let faces = k + 1;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    // V - E + F = 2 and 2E >= 3V bound E by 3k - 3.
    for edges in k..=3 * k - 3 {
        let darts = 2 * edges;
        let vertices = edges + 2 - faces;
        let alpha = standard_alpha(darts);
        let mut rooted = HashSet::new();
        let mut maps = Vec::new();
        for_each_permutation(darts, Some(vertices), 3, darts, &mut |sigma| {
            if let Ok(m) = HalfEdgeMap::new(alpha.clone(), sigma.to_vec(), 0) {
                if m.num_faces() == faces {
                    let (c, _) = m.canonicalize();
                    if rooted.insert(c.canonical_code()) {
                        maps.push(c);
                    }
                }
            }
        });
        for m in maps {
            let mut names: Vec<usize> = (0..faces).collect();
            permutations(&mut names, 0, &mut |names| {
                let fi = face_index(&m, names);
                if !interface_ok(&m, &fi, faces) {
                    return;
                }
                let flags = vec![0; m.num_vertices()];
                let (cm, perm, _) = canonical_relabel(&m, &fi, &flags);
                let mut cfi = vec![0; cm.darts()];
                for d in 0..m.darts() {
                    cfi[perm[d]] = fi[d];
                }
                if seen.insert(decorated_code(&cm, 0, &cfi, &flags)) {
                    let mut face_names = vec![0; faces];
                    for d in 0..cm.darts() {
                        face_names[cfi[d]] = cm.face(d);
                    }
                    out.push(PreScheme { m: cm, face_names });
                }
            });
        }
    }
    Ok(out)
}

/// Raw permutations of a map under construction.
struct Draft {
    alpha: Vec<Dart>,
    sigma: Vec<Dart>,
}

impl Draft {
    fn of(m: &HalfEdgeMap) -> Self {
        Self {
            alpha: m.alpha_perm().to_vec(),
            sigma: m.sigma_perm().to_vec(),
        }
    }

    /// Splits the edge of `d` with a new degree-2 vertex; returns the new
    /// darts `(x, y)` with `x` the end of `d` and `y` continuing toward the
    /// old head.
    fn subdivide(&mut self, d: Dart) -> (Dart, Dart) {
        let a = self.alpha[d];
        let x = self.alpha.len();
        let y = x + 1;
        self.alpha.extend([d, a]);
        self.alpha[d] = x;
        self.alpha[a] = y;
        self.sigma.extend([y, x]);
        (x, y)
    }

    /// Hangs a pendant edge in the corner of `d`; returns the dart pointing
    /// to the new leaf.
    fn pendant(&mut self, d: Dart) -> Dart {
        let prev = (0..self.sigma.len()).find(|&x| self.sigma[x] == d).unwrap();
        let x = self.alpha.len();
        self.alpha.extend([x + 1, x]);
        self.sigma.extend([d, x + 1]);
        self.sigma[prev] = x;
        x
    }

    fn build(self) -> HalfEdgeMap {
        HalfEdgeMap::new(self.alpha, self.sigma, 0).expect("subdivisions stay planar")
    }
}

/// All schemes with `k + 1` faces, optionally only dominant ones, plain or
/// planted, each once.
///
/// From every pre-scheme (planted: with a pendant edge hung in a corner or
/// in the middle of an edge), edges between `f_0` and other faces are split
/// by degree-2 null vertices and vertices of `V(f_0 ∩ f_i)` are marked null
/// in every combination passing the scheme conditions.
pub fn enumerate_schemes(k: usize, dominant_only: bool, planted: bool) -> Result<Vec<Scheme>, SchemeError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in enumerate_preschemes(k)? {
        if dominant_only && !p.is_dominant() {
            continue;
        }
        let fi0 = p.face_index();
        let mut bases: Vec<(HalfEdgeMap, Vec<usize>, Option<usize>)> = Vec::new();
        if planted {
            for d in 0..p.m.darts() {
                if !dominant_only {
                    let mut dr = Draft::of(&p.m);
                    let e = dr.pendant(d);
                    bases.push(with_leaf(dr.build(), &fi0, e));
                }
                let mut dr = Draft::of(&p.m);
                let (x, _) = dr.subdivide(d);
                let e = dr.pendant(x);
                bases.push(with_leaf(dr.build(), &fi0, e));
            }
        } else {
            bases.push((p.m.clone(), fi0, None));
        }
        for (m, fi, leaf) in bases {
            for s in null_choices(&m, &fi, k, dominant_only, leaf) {
                let code = s.code();
                if seen.insert(code) {
                    out.push(s);
                }
            }
        }
    }
    out.sort_by_cached_key(|s| s.code());
    Ok(out)
}

/// The map with a leaf, the face index per dart and the leaf vertex.
fn with_leaf(m: HalfEdgeMap, fi0: &[usize], e: Dart) -> (HalfEdgeMap, Vec<usize>, Option<usize>) {
    let mut fi = vec![usize::MAX; m.darts()];
    fi[..fi0.len()].copy_from_slice(fi0);
    // Faces are unchanged by the insertions; read them off old darts.
    let mut by_face = vec![usize::MAX; m.num_faces()];
    for d in 0..fi0.len() {
        by_face[m.face(d)] = fi0[d];
    }
    for d in fi0.len()..m.darts() {
        fi[d] = by_face[m.face(d)];
    }
    let leaf = m.head(e);
    (m, fi, Some(leaf))
}

fn null_choices(
    m: &HalfEdgeMap,
    fi: &[usize],
    k: usize,
    dominant_only: bool,
    leaf: Option<usize>,
) -> Vec<Scheme> {
    let faces = k + 1;
    let mut inc0 = vec![false; m.num_vertices()];
    let mut inc_other = vec![false; m.num_vertices()];
    for d in 0..m.darts() {
        if fi[d] == 0 {
            inc0[m.vertex(d)] = true;
        } else {
            inc_other[m.vertex(d)] = true;
        }
    }
    let deg = m.degrees();
    let candidates: Vec<usize> = (0..m.num_vertices())
        .filter(|&v| inc0[v] && inc_other[v] && deg[v] >= 3)
        .collect();
    let splittable: Vec<Dart> = (0..m.darts())
        .filter(|&d| d < m.alpha(d) && (fi[d] == 0) != (fi[m.alpha(d)] == 0))
        .collect();
    let mut out = Vec::new();
    let vmasks = if dominant_only { 1 } else { 1usize << candidates.len() };
    for vmask in 0..vmasks {
        let mut null = vec![false; m.num_vertices()];
        for (i, &v) in candidates.iter().enumerate() {
            null[v] = vmask >> i & 1 == 1;
        }
        let free: Vec<Dart> = splittable
            .iter()
            .copied()
            .filter(|&d| !null[m.vertex(d)] && !null[m.head(d)])
            .collect();
        for emask in 0..1usize << free.len() {
            let chosen: Vec<Dart> = (0..free.len()).filter(|&i| emask >> i & 1 == 1).map(|i| free[i]).collect();
            if dominant_only && chosen.len() != k {
                continue;
            }
            let mut dr = Draft::of(m);
            let mut fi2 = fi.to_vec();
            for &d in &chosen {
                // The first new dart lies in the face of alpha(d), the
                // second continues d.
                dr.subdivide(d);
                fi2.extend([fi[m.alpha(d)], fi[d]]);
            }
            let sm = dr.build();
            let mut null_by_vertex = vec![false; sm.num_vertices()];
            for d in 0..sm.darts() {
                let v_old = if d < m.darts() { Some(m.vertex(d)) } else { None };
                null_by_vertex[sm.vertex(d)] = match v_old {
                    Some(v) => null[v],
                    None => true,
                };
            }
            let leaf2 = leaf.map(|l| {
                let d = (0..m.darts()).find(|&d| m.vertex(d) == l).unwrap();
                sm.vertex(d)
            });
            let mut names2 = vec![0; faces];
            for d in 0..sm.darts() {
                names2[fi2[d]] = sm.face(d);
            }
            if let Ok(s) = Scheme::new(&sm, &names2, &null_by_vertex, leaf2) {
                if !dominant_only || s.is_dominant() {
                    out.push(s);
                }
            }
        }
    }
    out
}
