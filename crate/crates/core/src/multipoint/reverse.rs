use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{DelayVector, DelayedQuadrangulation, LabeledMap, MultipointError};
use crate::planar_map::{check_quadrangulation, Dart, HalfEdgeMap, Quadrangulation};

/// Which of the two arcs at the root corner of `m` roots the quadrangulation.
///
/// `Plus` takes the arc drawn from the root corner toward its successor;
/// `Minus` takes the same edge in the opposite direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootChoice {
    Plus,
    Minus,
}

impl RootChoice {
    pub const BOTH: [RootChoice; 2] = [RootChoice::Plus, RootChoice::Minus];
}

/// Target of a successor: a corner of `m` or the extra corner `c_i` of face `f_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Corner {
    Dart(Dart),
    Sink(usize),
}

/// Successor of every corner of `m`, in `O(E)`.
pub fn successors(lm: &LabeledMap) -> Vec<Corner> {
    let m = &lm.m;
    let fi = lm.face_index();
    let mut out = vec![Corner::Sink(0); m.darts()];
    for face in m.faces() {
        let len = face.len();
        let label = |p: usize| lm.labels[m.vertex(face[p % len])];
        // Scanning the doubled boundary backwards, `ahead[l]` is the nearest
        // later position with label `l`.
        let mut ahead: HashMap<i64, usize> = HashMap::new();
        for p in (0..2 * len).rev() {
            if p < len {
                out[face[p]] = match ahead.get(&(label(p) - 1)) {
                    Some(&q) => Corner::Dart(face[q % len]),
                    None => Corner::Sink(fi[face[p]]),
                };
            }
            ahead.insert(label(p), p);
        }
    }
    out
}

pub fn successor(lm: &LabeledMap, corner: Dart) -> Corner {
    let m = &lm.m;
    let l = lm.labels[m.vertex(corner)];
    let mut d = m.phi(corner);
    while d != corner {
        if lm.labels[m.vertex(d)] == l - 1 {
            return Corner::Dart(d);
        }
        d = m.phi(d);
    }
    Corner::Sink(lm.face_index()[corner])
}

/// The reverse construction with its bookkeeping.
///
/// Dart `2e` of `q` is the arc from corner `e` of `m` to its successor and
/// `2e + 1` is its reverse.
#[derive(Clone, Debug)]
pub struct ReverseOutput {
    pub delayed: DelayedQuadrangulation,
    pub choice: RootChoice,
    /// Labels on the vertices of `q`; sources carry their delays.
    pub labels: Vec<i64>,
    /// Vertex of `q` for each vertex of `m`.
    pub vertex_of_m: Vec<usize>,
    /// Face index `i` of the corner each arc starts from, per dart of `m`.
    pub arc_face: Vec<usize>,
    pub successors: Vec<Corner>,
}

pub fn phi_reverse(lm: &LabeledMap, choice: RootChoice) -> Result<ReverseOutput, MultipointError> {
    let m = &lm.m;
    let n = m.num_edges();
    let k1 = lm.num_faces();
    let darts = m.darts();
    let succ = successors(lm);
    let fi = lm.face_index();

    // Position of each dart along its face, for the nesting order of arcs
    // arriving at a common corner.
    let mut pos = vec![0usize; darts];
    let mut face_len = vec![0usize; darts];
    for face in m.faces() {
        for (p, &d) in face.iter().enumerate() {
            pos[d] = p;
            face_len[d] = face.len();
        }
    }
    let mut incoming: Vec<Vec<Dart>> = vec![Vec::new(); darts];
    let mut sink_in: Vec<Vec<Dart>> = vec![Vec::new(); k1];
    for e in 0..darts {
        match succ[e] {
            Corner::Dart(c) => incoming[c].push(e),
            Corner::Sink(i) => sink_in[i].push(e),
        }
    }
    let back = |j: Dart, c: Dart| (pos[c] + face_len[c] - pos[j]) % face_len[c];
    for (c, arcs) in incoming.iter_mut().enumerate() {
        arcs.sort_by_key(|&j| back(j, c));
    }

    let mut sigma = vec![usize::MAX; 2 * darts];
    let alpha: Vec<Dart> = (0..2 * darts).map(|x| x ^ 1).collect();
    for around in m.vertex_darts() {
        let mut ring: Vec<Dart> = Vec::new();
        for &d in &around {
            ring.extend(incoming[d].iter().map(|&j| 2 * j + 1));
            ring.push(2 * d);
        }
        close_ring(&mut sigma, &ring);
    }
    for arcs in &mut sink_in {
        // Facial order from the root side of each face.
        arcs.sort_by_key(|&e| pos[e]);
        arcs.reverse();
        let ring: Vec<Dart> = arcs.iter().map(|&e| 2 * e + 1).collect();
        close_ring(&mut sigma, &ring);
    }

    let root = match choice {
        RootChoice::Plus => 2 * m.root(),
        RootChoice::Minus => 2 * m.root() + 1,
    };
    let map = HalfEdgeMap::new(alpha, sigma, root).map_err(MultipointError::ArcPlanarityFailure)?;
    check_quadrangulation(&map).map_err(MultipointError::ArcPlanarityFailure)?;
    debug_assert_eq!(map.num_faces(), n);

    let vertex_of_m: Vec<usize> = m
        .vertex_darts()
        .iter()
        .map(|ds| map.vertex(2 * ds[0]))
        .collect();
    let mut labels = vec![0i64; map.num_vertices()];
    for (u, &qv) in vertex_of_m.iter().enumerate() {
        labels[qv] = lm.labels[u];
    }
    let mut sources = Vec::with_capacity(k1);
    let mut tau = Vec::with_capacity(k1);
    for (i, arcs) in sink_in.iter().enumerate() {
        let v = map.vertex(2 * arcs[0] + 1);
        let t = lm.labels[m.vertex(arcs[0])] - 1;
        labels[v] = t;
        sources.push(v);
        tau.push(t);
        debug_assert_eq!(i, fi[arcs[0]]);
    }
    let q = Quadrangulation::new(map).map_err(MultipointError::ArcPlanarityFailure)?;
    Ok(ReverseOutput {
        delayed: DelayedQuadrangulation {
            q,
            v: sources,
            tau: DelayVector { tau },
        },
        choice,
        labels,
        vertex_of_m,
        arc_face: fi,
        successors: succ,
    })
}

fn close_ring(sigma: &mut [usize], ring: &[Dart]) {
    for (a, &x) in ring.iter().enumerate() {
        sigma[x] = ring[(a + 1) % ring.len()];
    }
}
