use super::forward::delayed_code;
use super::{check_delays, delayed_labels, liquid_partition, phi_reverse, DelayVector, LabeledMap, RootChoice};
use crate::metric::{DistanceCache, Graph};
use crate::planar_map::{enumerate_rooted_maps, CanonicalCode, MapError, Quadrangulation};

/// Rooted code of a labeled map, with face indices and labels attached.
pub fn labeled_map_code(lm: &LabeledMap) -> CanonicalCode {
    let fi = lm.face_index();
    let m = &lm.m;
    CanonicalCode::rooted_with(m, m.root(), |order, _| {
        let mut extra: Vec<u32> = order.iter().map(|&d| fi[d] as u32).collect();
        extra.extend(order.iter().map(|&d| lm.labels[m.vertex(d)] as i32 as u32));
        extra
    })
}

/// All labelings of `m` with `|l(u) - l(v)| <= 1` on edges, up to a common
/// shift (vertex 0 gets label 0).
pub fn lipschitz_labelings(m: &crate::planar_map::HalfEdgeMap) -> Vec<Vec<i64>> {
    let nv = m.num_vertices();
    let adj = m.neighbor_lists();
    // BFS order and parents.
    let mut order = vec![0usize];
    let mut parent = vec![usize::MAX; nv];
    parent[0] = 0;
    let mut i = 0;
    while i < order.len() {
        for &w in &adj[order[i]] {
            if parent[w] == usize::MAX {
                parent[w] = order[i];
                order.push(w);
            }
        }
        i += 1;
    }
    let mut rank = vec![0usize; nv];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let mut out = Vec::new();
    let mut labels = vec![0i64; nv];
    let mut stack = vec![(1usize, 0usize)];
    // Depth-first over the choices -1, 0, +1 relative to the BFS parent.
    while let Some((pos, choice)) = stack.pop() {
        if pos == nv {
            out.push(labels.clone());
            continue;
        }
        if choice == 3 {
            continue;
        }
        stack.push((pos, choice + 1));
        let v = order[pos];
        labels[v] = labels[parent[v]] + choice as i64 - 1;
        if adj[v].iter().all(|&w| rank[w] >= pos || (labels[w] - labels[v]).abs() <= 1) {
            stack.push((pos + 1, 0));
        }
    }
    if nv == 1 {
        out = vec![vec![0]];
    }
    out
}

/// Every member of `LM` with `faces` faces and `edges` edges: rooted maps,
/// face namings and normalized labelings.
pub fn enumerate_lm(edges: usize, faces: usize) -> Result<Vec<LabeledMap>, MapError> {
    let mut out = Vec::new();
    for m in enumerate_rooted_maps(edges, faces)? {
        let labelings = lipschitz_labelings(&m);
        let mut names: Vec<usize> = (0..faces).collect();
        permutations(&mut names, 0, &mut |names| {
            for l in &labelings {
                let lm = LabeledMap::new(m.clone(), names.to_vec(), l.clone()).unwrap();
                if let Some(c) = lm.interface_minimum() {
                    out.push(lm.shifted(-c));
                }
            }
        });
    }
    Ok(out)
}

pub(crate) fn permutations(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Images of every `LM` member under both root choices, as codes.
pub fn lm_images(lms: &[LabeledMap]) -> Vec<CanonicalCode> {
    let mut out = Vec::with_capacity(2 * lms.len());
    for lm in lms {
        for choice in RootChoice::BOTH {
            let r = phi_reverse(lm, choice).expect("labeled maps give quadrangulations");
            let d = &r.delayed;
            out.push(delayed_code(d.q.map(), &d.v, &d.tau.tau));
        }
    }
    out
}

/// Codes of the delayed quadrangulations `(q, v, tau)` on `q` with
/// `sources` distinct ordered sources whose labeled map lies in `LM`,
/// read off the liquid partition.
pub fn delayed_lm_codes(q: &Quadrangulation, sources: usize) -> Vec<CanonicalCode> {
    let qm = q.map();
    let g = Graph::from_map(qm);
    let cache = DistanceCache::new(&g);
    let nv = qm.num_vertices();
    let mut out = Vec::new();
    let mut v = vec![0usize; sources];
    let total = nv.pow(sources as u32);
    for code in 0..total {
        let mut c = code;
        for x in v.iter_mut() {
            *x = c % nv;
            c /= nv;
        }
        if (0..sources).any(|i| (0..i).any(|j| v[i] == v[j])) {
            continue;
        }
        let d0 = cache.from(v[0]);
        let ranges: Vec<i64> = (1..sources).map(|i| d0[v[i]] as i64).collect();
        let mut tau = vec![0i64; sources];
        for_each_delay(&ranges, &mut tau, 1, &mut |tau| {
            if !check_delays(&cache, &v, &DelayVector { tau: tau.to_vec() }) {
                return;
            }
            let labels = delayed_labels(&g, &v, tau);
            let part = liquid_partition(qm, &labels, &v);
            let mut inc = vec![vec![false; nv]; sources];
            for d in 0..qm.darts() {
                if let Some(i) = part.assignment[d] {
                    inc[i][qm.vertex(d)] = true;
                }
            }
            let mut common = None;
            for i in 1..sources {
                let m = (0..nv).filter(|&u| inc[0][u] && inc[i][u]).map(|u| labels[u]).min();
                match (m, common) {
                    (None, _) => return,
                    (Some(m), Some(c)) if m != c => return,
                    (Some(m), _) => common = Some(m),
                }
            }
            out.push(delayed_code(qm, &v, tau));
        });
    }
    out
}

fn for_each_delay(ranges: &[i64], tau: &mut Vec<i64>, i: usize, f: &mut impl FnMut(&[i64])) {
    if i == tau.len() {
        f(tau);
        return;
    }
    let r = ranges[i - 1];
    for t in -r + 1..r {
        tau[i] = t;
        for_each_delay(ranges, tau, i + 1, f);
    }
}
