use super::{
    delayed_labels, delays_for_star, is_geodesic_star, phi_reverse, LabeledMap, MultipointError,
    RootChoice,
};
use crate::metric::{DistanceCache, Graph};
use crate::planar_map::{CanonicalCode, Dart, HalfEdgeMap, Quadrangulation};

/// Rooted code of `q` with the sources and delays attached.
pub(crate) fn delayed_code(q: &HalfEdgeMap, v: &[usize], tau: &[i64]) -> CanonicalCode {
    let mut mark = vec![u32::MAX; q.num_vertices()];
    for (i, &s) in v.iter().enumerate() {
        mark[s] = i as u32;
    }
    CanonicalCode::rooted_with(q, q.root(), |order, _| {
        let mut extra: Vec<u32> = order.iter().map(|&d| mark[q.vertex(d)]).collect();
        // Delays only matter up to a common shift.
        extra.extend(tau.iter().map(|&t| (t - tau[0]) as i32 as u32));
        extra
    })
}

/// Labeled map and root choice sent to `(q, v, tau)` by the reverse
/// construction.
///
/// Inside each face of `q` one edge is drawn: between the two corners of
/// the larger label when the labels read `l, l+1, l, l+1`, and from the
/// corner of label `l+2` to the preceding corner otherwise. The result is
/// checked by running the reverse construction on it.
pub fn phi_forward(q: &Quadrangulation, v: &[usize], tau: &[i64]) -> Result<(LabeledMap, RootChoice), MultipointError> {
    let qm = q.map();
    let g = Graph::from_map(qm);
    let ql = delayed_labels(&g, v, tau);
    let qdarts = qm.darts();
    for d in 0..qdarts {
        if (ql[qm.vertex(d)] - ql[qm.head(d)]).abs() != 1 {
            return Err(MultipointError::BadDelays);
        }
    }

    // m-dart sitting in each corner of q.
    let mut at_corner: Vec<Option<Dart>> = vec![None; qdarts];
    let mut corner_of: Vec<Dart> = Vec::new();
    for face in qm.faces() {
        let lab: Vec<i64> = face.iter().map(|&y| ql[qm.vertex(y)]).collect();
        let top = *lab.iter().max().unwrap();
        let tops: Vec<usize> = (0..4).filter(|&p| lab[p] == top).collect();
        let (a, b) = match tops.len() {
            2 => (tops[0], tops[1]),
            1 => (tops[0], (tops[0] + 3) % 4),
            _ => return Err(MultipointError::BadDelays),
        };
        for p in [a, b] {
            at_corner[face[p]] = Some(corner_of.len());
            corner_of.push(face[p]);
        }
    }
    let mdarts = corner_of.len();
    let alpha: Vec<Dart> = (0..mdarts).map(|x| x ^ 1).collect();
    let mut sigma = vec![usize::MAX; mdarts];
    for around in qm.vertex_darts() {
        let ring: Vec<Dart> = around.iter().filter_map(|&y| at_corner[y]).collect();
        for (i, &x) in ring.iter().enumerate() {
            sigma[x] = ring[(i + 1) % ring.len()];
        }
    }
    // m-corner containing the q-dart x: the first m-dart met turning from x.
    let m_corner = |x: Dart| -> Dart {
        let mut y = qm.sigma(x);
        loop {
            if let Some(d) = at_corner[y] {
                return d;
            }
            y = qm.sigma(y);
        }
    };
    let rho = qm.root();
    let (root, choice) = if ql[qm.head(rho)] < ql[qm.vertex(rho)] {
        (m_corner(rho), RootChoice::Plus)
    } else {
        (m_corner(qm.alpha(rho)), RootChoice::Minus)
    };
    let m = HalfEdgeMap::new(alpha, sigma, root).map_err(MultipointError::ArcPlanarityFailure)?;
    if m.num_faces() != v.len() {
        return Err(MultipointError::ForwardMismatch);
    }
    let mut labels = vec![0; m.num_vertices()];
    for d in 0..mdarts {
        labels[m.vertex(d)] = ql[qm.vertex(corner_of[d])];
    }
    let mut face_names = Vec::with_capacity(v.len());
    let around = qm.vertex_darts();
    for &s in v {
        let x = around[s][0];
        face_names.push(m.face(m_corner(qm.alpha(x))));
    }
    let lm = LabeledMap::new(m, face_names, labels)?;

    let back = phi_reverse(&lm, choice)?;
    let dq = &back.delayed;
    if delayed_code(dq.q.map(), &dq.v, &dq.tau.tau) != delayed_code(qm, v, tau) {
        return Err(MultipointError::ForwardMismatch);
    }
    Ok((lm, choice))
}

/// Labeled map of a geodesic star with delays `tau^(r')`.
pub fn star_to_labeled_map(
    q: &Quadrangulation,
    cache: &DistanceCache,
    v: &[usize],
    r: u32,
    r_prime: i64,
) -> Result<LabeledMap, MultipointError> {
    if !is_geodesic_star(cache, v, r) || r_prime <= r as i64 || r_prime > 2 * r as i64 {
        return Err(MultipointError::NotGeodesicStar);
    }
    let tau = delays_for_star(cache, v, r_prime);
    phi_forward(q, v, &tau.tau).map(|(lm, _)| lm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvs::sample_quadrangulation;
    use crate::multipoint::liquid_partition;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Random geodesic stars with k = 2 on sampled quadrangulations.
    fn star_instances(count: usize, seed: u64) -> Vec<(Quadrangulation, Vec<usize>, u32)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        while out.len() < count {
            let p = sample_quadrangulation(300, &mut rng);
            let g = Graph::from_map(p.q.map());
            let cache = DistanceCache::new(&g);
            let nv = g.num_vertices();
            for _ in 0..40 {
                let v: Vec<usize> = (0..3).map(|_| rng.gen_range(0..nv)).collect();
                let r = rng.gen_range(1..=3);
                if is_geodesic_star(&cache, &v, r) {
                    out.push((p.q.clone(), v, r));
                    break;
                }
            }
        }
        out
    }

    #[test]
    fn stars_give_lm_members() {
        for (q, v, r) in star_instances(25, 3) {
            let g = Graph::from_map(q.map());
            let cache = DistanceCache::new(&g);
            for rp in r as i64 + 1..=2 * r as i64 {
                let tau = delays_for_star(&cache, &v, rp);
                assert!(crate::multipoint::check_delays(&cache, &v, &tau));
                let lm = star_to_labeled_map(&q, &cache, &v, r, rp).unwrap();
                assert!(lm.is_lm());
                let inc = lm.face_vertices();
                let f0_min = (0..lm.m.num_vertices()).filter(|&u| inc[0][u]).map(|u| lm.labels[u]).min();
                assert_eq!(f0_min, Some(-rp + 1));

                // Every geodesic from v_0 to v_i crosses label 0 at distance
                // r' inside V(f_0 ∩ f_i), leaving through E_i and back through E_0.
                let labels = crate::multipoint::delayed_labels(&g, &v, &tau.tau);
                let part = liquid_partition(q.map(), &labels, &v);
                let qm = q.map();
                let mut in_face = vec![vec![false; qm.num_vertices()]; 3];
                for d in 0..qm.darts() {
                    if let Some(i) = part.assignment[d] {
                        in_face[i][qm.vertex(d)] = true;
                    }
                }
                let d0 = cache.from(v[0]);
                for i in 1..3 {
                    let di = cache.from(v[i]);
                    for w in 0..qm.num_vertices() {
                        if d0[w] as i64 == rp && d0[w] + di[w] == d0[v[i]] {
                            assert_eq!(labels[w], 0);
                            assert!(in_face[0][w] && in_face[i][w]);
                            for &x in &qm.vertex_darts()[w] {
                                let h = qm.head(x);
                                if di[h] + 1 == di[w] && d0[h] == d0[w] + 1 {
                                    assert_eq!(part.assignment[x], Some(i));
                                }
                                if d0[h] + 1 == d0[w] && d0[h] + di[h] == d0[v[i]] {
                                    assert_eq!(part.assignment[x], Some(0));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn non_stars_are_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = sample_quadrangulation(30, &mut rng);
        let g = Graph::from_map(p.q.map());
        let cache = DistanceCache::new(&g);
        assert_eq!(
            star_to_labeled_map(&p.q, &cache, &[0, 0, 1], 1, 2),
            Err(MultipointError::NotGeodesicStar)
        );
    }

    #[test]
    fn forward_inverts_reverse_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let p = sample_quadrangulation(rng.gen_range(1..200), &mut rng);
            let tau = vec![p.vertex_labels[p.v_star]];
            let (lm, _) = phi_forward(&p.q, &[p.v_star], &tau).unwrap();
            assert_eq!(lm.m.num_edges(), p.q.num_faces());
        }
    }
}
