use super::graph::DistanceCache;

/// Exact covers are only searched below this many points.
pub const EXACT_COVER_BOUND: usize = 20;

/// Bracket on the number of closed balls of radius `r` (centred at points of
/// the set) needed to cover a point set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverBounds {
    /// Size of a maximal set with pairwise distances `> 2r`.
    pub packing: usize,
    pub greedy: usize,
    pub exact: Option<usize>,
}

fn balls(points: &[usize], cache: &DistanceCache, r: f64) -> Vec<Vec<bool>> {
    points
        .iter()
        .map(|&c| {
            let dc = cache.from(c);
            points.iter().map(|&p| dc[p] as f64 <= r).collect()
        })
        .collect()
}

/// Greedy cover size: repeatedly take the ball covering most uncovered
/// points (ties to the earliest point).
pub fn covering_number(points: &[usize], cache: &DistanceCache, r: f64) -> usize {
    greedy(&balls(points, cache, r))
}

fn greedy(ball: &[Vec<bool>]) -> usize {
    let n = ball.len();
    let mut covered = vec![false; n];
    let mut left = n;
    let mut count = 0;
    while left > 0 {
        let (best, _) = (0..n)
            .map(|c| (c, (0..n).filter(|&p| ball[c][p] && !covered[p]).count()))
            .max_by_key(|&(c, k)| (k, std::cmp::Reverse(c)))
            .unwrap();
        for p in 0..n {
            if ball[best][p] && !covered[p] {
                covered[p] = true;
                left -= 1;
            }
        }
        count += 1;
    }
    count
}

/// Greedy maximal packing with pairwise distance `> 2r`; a lower bound on
/// any cover by radius-`r` balls.
pub fn packing_number(points: &[usize], cache: &DistanceCache, r: f64) -> usize {
    let mut chosen: Vec<usize> = Vec::new();
    for &p in points {
        let dp = cache.from(p);
        if chosen.iter().all(|&c| dp[c] as f64 > 2.0 * r) {
            chosen.push(p);
        }
    }
    chosen.len()
}

/// Minimum cover size by branch and bound; `None` above the bound.
pub fn exact_cover(points: &[usize], cache: &DistanceCache, r: f64) -> Option<usize> {
    if points.len() > EXACT_COVER_BOUND {
        return None;
    }
    if points.is_empty() {
        return Some(0);
    }
    let ball = balls(points, cache, r);
    let masks: Vec<u32> = ball
        .iter()
        .map(|row| row.iter().enumerate().filter(|(_, &b)| b).fold(0, |m, (i, _)| m | 1 << i))
        .collect();
    let full = (1u32 << points.len()) - 1;
    let mut best = greedy(&ball);
    fn search(masks: &[u32], full: u32, covered: u32, used: usize, best: &mut usize) {
        if covered == full {
            *best = (*best).min(used);
            return;
        }
        if used + 1 >= *best {
            return;
        }
        let first = (!covered & full).trailing_zeros();
        for &m in masks {
            if m >> first & 1 == 1 {
                search(masks, full, covered | m, used + 1, best);
            }
        }
    }
    search(&masks, full, 0, 0, &mut best);
    Some(best)
}

pub fn cover_bounds(points: &[usize], cache: &DistanceCache, r: f64) -> CoverBounds {
    CoverBounds {
        packing: packing_number(points, cache, r),
        greedy: covering_number(points, cache, r),
        exact: exact_cover(points, cache, r),
    }
}

/// Points along a vertex chain with pairwise distances `>= 2 eta`, by the
/// greedy sweep: the next point is the first one after the last point still
/// within `2 eta` of the current one.
///
/// On a geodesic of length `d` this yields at least
/// `floor(d / ceil(2 eta)) + 1` points.
pub fn separated_points(path: &[usize], cache: &DistanceCache, eta: f64) -> Vec<usize> {
    let mut out = Vec::new();
    if path.is_empty() {
        return out;
    }
    let mut s = 0;
    loop {
        out.push(path[s]);
        let ds = cache.from(path[s]);
        let last_close = (s..path.len())
            .rev()
            .find(|&t| (ds[path[t]] as f64) < 2.0 * eta)
            .unwrap_or(s);
        if last_close + 1 >= path.len() {
            return out;
        }
        s = last_close + 1;
    }
}

/// Guaranteed number of separated points on a geodesic of length `d`.
pub fn separated_points_guarantee(d: u32, eta: f64) -> usize {
    let step = (2.0 * eta).ceil().max(1.0) as u32;
    (d / step) as usize + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::graph::Graph;
    use crate::planar_map::enumerate_rooted_quadrangulations;
    use proptest::prelude::*;

    fn grid(w: usize, h: usize) -> Graph {
        let id = |x: usize, y: usize| y * w + x;
        let mut adj = vec![Vec::new(); w * h];
        for y in 0..h {
            for x in 0..w {
                if x + 1 < w {
                    adj[id(x, y)].push(id(x + 1, y));
                    adj[id(x + 1, y)].push(id(x, y));
                }
                if y + 1 < h {
                    adj[id(x, y)].push(id(x, y + 1));
                    adj[id(x, y + 1)].push(id(x, y));
                }
            }
        }
        Graph::from_adjacency(&adj)
    }

    /// Minimum cover over all subsets of centres.
    fn brute_cover(points: &[usize], cache: &DistanceCache, r: f64) -> usize {
        let n = points.len();
        (1u32..1 << n)
            .filter(|&sub| {
                points.iter().all(|&p| {
                    (0..n).any(|c| sub >> c & 1 == 1 && cache.dist(points[c], p) as f64 <= r)
                })
            })
            .map(|s| s.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn trivial_covers() {
        let g = grid(4, 3);
        let cache = DistanceCache::new(&g);
        assert_eq!(covering_number(&[5], &cache, 0.0), 1);
        let all: Vec<usize> = (0..12).collect();
        assert_eq!(covering_number(&all, &cache, 5.0), 1);
        assert_eq!(covering_number(&all, &cache, 0.0), 12);
    }

    #[test]
    fn bounds_bracket_the_minimum() {
        let g = grid(4, 3);
        let cache = DistanceCache::new(&g);
        let all: Vec<usize> = (0..12).collect();
        for r in [0.0, 1.0, 1.5, 2.0, 3.0] {
            let b = cover_bounds(&all, &cache, r);
            let m = brute_cover(&all, &cache, r);
            assert_eq!(b.exact, Some(m));
            assert!(b.packing <= m && m <= b.greedy, "r={r} {b:?} {m}");
        }
        for q in enumerate_rooted_quadrangulations(4).unwrap().iter().step_by(11) {
            let g = Graph::from_map(q);
            let cache = DistanceCache::new(&g);
            let pts: Vec<usize> = (0..g.num_vertices()).collect();
            for r in [0.0, 1.0, 2.0] {
                let b = cover_bounds(&pts, &cache, r);
                let m = brute_cover(&pts, &cache, r);
                assert_eq!(b.exact, Some(m));
                assert!(b.packing <= m && m <= b.greedy);
            }
        }
    }

    #[test]
    fn separated_on_a_long_geodesic() {
        let g = grid(11, 1);
        let cache = DistanceCache::new(&g);
        let path: Vec<usize> = (0..11).collect();
        let pts = separated_points(&path, &cache, 1.0);
        assert!(pts.len() >= 6);
        assert_eq!(separated_points_guarantee(10, 1.0), 6);
        assert_eq!(separated_points(&path, &cache, 5.0).len(), 2);
        assert!(!separated_points(&path, &cache, 50.0).is_empty());
    }

    proptest! {
        #[test]
        fn separated_points_postcondition(w in 2usize..9, h in 1usize..6, seed in any::<u64>(), eta in 0.25f64..4.0) {
            use rand::{Rng, SeedableRng};
            let g = grid(w, h);
            let cache = DistanceCache::new(&g);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            // Random lazy walk, then a geodesic between its ends.
            let mut path = vec![0usize];
            for _ in 0..30 {
                let v = *path.last().unwrap();
                let nb = g.neighbors(v);
                path.push(nb[rng.gen_range(0..nb.len())] as usize);
            }
            let pts = separated_points(&path, &cache, eta);
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    prop_assert!(cache.dist(pts[i], pts[j]) as f64 >= 2.0 * eta);
                }
            }
            let end = *path.last().unwrap();
            let geo = g.lex_min_geodesic(0, &g.bfs(end));
            let d = cache.dist(0, end);
            prop_assert!(separated_points(&geo, &cache, eta).len() >= separated_points_guarantee(d, eta));
        }
    }
}
