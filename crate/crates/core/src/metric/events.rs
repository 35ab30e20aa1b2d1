use std::collections::VecDeque;

use super::graph::DistanceCache;

/// The distance unit `(8n/9)^{1/4}` for quadrangulations with `n` faces.
pub fn scale(n: usize) -> f64 {
    (8.0 * n as f64 / 9.0).powf(0.25)
}

/// Whether some geodesic from `a` to `b` uses only vertices accepted by
/// `allowed` (endpoints included).
pub fn geodesic_within(
    cache: &DistanceCache,
    a: usize,
    b: usize,
    allowed: impl Fn(usize) -> bool,
) -> bool {
    if !allowed(a) || !allowed(b) {
        return false;
    }
    let da = cache.from(a);
    let db = cache.from(b);
    let total = da[b];
    let g = cache.graph();
    let mut seen = vec![false; g.num_vertices()];
    let mut queue = VecDeque::from([a]);
    seen[a] = true;
    while let Some(v) = queue.pop_front() {
        if v == b {
            return true;
        }
        for &w in g.neighbors(v) {
            let w = w as usize;
            if !seen[w] && da[w] == da[v] + 1 && da[w] + db[w] == total && allowed(w) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

/// Bullet-by-bullet evaluation of a star event.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EventReport {
    pub bullets: [bool; 3],
}

impl EventReport {
    pub fn holds(&self) -> bool {
        self.bullets.iter().all(|&b| b)
    }
}

fn no_alignment(cache: &DistanceCache, vs: &[usize]) -> bool {
    for i in 0..vs.len() {
        for j in 0..vs.len() {
            for k in j + 1..vs.len() {
                if i != j && i != k && cache.aligned(vs[j], vs[i], vs[k]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Every geodesic from `v1` to `v2` meets the open ball of radius `radius`
/// around `v0`.
fn all_geodesics_hit_ball(cache: &DistanceCache, v0: usize, v1: usize, v2: usize, radius: f64) -> bool {
    let d0 = cache.from(v0);
    !geodesic_within(cache, v1, v2, |v| d0[v] as f64 >= radius)
}

pub fn event_a1_report(
    cache: &DistanceCache,
    v0: usize,
    v1: usize,
    v2: usize,
    eps: f64,
    beta: f64,
    n: usize,
) -> EventReport {
    let r = scale(n);
    let far = eps.powf(1.0 - beta) * r;
    let d0 = cache.from(v0);
    let first = all_geodesics_hit_ball(cache, v0, v1, v2, eps * r);
    let every_geodesic_leaves = |vi: usize| {
        !geodesic_within(cache, v0, vi, |v| {
            d0[v] as f64 <= far || cache.aligned(v1, v, v2)
        })
    };
    let second = every_geodesic_leaves(v1) || every_geodesic_leaves(v2);
    let third = no_alignment(cache, &[v0, v1, v2]) && (d0[v1].min(d0[v2]) as f64) >= 3.0 * far;
    EventReport {
        bullets: [first, second, third],
    }
}

pub fn event_a1(cache: &DistanceCache, v0: usize, v1: usize, v2: usize, eps: f64, beta: f64, n: usize) -> bool {
    event_a1_report(cache, v0, v1, v2, eps, beta, n).holds()
}

pub fn event_a2_report(cache: &DistanceCache, v: [usize; 4], eps: f64, n: usize) -> EventReport {
    let radius = eps * scale(n);
    let d0 = cache.from(v[0]);
    let first = all_geodesics_hit_ball(cache, v[0], v[1], v[2], radius);
    let dv: Vec<_> = v.iter().map(|&x| cache.from(x)).collect();
    let on_geodesic = |i: usize, w: usize| d0[w] + dv[i][w] == d0[v[i]];
    let mut second = true;
    'pairs: for i in 1..4 {
        for j in i + 1..4 {
            for w in 0..d0.len() {
                if d0[w] as f64 >= radius && on_geodesic(i, w) && on_geodesic(j, w) {
                    second = false;
                    break 'pairs;
                }
            }
        }
    }
    let closest = d0[v[1]].min(d0[v[2]]).min(d0[v[3]]);
    let third = no_alignment(cache, &v) && closest as f64 >= 3.0 * radius;
    EventReport {
        bullets: [first, second, third],
    }
}

pub fn event_a2(cache: &DistanceCache, v: [usize; 4], eps: f64, n: usize) -> bool {
    event_a2_report(cache, v, eps, n).holds()
}

/// Star points of a fixed geodesic `v1 -> v2` seen from `v3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarReport {
    /// Lexicographically smallest geodesic from `v1` to `v2`.
    pub geodesic: Vec<usize>,
    /// `star[i]`: no geodesic from `geodesic[i]` to `v3` meets the geodesic
    /// again.
    pub star: Vec<bool>,
    /// For non-star points, the first geodesic vertex aligned between.
    pub witness: Vec<Option<usize>>,
}

impl StarReport {
    pub fn count(&self) -> usize {
        self.star.iter().filter(|&&s| s).count()
    }

    pub fn star_points(&self) -> Vec<usize> {
        self.geodesic
            .iter()
            .zip(&self.star)
            .filter(|(_, &s)| s)
            .map(|(&v, _)| v)
            .collect()
    }
}

pub fn star_points_on_geodesic(cache: &DistanceCache, v1: usize, v2: usize, v3: usize) -> StarReport {
    let to_v2 = cache.graph().bfs(v2);
    let geodesic = cache.graph().lex_min_geodesic(v1, &to_v2);
    star_points_on_path(cache, geodesic, v3)
}

/// Star flags for an arbitrary vertex chain.
pub fn star_points_on_path(cache: &DistanceCache, geodesic: Vec<usize>, v3: usize) -> StarReport {
    let d3 = cache.from(v3);
    let witness: Vec<Option<usize>> = geodesic
        .iter()
        .map(|&y| {
            let dy = cache.from(y);
            geodesic
                .iter()
                .copied()
                .find(|&w| w != y && d3[w] + dy[w] == d3[y])
        })
        .collect();
    let star = witness.iter().map(Option::is_none).collect();
    StarReport {
        geodesic,
        star,
        witness,
    }
}
