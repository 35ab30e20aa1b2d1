use crate::planar_map::{Dart, HalfEdgeMap};

/// Source index reached by the leftmost chain of each label-decreasing
/// dart; `None` on darts going up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiquidPartition {
    pub assignment: Vec<Option<usize>>,
}

impl LiquidPartition {
    pub fn cell(&self, i: usize) -> Vec<Dart> {
        (0..self.assignment.len())
            .filter(|&d| self.assignment[d] == Some(i))
            .collect()
    }
}

fn downhill(q: &HalfEdgeMap, labels: &[i64], d: Dart) -> bool {
    labels[q.head(d)] == labels[q.vertex(d)] - 1
}

/// Next dart of the leftmost chain after the downhill dart `d`: the first
/// downhill dart met turning from the sharpest left.
fn leftmost_next(q: &HalfEdgeMap, labels: &[i64], d: Dart) -> Option<Dart> {
    let back = q.alpha(d);
    let mut x = q.sigma(back);
    while x != back {
        if downhill(q, labels, x) {
            return Some(x);
        }
        x = q.sigma(x);
    }
    None
}

/// Darts of the leftmost chain starting with the downhill dart `start`.
pub fn leftmost_chain(q: &HalfEdgeMap, labels: &[i64], start: Dart) -> Vec<Dart> {
    assert!(downhill(q, labels, start), "chains start downhill");
    let mut chain = vec![start];
    while let Some(next) = leftmost_next(q, labels, *chain.last().unwrap()) {
        chain.push(next);
    }
    chain
}

/// Vertices of the leftmost chain from `start`, ending at a source.
pub fn leftmost_geodesic(q: &HalfEdgeMap, labels: &[i64], start: Dart) -> Vec<usize> {
    let chain = leftmost_chain(q, labels, start);
    let mut out = vec![q.vertex(start)];
    out.extend(chain.iter().map(|&d| q.head(d)));
    out
}

/// Assigns each downhill dart to the source ending its leftmost chain.
pub fn liquid_partition(q: &HalfEdgeMap, labels: &[i64], sources: &[usize]) -> LiquidPartition {
    let mut source_index = vec![None; q.num_vertices()];
    for (i, &v) in sources.iter().enumerate() {
        source_index[v] = Some(i);
    }
    let mut assignment: Vec<Option<usize>> = vec![None; q.darts()];
    let mut done = vec![false; q.darts()];
    for start in 0..q.darts() {
        if done[start] || !downhill(q, labels, start) {
            continue;
        }
        let mut path = vec![start];
        let result = loop {
            let d = *path.last().unwrap();
            if done[d] {
                path.pop();
                break assignment[d];
            }
            match leftmost_next(q, labels, d) {
                Some(x) => path.push(x),
                None => break source_index[q.head(d)],
            }
        };
        for d in path {
            assignment[d] = result;
            done[d] = true;
        }
    }
    LiquidPartition { assignment }
}
