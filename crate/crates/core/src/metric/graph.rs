use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use crate::planar_map::HalfEdgeMap;

/// Marker for vertices a search did not reach.
pub const UNREACHED: u32 = u32::MAX;

/// Vertex adjacency in compressed rows; rows follow the rotation order.
#[derive(Clone, Debug)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

/// Graph distances from one source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceField {
    pub source: usize,
    pub dist: Vec<u32>,
}

impl Graph {
    pub fn from_map(m: &HalfEdgeMap) -> Self {
        let mut offsets = Vec::with_capacity(m.num_vertices() + 1);
        let mut targets = Vec::with_capacity(m.darts());
        offsets.push(0);
        for darts in m.vertex_darts() {
            targets.extend(darts.iter().map(|&d| m.head(d) as u32));
            offsets.push(targets.len());
        }
        Self { offsets, targets }
    }

    /// Graph from explicit adjacency lists (test fixtures).
    pub fn from_adjacency(adj: &[Vec<usize>]) -> Self {
        let mut offsets = vec![0];
        let mut targets = Vec::new();
        for row in adj {
            targets.extend(row.iter().map(|&v| v as u32));
            offsets.push(targets.len());
        }
        Self { offsets, targets }
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn bfs(&self, source: usize) -> DistanceField {
        DistanceField {
            source,
            dist: self.bfs_avoiding(source, None),
        }
    }

    /// BFS that never enters vertices flagged in `blocked` (the source is
    /// always entered).
    pub fn bfs_avoiding(&self, source: usize, blocked: Option<&[bool]>) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.num_vertices()];
        let mut queue = VecDeque::with_capacity(self.num_vertices());
        dist[source] = 0;
        queue.push_back(source as u32);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v as usize];
            for &w in self.neighbors(v as usize) {
                let w_us = w as usize;
                if dist[w_us] == UNREACHED && blocked.map_or(true, |b| !b[w_us]) {
                    dist[w_us] = dv + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Lexicographically smallest vertex sequence among geodesics from `a`
    /// to `b`, given the distance field from `b`.
    pub fn lex_min_geodesic(&self, a: usize, from_b: &DistanceField) -> Vec<usize> {
        let d = &from_b.dist;
        assert_ne!(d[a], UNREACHED, "target unreachable");
        let mut path = vec![a];
        let mut v = a;
        while d[v] > 0 {
            v = self
                .neighbors(v)
                .iter()
                .map(|&w| w as usize)
                .filter(|&w| d[w] + 1 == d[v])
                .min()
                .expect("BFS fixed point");
            path.push(v);
        }
        path
    }
}

/// BFS results memoized per source; safe to share across threads.
pub struct DistanceCache<'g> {
    graph: &'g Graph,
    memo: Mutex<HashMap<usize, Arc<Vec<u32>>>>,
}

impl<'g> DistanceCache<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Self {
            graph,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn from(&self, source: usize) -> Arc<Vec<u32>> {
        if let Some(d) = self.memo.lock().unwrap().get(&source) {
            return d.clone();
        }
        let d = Arc::new(self.graph.bfs(source).dist);
        self.memo.lock().unwrap().insert(source, d.clone());
        d
    }

    /// Reuses a stored search from either end before running one from `u`.
    pub fn dist(&self, u: usize, v: usize) -> u32 {
        if let Some(d) = self.memo.lock().unwrap().get(&v) {
            return d[u];
        }
        self.from(u)[v]
    }

    /// `d(x, y) + d(y, z) = d(x, z)`.
    pub fn aligned(&self, x: usize, y: usize, z: usize) -> bool {
        let dx = self.from(x);
        dx[y] + self.dist(y, z) == dx[z]
    }
}

pub fn bfs(m: &HalfEdgeMap, source: usize) -> DistanceField {
    Graph::from_map(m).bfs(source)
}

/// Whether `(x, y, z)` are aligned in the graph of `m`.
pub fn aligned(m: &HalfEdgeMap, x: usize, y: usize, z: usize) -> bool {
    let g = Graph::from_map(m);
    DistanceCache::new(&g).aligned(x, y, z)
}
