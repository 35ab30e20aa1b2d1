use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::EncodingError;
use crate::planar_map::HalfEdgeMap;

/// Plane tree with integer vertex labels.
///
/// Vertices are numbered in depth-first preorder, so vertex 0 is the root and
/// two trees are equal exactly when they are the same labeled plane tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabeledTree {
    children: Vec<Vec<usize>>,
    labels: Vec<i64>,
}

/// Contour and label sequences of a tree with `n` edges.
///
/// `c` has length `2n + 2` and ends with the sentinel `c[2n + 1] = -1`;
/// `l` has length `2n + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContourEncoding {
    pub c: Vec<i64>,
    pub l: Vec<i64>,
}

impl LabeledTree {
    /// Single vertex with label 0.
    pub fn singleton() -> Self {
        Self {
            children: vec![Vec::new()],
            labels: vec![0],
        }
    }

    /// Builds from ordered child lists rooted at vertex 0; renumbers in
    /// preorder.
    pub fn new(children: Vec<Vec<usize>>, labels: Vec<i64>) -> Result<Self, EncodingError> {
        let n = children.len();
        if n == 0 || labels.len() != n {
            return Err(EncodingError::MalformedTree("vertex count mismatch"));
        }
        if labels[0] != 0 {
            return Err(EncodingError::MalformedTree("root label must be 0"));
        }
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            if v >= n || seen[v] {
                return Err(EncodingError::MalformedTree("not a tree"));
            }
            seen[v] = true;
            order.push(v);
            for &c in children[v].iter().rev() {
                if c >= n || (labels[c] - labels[v]).abs() > 1 {
                    return Err(EncodingError::MalformedTree("label jump exceeds 1"));
                }
                stack.push(c);
            }
        }
        if order.len() != n {
            return Err(EncodingError::MalformedTree("not connected"));
        }
        let mut new_id = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            new_id[v] = i;
        }
        let mut ch = vec![Vec::new(); n];
        let mut lab = vec![0; n];
        for &v in &order {
            ch[new_id[v]] = children[v].iter().map(|&c| new_id[c]).collect();
            lab[new_id[v]] = labels[v];
        }
        Ok(Self {
            children: ch,
            labels: lab,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Vertices visited along the contour, `2n + 1` entries starting and
    /// ending at the root.
    pub fn contour_vertices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(2 * self.num_edges() + 1);
        // (vertex, index of next child to visit)
        let mut stack = vec![(0usize, 0usize)];
        out.push(0);
        while let Some(&(v, next)) = stack.last() {
            if next < self.children[v].len() {
                let c = self.children[v][next];
                stack.last_mut().unwrap().1 += 1;
                stack.push((c, 0));
                out.push(c);
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    out.push(p);
                }
            }
        }
        out
    }

    pub fn depths(&self) -> Vec<i64> {
        let mut depth = vec![0; self.num_vertices()];
        for v in 0..self.num_vertices() {
            for &c in &self.children[v] {
                depth[c] = depth[v] + 1;
            }
        }
        depth
    }


    /// The tree as a one-face plane map: dart `i` goes from the `i`-th to the
    /// `(i+1)`-th contour vertex, so the face permutation is `i -> i + 1`.
    /// Returns `None` for the single-vertex tree. The second component maps
    /// each dart to its origin's tree vertex.
    pub fn to_map(&self) -> Option<(HalfEdgeMap, Vec<usize>)> {
        let n = self.num_edges();
        if n == 0 {
            return None;
        }
        let contour = self.contour_vertices();
        let darts = 2 * n;
        let mut alpha = vec![0; darts];
        // Dart i goes down if contour[i+1] is a child of contour[i].
        let mut open: Vec<usize> = Vec::new();
        let depth = self.depths();
        for i in 0..darts {
            if depth[contour[i + 1]] > depth[contour[i]] {
                open.push(i);
            } else {
                let j = open.pop().expect("balanced contour");
                alpha[i] = j;
                alpha[j] = i;
            }
        }
        let phi: Vec<usize> = (0..darts).map(|i| (i + 1) % darts).collect();
        let sigma = (0..darts).map(|d| phi[alpha[d]]).collect();
        let map = HalfEdgeMap::new(alpha, sigma, 0).expect("trees are plane maps");
        Some((map, contour[..darts].to_vec()))
    }
}

/// Contour and label sequences of `t`.
pub fn contour_of_tree(t: &LabeledTree) -> ContourEncoding {
    let depth = t.depths();
    let vs = t.contour_vertices();
    let mut c: Vec<i64> = vs.iter().map(|&v| depth[v]).collect();
    c.push(-1);
    let l = vs.iter().map(|&v| t.labels[v]).collect();
    ContourEncoding { c, l }
}

/// Inverse of [`contour_of_tree`].
pub fn tree_of_contour(enc: &ContourEncoding) -> Result<LabeledTree, EncodingError> {
    let ContourEncoding { c, l } = enc;
    let len = l.len();
    if len == 0 || len % 2 == 0 || c.len() != len + 1 {
        return Err(EncodingError::MalformedContour("lengths"));
    }
    if c[0] != 0 || c[len - 1] != 0 || c[len] != -1 {
        return Err(EncodingError::MalformedContour("endpoints"));
    }
    if l[0] != 0 {
        return Err(EncodingError::MalformedContour("root label must be 0"));
    }
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    let mut labels = vec![0i64];
    let mut path = vec![0usize];
    for i in 0..len - 1 {
        match c[i + 1] - c[i] {
            1 => {
                let v = children.len();
                children.push(Vec::new());
                labels.push(l[i + 1]);
                children[*path.last().unwrap()].push(v);
                path.push(v);
            }
            -1 => {
                path.pop();
                if path.is_empty() {
                    return Err(EncodingError::MalformedContour("goes below 0"));
                }
                if l[i + 1] != labels[*path.last().unwrap()] {
                    return Err(EncodingError::MalformedContour("label changes on return"));
                }
            }
            _ => return Err(EncodingError::MalformedContour("step not ±1")),
        }
        if c[i + 1] < 0 {
            return Err(EncodingError::MalformedContour("goes below 0"));
        }
    }
    LabeledTree::new(children, labels).map_err(|_| EncodingError::MalformedContour("labels"))
}

/// Uniform plane tree with `n` edges, encoded by its Dyck path.
pub fn sample_dyck_path<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<bool> {
    // n up-steps and n+1 down-steps; the cycle lemma picks the unique rotation
    // whose proper prefixes stay non-negative.
    let mut steps: Vec<bool> = (0..2 * n + 1).map(|i| i < n).collect();
    steps.shuffle(rng);
    let mut h = 0i64;
    let mut min = 0i64;
    let mut argmin = 0usize;
    for (i, &up) in steps.iter().enumerate() {
        h += if up { 1 } else { -1 };
        if h < min {
            min = h;
            argmin = i + 1;
        }
    }
    let len = steps.len();
    steps.rotate_left(argmin % len);
    steps.pop();
    steps
}

/// Uniform labeled tree with `n` edges and root label 0: uniform shape,
/// independent uniform label increments in `{-1, 0, 1}`.
pub fn sample_labeled_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> LabeledTree {
    let dyck = sample_dyck_path(n, rng);
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    let mut labels = vec![0i64];
    let mut path = vec![0usize];
    for up in dyck {
        if up {
            let p = *path.last().unwrap();
            let v = children.len();
            children.push(Vec::new());
            labels.push(labels[p] + rng.gen_range(-1..=1));
            children[p].push(v);
            path.push(v);
        } else {
            path.pop();
        }
    }
    // The Dyck path builds vertices in preorder already.
    LabeledTree { children, labels }
}

/// Every labeled tree with `n` edges (for oracles; `3^n` times Catalan(n)).
pub fn all_labeled_trees(n: usize) -> Vec<LabeledTree> {
    let mut out = Vec::new();
    for dyck in all_dyck_paths(n) {
        let mut children: Vec<Vec<usize>> = vec![Vec::new()];
        let mut parent = vec![usize::MAX];
        let mut path = vec![0usize];
        for up in dyck {
            if up {
                let p = *path.last().unwrap();
                let v = children.len();
                children.push(Vec::new());
                parent.push(p);
                children[p].push(v);
                path.push(v);
            } else {
                path.pop();
            }
        }
        for code in 0..3usize.pow(n as u32) {
            let mut labels = vec![0i64; n + 1];
            let mut c = code;
            for v in 1..=n {
                labels[v] = labels[parent[v]] + (c % 3) as i64 - 1;
                c /= 3;
            }
            out.push(LabeledTree {
                children: children.clone(),
                labels,
            });
        }
    }
    out
}

/// Every Dyck path of semilength `n`, `true` for up-steps.
pub fn all_dyck_paths(n: usize) -> Vec<Vec<bool>> {
    fn rec(n: usize, ups: usize, h: usize, cur: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if cur.len() == 2 * n {
            out.push(cur.clone());
            return;
        }
        if ups < n {
            cur.push(true);
            rec(n, ups + 1, h + 1, cur, out);
            cur.pop();
        }
        if h > 0 {
            cur.push(false);
            rec(n, ups, h - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 0, 0, &mut Vec::new(), &mut out);
    out
}

impl ContourEncoding {
    /// `step,C,L` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("step,C,L\n");
        for (i, l) in self.l.iter().enumerate() {
            s.push_str(&format!("{i},{},{l}\n", self.c[i]));
        }
        s
    }
}
