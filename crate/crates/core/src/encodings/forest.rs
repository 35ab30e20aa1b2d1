use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{contour_of_tree, sample_labeled_tree, tree_of_contour, ContourEncoding};
use super::{EncodingError, LabeledTree, MotzkinWalk};

/// Sequence of `r` labeled trees hanging from a floor path.
///
/// The floor path has vertices `w_0, ..., w_r`; tree `j` is rooted at `w_j`
/// and `w_r` is the extra vertex ending the last floor edge. Trees store
/// labels relative to their root, the absolute label of a vertex of tree `j`
/// being `floor[j]` plus its stored label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabeledForest {
    floor: MotzkinWalk,
    trees: Vec<LabeledTree>,
}

/// Path-valued encoding of a labeled forest.
///
/// At contour step `i` the visited vertex has height `zeta[i]` above the
/// extra floor vertex `w_r`, and `w[i][j]` is the label of its ancestor at
/// height `j`. So `w[i][0]` is always `M(r)` and `w[0]` is the floor walk read
/// backwards.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscreteSnake {
    pub zeta: Vec<usize>,
    pub w: Vec<Vec<i64>>,
}

impl LabeledForest {
    pub fn new(floor: MotzkinWalk, trees: Vec<LabeledTree>) -> Result<Self, EncodingError> {
        if floor.duration() != trees.len() {
            return Err(EncodingError::MalformedForest("tree count differs from floor duration"));
        }
        Ok(Self { floor, trees })
    }

    /// Forest of `r` single-vertex trees on the given floor.
    pub fn bare(floor: MotzkinWalk) -> Self {
        let trees = vec![LabeledTree::singleton(); floor.duration()];
        Self { floor, trees }
    }

    pub fn floor(&self) -> &MotzkinWalk {
        &self.floor
    }

    pub fn trees(&self) -> &[LabeledTree] {
        &self.trees
    }

    pub fn num_trees(&self) -> usize {
        self.trees.len()
    }

    /// Edges of the trees, floor edges excluded.
    pub fn tree_edges(&self) -> usize {
        self.trees.iter().map(|t| t.num_edges()).sum()
    }

    /// Oriented edges when the forest is seen as a map, floor edges included
    /// once each.
    pub fn oriented_edges(&self) -> usize {
        2 * self.tree_edges() + self.num_trees()
    }

    /// `C_F`: the concatenation `r + C_{t_1}, r - 1 + C_{t_2}, ..., 1 + C_{t_r}`
    /// followed by the final `0`.
    pub fn contour(&self) -> Vec<i64> {
        let r = self.num_trees() as i64;
        let mut out = Vec::new();
        for (j, t) in self.trees.iter().enumerate() {
            let c = contour_of_tree(t).c;
            out.extend(c[..c.len() - 1].iter().map(|h| h + r - j as i64));
        }
        out.push(0);
        out
    }

    /// `L_F`: absolute label of the vertex visited at each contour step.
    pub fn label_process(&self) -> Vec<i64> {
        let mut out = Vec::new();
        for (j, t) in self.trees.iter().enumerate() {
            let base = self.floor.values()[j];
            out.extend(contour_of_tree(t).l.iter().map(|l| l + base));
        }
        out.push(self.floor.end());
        out
    }
}

/// Discrete snake of a labeled forest.
pub fn snake_of_forest(f: &LabeledForest) -> DiscreteSnake {
    let r = f.num_trees();
    let m = f.floor.values();
    let mut zeta = Vec::new();
    let mut w = Vec::new();
    for (j, t) in f.trees.iter().enumerate() {
        // Ancestors on the floor: w_r, w_{r-1}, ..., w_j.
        let floor_part: Vec<i64> = (j..=r).rev().map(|x| m[x]).collect();
        let depth = t.depths();
        let mut path: Vec<usize> = Vec::new();
        for v in t.contour_vertices() {
            while path.len() as i64 > depth[v] {
                path.pop();
            }
            if (path.len() as i64) < depth[v] {
                path.push(v);
            }
            let mut wi = floor_part.clone();
            wi.extend(path.iter().map(|&u| t.labels()[u] + m[j]));
            zeta.push(r - j + depth[v] as usize);
            w.push(wi);
        }
    }
    zeta.push(0);
    w.push(vec![m[r]]);
    DiscreteSnake { zeta, w }
}

/// Inverse of [`snake_of_forest`].
pub fn forest_of_snake(s: &DiscreteSnake) -> Result<LabeledForest, EncodingError> {
    let bad = EncodingError::MalformedSnake;
    let len = s.zeta.len();
    if len == 0 || s.w.len() != len {
        return Err(bad("lengths"));
    }
    if s.w.iter().zip(&s.zeta).any(|(w, &z)| w.len() != z + 1) {
        return Err(bad("path length differs from height"));
    }
    let r = s.zeta[0];
    if s.zeta[len - 1] != 0 {
        return Err(bad("does not end on the extra floor vertex"));
    }
    if s.zeta.windows(2).any(|p| p[0].abs_diff(p[1]) != 1) {
        return Err(bad("height step not ±1"));
    }
    let mut m: Vec<i64> = s.w[0].clone();
    m.reverse();
    let floor = MotzkinWalk::new(m).map_err(|_| bad("floor is not a Motzkin walk"))?;
    let mut trees = Vec::with_capacity(r);
    let mut i = 0;
    for j in 0..r {
        let base_h = r - j;
        if s.zeta[i] != base_h {
            return Err(bad("tree does not start on its floor vertex"));
        }
        let base_l = s.w[i][base_h];
        let mut c = Vec::new();
        let mut l = Vec::new();
        while s.zeta[i] >= base_h {
            c.push((s.zeta[i] - base_h) as i64);
            l.push(s.w[i][s.zeta[i]] - base_l);
            i += 1;
        }
        c.push(-1);
        let tree = tree_of_contour(&ContourEncoding { c, l }).map_err(|_| bad("tree contour"))?;
        trees.push(tree);
    }
    let forest = LabeledForest::new(floor, trees)?;
    if snake_of_forest(&forest) != *s {
        return Err(bad("ancestral label paths are inconsistent"));
    }
    Ok(forest)
}

impl DiscreteSnake {
    pub fn num_trees(&self) -> usize {
        self.zeta[0]
    }

    /// `C_F(i)`, which equals the height `zeta(i)` above the extra vertex.
    pub fn contour(&self) -> Vec<i64> {
        self.zeta.iter().map(|&z| z as i64).collect()
    }

    /// `L_F(i) = W(i, zeta(i))`.
    pub fn label_process(&self) -> Vec<i64> {
        self.w.iter().zip(&self.zeta).map(|(w, &z)| w[z]).collect()
    }

    /// `M(j) = W(inf{i : zeta(i) = r - j}, r - j)`.
    pub fn floor_walk(&self) -> Vec<i64> {
        let r = self.num_trees();
        (0..=r)
            .map(|j| {
                let i = self.zeta.iter().position(|&z| z == r - j).expect("hits every level");
                self.w[i][r - j]
            })
            .collect()
    }

    /// One-based index of the tree explored at step `i < len - 1`:
    /// `r + 1 - min_{i' <= i} zeta(i')`.
    pub fn tree_indices(&self) -> Vec<usize> {
        let r = self.num_trees();
        let mut min = usize::MAX;
        self.zeta
            .iter()
            .map(|&z| {
                min = min.min(z);
                r + 1 - min
            })
            .collect()
    }

    /// Height within the current tree, `zeta(i) - min_{i' <= i} zeta(i')`.
    pub fn tree_heights(&self) -> Vec<usize> {
        let mut min = usize::MAX;
        self.zeta
            .iter()
            .map(|&z| {
                min = min.min(z);
                z - min
            })
            .collect()
    }
}

/// Random forest with `r` trees whose sizes sum to about `edges`, floor
/// walk started at `start`. Intended for property tests, not uniform.
pub fn sample_forest<R: Rng + ?Sized>(r: usize, edges: usize, start: i64, rng: &mut R) -> LabeledForest {
    let mut floor = vec![start];
    for _ in 0..r {
        let last = *floor.last().unwrap();
        floor.push(last + rng.gen_range(-1..=1));
    }
    let trees = (0..r)
        .map(|_| {
            let n = if edges == 0 { 0 } else { rng.gen_range(0..=2 * edges / r.max(1)) };
            sample_labeled_tree(n, rng)
        })
        .collect();
    LabeledForest {
        floor: MotzkinWalk::new(floor).expect("steps in {-1,0,1}"),
        trees,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tree(children: Vec<Vec<usize>>, labels: Vec<i64>) -> LabeledTree {
        LabeledTree::new(children, labels).unwrap()
    }

    #[test]
    fn bare_forest() {
        let m = MotzkinWalk::new(vec![2, 1, 1, 0]).unwrap();
        let f = LabeledForest::bare(m);
        let s = snake_of_forest(&f);
        assert_eq!(s.zeta, vec![3, 2, 1, 0]);
        assert_eq!(s.w[0], vec![0, 1, 1, 2]);
        for i in 0..4 {
            assert_eq!(s.w[i], s.w[0][..=s.zeta[i]].to_vec());
        }
        assert_eq!(forest_of_snake(&s).unwrap(), f);
    }

    /// Four trees, 22 oriented edges (9 tree edges, 4 floor edges).
    fn figure_like_forest() -> LabeledForest {
        let floor = MotzkinWalk::new(vec![1, 2, 1, 1, 0]).unwrap();
        let trees = vec![
            tree(vec![vec![1, 2], vec![], vec![3], vec![]], vec![0, 1, -1, 0]),
            LabeledTree::singleton(),
            tree(
                vec![vec![1], vec![2, 3], vec![], vec![4], vec![]],
                vec![0, -1, -2, 0, 1],
            ),
            tree(vec![vec![1, 2], vec![], vec![]], vec![0, 1, 1]),
        ];
        LabeledForest::new(floor, trees).unwrap()
    }

    #[test]
    fn figure_forest() {
        let f = figure_like_forest();
        assert_eq!(f.tree_edges(), 9);
        assert_eq!(f.oriented_edges(), 22);
        let s = snake_of_forest(&f);
        assert_eq!(s.zeta.len(), 2 * 9 + 4 + 1);
        // Step 15 is inside the third tree, back at the child of its root
        // w_2 on the way home; step 13 is at the deepest vertex of that tree.
        assert_eq!(s.zeta[15], 3);
        assert_eq!(s.w[15], vec![0, 1, 1, 0]);
        assert_eq!(s.zeta[13], 5);
        assert_eq!(s.w[13], vec![0, 1, 1, 0, 1, 2]);
        assert_eq!(s.tree_indices()[15], 3);
        assert_eq!(forest_of_snake(&s).unwrap(), f);
    }

    fn check_identities(f: &LabeledForest, s: &DiscreteSnake) {
        let r = f.num_trees();
        assert_eq!(s.zeta.len(), 2 * f.tree_edges() + r + 1);
        assert_eq!(s.contour(), f.contour());
        assert_eq!(s.label_process(), f.label_process());
        assert_eq!(s.floor_walk(), f.floor().values());
        let mut expected = Vec::new();
        for (j, t) in f.trees().iter().enumerate() {
            expected.extend(std::iter::repeat(j + 1).take(2 * t.num_edges() + 1));
        }
        let idx = s.tree_indices();
        assert_eq!(&idx[..idx.len() - 1], &expected[..]);
    }

    #[test]
    fn malformed_snake() {
        let f = figure_like_forest();
        let mut s = snake_of_forest(&f);
        s.w[5][1] += 1;
        assert!(forest_of_snake(&s).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]
        #[test]
        fn snake_roundtrip(seed in any::<u64>(), r in 0usize..8, edges in 0usize..30) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = sample_forest(r, edges, rng.gen_range(-3..=3), &mut rng);
            let s = snake_of_forest(&f);
            check_identities(&f, &s);
            prop_assert_eq!(forest_of_snake(&s).unwrap(), f);
        }
    }
}
