use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{EdgeClass, Scheme, SchemeError, VertexClass};
use crate::encodings::{sample_labeled_tree, LabeledForest, LabeledTree, MotzkinWalk};
use crate::multipoint::LabeledMap;
use crate::planar_map::{Dart, HalfEdgeMap};

/// `ell_v` per scheme vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdmissibleLabeling {
    pub ell: Vec<i64>,
}

/// `M_e` for every oriented edge `e` of the scheme, indexed by dart.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WalkNetwork {
    pub walks: Vec<MotzkinWalk>,
}

impl WalkNetwork {
    pub fn duration(&self, d: Dart) -> usize {
        self.walks[d].duration()
    }
}

/// Scheme, labeling, walk network and one forest per oriented edge, plus
/// the marked oriented edge for plain schemes.
///
/// `forests[e]` lists the trees of `F_e` with labels relative to their
/// root. Tree `j` of `F_e` hangs at the `j`-th vertex of the chain of `e`,
/// to its left, so its root label is `M_e(j)`. Planted schemes shift this
/// around the root: `F_{e**}` and `F_{ē**}` have `r + 1` trees, and the
/// forest of `e'` (the dart after `e**` around its origin) has lost its
/// first tree, its tree `j` hanging at chain vertex `j + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeDecomposition {
    pub scheme: Scheme,
    pub labeling: AdmissibleLabeling,
    pub walks: WalkNetwork,
    pub forests: Vec<Vec<LabeledTree>>,
    /// `(e, i)`: the `i`-th oriented edge of `F_e`, counting each tree's
    /// contour darts and then its floor edge, tree by tree. `None` exactly
    /// for planted schemes, where `v**` carries the root.
    pub root: Option<(Dart, usize)>,
}

impl SchemeDecomposition {
    /// Number of trees `F_e` must have.
    pub fn tree_count(&self, e: Dart) -> usize {
        let r = self.walks.duration(e);
        let s = &self.scheme;
        if let Some(p) = s.planted_edge() {
            if e == p || e == s.map().alpha(p) {
                return r + 1;
            }
            if Some(e) == s.stolen_from() {
                return r - 1;
            }
        }
        r
    }

    /// Chain index where tree `j` of `F_e` hangs.
    fn tree_position(&self, e: Dart, j: usize) -> usize {
        j + (Some(e) == self.scheme.stolen_from()) as usize
    }

    /// Absolute label of the root of tree `j` of `F_e`.
    pub fn tree_base(&self, e: Dart, j: usize) -> i64 {
        self.walks.walks[e].values()[self.tree_position(e, j)]
    }

    /// `F_e` as a forest on the floor `M_e`, outside the planted exceptions.
    pub fn forest(&self, e: Dart) -> Option<LabeledForest> {
        if self.tree_count(e) != self.walks.duration(e) {
            return None;
        }
        LabeledForest::new(self.walks.walks[e].clone(), self.forests[e].clone()).ok()
    }

    /// Oriented edges of `F_e`: both orientations of tree edges and the
    /// floor edges once.
    pub fn oriented_edges(&self, e: Dart) -> usize {
        2 * self.forests[e].iter().map(|t| t.num_edges()).sum::<usize>() + self.walks.duration(e)
    }

    /// Edge count of the labeled map: half the total of
    /// [`Self::oriented_edges`].
    pub fn num_edges(&self) -> usize {
        (0..self.scheme.map().darts()).map(|e| self.oriented_edges(e)).sum::<usize>() / 2
    }

    /// Checks every compatibility condition between the components, naming
    /// the first that fails.
    pub fn validate(&self) -> Result<(), SchemeError> {
        let fail = |s: String| Err(SchemeError::IncompatibleComponents(s));
        let s = &self.scheme;
        let sm = s.map();
        let classes = s.vertex_classes();
        if self.labeling.ell.len() != sm.num_vertices() {
            return fail("one label per scheme vertex".into());
        }
        for (v, c) in classes.iter().enumerate() {
            let l = self.labeling.ell[v];
            match c {
                VertexClass::Null if l != 0 => return fail(format!("null vertex {v} has label {l}")),
                VertexClass::Interface if l <= 0 => {
                    return fail(format!("interface vertex {v} has label {l} <= 0"))
                }
                _ => {}
            }
        }
        if self.walks.walks.len() != sm.darts() || self.forests.len() != sm.darts() {
            return fail("one walk and one forest per oriented edge".into());
        }
        let pe = s.planted_edge();
        for e in 0..sm.darts() {
            let w = &self.walks.walks[e];
            if w.start() != self.labeling.ell[sm.vertex(e)] {
                return fail(format!("walk of dart {e} does not start at the label of its origin"));
            }
            if *w != self.walks.walks[sm.alpha(e)].reversed() {
                return fail(format!("walk of dart {e} is not the reversal of its opposite"));
            }
            let pendant = Some(e) == pe || Some(sm.alpha(e)) == pe;
            if w.duration() == 0 && !pendant {
                return fail(format!("walk of dart {e} has duration 0"));
            }
            if s.is_canonical(e) && s.edge_class(e) != EdgeClass::Other {
                let v = w.values();
                if v.iter().any(|&x| x < 0) {
                    return fail(format!("walk of edge {e} goes negative"));
                }
                if !s.is_thin(e) && v[..v.len() - 1].iter().any(|&x| x <= 0) {
                    return fail(format!("walk of non-thin edge {e} touches 0 before its end"));
                }
            }
            if self.forests[e].len() != self.tree_count(e) {
                return fail(format!(
                    "forest of dart {e} has {} trees, expected {}",
                    self.forests[e].len(),
                    self.tree_count(e)
                ));
            }
        }
        match (self.root, s.is_planted()) {
            (None, true) => Ok(()),
            (Some((e, i)), false) if e < sm.darts() && i < self.oriented_edges(e) => Ok(()),
            (Some(_), false) => fail("marked edge out of range".into()),
            _ => fail("a marked edge is needed exactly for plain schemes".into()),
        }
    }
}

/// Reassembles the rooted labeled map of a plain decomposition.
pub fn reconstruct(d: &SchemeDecomposition) -> Result<LabeledMap, SchemeError> {
    if d.scheme.is_planted() {
        return Err(SchemeError::IncompatibleComponents("planted scheme".into()));
    }
    assemble(d)
}

/// Reassembles the rooted labeled map of a planted decomposition.
pub fn reconstruct_planted(d: &SchemeDecomposition) -> Result<LabeledMap, SchemeError> {
    if !d.scheme.is_planted() {
        return Err(SchemeError::IncompatibleComponents("scheme is not planted".into()));
    }
    assemble(d)
}

/// Map under construction: permutations and the label of each dart's
/// origin.
#[derive(Default)]
struct Builder {
    alpha: Vec<Dart>,
    sigma: Vec<Dart>,
    label: Vec<i64>,
}

impl Builder {
    /// Appends the darts of `t` with root label `base`; returns the root
    /// darts in rotation order (empty for a single vertex) and the first
    /// new dart.
    fn add_tree(&mut self, t: &LabeledTree, base: i64) -> (Vec<Dart>, Dart) {
        let first = self.alpha.len();
        let Some((tm, origin)) = t.to_map() else {
            return (Vec::new(), first);
        };
        for i in 0..tm.darts() {
            self.alpha.push(first + tm.alpha(i));
            self.sigma.push(first + tm.sigma(i));
            self.label.push(base + t.labels()[origin[i]]);
        }
        let mut roots = vec![first];
        let mut x = tm.sigma(0);
        while x != 0 {
            roots.push(first + x);
            x = tm.sigma(x);
        }
        (roots, first)
    }
}

fn assemble(d: &SchemeDecomposition) -> Result<LabeledMap, SchemeError> {
    d.validate()?;
    let s = &d.scheme;
    let sm = s.map();
    let nd = sm.darts();
    let walk = |e: Dart| d.walks.walks[e].values();
    let r: Vec<usize> = (0..nd).map(|e| d.walks.duration(e)).collect();
    let mut offset = vec![0; nd + 1];
    for e in 0..nd {
        offset[e + 1] = offset[e] + r[e];
    }
    let chain = |e: Dart, j: usize| offset[e] + j;
    let core = offset[nd];

    // Scheme edges subdivided into chains.
    let mut b = Builder {
        alpha: vec![0; core],
        sigma: vec![usize::MAX; core],
        label: vec![0; core],
    };
    for e in 0..nd {
        for j in 0..r[e] {
            b.alpha[chain(e, j)] = chain(sm.alpha(e), r[e] - 1 - j);
            b.label[chain(e, j)] = walk(e)[j];
            if j > 0 {
                let back = chain(sm.alpha(e), r[e] - j);
                b.sigma[chain(e, j)] = back;
                b.sigma[back] = chain(e, j);
            }
        }
    }
    for ring in sm.vertex_darts() {
        let ring: Vec<Dart> = ring.into_iter().filter(|&e| r[e] > 0).map(|e| chain(e, 0)).collect();
        for (i, &x) in ring.iter().enumerate() {
            b.sigma[x] = ring[(i + 1) % ring.len()];
        }
    }
    let mut sigma_inv = vec![0; core];
    for x in 0..core {
        sigma_inv[b.sigma[x]] = x;
    }

    // Trees to graft in the corner of each chain dart, in rotation order.
    let mut before: Vec<Vec<(Dart, usize)>> = vec![Vec::new(); core];
    let pe = s.planted_edge();
    let pb = pe.map(|e| sm.alpha(e));
    let stolen = s.stolen_from();
    for e in 0..nd {
        if Some(e) == pe || Some(e) == pb {
            continue;
        }
        for j in 0..d.tree_count(e) {
            before[chain(e, d.tree_position(e, j))].push((e, j));
        }
    }
    if let (Some(e), Some(eb), Some(c)) = (pe, pb, stolen) {
        let rr = r[e];
        let c0 = chain(c, 0);
        if rr == 0 {
            before[c0].extend([(e, 0), (eb, 0)]);
        } else {
            for j in 0..rr {
                before[chain(e, j)].push((e, j));
            }
            before[chain(eb, 0)].extend([(e, rr), (eb, 0)]);
            for i in 1..rr {
                before[chain(eb, i)].push((eb, i));
            }
            before[c0].push((eb, rr));
        }
    }

    let mut first_dart: HashMap<(Dart, usize), Dart> = HashMap::new();
    for x in 0..core {
        let mut cur = sigma_inv[x];
        for &(e, j) in &before[x] {
            let (roots, first) = b.add_tree(&d.forests[e][j], d.tree_base(e, j));
            if !roots.is_empty() {
                first_dart.insert((e, j), first);
            }
            for root in roots {
                b.sigma[cur] = root;
                cur = root;
            }
        }
        b.sigma[cur] = x;
    }

    let root = match (d.root, pe, pb, stolen) {
        (Some((e, mut pos)), _, _, _) => {
            let mut found = None;
            for j in 0..d.tree_count(e) {
                let size = 2 * d.forests[e][j].num_edges();
                if pos < size {
                    found = Some(first_dart[&(e, j)] + pos);
                    break;
                }
                pos -= size;
                if pos == 0 {
                    found = Some(chain(e, d.tree_position(e, j)));
                    break;
                }
                pos -= 1;
            }
            found.expect("validated position")
        }
        (None, Some(e), Some(eb), Some(c)) => match first_dart.get(&(eb, 0)) {
            Some(&x) => x,
            None if r[e] > 0 => chain(eb, 0),
            None => chain(c, 0),
        },
        _ => unreachable!("validated root"),
    };

    let label = b.label;
    let m = HalfEdgeMap::new(b.alpha, b.sigma, root)
        .map_err(|e| SchemeError::IncompatibleComponents(format!("assembled map is invalid: {e}")))?;
    let mut labels = vec![0; m.num_vertices()];
    for x in 0..m.darts() {
        labels[m.vertex(x)] = label[x];
    }
    let sfi = s.face_index();
    let mut names = vec![usize::MAX; s.face_names().len()];
    for e in 0..nd {
        if r[e] > 0 {
            names[sfi[e]] = m.face(chain(e, 0));
        }
    }
    LabeledMap::new(m, names, labels).map_err(|e| SchemeError::IncompatibleComponents(e.to_string()))
}

/// Splits a labeled map into scheme, labeling, walks, forests and marked
/// edge.
pub fn decompose(lm: &LabeledMap) -> Result<SchemeDecomposition, SchemeError> {
    split(lm, false)
}

/// Splits a rooted labeled map over a planted scheme, the root becoming
/// the pendant edge `e**`.
///
/// Convention: `e**` points from the vertex `u` where the tree containing
/// the root origin `v*` is attached to the pruned map, toward `v*`; its
/// walk reads the labels along the tree path. The degree of `u` in the
/// scheme counts `e**`, so `u` splits the chain it lies on and becomes null
/// when its label is 0 and it is on `f_0` and another face. Around `v*` the
/// darts before the root go to the last tree of `F_{e**}` and the rest to
/// the first tree of `F_{ē**}`; the tree in the corner following the path
/// at `u` is the last tree of `F_{ē**}`, taken from `F_{e'}`.
pub fn decompose_planted(lm: &LabeledMap) -> Result<SchemeDecomposition, SchemeError> {
    split(lm, true)
}

/// Tree hanging from `roots` (darts out of a common vertex, in rotation
/// order), with labels relative to that vertex, and its contour darts.
fn extract_tree(m: &HalfEdgeMap, labels: &[i64], roots: &[Dart]) -> (LabeledTree, Vec<Dart>) {
    if roots.is_empty() {
        return (LabeledTree::singleton(), Vec::new());
    }
    let base = labels[m.vertex(roots[0])];
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    let mut lab = vec![0];
    let mut queue: Vec<(usize, Vec<Dart>)> = vec![(0, roots.to_vec())];
    while let Some((node, darts)) = queue.pop() {
        for x in darts {
            let child = children.len();
            children.push(Vec::new());
            lab.push(labels[m.head(x)] - base);
            children[node].push(child);
            let back = m.alpha(x);
            let mut below = Vec::new();
            let mut y = m.sigma(back);
            while y != back {
                below.push(y);
                y = m.sigma(y);
            }
            queue.push((child, below));
        }
    }
    let edges = children.len() - 1;
    let mut contour = Vec::with_capacity(2 * edges);
    let mut x = roots[0];
    for _ in 0..2 * edges {
        contour.push(x);
        x = m.phi(x);
    }
    let t = LabeledTree::new(children, lab).expect("pruned parts are labeled trees");
    (t, contour)
}

fn split(lm: &LabeledMap, planted: bool) -> Result<SchemeDecomposition, SchemeError> {
    if lm.num_faces() < 3 {
        return Err(SchemeError::NotLabeledMap("needs at least three faces"));
    }
    if !lm.is_lm() {
        return Err(SchemeError::NotLabeledMap("interface minima are not all 0"));
    }
    let m = &lm.m;
    let lab = &lm.labels;
    let fi = lm.face_index();
    let nd = m.darts();
    let nv = m.num_vertices();
    let around = m.vertex_darts();

    // Prune degree-1 vertices; parent[w] leads from a pruned w inward.
    let mut alive = vec![true; nd];
    let mut deg = m.degrees();
    let mut parent = vec![usize::MAX; nv];
    let mut stack: Vec<usize> = (0..nv).filter(|&v| deg[v] == 1).collect();
    while let Some(w) = stack.pop() {
        if deg[w] != 1 {
            continue;
        }
        let x = *around[w].iter().find(|&&x| alive[x]).unwrap();
        parent[w] = x;
        alive[x] = false;
        alive[m.alpha(x)] = false;
        deg[w] = 0;
        let h = m.head(x);
        deg[h] -= 1;
        if deg[h] == 1 {
            stack.push(h);
        }
    }

    // The pendant path from the core to the root origin.
    let root = m.root();
    let mut core_dart = alive.clone();
    let mut path_up = Vec::new();
    let mut u = m.vertex(root);
    if planted {
        while deg[u] == 0 {
            let x = parent[u];
            path_up.push(x);
            core_dart[x] = true;
            core_dart[m.alpha(x)] = true;
            u = m.head(x);
        }
    }
    let rr = path_up.len();
    // b[j] runs from path vertex j+1 to j; a[j] = alpha(b[j]).
    let b: Vec<Dart> = path_up.iter().rev().copied().collect();
    let a: Vec<Dart> = b.iter().map(|&x| m.alpha(x)).collect();
    let next_core = |mut x: Dart| {
        while !alive[x] {
            x = m.sigma(x);
        }
        x
    };
    let c = match (planted, rr) {
        (false, _) => usize::MAX,
        (true, 0) => next_core(root),
        (true, _) => next_core(m.sigma(a[0])),
    };

    // Rotation restricted to core darts.
    let spp = |x: Dart| {
        let mut y = m.sigma(x);
        while !core_dart[y] {
            y = m.sigma(y);
        }
        y
    };
    let mut dpp = vec![0usize; nv];
    for x in 0..nd {
        if core_dart[x] {
            dpp[m.vertex(x)] += 1;
        }
    }
    let virtual_pendant = planted && rr == 0;
    let sdeg = |v: usize| dpp[v] + (virtual_pendant && v == u) as usize;
    let is_node = |v: usize| dpp[v] > 0 && sdeg(v) != 2;

    // Maximal chains between scheme vertices.
    let mut chains: Vec<Vec<Dart>> = Vec::new();
    for x0 in 0..nd {
        if !core_dart[x0] || !is_node(m.vertex(x0)) {
            continue;
        }
        let mut ch = vec![x0];
        while !is_node(m.head(*ch.last().unwrap())) {
            ch.push(spp(m.alpha(*ch.last().unwrap())));
        }
        chains.push(ch);
    }
    if chains.is_empty() {
        return Err(SchemeError::NotLabeledMap("no vertex of degree 3 after pruning"));
    }

    // Null vertices of degree 2 split chains between f_0 and another face.
    let vlab = |ch: &[Dart], j: usize| {
        if j < ch.len() {
            lab[m.vertex(ch[j])]
        } else {
            lab[m.head(ch[ch.len() - 1])]
        }
    };
    let mut segments: Vec<Vec<Dart>> = Vec::new();
    let mut split_vertices = Vec::new();
    for ch in &chains {
        let len = ch.len();
        let (left, right) = (fi[ch[0]], fi[m.alpha(ch[0])]);
        let mut cut = None;
        if left != right && (left == 0 || right == 0) && vlab(ch, 0) > 0 && vlab(ch, len) > 0 {
            // Position of the last interior zero, read with f_0 on the left.
            let zeros: Vec<usize> = (1..len).filter(|&j| vlab(ch, j) == 0).collect();
            if let (Some(&first), Some(&last)) = (zeros.first(), zeros.last()) {
                cut = Some(if left == 0 { last } else { first });
            }
        }
        match cut {
            Some(t) => {
                split_vertices.push(m.vertex(ch[t]));
                segments.push(ch[..t].to_vec());
                segments.push(ch[t..].to_vec());
            }
            None => segments.push(ch.clone()),
        }
    }
    let mut seg_of_start = HashMap::new();
    for (i, sg) in segments.iter().enumerate() {
        seg_of_start.insert(sg[0], i);
    }
    let nseg = segments.len();
    let (pe, pb) = if virtual_pendant { (nseg, nseg + 1) } else { (usize::MAX, usize::MAX) };
    let ns = nseg + 2 * virtual_pendant as usize;
    let mut alpha_s = vec![0; ns];
    let mut sigma_s = vec![0; ns];
    for (i, sg) in segments.iter().enumerate() {
        alpha_s[i] = seg_of_start[&m.alpha(*sg.last().unwrap())];
        sigma_s[i] = seg_of_start[&spp(sg[0])];
    }
    if virtual_pendant {
        let cs = seg_of_start[&c];
        let ps = (0..nseg).find(|&i| sigma_s[i] == cs).unwrap();
        alpha_s[pe] = pb;
        alpha_s[pb] = pe;
        sigma_s[ps] = pe;
        sigma_s[pe] = cs;
        sigma_s[pb] = pb;
    }
    let sm0 = HalfEdgeMap::new(alpha_s, sigma_s, 0)
        .map_err(|_| SchemeError::NotLabeledMap("core does not form a plane map"))?;

    // Origin data of each scheme dart.
    let seg_origin_label = |i: usize| {
        if i < nseg {
            lab[m.vertex(segments[i][0])]
        } else {
            lab[u]
        }
    };
    let seg_face = |i: usize| if i < nseg { fi[segments[i][0]] } else { fi[c] };
    let mut inc0 = vec![false; nv];
    let mut inc_other = vec![false; nv];
    for x in 0..nd {
        if fi[x] == 0 {
            inc0[m.vertex(x)] = true;
        } else {
            inc_other[m.vertex(x)] = true;
        }
    }
    let mut null = vec![false; sm0.num_vertices()];
    for i in 0..nseg {
        let v = m.vertex(segments[i][0]);
        let is_null = split_vertices.contains(&v)
            || (sdeg(v) >= 3 && lab[v] == 0 && inc0[v] && inc_other[v]);
        null[sm0.vertex(i)] = is_null;
    }
    let mut names = vec![0; lm.num_faces()];
    for i in 0..ns {
        names[seg_face(i)] = sm0.face(i);
    }
    let leaf = if !planted {
        None
    } else if virtual_pendant {
        Some(sm0.vertex(pb))
    } else {
        Some(sm0.vertex(seg_of_start[&b[rr - 1]]))
    };
    let (scheme, perm) = Scheme::with_renaming(&sm0, &names, &null, leaf)?;

    let mut walks = vec![MotzkinWalk::constant(0, 0); ns];
    for i in 0..ns {
        let start = seg_origin_label(i);
        let mut values = vec![start];
        if i < nseg {
            values.extend(segments[i].iter().map(|&x| lab[m.head(x)]));
        }
        walks[perm[i]] = MotzkinWalk::new(values).expect("labels are Lipschitz");
    }

    // Corner contents: darts strictly between the previous core dart and x.
    let corner = |x: Dart| {
        let mut p = m.sigma_inv(x);
        while !core_dart[p] {
            p = m.sigma_inv(p);
        }
        let mut out = Vec::new();
        let mut y = m.sigma(p);
        while y != x {
            out.push(y);
            y = m.sigma(y);
        }
        out
    };
    let split_at_root = |list: Vec<Dart>| {
        let t = list.iter().position(|&x| x == root).unwrap_or(list.len());
        (list[..t].to_vec(), list[t..].to_vec())
    };

    let mut forests: Vec<Vec<LabeledTree>> = vec![Vec::new(); ns];
    let mut contours: Vec<Vec<Vec<Dart>>> = vec![Vec::new(); ns];
    let mut put = |i: usize, roots: &[Dart]| {
        let (t, cont) = extract_tree(m, lab, roots);
        forests[perm[i]].push(t);
        contours[perm[i]].push(cont);
    };
    let stolen_seg = if planted { Some(seg_of_start[&c]) } else { None };
    let pendant_segs = if !planted {
        (usize::MAX, usize::MAX)
    } else if virtual_pendant {
        (pe, pb)
    } else {
        (seg_of_start[&a[0]], seg_of_start[&b[rr - 1]])
    };
    for i in 0..nseg {
        if i == pendant_segs.0 || i == pendant_segs.1 {
            continue;
        }
        let skip = (Some(i) == stolen_seg) as usize;
        for &x in &segments[i][skip..] {
            put(i, &corner(x));
        }
    }
    if planted {
        let (e, eb) = pendant_segs;
        if rr == 0 {
            let (before, after) = split_at_root(corner(c));
            put(e, &before);
            put(eb, &after);
        } else {
            for j in 0..rr {
                put(e, &corner(a[j]));
            }
            let (before, after) = split_at_root(corner(b[rr - 1]));
            put(e, &before);
            put(eb, &after);
            for i in 1..rr {
                put(eb, &corner(b[rr - 1 - i]));
            }
            put(eb, &corner(c));
        }
    }

    let root_mark = if planted {
        None
    } else {
        let mut found = None;
        'search: for i in 0..nseg {
            let mut pos = 0;
            for (j, cont) in contours[perm[i]].iter().enumerate() {
                for &x in cont.iter().chain(std::iter::once(&segments[i][j])) {
                    if x == root {
                        found = Some((perm[i], pos));
                        break 'search;
                    }
                    pos += 1;
                }
            }
        }
        Some(found.expect("every dart lies in some forest"))
    };

    let mut ell_v = vec![0; scheme.map().num_vertices()];
    for x in 0..ns {
        ell_v[scheme.map().vertex(x)] = walks[x].start();
    }
    let d = SchemeDecomposition {
        scheme,
        labeling: AdmissibleLabeling { ell: ell_v },
        walks: WalkNetwork { walks },
        forests,
        root: root_mark,
    };
    Ok(d)
}

/// Random walk of duration `r` from `a` to `b` obeying `ok`, by rejection.
fn random_walk<R: Rng + ?Sized>(a: i64, b: i64, r: usize, ok: impl Fn(&[i64]) -> bool, rng: &mut R) -> Option<MotzkinWalk> {
    if (a - b).unsigned_abs() as usize > r {
        return None;
    }
    for _ in 0..200 {
        let mut v = vec![a];
        for t in 0..r {
            let cur = v[t];
            // Stay within reach of b.
            let left = (r - t - 1) as i64;
            let steps: Vec<i64> = (-1..=1).filter(|s| (cur + s - b).abs() <= left).collect();
            v.push(cur + steps[rng.gen_range(0..steps.len())]);
        }
        if ok(&v) {
            return MotzkinWalk::new(v).ok();
        }
    }
    None
}

/// A random valid decomposition over `s`: labels in a small window, edge
/// lengths up to `max_len` and trees of up to `max_tree` edges. Walks are
/// drawn by rejection and the labeling is redrawn until all edges succeed,
/// so the law is not uniform.
pub fn random_decomposition<R: Rng + ?Sized>(
    s: &Scheme,
    max_len: usize,
    max_tree: usize,
    rng: &mut R,
) -> SchemeDecomposition {
    let m = s.map();
    let classes = s.vertex_classes();
    let pe = s.planted_edge();
    'retry: loop {
        let ell: Vec<i64> = classes
            .iter()
            .map(|c| match c {
                VertexClass::Null => 0,
                VertexClass::Interface => rng.gen_range(1..=2),
                VertexClass::Other => rng.gen_range(-1..=2),
            })
            .collect();
        let mut walks = vec![MotzkinWalk::constant(0, 0); m.darts()];
        for c in s.canonical_darts() {
            let (a, b) = (ell[m.vertex(c)], ell[m.head(c)]);
            let min = if Some(c) == pe { 0 } else { 1 };
            let r = rng.gen_range(min..=max_len.max(min));
            let w = match (s.edge_class(c), s.is_thin(c)) {
                (EdgeClass::Other, _) => random_walk(a, b, r, |_| true, rng),
                (_, true) => random_walk(a, b, r, |v| v.iter().all(|&x| x >= 0), rng),
                (_, false) => random_walk(a, b, r, |v| v[..r].iter().all(|&x| x > 0), rng),
            };
            let Some(w) = w else { continue 'retry };
            walks[m.alpha(c)] = w.reversed();
            walks[c] = w;
        }
        let mut d = SchemeDecomposition {
            scheme: s.clone(),
            labeling: AdmissibleLabeling { ell },
            walks: WalkNetwork { walks },
            forests: vec![Vec::new(); m.darts()],
            root: None,
        };
        for e in 0..m.darts() {
            d.forests[e] = (0..d.tree_count(e))
                .map(|_| sample_labeled_tree(rng.gen_range(0..=max_tree), rng))
                .collect();
        }
        if !s.is_planted() {
            let e = rng.gen_range(0..m.darts());
            d.root = Some((e, rng.gen_range(0..d.oriented_edges(e))));
        }
        return d;
    }
}
