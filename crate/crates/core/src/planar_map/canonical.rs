use super::{Dart, HalfEdgeMap};

/// BFS labeling of darts, the key to map equality up to renaming.
///
/// Equal codes mean the rooted maps are isomorphic by a root-preserving,
/// orientation-preserving bijection of darts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(pub Vec<u32>);

/// Darts in discovery order from `root` (pushing `sigma(d)` then `alpha(d)`),
/// and the inverse table `dart -> position`.
pub fn canonical_dart_order(map: &HalfEdgeMap, root: Dart) -> (Vec<Dart>, Vec<usize>) {
    let n = map.darts();
    let mut label = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    label[root] = 0;
    order.push(root);
    let mut i = 0;
    while i < order.len() {
        let d = order[i];
        for x in [map.sigma(d), map.alpha(d)] {
            if label[x] == usize::MAX {
                label[x] = order.len();
                order.push(x);
            }
        }
        i += 1;
    }
    (order, label)
}

impl CanonicalCode {
    /// Code of `map` rooted at `root`.
    pub fn rooted(map: &HalfEdgeMap, root: Dart) -> Self {
        Self::rooted_with(map, root, |_, _| Vec::new())
    }

    /// Code with decorations appended; `extra` sees the discovery order and
    /// the `dart -> position` table, and must only use dart-intrinsic data.
    pub fn rooted_with(
        map: &HalfEdgeMap,
        root: Dart,
        extra: impl Fn(&[Dart], &[usize]) -> Vec<u32>,
    ) -> Self {
        let (order, label) = canonical_dart_order(map, root);
        let mut code = Vec::with_capacity(2 * order.len() + 1);
        code.push(order.len() as u32);
        for &d in &order {
            code.push(label[map.sigma(d)] as u32);
            code.push(label[map.alpha(d)] as u32);
        }
        code.extend(extra(&order, &label));
        Self(code)
    }

    /// Minimum decorated code over all roots, with the root attaining it
    /// (the smallest such dart).
    pub fn unrooted_with(
        map: &HalfEdgeMap,
        extra: impl Fn(&[Dart], &[usize]) -> Vec<u32>,
    ) -> (Self, Dart) {
        let mut best: Option<(Self, Dart)> = None;
        for root in 0..map.darts() {
            let code = Self::rooted_with(map, root, &extra);
            if best.as_ref().map_or(true, |(b, _)| code < *b) {
                best = Some((code, root));
            }
        }
        best.expect("maps have at least one dart")
    }

    /// Number of roots giving the same decorated code as `root`; this is the
    /// size of the decoration-preserving automorphism group.
    pub fn automorphism_count(
        map: &HalfEdgeMap,
        extra: impl Fn(&[Dart], &[usize]) -> Vec<u32>,
    ) -> usize {
        let base = Self::rooted_with(map, map.root(), &extra);
        (0..map.darts())
            .filter(|&r| Self::rooted_with(map, r, &extra) == base)
            .count()
    }
}
