use num_bigint::BigUint;
use num_traits::Zero;

use super::{EdgeClass, Scheme, SchemeError, VertexClass};
use crate::encodings::MotzkinTable;

/// Largest `n` accepted by [`count_labeled_maps_exact`].
pub const COUNT_BOUND: usize = 24;

fn binomial(n: usize, k: usize) -> BigUint {
    let mut out = BigUint::from(1u32);
    for i in 0..k {
        out = out * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    out
}

/// Number of rooted labeled maps with `n` edges inducing the plain scheme
/// `s`:
///
/// `2 Σ_ℓ Σ_(r_e) 3^(n-r) r C(2n, n-r) Π_e W^(e)(ℓ_{e-}, ℓ_{e+}; r_e)`
///
/// over admissible labelings and edge lengths `r_e >= 1` with
/// `r = Σ r_e <= n`. Every vertex is joined to a null vertex by a path of
/// total length at most `r`, so `|ℓ_v| <= n`; labels are enumerated vertex
/// by vertex, pruned by `|ℓ_u - ℓ_v| <= r_e` along edges.
pub fn count_labeled_maps_exact(s: &Scheme, n: usize) -> Result<BigUint, SchemeError> {
    if n > COUNT_BOUND {
        return Err(SchemeError::TooLarge {
            what: "n",
            value: n,
            bound: COUNT_BOUND,
        });
    }
    if s.is_planted() {
        return Err(SchemeError::NotAScheme("the count is for plain schemes"));
    }
    let m = s.map();
    let edges = s.canonical_darts();
    if edges.len() > n {
        return Ok(BigUint::zero());
    }
    let classes = s.vertex_classes();
    let nv = m.num_vertices();
    let ni = n as i64;
    let range: Vec<Vec<i64>> = classes
        .iter()
        .map(|c| match c {
            VertexClass::Null => vec![0],
            VertexClass::Interface => (1..=ni).collect(),
            VertexClass::Other => (-ni..=ni).collect(),
        })
        .collect();
    // Vertex order by discovery; each edge is checked once both ends are set.
    let mut order = Vec::with_capacity(nv);
    let mut placed = vec![usize::MAX; nv];
    for d in 0..m.darts() {
        for v in [m.vertex(d), m.head(d)] {
            if placed[v] == usize::MAX {
                placed[v] = order.len();
                order.push(v);
            }
        }
    }
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (i, &d) in edges.iter().enumerate() {
        let last = placed[m.vertex(d)].max(placed[m.head(d)]);
        closing[last].push(i);
    }
    let kinds: Vec<u8> = edges
        .iter()
        .map(|&d| match (s.edge_class(d), s.is_thin(d)) {
            (EdgeClass::Other, _) => 0,
            (EdgeClass::Interface, _) | (EdgeClass::Null, false) => 1,
            (EdgeClass::Null, true) => 2,
        })
        .collect();

    let mut table = MotzkinTable::default();
    let mut total = BigUint::zero();
    let mut lengths = vec![1usize; edges.len()];
    loop {
        let r: usize = lengths.iter().sum();
        if r <= n {
            let ctx = Ctx {
                s,
                edges: &edges,
                kinds: &kinds,
                lengths: &lengths,
                order: &order,
                closing: &closing,
                range: &range,
            };
            let mut ell = vec![0i64; nv];
            let walks = ctx.labelings(0, &mut ell, &mut table);
            if walks > 0 {
                let three = BigUint::from(3u32).pow((n - r) as u32);
                total += BigUint::from(walks) * three * BigUint::from(r) * binomial(2 * n, n - r);
            }
        }
        // Next composition in odometer order, skipping sums above n.
        let mut i = 0;
        loop {
            if i == lengths.len() {
                return Ok(total * 2u32);
            }
            lengths[i] += 1;
            if lengths.iter().sum::<usize>() <= n {
                break;
            }
            lengths[i] = 1;
            i += 1;
        }
    }
}

struct Ctx<'a> {
    s: &'a Scheme,
    edges: &'a [usize],
    kinds: &'a [u8],
    lengths: &'a [usize],
    order: &'a [usize],
    closing: &'a [Vec<usize>],
    range: &'a [Vec<i64>],
}

impl Ctx<'_> {
    /// Σ over labels of `order[i..]` of the product of walk counts of the
    /// edges closed there.
    fn labelings(&self, i: usize, ell: &mut [i64], table: &mut MotzkinTable) -> u128 {
        if i == self.order.len() {
            return 1;
        }
        let m = self.s.map();
        let v = self.order[i];
        let mut sum = 0u128;
        'labels: for &l in &self.range[v] {
            ell[v] = l;
            let mut prod = 1u128;
            for &e in &self.closing[i] {
                let d = self.edges[e];
                let (a, b) = (ell[m.vertex(d)], ell[m.head(d)]);
                let r = self.lengths[e];
                if (a - b).unsigned_abs() as usize > r {
                    continue 'labels;
                }
                let w = match self.kinds[e] {
                    0 => table.plain(a, b, r),
                    1 => table.positive(a, b, r),
                    _ => table.positive(a + 1, b, r + 1),
                };
                if w == 0 {
                    continue 'labels;
                }
                prod *= w;
            }
            sum += prod * self.labelings(i + 1, ell, table);
        }
        sum
    }
}
