use serde::{Deserialize, Serialize};

use super::Scheme;

/// Flat description of a scheme for census files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeJson {
    pub darts: usize,
    pub alpha: Vec<usize>,
    pub sigma: Vec<usize>,
    pub face_names: Vec<usize>,
    pub null_vertices: Vec<usize>,
    pub planted_vertex: Option<usize>,
    pub canonical_darts: Vec<usize>,
    pub thin_darts: Vec<usize>,
    pub vertex_partition: [usize; 3],
    pub edge_partition: [usize; 3],
    pub dominant: bool,
}

impl From<&Scheme> for SchemeJson {
    fn from(s: &Scheme) -> Self {
        let m = s.map();
        let canonical = s.canonical_darts();
        SchemeJson {
            darts: m.darts(),
            alpha: m.alpha_perm().to_vec(),
            sigma: m.sigma_perm().to_vec(),
            face_names: s.face_names().to_vec(),
            null_vertices: (0..m.num_vertices()).filter(|&v| s.null_vertices()[v]).collect(),
            planted_vertex: s.planted_vertex(),
            thin_darts: canonical.iter().copied().filter(|&d| s.is_thin(d)).collect(),
            canonical_darts: canonical,
            vertex_partition: s.vertex_partition(),
            edge_partition: s.edge_partition(),
            dominant: s.is_dominant(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Census {
    k: usize,
    dominant_only: bool,
    planted: bool,
    count: usize,
    schemes: Vec<SchemeJson>,
}

/// Pretty JSON census of `schemes`, with a trailing newline.
pub fn census_json(k: usize, dominant_only: bool, planted: bool, schemes: &[Scheme]) -> String {
    let census = Census {
        k,
        dominant_only,
        planted,
        count: schemes.len(),
        schemes: schemes.iter().map(SchemeJson::from).collect(),
    };
    let mut s = serde_json::to_string_pretty(&census).expect("census serializes");
    s.push('\n');
    s
}
