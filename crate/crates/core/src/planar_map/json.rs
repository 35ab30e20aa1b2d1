use serde::{Deserialize, Serialize};

use super::{HalfEdgeMap, MapError};

/// Wire format `{"darts":N,"alpha":[..],"sigma":[..],"root":0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub darts: usize,
    pub alpha: Vec<usize>,
    pub sigma: Vec<usize>,
    pub root: usize,
}

impl From<&HalfEdgeMap> for MapJson {
    fn from(m: &HalfEdgeMap) -> Self {
        Self {
            darts: m.darts(),
            alpha: m.alpha_perm().to_vec(),
            sigma: m.sigma_perm().to_vec(),
            root: m.root(),
        }
    }
}

impl TryFrom<MapJson> for HalfEdgeMap {
    type Error = MapError;
    fn try_from(j: MapJson) -> Result<Self, MapError> {
        if j.alpha.len() != j.darts {
            return Err(MapError::LengthMismatch {
                alpha: j.alpha.len(),
                sigma: j.darts,
            });
        }
        HalfEdgeMap::new(j.alpha, j.sigma, j.root)
    }
}

impl HalfEdgeMap {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&MapJson::from(self)).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, JsonMapError> {
        let j: MapJson = serde_json::from_str(s)?;
        Ok(HalfEdgeMap::try_from(j)?)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum JsonMapError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Map(#[from] MapError),
}
