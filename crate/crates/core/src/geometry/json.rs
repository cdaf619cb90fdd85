//! Geometry JSON: `{"dim": d, "vrep": [[...], ...]}` and/or
//! `{"hrep": [{"a": [...], "b": r}, ...]}`.

use serde::{Deserialize, Serialize};

use super::{convex_hull, halfspace_intersection, Halfspace, Polytope, Vector};
use crate::error::{GeomError, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HalfspaceJson {
    pub a: Vec<f64>,
    pub b: f64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GeometryJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vrep: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hrep: Option<Vec<HalfspaceJson>>,
}

fn field_err(msg: String) -> GeomError {
    GeomError::InvalidInput(msg)
}

impl GeometryJson {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| field_err(format!("geometry JSON: {e}")))
    }

    /// Builds the polytope, taking the hull of `vrep` when present.
    pub fn to_polytope(&self) -> Result<Polytope> {
        let dim = self
            .dim
            .or_else(|| self.vrep.as_ref().and_then(|v| v.first()).map(|p| p.len()))
            .or_else(|| self.hrep.as_ref().and_then(|h| h.first()).map(|h| h.a.len()))
            .ok_or_else(|| field_err("`dim`: cannot infer dimension (no `vrep` or `hrep`)".into()))?;
        if dim == 0 {
            return Err(field_err("`dim` must be at least 1".into()));
        }
        let from_v = match &self.vrep {
            Some(v) => {
                if v.is_empty() {
                    return Err(field_err("`vrep` is empty".into()));
                }
                let mut pts = Vec::with_capacity(v.len());
                for (i, p) in v.iter().enumerate() {
                    if p.len() != dim {
                        return Err(field_err(format!("`vrep[{i}]` has {} coordinates, expected {dim}", p.len())));
                    }
                    if !p.iter().all(|x| x.is_finite()) {
                        return Err(field_err(format!("`vrep[{i}]` is not finite")));
                    }
                    pts.push(Vector::from_column_slice(p));
                }
                Some(convex_hull(&pts)?)
            }
            None => None,
        };
        let from_h = match &self.hrep {
            Some(h) => {
                let mut hs = Vec::with_capacity(h.len());
                for (i, x) in h.iter().enumerate() {
                    if x.a.len() != dim {
                        return Err(field_err(format!("`hrep[{i}].a` has {} coordinates, expected {dim}", x.a.len())));
                    }
                    hs.push(
                        Halfspace::new(Vector::from_column_slice(&x.a), x.b)
                            .map_err(|e| field_err(format!("`hrep[{i}]`: {e}")))?,
                    );
                }
                Some(halfspace_intersection(&hs, dim)?)
            }
            None => None,
        };
        match (from_v, from_h) {
            (Some(v), Some(h)) => {
                let tol = 1e-9 * (1.0 + v.euclidean_diameter());
                if !v.approx_eq(&h, tol) {
                    return Err(field_err("`vrep` and `hrep` describe different sets".into()));
                }
                Ok(v)
            }
            (Some(v), None) => Ok(v),
            (None, Some(h)) => Ok(h),
            (None, None) => Err(field_err("geometry needs `vrep` or `hrep`".into())),
        }
    }

    pub fn from_polytope(p: &Polytope) -> Self {
        Self {
            dim: Some(p.dim()),
            vrep: Some(p.vertices().iter().map(|v| v.iter().copied().collect()).collect()),
            hrep: p.hrep().map(|hs| {
                hs.iter()
                    .map(|h| HalfspaceJson {
                        a: h.a.iter().copied().collect(),
                        b: h.b,
                    })
                    .collect()
            }),
        }
    }
}

pub fn polytope_from_json(text: &str) -> Result<Polytope> {
    GeometryJson::parse(text)?.to_polytope()
}

pub fn polytope_to_json(p: &Polytope) -> serde_json::Value {
    serde_json::to_value(GeometryJson::from_polytope(p)).expect("geometry serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vrep_and_hrep_agree() {
        let text = r#"{"dim":2,"vrep":[[0,0],[1,0],[1,1],[0,1],[0.5,0.5]],
            "hrep":[{"a":[1,0],"b":1},{"a":[-1,0],"b":0},{"a":[0,1],"b":1},{"a":[0,-1],"b":0}]}"#;
        let p = polytope_from_json(text).unwrap();
        assert_eq!(p.vertices().len(), 4);
    }

    #[test]
    fn errors_name_the_field() {
        let e = polytope_from_json(r#"{"dim":2,"vrep":[[0,0],[1]]}"#).unwrap_err();
        assert!(e.to_string().contains("vrep[1]"), "{e}");
        let e = polytope_from_json(r#"{"hrep":[{"a":[1,0]}]}"#).unwrap_err();
        assert!(e.to_string().contains("`b`"), "{e}");
        let e = polytope_from_json(r#"{"dim":2,"vert":[]}"#).unwrap_err();
        assert!(e.to_string().contains("vert"), "{e}");
    }

    #[test]
    fn writes_both_representations() {
        let p = Polytope::cuboid(&[0.0, 0.0], &[1.0, 2.0]).unwrap();
        let v = polytope_to_json(&p);
        assert_eq!(v["vrep"].as_array().unwrap().len(), 4);
        assert_eq!(v["hrep"].as_array().unwrap().len(), 4);
        let back = polytope_from_json(&v.to_string()).unwrap();
        assert!(back.approx_eq(&p, 1e-12));
    }
}
