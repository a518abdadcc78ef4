//! Body JSON serialization: `{kind, n, payload}`.
//!
//! Ellipsoids store `Q` row-major plus the center, polytopes store their
//! vertex list (plus facet/edge structure when known), and implicit bodies
//! are stored as gallery name + parameters — files never carry code.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

use super::{gallery, Body, BodyKind, Ellipsoid, GalleryParams, Polytope};

#[derive(Serialize, Deserialize)]
struct BodyJson {
    kind: String,
    n: usize,
    payload: Payload,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Payload {
    Ellipsoid {
        q: Vec<f64>,
        c: Vec<f64>,
    },
    Polytope {
        vertices: Vec<Vec<f64>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        facets: Option<Vec<(Vec<f64>, f64)>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        edges: Option<Vec<(usize, usize)>>,
    },
    Implicit {
        gallery: String,
        params: GalleryParams,
    },
}

pub fn body_to_json(body: &Body) -> Result<serde_json::Value> {
    let n = body.dim();
    let json = match body.kind() {
        BodyKind::Ellipsoid(e) => BodyJson {
            kind: "ellipsoid".into(),
            n,
            payload: Payload::Ellipsoid {
                q: e.shape().transpose().as_slice().to_vec(), // row-major
                c: e.center().as_slice().to_vec(),
            },
        },
        BodyKind::Polytope(p) => BodyJson {
            kind: "polytope".into(),
            n,
            payload: Payload::Polytope {
                vertices: p.vertices().iter().map(|v| v.as_slice().to_vec()).collect(),
                facets: p
                    .facets()
                    .map(|f| f.iter().map(|(nrm, t)| (nrm.as_slice().to_vec(), *t)).collect()),
                edges: p.edges().map(|e| e.to_vec()),
            },
        },
        BodyKind::Implicit(b) => {
            let (name, params) = b.tag().ok_or_else(|| {
                Error::Numerical("implicit body without gallery provenance is not serializable".into())
            })?;
            BodyJson {
                kind: "implicit".into(),
                n,
                payload: Payload::Implicit {
                    gallery: name.to_string(),
                    params: params.clone(),
                },
            }
        }
    };
    Ok(serde_json::to_value(json)?)
}

pub fn body_from_json(value: &serde_json::Value) -> Result<Body> {
    let json: BodyJson = serde_json::from_value(value.clone())?;
    let n = json.n;
    match (json.kind.as_str(), json.payload) {
        ("ellipsoid", Payload::Ellipsoid { q, c }) => {
            if q.len() != n * n || c.len() != n {
                return Err(Error::bad_param("payload", "ellipsoid payload has wrong sizes"));
            }
            let shape = DMatrix::from_row_slice(n, n, &q);
            Ok(Body::ellipsoid(Ellipsoid::new(DVector::from_vec(c), shape)?))
        }
        ("polytope", Payload::Polytope {
            vertices,
            facets,
            edges,
        }) => {
            let verts: Vec<DVector<f64>> = vertices.into_iter().map(DVector::from_vec).collect();
            if verts.iter().any(|v| v.len() != n) {
                return Err(Error::bad_param("payload", "vertex dimension mismatch"));
            }
            let body = match (facets, edges) {
                (Some(f), Some(e)) if n != 2 => {
                    let facets = f
                        .into_iter()
                        .map(|(nrm, t)| (DVector::from_vec(nrm), t))
                        .collect();
                    Polytope::with_structure(verts, facets, e)?
                }
                _ => Polytope::new(verts)?,
            };
            Ok(Body::polytope(body))
        }
        ("implicit", Payload::Implicit { gallery: g, params }) => gallery(&g, &params),
        (k, _) => Err(Error::bad_param("kind", format!("unknown or mismatched body kind `{k}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::GalleryParams;
    use approx::assert_relative_eq;

    #[test]
    fn ellipsoid_roundtrip() {
        let q = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let e = Body::ellipsoid(Ellipsoid::new(DVector::from_vec(vec![0.1, -0.2]), q).unwrap());
        let v = body_to_json(&e).unwrap();
        let back = body_from_json(&v).unwrap();
        for u in crate::geom::sample_unit_directions(2, 8, 1) {
            assert_relative_eq!(e.support(&u), back.support(&u), epsilon = 1e-12);
        }
    }

    #[test]
    fn gallery_implicit_roundtrip() {
        let dd = gallery("double_disk", &GalleryParams::new()).unwrap();
        let v = body_to_json(&dd).unwrap();
        assert_eq!(v["kind"], "implicit");
        let back = body_from_json(&v).unwrap();
        let x = DVector::from_vec(vec![0.3, 0.3, 0.2]);
        assert_relative_eq!(
            dd.as_implicit().unwrap().gauge(&x),
            back.as_implicit().unwrap().gauge(&x),
            epsilon = 1e-15
        );
    }

    #[test]
    fn cube_roundtrip_keeps_structure() {
        let cube = gallery("cube", &GalleryParams::new()).unwrap();
        let v = body_to_json(&cube).unwrap();
        let back = body_from_json(&v).unwrap();
        assert_eq!(back.as_polytope().unwrap().edges().unwrap().len(), 12);
    }
}
