//! Named test bodies.
//!
//! The gallery is the only way to construct implicit bodies from files or
//! the CLI (no arbitrary code in inputs): an implicit body serializes as its
//! gallery name plus numeric parameters.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

use super::{Body, Ellipsoid, ImplicitBody, Polytope};

/// Numeric parameters for gallery bodies (deterministic ordering for
/// serialization).
pub type GalleryParams = BTreeMap<String, f64>;

/// Names and one-line descriptions of the gallery bodies.
pub fn gallery_list() -> Vec<(&'static str, &'static str)> {
    vec![
        ("ball", "unit ball in ℝⁿ (params: n, r)"),
        ("ellipsoid", "axis-aligned ellipsoid x·diag(a)x ≤ 1 (params: n, a1..an)"),
        ("cube", "cube [−1,1]ⁿ with facet and edge structure (params: n)"),
        ("lens", "intersection of two unit balls centered ±d·e₃ (params: d)"),
        ("double_disk", "convex hull of two orthogonal unit disks: (|x|+|y|)² + z² ≤ 1"),
        ("spherocylinder", "hull of two unit balls centered ±d·e₃; a body of revolution (params: d)"),
        ("perturbed_ball", "‖x‖² + ε·x₁³/(1+‖x‖²) ≤ 1; breaks central and x₁-reflection symmetry (params: eps)"),
    ]
}

fn get(params: &GalleryParams, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

fn check_known(params: &GalleryParams, known: &[&str]) -> Result<()> {
    for k in params.keys() {
        if !known.contains(&k.as_str()) {
            return Err(Error::bad_param("params", format!("unknown parameter `{k}`")));
        }
    }
    Ok(())
}

/// Builds a named body. Unknown names and out-of-range parameters are
/// rejected.
pub fn gallery(name: &str, params: &GalleryParams) -> Result<Body> {
    match name {
        "ball" => {
            check_known(params, &["n", "r"])?;
            let n = get(params, "n", 3.0) as usize;
            let r = get(params, "r", 1.0);
            if n < 2 || r <= 0.0 {
                return Err(Error::bad_param("ball", "need n ≥ 2 and r > 0"));
            }
            let q = DMatrix::identity(n, n) / (r * r);
            Ok(Body::ellipsoid(Ellipsoid::new(DVector::zeros(n), q)?))
        }
        "ellipsoid" => {
            check_known(
                params,
                &["n", "a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8"],
            )?;
            let n = get(params, "n", 3.0) as usize;
            if !(2..=8).contains(&n) {
                return Err(Error::bad_param("ellipsoid", "need 2 ≤ n ≤ 8"));
            }
            let mut diag = DVector::zeros(n);
            for i in 0..n {
                let a = get(params, &format!("a{}", i + 1), (i + 1) as f64);
                if a <= 0.0 {
                    return Err(Error::bad_param("ellipsoid", "diagonal entries must be positive"));
                }
                diag[i] = a;
            }
            let q = DMatrix::from_diagonal(&diag);
            Ok(Body::ellipsoid(Ellipsoid::new(DVector::zeros(n), q)?))
        }
        "cube" => {
            check_known(params, &["n"])?;
            let n = get(params, "n", 3.0) as usize;
            if !(2..=10).contains(&n) {
                return Err(Error::bad_param("cube", "need 2 ≤ n ≤ 10"));
            }
            Ok(Body::polytope(cube_polytope(n)?))
        }
        "lens" => {
            check_known(params, &["d"])?;
            let d = get(params, "d", 0.5);
            if !(0.0..1.0).contains(&d) || d == 0.0 {
                return Err(Error::bad_param("d", "need 0 < d < 1 for a full-dimensional lens"));
            }
            let c1 = DVector::from_vec(vec![0.0, 0.0, d]);
            let c2 = DVector::from_vec(vec![0.0, 0.0, -d]);
            let (g1, g2) = (c1.clone(), c2.clone());
            let gauge = Arc::new(move |x: &DVector<f64>| (x - &g1).norm().max((x - &g2).norm()));
            let body = ImplicitBody::new(gauge, 1.0, DVector::zeros(3))?
                .with_exact_support(Arc::new(move |u: &DVector<f64>| lens_support(&c1, &c2, d, u)))
                .with_tag("lens", params_of(&[("d", d)]));
            body.check_invariants(64, 0xa11ce)?;
            Ok(Body::implicit(body))
        }
        "double_disk" => {
            check_known(params, &[])?;
            let gauge = Arc::new(|x: &DVector<f64>| {
                let s = x[0].abs() + x[1].abs();
                s * s + x[2] * x[2]
            });
            let support = Arc::new(|u: &DVector<f64>| {
                let m = u[0].abs().max(u[1].abs());
                (m * m + u[2] * u[2]).sqrt()
            });
            let body = ImplicitBody::new(gauge, 1.0, DVector::zeros(3))?
                .with_exact_support(support)
                .with_tag("double_disk", GalleryParams::new());
            body.check_invariants(64, 0xdd15c)?;
            Ok(Body::implicit(body))
        }
        "spherocylinder" => {
            check_known(params, &["d"])?;
            let d = get(params, "d", 1.0);
            if d <= 0.0 {
                return Err(Error::bad_param("d", "need d > 0"));
            }
            // gauge = distance to the axis segment [−d·e₃, d·e₃]
            let gauge = Arc::new(move |x: &DVector<f64>| {
                let z = x[2].clamp(-d, d);
                let dx = DVector::from_vec(vec![x[0], x[1], x[2] - z]);
                dx.norm()
            });
            let support = Arc::new(move |u: &DVector<f64>| d * u[2].abs() + u.norm());
            let body = ImplicitBody::new(gauge, 1.0 + d, DVector::zeros(3))?
                .with_exact_support(support)
                .with_tag("spherocylinder", params_of(&[("d", d)]));
            body.check_invariants(64, 0x5c1d)?;
            Ok(Body::implicit(body))
        }
        "perturbed_ball" => {
            check_known(params, &["eps"])?;
            let eps = get(params, "eps", 0.05);
            if eps.abs() > 0.1 {
                return Err(Error::bad_param("eps", "|eps| ≤ 0.1 keeps the gauge convex"));
            }
            let gauge = Arc::new(move |x: &DVector<f64>| {
                let r2 = x.norm_squared();
                r2 + eps * x[0].powi(3) / (1.0 + r2)
            });
            let body = ImplicitBody::new(gauge, 1.1, DVector::zeros(3))?
                .with_tag("perturbed_ball", params_of(&[("eps", eps)]));
            body.check_invariants(64, 0x9e27)?;
            Ok(Body::implicit(body))
        }
        other => Err(Error::UnknownGallery(other.to_string())),
    }
}

fn params_of(kv: &[(&str, f64)]) -> GalleryParams {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// `[−1,1]ⁿ` with exact facet and edge structure.
fn cube_polytope(n: usize) -> Result<Polytope> {
    let count = 1usize << n;
    let mut verts = Vec::with_capacity(count);
    for mask in 0..count {
        let v = DVector::from_fn(n, |i, _| if mask >> i & 1 == 1 { 1.0 } else { -1.0 });
        verts.push(v);
    }
    if n == 2 {
        return Polytope::new(verts);
    }
    let mut facets = Vec::with_capacity(2 * n);
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut nrm = DVector::zeros(n);
            nrm[i] = s;
            facets.push((nrm, 1.0));
        }
    }
    // Edges join vertices differing in exactly one coordinate.
    let mut edges = Vec::new();
    for a in 0..count {
        for i in 0..n {
            let b = a ^ (1 << i);
            if a < b {
                edges.push((a, b));
            }
        }
    }
    Polytope::with_structure(verts, facets, edges)
}

/// Exact support of the two-ball intersection: the supporting point sits on
/// whichever spherical cap owns the direction, else on the rim circle.
fn lens_support(c1: &DVector<f64>, c2: &DVector<f64>, d: f64, u: &DVector<f64>) -> f64 {
    let norm = u.norm();
    let un = u / norm;
    // Candidate on sphere 1: point c1 + û, valid while inside ball 2.
    let p1 = c1 + &un;
    if (&p1 - c2).norm() <= 1.0 + 1e-12 {
        return norm * (c1.dot(&un) + 1.0);
    }
    let p2 = c2 + &un;
    if (&p2 - c1).norm() <= 1.0 + 1e-12 {
        return norm * (c2.dot(&un) + 1.0);
    }
    // Rim: {z = 0, x² + y² = 1 − d²}.
    let rim = (1.0 - d * d).max(0.0).sqrt();
    let planar = (un[0] * un[0] + un[1] * un[1]).sqrt();
    norm * rim * planar
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unknown_name_is_rejected() {
        assert!(matches!(
            gallery("torus", &GalleryParams::new()),
            Err(Error::UnknownGallery(_))
        ));
    }

    #[test]
    fn perturbed_ball_eps_bound() {
        let params = params_of(&[("eps", 0.3)]);
        assert!(gallery("perturbed_ball", &params).is_err());
    }

    #[test]
    fn double_disk_boundary_point() {
        // (0.5, 0.5, 0) lies exactly on the boundary: (|x|+|y|)² + z² = 1.
        let dd = gallery("double_disk", &GalleryParams::new()).unwrap();
        let x = DVector::from_vec(vec![0.5, 0.5, 0.0]);
        let g = dd.as_implicit().unwrap().gauge(&x);
        assert_relative_eq!(g, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn cube_vertices_are_sign_patterns() {
        let cube = gallery("cube", &GalleryParams::new()).unwrap();
        let p = cube.as_polytope().unwrap();
        assert_eq!(p.vertices().len(), 8);
        for v in p.vertices() {
            for i in 0..3 {
                assert_relative_eq!(v[i].abs(), 1.0, epsilon = 0.0);
            }
        }
        assert_eq!(p.edges().unwrap().len(), 12);
        assert_eq!(p.facets().unwrap().len(), 6);
    }

    #[test]
    fn spherocylinder_support_along_axis() {
        let params = params_of(&[("d", 1.0)]);
        let sc = gallery("spherocylinder", &params).unwrap();
        let e3 = DVector::from_vec(vec![0.0, 0.0, 1.0]);
        assert_relative_eq!(sc.support(&e3), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn lens_support_matches_numeric_hill_climb() {
        let lens = gallery("lens", &GalleryParams::new()).unwrap();
        let b = lens.as_implicit().unwrap();
        for u in crate::geom::sample_unit_directions(3, 24, 3) {
            let exact = b.support(&u);
            let (numeric, _) = b.support_witness_numeric(&u, 256, 48);
            assert!(
                (exact - numeric).abs() < 5e-6,
                "lens support mismatch in {u:?}: {exact} vs {numeric}"
            );
        }
    }

    #[test]
    fn perturbed_ball_is_asymmetric_in_x1() {
        let pb = gallery("perturbed_ball", &params_of(&[("eps", 0.05)])).unwrap();
        let e1 = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let plus = pb.radial(&DVector::zeros(3), &e1).unwrap();
        let minus = pb.radial(&DVector::zeros(3), &(-e1)).unwrap();
        assert!((plus - minus).abs() > 1e-3);
    }
}
