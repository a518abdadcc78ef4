//! Convex-body representations with membership, support, radial and centroid
//! oracles.
//!
//! Three representations coexist because they fail in different places:
//! exact ellipsoids support closed-form section algebra, vertex polytopes
//! support exact polygon sections, and implicit gauge bodies realize the
//! non-smooth counterexamples (`double_disk`, `lens`) that break naive
//! detectors. Every body is immutable after construction and all oracles are
//! pure functions.

mod gallery;
mod io;

pub use gallery::{gallery, gallery_list, GalleryParams};

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::geom::{lattice_directions, rng_from_seed, AffineMap};
use crate::linprog::{solve_min, LpOutcome};
use crate::{tol, Error, Result};

/// `{x : (x−c)ᵀ Q (x−c) ≤ 1}` with `Q` symmetric positive definite.
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    center: DVector<f64>,
    shape: DMatrix<f64>,
    shape_inv: DMatrix<f64>,
    /// Factor form `(A, b)` with `Q = (A Aᵀ)⁻¹`, `c = b`, when known.
    factor: Option<(DMatrix<f64>, DVector<f64>)>,
}

impl Ellipsoid {
    pub fn new(center: DVector<f64>, shape: DMatrix<f64>) -> Result<Self> {
        let n = center.len();
        if shape.nrows() != n || shape.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: shape.nrows(),
            });
        }
        let asym = (&shape - shape.transpose()).abs().max();
        if asym > tol::EXACT * shape.abs().max().max(1.0) {
            return Err(Error::bad_param("shape", format!("not symmetric (defect {asym:.3e})")));
        }
        let sym = (shape.clone() + shape.transpose()) * 0.5;
        let eig = sym.clone().symmetric_eigen();
        if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
            return Err(Error::bad_param("shape", "not positive definite"));
        }
        let inv_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l));
        let shape_inv = &eig.eigenvectors * inv_diag * eig.eigenvectors.transpose();
        Ok(Self {
            center,
            shape: sym,
            shape_inv,
            factor: None,
        })
    }

    /// Ellipsoid `A·𝔹ⁿ + b` in factor form; `Q = (A Aᵀ)⁻¹`.
    pub fn from_factor(a: DMatrix<f64>, b: DVector<f64>) -> Result<Self> {
        let aat = &a * a.transpose();
        let q = aat
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::bad_param("a", "singular factor"))?;
        let q = (q.clone() + q.transpose()) * 0.5;
        let mut e = Self::new(b.clone(), q)?;
        e.factor = Some((a, b));
        Ok(e)
    }

    pub fn unit_ball(n: usize) -> Self {
        Self::new(DVector::zeros(n), DMatrix::identity(n, n)).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    pub fn shape(&self) -> &DMatrix<f64> {
        &self.shape
    }

    pub fn shape_inv(&self) -> &DMatrix<f64> {
        &self.shape_inv
    }

    pub fn factor(&self) -> Option<&(DMatrix<f64>, DVector<f64>)> {
        self.factor.as_ref()
    }

    /// A factor pair `(A, b)`: the stored one, or `Q^{−1/2}` computed on the
    /// fly (symmetric square root).
    pub fn factor_or_sqrt(&self) -> (DMatrix<f64>, DVector<f64>) {
        if let Some((a, b)) = &self.factor {
            return (a.clone(), b.clone());
        }
        let eig = self.shape_inv.clone().symmetric_eigen();
        let mut d = DMatrix::zeros(self.dim(), self.dim());
        for i in 0..self.dim() {
            d[(i, i)] = eig.eigenvalues[i].max(0.0).sqrt();
        }
        let a = &eig.eigenvectors * d * eig.eigenvectors.transpose();
        (a, self.center.clone())
    }

    pub fn gauge(&self, x: &DVector<f64>) -> f64 {
        let d = x - &self.center;
        (d.transpose() * &self.shape * &d)[(0, 0)]
    }

    pub fn support(&self, u: &DVector<f64>) -> f64 {
        let q = (u.transpose() * &self.shape_inv * u)[(0, 0)].max(0.0);
        self.center.dot(u) + q.sqrt()
    }

    pub fn support_witness(&self, u: &DVector<f64>) -> (f64, DVector<f64>) {
        let qu = &self.shape_inv * u;
        let s = (u.dot(&qu)).max(0.0).sqrt();
        if s < tol::EXACT {
            return (self.center.dot(u), self.center.clone());
        }
        let x = &self.center + qu / s;
        (self.center.dot(u) + s, x)
    }

    /// Distance from an interior `p` to the boundary along unit `u`
    /// (positive root of the quadratic).
    pub fn radial(&self, p: &DVector<f64>, u: &DVector<f64>) -> f64 {
        let d = p - &self.center;
        let a = (u.transpose() * &self.shape * u)[(0, 0)];
        let b = (u.transpose() * &self.shape * &d)[(0, 0)];
        let c = (d.transpose() * &self.shape * &d)[(0, 0)] - 1.0;
        ((b * b - a * c).max(0.0).sqrt() - b) / a
    }
}

/// Convex hull of an explicit extreme-point list. For planar polytopes the
/// vertices are stored in counter-clockwise order and edge half-planes are
/// precomputed; higher-dimensional polytopes may carry optional facet and
/// edge data (the cube gallery provides both).
#[derive(Debug, Clone)]
pub struct Polytope {
    vertices: Vec<DVector<f64>>,
    /// Outer facets `⟨n, x⟩ ≤ t` with unit normals, when known.
    facets: Option<Vec<(DVector<f64>, f64)>>,
    /// Extreme edges as vertex-index pairs, when known.
    edges: Option<Vec<(usize, usize)>>,
}

impl Polytope {
    pub fn new(vertices: Vec<DVector<f64>>) -> Result<Self> {
        let n = vertices
            .first()
            .ok_or_else(|| Error::bad_param("vertices", "empty vertex list"))?
            .len();
        if vertices.iter().any(|v| v.len() != n) {
            return Err(Error::bad_param("vertices", "inconsistent dimensions"));
        }
        if vertices.len() < n + 1 {
            return Err(Error::bad_param("vertices", "too few vertices for a full-dimensional body"));
        }
        let mut p = Self {
            vertices,
            facets: None,
            edges: None,
        };
        if n == 2 {
            p.order_planar();
            p.facets = Some(p.planar_facets());
            let m = p.vertices.len();
            p.edges = Some((0..m).map(|i| (i, (i + 1) % m)).collect());
        }
        Ok(p)
    }

    pub fn with_structure(
        vertices: Vec<DVector<f64>>,
        facets: Vec<(DVector<f64>, f64)>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let mut p = Self::new(vertices)?;
        if p.dim() != 2 {
            p.facets = Some(
                facets
                    .into_iter()
                    .map(|(n, t)| {
                        let norm = n.norm();
                        (n / norm, t / norm)
                    })
                    .collect(),
            );
            p.edges = Some(edges);
        }
        Ok(p)
    }

    fn order_planar(&mut self) {
        let m = self.vertices.len() as f64;
        let c = self.vertices.iter().fold(DVector::zeros(2), |a, v| a + v) / m;
        self.vertices.sort_by(|a, b| {
            let ta = (a[1] - c[1]).atan2(a[0] - c[0]);
            let tb = (b[1] - c[1]).atan2(b[0] - c[0]);
            ta.partial_cmp(&tb).unwrap()
        });
    }

    fn planar_facets(&self) -> Vec<(DVector<f64>, f64)> {
        let m = self.vertices.len();
        let c = self.vertices.iter().fold(DVector::zeros(2), |a, v| a + v) / m as f64;
        (0..m)
            .map(|i| {
                let a = &self.vertices[i];
                let b = &self.vertices[(i + 1) % m];
                let e = b - a;
                let mut n = DVector::from_vec(vec![e[1], -e[0]]);
                let nn = n.norm();
                n /= nn;
                if n.dot(&(&c - a)) > 0.0 {
                    n = -n;
                }
                let t = n.dot(a);
                (n, t)
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    pub fn facets(&self) -> Option<&[(DVector<f64>, f64)]> {
        self.facets.as_deref()
    }

    pub fn edges(&self) -> Option<&[(usize, usize)]> {
        self.edges.as_deref()
    }

    pub fn support(&self, u: &DVector<f64>) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn support_witness(&self, u: &DVector<f64>) -> (f64, DVector<f64>) {
        let mut best = f64::NEG_INFINITY;
        let mut arg = 0;
        for (i, v) in self.vertices.iter().enumerate() {
            let d = v.dot(u);
            if d > best {
                best = d;
                arg = i;
            }
        }
        (best, self.vertices[arg].clone())
    }

    /// Signed interior margin: positive inside, via facets when available
    /// and an LP feasibility check otherwise (feasible → margin from radial
    /// probes, infeasible → −1).
    pub fn interior_margin(&self, x: &DVector<f64>) -> f64 {
        if let Some(facets) = &self.facets {
            return facets
                .iter()
                .map(|(n, t)| t - n.dot(x))
                .fold(f64::INFINITY, f64::min);
        }
        if !self.contains_lp(x) {
            return -1.0;
        }
        let n = self.dim();
        let mut margin = f64::INFINITY;
        for i in 0..n {
            let mut u = DVector::zeros(n);
            for s in [1.0, -1.0] {
                u[i] = s;
                margin = margin.min(self.radial_lp(x, &u));
            }
            u[i] = 0.0;
        }
        margin
    }

    fn contains_lp(&self, x: &DVector<f64>) -> bool {
        let n = self.dim();
        let m = self.vertices.len();
        let mut a = DMatrix::zeros(n + 1, m);
        for (j, v) in self.vertices.iter().enumerate() {
            for i in 0..n {
                a[(i, j)] = v[i];
            }
            a[(n, j)] = 1.0;
        }
        let mut b = vec![0.0; n + 1];
        for i in 0..n {
            b[i] = x[i];
        }
        b[n] = 1.0;
        matches!(solve_min(&vec![0.0; m], &a, &b), LpOutcome::Optimal { .. })
    }

    fn radial_lp(&self, p: &DVector<f64>, u: &DVector<f64>) -> f64 {
        let n = self.dim();
        let m = self.vertices.len();
        let mut a = DMatrix::zeros(n + 1, m + 1);
        for (j, v) in self.vertices.iter().enumerate() {
            for i in 0..n {
                a[(i, j)] = v[i];
            }
            a[(n, j)] = 1.0;
        }
        for i in 0..n {
            a[(i, m)] = -u[i];
        }
        let mut b = vec![0.0; n + 1];
        for i in 0..n {
            b[i] = p[i];
        }
        b[n] = 1.0;
        let mut c = vec![0.0; m + 1];
        c[m] = -1.0;
        match solve_min(&c, &a, &b) {
            LpOutcome::Optimal { x, .. } => x[m],
            _ => 0.0,
        }
    }

    /// Exact boundary distance along unit `u` from interior `p`.
    pub fn radial(&self, p: &DVector<f64>, u: &DVector<f64>) -> f64 {
        if let Some(facets) = &self.facets {
            let mut t = f64::INFINITY;
            for (nrm, off) in facets {
                let denom = nrm.dot(u);
                if denom > tol::EXACT {
                    t = t.min((off - nrm.dot(p)) / denom);
                }
            }
            return t.max(0.0);
        }
        self.radial_lp(p, u)
    }

    /// Exact area centroid of a planar polytope (shoelace formula).
    pub fn centroid_planar(&self) -> Result<DVector<f64>> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: self.dim(),
            });
        }
        let m = self.vertices.len();
        let (mut area2, mut cx, mut cy) = (0.0, 0.0, 0.0);
        for i in 0..m {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % m];
            let cross = a[0] * b[1] - b[0] * a[1];
            area2 += cross;
            cx += (a[0] + b[0]) * cross;
            cy += (a[1] + b[1]) * cross;
        }
        if area2.abs() < 1e-300 {
            return Err(Error::Numerical("degenerate polygon".into()));
        }
        Ok(DVector::from_vec(vec![cx / (3.0 * area2), cy / (3.0 * area2)]))
    }
}

type GaugeFn = Arc<dyn Fn(&DVector<f64>) -> f64 + Send + Sync>;
type SupportFn = Arc<dyn Fn(&DVector<f64>) -> f64 + Send + Sync>;

/// `{x : g(x) ≤ 1}` for a convex gauge oracle `g`, together with a bounding
/// radius and an interior seed point. Gallery-built bodies carry an exact
/// support closure where a closed form exists; otherwise support is
/// maximized numerically over the boundary.
#[derive(Clone)]
pub struct ImplicitBody {
    gauge: GaugeFn,
    radius: f64,
    q0: DVector<f64>,
    support_exact: Option<SupportFn>,
    /// `(gallery name, params)` provenance for serialization.
    tag: Option<(String, GalleryParams)>,
}

impl fmt::Debug for ImplicitBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImplicitBody")
            .field("radius", &self.radius)
            .field("q0", &self.q0)
            .field("tag", &self.tag.as_ref().map(|t| &t.0))
            .finish()
    }
}

impl ImplicitBody {
    pub fn new(gauge: GaugeFn, radius: f64, q0: DVector<f64>) -> Result<Self> {
        if (gauge)(&q0) >= 1.0 - tol::INTERIOR_MARGIN {
            return Err(Error::NotInterior);
        }
        Ok(Self {
            gauge,
            radius,
            q0,
            support_exact: None,
            tag: None,
        })
    }

    pub fn with_exact_support(mut self, h: SupportFn) -> Self {
        self.support_exact = Some(h);
        self
    }

    pub(crate) fn with_tag(mut self, name: &str, params: GalleryParams) -> Self {
        self.tag = Some((name.to_string(), params));
        self
    }

    pub fn tag(&self) -> Option<(&str, &GalleryParams)> {
        self.tag.as_ref().map(|(n, p)| (n.as_str(), p))
    }

    pub fn dim(&self) -> usize {
        self.q0.len()
    }

    pub fn gauge(&self, x: &DVector<f64>) -> f64 {
        (self.gauge)(x)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn q0(&self) -> &DVector<f64> {
        &self.q0
    }

    /// Checks convexity of the gauge on seeded random segments and the
    /// bounding-radius containment; cheap probe used by the gallery.
    pub fn check_invariants(&self, probes: usize, seed: u64) -> Result<()> {
        let mut rng = rng_from_seed(seed);
        let n = self.dim();
        for _ in 0..probes {
            let x = crate::geom::gaussian_vector(n, &mut rng) * (self.radius * 0.7);
            let y = crate::geom::gaussian_vector(n, &mut rng) * (self.radius * 0.7);
            let l: f64 = rng.random();
            let mid = &x * l + &y * (1.0 - l);
            let lhs = self.gauge(&mid);
            let rhs = l * self.gauge(&x) + (1.0 - l) * self.gauge(&y);
            if lhs > rhs + 1e-9 {
                return Err(Error::Numerical(format!(
                    "gauge not convex on probe segment (violation {:.3e})",
                    lhs - rhs
                )));
            }
            if self.gauge(&x) <= 1.0 && x.norm() > self.radius + 1e-9 {
                return Err(Error::Numerical("body escapes its bounding radius".into()));
            }
        }
        Ok(())
    }

    pub fn radial(&self, p: &DVector<f64>, u: &DVector<f64>) -> f64 {
        let hi = self.radius + p.norm() + 1.0;
        let mut lo = 0.0;
        let mut hi = hi;
        for _ in 0..tol::BISECT_ITERS {
            let mid = 0.5 * (lo + hi);
            if self.gauge(&(p + u * mid)) <= 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < tol::BISECT {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn support(&self, u: &DVector<f64>) -> f64 {
        self.support_witness(u).0
    }

    /// Support via exact closure, or boundary hill-climbing from a coarse
    /// direction lattice (adequate for residual thresholds around 1e−4;
    /// detectors use the radial oracle instead of this path).
    pub fn support_witness(&self, u: &DVector<f64>) -> (f64, DVector<f64>) {
        if let Some(h) = &self.support_exact {
            // Witness point is still found numerically, but the value is exact.
            let (_, x) = self.support_witness_numeric(u, 64, 24);
            return ((h)(u), x);
        }
        self.support_witness_numeric(u, 256, 48)
    }

    pub(crate) fn support_witness_numeric(
        &self,
        u: &DVector<f64>,
        coarse: usize,
        iters: usize,
    ) -> (f64, DVector<f64>) {
        let n = self.dim();
        let un = u.normalize();
        let phi = |v: &DVector<f64>| -> (f64, DVector<f64>) {
            let r = self.radial(&self.q0, v);
            let x = &self.q0 + v * r;
            (x.dot(u), x)
        };
        let mut best_v = un.clone();
        let (mut best, mut best_x) = phi(&best_v);
        for v in lattice_directions(n, coarse) {
            let (val, x) = phi(&v);
            if val > best {
                best = val;
                best_v = v;
                best_x = x;
            }
        }
        // Tangent-step ascent with shrinking step.
        let mut step = 0.5;
        for _ in 0..iters {
            let mut improved = false;
            let tangents = tangent_basis(&best_v);
            for t in &tangents {
                for s in [step, -step] {
                    let cand = (&best_v + t * s).normalize();
                    let (val, x) = phi(&cand);
                    if val > best + 1e-15 {
                        best = val;
                        best_v = cand;
                        best_x = x;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
                if step < 1e-8 {
                    break;
                }
            }
        }
        (best, best_x)
    }
}

fn tangent_basis(v: &DVector<f64>) -> Vec<DVector<f64>> {
    let n = v.len();
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(n - 1);
    for i in 0..n {
        let mut e = DVector::zeros(n);
        e[i] = 1.0;
        let mut t = &e - v * v.dot(&e);
        for prev in &out {
            let d: f64 = prev.dot(&t);
            t -= prev * d;
        }
        let norm = t.norm();
        if norm > 1e-8 {
            out.push(t / norm);
        }
        if out.len() == n - 1 {
            break;
        }
    }
    out
}

/// One of the three body representations, tagged with its ambient dimension.
#[derive(Debug, Clone)]
pub enum BodyKind {
    Ellipsoid(Ellipsoid),
    Polytope(Polytope),
    Implicit(ImplicitBody),
}

/// A convex body in ℝⁿ (compact, convex, nonempty interior).
#[derive(Debug, Clone)]
pub struct Body {
    kind: BodyKind,
    n: usize,
}

impl Body {
    pub fn ellipsoid(e: Ellipsoid) -> Self {
        let n = e.dim();
        Self {
            kind: BodyKind::Ellipsoid(e),
            n,
        }
    }

    pub fn polytope(p: Polytope) -> Self {
        let n = p.dim();
        Self {
            kind: BodyKind::Polytope(p),
            n,
        }
    }

    pub fn implicit(b: ImplicitBody) -> Self {
        let n = b.dim();
        Self {
            kind: BodyKind::Implicit(b),
            n,
        }
    }

    pub fn unit_ball(n: usize) -> Self {
        Self::ellipsoid(Ellipsoid::unit_ball(n))
    }

    pub fn kind(&self) -> &BodyKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_ellipsoid(&self) -> Option<&Ellipsoid> {
        match &self.kind {
            BodyKind::Ellipsoid(e) => Some(e),
            _ => None,
        }
    }

    pub fn as_polytope(&self) -> Option<&Polytope> {
        match &self.kind {
            BodyKind::Polytope(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_implicit(&self) -> Option<&ImplicitBody> {
        match &self.kind {
            BodyKind::Implicit(b) => Some(b),
            _ => None,
        }
    }

    /// Support function `h_K(u) = max_{x∈K} ⟨x, u⟩` (any nonzero `u`).
    pub fn support(&self, u: &DVector<f64>) -> f64 {
        match &self.kind {
            BodyKind::Ellipsoid(e) => e.support(u),
            BodyKind::Polytope(p) => p.support(u),
            BodyKind::Implicit(b) => b.support(u),
        }
    }

    pub fn support_witness(&self, u: &DVector<f64>) -> (f64, DVector<f64>) {
        match &self.kind {
            BodyKind::Ellipsoid(e) => e.support_witness(u),
            BodyKind::Polytope(p) => p.support_witness(u),
            BodyKind::Implicit(b) => b.support_witness(u),
        }
    }

    /// Distance from a strictly interior `p` to the boundary along unit `u`.
    pub fn radial(&self, p: &DVector<f64>, u: &DVector<f64>) -> Result<f64> {
        if self.interior_margin(p) <= tol::INTERIOR_MARGIN {
            return Err(Error::NotInterior);
        }
        Ok(self.radial_unchecked(p, u))
    }

    /// Radial oracle without the interiority re-check; callers in inner
    /// loops validate `p` once and then use this.
    pub fn radial_unchecked(&self, p: &DVector<f64>, u: &DVector<f64>) -> f64 {
        match &self.kind {
            BodyKind::Ellipsoid(e) => e.radial(p, u),
            BodyKind::Polytope(poly) => poly.radial(p, u),
            BodyKind::Implicit(b) => b.radial(p, u),
        }
    }

    /// Positive inside, negative outside; scale is representation-dependent
    /// (gauge slack for ellipsoids/implicit bodies, facet slack for
    /// polytopes).
    pub fn interior_margin(&self, x: &DVector<f64>) -> f64 {
        match &self.kind {
            BodyKind::Ellipsoid(e) => 1.0 - e.gauge(x),
            BodyKind::Polytope(p) => p.interior_margin(x),
            BodyKind::Implicit(b) => 1.0 - b.gauge(x),
        }
    }

    pub fn contains(&self, x: &DVector<f64>, slack: f64) -> bool {
        self.interior_margin(x) >= -slack
    }

    /// A convenient strictly interior point.
    pub fn interior_point(&self) -> DVector<f64> {
        match &self.kind {
            BodyKind::Ellipsoid(e) => e.center().clone(),
            BodyKind::Polytope(p) => {
                let m = p.vertices().len() as f64;
                p.vertices().iter().fold(DVector::zeros(self.n), |a, v| a + v) / m
            }
            BodyKind::Implicit(b) => b.q0().clone(),
        }
    }

    /// Axis-aligned bounding box from support evaluations.
    pub fn bounding_box(&self) -> (DVector<f64>, DVector<f64>) {
        let n = self.n;
        let mut lo = DVector::zeros(n);
        let mut hi = DVector::zeros(n);
        let mut e = DVector::zeros(n);
        for i in 0..n {
            e[i] = 1.0;
            hi[i] = self.support(&e);
            e[i] = -1.0;
            lo[i] = -self.support(&e);
            e[i] = 0.0;
        }
        (lo, hi)
    }

    /// Hit-or-miss Monte Carlo centroid inside the bounding box.
    ///
    /// Returns the estimate and its per-coordinate standard error;
    /// deterministic per seed.
    pub fn centroid_mc(&self, samples: usize, seed: u64) -> Result<(DVector<f64>, DVector<f64>)> {
        if samples < 1_000 {
            return Err(Error::bad_param("samples", "need at least 1000 samples"));
        }
        let (lo, hi) = self.bounding_box();
        let n = self.n;
        let mut rng = rng_from_seed(seed);
        let mut sum: DVector<f64> = DVector::zeros(n);
        let mut sum_sq: DVector<f64> = DVector::zeros(n);
        let mut hits = 0usize;
        for _ in 0..samples {
            let mut x = DVector::zeros(n);
            for i in 0..n {
                let t: f64 = rng.random();
                x[i] = lo[i] + t * (hi[i] - lo[i]);
            }
            if self.contains(&x, 0.0) {
                hits += 1;
                for i in 0..n {
                    sum[i] += x[i];
                    sum_sq[i] += x[i] * x[i];
                }
            }
        }
        if hits < 2 {
            return Err(Error::TooFewSamples(format!(
                "{hits} hits out of {samples} samples (broken bounding box?)"
            )));
        }
        let m = hits as f64;
        let mean: DVector<f64> = &sum / m;
        let stderr: DVector<f64> = DVector::from_fn(n, |i, _| {
            let var: f64 = (sum_sq[i] / m - mean[i] * mean[i]).max(0.0);
            (var / m).sqrt()
        });
        Ok((mean, stderr))
    }

    /// Exact centroid when a closed form exists (ellipsoid center, planar
    /// polygon shoelace).
    pub fn exact_centroid(&self) -> Option<DVector<f64>> {
        match &self.kind {
            BodyKind::Ellipsoid(e) => Some(e.center().clone()),
            BodyKind::Polytope(p) if self.n == 2 => p.centroid_planar().ok(),
            _ => None,
        }
    }

    /// Exact (centroid, covariance) for ellipsoids: `cov = Q⁻¹/(n+2)`.
    pub fn exact_moments(&self) -> Option<(DVector<f64>, DMatrix<f64>)> {
        match &self.kind {
            BodyKind::Ellipsoid(e) => {
                let cov = e.shape_inv() / (self.n as f64 + 2.0);
                Some((e.center().clone(), cov))
            }
            _ => None,
        }
    }

    /// Image of the body under an invertible affine map (exact for every
    /// representation; implicit gauges are composed with the inverse map).
    pub fn affine_image(&self, m: &AffineMap) -> Result<Body> {
        if m.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: m.dim(),
            });
        }
        match &self.kind {
            BodyKind::Ellipsoid(e) => {
                let inv = m.inverse()?;
                let q = inv.linear.transpose() * e.shape() * &inv.linear;
                let c = m.apply(e.center());
                let mut out = Ellipsoid::new(c, q)?;
                if let Some((a, b)) = e.factor() {
                    out.factor = Some((&m.linear * a, m.apply(b)));
                } else {
                    let (a, b) = e.factor_or_sqrt();
                    out.factor = Some((&m.linear * a, m.apply(&b)));
                }
                Ok(Body::ellipsoid(out))
            }
            BodyKind::Polytope(p) => {
                let verts: Vec<DVector<f64>> = p.vertices().iter().map(|v| m.apply(v)).collect();
                let mut out = Polytope::new(verts)?;
                if self.n != 2 {
                    if let Some(facets) = p.facets() {
                        let inv = m.inverse()?;
                        out.facets = Some(
                            facets
                                .iter()
                                .map(|(nrm, off)| {
                                    let n2 = inv.linear.transpose() * nrm;
                                    let norm = n2.norm();
                                    let n2 = n2 / norm;
                                    let t2 = (off + nrm.dot(&(&inv.linear * &m.translation))) / norm;
                                    (n2, t2)
                                })
                                .collect(),
                        );
                    }
                    out.edges = p.edges.clone();
                }
                Ok(Body::polytope(out))
            }
            BodyKind::Implicit(b) => {
                let inv = m.inverse()?;
                let g = b.gauge.clone();
                let inv_for_gauge = inv.clone();
                let gauge: GaugeFn = Arc::new(move |y: &DVector<f64>| (g)(&inv_for_gauge.apply(y)));
                let op_norm = m.linear.norm(); // Frobenius ≥ spectral, safe bound
                let radius = op_norm * b.radius + m.translation.norm();
                let q0 = m.apply(b.q0());
                let mut out = ImplicitBody::new(gauge, radius, q0)?;
                if let Some(h) = &b.support_exact {
                    let h = h.clone();
                    let lt = m.linear.transpose();
                    let v = m.translation.clone();
                    out.support_exact = Some(Arc::new(move |u: &DVector<f64>| {
                        (h)(&(&lt * u)) + v.dot(u)
                    }));
                }
                Ok(Body::implicit(out))
            }
        }
    }
}

pub use io::{body_from_json, body_to_json};

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn e(n: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        v
    }

    #[test]
    fn ball_support_and_radial() {
        let ball = Body::unit_ball(3);
        for u in crate::geom::sample_unit_directions(3, 16, 1) {
            assert_relative_eq!(ball.support(&u), 1.0, epsilon = 1e-12);
            assert_relative_eq!(
                ball.radial(&DVector::zeros(3), &u).unwrap(),
                1.0,
                epsilon = 1e-12
            );
        }
        let p = DVector::from_vec(vec![0.5, 0.0, 0.0]);
        assert_relative_eq!(ball.radial(&p, &e(3, 0)).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn ellipsoid_semi_axis_support() {
        // Q = diag(1/4, 1) → semi-axes (2, 1): h(e₁) = 2.
        let q = DMatrix::from_diagonal(&DVector::from_vec(vec![0.25, 1.0]));
        let el = Ellipsoid::new(DVector::zeros(2), q).unwrap();
        assert_relative_eq!(el.support(&e(2, 0)), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn cube_support_along_diagonal() {
        let cube = gallery("cube", &GalleryParams::default()).unwrap();
        let u = DVector::from_vec(vec![1.0, 1.0, 1.0]).normalize();
        assert_relative_eq!(cube.support(&u), 3.0_f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn radial_requires_interior_point() {
        let ball = Body::unit_ball(2);
        let p = DVector::from_vec(vec![1.5, 0.0]);
        assert!(ball.radial(&p, &e(2, 0)).is_err());
    }

    #[test]
    fn double_disk_radial_matches_gauge_bisection() {
        let dd = gallery("double_disk", &GalleryParams::default()).unwrap();
        let p = DVector::zeros(3);
        let u = DVector::from_vec(vec![1.0, 1.0, 0.0]).normalize();
        let r = dd.radial(&p, &u).unwrap();
        // boundary: (|x|+|y|)² = 1 along the diagonal → r·(2/√2) = 1
        assert_relative_eq!(r, 1.0 / 2.0_f64.sqrt(), epsilon = 1e-9);
        let x = &p + &u * r;
        assert_relative_eq!(dd.as_implicit().unwrap().gauge(&x), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn centroid_mc_of_shifted_box() {
        let verts = vec![
            DVector::from_vec(vec![0.0, 0.0]),
            DVector::from_vec(vec![1.0, 0.0]),
            DVector::from_vec(vec![1.0, 1.0]),
            DVector::from_vec(vec![0.0, 1.0]),
        ];
        let body = Body::polytope(Polytope::new(verts).unwrap());
        let (c, se) = body.centroid_mc(20_000, 5).unwrap();
        for i in 0..2 {
            assert!((c[i] - 0.5).abs() < 3.0 * se[i] + 1e-3);
        }
    }

    #[test]
    fn centroid_mc_of_factor_ellipse() {
        // A = diag(2, 1), b = (1, 0): centroid ≈ (1, 0).
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0]));
        let b = DVector::from_vec(vec![1.0, 0.0]);
        let body = Body::ellipsoid(Ellipsoid::from_factor(a, b).unwrap());
        let (c, se) = body.centroid_mc(100_000, 6).unwrap();
        assert!((c[0] - 1.0).abs() < 3.0 * se[0]);
        assert!(c[1].abs() < 3.0 * se[1]);
    }

    #[test]
    fn centroid_mc_ball_symmetry() {
        let ball = Body::unit_ball(3);
        let (c, se) = ball.centroid_mc(100_000, 7).unwrap();
        let bound = 3.0 * se.norm();
        assert!(c.norm() < bound, "centroid {}, bound {}", c.norm(), bound);
    }

    #[test]
    fn affine_image_of_ball_is_ellipsoid() {
        let ball = Body::unit_ball(2);
        let m = AffineMap::new(
            DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 1.0]),
            DVector::from_vec(vec![0.3, -0.1]),
        )
        .unwrap();
        let img = ball.affine_image(&m).unwrap();
        // support must transform as h'(u) = h(Lᵀu) + ⟨v,u⟩
        for u in crate::geom::sample_unit_directions(2, 12, 9) {
            let lhs = img.support(&u);
            let rhs = ball.support(&(m.linear.transpose() * &u)) + m.translation.dot(&u);
            assert_relative_eq!(lhs, rhs, epsilon = 1e-10);
        }
    }

    #[test]
    fn implicit_affine_image_keeps_exact_support() {
        let sc = gallery("spherocylinder", &GalleryParams::default()).unwrap();
        let mut shear = DMatrix::identity(3, 3);
        shear[(0, 2)] = 0.7;
        let m = AffineMap::linear_only(shear).unwrap();
        let img = sc.affine_image(&m).unwrap();
        for u in crate::geom::sample_unit_directions(3, 8, 11) {
            let lhs = img.support(&u);
            let rhs = sc.support(&(m.linear.transpose() * &u));
            assert_relative_eq!(lhs, rhs, epsilon = 1e-12);
        }
    }

    #[test]
    fn polytope_lp_fallback_membership() {
        // 3-simplex without facet data: LP paths must agree with geometry.
        let verts = vec![
            DVector::from_vec(vec![0.0, 0.0, 0.0]),
            DVector::from_vec(vec![1.0, 0.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0, 0.0]),
            DVector::from_vec(vec![0.0, 0.0, 1.0]),
        ];
        let p = Polytope::new(verts).unwrap();
        assert!(p.interior_margin(&DVector::from_vec(vec![0.1, 0.1, 0.1])) > 0.0);
        assert!(p.interior_margin(&DVector::from_vec(vec![0.5, 0.5, 0.5])) < 0.0);
        let r = p.radial(&DVector::from_vec(vec![0.1, 0.1, 0.1]), &e(3, 0));
        assert_relative_eq!(r, 0.7, epsilon = 1e-7);
    }

    #[test]
    fn support_sublinearity_on_gallery_bodies() {
        for name in ["ball", "cube", "double_disk", "spherocylinder", "lens"] {
            let body = gallery(name, &GalleryParams::default()).unwrap();
            let dirs = crate::geom::sample_unit_directions(3, 10, 13);
            for pair in dirs.chunks(2) {
                let (u, v) = (&pair[0], &pair[1]);
                let s = u + v;
                if s.norm() < 1e-6 {
                    continue;
                }
                let lhs = body.support(&s);
                let rhs = body.support(u) + body.support(v);
                assert!(lhs <= rhs + 1e-8, "{name}: sublinearity violated");
            }
        }
    }
}
