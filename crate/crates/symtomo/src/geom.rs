//! Shared linear/affine geometry: hyperplanes, charts, subspace arithmetic,
//! Grassmannian angles, and seeded direction sampling.
//!
//! Conventions used throughout the crate:
//!
//! * A hyperplane is stored in canonical form: unit normal whose first
//!   nonzero coordinate is positive. `(ξ, t)` and `(−ξ, −t)` describe the
//!   same hyperplane, and canonicalization picks one representative so that
//!   hyperplanes can be used as reproducible keys.
//! * Every hyperplane gets a deterministic chart (orthonormal frame of
//!   `ξ^⊥` plus the foot point `t·ξ`), so coordinates on sections are
//!   reproducible bit-for-bit for the same input.
//! * All randomness is drawn from `ChaCha8` seeded explicitly by the caller.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{tol, Error, Result};

/// An affine hyperplane `{x : ⟨ξ, x⟩ = t}` with unit normal `ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineHyperplane {
    normal: DVector<f64>,
    offset: f64,
}

impl AffineHyperplane {
    /// Builds a hyperplane from any nonzero normal, normalizing and
    /// canonicalizing (first nonzero coordinate of the normal is positive).
    pub fn new(normal: DVector<f64>, offset: f64) -> Result<Self> {
        let norm = normal.norm();
        if norm < tol::EXACT {
            return Err(Error::bad_param("normal", "zero normal vector"));
        }
        let mut xi = normal / norm;
        let mut t = offset / norm;
        if let Some(first) = xi.iter().find(|v| **v != 0.0) {
            if *first < 0.0 {
                xi = -xi;
                t = -t;
            }
        }
        Ok(Self {
            normal: xi,
            offset: t,
        })
    }

    /// Hyperplane through `p` with the given normal direction.
    pub fn through(normal: DVector<f64>, p: &DVector<f64>) -> Result<Self> {
        let t = normal.dot(p);
        Self::new(normal, t)
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &DVector<f64> {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Signed distance from `x` to the hyperplane.
    pub fn signed_distance(&self, x: &DVector<f64>) -> f64 {
        self.normal.dot(x) - self.offset
    }

    /// Whether the hyperplane passes through the origin.
    pub fn is_linear(&self) -> bool {
        self.offset.abs() < tol::EXACT
    }

    /// Foot of the perpendicular from the origin, `t·ξ`.
    pub fn foot(&self) -> DVector<f64> {
        &self.normal * self.offset
    }
}

/// A deterministic orthonormal coordinate system on a hyperplane:
/// `embed(y) = origin + frame · y`, `project(x) = frameᵀ (x − origin)`.
#[derive(Debug, Clone)]
pub struct Chart {
    pub origin: DVector<f64>,
    /// `n × (n−1)` column-orthonormal matrix spanning `ξ^⊥`.
    pub frame: DMatrix<f64>,
}

impl Chart {
    pub fn ambient_dim(&self) -> usize {
        self.frame.nrows()
    }

    pub fn section_dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn embed(&self, y: &DVector<f64>) -> DVector<f64> {
        &self.origin + &self.frame * y
    }

    pub fn project(&self, x: &DVector<f64>) -> DVector<f64> {
        self.frame.transpose() * (x - &self.origin)
    }

    /// Pushes a direction (no origin shift) down to chart coordinates.
    pub fn project_dir(&self, v: &DVector<f64>) -> DVector<f64> {
        self.frame.transpose() * v
    }

    pub fn embed_dir(&self, w: &DVector<f64>) -> DVector<f64> {
        &self.frame * w
    }
}

/// Deterministic chart of a hyperplane: Gram–Schmidt on the canonical basis
/// vectors least aligned with the normal (ties broken by index), with origin
/// at the foot point `t·ξ`. The same hyperplane always yields bit-identical
/// output.
pub fn chart_of(h: &AffineHyperplane) -> Chart {
    let n = h.dim();
    let xi = h.normal();
    // Sort basis indices by |ξ_i| ascending; stable sort keeps index order on
    // ties, which pins the gauge.
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| xi[a].abs().partial_cmp(&xi[b].abs()).unwrap());
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(n - 1);
    for &i in idx.iter().take(n - 1) {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        v -= xi * xi.dot(&v);
        for c in &cols {
            let d = c.dot(&v);
            v -= c * d;
        }
        let norm = v.norm();
        debug_assert!(norm > tol::RANK, "degenerate Gram–Schmidt column");
        cols.push(v / norm);
    }
    let mut frame = DMatrix::zeros(n, n - 1);
    for (j, c) in cols.iter().enumerate() {
        frame.set_column(j, c);
    }
    Chart {
        origin: h.foot(),
        frame,
    }
}

/// A linear subspace given by a column-orthonormal basis. A `0 × k` or
/// `n × 0` basis is allowed (trivial subspace).
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: DMatrix<f64>,
}

impl Subspace {
    /// Orthonormalizes the columns of `m` (rank-revealing; dependent columns
    /// are dropped at the `tol::RANK` threshold).
    pub fn from_cols(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        let mut cols: Vec<DVector<f64>> = Vec::new();
        for j in 0..m.ncols() {
            let mut v: DVector<f64> = m.column(j).into();
            for c in &cols {
                let d = c.dot(&v);
                v -= c * d;
            }
            let norm = v.norm();
            if norm > tol::RANK {
                cols.push(v / norm);
            }
        }
        let mut basis = DMatrix::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            basis.set_column(j, c);
        }
        Self { basis }
    }

    pub fn from_orthonormal(basis: DMatrix<f64>) -> Result<Self> {
        let g = basis.transpose() * &basis;
        let err = (&g - DMatrix::identity(g.nrows(), g.ncols())).abs().max();
        if basis.ncols() > 0 && err > 1e-10 {
            return Err(Error::Numerical(format!(
                "basis is not column-orthonormal (defect {err:.3e})"
            )));
        }
        Ok(Self { basis })
    }

    pub fn span_of(vectors: &[DVector<f64>], n: usize) -> Self {
        let mut m = DMatrix::zeros(n, vectors.len());
        for (j, v) in vectors.iter().enumerate() {
            m.set_column(j, v);
        }
        Self::from_cols(&m)
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Orthogonal projection of `x` onto the subspace.
    pub fn project(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.basis * (self.basis.transpose() * x)
    }

    /// Whether `x` lies in the subspace up to `tol`.
    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        (x - self.project(x)).norm() <= tol * x.norm().max(1.0)
    }

    /// Orthonormal basis of the orthogonal complement.
    pub fn complement(&self) -> Subspace {
        let n = self.ambient_dim();
        let mut cols: Vec<DVector<f64>> = (0..self.dim()).map(|j| self.basis.column(j).into()).collect();
        let mut comp: Vec<DVector<f64>> = Vec::new();
        for i in 0..n {
            let mut v = DVector::zeros(n);
            v[i] = 1.0;
            for c in cols.iter().chain(comp.iter()) {
                let d = c.dot(&v);
                v -= c * d;
            }
            let norm = v.norm();
            if norm > tol::RANK {
                comp.push(v / norm);
            }
        }
        cols.clear();
        let mut basis = DMatrix::zeros(n, comp.len());
        for (j, c) in comp.iter().enumerate() {
            basis.set_column(j, c);
        }
        Subspace { basis }
    }

    /// The subspace `{x : ⟨ξ, x⟩ = 0}` of a linear hyperplane.
    pub fn hyperplane(h: &AffineHyperplane) -> Subspace {
        let chart = chart_of(h);
        Subspace { basis: chart.frame }
    }
}

/// Dihedral-angle distance between two linear hyperplanes,
/// `arccos |⟨ξ₁, ξ₂⟩| ∈ [0, π/2]`.
pub fn grassmann_distance(h1: &AffineHyperplane, h2: &AffineHyperplane) -> Result<f64> {
    if h1.dim() != h2.dim() {
        return Err(Error::DimensionMismatch {
            expected: h1.dim(),
            got: h2.dim(),
        });
    }
    if !h1.is_linear() || !h2.is_linear() {
        return Err(Error::bad_param("hyperplane", "expected linear hyperplanes (offset 0)"));
    }
    let c = h1.normal().dot(h2.normal()).abs().min(1.0);
    Ok(c.acos())
}

/// Principal angles between two subspaces (ascending), from the singular
/// values of `B₁ᵀ B₂`.
pub fn principal_angles(s1: &Subspace, s2: &Subspace) -> Result<Vec<f64>> {
    if s1.ambient_dim() != s2.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: s1.ambient_dim(),
            got: s2.ambient_dim(),
        });
    }
    let m = s1.basis().transpose() * s2.basis();
    let mut sv: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(sv.iter().map(|s| s.min(1.0).acos()).collect())
}

/// Principal angle between the line spanned by `v` and a subspace.
pub fn principal_angle_line(v: &DVector<f64>, s: &Subspace) -> f64 {
    let c = (s.project(v).norm() / v.norm()).min(1.0);
    c.acos()
}

/// Orthonormal basis of `S₁ ∩ S₂`.
///
/// A vector lies in the intersection iff it can be written in both bases, so
/// null vectors of `[B₁ | −B₂]` give the intersection; the SVD threshold at
/// `tol::RANK` decides rank. The result satisfies
/// `dim = dim S₁ + dim S₂ − dim (S₁ + S₂)`.
pub fn subspace_meet(s1: &Subspace, s2: &Subspace) -> Subspace {
    let n = s1.ambient_dim();
    let (d1, d2) = (s1.dim(), s2.dim());
    if d1 == 0 || d2 == 0 {
        return Subspace {
            basis: DMatrix::zeros(n, 0),
        };
    }
    let mut stacked = DMatrix::zeros(n, d1 + d2);
    stacked.view_mut((0, 0), (n, d1)).copy_from(s1.basis());
    stacked
        .view_mut((0, d1), (n, d2))
        .copy_from(&(-s2.basis()));
    // nalgebra's SVD is thin, so when columns outnumber rows the trailing
    // right singular vectors (the null space we want) are not returned;
    // zero-pad to square to force the full right basis.
    let k = d1 + d2;
    let rows = n.max(k);
    let mut padded = DMatrix::zeros(rows, k);
    padded.view_mut((0, 0), (n, k)).copy_from(&stacked);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("svd with v requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let cutoff = tol::RANK * smax.max(1.0);
    let mut vecs: Vec<DVector<f64>> = Vec::new();
    for i in 0..k {
        let s = if i < svd.singular_values.len() {
            svd.singular_values[i]
        } else {
            0.0
        };
        if s <= cutoff {
            let y = v_t.row(i).transpose();
            let lambda = y.rows(0, d1).into_owned();
            vecs.push(s1.basis() * lambda);
        }
    }
    Subspace::span_of(&vecs, n)
}

/// An invertible affine map `x ↦ L x + v`.
#[derive(Debug, Clone)]
pub struct AffineMap {
    pub linear: DMatrix<f64>,
    pub translation: DVector<f64>,
}

impl AffineMap {
    pub fn new(linear: DMatrix<f64>, translation: DVector<f64>) -> Result<Self> {
        if linear.nrows() != linear.ncols() || linear.nrows() != translation.len() {
            return Err(Error::DimensionMismatch {
                expected: linear.nrows(),
                got: translation.len(),
            });
        }
        let map = Self {
            linear,
            translation,
        };
        if map.linear.clone().lu().determinant().abs() == 0.0 {
            return Err(Error::bad_param("linear", "singular linear part"));
        }
        Ok(map)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            linear: DMatrix::identity(n, n),
            translation: DVector::zeros(n),
        }
    }

    pub fn linear_only(m: DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        Self::new(m, DVector::zeros(n))
    }

    pub fn translation_only(v: DVector<f64>) -> Self {
        let n = v.len();
        Self {
            linear: DMatrix::identity(n, n),
            translation: v,
        }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.linear * x + &self.translation
    }

    pub fn det(&self) -> f64 {
        self.linear.clone().lu().determinant()
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        let inv = self
            .linear
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Numerical("singular affine map".into()))?;
        let t = -(&inv * &self.translation);
        Ok(AffineMap {
            linear: inv,
            translation: t,
        })
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            linear: &self.linear * &other.linear,
            translation: &self.linear * &other.translation + &self.translation,
        }
    }

    /// The affine involution fixing `p + F` pointwise and negating `W`,
    /// where `F ⊕ W` spans the ambient space (oblique in general).
    pub fn reflection_fixing(
        p: &DVector<f64>,
        fixed: &Subspace,
        negated: &Subspace,
    ) -> Result<AffineMap> {
        let n = p.len();
        let (df, dw) = (fixed.dim(), negated.dim());
        if df + dw != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: df + dw,
            });
        }
        // Columns [F W] form a basis; the map is C · diag(I, −I) · C⁻¹.
        let mut c = DMatrix::zeros(n, n);
        c.view_mut((0, 0), (n, df)).copy_from(fixed.basis());
        c.view_mut((0, df), (n, dw)).copy_from(negated.basis());
        let c_inv = c
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Numerical("fixed and negated subspaces are not complementary".into()))?;
        let mut d = DMatrix::identity(n, n);
        for i in df..n {
            d[(i, i)] = -1.0;
        }
        let linear = &c * d * c_inv;
        let translation = p - &linear * p;
        Ok(AffineMap {
            linear,
            translation,
        })
    }
}

/// Seeded RNG used by every stochastic operation in the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard Gaussian vector.
pub fn gaussian_vector(n: usize, rng: &mut ChaCha8Rng) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

/// `count` uniform directions on the unit sphere of ℝⁿ (Gaussian
/// normalization), deterministic per `(n, count, seed)`.
pub fn sample_unit_directions(n: usize, count: usize, seed: u64) -> Vec<DVector<f64>> {
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|_| {
            loop {
                let v = gaussian_vector(n, &mut rng);
                let norm = v.norm();
                if norm > 1e-8 {
                    return v / norm;
                }
            }
        })
        .collect()
}

/// `count` hyperplanes through `p` with uniformly distributed normals,
/// deterministic per `(seed, count, dim p)`. Canonicalization flips `(ξ, t)`
/// pairs jointly, so each hyperplane still passes through `p`.
pub fn sample_hyperplanes_through(
    p: &DVector<f64>,
    count: usize,
    seed: u64,
) -> Result<Vec<AffineHyperplane>> {
    if count == 0 {
        return Err(Error::bad_param("count", "must be at least 1"));
    }
    sample_unit_directions(p.len(), count, seed)
        .into_iter()
        .map(|u| AffineHyperplane::through(u, p))
        .collect()
}

/// Deterministic quasi-uniform directions (golden-angle / Fibonacci
/// lattices); used by detectors that need a fixed direction set without a
/// seed parameter. Always includes the `±e_i` axes first so exactly-aligned
/// optima are representable.
pub fn lattice_directions(n: usize, count: usize) -> Vec<DVector<f64>> {
    let mut dirs: Vec<DVector<f64>> = Vec::with_capacity(count + 2 * n);
    for i in 0..n {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        dirs.push(v.clone());
        v[i] = -1.0;
        dirs.push(v);
    }
    match n {
        1 => {}
        2 => {
            let golden = (1.0 + 5.0_f64.sqrt()) / 2.0;
            for j in 0..count {
                let theta = 2.0 * std::f64::consts::PI * (j as f64) * golden.fract();
                dirs.push(DVector::from_vec(vec![theta.cos(), theta.sin()]));
            }
        }
        3 => {
            // Fibonacci sphere.
            let golden = (1.0 + 5.0_f64.sqrt()) / 2.0;
            for j in 0..count {
                let z = 1.0 - 2.0 * (j as f64 + 0.5) / count as f64;
                let r = (1.0 - z * z).max(0.0).sqrt();
                let phi = 2.0 * std::f64::consts::PI * (j as f64) / golden;
                dirs.push(DVector::from_vec(vec![r * phi.cos(), r * phi.sin(), z]));
            }
        }
        _ => {
            // Seeded low-cost fallback in higher dimensions; fixed seed keeps
            // the set deterministic.
            dirs.extend(sample_unit_directions(n, count, 0x5eed_d155));
        }
    }
    dirs
}

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
    fn canonical_form_flips_sign() {
        let h = AffineHyperplane::new(DVector::from_vec(vec![-2.0, 0.0, 0.0]), -4.0).unwrap();
        assert_relative_eq!(h.normal()[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(h.offset(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn chart_of_coordinate_hyperplane() {
        // ξ = e₃, t = 0 in ℝ³ → frame columns (e₁, e₂), origin 0.
        let h = AffineHyperplane::new(e(3, 2), 0.0).unwrap();
        let c = chart_of(&h);
        assert_relative_eq!(c.origin.norm(), 0.0, epsilon = 1e-15);
        assert_relative_eq!((c.frame.column(0) - e(3, 0)).norm(), 0.0, epsilon = 1e-15);
        assert_relative_eq!((c.frame.column(1) - e(3, 1)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn chart_of_shifted_coordinate_hyperplane() {
        // ξ = e₁, t = 2 in ℝ³ → origin (2,0,0), frame spans ⟨e₂, e₃⟩.
        let h = AffineHyperplane::new(e(3, 0), 2.0).unwrap();
        let c = chart_of(&h);
        assert_relative_eq!((c.origin.clone() - 2.0 * e(3, 0)).norm(), 0.0, epsilon = 1e-15);
        for j in 0..2 {
            assert!(c.frame.column(j)[0].abs() < 1e-15);
        }
    }

    #[test]
    fn chart_orthonormal_for_random_normal() {
        let dirs = sample_unit_directions(5, 8, 42);
        for u in dirs {
            let h = AffineHyperplane::new(u.clone(), 1.0).unwrap();
            let c = chart_of(&h);
            let gram = c.frame.transpose() * &c.frame;
            let err = (&gram - DMatrix::identity(4, 4)).abs().max();
            assert!(err < 1e-12, "frame not orthonormal: {err}");
            let align = (h.normal().transpose() * &c.frame).abs().max();
            assert!(align < 1e-12);
            // embed ∘ project = identity on H
            let y = DVector::from_vec(vec![0.3, -1.2, 0.7, 0.05]);
            let x = c.embed(&y);
            assert_relative_eq!((c.embed(&c.project(&x)) - &x).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn grassmann_distance_examples() {
        let h1 = AffineHyperplane::new(e(3, 0), 0.0).unwrap();
        let h2 = AffineHyperplane::new(e(3, 1), 0.0).unwrap();
        assert_relative_eq!(grassmann_distance(&h1, &h1).unwrap(), 0.0, epsilon = 1e-15);
        assert_relative_eq!(
            grassmann_distance(&h1, &h2).unwrap(),
            std::f64::consts::FRAC_PI_2,
            epsilon = 1e-15
        );
        let diag = AffineHyperplane::new(DVector::from_vec(vec![1.0, 1.0, 0.0]), 0.0).unwrap();
        assert_relative_eq!(
            grassmann_distance(&h1, &diag).unwrap(),
            std::f64::consts::FRAC_PI_4,
            epsilon = 1e-12
        );
    }

    #[test]
    fn grassmann_dimension_mismatch() {
        let h1 = AffineHyperplane::new(e(3, 0), 0.0).unwrap();
        let h2 = AffineHyperplane::new(e(4, 0), 0.0).unwrap();
        assert!(grassmann_distance(&h1, &h2).is_err());
    }

    #[test]
    fn meet_of_coordinate_planes() {
        let s1 = Subspace::span_of(&[e(3, 0), e(3, 1)], 3);
        let s2 = Subspace::span_of(&[e(3, 1), e(3, 2)], 3);
        let m = subspace_meet(&s1, &s2);
        assert_eq!(m.dim(), 1);
        assert_relative_eq!(m.basis().column(0)[1].abs(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn meet_with_itself() {
        let s = Subspace::span_of(&[e(4, 0), e(4, 2)], 4);
        let m = subspace_meet(&s, &s);
        assert_eq!(m.dim(), 2);
        for j in 0..2 {
            let v: DVector<f64> = m.basis().column(j).into();
            assert!(s.contains(&v, 1e-10));
        }
    }

    #[test]
    fn meet_of_random_subspaces() {
        // Two 3-dim subspaces of ℝ⁴ meet in 2 dimensions; every returned
        // vector must lie in both within 1e−9.
        let dirs = sample_unit_directions(4, 12, 7);
        let s1 = Subspace::span_of(&dirs[0..3], 4);
        let s2 = Subspace::span_of(&dirs[3..6], 4);
        assert_eq!(s1.dim(), 3);
        assert_eq!(s2.dim(), 3);
        let m = subspace_meet(&s1, &s2);
        assert_eq!(m.dim(), 2);
        for j in 0..m.dim() {
            let v: DVector<f64> = m.basis().column(j).into();
            assert!(s1.contains(&v, 1e-9) && s2.contains(&v, 1e-9));
        }
    }

    #[test]
    fn hyperplane_sampling_is_deterministic_and_through_p() {
        let p = DVector::from_vec(vec![0.2, -0.4, 0.9]);
        let a = sample_hyperplanes_through(&p, 16, 7).unwrap();
        let b = sample_hyperplanes_through(&p, 16, 7).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.normal(), y.normal());
            assert_eq!(x.offset(), y.offset());
            assert!(x.signed_distance(&p).abs() < 1e-12);
        }
        // p = 0 → all offsets vanish.
        for h in sample_hyperplanes_through(&DVector::zeros(3), 8, 3).unwrap() {
            assert!(h.offset().abs() < 1e-15);
        }
    }

    #[test]
    fn direction_sampling_mean_is_small() {
        // Law of large numbers: the mean of 10⁴ uniform directions is near 0.
        let dirs = sample_unit_directions(3, 10_000, 11);
        let mut mean = DVector::zeros(3);
        for d in &dirs {
            mean += d;
        }
        mean /= dirs.len() as f64;
        assert!(mean.norm() < 0.05, "mean norm {}", mean.norm());
    }

    #[test]
    fn reflection_fixing_is_involutive() {
        let p = DVector::from_vec(vec![0.1, 0.2, 0.3]);
        let fixed = Subspace::span_of(&[DVector::from_vec(vec![1.0, 1.0, 0.0])], 3);
        let negated = Subspace::span_of(&[e(3, 1), e(3, 2)], 3);
        let m = AffineMap::reflection_fixing(&p, &fixed, &negated).unwrap();
        let mm = m.compose(&m);
        let err = (&mm.linear - DMatrix::identity(3, 3)).abs().max();
        assert!(err < 1e-12);
        assert!(mm.translation.norm() < 1e-12);
        assert!((m.apply(&p) - &p).norm() < 1e-12);
    }
}
