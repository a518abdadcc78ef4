//! Orthogonal-group representations, invariance residuals, affine
//! normalization, and symmetry detectors (central, aligned reflection,
//! revolution axis).
//!
//! Residual conventions: whole-body invariance residuals are support-sup
//! norms (they metrize Hausdorff distance and are cheap in every
//! representation); section detectors use radial residuals about the fixed
//! point, which cost one boundary bisection per direction instead of a
//! boundary search. Both are length-scaled on unit-scale bodies.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::bodies::Body;
use crate::geom::{
    gaussian_vector, lattice_directions, rng_from_seed, sample_unit_directions, AffineMap,
    Subspace,
};
use crate::sections::SectionBody;
use crate::{tol, Error, Result};

/// Whether a detector searches orthogonal maps only or the full affine
/// conjugacy class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Orthogonal,
    Affine,
}

/// Canonical representation families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    /// `π_k`: the order-2 reflection negating the complement of a
    /// k-dimensional fixed subspace.
    Reflection,
    /// `ρ_k`: rotations `O(n−k) ⊕ I_k` about a k-dimensional hyperaxis.
    Rotation,
    /// The unit-quaternion action on ℝ⁴ (fixed-point free).
    Quaternion,
}

/// Parameters for [`rep_matrix`].
#[derive(Debug, Clone)]
pub enum RepParams {
    None,
    /// Seeded Haar-random rotation block for `ρ_k`.
    Seed(u64),
    /// Explicit orthogonal `(n−k)×(n−k)` block for `ρ_k`.
    Block(DMatrix<f64>),
    /// Unit quaternion for the quaternion representation.
    Quaternion([f64; 4]),
}

/// Generator of `π_k` in canonical coordinates: `diag(−I_{n−k}, I_k)`.
pub fn rep_pi(n: usize, k: usize) -> Result<DMatrix<f64>> {
    if k >= n {
        return Err(Error::bad_param("k", format!("need 0 ≤ k < n = {n}")));
    }
    let mut m = DMatrix::identity(n, n);
    for i in 0..n - k {
        m[(i, i)] = -1.0;
    }
    Ok(m)
}

/// A `ρ_k` element `O ⊕ I_k` from an explicit orthogonal block.
pub fn rep_rho(n: usize, k: usize, block: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if k >= n {
        return Err(Error::bad_param("k", format!("need 0 ≤ k < n = {n}")));
    }
    let b = n - k;
    if block.nrows() != b || block.ncols() != b {
        return Err(Error::DimensionMismatch {
            expected: b,
            got: block.nrows(),
        });
    }
    let defect = (block.transpose() * block - DMatrix::identity(b, b)).abs().max();
    if defect > 1e-10 {
        return Err(Error::bad_param("block", format!("not orthogonal (defect {defect:.3e})")));
    }
    let mut m = DMatrix::identity(n, n);
    m.view_mut((0, 0), (b, b)).copy_from(block);
    Ok(m)
}

/// Haar-random orthogonal matrix (QR of a Gaussian matrix with the sign of
/// the R diagonal fixed).
pub fn haar_orthogonal(b: usize, rng: &mut rand_chacha::ChaCha8Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(b, b, |_, _| {
        use rand::Rng;
        rng.sample::<f64, _>(rand_distr::StandardNormal)
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..b {
        if r[(j, j)] < 0.0 {
            for i in 0..b {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// `count` seeded `ρ_k` elements in canonical coordinates.
pub fn rho_k_sample(n: usize, k: usize, count: usize, seed: u64) -> Result<Vec<DMatrix<f64>>> {
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|_| {
            let block = haar_orthogonal(n - k, &mut rng);
            rep_rho(n, k, &block)
        })
        .collect()
}

/// The 4×4 matrix of left multiplication by a unit quaternion.
pub fn rep_quaternion(a: &[f64; 4]) -> Result<DMatrix<f64>> {
    let norm: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::bad_param("a", format!("not a unit quaternion (‖a‖ = {norm})")));
    }
    let [a1, a2, a3, a4] = *a;
    Ok(DMatrix::from_row_slice(
        4,
        4,
        &[
            a1, -a2, -a3, -a4, //
            a2, a1, -a4, a3, //
            a3, a4, a1, -a2, //
            a4, -a3, a2, a1,
        ],
    ))
}

/// Canonical representation matrices by kind.
pub fn rep_matrix(kind: RepKind, n: usize, k: usize, params: &RepParams) -> Result<DMatrix<f64>> {
    match kind {
        RepKind::Reflection => rep_pi(n, k),
        RepKind::Rotation => match params {
            RepParams::Block(b) => rep_rho(n, k, b),
            RepParams::Seed(seed) => {
                let mut rng = rng_from_seed(*seed);
                let block = haar_orthogonal(n - k, &mut rng);
                rep_rho(n, k, &block)
            }
            _ => Err(Error::bad_param("params", "rotation needs a block or a seed")),
        },
        RepKind::Quaternion => {
            if n != 4 {
                return Err(Error::bad_param("n", "quaternion representation lives on ℝ⁴"));
            }
            match params {
                RepParams::Quaternion(a) => rep_quaternion(a),
                _ => Err(Error::bad_param("params", "quaternion kind needs a unit quaternion")),
            }
        }
    }
}

/// A reflection- or rotation-type group action with its fixed affine
/// subspace and an optional affine conjugation (identity for orthogonal
/// actions).
#[derive(Debug, Clone)]
pub struct GroupAction {
    pub kind: RepKind,
    /// Dimension of the fixed subspace.
    pub k: usize,
    pub fixed_point: DVector<f64>,
    pub fixed_basis: Subspace,
    pub conjugation: AffineMap,
}

impl GroupAction {
    pub fn reflection(fixed_point: DVector<f64>, fixed_basis: Subspace) -> Self {
        let n = fixed_point.len();
        Self {
            kind: RepKind::Reflection,
            k: fixed_basis.dim(),
            fixed_point,
            fixed_basis,
            conjugation: AffineMap::identity(n),
        }
    }

    pub fn rotation(fixed_point: DVector<f64>, fixed_basis: Subspace) -> Self {
        let n = fixed_point.len();
        Self {
            kind: RepKind::Rotation,
            k: fixed_basis.dim(),
            fixed_point,
            fixed_basis,
            conjugation: AffineMap::identity(n),
        }
    }

    pub fn conjugated_by(mut self, map: AffineMap) -> Self {
        self.conjugation = map;
        self
    }

    fn conjugate(&self, g: AffineMap) -> Result<AffineMap> {
        let inv = self.conjugation.inverse()?;
        Ok(self.conjugation.compose(&g).compose(&inv))
    }

    /// The order-2 generator (reflection kind only): fixes
    /// `fixed_point + fixed_basis` pointwise and negates the orthogonal
    /// complement, conjugated by the stored affine map.
    pub fn generator(&self) -> Result<AffineMap> {
        if self.kind != RepKind::Reflection {
            return Err(Error::bad_param("kind", "generator() is for reflection actions"));
        }
        let g = AffineMap::reflection_fixing(
            &self.fixed_point,
            &self.fixed_basis,
            &self.fixed_basis.complement(),
        )?;
        self.conjugate(g)
    }

    /// Seeded sample of group elements. For reflections this is the single
    /// generator; for rotations, Haar-random block rotations about the
    /// fixed subspace.
    pub fn sample_elements(&self, count: usize, seed: u64) -> Result<Vec<AffineMap>> {
        match self.kind {
            RepKind::Reflection => Ok(vec![self.generator()?]),
            RepKind::Rotation => {
                let comp = self.fixed_basis.complement();
                let b = comp.dim();
                let mut rng = rng_from_seed(seed);
                let mut out = Vec::with_capacity(count);
                for _ in 0..count {
                    let block = haar_orthogonal(b, &mut rng);
                    let linear = self.fixed_basis.basis() * self.fixed_basis.basis().transpose()
                        + comp.basis() * &block * comp.basis().transpose();
                    let translation = &self.fixed_point - &linear * &self.fixed_point;
                    let g = AffineMap {
                        linear,
                        translation,
                    };
                    out.push(self.conjugate(g)?);
                }
                Ok(out)
            }
            RepKind::Quaternion => Err(Error::bad_param(
                "kind",
                "quaternion actions have no fixed subspace data",
            )),
        }
    }
}

/// Support-function invariance defect
/// `max_u |h_K(u) − h_{gK}(u)|` over seeded sampled directions, with
/// `h_{gK}(u) = h_K(Lᵀu) + ⟨v, u⟩` for `g(x) = Lx + v`.
pub fn invariance_residual(body: &Body, g: &AffineMap, dirs: usize, seed: u64) -> f64 {
    let lt = g.linear.transpose();
    sample_unit_directions(body.dim(), dirs, seed)
        .par_iter()
        .map(|u| {
            let image = body.support(&(&lt * u)) + g.translation.dot(u);
            (body.support(u) - image).abs()
        })
        .reduce(|| 0.0, f64::max)
}

/// Result of [`moment_normalize`].
#[derive(Debug, Clone)]
pub struct MomentNormalization {
    /// Map taking the body to centered, moment-whitened position (an exact
    /// ellipsoid maps onto the unit ball).
    pub map: AffineMap,
    pub body: Body,
    /// Per-coordinate centroid standard error (0 for exact moments).
    pub centroid_stderr: f64,
    pub exact: bool,
}

/// Affine normalization by the moment (covariance) ellipsoid: translates
/// the centroid to the origin and whitens the second-moment matrix, so any
/// affine symmetry fixing the centroid becomes near-orthogonal. Ellipsoids
/// use their exact moments; other bodies use seeded hit-or-miss sampling.
///
/// Scaled so that an ellipsoid maps exactly onto the unit ball
/// (`cov = Q⁻¹/(n+2)`).
pub fn moment_normalize(body: &Body, samples: usize, seed: u64) -> Result<MomentNormalization> {
    let n = body.dim();
    let (centroid, cov, stderr, exact) = if let Some((c, cov)) = body.exact_moments() {
        (c, cov, 0.0, true)
    } else {
        if samples < 1_000 {
            return Err(Error::bad_param("samples", "need at least 1000 samples"));
        }
        let (lo, hi) = body.bounding_box();
        let mut rng = rng_from_seed(seed);
        let mut pts: Vec<DVector<f64>> = Vec::new();
        for _ in 0..samples {
            let x = DVector::from_fn(n, |i, _| {
                use rand::Rng;
                let t: f64 = rng.random();
                lo[i] + t * (hi[i] - lo[i])
            });
            if body.contains(&x, 0.0) {
                pts.push(x);
            }
        }
        if pts.len() < n + 2 {
            return Err(Error::TooFewSamples(format!("{} hits", pts.len())));
        }
        let m = pts.len() as f64;
        let mean = pts.iter().fold(DVector::zeros(n), |a: DVector<f64>, p| a + p) / m;
        let mut cov = DMatrix::zeros(n, n);
        let mut var = 0.0;
        for p in &pts {
            let d = p - &mean;
            cov += &d * d.transpose();
            var += d.norm_squared();
        }
        cov /= m;
        let stderr = (var / (m * m)).sqrt();
        (mean, cov, stderr, false)
    };
    let eig = cov.clone().symmetric_eigen();
    let (lmin, lmax) = eig
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &l| (lo.min(l), hi.max(l)));
    if lmin <= 0.0 || lmax / lmin > 1e12 {
        return Err(Error::DegenerateMoment {
            cond: if lmin > 0.0 { lmax / lmin } else { f64::INFINITY },
        });
    }
    // linear = ((n+2)·cov)^{−1/2}: symmetric inverse square root.
    let scale = n as f64 + 2.0;
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / (scale * l).sqrt()));
    let linear = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
    let translation = -(&linear * &centroid);
    let map = AffineMap {
        linear,
        translation,
    };
    let image = body.affine_image(&map)?;
    Ok(MomentNormalization {
        map,
        body: image,
        centroid_stderr: stderr,
        exact,
    })
}

/// Detection verdict, serializable as the report JSON schema.
#[derive(Debug, Clone, Serialize)]
pub struct SymmetryReport {
    pub claim: String,
    pub parameters: serde_json::Map<String, serde_json::Value>,
    pub residual: f64,
    pub tol: f64,
    /// `residual ≤ tol`.
    pub verdict: bool,
    /// Set when more than 5% of the coarse search grid already passes the
    /// tolerance (non-unique optimum, e.g. every axis of a ball).
    pub multiplicity_flag: bool,
}

impl SymmetryReport {
    fn new(claim: &str, residual: f64, tol: f64) -> Self {
        Self {
            claim: claim.to_string(),
            parameters: serde_json::Map::new(),
            residual,
            tol,
            verdict: residual <= tol,
            multiplicity_flag: false,
        }
    }

    fn with_vector(mut self, key: &str, v: &DVector<f64>) -> Self {
        self.parameters
            .insert(key.to_string(), serde_json::json!(v.as_slice().to_vec()));
        self
    }
}

/// Central-symmetry detector.
///
/// The Monte Carlo centroid would seed the candidate center, but its √N
/// noise sits far above the residual floor of exactly symmetric bodies, so
/// the center is fit by least squares on `2⟨c, u⟩ ≈ h(u) − h(−u)` over the
/// sampled directions (exact for truly symmetric bodies).
pub fn detect_central(body: &Body, tol: f64, dirs: usize, seed: u64) -> Result<SymmetryReport> {
    let n = body.dim();
    let us = sample_unit_directions(n, dirs.max(2 * n), seed);
    let diffs: Vec<f64> = us
        .par_iter()
        .map(|u| body.support(u) - body.support(&(-u)))
        .collect();
    let mut ata = DMatrix::zeros(n, n);
    let mut atb = DVector::zeros(n);
    for (u, d) in us.iter().zip(&diffs) {
        ata += u * u.transpose() * 4.0;
        atb += u * (2.0 * d);
    }
    let center = ata
        .lu()
        .solve(&atb)
        .ok_or_else(|| Error::Numerical("degenerate direction set".into()))?;
    let residual = us
        .iter()
        .zip(&diffs)
        .map(|(u, d)| (d - 2.0 * center.dot(u)).abs())
        .fold(0.0_f64, f64::max);
    Ok(SymmetryReport::new("central", residual, tol).with_vector("center", &center))
}

/// Outcome of the aligned-reflection search: the best axis direction in
/// chart coordinates and its report.
#[derive(Debug, Clone)]
pub struct AlignedReflection {
    pub report: SymmetryReport,
    pub axis: DVector<f64>,
}

/// Searches for an axis direction `a ∉ W` such that the involution fixing
/// `p + ⟨a⟩` and negating the W-component (`x − p = s·a + w ↦ s·a − w`)
/// leaves the section invariant.
///
/// Orthogonal mode constrains `a ⊥ W`, which pins the axis up to sign;
/// affine mode sweeps a coarse grid over admissible directions (π/180
/// resolution for planar sections) and refines the best candidate by
/// golden-section search to 1e−10 in the angle parameter.
pub fn detect_aligned_reflection(
    section: &SectionBody,
    p: &DVector<f64>,
    w: &Subspace,
    mode: Mode,
    tol: f64,
) -> Result<AlignedReflection> {
    detect_aligned_reflection_body(&section.body, p, w, mode, tol)
}

/// Same search on a bare body (already in section coordinates).
pub fn detect_aligned_reflection_body(
    body: &Body,
    p: &DVector<f64>,
    w: &Subspace,
    mode: Mode,
    tol: f64,
) -> Result<AlignedReflection> {
    let m = body.dim();
    if w.ambient_dim() != m || p.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: w.ambient_dim().min(p.len()),
        });
    }
    if w.dim() != m - 1 {
        return Err(Error::bad_param("w", "hyperplane of reflection must have codimension 1"));
    }
    if body.interior_margin(p) <= tol::INTERIOR_MARGIN {
        return Err(Error::NotInterior);
    }
    let g = w.complement();
    if g.dim() != 1 {
        return Err(Error::Numerical("degenerate reflection hyperplane".into()));
    }
    let g: DVector<f64> = g.basis().column(0).into();
    let dirs = lattice_directions(m, 96);
    let residual_of = |a: &DVector<f64>| reflection_residual(body, p, a, &g, &dirs);

    match mode {
        Mode::Orthogonal => {
            let residual = residual_of(&g);
            let report = SymmetryReport::new("aligned reflection (orthogonal)", residual, tol)
                .with_vector("axis", &g);
            Ok(AlignedReflection { report, axis: g })
        }
        Mode::Affine if m == 2 => {
            let w0: DVector<f64> = w.basis().column(0).into();
            let step = std::f64::consts::PI / 180.0;
            let half = std::f64::consts::FRAC_PI_2 - 2.0 * step;
            let steps = (2.0 * half / step) as usize;
            let evals: Vec<(f64, f64)> = (0..=steps)
                .into_par_iter()
                .map(|i| {
                    let theta = -half + i as f64 * step;
                    let a = &g * theta.cos() + &w0 * theta.sin();
                    (residual_of(&a), theta)
                })
                .collect();
            let mut best = (f64::INFINITY, 0.0_f64);
            let mut passing = 0usize;
            for &(r, theta) in &evals {
                if r < tol {
                    passing += 1;
                }
                if r < best.0 || (r == best.0 && theta < best.1) {
                    best = (r, theta);
                }
            }
            // golden-section refinement to 1e−10 in θ
            let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
            let f = |t: f64| residual_of(&(&g * t.cos() + &w0 * t.sin()));
            let (mut lo, mut hi) = (best.1 - step, best.1 + step);
            let (mut x1, mut x2) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
            let (mut f1, mut f2) = (f(x1), f(x2));
            for _ in 0..80 {
                if f1 < f2 {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - phi * (hi - lo);
                    f1 = f(x1);
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + phi * (hi - lo);
                    f2 = f(x2);
                }
                if hi - lo < 1e-10 {
                    break;
                }
            }
            let theta = 0.5 * (lo + hi);
            let a = (&g * theta.cos() + &w0 * theta.sin()).normalize();
            let residual = residual_of(&a).min(best.0);
            let mut report = SymmetryReport::new("aligned reflection (affine)", residual, tol)
                .with_vector("axis", &a);
            report.multiplicity_flag = passing * 20 > steps + 1;
            report
                .parameters
                .insert("theta".into(), serde_json::json!(theta));
            Ok(AlignedReflection { report, axis: a })
        }
        Mode::Affine => {
            // Higher-dimensional sections: coarse lattice over admissible
            // directions, then deterministic shrinking perturbation.
            let coarse = lattice_directions(m, 600);
            let total = coarse.len();
            let evals: Vec<(f64, DVector<f64>)> = coarse
                .into_par_iter()
                .filter(|a| a.dot(&g).abs() > 0.05)
                .map(|a| (residual_of(&a), a))
                .collect();
            let mut best: Option<(f64, DVector<f64>)> = None;
            let mut passing = 0usize;
            for (r, a) in evals {
                if r < tol {
                    passing += 1;
                }
                match &best {
                    Some((rb, _)) if *rb <= r => {}
                    _ => best = Some((r, a)),
                }
            }
            let (mut r_best, mut a_best) =
                best.ok_or_else(|| Error::Numerical("empty search grid".into()))?;
            let mut rng = rng_from_seed(0x7e41ec7);
            let mut sigma = 0.3;
            while sigma > 1e-9 {
                let mut improved = false;
                for _ in 0..24 {
                    let cand = (&a_best + gaussian_vector(m, &mut rng) * sigma).normalize();
                    if cand.dot(&g).abs() < 0.02 {
                        continue;
                    }
                    let r = residual_of(&cand);
                    if r < r_best {
                        r_best = r;
                        a_best = cand;
                        improved = true;
                    }
                }
                if !improved {
                    sigma *= 0.5;
                }
            }
            let mut report = SymmetryReport::new("aligned reflection (affine)", r_best, tol)
                .with_vector("axis", &a_best);
            report.multiplicity_flag = passing * 20 > total;
            Ok(AlignedReflection {
                report,
                axis: a_best,
            })
        }
    }
}

/// Radial invariance defect of the oblique reflection with axis `a` and
/// negated hyperplane `W = g^⊥` about `p`.
fn reflection_residual(
    body: &Body,
    p: &DVector<f64>,
    a: &DVector<f64>,
    g: &DVector<f64>,
    dirs: &[DVector<f64>],
) -> f64 {
    let m = body.dim();
    let ga = g.dot(a);
    if ga.abs() < 1e-9 {
        return f64::INFINITY;
    }
    // M = 2·a gᵀ/(gᵀa) − I fixes ⟨a⟩ and negates W; M is its own inverse.
    let refl = a * g.transpose() * (2.0 / ga) - DMatrix::identity(m, m);
    let mut worst = 0.0_f64;
    for v in dirs {
        let rv = body.radial_unchecked(p, v);
        let mv = &refl * v;
        let norm = mv.norm();
        let r_img = body.radial_unchecked(p, &(&mv / norm)) / norm;
        worst = worst.max((rv - r_img).abs());
    }
    worst
}

/// Outcome of the revolution-axis search.
#[derive(Debug, Clone)]
pub struct RevolutionAxis {
    pub report: SymmetryReport,
    pub axis: DVector<f64>,
}

/// Revolution residual of a candidate axis `d` through `p`: the largest
/// spread (max − min) of the radial function over sampled latitude circles
/// around `d`.
pub fn revolution_residual(
    body: &Body,
    p: &DVector<f64>,
    d: &DVector<f64>,
    latitudes: usize,
    longitudes: usize,
) -> f64 {
    let n = body.dim();
    let d = d.normalize();
    let mut frame: Vec<DVector<f64>> = Vec::with_capacity(n - 1);
    for i in 0..n {
        let mut e = DVector::zeros(n);
        e[i] = 1.0;
        let mut t = &e - &d * d.dot(&e);
        for prev in &frame {
            let pd: f64 = prev.dot(&t);
            t -= prev * pd;
        }
        let norm = t.norm();
        if norm > 1e-8 {
            frame.push(t / norm);
        }
        if frame.len() == n - 1 {
            break;
        }
    }
    let mut worst = 0.0_f64;
    for j in 0..latitudes {
        let theta = std::f64::consts::PI * (j as f64 + 0.5) / latitudes as f64;
        let (ct, st) = (theta.cos(), theta.sin());
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for l in 0..longitudes {
            let phi = 2.0 * std::f64::consts::PI * l as f64 / longitudes as f64;
            let u = (&d * ct + (&frame[0] * phi.cos() + &frame[1] * phi.sin()) * st).normalize();
            let r = body.radial_unchecked(p, &u);
            lo = lo.min(r);
            hi = hi.max(r);
            if n > 3 {
                // sample a second sweep plane so asymmetries hiding off the
                // first tangent plane are seen as well
                let alt = (&d * ct
                    + (&frame[n - 3] * phi.cos() + &frame[n - 2] * phi.sin()) * st)
                    .normalize();
                let r_alt = body.radial_unchecked(p, &alt);
                lo = lo.min(r_alt);
                hi = hi.max(r_alt);
            }
        }
        worst = worst.max(hi - lo);
    }
    worst
}

/// Searches for an axis of revolution through `p`: coarse spherical grid
/// (≥ 10³ nodes plus the coordinate axes) followed by deterministic
/// shrinking local refinement. Reports the best direction, its residual and
/// a non-uniqueness flag when more than 5% of the grid already passes.
pub fn detect_revolution_axis(
    body: &Body,
    p: &DVector<f64>,
    tol: f64,
    grid: usize,
    seed: u64,
) -> Result<RevolutionAxis> {
    let n = body.dim();
    if body.interior_margin(p) <= tol::INTERIOR_MARGIN {
        return Err(Error::NotInterior);
    }
    let nodes = lattice_directions(n, grid.max(1000));
    let total = nodes.len();
    let coarse: Vec<(f64, DVector<f64>)> = nodes
        .into_par_iter()
        .map(|d| (revolution_residual(body, p, &d, 8, 16), d))
        .collect();
    let mut passing = 0usize;
    let mut best: Option<(f64, DVector<f64>)> = None;
    for (r, d) in coarse {
        if r < tol {
            passing += 1;
        }
        // deterministic argmin: tie-break lexicographically on the direction
        let better = match &best {
            None => true,
            Some((rb, db)) => r < *rb || (r == *rb && lex_less(&d, db)),
        };
        if better {
            best = Some((r, d));
        }
    }
    let (_, mut d_best) = best.ok_or_else(|| Error::Numerical("empty grid".into()))?;
    let fine = |d: &DVector<f64>| revolution_residual(body, p, d, 12, 24);
    let mut r_best = fine(&d_best);
    let mut rng = rng_from_seed(seed);
    let mut sigma = 0.2;
    while sigma > 1e-9 {
        let mut improved = false;
        for _ in 0..16 {
            let cand = (&d_best + gaussian_vector(n, &mut rng) * sigma).normalize();
            let r = fine(&cand);
            if r < r_best {
                r_best = r;
                d_best = cand;
                improved = true;
            }
        }
        if !improved {
            sigma *= 0.5;
        }
    }
    let mut report =
        SymmetryReport::new("revolution axis", r_best, tol).with_vector("axis", &d_best);
    report.multiplicity_flag = passing * 20 > total;
    Ok(RevolutionAxis {
        report,
        axis: d_best,
    })
}

fn lex_less(a: &DVector<f64>, b: &DVector<f64>) -> bool {
    for (x, y) in a.iter().zip(b.iter()) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{gallery, GalleryParams};
    use crate::geom::{chart_of, AffineHyperplane};
    use crate::sections::section;
    use approx::assert_relative_eq;

    fn e(n: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        v
    }

    #[test]
    fn pi_k_block_patterns() {
        let m = rep_pi(4, 3).unwrap();
        let expect = DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, 1.0, 1.0, 1.0]));
        assert_eq!(m, expect);
        let m = rep_pi(4, 0).unwrap();
        assert_eq!(m, -DMatrix::<f64>::identity(4, 4));
        assert!(rep_pi(3, 3).is_err());
    }

    #[test]
    fn pi_k_fixed_subspace_dimension() {
        for n in 2..=6 {
            for k in 0..n {
                let g = rep_pi(n, k).unwrap();
                assert!(((&g * &g) - DMatrix::<f64>::identity(n, n)).abs().max() < 1e-12);
                let fixed = (0..n).filter(|&i| g[(i, i)] > 0.0).count();
                assert_eq!(fixed, k);
            }
        }
    }

    #[test]
    fn quaternion_identity_and_orbit() {
        let id = rep_quaternion(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((id - DMatrix::<f64>::identity(4, 4)).abs().max() < 1e-15);
        let mut rng = rng_from_seed(4);
        for _ in 0..100 {
            let v = gaussian_vector(4, &mut rng).normalize();
            let m = rep_quaternion(&[v[0], v[1], v[2], v[3]]).unwrap();
            let x = gaussian_vector(4, &mut rng);
            assert_relative_eq!((&m * &x).norm(), x.norm(), epsilon = 1e-12);
        }
        assert!(rep_quaternion(&[1.0, 1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn invariance_residuals_of_symmetric_bodies() {
        let ball = Body::unit_ball(3);
        let mut rng = rng_from_seed(9);
        let q = haar_orthogonal(3, &mut rng);
        let g = AffineMap::linear_only(q).unwrap();
        assert!(invariance_residual(&ball, &g, 64, 1) < 1e-12);

        let cube = gallery("cube", &GalleryParams::new()).unwrap();
        let rot = DMatrix::from_row_slice(3, 3, &[0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let g = AffineMap::linear_only(rot).unwrap();
        assert!(invariance_residual(&cube, &g, 64, 2) < 1e-12);
    }

    #[test]
    fn perturbed_ball_breaks_x1_reflection() {
        let pb = gallery("perturbed_ball", &GalleryParams::new()).unwrap();
        let flip = DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, 1.0, 1.0]));
        let g = AffineMap::linear_only(flip).unwrap();
        assert!(invariance_residual(&pb, &g, 64, 3) > 1e-3);
    }

    #[test]
    fn conjugation_covariance_on_exact_symmetries() {
        // the affine-invariance of the notion: exact symmetries stay exact
        // under volume-preserving conjugation
        let cube = gallery("cube", &GalleryParams::new()).unwrap();
        let rot = DMatrix::from_row_slice(3, 3, &[0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let g = AffineMap::linear_only(rot).unwrap();
        let mut shear = DMatrix::identity(3, 3);
        shear[(0, 1)] = 0.8;
        shear[(1, 2)] = -0.3;
        let a = AffineMap::linear_only(shear).unwrap();
        assert_relative_eq!(a.det().abs(), 1.0, epsilon = 1e-12);
        let conj = a.compose(&g).compose(&a.inverse().unwrap());
        let r1 = invariance_residual(&cube, &g, 64, 5);
        let r2 = invariance_residual(&cube.affine_image(&a).unwrap(), &conj, 64, 5);
        assert!((r1 - r2).abs() < 1e-8, "r1 {r1} r2 {r2}");
    }

    #[test]
    fn moment_normalize_ellipsoid_is_unit_ball() {
        let q = DMatrix::from_row_slice(2, 2, &[3.0, 0.4, 0.4, 1.0]);
        let el = Body::ellipsoid(
            crate::bodies::Ellipsoid::new(DVector::from_vec(vec![1.0, -2.0]), q).unwrap(),
        );
        let norm = moment_normalize(&el, 1000, 1).unwrap();
        assert!(norm.exact);
        for u in sample_unit_directions(2, 16, 2) {
            assert_relative_eq!(norm.body.support(&u), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn moment_normalize_stretched_cube() {
        let cube = gallery("cube", &GalleryParams::new()).unwrap();
        let stretch = AffineMap::linear_only(DMatrix::from_diagonal(&DVector::from_vec(vec![
            2.0, 1.0, 1.0,
        ])))
        .unwrap();
        let stretched = cube.affine_image(&stretch).unwrap();
        let norm = moment_normalize(&stretched, 200_000, 7).unwrap();
        let hx = norm.body.support(&e(3, 0));
        let hy = norm.body.support(&e(3, 1));
        assert!((hx - hy).abs() < 0.05, "hx {hx} hy {hy}");
    }

    #[test]
    fn detect_central_ball_and_translated_cube() {
        let ball = Body::unit_ball(3);
        let r = detect_central(&ball, 1e-6, 64, 1).unwrap();
        assert!(r.verdict && r.residual < 1e-6);

        let cube = gallery("cube", &GalleryParams::new()).unwrap();
        let shift = AffineMap::translation_only(DVector::from_vec(vec![0.3, -0.2, 0.5]));
        let moved = cube.affine_image(&shift).unwrap();
        let r = detect_central(&moved, 1e-6, 64, 2).unwrap();
        assert!(r.verdict);
        let c = r.parameters["center"].as_array().unwrap();
        assert_relative_eq!(c[0].as_f64().unwrap(), 0.3, epsilon = 1e-8);
        assert_relative_eq!(c[1].as_f64().unwrap(), -0.2, epsilon = 1e-8);
        assert_relative_eq!(c[2].as_f64().unwrap(), 0.5, epsilon = 1e-8);
    }

    #[test]
    fn detect_central_on_double_disk_sections() {
        let dd = gallery("double_disk", &GalleryParams::new()).unwrap();
        let u = DVector::from_vec(vec![0.3, 0.5, 0.7]).normalize();
        let h0 = AffineHyperplane::new(u.clone(), 0.0).unwrap();
        let s0 = section(&dd, &h0).unwrap().unwrap();
        let r0 = detect_central(&s0.body, 1e-6, 48, 3).unwrap();
        assert!(r0.verdict, "central section residual {}", r0.residual);
        let h1 = AffineHyperplane::new(u, 0.35).unwrap();
        let s1 = section(&dd, &h1).unwrap().unwrap();
        let r1 = detect_central(&s1.body, 1e-6, 48, 3).unwrap();
        assert!(!r1.verdict && r1.residual > 1e-3, "residual {}", r1.residual);
    }

    #[test]
    fn aligned_reflection_on_disk_any_direction() {
        let ball = Body::unit_ball(3);
        let h = AffineHyperplane::new(e(3, 2), 0.0).unwrap();
        let s = section(&ball, &h).unwrap().unwrap();
        let w = Subspace::span_of(&[DVector::from_vec(vec![0.6, 0.8])], 2);
        let p = DVector::zeros(2);
        let found = detect_aligned_reflection(&s, &p, &w, Mode::Orthogonal, 1e-8).unwrap();
        assert!(found.report.verdict, "residual {}", found.report.residual);
        let w0: DVector<f64> = w.basis().column(0).into();
        assert!(found.axis.dot(&w0).abs() < 1e-12);
    }

    #[test]
    fn aligned_reflection_cube_parallelogram_section() {
        // dominant-x₃ section of the cube is a parallelogram with one
        // diagonal parallel to the trace of the face-parallel plane
        // {x₁ = 0}; affine mode finds that exact oblique reflection.
        let cube = gallery("cube", &GalleryParams::new()).unwrap();
        let normal = DVector::from_vec(vec![1.0, 1.0, 4.0]).normalize();
        let h = AffineHyperplane::new(normal, 0.0).unwrap();
        let s = section(&cube, &h).unwrap().unwrap();
        let t_plane = Subspace::span_of(&[e(3, 1), e(3, 2)], 3); // T = {x₁=0}
        let trace = crate::geom::subspace_meet(&t_plane, &Subspace::hyperplane(&h));
        assert_eq!(trace.dim(), 1);
        let trace_dir: DVector<f64> = trace.basis().column(0).into();
        let w_chart = Subspace::span_of(&[chart_of(&h).project_dir(&trace_dir)], 2);
        let p = DVector::zeros(2);
        let found = detect_aligned_reflection(&s, &p, &w_chart, Mode::Affine, 1e-6).unwrap();
        assert!(
            found.report.verdict,
            "parallelogram section should pass, residual {}",
            found.report.residual
        );
        let found_orth =
            detect_aligned_reflection(&s, &p, &w_chart, Mode::Orthogonal, 1e-6).unwrap();
        assert!(!found_orth.report.verdict);
    }

    #[test]
    fn aligned_reflection_fails_on_perturbed_ball_section() {
        // normal nearly orthogonal to e₁ keeps the cubic asymmetry inside
        // the section plane; a misaligned W then admits no reflection
        let pb = gallery("perturbed_ball", &GalleryParams::new()).unwrap();
        let normal = DVector::from_vec(vec![0.2, 0.5, 0.8]).normalize();
        let h = AffineHyperplane::new(normal, 0.0).unwrap();
        let s = section(&pb, &h).unwrap().unwrap();
        // W = trace of the coordinate plane {x₃ = 0}, far from the section's
        // true mirror trace
        let trace = crate::geom::subspace_meet(
            &Subspace::span_of(&[e(3, 0), e(3, 1)], 3),
            &Subspace::hyperplane(&h),
        );
        let trace_dir: DVector<f64> = trace.basis().column(0).into();
        let w = Subspace::span_of(&[chart_of(&h).project_dir(&trace_dir)], 2);
        let p = DVector::zeros(2);
        let found = detect_aligned_reflection(&s, &p, &w, Mode::Affine, 1e-6).unwrap();
        assert!(!found.report.verdict);
        assert!(
            found.report.residual > 1e-3,
            "residual {}",
            found.report.residual
        );
    }

    #[test]
    fn revolution_axis_of_spherocylinder() {
        let sc = gallery("spherocylinder", &GalleryParams::new()).unwrap();
        let p = DVector::from_vec(vec![0.0, 0.0, 0.2]);
        let found = detect_revolution_axis(&sc, &p, 1e-8, 1000, 1).unwrap();
        assert!(found.report.verdict, "residual {}", found.report.residual);
        let angle = found.axis.dot(&e(3, 2)).abs().min(1.0).acos();
        assert!(angle < 1e-6, "axis error {angle} rad");
    }

    #[test]
    fn revolution_axis_of_ball_is_non_unique() {
        let ball = Body::unit_ball(3);
        let found = detect_revolution_axis(&ball, &DVector::zeros(3), 1e-8, 1000, 2).unwrap();
        assert!(found.report.verdict);
        assert!(found.report.multiplicity_flag);
    }

    #[test]
    fn cube_has_no_revolution_axis() {
        let cube = gallery("cube", &GalleryParams::new()).unwrap();
        let found = detect_revolution_axis(&cube, &DVector::zeros(3), 1e-8, 1000, 3).unwrap();
        assert!(!found.report.verdict);
        assert!(found.report.residual > 1e-2);
    }

    #[test]
    fn perturbed_ball_is_a_revolution_body_about_e1() {
        // the cubic perturbation is rotationally invariant about e₁: the
        // detector correctly finds that axis through the origin, while any
        // off-axis base point admits no axis at all
        let pb = gallery("perturbed_ball", &GalleryParams::new()).unwrap();
        let found = detect_revolution_axis(&pb, &DVector::zeros(3), 1e-6, 1000, 4).unwrap();
        assert!(found.report.verdict, "residual {}", found.report.residual);
        let angle = found.axis.dot(&e(3, 0)).abs().min(1.0).acos();
        assert!(angle < 1e-4, "axis error {angle}");
        let p = DVector::from_vec(vec![0.0, 0.3, 0.0]);
        let found = detect_revolution_axis(&pb, &p, 1e-6, 1000, 5).unwrap();
        assert!(!found.report.verdict);
        assert!(found.report.residual > 1e-3);
    }

    #[test]
    fn group_action_invariants() {
        let p = DVector::from_vec(vec![0.1, 0.2, 0.3]);
        let fixed = Subspace::span_of(&[e(3, 2)], 3);
        let act = GroupAction::reflection(p.clone(), fixed.clone());
        let g = act.generator().unwrap();
        let gg = g.compose(&g);
        assert!((&gg.linear - DMatrix::<f64>::identity(3, 3)).abs().max() < 1e-12);
        assert!((g.apply(&(&p + e(3, 2))) - (&p + e(3, 2))).norm() < 1e-12);

        let act = GroupAction::rotation(p.clone(), fixed);
        for el in act.sample_elements(5, 7).unwrap() {
            let defect = (el.linear.transpose() * &el.linear - DMatrix::<f64>::identity(3, 3))
                .abs()
                .max();
            assert!(defect < 1e-12);
            let q = &p + e(3, 2) * 2.0;
            assert!((el.apply(&q) - &q).norm() < 1e-12);
        }
    }

    #[test]
    fn rho_group_common_fixed_subspace_dimension() {
        // a single ρ_k element may fix more than k dimensions (SO(3)
        // rotations keep an axis); the group's common fixed subspace is
        // exactly k-dimensional
        for n in 3..=6usize {
            for k in 0..n - 1 {
                let els = rho_k_sample(n, k, 3, 42).unwrap();
                let mut fixed: Option<Subspace> = None;
                for m in &els {
                    let fs = fixed_space(m);
                    fixed = Some(match fixed {
                        None => fs,
                        Some(prev) => crate::geom::subspace_meet(&prev, &fs),
                    });
                }
                assert_eq!(fixed.unwrap().dim(), k, "n={n} k={k}");
            }
        }
    }

    fn fixed_space(m: &DMatrix<f64>) -> Subspace {
        let n = m.nrows();
        let a = m - DMatrix::<f64>::identity(n, n);
        let svd = a.svd(false, true);
        let v_t = svd.v_t.unwrap();
        let smax = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
        let mut vecs = Vec::new();
        for i in 0..n {
            if svd.singular_values[i] <= 1e-9 * smax.max(1.0) {
                vecs.push(v_t.row(i).transpose());
            }
        }
        Subspace::span_of(&vecs, n)
    }
}
