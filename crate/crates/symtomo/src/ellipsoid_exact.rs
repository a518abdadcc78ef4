//! Closed-form ellipsoid algebra: exact section quadratic forms, section
//! centroids, rank-one-update characteristic polynomials, eigenvalue
//! clustering, the common-root test for revolution spectra, and the axis
//! predicates used when passing between affine and orthogonal symmetry.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;

use crate::bodies::Ellipsoid;
use crate::geom::{chart_of, rng_from_seed, sample_unit_directions, AffineHyperplane, Subspace};
use crate::poly::Polynomial;
use crate::{Error, Result};

/// Exact section `E ∩ H` as an (n−1)-dimensional ellipsoid
/// `{(y−y₀)ᵀ B (y−y₀) ≤ 1}` in the chart of `H`. Returns `None` when the
/// hyperplane misses or merely grazes the ellipsoid.
pub fn section_quadratic_form(
    e: &Ellipsoid,
    h: &AffineHyperplane,
) -> Result<Option<(DMatrix<f64>, DVector<f64>)>> {
    if e.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: e.dim(),
            got: h.dim(),
        });
    }
    let chart = chart_of(h);
    let f = &chart.frame;
    let d = &chart.origin - e.center();
    let b0 = f.transpose() * e.shape() * f;
    let rhs = f.transpose() * (e.shape() * &d);
    let b0_inv = b0
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("degenerate section form".into()))?;
    let y0 = -(&b0_inv * &rhs);
    let v0 = (d.transpose() * e.shape() * &d)[(0, 0)] - (rhs.transpose() * &b0_inv * &rhs)[(0, 0)];
    let scale = 1.0 - v0;
    if scale <= 1e-12 {
        return Ok(None);
    }
    Ok(Some((b0 / scale, y0)))
}

/// Exact centroid of the section of `A·𝔹ⁿ + b` by `{⟨ξ, x⟩ = t}`:
/// `((t − ξᵀb) / (ξᵀ A Aᵀ ξ)) · A Aᵀ ξ + b`.
pub fn section_centroid(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    xi: &DVector<f64>,
    t: f64,
) -> Result<DVector<f64>> {
    let n = b.len();
    if a.nrows() != n || a.ncols() != n || xi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.nrows(),
        });
    }
    let xin = xi.normalize();
    let tn = t / xi.norm();
    let aat_xi = a * (a.transpose() * &xin);
    let denom = xin.dot(&aat_xi);
    if denom <= 0.0 {
        return Err(Error::bad_param("a", "singular factor matrix"));
    }
    let offset = tn - xin.dot(b);
    if offset * offset >= denom {
        return Err(Error::EmptySection);
    }
    Ok(&aat_xi * (offset / denom) + b)
}

/// Characteristic polynomial of the central section form of the ellipsoid
/// `xᵀ diag(a) x ≤ 1` cut by `u^⊥`, expanded as
/// `Σᵢ uᵢ² Πⱼ≠ᵢ (aⱼ − λ)` and normalized so the leading coefficient is
/// `(−1)^{n−1}`.
pub fn wa_charpoly(a: &[f64], u: &DVector<f64>) -> Result<Polynomial> {
    let n = a.len();
    if u.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: u.len(),
        });
    }
    if a.iter().any(|&ai| ai <= 0.0) {
        return Err(Error::bad_param("a", "diagonal entries must be positive"));
    }
    let weight: f64 = u.iter().map(|x| x * x).sum();
    if weight < 1e-300 {
        return Err(Error::bad_param("u", "zero direction"));
    }
    let mut acc = Polynomial::zero();
    for i in 0..n {
        let roots: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| a[j]).collect();
        // Πⱼ≠ᵢ (aⱼ − λ) = (−1)^{n−1} Π (λ − aⱼ)
        let sign = if (n - 1) % 2 == 0 { 1.0 } else { -1.0 };
        let term = Polynomial::from_roots(&roots, sign);
        acc = acc.add_scaled(&term, u[i] * u[i] / weight);
    }
    Ok(acc)
}

/// Sorted eigenvalues of a symmetric matrix and their single-linkage
/// clusters at a gap threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenClusters {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Consecutive cluster sizes (partition of `values`).
    pub cluster_sizes: Vec<usize>,
    pub max_multiplicity: usize,
}

impl EigenClusters {
    pub fn cluster_means(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.cluster_sizes.len());
        let mut k = 0;
        for &len in &self.cluster_sizes {
            let sum: f64 = self.values[k..k + len].iter().sum();
            out.push(sum / len as f64);
            k += len;
        }
        out
    }

    /// Smallest gap between consecutive cluster means (∞ for one cluster).
    pub fn min_gap(&self) -> f64 {
        let means = self.cluster_means();
        means
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

/// Single-linkage clustering of the spectrum of a symmetric matrix: a new
/// cluster starts wherever the gap between consecutive sorted eigenvalues
/// exceeds `cluster_tol`.
pub fn eigen_clusters(m: &DMatrix<f64>, cluster_tol: f64) -> Result<EigenClusters> {
    let asym = (m - m.transpose()).abs().max();
    if asym > 1e-10 * m.abs().max().max(1.0) {
        return Err(Error::bad_param("m", format!("not symmetric (defect {asym:.3e})")));
    }
    let sym = (m + m.transpose()) * 0.5;
    let mut values: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(cluster_sorted(&values, cluster_tol))
}

pub(crate) fn cluster_sorted(values: &[f64], cluster_tol: f64) -> EigenClusters {
    let mut cluster_sizes = Vec::new();
    let mut current = 0usize;
    for i in 0..values.len() {
        if current == 0 {
            current = 1;
        } else if values[i] - values[i - 1] <= cluster_tol {
            current += 1;
        } else {
            cluster_sizes.push(current);
            current = 1;
        }
    }
    if current > 0 {
        cluster_sizes.push(current);
    }
    let max_multiplicity = cluster_sizes.iter().copied().max().unwrap_or(0);
    EigenClusters {
        values: values.to_vec(),
        cluster_sizes,
        max_multiplicity,
    }
}

/// Scale-normalized multiplicity defect: `max_{j<m} |f⁽ʲ⁾(z)|` after
/// dividing `f` by its largest coefficient.
fn multiplicity_defect(f: &Polynomial, z: Complex<f64>, m: usize) -> f64 {
    let scale = f.max_coeff().max(1e-300);
    let mut g = f.scale(1.0 / scale);
    let mut worst: f64 = 0.0;
    for _ in 0..m {
        worst = worst.max(g.eval_complex(z).norm());
        g = g.derivative();
    }
    worst
}

/// Searches for a common root of multiplicity `m` shared by all
/// polynomials: clusters the pooled roots of every input and tests cluster
/// centers for `max_{i, j<m} |fᵢ⁽ʲ⁾(z)| < root_tol` (coefficients
/// normalized per polynomial). Returns the best such root, if any.
pub fn common_root_multiplicity(
    polys: &[Polynomial],
    m: usize,
    root_tol: f64,
) -> Result<Option<Complex<f64>>> {
    if polys.is_empty() {
        return Err(Error::bad_param("polys", "empty polynomial list"));
    }
    if m < 1 {
        return Err(Error::bad_param("m", "multiplicity must be ≥ 1"));
    }
    let mut pool: Vec<Complex<f64>> = Vec::new();
    for f in polys {
        pool.extend(f.roots());
    }
    if pool.is_empty() {
        return Ok(None);
    }
    // Single-linkage clusters in the complex plane.
    let scale = pool.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
    let radius = 1e-4 * scale;
    let mut candidates: Vec<Complex<f64>> = Vec::new();
    let mut used = vec![false; pool.len()];
    for i in 0..pool.len() {
        if used[i] {
            continue;
        }
        let mut members = vec![pool[i]];
        used[i] = true;
        let mut grew = true;
        while grew {
            grew = false;
            for j in 0..pool.len() {
                if !used[j] && members.iter().any(|z| (z - pool[j]).norm() < radius) {
                    members.push(pool[j]);
                    used[j] = true;
                    grew = true;
                }
            }
        }
        let mean = members.iter().sum::<Complex<f64>>() / members.len() as f64;
        candidates.push(mean);
    }
    let mut best: Option<(f64, Complex<f64>)> = None;
    for z0 in candidates {
        // Cluster means of multiple roots carry O(√ε) noise; a common root
        // of multiplicity m is a simple root of f⁽ᵐ⁻¹⁾, so Newton on that
        // derivative recovers full precision.
        let mut z = z0;
        let fm1 = {
            let mut g = polys[0].scale(1.0 / polys[0].max_coeff().max(1e-300));
            for _ in 0..m - 1 {
                g = g.derivative();
            }
            g
        };
        let fm2 = fm1.derivative();
        for _ in 0..30 {
            let f = fm1.eval_complex(z);
            let df = fm2.eval_complex(z);
            if df.norm() < 1e-300 {
                break;
            }
            let step = f / df;
            z -= step;
            if step.norm() < 1e-15 * (1.0 + z.norm()) {
                break;
            }
        }
        if (z - z0).norm() > radius {
            z = z0; // polish wandered off; keep the raw cluster center
        }
        let defect = polys
            .iter()
            .map(|f| multiplicity_defect(f, z, m))
            .fold(0.0_f64, f64::max);
        if defect < root_tol {
            match &best {
                Some((d, _)) if *d <= defect => {}
                _ => best = Some((defect, z)),
            }
        }
    }
    Ok(best.map(|(_, z)| z))
}

/// Brute-force side of the common-root lemma: samples convex combinations
/// with Dirichlet(1,…,1) weights and checks that every combination has some
/// root of multiplicity ≥ `m` (derivative smallness at one of its roots).
pub fn convex_combination_root_oracle(
    polys: &[Polynomial],
    m: usize,
    grid: usize,
    seed: u64,
    root_tol: f64,
) -> Result<bool> {
    if grid < 100 {
        return Err(Error::bad_param("grid", "need at least 100 sampled combinations"));
    }
    if polys.is_empty() {
        return Err(Error::bad_param("polys", "empty polynomial list"));
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..grid {
        // Dirichlet(1,…,1) via normalized exponentials.
        let mut w: Vec<f64> = (0..polys.len())
            .map(|_| -(rng.random::<f64>().max(1e-300)).ln())
            .collect();
        let total: f64 = w.iter().sum();
        for wi in &mut w {
            *wi /= total;
        }
        let mut combo = Polynomial::zero();
        for (f, &wi) in polys.iter().zip(&w) {
            combo = combo.add_scaled(f, wi);
        }
        let has_multiple_root = combo
            .roots()
            .into_iter()
            .any(|z| multiplicity_defect(&combo, z, m) < root_tol);
        if !has_multiple_root {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The two candidate axis spans compared when deciding whether the affine
/// axis of a section is compatible with an orthogonal one:
/// `w₁ = ((AᵀA)⁻¹h·h)·l − (l·h)·(AᵀA)⁻¹h` and
/// `w₂ = AᵀA·l − (AᵀA·l·h)·h`.
#[derive(Debug, Clone)]
pub struct Eq16Axis {
    pub w1: DVector<f64>,
    pub w2: DVector<f64>,
    pub parallel: bool,
    /// Set when one of the spans collapses (`l = h` an eigenvector case).
    pub degenerate: bool,
}

pub fn eq16_axis(a: &DMatrix<f64>, l: &DVector<f64>, h: &DVector<f64>) -> Result<Eq16Axis> {
    let n = l.len();
    if a.nrows() != n || a.ncols() != n || h.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.nrows(),
        });
    }
    let l = l.normalize();
    let h = h.normalize();
    let ata = a.transpose() * a;
    let ata_inv = ata
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::bad_param("a", "singular matrix"))?;
    let ainv_h = &ata_inv * &h;
    let w1 = &l * h.dot(&ainv_h) - &ainv_h * l.dot(&h);
    let ata_l = &ata * &l;
    let w2 = &ata_l - &h * ata_l.dot(&h);
    let (n1, n2) = (w1.norm(), w2.norm());
    if n1 * n2 < 1e-12 {
        return Ok(Eq16Axis {
            w1,
            w2,
            parallel: true,
            degenerate: true,
        });
    }
    let w2_hat = &w2 / n2;
    let residual = (&w1 - &w2_hat * w1.dot(&w2_hat)).norm() / n1;
    Ok(Eq16Axis {
        parallel: residual < 1e-9,
        degenerate: false,
        w1,
        w2,
    })
}

/// Outcome of the span-membership sweep `b ∈ ⟨ξ, A Aᵀ ξ⟩` over sampled
/// directions.
#[derive(Debug, Clone)]
pub struct Eq17Report {
    pub pass: bool,
    pub max_residual: f64,
    /// A direction violating the membership, when the sweep fails.
    pub witness: Option<DVector<f64>>,
}

/// Tests whether `b` lies in `span{ξ, A Aᵀ ξ}` for every sampled unit `ξ`
/// (least-squares residual below `1e−9 · ‖b‖`). Canonical axis directions
/// are always included among the samples, so eigenvector witnesses are
/// found when they exist.
pub fn eq17_membership(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    dirs: usize,
    seed: u64,
) -> Result<Eq17Report> {
    if dirs < 100 {
        return Err(Error::bad_param("dirs", "need at least 100 directions"));
    }
    let n = b.len();
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.nrows(),
        });
    }
    let b_norm = b.norm();
    if b_norm < 1e-14 {
        return Ok(Eq17Report {
            pass: true,
            max_residual: 0.0,
            witness: None,
        });
    }
    let aat = a * a.transpose();
    let mut samples = Vec::with_capacity(dirs + n);
    for i in 0..n {
        let mut e = DVector::zeros(n);
        e[i] = 1.0;
        samples.push(e);
    }
    samples.extend(sample_unit_directions(n, dirs, seed));
    let mut max_residual: f64 = 0.0;
    let mut witness = None;
    for xi in samples {
        let span = Subspace::span_of(&[xi.clone(), &aat * &xi], n);
        let residual = (b - span.project(b)).norm() / b_norm;
        if residual > max_residual {
            max_residual = residual;
        }
        if residual > 1e-9 && witness.is_none() {
            witness = Some(xi);
        }
    }
    Ok(Eq17Report {
        pass: witness.is_none(),
        max_residual,
        witness,
    })
}

/// `p_i(λ) = Π_{j≠i} (a_j − λ)`: the generators whose convex combinations
/// are exactly the central-section characteristic polynomials of the
/// ellipsoid `xᵀ diag(a) x ≤ 1`.
pub fn section_charpoly_generators(a: &[f64]) -> Vec<Polynomial> {
    let n = a.len();
    let sign = if (n - 1) % 2 == 0 { 1.0 } else { -1.0 };
    (0..n)
        .map(|i| {
            let roots: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| a[j]).collect();
            Polynomial::from_roots(&roots, sign)
        })
        .collect()
}
