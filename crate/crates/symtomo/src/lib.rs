//! Convex-body sections, symmetry detection, and numerical verification of
//! section-symmetry characterizations (bodies of revolution, ellipsoids).
//!
//! The toolkit is organized around a small set of ideas:
//!
//! * [`bodies`] — convex bodies in ℝⁿ with membership, support, radial and
//!   centroid oracles, in three representations (exact ellipsoids, vertex
//!   polytopes, implicit gauge bodies) plus a gallery of named test bodies.
//! * [`sections`] — hyperplane sections `K ∩ H` expressed in a deterministic
//!   chart of `H`, chord midpoints, and the central-projection family `K_τ`
//!   obtained by slicing a body parallel to a hyperplane and projecting every
//!   slice onto a common screen from a fixed point.
//! * [`symmetry`] — canonical reflection (`π_k`) and rotation (`ρ_k`)
//!   representations of the orthogonal group, invariance residuals, and
//!   detectors for central, axial-reflection and revolution symmetry.
//! * [`ellipsoid_exact`] — closed-form ellipsoid algebra: section quadratic
//!   forms, section centroids, rank-one-update characteristic polynomials,
//!   eigenvalue clustering and the common-root machinery that classifies
//!   revolution spectra.
//! * [`verify`] — end-to-end pipelines that check the hypotheses of the
//!   section-symmetry theorems on concrete bodies, recover axes of
//!   revolution, and probe counterexample families.
//!
//! All stochastic operations take an explicit seed and are deterministic for
//! a fixed seed; there is no global RNG state. Grid searches parallelize with
//! order-independent reductions, so results do not depend on thread count
//! (cap threads with the `SYMTOMO_THREADS` environment variable when using
//! the CLI).
//!
//! See the `examples/` directory for one runnable walkthrough per major
//! capability, and `symtomo --help` for the batch CLI.

pub mod bodies;
pub mod cli;
pub mod ellipsoid_exact;
mod error;
pub mod geom;
mod linprog;
pub mod poly;
pub mod sections;
mod svg;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};

/// Numerical tolerances shared across the crate.
///
/// Values are chosen for unit-scale bodies in double precision; every
/// consumer states which constant it relies on rather than inventing ad-hoc
/// magic numbers.
pub mod tol {
    /// Exact linear algebra on unit-scale data (orthonormality, involutions).
    pub const EXACT: f64 = 1e-12;
    /// Rank decisions in subspace arithmetic (SVD singular-value cutoff).
    pub const RANK: f64 = 1e-9;
    /// Boundary bisection stopping width.
    pub const BISECT: f64 = 1e-10;
    /// Maximum bisection iterations (2⁻⁶⁰ of the initial bracket).
    pub const BISECT_ITERS: usize = 60;
    /// Margin for the tangency test in `sections::section`.
    pub const SUPPORT_MARGIN: f64 = 1e-10;
    /// Membership margin required of a strictly interior point.
    pub const INTERIOR_MARGIN: f64 = 1e-9;
    /// Default eigenvalue cluster gap for multiplicity decisions.
    pub const CLUSTER: f64 = 1e-7;
    /// Slices thinner than this are skipped when building families.
    pub const SLICE_WIDTH: f64 = 1e-6;
}
