//! Centralized numerical tolerances.
//!
//! Every deviation in this crate is measured in the entrywise max-norm
//! (vectors: Euclidean norm) against an absolute tolerance, unless an
//! operation documents otherwise. The constructions contain irrational
//! square roots, so exact arithmetic stops at the rational scalars and
//! the thresholds below encode how much floating-point slack each layer
//! is allowed to accumulate.

/// Construction-level tolerance: Hermiticity, idempotency, and sum
/// deviations of directly built projector families, and amplitude-level
/// state invariants. One arithmetic layer above machine epsilon.
pub const TOL_CONSTRUCT: f64 = 1e-12;

/// Default verification tolerance for derived quantities (symmetrized
/// projections, stabilization defects, commutator residuals): these pass
/// through O(d!) summations and eigen/SVD kernels.
pub const TOL_VERIFY: f64 = 1e-10;

/// Relative singular-value cutoff for numerical rank decisions; two
/// orders of magnitude above observed eigensolver noise at the largest
/// supported dimensions (≤ 3125).
pub const TOL_RANK_REL: f64 = 1e-9;

/// Subspace/Gram-matrix tolerance for orthonormal operator bases and
/// eigenvalue-multiplicity grouping.
pub const TOL_SUBSPACE: f64 = 1e-8;

/// Feasibility tolerance of the LHV linear program: a correlation is
/// declared local iff it can be matched by a mixture of deterministic
/// strategies to within this ℓ∞ deviation.
pub const TOL_LP: f64 = 1e-8;

/// [`TOL_CONSTRUCT`] widened for scalars whose machine epsilon cannot
/// reach it (f32 keeps the same 256-ulp headroom f64 enjoys).
pub fn construct<T: crate::Float>() -> T {
    let floor = T::from_f64(TOL_CONSTRUCT).unwrap();
    floor.max(T::eps() * T::from_f64(256.0).unwrap())
}

/// [`TOL_VERIFY`] widened in the same way as [`construct`].
pub fn verify<T: crate::Float>() -> T {
    let floor = T::from_f64(TOL_VERIFY).unwrap();
    floor.max(T::eps() * T::from_f64(4096.0).unwrap())
}
