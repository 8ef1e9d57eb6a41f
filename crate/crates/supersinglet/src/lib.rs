//! Numerical certification of projector families, supersinglet (Slater)
//! states, and the Bell correlations they generate.
//!
//! The library is organized bottom-up:
//!
//! * [`tensor`] — dense complex linear algebra: Kronecker products, local
//!   operator application, partial traces, eigen/SVD services, ρ-weighted
//!   norms.
//! * [`families`] — families of N orthogonal projections summing to a scalar
//!   multiple x·I of the identity: the Λ_N scalar sequence, the rank-1
//!   family (N = d+1), and the four-projector family (N = 4, odd d).
//! * [`slater`] — the totally antisymmetric Slater state of d qudits,
//!   permutation operators, the symmetrizer, and the derived projections
//!   S_μ and operators T_μ.
//! * [`correlations`] — canonical and noisy Bell correlation tables,
//!   synchronicity checks, ℓ1 distances, and LHV membership by linear
//!   programming.
//! * [`algebra`] — Lie-algebra closures, iterated commutators, commutants,
//!   and Schur–Weyl dimension bookkeeping.
//! * [`robustness`] — the robustness budget (ε, ε′, β, δ, C) and the
//!   defect measurements that validate the approximation lemmas on noisy
//!   realizations.
//! * [`report`] — deterministic JSON/CSV serialization for all reports.
//!
//! The dense tensor layer and the family/state constructors are generic
//! over the real scalar through the [`Float`] trait; the verification
//! suites work at the pinned tolerances of [`tol`] and therefore use the
//! `f64` aliases below.

pub mod algebra;
pub mod correlations;
pub mod error;
pub mod families;
pub mod report;
pub mod robustness;
pub mod slater;
pub mod tensor;
pub mod tol;

pub use error::Error;

/// Crate result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Toolkit version embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Real scalar abstraction for the generic linear-algebra layer.
///
/// Implemented for `f32` and `f64`. The tolerances in [`tol`] are below
/// `f32` machine epsilon, so the verification suites instantiate the
/// `f64` aliases; the `f32` instantiation exists for callers that only
/// need the constructions.
pub trait Float: Copy + num_traits::FromPrimitive + num_traits::ToPrimitive + nalgebra::RealField {
    /// Machine epsilon of the scalar.
    fn eps() -> Self;
}

impl Float for f32 {
    fn eps() -> Self {
        f32::EPSILON
    }
}

impl Float for f64 {
    fn eps() -> Self {
        f64::EPSILON
    }
}

/// Pinned real scalar of the verification suites.
pub type Real = f64;

/// Complex scalar over [`Real`].
pub type Cplx = num_complex::Complex<Real>;

/// Dense complex matrix over an arbitrary real scalar.
pub type ComplexMatrixOf<T> = nalgebra::DMatrix<num_complex::Complex<T>>;

/// Dense complex column vector over an arbitrary real scalar.
pub type ComplexVectorOf<T> = nalgebra::DVector<num_complex::Complex<T>>;

/// Dense complex matrix at the pinned scalar.
pub type ComplexMatrix = ComplexMatrixOf<Real>;

/// Dense complex column vector at the pinned scalar.
pub type ComplexVector = ComplexVectorOf<Real>;
