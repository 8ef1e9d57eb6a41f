//! Dense complex linear algebra over the d-party Hilbert space.
//!
//! Amplitude indices are big-endian: index i over n parties of local
//! dimension d decodes as the digit string (i₀, …, i_{n−1}) with i₀ most
//! significant, matching the left-to-right order of tensor products.
//! All operations are pure; values are immutable after construction.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::{tol, ComplexMatrixOf, ComplexVectorOf, Error, Float, Result};

/// Kronecker product of the given square matrices, in list order.
///
/// The result dimension is the product of the input dimensions.
pub fn tensor_product<T: Float>(ops: &[ComplexMatrixOf<T>]) -> Result<ComplexMatrixOf<T>> {
    if ops.is_empty() {
        return Err(Error::EmptyInput("tensor_product needs at least one factor"));
    }
    for op in ops {
        if op.nrows() != op.ncols() {
            return Err(Error::NotSquare {
                rows: op.nrows(),
                cols: op.ncols(),
            });
        }
    }
    let mut acc = ops[0].clone();
    for op in &ops[1..] {
        acc = acc.kronecker(op);
    }
    Ok(acc)
}

/// Unit-norm amplitude vector of n parties with local dimension d.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T: Float = crate::Real> {
    local_dim: usize,
    parties: usize,
    amplitudes: ComplexVectorOf<T>,
}

impl<T: Float> StateVector<T> {
    /// Wraps amplitudes after checking the length is d^n and the
    /// Euclidean norm is 1 within the construction tolerance.
    pub fn new(local_dim: usize, parties: usize, amplitudes: ComplexVectorOf<T>) -> Result<Self> {
        let expected = local_dim.pow(parties as u32);
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch {
                what: "state amplitudes",
                expected,
                got: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - T::one()).abs() > tol::construct::<T>() {
            return Err(Error::Malformed(format!(
                "state vector norm {norm:?} is not 1"
            )));
        }
        Ok(Self {
            local_dim,
            parties,
            amplitudes,
        })
    }

    /// Normalizes arbitrary nonzero amplitudes into a state.
    pub fn normalized(
        local_dim: usize,
        parties: usize,
        amplitudes: ComplexVectorOf<T>,
    ) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm <= T::zero() {
            return Err(Error::Malformed("cannot normalize the zero vector".into()));
        }
        Self::new(local_dim, parties, amplitudes / Complex::from(norm))
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn amplitudes(&self) -> &ComplexVectorOf<T> {
        &self.amplitudes
    }

    /// Applies a d×d operator to one tensor site; the result is the
    /// unnormalized amplitude vector (op ⊗ identities elsewhere)·ψ.
    pub fn apply_local(&self, op: &ComplexMatrixOf<T>, site: usize) -> Result<ComplexVectorOf<T>> {
        apply_local_raw(&self.amplitudes, op, self.local_dim, self.parties, site)
    }

    /// Rank-one density matrix |ψ⟩⟨ψ|.
    pub fn to_density(&self) -> DensityMatrix<T> {
        let mat = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix {
            dim: mat.nrows(),
            mat,
            is_state: true,
        }
    }

    /// Overlap ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

/// Applies a d×d operator at `site` of an n-party amplitude vector
/// without materializing the d^n-dimensional dense operator.
///
/// Cost is d·d^n scalar products. The input need not be normalized,
/// which lets measurement-effect chains compose.
pub fn apply_local_raw<T: Float>(
    amplitudes: &ComplexVectorOf<T>,
    op: &ComplexMatrixOf<T>,
    local_dim: usize,
    parties: usize,
    site: usize,
) -> Result<ComplexVectorOf<T>> {
    let len = local_dim.pow(parties as u32);
    if amplitudes.len() != len {
        return Err(Error::DimensionMismatch {
            what: "state amplitudes",
            expected: len,
            got: amplitudes.len(),
        });
    }
    if op.nrows() != local_dim || op.ncols() != local_dim {
        return Err(Error::DimensionMismatch {
            what: "local operator",
            expected: local_dim,
            got: op.nrows(),
        });
    }
    if site >= parties {
        return Err(Error::OutOfRange {
            what: "site",
            got: site as i64,
            allowed: "0..parties",
        });
    }
    // Big-endian digits: the site digit advances in steps of d^(n-1-site).
    let stride = local_dim.pow((parties - 1 - site) as u32);
    let block = stride * local_dim;
    let mut out = ComplexVectorOf::<T>::zeros(len);
    for base in (0..len).step_by(block) {
        for offset in 0..stride {
            for row in 0..local_dim {
                let mut acc = Complex::from(T::zero());
                for col in 0..local_dim {
                    acc += op[(row, col)] * amplitudes[base + col * stride + offset];
                }
                out[base + row * stride + offset] = acc;
            }
        }
    }
    Ok(out)
}

/// Single-site reduced density matrix of a pure state, computed
/// directly from the amplitudes in O(d²·dⁿ⁻¹) without forming the
/// dⁿ×dⁿ outer product: ρ[a,b] = Σ_rest ψ[…a…]·conj(ψ[…b…]).
pub fn reduced_density_site<T: Float>(
    amplitudes: &ComplexVectorOf<T>,
    local_dim: usize,
    parties: usize,
    site: usize,
) -> Result<ComplexMatrixOf<T>> {
    let len = local_dim.pow(parties as u32);
    if amplitudes.len() != len {
        return Err(Error::DimensionMismatch {
            what: "state amplitudes",
            expected: len,
            got: amplitudes.len(),
        });
    }
    if site >= parties {
        return Err(Error::OutOfRange {
            what: "site",
            got: site as i64,
            allowed: "0..parties",
        });
    }
    let stride = local_dim.pow((parties - 1 - site) as u32);
    let block = stride * local_dim;
    let mut rho = ComplexMatrixOf::<T>::zeros(local_dim, local_dim);
    for base in (0..len).step_by(block) {
        for offset in 0..stride {
            for a in 0..local_dim {
                let va = amplitudes[base + a * stride + offset];
                for b in 0..local_dim {
                    let vb = amplitudes[base + b * stride + offset];
                    rho[(a, b)] += va * vb.conj();
                }
            }
        }
    }
    Ok(rho)
}

/// Positive unit-trace operator (or a raw square matrix when
/// `is_state` is false, e.g. intermediate algebra).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Float = crate::Real> {
    dim: usize,
    mat: ComplexMatrixOf<T>,
    is_state: bool,
}

impl<T: Float> DensityMatrix<T> {
    /// Validates Hermiticity, unit trace, and positive semidefiniteness
    /// (minimum eigenvalue ≥ −verification tolerance).
    pub fn state(mat: ComplexMatrixOf<T>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        let herm_dev = hermitian_deviation(&mat);
        if herm_dev > tol::construct::<T>() {
            return Err(Error::NotHermitian {
                deviation: herm_dev.to_f64().unwrap_or(f64::NAN),
                tol: tol::construct::<T>().to_f64().unwrap_or(f64::NAN),
            });
        }
        let trace = mat.trace();
        if (trace.re - T::one()).abs() > tol::construct::<T>()
            || trace.im.abs() > tol::construct::<T>()
        {
            return Err(Error::Malformed(format!("trace {trace:?} is not 1")));
        }
        let eig = nalgebra::SymmetricEigen::new(hermitian_part(&mat));
        let min = eig
            .eigenvalues
            .iter()
            .cloned()
            .fold(T::max_value().unwrap(), |a, b| a.min(b));
        if min < -tol::verify::<T>() {
            return Err(Error::Malformed(format!(
                "minimum eigenvalue {min:?} is negative"
            )));
        }
        Ok(Self {
            dim: mat.nrows(),
            mat,
            is_state: true,
        })
    }

    /// Wraps a square matrix without state validation.
    pub fn raw(mat: ComplexMatrixOf<T>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        Ok(Self {
            dim: mat.nrows(),
            mat,
            is_state: false,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrixOf<T> {
        &self.mat
    }

    pub fn is_state(&self) -> bool {
        self.is_state
    }

    /// See [`partial_trace`].
    pub fn partial_trace(&self, keep: &[usize], d: usize, n: usize) -> Result<DensityMatrix<T>> {
        partial_trace(self, keep, d, n)
    }
}

/// Traces out every party not in `keep` from an n-party operator of
/// local dimension d; the result lives on the kept parties, in their
/// original order, and has the same trace.
pub fn partial_trace<T: Float>(
    m: &DensityMatrix<T>,
    keep: &[usize],
    d: usize,
    n: usize,
) -> Result<DensityMatrix<T>> {
    if m.dim != d.pow(n as u32) {
        return Err(Error::DimensionMismatch {
            what: "partial trace input",
            expected: d.pow(n as u32),
            got: m.dim,
        });
    }
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() {
        return Err(Error::EmptyInput("partial_trace needs a nonempty keep set"));
    }
    if *keep.last().unwrap() >= n {
        return Err(Error::OutOfRange {
            what: "keep index",
            got: *keep.last().unwrap() as i64,
            allowed: "0..parties",
        });
    }
    let traced: Vec<usize> = (0..n).filter(|p| !keep.contains(p)).collect();
    let stride = |party: usize| d.pow((n - 1 - party) as u32);

    // Enumerate the base index contributed by each multi-digit of the
    // kept (resp. traced) parties once, then combine additively: the
    // kept and traced parties partition the digit positions.
    let offsets = |parties: &[usize]| -> Vec<usize> {
        let mut offs = vec![0usize];
        for &p in parties {
            let s = stride(p);
            let mut next = Vec::with_capacity(offs.len() * d);
            for &o in &offs {
                for digit in 0..d {
                    next.push(o + digit * s);
                }
            }
            offs = next;
        }
        offs
    };
    let keep_offsets = offsets(&keep);
    let traced_offsets = offsets(&traced);

    let out_dim = keep_offsets.len();
    let mut out = DMatrix::<Complex<T>>::zeros(out_dim, out_dim);
    for (a, &oa) in keep_offsets.iter().enumerate() {
        for (b, &ob) in keep_offsets.iter().enumerate() {
            let mut acc = Complex::from(T::zero());
            for &ot in &traced_offsets {
                acc += m.mat[(oa + ot, ob + ot)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(DensityMatrix {
        dim: out_dim,
        mat: out,
        is_state: m.is_state,
    })
}

/// State-weighted operator norm ‖X‖_ρ = Tr(ρ X*X)^{1/2}.
pub fn rho_norm<T: Float>(rho: &DensityMatrix<T>, x: &ComplexMatrixOf<T>) -> Result<T> {
    if x.nrows() != rho.dim || x.ncols() != rho.dim {
        return Err(Error::DimensionMismatch {
            what: "rho_norm operator",
            expected: rho.dim,
            got: x.nrows(),
        });
    }
    let gram = x.adjoint() * x;
    let value = trace_product(&rho.mat, &gram).re;
    // The trace is real and nonnegative up to roundoff.
    Ok(value.max(T::zero()).sqrt())
}

/// tr(A·B) without forming the product matrix.
pub fn trace_product<T: Float>(a: &ComplexMatrixOf<T>, b: &ComplexMatrixOf<T>) -> Complex<T> {
    debug_assert_eq!(a.ncols(), b.nrows());
    debug_assert_eq!(a.nrows(), b.ncols());
    let mut acc = Complex::from(T::zero());
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Top eigenpairs of a Hermitian matrix, in descending eigenvalue
/// order; eigenvectors are orthonormal.
///
/// Fails when the input deviates from Hermiticity by more than the
/// verification tolerance; the spectrum is computed on the Hermitian
/// part (M + M*)/2 so the tolerated deviation cannot leak further.
pub fn hermitian_spectrum<T: Float>(
    m: &ComplexMatrixOf<T>,
    top_k: usize,
) -> Result<Vec<(T, ComplexVectorOf<T>)>> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let dev = hermitian_deviation(m);
    if dev > tol::verify::<T>() {
        return Err(Error::NotHermitian {
            deviation: dev.to_f64().unwrap_or(f64::NAN),
            tol: tol::verify::<T>().to_f64().unwrap_or(f64::NAN),
        });
    }
    let eig = nalgebra::SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .expect("eigenvalues are finite")
    });
    Ok(order
        .into_iter()
        .take(top_k)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors.column(i).into_owned()))
        .collect())
}

/// Rank and orthonormal basis (trace inner product) of the span of the
/// given equally-shaped matrices.
///
/// Rank counts singular values above `tol` × the largest; the basis
/// comes from the corresponding right-singular vectors, reshaped back
/// row-major.
pub fn numerical_rank<T: Float>(
    vectors: &[ComplexMatrixOf<T>],
    tol: T,
) -> Result<(usize, Vec<ComplexMatrixOf<T>>)> {
    if vectors.is_empty() {
        return Err(Error::EmptyInput("numerical_rank needs at least one matrix"));
    }
    let (rows, cols) = (vectors[0].nrows(), vectors[0].ncols());
    for v in vectors {
        if v.nrows() != rows || v.ncols() != cols {
            return Err(Error::DimensionMismatch {
                what: "numerical_rank entry",
                expected: rows * cols,
                got: v.nrows() * v.ncols(),
            });
        }
    }
    let flat_len = rows * cols;
    let stacked = DMatrix::<Complex<T>>::from_fn(vectors.len(), flat_len, |i, j| {
        vectors[i][(j / cols, j % cols)]
    });
    let svd = stacked.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let largest = svd.singular_values.iter().cloned().fold(T::zero(), T::max);
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > tol * largest)
        .count();
    // Row i of v_t is the adjoint of the i-th right-singular vector.
    let basis = (0..rank)
        .map(|i| {
            DMatrix::<Complex<T>>::from_fn(rows, cols, |r, c| v_t[(i, r * cols + c)].conj())
        })
        .collect();
    Ok((rank, basis))
}

/// Largest singular value (spectral norm).
pub fn operator_norm<T: Float>(m: &ComplexMatrixOf<T>) -> T {
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(T::zero(), T::max)
}

/// Magnitude of a complex scalar, generic over the real type.
pub fn cabs<T: Float>(z: Complex<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}

/// Maximum deviation from Hermiticity, max |M[i][j] − conj(M[j][i])|.
pub fn hermitian_deviation<T: Float>(m: &ComplexMatrixOf<T>) -> T {
    let mut dev = T::zero();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            dev = dev.max(cabs(m[(i, j)] - m[(j, i)].conj()));
        }
    }
    dev
}

/// (M + M*)/2.
pub fn hermitian_part<T: Float>(m: &ComplexMatrixOf<T>) -> ComplexMatrixOf<T> {
    (m + m.adjoint()) * Complex::from(T::from_f64(0.5).unwrap())
}

/// Largest entry magnitude.
pub fn max_abs<T: Float>(m: &ComplexMatrixOf<T>) -> T {
    m.iter().map(|z| cabs(*z)).fold(T::zero(), T::max)
}

/// Largest entrywise difference magnitude; panics on shape mismatch
/// (programmer error, not a data condition).
pub fn max_abs_diff<T: Float>(a: &ComplexMatrixOf<T>, b: &ComplexMatrixOf<T>) -> T {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| cabs(x - y))
        .fold(T::zero(), T::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ComplexMatrix, Cplx};

    fn c(re: f64, im: f64) -> Cplx {
        Cplx::new(re, im)
    }

    #[test]
    fn tensor_product_rejects_empty_and_non_square() {
        assert!(matches!(
            tensor_product::<f64>(&[]),
            Err(Error::EmptyInput(_))
        ));
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            tensor_product(&[rect]),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn apply_local_site_out_of_range() {
        let psi = StateVector::new(2, 2, ComplexVectorOf::from_vec(vec![
            c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0),
        ]))
        .unwrap();
        let id = ComplexMatrix::identity(2, 2);
        assert!(matches!(
            psi.apply_local(&id, 2),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn partial_trace_requires_power_dimension() {
        let rho = DensityMatrix::raw(ComplexMatrix::identity(6, 6)).unwrap();
        assert!(matches!(
            partial_trace(&rho, &[0], 2, 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hermitian_spectrum_rejects_non_hermitian() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(
            hermitian_spectrum(&m, 1),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn f32_instantiation_constructs() {
        let amps = ComplexVectorOf::<f32>::from_vec(vec![
            Complex::new(std::f32::consts::FRAC_1_SQRT_2, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(std::f32::consts::FRAC_1_SQRT_2, 0.0),
        ]);
        let psi = StateVector::<f32>::new(2, 2, amps).unwrap();
        let rho = psi.to_density();
        let reduced = rho.partial_trace(&[0], 2, 2).unwrap();
        assert!((reduced.matrix()[(0, 0)].re - 0.5).abs() < 1e-6);
    }
}
