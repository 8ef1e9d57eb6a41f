//! Numerical certification of the algebraic machinery behind the
//! self-testing theorems: Lie-algebra closures, iterated commutators,
//! commutants, the Schur–Weyl decomposition, and the spectral
//! certificate of R = Σ_μ S_μ.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::families::{FamilyKind, ProjectorFamily};
use crate::slater::{slater_state, stabilizer_sum};
use crate::tensor::{hermitian_spectrum, numerical_rank, trace_product};
use crate::{Cplx, ComplexMatrix, Error, Real, Result};

/// Largest ambient dimension for dense commutant computations (the
/// stacked nullspace has D² unknowns; 31² keeps it near 10³).
pub const MAX_COMMUTANT_DIM: usize = 31;

/// Largest d^d ambient dimension for the dense spectral certificate.
pub const MAX_SPECTRAL_DIM: usize = 3125;

/// A subspace of D×D matrices with an orthonormal basis under the
/// trace inner product ⟨A, B⟩ = tr(A†B).
#[derive(Clone, Debug)]
pub struct OperatorSpan {
    ambient_dim: usize,
    basis: Vec<ComplexMatrix>,
}

impl OperatorSpan {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    /// Frobenius norm of m minus its orthogonal projection onto the
    /// span.
    pub fn residual(&self, m: &ComplexMatrix) -> Real {
        let mut rest = m.clone();
        for b in &self.basis {
            let coefficient = trace_product(&b.adjoint(), m);
            rest -= b * coefficient;
        }
        rest.iter().map(|z| z.norm_sqr()).sum::<Real>().sqrt()
    }

    /// Membership test at Frobenius tolerance `tol`.
    pub fn contains(&self, m: &ComplexMatrix, tol: Real) -> bool {
        self.residual(m) <= tol
    }

    /// Largest deviation of the basis Gram matrix from the identity.
    pub fn gram_deviation(&self) -> Real {
        let mut worst = 0.0;
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let g = trace_product(&a.adjoint(), b);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = (g - Cplx::from(target)).norm().max(worst);
            }
        }
        worst
    }
}

/// Result of [`lie_closure`]: the closed span and how many commutator
/// sweeps it took to stabilize.
#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub span: OperatorSpan,
    pub sweeps: usize,
}

/// Smallest complex subspace containing the generators and closed
/// under commutators within `tol` (a relative singular-value
/// threshold). Each sweep appends all basis-pair commutators and
/// re-ranks; the loop stops when a sweep adds no dimension or the
/// full matrix algebra D² is reached.
pub fn lie_closure(generators: &[ComplexMatrix], tol: Real) -> Result<ClosureReport> {
    if generators.is_empty() {
        return Err(Error::EmptyInput("lie_closure"));
    }
    let d = generators[0].nrows();
    for g in generators {
        if g.nrows() != d || g.ncols() != d {
            return Err(Error::DimensionMismatch {
                what: "lie_closure generator",
                expected: d,
                got: g.nrows().max(g.ncols()),
            });
        }
    }
    let full = d * d;
    let (mut rank, mut basis) = numerical_rank(generators, tol)?;
    let mut sweeps = 0usize;
    while rank < full {
        sweeps += 1;
        let mut candidates = basis.clone();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                candidates.push(&basis[i] * &basis[j] - &basis[j] * &basis[i]);
            }
        }
        let (new_rank, new_basis) = numerical_rank(&candidates, tol)?;
        let grew = new_rank > rank;
        rank = new_rank;
        basis = new_basis;
        if !grew {
            break;
        }
    }
    Ok(ClosureReport {
        span: OperatorSpan {
            ambient_dim: d,
            basis,
        },
        sweeps,
    })
}

/// The iterated commutators Z⁽⁰⁾ = A−B, Z⁽¹⁾ = 2[A,B],
/// Z⁽ⁿ⁺¹⁾ = [Z⁽ⁿ⁾, A+B] of the four-projector complements
/// A = I−P₀, B = I−P₁.
///
/// On each 2×2 block, A+B = I + 2γσ₃ with γ = (x₁−x₂)/4, so commuting
/// with A+B maps σ₁ ↦ zσ₂-type and back with the same factor
/// z = x₂−x₁, reproducing the closed block form w_ℓ z_ℓⁿ at every
/// step. (Commuting with A alone adds a spurious σ₃ component on the
/// odd-to-even steps: A−B and A+B together generate the same algebra,
/// and the symmetric recursion is the one the closed form satisfies.)
pub fn iterated_commutator_sequence(
    f: &ProjectorFamily,
    n_max: usize,
) -> Result<Vec<ComplexMatrix>> {
    if f.kind != FamilyKind::FourProjector {
        return Err(Error::WrongFamilyKind {
            required: "four_projector",
        });
    }
    let a = f.complement(0);
    let b = f.complement(1);
    let a_plus_b = &a + &b;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(&a - &b);
    if n_max >= 1 {
        out.push((&a * &b - &b * &a) * Cplx::from(2.0));
    }
    for n in 2..=n_max {
        let prev = &out[n - 1];
        out.push(prev * &a_plus_b - &a_plus_b * prev);
    }
    Ok(out)
}

/// The closed block form of Z⁽ⁿ⁾ for a four-projector family in
/// dimension d = 2k+1: on block ℓ the matrix w_ℓ [[0, z_ℓⁿ],
/// [(−z_ℓ)ⁿ, 0]] with z_ℓ = (4k−2−8ℓ)/(2k+1) and
/// w_ℓ = √((4ℓ+2)(4k−4ℓ))/(2k+1).
pub fn closed_form_z(f: &ProjectorFamily, n: usize) -> Result<ComplexMatrix> {
    if f.kind != FamilyKind::FourProjector {
        return Err(Error::WrongFamilyKind {
            required: "four_projector",
        });
    }
    let d = f.dim;
    let k = f.rank;
    let mut m = ComplexMatrix::zeros(d, d);
    for l in 0..k {
        let denom = (2 * k + 1) as Real;
        let z = (4.0 * k as Real - 2.0 - 8.0 * l as Real) / denom;
        let w = (((4 * l + 2) * (4 * k - 4 * l)) as Real).sqrt() / denom;
        m[(2 * l, 2 * l + 1)] = Cplx::from(w * z.powi(n as i32));
        m[(2 * l + 1, 2 * l)] = Cplx::from(w * (-z).powi(n as i32));
    }
    Ok(m)
}

/// Orthonormal basis of the commutant {X : XY = YX for all given Y},
/// computed as the joint nullspace of the stacked maps
/// X ↦ XY − YX via one dense SVD.
pub fn commutant(ops: &[ComplexMatrix], tol: Real) -> Result<OperatorSpan> {
    if ops.is_empty() {
        return Err(Error::EmptyInput("commutant"));
    }
    let d = ops[0].nrows();
    if d > MAX_COMMUTANT_DIM {
        return Err(Error::SizeCap {
            what: "commutant ambient dimension",
            got: d as u64,
            cap: MAX_COMMUTANT_DIM as u64,
        });
    }
    for op in ops {
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::DimensionMismatch {
                what: "commutant generator",
                expected: d,
                got: op.nrows().max(op.ncols()),
            });
        }
    }
    let dd = d * d;
    let id = ComplexMatrix::identity(d, d);
    // Row-major vec: vec(XY − YX) = (I ⊗ Yᵀ − Y ⊗ I) vec(X).
    let mut stacked = ComplexMatrix::zeros(dd * ops.len(), dd);
    for (g, y) in ops.iter().enumerate() {
        let block = id.kronecker(&y.transpose()) - y.kronecker(&id);
        stacked.view_mut((g * dd, 0), (dd, dd)).copy_from(&block);
    }
    let svd = stacked.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let largest = svd.singular_values.iter().cloned().fold(0.0, Real::max);
    let mut basis = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s <= tol * largest {
            basis.push(ComplexMatrix::from_fn(d, d, |r, c| {
                v_t[(i, r * d + c)].conj()
            }));
        }
    }
    Ok(OperatorSpan {
        ambient_dim: d,
        basis,
    })
}

/// An integer partition in weakly decreasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty()
            || parts.iter().any(|&p| p == 0)
            || parts.windows(2).any(|w| w[0] < w[1])
        {
            return Err(Error::Malformed(format!(
                "{parts:?} is not a weakly decreasing positive partition"
            )));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    /// Conjugate partition: column lengths of the Young diagram.
    pub fn conjugate(&self) -> Vec<usize> {
        let cols = self.parts[0];
        (0..cols)
            .map(|j| self.parts.iter().filter(|&&p| p > j).count())
            .collect()
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of n in lexicographically descending order.
pub fn partitions(n: usize) -> Result<Vec<Partition>> {
    if !(1..=12).contains(&n) {
        return Err(Error::OutOfRange {
            what: "n",
            got: n as i64,
            allowed: "1 <= n <= 12",
        });
    }
    fn rec(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Hook lengths of every cell of the Young diagram, row-major.
fn hook_lengths(pi: &Partition) -> Vec<usize> {
    let conjugate = pi.conjugate();
    let mut hooks = Vec::new();
    for (i, &row) in pi.parts().iter().enumerate() {
        for j in 0..row {
            hooks.push(row - j + conjugate[j] - i - 1);
        }
    }
    hooks
}

/// Exact dimensions of the two Schur–Weyl factors for partition π at
/// local dimension d: the permutation module n!/Πh(x) and the unitary
/// module Π(d + c(x))/h(x) with content c = column − row. The latter
/// vanishes when the diagram has more than d rows.
pub fn schur_weyl_dimensions(pi: &Partition, d: usize, n: usize) -> Result<(u64, u64)> {
    if pi.n() != n {
        return Err(Error::DimensionMismatch {
            what: "partition weight",
            expected: n,
            got: pi.n(),
        });
    }
    let hooks = hook_lengths(pi);
    let mut factorial = BigInt::one();
    for i in 1..=n {
        factorial *= BigInt::from(i);
    }
    let hook_product: BigInt = hooks.iter().map(|&h| BigInt::from(h)).product();
    let perm_ratio = BigRational::new(factorial, hook_product.clone());
    if !perm_ratio.is_integer() {
        return Err(Error::Malformed(format!(
            "hook-length quotient for {pi} is not an integer"
        )));
    }

    let mut sym = BigRational::one();
    let mut cell = 0usize;
    for (i, &row) in pi.parts().iter().enumerate() {
        for j in 0..row {
            let content = j as i64 - i as i64;
            sym *= BigRational::new(
                BigInt::from(d as i64 + content),
                BigInt::from(hooks[cell]),
            );
            cell += 1;
        }
    }
    if sym.is_negative() {
        return Err(Error::Malformed(format!(
            "negative unitary-module dimension for {pi} at d = {d}"
        )));
    }
    if !sym.is_integer() && !sym.is_zero() {
        return Err(Error::Malformed(format!(
            "unitary-module dimension for {pi} at d = {d} is not an integer"
        )));
    }
    let dim_perm = perm_ratio.to_integer().to_u64().ok_or_else(|| {
        Error::Malformed("permutation-module dimension exceeds u64".into())
    })?;
    let dim_sym = sym.to_integer().to_u64().ok_or_else(|| {
        Error::Malformed("unitary-module dimension exceeds u64".into())
    })?;
    Ok((dim_perm, dim_sym))
}

/// One partition's line in a [`SchurWeylReport`].
#[derive(Clone, Debug)]
pub struct PartitionRecord {
    pub partition: Partition,
    pub dim_perm: u64,
    pub dim_sym: u64,
}

/// The full Schur–Weyl bookkeeping for (ℂ^d)^{⊗n}: per-partition
/// dimensions and the exact dimension count Σ dim_perm·dim_sym = d^n.
#[derive(Clone, Debug)]
pub struct SchurWeylReport {
    pub d: usize,
    pub n: usize,
    pub records: Vec<PartitionRecord>,
    pub total: u128,
    pub expected: u128,
    /// dim_sym of the single-column partition (1,…,1): the fermionic
    /// line, equal to 1 exactly when d = n.
    pub antisymmetric_dim_sym: u64,
    /// How many partitions have dim_sym = 1; for d = n exactly one is
    /// expected (the antisymmetric one).
    pub unit_dim_sym_count: usize,
    pub pass: bool,
}

/// Enumerates all partitions of n and checks the Schur–Weyl dimension
/// sum against d^n in exact integer arithmetic.
pub fn schur_weyl_check(d: usize, n: usize) -> Result<SchurWeylReport> {
    if !(1..=8).contains(&d) || !(1..=8).contains(&n) {
        return Err(Error::OutOfRange {
            what: "(d, n)",
            got: (d.max(n)) as i64,
            allowed: "1 <= d, n <= 8",
        });
    }
    let mut records = Vec::new();
    let mut total: u128 = 0;
    let mut antisymmetric_dim_sym = 0u64;
    let mut unit_dim_sym_count = 0usize;
    for pi in partitions(n)? {
        let (dim_perm, dim_sym) = schur_weyl_dimensions(&pi, d, n)?;
        total += dim_perm as u128 * dim_sym as u128;
        if pi.rows() == n {
            antisymmetric_dim_sym = dim_sym;
        }
        if dim_sym == 1 {
            unit_dim_sym_count += 1;
        }
        records.push(PartitionRecord {
            partition: pi,
            dim_perm,
            dim_sym,
        });
    }
    let expected = (d as u128).pow(n as u32);
    Ok(SchurWeylReport {
        d,
        n,
        pass: total == expected,
        records,
        total,
        expected,
        antisymmetric_dim_sym,
        unit_dim_sym_count,
    })
}

/// Spectral certificate of R = Σ_μ S_μ: the top of the spectrum, the
/// multiplicity of the eigenvalue N, the runner-up λ₂, the gap
/// N − λ₂, and the overlap of the Slater state with the top
/// eigenspace.
#[derive(Clone, Debug)]
pub struct SpectralCertificate {
    pub n_inputs: usize,
    pub local_dim: usize,
    pub ambient_dim: usize,
    pub lambda_max: Real,
    /// Eigenvalues within 1e−8 of N.
    pub multiplicity: usize,
    pub lambda_2: Real,
    pub gap: Real,
    /// Norm of the Slater state's projection onto the N-eigenspace.
    pub slater_overlap: Real,
    /// λ_max agrees with N within 1e−10.
    pub pass: bool,
}

/// Dense eigensolve of R = Σ_μ S_μ; requires d^d ≤ 3125.
pub fn spectral_certificate(f: &ProjectorFamily) -> Result<SpectralCertificate> {
    let ambient = f.dim.pow(f.dim as u32);
    if ambient > MAX_SPECTRAL_DIM {
        return Err(Error::SizeCap {
            what: "spectral certificate ambient dimension d^d",
            got: ambient as u64,
            cap: MAX_SPECTRAL_DIM as u64,
        });
    }
    let r = stabilizer_sum(f)?;
    let spectrum = hermitian_spectrum(&r, ambient)?;
    let n = f.n_inputs as Real;
    let lambda_max = spectrum[0].0;
    let multiplicity = spectrum
        .iter()
        .take_while(|(value, _)| (value - n).abs() <= crate::tol::TOL_SUBSPACE)
        .count();
    let lambda_2 = spectrum
        .get(multiplicity)
        .map(|(value, _)| *value)
        .unwrap_or(Real::NEG_INFINITY);
    let psi = slater_state::<Real>(f.dim)?;
    let overlap_sq: Real = spectrum[..multiplicity]
        .iter()
        .map(|(_, vector)| vector.dotc(psi.state_vector().amplitudes()).norm_sqr())
        .sum();
    Ok(SpectralCertificate {
        n_inputs: f.n_inputs,
        local_dim: f.dim,
        ambient_dim: ambient,
        lambda_max,
        multiplicity,
        lambda_2,
        gap: n - lambda_2,
        slater_overlap: overlap_sq.sqrt(),
        pass: (lambda_max - n).abs() <= crate::tol::TOL_VERIFY,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_constructor_validates() {
        assert!(Partition::new(vec![3, 1]).is_ok());
        assert!(Partition::new(vec![1, 3]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert!(Partition::new(vec![]).is_err());
    }

    #[test]
    fn partition_conjugate_and_display() {
        let pi = Partition::new(vec![3, 1]).unwrap();
        assert_eq!(pi.conjugate(), vec![2, 1, 1]);
        assert_eq!(pi.to_string(), "(3,1)");
    }

    #[test]
    fn partitions_out_of_range() {
        assert!(partitions(0).is_err());
        assert!(partitions(13).is_err());
    }

    #[test]
    fn commutant_rejects_oversized_ambient() {
        let big = ComplexMatrix::identity(32, 32);
        assert!(matches!(
            commutant(&[big], 1e-8),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn iterated_commutators_require_four_projector_kind() {
        let f = crate::families::rank_one_family::<Real>(3).unwrap();
        assert!(matches!(
            iterated_commutator_sequence(&f, 3),
            Err(Error::WrongFamilyKind { .. })
        ));
    }
}
