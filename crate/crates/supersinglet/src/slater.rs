//! The Slater state, permutation operators, the symmetrizer, and the
//! derived operators S_μ, T_μ, R_μ acting on d parties of local
//! dimension d.

use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::families::{FamilyKind, ProjectorFamily};
use crate::tensor::{apply_local_raw, cabs, tensor_product, StateVector};
use crate::{ComplexMatrixOf, Error, Float, Real, Result};

/// Largest supported local dimension for d-party constructions; the
/// amplitude vector alone has d^d entries.
pub const MAX_LOCAL_DIM: usize = 8;

/// The totally antisymmetric d-party state with amplitude
/// sign(σ)/√(d!) on each permutation word (σ(0),…,σ(d−1)).
#[derive(Clone, Debug)]
pub struct SlaterState<T: Float = Real> {
    state: StateVector<T>,
}

impl<T: Float> SlaterState<T> {
    pub fn local_dim(&self) -> usize {
        self.state.local_dim()
    }

    pub fn state_vector(&self) -> &StateVector<T> {
        &self.state
    }

    pub fn into_state_vector(self) -> StateVector<T> {
        self.state
    }
}

/// All permutations of [n] in lexicographic order.
pub fn permutations_lex(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        out.push(current.clone());
        // Standard next-permutation step: find the rightmost ascent,
        // swap with the next larger element, reverse the suffix.
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
}

/// Sign of a permutation by inversion counting: +1 for even, −1 for odd.
pub fn permutation_sign(sigma: &[usize]) -> i32 {
    let mut inversions = 0usize;
    for i in 0..sigma.len() {
        for j in i + 1..sigma.len() {
            if sigma[i] > sigma[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn check_permutation(sigma: &[usize]) -> Result<()> {
    let n = sigma.len();
    let mut seen = vec![false; n];
    for &s in sigma {
        if s >= n || seen[s] {
            return Err(Error::InvalidPermutation {
                n,
                perm: sigma.to_vec(),
            });
        }
        seen[s] = true;
    }
    Ok(())
}

/// All r-element subsets of [n] in lexicographic order.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, r: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if r == 0 {
            out.push(prefix.clone());
            return;
        }
        for i in start..=n - r {
            prefix.push(i);
            rec(i + 1, n, r - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if r <= n {
        rec(0, n, r, &mut Vec::new(), &mut out);
    }
    out
}

/// The Slater state of local dimension d: exactly d! nonzero
/// amplitudes, sign(σ)/√(d!) on the word (σ(0),…,σ(d−1)).
pub fn slater_state<T: Float>(d: usize) -> Result<SlaterState<T>> {
    if !(2..=MAX_LOCAL_DIM).contains(&d) {
        return Err(Error::OutOfRange {
            what: "d",
            got: d as i64,
            allowed: "2 <= d <= 8",
        });
    }
    let dim = d.pow(d as u32);
    let mut amplitudes = crate::ComplexVectorOf::<T>::zeros(dim);
    let factorial: usize = (1..=d).product();
    let magnitude = (T::one() / T::from_usize(factorial).unwrap()).sqrt();
    for sigma in permutations_lex(d) {
        let index = sigma.iter().fold(0usize, |acc, &letter| acc * d + letter);
        let sign = T::from_i32(permutation_sign(&sigma)).unwrap();
        amplitudes[index] = Complex::from(sign * magnitude);
    }
    Ok(SlaterState {
        state: StateVector::new(d, d, amplitudes)?,
    })
}

/// The unitary V_σ permuting n tensor factors of local dimension d:
/// the letter at site s of the input word moves to site σ(s).
pub fn permutation_operator<T: Float>(sigma: &[usize], d: usize) -> Result<ComplexMatrixOf<T>> {
    check_permutation(sigma)?;
    let n = sigma.len();
    let dim = d.pow(n as u32);
    let mut m = ComplexMatrixOf::<T>::zeros(dim, dim);
    let mut digits = vec![0usize; n];
    for col in 0..dim {
        let mut rest = col;
        for s in (0..n).rev() {
            digits[s] = rest % d;
            rest /= d;
        }
        let mut row = 0usize;
        let mut weight = 1usize;
        let mut out_digits = vec![0usize; n];
        for s in 0..n {
            out_digits[sigma[s]] = digits[s];
        }
        for s in (0..n).rev() {
            row += out_digits[s] * weight;
            weight *= d;
        }
        m[(row, col)] = Complex::from(T::one());
    }
    Ok(m)
}

/// The symmetrizer applied to an operator word:
/// (1/n!) Σ_σ A_{σ(0)} ⊗ … ⊗ A_{σ(n−1)}.
pub fn symmetrize<T: Float>(ops: &[ComplexMatrixOf<T>]) -> Result<ComplexMatrixOf<T>> {
    if ops.is_empty() {
        return Err(Error::EmptyInput("symmetrize"));
    }
    let d = ops[0].nrows();
    for op in ops {
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::DimensionMismatch {
                what: "symmetrize operand",
                expected: d,
                got: op.nrows().max(op.ncols()),
            });
        }
    }
    let n = ops.len();
    let dim = d.pow(n as u32);
    let mut acc = ComplexMatrixOf::<T>::zeros(dim, dim);
    let mut word: Vec<ComplexMatrixOf<T>> = Vec::with_capacity(n);
    for sigma in permutations_lex(n) {
        word.clear();
        word.extend(sigma.iter().map(|&i| ops[i].clone()));
        acc += tensor_product(&word)?;
    }
    let factorial: usize = (1..=n).product();
    Ok(acc / Complex::from(T::from_usize(factorial).unwrap()))
}

/// One placement generator R_μ = P_μ^{⊗r} ⊗ (I−P_μ)^{⊗(d−r)}; its
/// orbit under the symmetrizer spans S_μ.
pub fn r_mu<T: Float>(f: &ProjectorFamily<T>, mu: usize) -> Result<ComplexMatrixOf<T>> {
    check_site_rank(f, mu)?;
    let p = &f.projectors[mu];
    let q = f.complement(mu);
    let word: Vec<ComplexMatrixOf<T>> = (0..f.dim)
        .map(|site| if site < f.rank { p.clone() } else { q.clone() })
        .collect();
    tensor_product(&word)
}

/// The symmetric projection S_μ of a [`ProjectorFamily`]: provenance
/// metadata plus the dense d^d-dimensional matrix.
#[derive(Clone, Debug)]
pub struct SymmetricProjector<T: Float = Real> {
    pub kind: FamilyKind,
    pub n_inputs: usize,
    pub local_dim: usize,
    pub mu: usize,
    pub rank: usize,
    pub matrix: ComplexMatrixOf<T>,
}

fn check_site_rank<T: Float>(f: &ProjectorFamily<T>, mu: usize) -> Result<()> {
    if mu >= f.n_inputs {
        return Err(Error::OutOfRange {
            what: "mu",
            got: mu as i64,
            allowed: "mu < N",
        });
    }
    if f.rank == 0 || f.rank >= f.dim {
        return Err(Error::OutOfRange {
            what: "rank",
            got: f.rank as i64,
            allowed: "0 < r < d",
        });
    }
    if f.dim > MAX_LOCAL_DIM {
        return Err(Error::SizeCap {
            what: "local dimension for d-party operators",
            got: f.dim as u64,
            cap: MAX_LOCAL_DIM as u64,
        });
    }
    Ok(())
}

/// The symmetric projection S_μ: the sum over the C(d,r) placements of
/// r copies of P_μ and d−r copies of I−P_μ across the d sites. The
/// placements are mutually orthogonal projectors, so the sum is again
/// a projector — the normalized symmetrizer (d!/(r!(d−r)!)) 𝒮(R_μ) in
/// closed form.
pub fn s_mu<T: Float>(f: &ProjectorFamily<T>, mu: usize) -> Result<SymmetricProjector<T>> {
    check_site_rank(f, mu)?;
    let d = f.dim;
    let p = &f.projectors[mu];
    let q = f.complement(mu);
    let dim = d.pow(d as u32);
    let mut acc = ComplexMatrixOf::<T>::zeros(dim, dim);
    let mut word: Vec<ComplexMatrixOf<T>> = Vec::with_capacity(d);
    for subset in combinations(d, f.rank) {
        word.clear();
        let mut cursor = 0usize;
        for site in 0..d {
            if cursor < subset.len() && subset[cursor] == site {
                word.push(p.clone());
                cursor += 1;
            } else {
                word.push(q.clone());
            }
        }
        acc += tensor_product(&word)?;
    }
    Ok(SymmetricProjector {
        kind: f.kind,
        n_inputs: f.n_inputs,
        local_dim: d,
        mu,
        rank: f.rank,
        matrix: acc,
    })
}

/// T_μ = d 𝒮(P_μ ⊗ I ⊗ … ⊗ I): the sum of P_μ placed at each of the
/// d sites. Satisfies Σ_μ T_μ = x·d·I and T_μ S_μ = r S_μ.
pub fn t_mu<T: Float>(f: &ProjectorFamily<T>, mu: usize) -> Result<ComplexMatrixOf<T>> {
    check_site_rank(f, mu)?;
    let d = f.dim;
    let p = &f.projectors[mu];
    let dim = d.pow(d as u32);
    let mut acc = ComplexMatrixOf::<T>::zeros(dim, dim);
    for site in 0..d {
        let pre = ComplexMatrixOf::<T>::identity(d.pow(site as u32), d.pow(site as u32));
        let post = ComplexMatrixOf::<T>::identity(
            d.pow((d - 1 - site) as u32),
            d.pow((d - 1 - site) as u32),
        );
        acc += tensor_product(&[pre, p.clone(), post])?;
    }
    Ok(acc)
}

/// The stabilizer sum R = Σ_μ S_μ whose top eigenvalue N certifies the
/// common range of the symmetric projections.
pub fn stabilizer_sum<T: Float>(f: &ProjectorFamily<T>) -> Result<ComplexMatrixOf<T>> {
    let dim = f.dim.pow(f.dim as u32);
    let mut acc = ComplexMatrixOf::<T>::zeros(dim, dim);
    for mu in 0..f.n_inputs {
        acc += s_mu(f, mu)?.matrix;
    }
    Ok(acc)
}

/// A Haar-random d×d unitary: QR of a complex Gaussian matrix with the
/// diagonal of R phase-fixed to be positive.
pub fn haar_unitary<T: Float>(d: usize, rng: &mut ChaCha12Rng) -> ComplexMatrixOf<T> {
    let gaussian = ComplexMatrixOf::<T>::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(T::from_f64(re).unwrap(), T::from_f64(im).unwrap())
    });
    let qr = gaussian.qr();
    let r = qr.r();
    let mut q = qr.q();
    // Multiply each column by the phase of the matching diagonal of R
    // so the distribution is exactly Haar rather than QR-convention
    // dependent.
    for j in 0..d {
        let rjj = r[(j, j)];
        let mag = cabs(rjj);
        let phase = if mag > T::zero() {
            rjj / Complex::from(mag)
        } else {
            Complex::from(T::one())
        };
        for i in 0..d {
            let qij = q[(i, j)];
            q[(i, j)] = qij * phase;
        }
    }
    q
}

/// Singlet-property check: for `trials` Haar-random U, applies U to
/// every site and measures min_ξ ‖U^{⊗n}ψ − ξψ‖ with the optimal
/// phase ξ = ⟨ψ|U^{⊗n}|ψ⟩/|⟨ψ|U^{⊗n}|ψ⟩|; returns the maximum over
/// trials.
pub fn check_singlet<T: Float>(state: &StateVector<T>, trials: usize, seed: u64) -> Result<T> {
    if state.parties() != state.local_dim() {
        return Err(Error::DimensionMismatch {
            what: "singlet check requires d parties of local dimension d",
            expected: state.local_dim(),
            got: state.parties(),
        });
    }
    let d = state.local_dim();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut worst = T::zero();
    for _ in 0..trials {
        let u = haar_unitary::<T>(d, &mut rng);
        let mut rotated = state.amplitudes().clone();
        for site in 0..d {
            rotated = apply_local_raw(&rotated, &u, d, d, site)?;
        }
        let overlap = state.amplitudes().dotc(&rotated);
        let mag = cabs(overlap);
        let phase = if mag > T::zero() {
            overlap / Complex::from(mag)
        } else {
            Complex::from(T::one())
        };
        let deviation = (rotated - state.amplitudes() * phase).norm();
        if deviation > worst {
            worst = deviation;
        }
    }
    Ok(worst)
}
