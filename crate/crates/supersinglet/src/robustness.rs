//! The robustness budget (ε, ε′, β, δ, C) of the self-testing theorem
//! and the defect measurements that validate its three approximation
//! lemmas on concrete noisy realizations.
//!
//! A [`Realization`] is a d-party state (pure or mixed) of local
//! dimension d together with per-party binary measurements. The lemma
//! checks compare measured defects against the bounds the theorem
//! derives from δ = ‖p − p̃‖₁, the ℓ1 distance between the realized
//! correlation and the canonical one:
//!
//! * [`sync_defect`] — near-synchronicity of the state under one input,
//!   ‖(E_{μ,0}⊗I − I⊗Q)ψ‖ and ‖E_{μ,0}⊗(I−Q)·ψ‖ against √δ;
//! * [`sum_defect`] — the per-party sum rule ‖x·I − Σ_μ E_{μ,0}‖_ρ
//!   against C·δ^{1/4} with C = (1+2x)√δ + N²;
//! * [`tracial_defect`] — approximate traciality of the site-0 reduced
//!   state on the algebra generated by the effects, against 2ℓ√δ.
//!
//! All bound comparisons allow an absolute numerical slack of
//! [`tol::TOL_VERIFY`] so that the exact case (δ = 0, defects at
//! roundoff level) passes. The constants m and δ′ entering the budget
//! are existential in the underlying theory; they are explicit inputs
//! here (defaults [`DEFAULT_M`], [`DEFAULT_DELTA_PRIME`]) and every
//! report echoes them, so ε-certification is conditional on them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde_json::json;

use crate::correlations::{
    canonical_correlation, check_measurements, correlation_from, effects_from_projectors,
    jittered_projectors, l1_distance, white_noise_density, CorrelationTable, EffectPair,
    NoiseModel, StateInput, TableMode,
};
use crate::families::ProjectorFamily;
use crate::slater::{combinations, slater_state};
use crate::tensor::{
    operator_norm, reduced_density_site, trace_product, DensityMatrix, StateVector,
};
use crate::{tol, Cplx, ComplexMatrix, ComplexVector, Error, Real, Result};

/// Default word-count parameter m of the budget (existential in the
/// theory; callers may override).
pub const DEFAULT_M: usize = 4;

/// Default δ′ of the budget (existential in the theory; callers may
/// override).
pub const DEFAULT_DELTA_PRIME: Real = 1e-3;

/// Absolute numerical slack added to every lemma-bound comparison so
/// that exact realizations (bound 0, defect at roundoff) pass.
pub const BOUND_SLACK: Real = tol::TOL_VERIFY;

/// Largest ambient dimension d^d for which [`extraction_check`] builds
/// the reference state (matches the spectral cap).
pub use crate::algebra::MAX_SPECTRAL_DIM;

// ---------------------------------------------------------------------------
// Budget
// ---------------------------------------------------------------------------

/// The constant chain of the robustness theorem for a family with
/// parameters (N, d, r): the largest ε′ compatible with ε, the derived
/// β, the lemma threshold δ, and the sum-rule constant C.
///
/// The certification is conditional on the user-chosen (m, δ′), which
/// have no constructive formula; they are echoed in every report.
#[derive(Clone, Debug)]
pub struct RobustnessBudget {
    pub n_inputs: usize,
    pub local_dim: usize,
    pub rank: usize,
    /// x = N·r/d, exact.
    pub x: BigRational,
    pub lambda_2: Real,
    pub epsilon: Real,
    /// Largest ε′ with ε′ < (N−λ₂)/(K+1) and
    /// d·ε′ + β√((2d+1)ε′ + 2d√ε′ + β) < ε, found by bisection to
    /// relative precision 1e−6, where K = d!·d·N/((d−r)!·r!).
    pub epsilon_prime: Real,
    /// β = √((2K+1)·ε′/(N−λ₂)).
    pub beta: Real,
    pub m: usize,
    pub delta_prime: Real,
    /// δ = min{ε′, (δ′/(N+1))⁴, (δ′/(2m))²}.
    pub delta: Real,
    /// C = (1+2x)·√δ + N².
    pub c: Real,
}

impl RobustnessBudget {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "N": self.n_inputs,
            "d": self.local_dim,
            "r": self.rank,
            "x": format!("{}/{}", self.x.numer(), self.x.denom()),
            "lambda_2": self.lambda_2,
            "epsilon": self.epsilon,
            "epsilon_prime": self.epsilon_prime,
            "beta": self.beta,
            "m": self.m,
            "delta_prime": self.delta_prime,
            "delta": self.delta,
            "C": self.c,
            "certification": "conditional on user-chosen (m, delta_prime)",
        })
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Combinatorial constant K = d!·d·N/((d−r)!·r!) = C(d,r)·d·N of the
/// budget inequalities.
fn budget_kappa(n_inputs: usize, local_dim: usize, rank: usize) -> Real {
    (binomial(local_dim, rank) * local_dim as u128 * n_inputs as u128) as Real
}

/// The robustness budget for family parameters (N, d, r), spectral
/// runner-up λ₂, and target precision ε. Maximizes ε′ by bisection and
/// re-verifies both defining inequalities by direct substitution
/// before returning.
pub fn budget(
    n_inputs: usize,
    local_dim: usize,
    rank: usize,
    lambda_2: Real,
    epsilon: Real,
    m: usize,
    delta_prime: Real,
) -> Result<RobustnessBudget> {
    if n_inputs < 3 {
        return Err(Error::OutOfRange {
            what: "n_inputs",
            got: n_inputs as i64,
            allowed: "N >= 3",
        });
    }
    if local_dim < 2 || local_dim > 20 {
        return Err(Error::OutOfRange {
            what: "local_dim",
            got: local_dim as i64,
            allowed: "2..=20",
        });
    }
    if rank == 0 || rank >= local_dim {
        return Err(Error::OutOfRange {
            what: "rank",
            got: rank as i64,
            allowed: "1..local_dim",
        });
    }
    if m == 0 {
        return Err(Error::OutOfRange {
            what: "m",
            got: 0,
            allowed: "m >= 1",
        });
    }
    if !(delta_prime > 0.0) || !delta_prime.is_finite() {
        return Err(Error::Malformed(format!(
            "delta_prime must be positive and finite, got {delta_prime}"
        )));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Malformed(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    if !lambda_2.is_finite() {
        return Err(Error::Malformed(format!(
            "lambda_2 must be finite, got {lambda_2}"
        )));
    }

    let n = n_inputs as Real;
    let d = local_dim as Real;
    let gap = n - lambda_2;
    if gap <= 0.0 {
        return Err(Error::InfeasibleBudget {
            epsilon,
            binding: "N - lambda_2 > 0 (no spectral gap)",
        });
    }
    let kappa = budget_kappa(n_inputs, local_dim, rank);
    // Strict upper bound from the first inequality.
    let cap = gap / (kappa + 1.0);
    let beta_of = |e: Real| ((2.0 * kappa + 1.0) * e / gap).sqrt();
    // Left side of the second inequality; strictly increasing in ε′.
    let second_lhs = |e: Real| {
        let b = beta_of(e);
        d * e + b * ((2.0 * d + 1.0) * e + 2.0 * d * e.sqrt() + b).sqrt()
    };
    let feasible = |e: Real| e > 0.0 && e < cap && second_lhs(e) < epsilon;

    let mut lo = 0.0_f64;
    let mut hi = cap;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-6 * hi {
            break;
        }
    }
    let epsilon_prime = lo;
    // Re-verify both inequalities by direct substitution.
    if !(epsilon_prime > 0.0) || !(epsilon_prime < cap) {
        return Err(Error::InfeasibleBudget {
            epsilon,
            binding: "eps' < (N - lambda_2)/(K + 1)",
        });
    }
    if !(second_lhs(epsilon_prime) < epsilon) {
        return Err(Error::InfeasibleBudget {
            epsilon,
            binding: "d*eps' + beta*sqrt((2d+1)*eps' + 2d*sqrt(eps') + beta) < eps",
        });
    }
    let beta = beta_of(epsilon_prime);
    let delta = epsilon_prime
        .min((delta_prime / (n + 1.0)).powi(4))
        .min((delta_prime / (2.0 * m as Real)).powi(2));
    let x = BigRational::new(
        BigInt::from(n_inputs * rank),
        BigInt::from(local_dim),
    );
    let xf = x.to_f64().expect("x fits f64");
    let c = (1.0 + 2.0 * xf) * delta.sqrt() + n * n;
    Ok(RobustnessBudget {
        n_inputs,
        local_dim,
        rank,
        x,
        lambda_2,
        epsilon,
        epsilon_prime,
        beta,
        m,
        delta_prime,
        delta,
        c,
    })
}

// ---------------------------------------------------------------------------
// Realizations
// ---------------------------------------------------------------------------

enum RealizationState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

/// A concrete strategy: a state of d parties with local dimension d
/// (pure or mixed) plus per-party binary measurements. Mixed states
/// are eigendecomposed once at construction; all defect measurements
/// run on the weighted pure components, so nothing ever builds a
/// dᵈ×dᵈ operator.
pub struct Realization {
    local_dim: usize,
    parties: usize,
    n_inputs: usize,
    state: RealizationState,
    components: Vec<(Real, ComplexVector)>,
    measurements: Vec<Vec<EffectPair>>,
}

impl Realization {
    /// Pure-state realization; validates the measurement POVMs.
    pub fn pure(state: StateVector, measurements: Vec<Vec<EffectPair>>) -> Result<Self> {
        let local_dim = state.local_dim();
        let parties = state.parties();
        if measurements.len() != parties {
            return Err(Error::DimensionMismatch {
                what: "measurement parties",
                expected: parties,
                got: measurements.len(),
            });
        }
        let n_inputs = check_measurements(&measurements, local_dim)?;
        let components = vec![(1.0, state.amplitudes().clone())];
        Ok(Realization {
            local_dim,
            parties,
            n_inputs,
            state: RealizationState::Pure(state),
            components,
            measurements,
        })
    }

    /// Mixed-state realization; the density matrix must have been
    /// validated as a state and is eigendecomposed into components
    /// with weight above 1e−14.
    pub fn mixed(
        rho: DensityMatrix,
        local_dim: usize,
        parties: usize,
        measurements: Vec<Vec<EffectPair>>,
    ) -> Result<Self> {
        if !rho.is_state() {
            return Err(Error::UnsupportedState(
                "density matrix was not validated as a state",
            ));
        }
        let dim = local_dim.pow(parties as u32);
        if rho.dim() != dim {
            return Err(Error::DimensionMismatch {
                what: "density matrix dimension",
                expected: dim,
                got: rho.dim(),
            });
        }
        if measurements.len() != parties {
            return Err(Error::DimensionMismatch {
                what: "measurement parties",
                expected: parties,
                got: measurements.len(),
            });
        }
        let n_inputs = check_measurements(&measurements, local_dim)?;
        let eig = nalgebra::SymmetricEigen::new(rho.matrix().clone());
        let mut components = Vec::new();
        for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda > 1e-14 {
                components.push((lambda, eig.eigenvectors.column(i).into_owned()));
            }
        }
        Ok(Realization {
            local_dim,
            parties,
            n_inputs,
            state: RealizationState::Mixed(rho),
            components,
            measurements,
        })
    }

    /// The exact strategy of a family: the Slater state measured with
    /// the family's projectors at every site.
    pub fn canonical(f: &ProjectorFamily) -> Result<Self> {
        let psi = slater_state::<Real>(f.dim)?;
        let effects = effects_from_projectors(&f.projectors);
        Self::pure(psi.into_state_vector(), vec![effects; f.dim])
    }

    /// The canonical strategy distorted by a noise model: white noise
    /// on the state (visibility < 1 yields a mixed state) and unitary
    /// jitter on the projectors, drawn from the model's seed exactly
    /// as in `noisy_correlation`.
    pub fn noisy(f: &ProjectorFamily, noise: &NoiseModel) -> Result<Self> {
        let projectors = jittered_projectors(f, noise);
        let effects = effects_from_projectors(&projectors);
        let measurements = vec![effects; f.dim];
        let psi = slater_state::<Real>(f.dim)?;
        if noise.visibility >= 1.0 {
            Self::pure(psi.into_state_vector(), measurements)
        } else {
            let rho = white_noise_density(psi.state_vector(), noise.visibility)?;
            Self::mixed(rho, f.dim, f.dim, measurements)
        }
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.state, RealizationState::Pure(_))
    }

    pub fn measurements(&self) -> &[Vec<EffectPair>] {
        &self.measurements
    }

    /// Weighted pure components (unit eigenvectors with eigenvalue
    /// weights; a single weight-1 entry for pure states).
    pub fn components(&self) -> &[(Real, ComplexVector)] {
        &self.components
    }

    /// The correlation table this realization produces.
    pub fn correlation(&self, mode: TableMode) -> Result<CorrelationTable> {
        match &self.state {
            RealizationState::Pure(sv) => {
                correlation_from(StateInput::Pure(sv), &self.measurements, mode)
            }
            RealizationState::Mixed(rho) => {
                correlation_from(StateInput::Mixed(rho), &self.measurements, mode)
            }
        }
    }

    /// δ = ‖p − p̃‖₁ between this realization's full table and the
    /// family's canonical one.
    pub fn measured_delta(&self, f: &ProjectorFamily) -> Result<Real> {
        self.check_shape(f)?;
        let table = self.correlation(TableMode::Full)?;
        let reference = canonical_correlation(f, TableMode::Full)?;
        l1_distance(&table, &reference)
    }

    fn check_shape(&self, f: &ProjectorFamily) -> Result<()> {
        if self.local_dim != f.dim || self.parties != f.dim {
            return Err(Error::DimensionMismatch {
                what: "realization local dimension",
                expected: f.dim,
                got: self.local_dim,
            });
        }
        if self.n_inputs != f.n_inputs {
            return Err(Error::DimensionMismatch {
                what: "realization inputs",
                expected: f.n_inputs,
                got: self.n_inputs,
            });
        }
        Ok(())
    }

    /// Site-k reduced density matrix, averaged over the components.
    fn reduced_site(&self, site: usize) -> Result<ComplexMatrix> {
        let mut rho = ComplexMatrix::zeros(self.local_dim, self.local_dim);
        for (w, v) in &self.components {
            rho += reduced_density_site(v, self.local_dim, self.parties, site)?
                * Cplx::from(*w);
        }
        Ok(rho)
    }
}

fn ensure_delta(real: &Realization, f: &ProjectorFamily, declared: Real) -> Result<Real> {
    if !(declared >= 0.0) || !declared.is_finite() {
        return Err(Error::Malformed(format!(
            "delta must be nonnegative and finite, got {declared}"
        )));
    }
    let measured = real.measured_delta(f)?;
    if measured > declared {
        return Err(Error::DeltaPrecondition {
            measured,
            declared,
        });
    }
    Ok(measured)
}

// ---------------------------------------------------------------------------
// Lemma 1: approximate synchronicity
// ---------------------------------------------------------------------------

/// Defects of the near-synchronicity lemma for one input μ. Both
/// left-hand sides are ρ-averaged vector norms over the realization's
/// components; the bound is √δ at the declared δ.
#[derive(Clone, Debug)]
pub struct SyncDefectReport {
    pub mu: usize,
    /// ‖(E_{μ,0}⊗I − I⊗Q)ψ‖.
    pub lhs_1: Real,
    /// ‖E_{μ,0}⊗(I−Q)·ψ‖.
    pub lhs_2: Real,
    pub bound: Real,
    pub measured_delta: Real,
    pub declared_delta: Real,
    pub pass: bool,
}

impl SyncDefectReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "mu": self.mu,
            "lhs_1": self.lhs_1,
            "lhs_2": self.lhs_2,
            "bound": self.bound,
            "measured_delta": self.measured_delta,
            "declared_delta": self.declared_delta,
            "pass": self.pass,
        })
    }
}

/// Q for input μ: the sum over outcome tuples a ∈ {0,1}^{d−1} with
/// Σa_k = d−r of ⊗_{k=1..d−1} E^{(k)}_{μ,a_k} — the diagonal outcome
/// block that accompanies outcome 0 at site 0 in a synchronous table.
fn q_operator(
    measurements: &[Vec<EffectPair>],
    mu: usize,
    rank: usize,
    parties: usize,
) -> ComplexMatrix {
    let ones_needed = parties - rank;
    let mut q: Option<ComplexMatrix> = None;
    for ones in combinations(parties - 1, ones_needed) {
        let mut term = ComplexMatrix::identity(1, 1);
        for k in 1..parties {
            let outcome = usize::from(ones.contains(&(k - 1)));
            term = term.kronecker(&measurements[k][mu][outcome]);
        }
        q = Some(match q {
            None => term,
            Some(acc) => acc + term,
        });
    }
    q.expect("at least one outcome tuple")
}

/// Applies an operator on the trailing (parties 1..d−1) factor: the
/// amplitude vector is viewed as local_dim blocks of q.nrows().
fn apply_trailing(v: &ComplexVector, q: &ComplexMatrix, local_dim: usize) -> ComplexVector {
    let block = q.nrows();
    debug_assert_eq!(v.len(), local_dim * block);
    let mut out = ComplexVector::zeros(v.len());
    for lead in 0..local_dim {
        let seg = v.rows(lead * block, block);
        out.rows_mut(lead * block, block).copy_from(&(q * seg));
    }
    out
}

fn sync_defect_core(
    real: &Realization,
    rank: usize,
    mu: usize,
    declared: Real,
    measured: Real,
) -> Result<SyncDefectReport> {
    if mu >= real.n_inputs {
        return Err(Error::OutOfRange {
            what: "input index",
            got: mu as i64,
            allowed: "0..n_inputs",
        });
    }
    let d = real.local_dim;
    let n = real.parties;
    let q = q_operator(&real.measurements, mu, rank, n);
    let e0 = &real.measurements[0][mu][0];
    let mut lhs_1_sq = 0.0;
    let mut lhs_2_sq = 0.0;
    for (w, v) in &real.components {
        let ev = crate::tensor::apply_local_raw(v, e0, d, n, 0)?;
        let qv = apply_trailing(v, &q, d);
        lhs_1_sq += w * (&ev - &qv).norm_squared();
        let eqv = crate::tensor::apply_local_raw(&qv, e0, d, n, 0)?;
        lhs_2_sq += w * (&ev - &eqv).norm_squared();
    }
    let lhs_1 = lhs_1_sq.max(0.0).sqrt();
    let lhs_2 = lhs_2_sq.max(0.0).sqrt();
    let bound = declared.sqrt();
    Ok(SyncDefectReport {
        mu,
        lhs_1,
        lhs_2,
        bound,
        measured_delta: measured,
        declared_delta: declared,
        pass: lhs_1 <= bound + BOUND_SLACK && lhs_2 <= bound + BOUND_SLACK,
    })
}

/// Near-synchronicity defects of a realization for input μ against the
/// family's canonical correlation. Checks the δ precondition (measured
/// ℓ1 distance ≤ declared δ), then compares both defects to √δ.
pub fn sync_defect(
    real: &Realization,
    f: &ProjectorFamily,
    mu: usize,
    delta: Real,
) -> Result<SyncDefectReport> {
    let measured = ensure_delta(real, f, delta)?;
    sync_defect_core(real, f.rank, mu, delta, measured)
}

// ---------------------------------------------------------------------------
// Lemma 2: approximate sum rule
// ---------------------------------------------------------------------------

/// Per-party defects ‖x·I − Σ_μ E_{μ,0}‖_{ρ_k} of the sum-rule lemma,
/// with bound C·δ^{1/4}, C = (1+2x)√δ + N². The sharper final form
/// (1+2x)δ + N²√δ is recorded as `alt_bound` but not enforced.
#[derive(Clone, Debug)]
pub struct SumDefectReport {
    pub per_party: Vec<Real>,
    pub max_defect: Real,
    pub bound: Real,
    pub alt_bound: Real,
    pub c: Real,
    pub x: Real,
    pub measured_delta: Real,
    pub declared_delta: Real,
    pub pass: bool,
}

impl SumDefectReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "per_party": self.per_party,
            "max_defect": self.max_defect,
            "bound": self.bound,
            "alt_bound": self.alt_bound,
            "C": self.c,
            "x": self.x,
            "measured_delta": self.measured_delta,
            "declared_delta": self.declared_delta,
            "pass": self.pass,
        })
    }
}

fn sum_defect_core(
    real: &Realization,
    x: Real,
    declared: Real,
    measured: Real,
) -> Result<SumDefectReport> {
    let d = real.local_dim;
    let n = real.n_inputs as Real;
    let mut per_party = Vec::with_capacity(real.parties);
    for k in 0..real.parties {
        let rho_k = DensityMatrix::raw(real.reduced_site(k)?)?;
        let mut m = ComplexMatrix::identity(d, d) * Cplx::from(x);
        for mu in 0..real.n_inputs {
            m -= &real.measurements[k][mu][0];
        }
        per_party.push(crate::tensor::rho_norm(&rho_k, &m)?);
    }
    let max_defect = per_party.iter().cloned().fold(0.0, Real::max);
    let c = (1.0 + 2.0 * x) * declared.sqrt() + n * n;
    let bound = c * declared.powf(0.25);
    let alt_bound = (1.0 + 2.0 * x) * declared + n * n * declared.sqrt();
    Ok(SumDefectReport {
        per_party,
        max_defect,
        bound,
        alt_bound,
        c,
        x,
        measured_delta: measured,
        declared_delta: declared,
        pass: max_defect <= bound + BOUND_SLACK,
    })
}

/// Sum-rule defects of a realization against the family's canonical
/// correlation: for every party k, the ρ_k-weighted norm of
/// x·I − Σ_μ E^{(k)}_{μ,0} must stay below C·δ^{1/4}. Checks the δ
/// precondition first.
pub fn sum_defect(
    real: &Realization,
    f: &ProjectorFamily,
    delta: Real,
) -> Result<SumDefectReport> {
    let measured = ensure_delta(real, f, delta)?;
    sum_defect_core(real, f.x.to_float::<Real>(), delta, measured)
}

// ---------------------------------------------------------------------------
// Lemma 3: approximate traciality
// ---------------------------------------------------------------------------

/// Sampled commutator-trace defects max |tr(ρ₀(WX − XW))| of the
/// traciality lemma, with bound 2ℓ√δ. The sampled words are reported
/// for replay together with the seed.
#[derive(Clone, Debug)]
pub struct TracialDefectReport {
    pub word_length: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_defect: Real,
    pub bound: Real,
    /// The sampled words W, each a list of input indices.
    pub words: Vec<Vec<u8>>,
    pub declared_delta: Real,
    pub pass: bool,
}

impl TracialDefectReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "word_length": self.word_length,
            "trials": self.trials,
            "seed": self.seed,
            "max_defect": self.max_defect,
            "bound": self.bound,
            "words": self.words,
            "declared_delta": self.declared_delta,
            "pass": self.pass,
        })
    }
}

fn sample_word(rng: &mut ChaCha12Rng, len: usize, n_inputs: usize) -> Vec<u8> {
    (0..len).map(|_| rng.gen_range(0..n_inputs) as u8).collect()
}

fn word_product(word: &[u8], effects: &[&ComplexMatrix], dim: usize) -> ComplexMatrix {
    let mut acc = ComplexMatrix::identity(dim, dim);
    for &i in word {
        acc = acc * effects[i as usize];
    }
    acc
}

/// Traciality defects of the site-0 reduced state: samples `trials`
/// random words W of length ℓ in the party-0 outcome-0 effects and
/// random contractions X from their generated algebra (a Gaussian
/// combination of shorter words, rescaled to operator norm ≤ 1), and
/// compares max |tr(ρ₀(WX − XW))| to 2ℓ√δ. No δ precondition is
/// enforced here; δ only sets the bound.
pub fn tracial_defect(
    real: &Realization,
    word_length: usize,
    trials: usize,
    seed: u64,
    delta: Real,
) -> Result<TracialDefectReport> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::Malformed(format!(
            "delta must be nonnegative and finite, got {delta}"
        )));
    }
    let d = real.local_dim;
    let rho0 = real.reduced_site(0)?;
    let effects: Vec<&ComplexMatrix> = (0..real.n_inputs)
        .map(|mu| &real.measurements[0][mu][0])
        .collect();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut max_defect = 0.0_f64;
    let mut words = Vec::with_capacity(trials);
    for _ in 0..trials {
        let word = sample_word(&mut rng, word_length, real.n_inputs);
        let w_op = word_product(&word, &effects, d);
        // X: Gaussian combination of three random words of length ≤ ℓ,
        // rescaled into the unit operator-norm ball.
        let mut x = ComplexMatrix::zeros(d, d);
        for _ in 0..3 {
            let len = rng.gen_range(0..=word_length);
            let w = sample_word(&mut rng, len, real.n_inputs);
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            x += word_product(&w, &effects, d) * Cplx::new(re, im);
        }
        let norm = operator_norm(&x);
        if norm > 1.0 {
            x /= Cplx::from(norm);
        }
        let comm = &w_op * &x - &x * &w_op;
        let defect = crate::tensor::cabs(trace_product(&rho0, &comm));
        max_defect = max_defect.max(defect);
        words.push(word);
    }
    let bound = 2.0 * word_length as Real * delta.sqrt();
    Ok(TracialDefectReport {
        word_length,
        trials,
        seed,
        max_defect,
        bound,
        words,
        declared_delta: delta,
        pass: max_defect <= bound + BOUND_SLACK,
    })
}

// ---------------------------------------------------------------------------
// Extraction
// ---------------------------------------------------------------------------

/// Overlap of a pure realization state with the Slater state and the
/// derived trace-distance surrogate √(2(1−α)); when a budget applies
/// (measured δ ≤ budget δ) the distance is compared to β.
#[derive(Clone, Debug)]
pub struct ExtractionReport {
    /// α = |⟨Ψ_S|ψ̃⟩|².
    pub alpha: Real,
    /// √(2(1−α)), the lemma's distance bound form.
    pub state_distance: Real,
    /// min_θ ‖ψ̃ − e^{iθ}Ψ_S‖ = √(2(1−√α)), always ≤ state_distance.
    pub direct_distance: Real,
    pub beta_bound: Option<Real>,
    pub measured_delta: Option<Real>,
    pub pass: bool,
}

impl ExtractionReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "alpha": self.alpha,
            "state_distance": self.state_distance,
            "direct_distance": self.direct_distance,
            "beta_bound": self.beta_bound,
            "measured_delta": self.measured_delta,
            "pass": self.pass,
        })
    }
}

/// Extraction overlap of a pure realization already living in the
/// canonical dimensions (d parties of dimension d, no junk factor).
/// Mixed realizations are refused: they carry no single overlap α.
pub fn extraction_check(
    real: &Realization,
    f: &ProjectorFamily,
    budget: Option<&RobustnessBudget>,
) -> Result<ExtractionReport> {
    real.check_shape(f)?;
    let ambient = (f.dim as u64).pow(f.dim as u32);
    if ambient > MAX_SPECTRAL_DIM as u64 {
        return Err(Error::SizeCap {
            what: "extraction ambient dimension d^d",
            got: ambient,
            cap: MAX_SPECTRAL_DIM as u64,
        });
    }
    if !real.is_pure() {
        return Err(Error::UnsupportedState(
            "mixed realizations carry no single overlap alpha; extraction_check requires a pure state",
        ));
    }
    let slater = slater_state::<Real>(f.dim)?;
    let psi = &real.components[0].1;
    let z = slater.state_vector().amplitudes().dotc(psi);
    let alpha = (z.norm_sqr()).min(1.0);
    let state_distance = (2.0 * (1.0 - alpha)).max(0.0).sqrt();
    let direct_distance = (2.0 * (1.0 - alpha.sqrt())).max(0.0).sqrt();
    let (beta_bound, measured_delta, pass) = match budget {
        None => (None, None, true),
        Some(b) => {
            let measured = real.measured_delta(f)?;
            if measured > b.delta {
                return Err(Error::DeltaPrecondition {
                    measured,
                    declared: b.delta,
                });
            }
            (
                Some(b.beta),
                Some(measured),
                state_distance <= b.beta + BOUND_SLACK,
            )
        }
    };
    Ok(ExtractionReport {
        alpha,
        state_distance,
        direct_distance,
        beta_bound,
        measured_delta,
        pass,
    })
}

// ---------------------------------------------------------------------------
// Noise sweep
// ---------------------------------------------------------------------------

/// One noise model's full lemma suite: the measured δ is used as the
/// declared δ of every bound, so each record is the tightest
/// self-consistent check of the lemmas on that realization.
#[derive(Clone, Debug)]
pub struct SweepRecord {
    pub noise: NoiseModel,
    pub measured_delta: Real,
    pub sync: Vec<SyncDefectReport>,
    pub sum: SumDefectReport,
    pub tracial: TracialDefectReport,
    pub pass: bool,
}

impl SweepRecord {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "noise": {
                "v": self.noise.visibility,
                "eps_m": self.noise.measurement_jitter,
                "seed": self.noise.seed,
            },
            "delta": self.measured_delta,
            "sync_defect": self.sync.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
            "sum_defect": self.sum.to_json(),
            "tracial_defect": self.tracial.to_json(),
            "bounds": {
                "sync": self.sync.first().map(|s| s.bound),
                "sum": self.sum.bound,
                "tracial": self.tracial.bound,
            },
            "pass_flags": {
                "sync": self.sync.iter().all(|s| s.pass),
                "sum": self.sum.pass,
                "tracial": self.tracial.pass,
            },
            "pass": self.pass,
        })
    }
}

/// Runs the three lemma checks on one noisy realization per model.
/// The canonical reference table is computed once; each model's
/// measured δ doubles as the declared δ, so the precondition is
/// satisfied by construction. The word seed is shared across models so
/// tracial defects are comparable.
pub fn noise_sweep(
    f: &ProjectorFamily,
    models: &[NoiseModel],
    word_length: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<SweepRecord>> {
    if models.is_empty() {
        return Err(Error::EmptyInput("noise models"));
    }
    let reference = canonical_correlation(f, TableMode::Full)?;
    let x = f.x.to_float::<Real>();
    let mut records = Vec::with_capacity(models.len());
    for model in models {
        let real = Realization::noisy(f, model)?;
        let table = real.correlation(TableMode::Full)?;
        let measured = l1_distance(&table, &reference)?;
        let mut sync = Vec::with_capacity(f.n_inputs);
        for mu in 0..f.n_inputs {
            sync.push(sync_defect_core(&real, f.rank, mu, measured, measured)?);
        }
        let sum = sum_defect_core(&real, x, measured, measured)?;
        let tracial = tracial_defect(&real, word_length, trials, seed, measured)?;
        let pass = sync.iter().all(|s| s.pass) && sum.pass && tracial.pass;
        records.push(SweepRecord {
            noise: model.clone(),
            measured_delta: measured,
            sync,
            sum,
            tracial,
            pass,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::rank_one_family;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(3, 1), 3);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(4, 0), 1);
    }

    #[test]
    fn q_operator_is_the_synchronous_block() {
        // Canonical rank-1 family at d=3: Q for input μ on parties 1,2
        // sums E_{μ,a₁}⊗E_{μ,a₂} over a₁+a₂ = d−r = 2, i.e. the single
        // tuple (1,1).
        let f = rank_one_family::<Real>(3).unwrap();
        let real = Realization::canonical(&f).unwrap();
        let q = q_operator(&real.measurements, 0, f.rank, 3);
        let e1 = &real.measurements[1][0][1];
        let e2 = &real.measurements[2][0][1];
        let expected = e1.kronecker(e2);
        assert!(crate::tensor::max_abs_diff(&q, &expected) < 1e-14);
    }

    #[test]
    fn apply_trailing_matches_identity_tensor_q() {
        let f = rank_one_family::<Real>(3).unwrap();
        let real = Realization::canonical(&f).unwrap();
        let q = q_operator(&real.measurements, 1, f.rank, 3);
        let v = &real.components[0].1;
        let fast = apply_trailing(v, &q, 3);
        let id = ComplexMatrix::identity(3, 3);
        let dense = id.kronecker(&q) * v;
        assert!((fast - dense).norm() < 1e-13);
    }

    #[test]
    fn budget_rejects_missing_gap() {
        let err = budget(4, 3, 1, 4.0, 0.1, 4, 1e-3).unwrap_err();
        assert!(matches!(err, Error::InfeasibleBudget { .. }), "{err}");
    }
}
