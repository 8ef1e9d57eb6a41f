//! Bell correlation tables p(a|μ) for d parties with N binary
//! measurements each, their noise models, the synchronous-vanishing
//! check, ℓ1 distances, and LHV membership by linear programming.

use std::collections::BTreeMap;

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::families::ProjectorFamily;
use crate::slater::slater_state;
use crate::tensor::{apply_local_raw, DensityMatrix, StateVector};
use crate::{Cplx, ComplexMatrix, ComplexVector, Error, Real, Result};

/// Which input tuples a table covers: every μ-tuple in [N]^d, or only
/// the N constant (synchronous) tuples μ̄ = (μ,…,μ).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableMode {
    Full,
    Diagonal,
}

impl TableMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TableMode::Full => "full",
            TableMode::Diagonal => "diagonal",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(TableMode::Full),
            "diagonal" => Ok(TableMode::Diagonal),
            other => Err(Error::Malformed(format!("unknown table mode {other:?}"))),
        }
    }
}

/// How a table came to be; informational only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Canonical,
    Noisy,
    External,
}

/// Table key: the μ-tuple and outcome tuple, party-ordered.
pub type TableKey = (Vec<u8>, Vec<u8>);

/// Hard cap on full-mode table size (N^d · 2^d entries).
pub const MAX_FULL_ENTRIES: u128 = 1_000_000;

/// Hard cap on LHV linear-program variables ((2^N)^d vertices).
pub const MAX_LHV_VARIABLES: u128 = 100_000;

/// A Bell correlation table over d parties, each choosing one of N
/// binary measurements. Entries are keyed deterministically
/// (lexicographic in the μ-tuple, then the outcome tuple).
#[derive(Clone, Debug)]
pub struct CorrelationTable {
    d: usize,
    n_inputs: usize,
    mode: TableMode,
    provenance: Provenance,
    entries: BTreeMap<TableKey, Real>,
}

impl CorrelationTable {
    pub fn parties(&self) -> usize {
        self.d
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn mode(&self) -> TableMode {
        self.mode
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn entries(&self) -> &BTreeMap<TableKey, Real> {
        &self.entries
    }

    pub fn get(&self, mu: &[u8], a: &[u8]) -> Option<Real> {
        self.entries.get(&(mu.to_vec(), a.to_vec())).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks the structural invariants: probabilities within
    /// [−1e−12, 1+1e−12], each μ-row summing to 1 within 1e−10, and in
    /// diagonal mode exactly the N constant tuples.
    pub fn validate(&self) -> Result<()> {
        let mut rows: BTreeMap<&Vec<u8>, Real> = BTreeMap::new();
        for ((mu, a), &p) in &self.entries {
            if mu.len() != self.d || a.len() != self.d {
                return Err(Error::TableMismatch(format!(
                    "key ({mu:?}, {a:?}) does not address {} parties",
                    self.d
                )));
            }
            if mu.iter().any(|&m| m as usize >= self.n_inputs) || a.iter().any(|&b| b > 1) {
                return Err(Error::TableMismatch(format!(
                    "key ({mu:?}, {a:?}) outside [N]^d x {{0,1}}^d"
                )));
            }
            if !(-1e-12..=1.0 + 1e-12).contains(&p) {
                return Err(Error::TableMismatch(format!(
                    "probability {p} at ({mu:?}, {a:?}) outside [0, 1]"
                )));
            }
            *rows.entry(mu).or_insert(0.0) += p;
        }
        for (mu, total) in &rows {
            if (total - 1.0).abs() > 1e-10 {
                return Err(Error::TableMismatch(format!(
                    "row {mu:?} sums to {total}, not 1"
                )));
            }
        }
        if self.mode == TableMode::Diagonal {
            let diagonal_rows = rows.keys().all(|mu| mu.windows(2).all(|w| w[0] == w[1]));
            if !diagonal_rows || rows.len() != self.n_inputs {
                return Err(Error::TableMismatch(format!(
                    "diagonal mode requires exactly the {} constant tuples, found {} rows",
                    self.n_inputs,
                    rows.len()
                )));
            }
        }
        Ok(())
    }

    /// JSON document {d, N, mode, entries: [{mu, a, p}]} with entries
    /// in deterministic key order.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|((mu, a), &p)| json!({"mu": mu, "a": a, "p": p}))
            .collect();
        json!({
            "d": self.d,
            "N": self.n_inputs,
            "mode": self.mode.as_str(),
            "entries": entries,
        })
    }

    /// Parses [`Self::to_json`] output (provenance becomes External)
    /// and revalidates the invariants.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Malformed("table document is not an object".into()))?;
        let get_usize = |key: &str| -> Result<usize> {
            obj.get(key)
                .and_then(|v| v.as_u64())
                .map(|v| v as usize)
                .ok_or_else(|| Error::Malformed(format!("missing integer field {key:?}")))
        };
        let d = get_usize("d")?;
        let n_inputs = get_usize("N")?;
        let mode = TableMode::parse(
            obj.get("mode")
                .and_then(|v| v.as_str())
                .ok_or_else(|| Error::Malformed("missing string field \"mode\"".into()))?,
        )?;
        let raw = obj
            .get("entries")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::Malformed("missing array field \"entries\"".into()))?;
        let mut entries = BTreeMap::new();
        for item in raw {
            let tuple = |key: &str| -> Result<Vec<u8>> {
                item.get(key)
                    .and_then(|v| v.as_array())
                    .map(|arr| {
                        arr.iter()
                            .map(|x| {
                                x.as_u64()
                                    .filter(|&x| x < 256)
                                    .map(|x| x as u8)
                                    .ok_or_else(|| {
                                        Error::Malformed(format!("bad {key} tuple entry {x}"))
                                    })
                            })
                            .collect::<Result<Vec<u8>>>()
                    })
                    .ok_or_else(|| Error::Malformed(format!("missing tuple field {key:?}")))?
            };
            let p = item
                .get("p")
                .and_then(|v| v.as_f64())
                .ok_or_else(|| Error::Malformed("missing number field \"p\"".into()))?;
            if entries.insert((tuple("mu")?, tuple("a")?), p).is_some() {
                return Err(Error::Malformed("duplicate table key".into()));
            }
        }
        let table = CorrelationTable {
            d,
            n_inputs,
            mode,
            provenance: Provenance::External,
            entries,
        };
        table.validate()?;
        Ok(table)
    }

    /// CSV export with columns mu_0..mu_{d−1}, a_0..a_{d−1}, p, floats
    /// rendered with 17 significant decimal digits.
    pub fn to_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = Vec::with_capacity(2 * self.d + 1);
        header.extend((0..self.d).map(|k| format!("mu_{k}")));
        header.extend((0..self.d).map(|k| format!("a_{k}")));
        header.push("p".into());
        w.write_record(&header).map_err(csv_err)?;
        for ((mu, a), &p) in &self.entries {
            let mut record: Vec<String> = Vec::with_capacity(2 * self.d + 1);
            record.extend(mu.iter().map(|m| m.to_string()));
            record.extend(a.iter().map(|b| b.to_string()));
            record.push(format!("{p:.16e}"));
            w.write_record(&record).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Malformed(format!("csv: {e}"))
}

/// White noise on the state plus unitary jitter on the measurements.
/// Visibility v mixes the state with the maximally mixed one; jitter
/// conjugates every projector of input μ by exp(iεH_μ) with a fresh
/// seeded random Hermitian H_μ of unit Frobenius norm, so projectors
/// stay exactly idempotent.
#[derive(Clone, Copy, Debug)]
pub struct NoiseModel {
    pub visibility: Real,
    pub measurement_jitter: Real,
    pub seed: u64,
}

impl NoiseModel {
    pub fn new(visibility: Real, measurement_jitter: Real, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&visibility) || !visibility.is_finite() {
            return Err(Error::OutOfRange {
                what: "visibility",
                got: (visibility * 1e6) as i64,
                allowed: "0 <= v <= 1",
            });
        }
        if measurement_jitter < 0.0 || !measurement_jitter.is_finite() {
            return Err(Error::OutOfRange {
                what: "measurement_jitter",
                got: (measurement_jitter * 1e6) as i64,
                allowed: "epsilon >= 0",
            });
        }
        Ok(NoiseModel {
            visibility,
            measurement_jitter,
            seed,
        })
    }
}

/// A binary measurement as its two effects [E₀, E₁] with E₀+E₁ = I.
pub type EffectPair = [ComplexMatrix; 2];

/// Effects of a projector list: E₀ = P, E₁ = I − P for each input.
pub fn effects_from_projectors(projectors: &[ComplexMatrix]) -> Vec<EffectPair> {
    projectors
        .iter()
        .map(|p| {
            let id = ComplexMatrix::identity(p.nrows(), p.nrows());
            [p.clone(), id - p]
        })
        .collect()
}

/// The state argument of [`correlation_from`].
#[derive(Clone, Copy)]
pub enum StateInput<'a> {
    Pure(&'a StateVector),
    Mixed(&'a DensityMatrix),
}

fn check_full_cap(n_inputs: usize, d: usize) -> Result<()> {
    let entries = (n_inputs as u128).pow(d as u32) * (1u128 << d);
    if entries > MAX_FULL_ENTRIES {
        return Err(Error::SizeCap {
            what: "full-mode table entries N^d 2^d",
            got: entries.min(u64::MAX as u128) as u64,
            cap: MAX_FULL_ENTRIES as u64,
        });
    }
    Ok(())
}

/// Walks the (μ, a) tree party by party, applying effects to a shared
/// prefix vector; the complement branch reuses the parent via
/// subtraction because E₁ = I − E₀ within the POVM tolerance.
struct TableWalker<'a> {
    effects: &'a [Vec<EffectPair>],
    local_dim: usize,
    parties: usize,
    origin: &'a ComplexVector,
    weight: Real,
    fixed_mu: Option<u8>,
    out: &'a mut BTreeMap<TableKey, Real>,
}

impl TableWalker<'_> {
    fn walk(&mut self, depth: usize, current: &ComplexVector, mu: &mut Vec<u8>, a: &mut Vec<u8>) {
        if depth == self.parties {
            let p = self.weight * self.origin.dotc(current).re;
            *self
                .out
                .entry((mu.clone(), a.clone()))
                .or_insert(0.0) += p;
            return;
        }
        let inputs: Vec<u8> = match self.fixed_mu {
            Some(m) => vec![m],
            None => (0..self.effects[depth].len() as u8).collect(),
        };
        for m in inputs {
            let e0 = &self.effects[depth][m as usize][0];
            let kept = apply_local_raw(current, e0, self.local_dim, self.parties, depth)
                .expect("dimensions checked before walking");
            let complement = current - &kept;
            mu.push(m);
            a.push(0);
            self.walk(depth + 1, &kept, mu, a);
            a.pop();
            a.push(1);
            self.walk(depth + 1, &complement, mu, a);
            a.pop();
            mu.pop();
        }
    }
}

pub(crate) fn check_measurements(measurements: &[Vec<EffectPair>], local_dim: usize) -> Result<usize> {
    if measurements.is_empty() {
        return Err(Error::EmptyInput("measurements"));
    }
    let n_inputs = measurements[0].len();
    for (party, inputs) in measurements.iter().enumerate() {
        if inputs.len() != n_inputs {
            return Err(Error::DimensionMismatch {
                what: "inputs per party",
                expected: n_inputs,
                got: inputs.len(),
            });
        }
        for (mu, pair) in inputs.iter().enumerate() {
            for e in pair {
                if e.nrows() != local_dim || e.ncols() != local_dim {
                    return Err(Error::DimensionMismatch {
                        what: "effect dimension",
                        expected: local_dim,
                        got: e.nrows(),
                    });
                }
            }
            let completeness = &pair[0] + &pair[1] - ComplexMatrix::identity(local_dim, local_dim);
            let deviation = crate::tensor::max_abs(&completeness);
            if deviation > crate::tol::TOL_VERIFY {
                return Err(Error::IncompletePovm {
                    party,
                    mu,
                    deviation,
                });
            }
        }
    }
    Ok(n_inputs)
}

/// General correlation table p(a|μ) = tr(ρ · E⁽⁰⁾_{μ₀,a₀} ⊗ … ) for a
/// pure or mixed state and per-party binary measurements. Mixed states
/// are eigendecomposed and handled as convex mixtures of pure states,
/// so the cost scales with the state rank.
pub fn correlation_from(
    state: StateInput,
    measurements: &[Vec<EffectPair>],
    mode: TableMode,
) -> Result<CorrelationTable> {
    let parties = measurements.len();
    let local_dim = measurements
        .first()
        .and_then(|m| m.first())
        .map(|pair| pair[0].nrows())
        .ok_or(Error::EmptyInput("measurements"))?;
    let n_inputs = check_measurements(measurements, local_dim)?;
    if mode == TableMode::Full {
        check_full_cap(n_inputs, parties)?;
    }
    let dim = local_dim.pow(parties as u32);

    // Decompose the state into weighted pure components.
    let mut components: Vec<(Real, ComplexVector)> = Vec::new();
    match state {
        StateInput::Pure(psi) => {
            if psi.local_dim() != local_dim || psi.parties() != parties {
                return Err(Error::DimensionMismatch {
                    what: "state configuration",
                    expected: dim,
                    got: psi.amplitudes().len(),
                });
            }
            components.push((1.0, psi.amplitudes().clone()));
        }
        StateInput::Mixed(rho) => {
            if rho.dim() != dim {
                return Err(Error::DimensionMismatch {
                    what: "density matrix dimension",
                    expected: dim,
                    got: rho.dim(),
                });
            }
            let eig = nalgebra::SymmetricEigen::new(rho.matrix().clone());
            for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
                if lambda > 1e-14 {
                    components.push((lambda, eig.eigenvectors.column(i).into_owned()));
                }
            }
        }
    }

    let mut entries = BTreeMap::new();
    for (weight, vector) in &components {
        let runs: Vec<Option<u8>> = match mode {
            TableMode::Full => vec![None],
            TableMode::Diagonal => (0..n_inputs as u8).map(Some).collect(),
        };
        for fixed_mu in runs {
            let mut walker = TableWalker {
                effects: measurements,
                local_dim,
                parties,
                origin: vector,
                weight: *weight,
                fixed_mu,
                out: &mut entries,
            };
            walker.walk(0, vector, &mut Vec::new(), &mut Vec::new());
        }
    }
    let table = CorrelationTable {
        d: parties,
        n_inputs,
        mode,
        provenance: Provenance::External,
        entries,
    };
    table.validate()?;
    Ok(table)
}

/// The canonical table: the Slater state of dimension d measured with
/// the same projector family at every site. Entries are evaluated by
/// sequential local application with shared prefixes, never through
/// dense d^d × d^d operators.
pub fn canonical_correlation(f: &ProjectorFamily, mode: TableMode) -> Result<CorrelationTable> {
    let psi = slater_state::<Real>(f.dim)?;
    let per_party = effects_from_projectors(&f.projectors);
    let measurements: Vec<Vec<EffectPair>> = vec![per_party; f.dim];
    let mut table = correlation_from(StateInput::Pure(psi.state_vector()), &measurements, mode)?;
    table.provenance = Provenance::Canonical;
    Ok(table)
}

/// Unitary exp(iεH) for a seeded random Hermitian H of unit Frobenius
/// norm, via the eigendecomposition of H.
pub fn jitter_unitary(dim: usize, epsilon: Real, rng: &mut ChaCha12Rng) -> ComplexMatrix {
    let h = random_unit_hermitian(dim, rng);
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut u = ComplexMatrix::zeros(dim, dim);
    for j in 0..dim {
        let phase = Complex::from_polar(1.0, epsilon * eig.eigenvalues[j]);
        let col = eig.eigenvectors.column(j);
        for r in 0..dim {
            for c in 0..dim {
                u[(r, c)] += phase * col[r] * col[c].conj();
            }
        }
    }
    u
}

fn random_unit_hermitian(dim: usize, rng: &mut ChaCha12Rng) -> ComplexMatrix {
    use rand::Rng;
    use rand_distr::StandardNormal;
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| {
        Cplx::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let mut h = crate::tensor::hermitian_part(&g);
    let norm = h.iter().map(|z| z.norm_sqr()).sum::<Real>().sqrt();
    if norm > 0.0 {
        h /= Complex::from(norm);
    }
    h
}

/// The family's projectors after unitary jitter: each P_μ is
/// conjugated by exp(iεH_μ) with a fresh Hermitian drawn from the
/// model's seed, so repeated calls are reproducible.
pub fn jittered_projectors(f: &ProjectorFamily, noise: &NoiseModel) -> Vec<ComplexMatrix> {
    let mut projectors = f.projectors.clone();
    if noise.measurement_jitter > 0.0 {
        let mut rng = ChaCha12Rng::seed_from_u64(noise.seed);
        for p in &mut projectors {
            let u = jitter_unitary(f.dim, noise.measurement_jitter, &mut rng);
            *p = &u * &*p * u.adjoint();
        }
    }
    projectors
}

/// The canonical strategy distorted by a [`NoiseModel`]: the jittered
/// pure-state table and the maximally-mixed contribution are combined
/// by linearity, p = v·p_pure + (1−v)·Π_k tr(E_k)/d^d.
pub fn noisy_correlation(
    f: &ProjectorFamily,
    noise: &NoiseModel,
    mode: TableMode,
) -> Result<CorrelationTable> {
    let d = f.dim;
    let projectors = jittered_projectors(f, noise);
    let psi = slater_state::<Real>(d)?;
    let per_party = effects_from_projectors(&projectors);
    let measurements: Vec<Vec<EffectPair>> = vec![per_party.clone(); d];
    let pure = correlation_from(StateInput::Pure(psi.state_vector()), &measurements, mode)?;

    let v = noise.visibility;
    let total_dim = (d as Real).powi(d as i32);
    let mut entries = BTreeMap::new();
    for ((mu, a), &p_pure) in &pure.entries {
        let mut trace_product = 1.0;
        for (k, (&m, &b)) in mu.iter().zip(a.iter()).enumerate() {
            let _ = k;
            let effect = &per_party[m as usize][b as usize];
            trace_product *= effect.trace().re;
        }
        let p = v * p_pure + (1.0 - v) * trace_product / total_dim;
        entries.insert((mu.clone(), a.clone()), p);
    }
    let table = CorrelationTable {
        d,
        n_inputs: f.n_inputs,
        mode,
        provenance: Provenance::Noisy,
        entries,
    };
    table.validate()?;
    Ok(table)
}

/// Result of the synchronous-vanishing check: in every synchronous row
/// μ̄, outcomes with Σ_k a_k ≠ d − r must carry no probability mass.
#[derive(Clone, Debug)]
pub struct SynchronousReport {
    pub tol: Real,
    pub rank: usize,
    pub checked_rows: usize,
    /// Entries exceeding `tol` on a forbidden outcome tuple.
    pub forbidden_entries: usize,
    /// Largest probability found on any forbidden outcome tuple.
    pub max_forbidden: Real,
    pub worst: Option<TableKey>,
    /// True when the table had no synchronous rows to check.
    pub vacuous: bool,
    pub pass: bool,
}

/// Scans the synchronous rows of a table and flags probability mass on
/// outcome tuples with Σ_k a_k ≠ d − r.
pub fn check_synchronous(t: &CorrelationTable, rank: usize, tol: Real) -> SynchronousReport {
    let allowed_ones = t.d - rank;
    let mut rows = std::collections::BTreeSet::new();
    let mut forbidden_entries = 0usize;
    let mut max_forbidden = 0.0;
    let mut worst = None;
    for ((mu, a), &p) in &t.entries {
        if !mu.windows(2).all(|w| w[0] == w[1]) {
            continue;
        }
        rows.insert(mu.clone());
        let ones = a.iter().filter(|&&b| b == 1).count();
        if ones != allowed_ones {
            if p > tol {
                forbidden_entries += 1;
            }
            if p > max_forbidden {
                max_forbidden = p;
                worst = Some((mu.clone(), a.clone()));
            }
        }
    }
    let vacuous = rows.is_empty();
    SynchronousReport {
        tol,
        rank,
        checked_rows: rows.len(),
        forbidden_entries,
        max_forbidden,
        worst,
        vacuous,
        pass: max_forbidden <= tol,
    }
}

/// ℓ1 distance Σ |p(a|μ) − q(a|μ)| over the shared key set; errors if
/// the tables differ in shape or keys.
pub fn l1_distance(p: &CorrelationTable, q: &CorrelationTable) -> Result<Real> {
    if p.d != q.d || p.n_inputs != q.n_inputs || p.mode != q.mode {
        return Err(Error::TableMismatch(format!(
            "shape mismatch: ({}, {}, {}) vs ({}, {}, {})",
            p.d,
            p.n_inputs,
            p.mode.as_str(),
            q.d,
            q.n_inputs,
            q.mode.as_str()
        )));
    }
    if p.entries.len() != q.entries.len()
        || !p.entries.keys().zip(q.entries.keys()).all(|(a, b)| a == b)
    {
        return Err(Error::TableMismatch("key sets differ".into()));
    }
    Ok(p
        .entries
        .iter()
        .zip(q.entries.values())
        .map(|((_, &a), &b)| (a - b).abs())
        .sum())
}

/// LHV membership verdict: the minimum uniform deviation t* over all
/// convex mixtures of deterministic product strategies, with the
/// witness weights when the table is local (t* ≤ tol).
#[derive(Clone, Debug)]
pub struct LhvReport {
    pub is_local: bool,
    /// Optimal uniform deviation t* of the fitting LP.
    pub deviation: Real,
    pub tol: Real,
    /// Number of deterministic-strategy variables in the LP.
    pub variables: usize,
    /// Nonzero mixture weights (vertex index, weight) when local.
    pub weights: Option<Vec<(u64, Real)>>,
}

/// Deterministic product strategy: party k answers bit
/// (responses[k] >> μ) & 1 on input μ. Vertex indices enumerate the
/// response masks lexicographically, party 0 most significant.
pub fn vertex_prediction(responses: &[u16], mu: &[u8], a: &[u8]) -> bool {
    responses
        .iter()
        .zip(mu.iter().zip(a.iter()))
        .all(|(&mask, (&m, &b))| ((mask >> m) & 1) as u8 == b)
}

/// The exact table of one deterministic product strategy (a local
/// vertex); useful as an LP ground truth.
pub fn vertex_table(d: usize, n_inputs: usize, responses: &[u16]) -> Result<CorrelationTable> {
    if responses.len() != d {
        return Err(Error::DimensionMismatch {
            what: "responses",
            expected: d,
            got: responses.len(),
        });
    }
    check_full_cap(n_inputs, d)?;
    let mut entries = BTreeMap::new();
    let mut mu = vec![0u8; d];
    loop {
        // Enumerate outcome tuples for this mu-row.
        for bits in 0..(1usize << d) {
            let a: Vec<u8> = (0..d).map(|k| ((bits >> (d - 1 - k)) & 1) as u8).collect();
            let p = if vertex_prediction(responses, &mu, &a) {
                1.0
            } else {
                0.0
            };
            entries.insert((mu.clone(), a), p);
        }
        // Odometer increment over [N]^d.
        let mut k = d;
        loop {
            if k == 0 {
                let table = CorrelationTable {
                    d,
                    n_inputs,
                    mode: TableMode::Full,
                    provenance: Provenance::External,
                    entries,
                };
                table.validate()?;
                return Ok(table);
            }
            k -= 1;
            if (mu[k] as usize) + 1 < n_inputs {
                mu[k] += 1;
                mu[k + 1..].iter_mut().for_each(|m| *m = 0);
                break;
            }
        }
    }
}

/// Decides LHV membership of a full-mode table by linear programming:
/// minimize the uniform deviation t subject to
/// |Σ_λ w_λ · vertex_λ(μ, a) − p(a|μ)| ≤ t, Σ_λ w_λ = 1, w ≥ 0,
/// over all (2^N)^d deterministic product strategies. The table is
/// local iff t* ≤ 1e−8.
pub fn lhv_membership(t: &CorrelationTable) -> Result<LhvReport> {
    if t.mode != TableMode::Full {
        return Err(Error::TableMismatch(
            "LHV membership requires a full-mode table".into(),
        ));
    }
    t.validate()?;
    let n_vertices_big = (1u128 << t.n_inputs).pow(t.d as u32);
    if n_vertices_big > MAX_LHV_VARIABLES {
        return Err(Error::SizeCap {
            what: "LHV vertices (2^N)^d",
            got: n_vertices_big.min(u64::MAX as u128) as u64,
            cap: MAX_LHV_VARIABLES as u64,
        });
    }
    let n_vertices = n_vertices_big as usize;
    let masks_per_party = 1usize << t.n_inputs;

    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let weights: Vec<_> = (0..n_vertices)
        .map(|_| problem.add_var(0.0, (0.0, f64::INFINITY)))
        .collect();
    let t_var = problem.add_var(1.0, (0.0, f64::INFINITY));

    let mut responses = vec![0u16; t.d];
    for ((mu, a), &p) in &t.entries {
        let mut upper: Vec<(microlp::Variable, f64)> = Vec::new();
        for (v, &w) in weights.iter().enumerate() {
            let mut rest = v;
            for k in (0..t.d).rev() {
                responses[k] = (rest % masks_per_party) as u16;
                rest /= masks_per_party;
            }
            if vertex_prediction(&responses, mu, a) {
                upper.push((w, 1.0));
            }
        }
        let mut lower = upper.clone();
        upper.push((t_var, -1.0));
        lower.push((t_var, 1.0));
        problem.add_constraint(&upper[..], ComparisonOp::Le, p);
        problem.add_constraint(&lower[..], ComparisonOp::Ge, p);
    }
    let normalization: Vec<(microlp::Variable, f64)> =
        weights.iter().map(|&w| (w, 1.0)).collect();
    problem.add_constraint(&normalization[..], ComparisonOp::Eq, 1.0);

    let outcome = problem
        .solve()
        .map_err(|e| Error::LinearProgram(format!("{e:?}")))?;
    let solution = match outcome {
        microlp::SolveOutcome::Solution(s) => s,
        microlp::SolveOutcome::Interrupted(_) => {
            return Err(Error::LinearProgram("solver interrupted".into()))
        }
    };
    let deviation = solution.objective();
    let is_local = deviation <= crate::tol::TOL_LP;
    let witness = if is_local {
        Some(
            weights
                .iter()
                .enumerate()
                .filter_map(|(v, &w)| {
                    let weight = solution[w];
                    (weight > 1e-12).then_some((v as u64, weight))
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(LhvReport {
        is_local,
        deviation,
        tol: crate::tol::TOL_LP,
        variables: n_vertices + 1,
        weights: witness,
    })
}

/// Builds a table directly from explicit entries; validation enforces
/// the structural invariants. Intended for adversarial and hand-built
/// inputs.
pub fn table_from_entries(
    d: usize,
    n_inputs: usize,
    mode: TableMode,
    entries: BTreeMap<TableKey, Real>,
) -> Result<CorrelationTable> {
    let table = CorrelationTable {
        d,
        n_inputs,
        mode,
        provenance: Provenance::External,
        entries,
    };
    table.validate()?;
    Ok(table)
}

/// Convenience: purity-preserving white-noise density matrix
/// ρ = v|ψ⟩⟨ψ| + (1−v)·I/D used by tests and the noise sweep.
pub fn white_noise_density(psi: &StateVector, visibility: Real) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&visibility) {
        return Err(Error::OutOfRange {
            what: "visibility",
            got: (visibility * 1e6) as i64,
            allowed: "0 <= v <= 1",
        });
    }
    let dim = psi.amplitudes().len();
    let pure = psi.amplitudes() * psi.amplitudes().adjoint();
    let mixed = ComplexMatrix::identity(dim, dim) * Complex::from(1.0 / dim as Real);
    let rho = pure * Complex::from(visibility) + mixed * Complex::from(1.0 - visibility);
    DensityMatrix::state(rho)
}
