//! Command-line verification runner: builds projector families, runs
//! the verification suites, and writes deterministic JSON reports.
//!
//! Exit codes: 0 = all checks pass; 1 = a verification failed (the
//! report is still written); 2 = usage or configuration error.
//! Identical configuration and seed produce byte-identical reports:
//! floats are serialized at 17 significant digits and map keys are
//! sorted.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use supersinglet::algebra::{commutant, lie_closure, schur_weyl_check, spectral_certificate};
use supersinglet::correlations::{
    canonical_correlation, check_synchronous, lhv_membership, noisy_correlation, NoiseModel,
    TableMode, MAX_FULL_ENTRIES,
};
use supersinglet::families::{
    four_projector_family, four_projector_family_for_dim, rank_one_family, validate_family,
    ProjectorFamily,
};
use supersinglet::robustness::{budget, noise_sweep, DEFAULT_DELTA_PRIME, DEFAULT_M};
use supersinglet::slater::{
    check_singlet, permutation_operator, permutations_lex, slater_state, t_mu,
};
use supersinglet::tensor::numerical_rank;
use supersinglet::{report, tol, Error, Real, Result, VERSION};

#[derive(Parser)]
#[command(
    name = "supersinglet",
    version,
    about = "Numerical certification of supersinglet self-testing: projector families, \
             Slater states, correlation tables, algebra closures, spectral certificates, \
             and robustness budgets."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a projector family, validate it, and write its JSON document.
    Family(FamilyArgs),
    /// Build the Slater state and verify the singlet property on seeded Haar unitaries.
    Slater(SlaterArgs),
    /// Generate the canonical or noisy correlation table (JSON or CSV).
    Correlate(CorrelateArgs),
    /// Check the synchronous zero pattern of a (possibly noisy) table.
    VerifySync(VerifySyncArgs),
    /// Decide LHV membership of the full correlation table by linear programming.
    Lhv(LhvArgs),
    /// Compute the Lie closure of the family projectors.
    LieClosure(LieClosureArgs),
    /// Commutant of the T_mu operators, compared against the permutation span.
    Commutant(CommutantArgs),
    /// Schur-Weyl dimension bookkeeping for n qudits of dimension d.
    SchurWeyl(SchurWeylArgs),
    /// Spectral certificate of the stabilizer sum R = sum of S_mu.
    Spectrum(SpectrumArgs),
    /// Robustness budget constants for given (N, d, r, lambda_2, epsilon).
    Budget(BudgetArgs),
    /// Approximation-lemma suite over a grid of noise models.
    NoiseSweep(NoiseSweepArgs),
}

/// Selects one of the two constructed families by (d, N).
#[derive(Args)]
struct FamilySelect {
    /// Local dimension d.
    #[arg(long)]
    d: usize,
    /// Number of inputs N.
    #[arg(long = "N")]
    n: usize,
    /// Family construction; auto picks rank-one when N = d+1, else the
    /// four-projector family when N = 4 (d odd).
    #[arg(long, value_enum, default_value_t = KindArg::Auto)]
    kind: KindArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Auto,
    RankOne,
    Four,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BuildKind {
    RankOne,
    Four,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Full,
    Diagonal,
}

impl ModeArg {
    fn to_mode(self) -> TableMode {
        match self {
            ModeArg::Full => TableMode::Full,
            ModeArg::Diagonal => TableMode::Diagonal,
        }
    }

    fn as_str(self) -> &'static str {
        self.to_mode().as_str()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExpectArg {
    None,
    Local,
    Nonlocal,
}

fn resolve_family(sel: &FamilySelect) -> Result<ProjectorFamily> {
    match sel.kind {
        KindArg::RankOne => {
            if sel.n != sel.d + 1 {
                return Err(Error::Malformed(format!(
                    "the rank-one family at d = {} has N = {}, not {}",
                    sel.d,
                    sel.d + 1,
                    sel.n
                )));
            }
            rank_one_family(sel.d)
        }
        KindArg::Four => {
            if sel.n != 4 {
                return Err(Error::Malformed(format!(
                    "the four-projector family has N = 4, not {}",
                    sel.n
                )));
            }
            four_projector_family_for_dim(sel.d)
        }
        KindArg::Auto => {
            if sel.n == sel.d + 1 {
                rank_one_family(sel.d)
            } else if sel.n == 4 {
                four_projector_family_for_dim(sel.d)
            } else {
                Err(Error::Malformed(format!(
                    "no constructed family with d = {} and N = {}; available: \
                     N = d+1 (rank-one) or N = 4 with odd d (four-projector)",
                    sel.d, sel.n
                )))
            }
        }
    }
}

fn family_config(sel: &FamilySelect, f: &ProjectorFamily) -> Value {
    json!({
        "d": sel.d,
        "N": sel.n,
        "kind": f.kind.as_str(),
    })
}

/// Writes the document to the output path, or stdout when omitted.
fn emit(doc: &Value, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => report::write_to_path(doc, path),
        None => {
            print!("{}", report::to_string(doc));
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// family
// ---------------------------------------------------------------------------

#[derive(Args)]
struct FamilyArgs {
    /// Which construction to build.
    #[arg(long, value_enum)]
    kind: BuildKind,
    /// Local dimension d (rank-one: d >= 3; four-projector: odd d >= 3).
    #[arg(long)]
    d: Option<usize>,
    /// Block parameter k of the four-projector family (d = 2k+1).
    #[arg(long)]
    k: Option<usize>,
    /// Validation tolerance.
    #[arg(long, default_value_t = tol::TOL_CONSTRUCT)]
    tol: Real,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_family(args: &FamilyArgs) -> Result<bool> {
    let f = match (args.kind, args.d, args.k) {
        (BuildKind::RankOne, Some(d), None) => rank_one_family(d)?,
        (BuildKind::RankOne, _, Some(_)) => {
            return Err(Error::Malformed(
                "the rank-one family takes --d, not --k".into(),
            ))
        }
        (BuildKind::Four, None, Some(k)) => four_projector_family(k)?,
        (BuildKind::Four, Some(d), None) => four_projector_family_for_dim(d)?,
        (BuildKind::Four, Some(_), Some(_)) => {
            return Err(Error::Malformed(
                "give either --d or --k for the four-projector family, not both".into(),
            ))
        }
        (_, None, None) => {
            return Err(Error::Malformed(
            "specify the size: --d for rank-one, --k (or --d = 2k+1) for four-projector".into(),
        ))
        }
    };
    let validation = validate_family(&f, args.tol);
    // The output document is the family schema plus run metadata, so
    // it both round-trips through the family parser and records the
    // resolved configuration.
    let mut doc = f.to_json();
    let map = doc.as_object_mut().expect("family document is an object");
    map.insert(
        "config".into(),
        json!({
            "command": "family",
            "kind": f.kind.as_str(),
            "d": f.dim,
            "k": args.k,
            "tol": args.tol,
        }),
    );
    map.insert("version".into(), json!(VERSION));
    map.insert(
        "validation".into(),
        json!({
            "tol": validation.tol,
            "hermiticity": validation.hermiticity,
            "idempotency": validation.idempotency,
            "sum_deviation": validation.sum_deviation,
            "trace_deviation": validation.trace_deviation,
            "pass": validation.pass,
        }),
    );
    emit(&doc, &args.out)?;
    Ok(validation.pass)
}

// ---------------------------------------------------------------------------
// slater
// ---------------------------------------------------------------------------

#[derive(Args)]
struct SlaterArgs {
    /// Local dimension (= party count) d.
    #[arg(long)]
    d: usize,
    /// Number of Haar unitaries to test the singlet property with.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum allowed phase-minimized deviation.
    #[arg(long, default_value_t = tol::TOL_VERIFY)]
    tol: Real,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_slater(args: &SlaterArgs) -> Result<bool> {
    let psi = slater_state::<Real>(args.d)?;
    let deviation = check_singlet(psi.state_vector(), args.trials, args.seed)?;
    let nonzeros = psi
        .state_vector()
        .amplitudes()
        .iter()
        .filter(|z| z.norm_sqr() > 0.0)
        .count();
    let pass = deviation <= args.tol;
    let doc = json!({
        "command": "slater",
        "version": VERSION,
        "config": {
            "d": args.d,
            "trials": args.trials,
            "seed": args.seed,
            "tol": args.tol,
        },
        "state": {
            "ambient_dim": args.d.pow(args.d as u32),
            "nonzero_amplitudes": nonzeros,
        },
        "singlet": {
            "max_deviation": deviation,
            "pass": pass,
        },
    });
    emit(&doc, &args.out)?;
    Ok(pass)
}

// ---------------------------------------------------------------------------
// correlate
// ---------------------------------------------------------------------------

#[derive(Args)]
struct CorrelateArgs {
    #[command(flatten)]
    family: FamilySelect,
    #[arg(long, value_enum, default_value_t = ModeArg::Full)]
    mode: ModeArg,
    /// White-noise visibility v (1 = no state noise).
    #[arg(long, default_value_t = 1.0)]
    visibility: Real,
    /// Measurement jitter strength (0 = exact measurements).
    #[arg(long, default_value_t = 0.0)]
    jitter: Real,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn build_table(
    family: &FamilySelect,
    mode: ModeArg,
    visibility: Real,
    jitter: Real,
    seed: u64,
) -> Result<(ProjectorFamily, supersinglet::correlations::CorrelationTable)> {
    // Check the size cap before any construction so oversized requests
    // fail as configuration errors with the cap named.
    if mode == ModeArg::Full {
        let entries = (family.n as u128).pow(family.d as u32) * (1u128 << family.d);
        if entries > MAX_FULL_ENTRIES {
            return Err(Error::SizeCap {
                what: "full-mode table entries N^d * 2^d",
                got: entries.min(u64::MAX as u128) as u64,
                cap: MAX_FULL_ENTRIES as u64,
            });
        }
    }
    let f = resolve_family(family)?;
    let table = if visibility >= 1.0 && jitter == 0.0 {
        canonical_correlation(&f, mode.to_mode())?
    } else {
        let noise = NoiseModel::new(visibility, jitter, seed)?;
        noisy_correlation(&f, &noise, mode.to_mode())?
    };
    Ok((f, table))
}

fn run_correlate(args: &CorrelateArgs) -> Result<bool> {
    let (f, table) = build_table(
        &args.family,
        args.mode,
        args.visibility,
        args.jitter,
        args.seed,
    )?;
    match args.format {
        FormatArg::Csv => {
            // CSV is the bare table; configuration lives in JSON runs.
            match &args.out {
                Some(path) => {
                    let file = std::fs::File::create(path)?;
                    table.to_csv(file)?;
                }
                None => table.to_csv(std::io::stdout())?,
            }
        }
        FormatArg::Json => {
            let mut doc = table.to_json();
            let map = doc.as_object_mut().expect("table document is an object");
            map.insert(
                "config".into(),
                json!({
                    "command": "correlate",
                    "family": family_config(&args.family, &f),
                    "mode": args.mode.as_str(),
                    "visibility": args.visibility,
                    "jitter": args.jitter,
                    "seed": args.seed,
                }),
            );
            map.insert("version".into(), json!(VERSION));
            emit(&doc, &args.out)?;
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// verify-sync
// ---------------------------------------------------------------------------

#[derive(Args)]
struct VerifySyncArgs {
    #[command(flatten)]
    family: FamilySelect,
    #[arg(long, value_enum, default_value_t = ModeArg::Diagonal)]
    mode: ModeArg,
    #[arg(long, default_value_t = 1.0)]
    visibility: Real,
    #[arg(long, default_value_t = 0.0)]
    jitter: Real,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum tolerated probability on a forbidden outcome tuple.
    #[arg(long, default_value_t = tol::TOL_VERIFY)]
    tol: Real,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_verify_sync(args: &VerifySyncArgs) -> Result<bool> {
    let (f, table) = build_table(
        &args.family,
        args.mode,
        args.visibility,
        args.jitter,
        args.seed,
    )?;
    let rep = check_synchronous(&table, f.rank, args.tol);
    let doc = json!({
        "command": "verify-sync",
        "version": VERSION,
        "config": {
            "family": family_config(&args.family, &f),
            "mode": args.mode.as_str(),
            "visibility": args.visibility,
            "jitter": args.jitter,
            "seed": args.seed,
            "tol": args.tol,
        },
        "synchronous": {
            "tol": rep.tol,
            "rank": rep.rank,
            "checked_rows": rep.checked_rows,
            "forbidden_entries": rep.forbidden_entries,
            "max_forbidden": rep.max_forbidden,
            "worst": rep.worst.as_ref().map(|(mu, a)| json!({"mu": mu, "a": a})),
            "vacuous": rep.vacuous,
            "pass": rep.pass,
        },
    });
    emit(&doc, &args.out)?;
    Ok(rep.pass)
}

// ---------------------------------------------------------------------------
// lhv
// ---------------------------------------------------------------------------

#[derive(Args)]
struct LhvArgs {
    #[command(flatten)]
    family: FamilySelect,
    #[arg(long, default_value_t = 1.0)]
    visibility: Real,
    #[arg(long, default_value_t = 0.0)]
    jitter: Real,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Expected membership; the run fails (exit 1) on a mismatch.
    #[arg(long, value_enum, default_value_t = ExpectArg::None)]
    expect: ExpectArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_lhv(args: &LhvArgs) -> Result<bool> {
    let (f, table) = build_table(
        &args.family,
        ModeArg::Full,
        args.visibility,
        args.jitter,
        args.seed,
    )?;
    let rep = lhv_membership(&table)?;
    let pass = match args.expect {
        ExpectArg::None => true,
        ExpectArg::Local => rep.is_local,
        ExpectArg::Nonlocal => !rep.is_local,
    };
    let doc = json!({
        "command": "lhv",
        "version": VERSION,
        "config": {
            "family": family_config(&args.family, &f),
            "visibility": args.visibility,
            "jitter": args.jitter,
            "seed": args.seed,
            "expect": match args.expect {
                ExpectArg::None => "none",
                ExpectArg::Local => "local",
                ExpectArg::Nonlocal => "nonlocal",
            },
        },
        "lhv": {
            "is_local": rep.is_local,
            "deviation": rep.deviation,
            "tol": rep.tol,
            "variables": rep.variables,
            "support_size": rep.weights.as_ref().map(Vec::len),
        },
        "pass": pass,
    });
    emit(&doc, &args.out)?;
    Ok(pass)
}

// ---------------------------------------------------------------------------
// lie-closure
// ---------------------------------------------------------------------------

#[derive(Args)]
struct LieClosureArgs {
    #[command(flatten)]
    family: FamilySelect,
    /// Relative singular-value threshold of the rank decisions.
    #[arg(long, default_value_t = tol::TOL_RANK_REL)]
    tol: Real,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_lie_closure(args: &LieClosureArgs) -> Result<bool> {
    let f = resolve_family(&args.family)?;
    let rep = lie_closure(&f.projectors, args.tol)?;
    // The family projectors sum to x.I, so their span already contains
    // the identity; full closure is the whole matrix algebra d^2.
    let expected = f.dim * f.dim;
    let pass = rep.span.dim() == expected;
    let doc = json!({
        "command": "lie-closure",
        "version": VERSION,
        "config": {
            "family": family_config(&args.family, &f),
            "tol": args.tol,
        },
        "closure": {
            "ambient_dim": f.dim,
            "closure_dim": rep.span.dim(),
            "expected_dim": expected,
            "sweeps": rep.sweeps,
            "gram_deviation": rep.span.gram_deviation(),
            "pass": pass,
        },
    });
    emit(&doc, &args.out)?;
    Ok(pass)
}

// ---------------------------------------------------------------------------
// commutant
// ---------------------------------------------------------------------------

#[derive(Args)]
struct CommutantArgs {
    #[command(flatten)]
    family: FamilySelect,
    /// Relative nullspace threshold and subspace-distance tolerance.
    #[arg(long, default_value_t = tol::TOL_SUBSPACE)]
    tol: Real,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_commutant(args: &CommutantArgs) -> Result<bool> {
    let f = resolve_family(&args.family)?;
    let d = f.dim;
    let ts: Vec<_> = (0..f.n_inputs)
        .map(|mu| t_mu(&f, mu))
        .collect::<Result<_>>()?;
    let k = commutant(&ts, args.tol)?;
    // Reference: the span of the permutation operators V_sigma.
    let v_sigmas: Vec<_> = permutations_lex(d)
        .iter()
        .map(|sigma| permutation_operator::<Real>(sigma, d))
        .collect::<Result<_>>()?;
    let (v_rank, v_basis) = numerical_rank(&v_sigmas, tol::TOL_RANK_REL)?;
    // Subspace distance, both directions, on normalized vectors.
    let mut distance = 0.0_f64;
    for v in &v_sigmas {
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<Real>().sqrt();
        distance = distance.max(k.residual(v) / norm);
    }
    for b in k.basis() {
        let mut rest = b.clone();
        for q in &v_basis {
            let coefficient = supersinglet::tensor::trace_product(&q.adjoint(), b);
            rest -= q * coefficient;
        }
        let residual = rest.iter().map(|z| z.norm_sqr()).sum::<Real>().sqrt();
        distance = distance.max(residual);
    }
    let expected: usize = (1..=d).product();
    let pass = k.dim() == expected && v_rank == expected && distance <= args.tol;
    let doc = json!({
        "command": "commutant",
        "version": VERSION,
        "config": {
            "family": family_config(&args.family, &f),
            "tol": args.tol,
        },
        "commutant": {
            "ambient_dim": d.pow(d as u32),
            "dim": k.dim(),
            "expected_dim": expected,
            "permutation_rank": v_rank,
            "subspace_distance": distance,
            "pass": pass,
        },
    });
    emit(&doc, &args.out)?;
    Ok(pass)
}

// ---------------------------------------------------------------------------
// schur-weyl
// ---------------------------------------------------------------------------

#[derive(Args)]
struct SchurWeylArgs {
    /// Local dimension d.
    #[arg(long)]
    d: usize,
    /// Number of tensor factors n.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_schur_weyl(args: &SchurWeylArgs) -> Result<bool> {
    let rep = schur_weyl_check(args.d, args.n)?;
    let partitions: Vec<Value> = rep
        .records
        .iter()
        .map(|r| {
            json!({
                "partition": r.partition.parts(),
                "dim_perm": r.dim_perm,
                "dim_sym": r.dim_sym,
            })
        })
        .collect();
    let doc = json!({
        "command": "schur-weyl",
        "version": VERSION,
        "config": {"d": args.d, "n": args.n},
        "schur_weyl": {
            "total": rep.total as u64,
            "expected": rep.expected as u64,
            "antisymmetric_dim_sym": rep.antisymmetric_dim_sym,
            "unit_dim_sym_count": rep.unit_dim_sym_count,
            "partitions": partitions,
            "pass": rep.pass,
        },
    });
    emit(&doc, &args.out)?;
    Ok(rep.pass)
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    family: FamilySelect,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_spectrum(args: &SpectrumArgs) -> Result<bool> {
    let f = resolve_family(&args.family)?;
    let cert = spectral_certificate(&f)?;
    let doc = json!({
        "command": "spectrum",
        "version": VERSION,
        "config": {"family": family_config(&args.family, &f)},
        "spectrum": {
            "N": cert.n_inputs,
            "d": cert.local_dim,
            "ambient_dim": cert.ambient_dim,
            "lambda_max": cert.lambda_max,
            "multiplicity": cert.multiplicity,
            "lambda_2": cert.lambda_2,
            "gap": cert.gap,
            "slater_overlap": cert.slater_overlap,
            "pass": cert.pass,
        },
    });
    emit(&doc, &args.out)?;
    Ok(cert.pass)
}

// ---------------------------------------------------------------------------
// budget
// ---------------------------------------------------------------------------

#[derive(Args)]
struct BudgetArgs {
    /// Number of inputs N.
    #[arg(long = "N")]
    n: usize,
    /// Local dimension d.
    #[arg(long)]
    d: usize,
    /// Common projector rank r.
    #[arg(long)]
    r: usize,
    /// Second stabilizer eigenvalue, e.g. from the spectrum command.
    #[arg(long)]
    lambda2: Real,
    /// Target certification precision.
    #[arg(long, default_value_t = 0.1)]
    epsilon: Real,
    /// Word-count parameter m (existential in the theory).
    #[arg(long, default_value_t = DEFAULT_M)]
    m: usize,
    /// Budget parameter delta' (existential in the theory).
    #[arg(long, default_value_t = DEFAULT_DELTA_PRIME)]
    delta_prime: Real,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_budget(args: &BudgetArgs) -> Result<bool> {
    let config = json!({
        "N": args.n,
        "d": args.d,
        "r": args.r,
        "lambda_2": args.lambda2,
        "epsilon": args.epsilon,
        "m": args.m,
        "delta_prime": args.delta_prime,
    });
    match budget(
        args.n,
        args.d,
        args.r,
        args.lambda2,
        args.epsilon,
        args.m,
        args.delta_prime,
    ) {
        Ok(b) => {
            let doc = json!({
                "command": "budget",
                "version": VERSION,
                "config": config,
                "feasible": true,
                "budget": b.to_json(),
            });
            emit(&doc, &args.out)?;
            Ok(true)
        }
        // Infeasibility is a verification outcome, not a usage error:
        // the report is still written and the run exits 1.
        Err(Error::InfeasibleBudget { epsilon, binding }) => {
            let doc = json!({
                "command": "budget",
                "version": VERSION,
                "config": config,
                "feasible": false,
                "binding_constraint": binding,
                "epsilon": epsilon,
            });
            emit(&doc, &args.out)?;
            Ok(false)
        }
        Err(other) => Err(other),
    }
}

// ---------------------------------------------------------------------------
// noise-sweep
// ---------------------------------------------------------------------------

#[derive(Args)]
struct NoiseSweepArgs {
    #[command(flatten)]
    family: FamilySelect,
    /// Comma-separated visibilities.
    #[arg(long, value_delimiter = ',', default_values_t = [0.9, 0.99, 0.999, 1.0])]
    visibilities: Vec<Real>,
    /// Comma-separated jitter strengths.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0])]
    jitters: Vec<Real>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tracial-lemma word length.
    #[arg(long, default_value_t = 3)]
    word_length: usize,
    /// Tracial-lemma word samples per realization.
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_noise_sweep(args: &NoiseSweepArgs) -> Result<bool> {
    let f = resolve_family(&args.family)?;
    let mut models = Vec::new();
    for &jitter in &args.jitters {
        for &v in &args.visibilities {
            models.push(NoiseModel::new(v, jitter, args.seed)?);
        }
    }
    let records = noise_sweep(&f, &models, args.word_length, args.trials, args.seed)?;
    let pass = records.iter().all(|r| r.pass);
    let doc = json!({
        "command": "noise-sweep",
        "version": VERSION,
        "config": {
            "family": family_config(&args.family, &f),
            "visibilities": args.visibilities,
            "jitters": args.jitters,
            "seed": args.seed,
            "word_length": args.word_length,
            "trials": args.trials,
        },
        "records": records.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        "pass": pass,
    });
    emit(&doc, &args.out)?;
    Ok(pass)
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Family(args) => run_family(args),
        Command::Slater(args) => run_slater(args),
        Command::Correlate(args) => run_correlate(args),
        Command::VerifySync(args) => run_verify_sync(args),
        Command::Lhv(args) => run_lhv(args),
        Command::LieClosure(args) => run_lie_closure(args),
        Command::Commutant(args) => run_commutant(args),
        Command::SchurWeyl(args) => run_schur_weyl(args),
        Command::Spectrum(args) => run_spectrum(args),
        Command::Budget(args) => run_budget(args),
        Command::NoiseSweep(args) => run_noise_sweep(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests print to stdout and exit 0; real
            // usage errors go to the diagnostic stream with exit 2.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
