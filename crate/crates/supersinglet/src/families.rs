//! Families of N orthogonal projections summing to a scalar multiple
//! x·I of the identity.
//!
//! The admissible scalars form the set Λ_N: Λ₃ = {3/2}, and for N ≥ 4
//! the recursively defined sequence x₀ = 0, x_k = 1 + 1/(N−1−x_{k−1}).
//! Scalars are kept as exact rationals; only the matrix entries (which
//! contain irrational square roots) are floating point. Two concrete
//! families are constructed:
//!
//! * the rank-1 family, N = d+1 projectors in dimension d, and
//! * the four-projector family, N = 4 in every odd dimension d = 2k+1.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::tensor::{hermitian_deviation, max_abs, max_abs_diff};
use crate::{ComplexMatrixOf, ComplexVectorOf, Error, Float, Real, Result};

/// One element x_k = b/dim of the scalar set Λ_N, in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaElement {
    n_inputs: usize,
    k: usize,
    value: BigRational,
}

impl LambdaElement {
    /// Number of projections N.
    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    /// Recursion depth k of this element.
    pub fn k(&self) -> usize {
        self.k
    }

    /// The exact scalar x = b/dim.
    pub fn value(&self) -> &BigRational {
        &self.value
    }

    /// Numerator b in lowest terms.
    pub fn numerator(&self) -> &BigInt {
        self.value.numer()
    }

    /// Denominator: the representation dimension d in lowest terms.
    pub fn denominator(&self) -> &BigInt {
        self.value.denom()
    }

    /// The common projector rank r = b/N, when it is an integer.
    pub fn rank(&self) -> Option<usize> {
        let n = BigInt::from(self.n_inputs);
        let b = self.numerator();
        if (b % &n).is_zero() {
            (b / &n).to_usize()
        } else {
            None
        }
    }

    /// Scalar as a float of the requested precision.
    pub fn to_float<T: Float>(&self) -> T {
        let numer = self.value.numer().to_f64().expect("numerator fits f64");
        let denom = self.value.denom().to_f64().expect("denominator fits f64");
        T::from_f64(numer / denom).unwrap()
    }

    /// Lowest-terms "b/dim" rendering used by the JSON schema.
    pub fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.value.numer(), self.value.denom())
    }
}

/// Exact scalars x₀..x_{k_max} of Λ_N (for N = 3, the single element
/// 3/2 that makes up Λ₃).
pub fn lambda_sequence(n_inputs: usize, k_max: usize) -> Result<Vec<LambdaElement>> {
    if n_inputs < 3 {
        return Err(Error::OutOfRange {
            what: "N",
            got: n_inputs as i64,
            allowed: "N >= 3",
        });
    }
    if n_inputs == 3 {
        return Ok(vec![LambdaElement {
            n_inputs: 3,
            k: 1,
            value: BigRational::new(BigInt::from(3), BigInt::from(2)),
        }]);
    }
    let n_minus_1 = BigRational::from(BigInt::from(n_inputs as i64 - 1));
    let mut out = Vec::with_capacity(k_max + 1);
    let mut x = BigRational::zero();
    out.push(LambdaElement {
        n_inputs,
        k: 0,
        value: x.clone(),
    });
    for k in 1..=k_max {
        x = BigRational::one() + (&n_minus_1 - &x).recip();
        out.push(LambdaElement {
            n_inputs,
            k,
            value: x.clone(),
        });
    }
    Ok(out)
}

/// Which of the two configured constructions produced a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    RankOne,
    FourProjector,
}

impl FamilyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyKind::RankOne => "rank_one",
            FamilyKind::FourProjector => "four_projector",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "rank_one" => Ok(FamilyKind::RankOne),
            "four_projector" => Ok(FamilyKind::FourProjector),
            other => Err(Error::Malformed(format!("unknown family kind {other:?}"))),
        }
    }
}

/// N Hermitian idempotents of common rank r in dimension d with
/// Σ_μ P_μ = x·I.
#[derive(Clone, Debug)]
pub struct ProjectorFamily<T: Float = Real> {
    pub n_inputs: usize,
    pub dim: usize,
    pub x: LambdaElement,
    pub rank: usize,
    pub projectors: Vec<ComplexMatrixOf<T>>,
    pub kind: FamilyKind,
}

impl<T: Float> ProjectorFamily<T> {
    /// Measurement effect for binary outcome `a` of input μ: outcome 0
    /// is the projector itself, outcome 1 its complement.
    pub fn effect(&self, mu: usize, outcome: u8) -> ComplexMatrixOf<T> {
        let p = &self.projectors[mu];
        match outcome {
            0 => p.clone(),
            _ => ComplexMatrixOf::<T>::identity(self.dim, self.dim) - p,
        }
    }

    /// Orthogonal complement I − P_μ.
    pub fn complement(&self, mu: usize) -> ComplexMatrixOf<T> {
        self.effect(mu, 1)
    }
}

/// The rank-1 family: N = d+1 projectors P_μ = |ψ_μ⟩⟨ψ_μ| with
/// Σ_μ P_μ = ((d+1)/d)·I, built from the vectors of
/// [`rank_one_vectors`].
pub fn rank_one_family<T: Float>(d: usize) -> Result<ProjectorFamily<T>> {
    let vectors = rank_one_vectors::<T>(d)?;
    let projectors = vectors.iter().map(|v| v * v.adjoint()).collect();
    let value = BigRational::new(BigInt::from(d as i64 + 1), BigInt::from(d as i64));
    Ok(ProjectorFamily {
        n_inputs: d + 1,
        dim: d,
        // x = (d+1)/d = 1 + 1/(N-1-0) is the depth-1 element of Λ_{d+1}.
        x: LambdaElement {
            n_inputs: d + 1,
            k: 1,
            value,
        },
        rank: 1,
        projectors,
        kind: FamilyKind::RankOne,
    })
}

/// The d+1 unit vectors with mutual overlap ⟨ψ_μ|ψ_ν⟩ = −1/d that
/// generate the rank-1 family:
///
/// |ψ_μ⟩ = Σ_{ν<μ} α_ν|ν⟩ + β_μ|μ⟩ for μ < d, and
/// |ψ_d⟩ = Σ_{ν<d} α_ν|ν⟩, with
/// α_ν = −√((d+1)/(d(d−ν)(d−ν+1))) and β_μ = √((d+1)(d−μ)/(d(d−μ+1))).
pub fn rank_one_vectors<T: Float>(d: usize) -> Result<Vec<ComplexVectorOf<T>>> {
    if d < 3 {
        return Err(Error::OutOfRange {
            what: "d",
            got: d as i64,
            allowed: "d >= 3",
        });
    }
    let t = |q: usize| T::from_usize(q).unwrap();
    let alpha = |nu: usize| -(t(d + 1) / (t(d) * t(d - nu) * t(d - nu + 1))).sqrt();
    let beta = |mu: usize| (t(d + 1) * t(d - mu) / (t(d) * t(d - mu + 1))).sqrt();
    let mut vectors = Vec::with_capacity(d + 1);
    for mu in 0..=d {
        let mut v = ComplexVectorOf::<T>::zeros(d);
        for nu in 0..mu.min(d) {
            v[nu] = Complex::from(alpha(nu));
        }
        if mu < d {
            v[mu] = Complex::from(beta(mu));
        }
        vectors.push(v);
    }
    Ok(vectors)
}

/// The four-projector family in odd dimension d = 2k+1 with
/// Σ_μ P_μ = (4k/(2k+1))·I and common rank k.
///
/// The orthogonal complements A = I−P₀, B = I−P₁ are direct sums of
/// 2×2 blocks on |2ℓ⟩⊕|2ℓ+1⟩ (ℓ = 0..k−1) plus a unit entry at |2k⟩;
/// C = I−P₂, D = I−P₃ have a unit entry at |0⟩ and blocks on
/// |2ℓ−1⟩⊕|2ℓ⟩ (ℓ = 1..k). Each block is ½[[u, ±w],[±w, v]] with
/// w = √(uv) and u+v = 2, the general rank-1 idempotent with that
/// diagonal; A and C take +w, B and D take −w.
pub fn four_projector_family<T: Float>(k: usize) -> Result<ProjectorFamily<T>> {
    if k < 1 {
        return Err(Error::OutOfRange {
            what: "k",
            got: k as i64,
            allowed: "k >= 1",
        });
    }
    let d = 2 * k + 1;
    let t = |q: usize| T::from_usize(q).unwrap();
    let half = T::from_f64(0.5).unwrap();
    let dim_t = t(d);

    let mut a = ComplexMatrixOf::<T>::zeros(d, d);
    let mut b = ComplexMatrixOf::<T>::zeros(d, d);
    for l in 0..k {
        let x1 = t(4 * l + 2) / dim_t;
        let x2 = t(4 * k - 4 * l) / dim_t;
        let w = (x1 * x2).sqrt();
        for (m, sign) in [(&mut a, T::one()), (&mut b, -T::one())] {
            m[(2 * l, 2 * l)] = Complex::from(half * x1);
            m[(2 * l + 1, 2 * l + 1)] = Complex::from(half * x2);
            m[(2 * l, 2 * l + 1)] = Complex::from(sign * half * w);
            m[(2 * l + 1, 2 * l)] = Complex::from(sign * half * w);
        }
    }
    a[(d - 1, d - 1)] = Complex::from(T::one());
    b[(d - 1, d - 1)] = Complex::from(T::one());

    let mut c = ComplexMatrixOf::<T>::zeros(d, d);
    let mut dd = ComplexMatrixOf::<T>::zeros(d, d);
    c[(0, 0)] = Complex::from(T::one());
    dd[(0, 0)] = Complex::from(T::one());
    for l in 1..=k {
        let y1 = t(4 * l) / dim_t;
        let y2 = t(4 * k + 2 - 4 * l) / dim_t;
        let w = (y1 * y2).sqrt();
        for (m, sign) in [(&mut c, T::one()), (&mut dd, -T::one())] {
            m[(2 * l - 1, 2 * l - 1)] = Complex::from(half * y1);
            m[(2 * l, 2 * l)] = Complex::from(half * y2);
            m[(2 * l - 1, 2 * l)] = Complex::from(sign * half * w);
            m[(2 * l, 2 * l - 1)] = Complex::from(sign * half * w);
        }
    }

    let id = ComplexMatrixOf::<T>::identity(d, d);
    let projectors = vec![&id - a, &id - b, &id - c, &id - dd];
    let value = BigRational::new(BigInt::from(4 * k as i64), BigInt::from(d as i64));
    Ok(ProjectorFamily {
        n_inputs: 4,
        dim: d,
        x: LambdaElement {
            n_inputs: 4,
            k,
            value,
        },
        rank: k,
        projectors,
        kind: FamilyKind::FourProjector,
    })
}

/// [`four_projector_family`] addressed by dimension; Λ₄ only reaches
/// odd dimensions, so even d is rejected with a diagnostic.
pub fn four_projector_family_for_dim<T: Float>(d: usize) -> Result<ProjectorFamily<T>> {
    if d % 2 == 0 {
        return Err(Error::OutOfRange {
            what: "d",
            got: d as i64,
            allowed: "odd dimensions d = 2k+1 (the scalar set for N = 4 yields no even dimension)",
        });
    }
    four_projector_family((d - 1) / 2)
}

/// Measured deviations of a family from its defining invariants.
#[derive(Clone, Copy, Debug)]
pub struct ValidationReport {
    pub tol: f64,
    /// max_μ max-entry |P_μ − P_μ*|
    pub hermiticity: f64,
    /// max_μ max-entry |P_μ² − P_μ|
    pub idempotency: f64,
    /// max-entry |Σ_μ P_μ − x·I|
    pub sum_deviation: f64,
    /// max_μ |tr(P_μ) − r|
    pub trace_deviation: f64,
    pub pass: bool,
}

/// Measures Hermiticity, idempotency, sum-to-x·I, and trace-equals-r;
/// passes iff every deviation is ≤ `tol`.
pub fn validate_family<T: Float>(f: &ProjectorFamily<T>, tol: f64) -> ValidationReport {
    let to = |v: T| v.to_f64().unwrap_or(f64::NAN);
    let mut hermiticity = 0f64;
    let mut idempotency = 0f64;
    let mut trace_deviation = 0f64;
    let mut sum = ComplexMatrixOf::<T>::zeros(f.dim, f.dim);
    for p in &f.projectors {
        hermiticity = hermiticity.max(to(hermitian_deviation(p)));
        idempotency = idempotency.max(to(max_abs_diff(&(p * p), p)));
        let trace_gap = p.trace() - Complex::from(T::from_usize(f.rank).unwrap());
        trace_deviation = trace_deviation.max(to(crate::tensor::cabs(trace_gap)));
        sum += p;
    }
    let target = ComplexMatrixOf::<T>::identity(f.dim, f.dim) * Complex::from(f.x.to_float::<T>());
    let sum_deviation = to(max_abs(&(sum - target)));
    let pass = hermiticity <= tol
        && idempotency <= tol
        && sum_deviation <= tol
        && trace_deviation <= tol;
    ValidationReport {
        tol,
        hermiticity,
        idempotency,
        sum_deviation,
        trace_deviation,
        pass,
    }
}

impl ProjectorFamily<Real> {
    /// JSON document {N, d, x: "b/dim", r, kind, projectors} with each
    /// projector a row-major list of [re, im] entries.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::{json, Value};
        let projectors: Vec<Value> = self
            .projectors
            .iter()
            .map(|p| {
                Value::Array(
                    (0..self.dim * self.dim)
                        .map(|idx| {
                            let z = p[(idx / self.dim, idx % self.dim)];
                            json!([z.re, z.im])
                        })
                        .collect(),
                )
            })
            .collect();
        json!({
            "N": self.n_inputs,
            "d": self.dim,
            "x": self.x.to_fraction_string(),
            "r": self.rank,
            "kind": self.kind.as_str(),
            "projectors": projectors,
        })
    }

    /// Parses [`Self::to_json`] output and revalidates the invariants
    /// at the construction tolerance.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Malformed("family document is not an object".into()))?;
        let get_usize = |key: &str| -> Result<usize> {
            obj.get(key)
                .and_then(|v| v.as_u64())
                .map(|v| v as usize)
                .ok_or_else(|| Error::Malformed(format!("missing integer field {key:?}")))
        };
        let n_inputs = get_usize("N")?;
        let dim = get_usize("d")?;
        let rank = get_usize("r")?;
        let kind = FamilyKind::parse(
            obj.get("kind")
                .and_then(|v| v.as_str())
                .ok_or_else(|| Error::Malformed("missing string field \"kind\"".into()))?,
        )?;
        let x_str = obj
            .get("x")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::Malformed("missing string field \"x\"".into()))?;
        let (b, den) = x_str
            .split_once('/')
            .ok_or_else(|| Error::Malformed(format!("scalar {x_str:?} is not \"b/dim\"")))?;
        let parse_int = |s: &str| -> Result<BigInt> {
            s.parse::<BigInt>()
                .map_err(|e| Error::Malformed(format!("bad integer {s:?}: {e}")))
        };
        let value_ratio = BigRational::new(parse_int(b)?, parse_int(den)?);
        if value_ratio.denom().to_usize() != Some(dim) || value_ratio.is_negative() {
            return Err(Error::Malformed(format!(
                "scalar {x_str} is inconsistent with d = {dim}"
            )));
        }
        let k = match kind {
            FamilyKind::RankOne => 1,
            FamilyKind::FourProjector => (dim - 1) / 2,
        };
        let raw = obj
            .get("projectors")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::Malformed("missing array field \"projectors\"".into()))?;
        if raw.len() != n_inputs {
            return Err(Error::Malformed(format!(
                "expected {n_inputs} projectors, found {}",
                raw.len()
            )));
        }
        let mut projectors = Vec::with_capacity(n_inputs);
        for entry in raw {
            let flat = entry
                .as_array()
                .ok_or_else(|| Error::Malformed("projector is not an array".into()))?;
            if flat.len() != dim * dim {
                return Err(Error::Malformed(format!(
                    "projector has {} entries, expected {}",
                    flat.len(),
                    dim * dim
                )));
            }
            let mut m = ComplexMatrixOf::<Real>::zeros(dim, dim);
            for (idx, pair) in flat.iter().enumerate() {
                let pair = pair
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| Error::Malformed("entry is not an [re, im] pair".into()))?;
                let re = pair[0]
                    .as_f64()
                    .ok_or_else(|| Error::Malformed("re is not a number".into()))?;
                let im = pair[1]
                    .as_f64()
                    .ok_or_else(|| Error::Malformed("im is not a number".into()))?;
                m[(idx / dim, idx % dim)] = Complex::new(re, im);
            }
            projectors.push(m);
        }
        let family = ProjectorFamily {
            n_inputs,
            dim,
            x: LambdaElement {
                n_inputs,
                k,
                value: value_ratio,
            },
            rank,
            projectors,
            kind,
        };
        let report = validate_family(&family, crate::tol::TOL_CONSTRUCT);
        if !report.pass {
            return Err(Error::Malformed(format!(
                "family fails validation: hermiticity {:.3e}, idempotency {:.3e}, sum {:.3e}, trace {:.3e}",
                report.hermiticity, report.idempotency, report.sum_deviation, report.trace_deviation
            )));
        }
        Ok(family)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_rejects_small_n() {
        assert!(matches!(
            lambda_sequence(2, 5),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn rank_one_rejects_small_d() {
        assert!(rank_one_family::<f64>(2).is_err());
    }

    #[test]
    fn four_projector_rejects_k_zero_and_even_dims() {
        assert!(four_projector_family::<f64>(0).is_err());
        assert!(four_projector_family_for_dim::<f64>(4).is_err());
        assert!(four_projector_family_for_dim::<f64>(3).is_ok());
    }

    #[test]
    fn f32_families_construct() {
        let f = four_projector_family::<f32>(2).unwrap();
        let report = validate_family(&f, 1e-5);
        assert!(report.pass, "{report:?}");
    }
}
