mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use supersinglet::families::{
    four_projector_family, lambda_sequence, rank_one_family, rank_one_vectors, validate_family,
    FamilyKind, ProjectorFamily,
};
use supersinglet::tensor::{max_abs, max_abs_diff, trace_product};
use supersinglet::{ComplexMatrix, Real};

use common::identity;

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn lambda_three_is_the_single_scalar_three_halves() {
    let seq = lambda_sequence(3, 7).unwrap();
    assert_eq!(seq.len(), 1);
    assert_eq!(*seq[0].value(), ratio(3, 2));
    // Three projectors in dimension 2: N r = x d gives rank 1.
    assert_eq!(seq[0].rank(), Some(1));
}

#[test]
fn lambda_four_first_elements_match_frozen_values() {
    let seq = lambda_sequence(4, 2).unwrap();
    assert_eq!(*seq[0].value(), ratio(0, 1));
    assert_eq!(*seq[1].value(), ratio(4, 3));
    assert_eq!(*seq[2].value(), ratio(8, 5));
    assert_eq!(seq[1].to_fraction_string(), "4/3");
    assert_eq!(seq[2].to_fraction_string(), "8/5");
}

#[test]
fn lambda_four_matches_closed_form_and_increases_toward_two() {
    // Oracle: for N = 4 the recursion collapses to x_k = 4k/(2k+1),
    // already in lowest terms, strictly increasing with limit 2.
    let seq = lambda_sequence(4, 50).unwrap();
    assert_eq!(seq.len(), 51);
    for (k, elem) in seq.iter().enumerate() {
        assert_eq!(*elem.value(), ratio(4 * k as i64, 2 * k as i64 + 1));
        assert_eq!(elem.k(), k);
        assert_eq!(elem.rank(), Some(k));
        assert_eq!(elem.denominator().to_usize(), Some(2 * k + 1));
        if k > 0 {
            assert!(seq[k - 1].value() < elem.value());
        }
        assert!(*elem.value() < ratio(2, 1));
    }
    assert_eq!(*seq[50].value(), ratio(200, 101));
}

#[test]
fn lambda_general_n_satisfies_recursion_exactly() {
    for n in [5usize, 6, 9] {
        let seq = lambda_sequence(n, 30).unwrap();
        let n_minus_1 = BigRational::from(BigInt::from(n as i64 - 1));
        for k in 1..seq.len() {
            let expected = BigRational::one()
                + (&n_minus_1 - seq[k - 1].value()).recip();
            assert_eq!(*seq[k].value(), expected, "N = {n}, k = {k}");
        }
        // Fixed-point bound: the sequence stays below the smaller root
        // of x(N-1-x) = N-2-x, which is < 2 for every N >= 4.
        for elem in &seq[1..] {
            assert!(*elem.value() > ratio(1, 1));
            assert!(*elem.value() < ratio(2, 1));
        }
    }
}

#[test]
fn rank_one_vectors_have_overlap_minus_one_over_d() {
    for d in [3usize, 4, 6] {
        let vectors = rank_one_vectors::<Real>(d).unwrap();
        assert_eq!(vectors.len(), d + 1);
        for (i, v) in vectors.iter().enumerate() {
            for (j, w) in vectors.iter().enumerate() {
                let overlap = v.dotc(w);
                let expected = if i == j { 1.0 } else { -1.0 / d as f64 };
                assert!(
                    (overlap.re - expected).abs() < 1e-12 && overlap.im.abs() < 1e-15,
                    "d = {d}, pair ({i}, {j}): {overlap}"
                );
            }
        }
    }
}

#[test]
fn rank_one_first_vector_is_the_first_basis_state() {
    let f = rank_one_family::<Real>(3).unwrap();
    let mut e00 = ComplexMatrix::zeros(3, 3);
    e00[(0, 0)] = num_complex::Complex::new(1.0, 0.0);
    assert!(max_abs_diff(&f.projectors[0], &e00) < 1e-15);
}

#[test]
fn rank_one_family_metadata_and_sum() {
    for d in [3usize, 5, 8] {
        let f = rank_one_family::<Real>(d).unwrap();
        assert_eq!(f.n_inputs, d + 1);
        assert_eq!(f.dim, d);
        assert_eq!(f.rank, 1);
        assert_eq!(f.kind, FamilyKind::RankOne);
        assert_eq!(
            *f.x.value(),
            ratio(d as i64 + 1, d as i64),
            "x must be (d+1)/d"
        );
        let sum = f
            .projectors
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, p| acc + p);
        let target = identity(d) * num_complex::Complex::new((d as f64 + 1.0) / d as f64, 0.0);
        assert!(max_abs(&(sum - target)) < 1e-13, "d = {d}");
    }
}

#[test]
fn rank_one_gram_matrix_is_one_over_d_squared() {
    // Oracle: tr(P_mu P_nu) = |<psi_mu|psi_nu>|^2 = 1/d^2 off diagonal.
    for d in [3usize, 4, 6] {
        let f = rank_one_family::<Real>(d).unwrap();
        for i in 0..f.projectors.len() {
            for j in 0..f.projectors.len() {
                let g = trace_product(&f.projectors[i], &f.projectors[j]);
                let expected = if i == j { 1.0 } else { 1.0 / (d * d) as f64 };
                assert!(
                    (g.re - expected).abs() < 1e-12 && g.im.abs() < 1e-15,
                    "d = {d}, ({i}, {j}): {g}"
                );
            }
        }
    }
}

#[test]
fn four_projector_k1_complement_blocks_match_frozen_entries() {
    // Frozen entries for k = 1 (d = 3): the complement A = I - P_0 has
    // diagonal (1/3, 2/3, 1) and off-diagonal sqrt(2)/3 in the first
    // block; B flips the sign of the off-diagonal entry.
    let f = four_projector_family::<Real>(1).unwrap();
    let a = f.complement(0);
    let b = f.complement(1);
    let w = 2f64.sqrt() / 3.0;
    for (mat, sign) in [(&a, 1.0), (&b, -1.0)] {
        assert!((mat[(0, 0)].re - 1.0 / 3.0).abs() < 1e-15);
        assert!((mat[(1, 1)].re - 2.0 / 3.0).abs() < 1e-15);
        assert!((mat[(2, 2)].re - 1.0).abs() < 1e-15);
        assert!((mat[(0, 1)].re - sign * w).abs() < 1e-15);
        assert!((mat[(1, 0)].re - sign * w).abs() < 1e-15);
        assert!(mat[(0, 2)].norm() < 1e-15 && mat[(1, 2)].norm() < 1e-15);
    }
    // C and D carry the unit entry at |0> and the block on |1>,|2>
    // with diagonal (4/3, 2/3)/2 = (2/3, 1/3).
    let c = f.complement(2);
    assert!((c[(0, 0)].re - 1.0).abs() < 1e-15);
    assert!((c[(1, 1)].re - 2.0 / 3.0).abs() < 1e-15);
    assert!((c[(2, 2)].re - 1.0 / 3.0).abs() < 1e-15);
    assert!((c[(1, 2)].re - w).abs() < 1e-15);
}

#[test]
fn four_projector_complements_sum_and_idempotency() {
    for k in [1usize, 2, 4] {
        let f = four_projector_family::<Real>(k).unwrap();
        let d = 2 * k + 1;
        let mut sum = ComplexMatrix::zeros(d, d);
        for mu in 0..4 {
            let comp = f.complement(mu);
            assert!(
                max_abs_diff(&(&comp * &comp), &comp) < 1e-14,
                "complement {mu} idempotent at k = {k}"
            );
            sum += comp;
        }
        // A + B + C + D = (d + 1 + x) I - wait: 4I - x I = (4 - x) I.
        let scale = 4.0 - 4.0 * k as f64 / d as f64;
        let target = identity(d) * num_complex::Complex::new(scale, 0.0);
        assert!(max_abs(&(sum - target)) < 1e-13, "k = {k}");
    }
}

#[test]
fn four_projector_k1_complement_sum_is_eight_thirds() {
    let f = four_projector_family::<Real>(1).unwrap();
    let sum = (0..4).fold(ComplexMatrix::zeros(3, 3), |acc, mu| acc + f.complement(mu));
    let target = identity(3) * num_complex::Complex::new(8.0 / 3.0, 0.0);
    assert!(max_abs(&(sum - target)) < 1e-14);
}

#[test]
fn families_validate_at_construction_tolerance() {
    for d in 3..=8 {
        let f = rank_one_family::<Real>(d).unwrap();
        let report = validate_family(&f, 1e-12);
        assert!(report.pass, "rank-1 d = {d}: {report:?}");
    }
    for k in 1..=10 {
        let f = four_projector_family::<Real>(k).unwrap();
        let report = validate_family(&f, 1e-12);
        assert!(report.pass, "four-projector k = {k}: {report:?}");
        assert_eq!(f.dim, 2 * k + 1);
        assert_eq!(f.rank, k);
        assert_eq!(f.x.rank(), Some(k));
    }
}

#[test]
fn validation_flags_a_corrupted_family() {
    let mut f = four_projector_family::<Real>(2).unwrap();
    f.projectors[3] = ComplexMatrix::zeros(f.dim, f.dim);
    let report = validate_family(&f, 1e-12);
    assert!(!report.pass);
    assert!(report.trace_deviation > 1.0, "{report:?}");
    assert!(report.sum_deviation > 0.1, "{report:?}");
}

#[test]
fn json_round_trip_is_lossless_and_deterministic() {
    for f in [
        rank_one_family::<Real>(4).unwrap(),
        four_projector_family::<Real>(2).unwrap(),
    ] {
        let doc = f.to_json();
        let restored = ProjectorFamily::from_json(&doc).unwrap();
        assert_eq!(restored.n_inputs, f.n_inputs);
        assert_eq!(restored.dim, f.dim);
        assert_eq!(restored.rank, f.rank);
        assert_eq!(restored.kind, f.kind);
        assert_eq!(restored.x.value(), f.x.value());
        for (p, q) in restored.projectors.iter().zip(&f.projectors) {
            assert!(max_abs_diff(p, q) < 1e-15);
        }
        assert_eq!(restored.to_json(), doc, "second pass must be identical");
    }
}

#[test]
fn from_json_rejects_inconsistent_documents() {
    let f = rank_one_family::<Real>(3).unwrap();
    let mut doc = f.to_json();
    doc["x"] = serde_json::Value::String("5/3".into());
    assert!(ProjectorFamily::from_json(&doc).is_err());

    let mut doc = f.to_json();
    doc["projectors"][0][0][0] = serde_json::json!(0.9);
    let err = ProjectorFamily::from_json(&doc).unwrap_err();
    assert!(err.to_string().contains("validation"), "{err}");
}
