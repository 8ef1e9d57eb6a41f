mod common;

use num_complex::Complex;
use supersinglet::algebra::{
    closed_form_z, commutant, iterated_commutator_sequence, lie_closure, partitions,
    schur_weyl_check, schur_weyl_dimensions, spectral_certificate, Partition,
};
use supersinglet::families::{four_projector_family, rank_one_family};
use supersinglet::slater::{permutation_operator, permutations_lex, t_mu};
use supersinglet::tensor::{max_abs_diff, numerical_rank};
use supersinglet::{ComplexMatrix, Real};

use common::{identity, sigma_x, sigma_y, sigma_z};

#[test]
fn pauli_closure_is_sl2() {
    let report = lie_closure(&[sigma_x(), sigma_y(), sigma_z()], 1e-9).unwrap();
    assert_eq!(report.span.dim(), 3);
    assert!(report.span.gram_deviation() < 1e-8);
    // Already closed: the first sweep adds nothing.
    assert_eq!(report.sweeps, 1);
}

#[test]
fn lie_closure_is_monotone_in_the_generators() {
    let one = lie_closure(&[sigma_x()], 1e-9).unwrap();
    let two = lie_closure(&[sigma_x(), sigma_y()], 1e-9).unwrap();
    assert_eq!(one.span.dim(), 1);
    assert_eq!(two.span.dim(), 3, "sigma_3 appears via the commutator");
    assert!(one.span.dim() <= two.span.dim());
}

#[test]
fn rank_one_projectors_generate_the_full_matrix_algebra() {
    let f = rank_one_family::<Real>(3).unwrap();
    let mut generators = f.projectors.clone();
    generators.push(identity(3));
    let report = lie_closure(&generators, 1e-9).unwrap();
    assert_eq!(report.span.dim(), 9);

    // Closure property: basis-pair commutators stay inside the span.
    for (i, a) in report.span.basis().iter().enumerate() {
        for b in &report.span.basis()[i + 1..] {
            let commutator = a * b - b * a;
            assert!(
                report.span.residual(&commutator) <= 1e-8,
                "commutator escaped the closure"
            );
        }
    }
}

#[test]
fn four_projector_d5_generates_the_full_matrix_algebra() {
    let f = four_projector_family::<Real>(2).unwrap();
    let mut generators = f.projectors.clone();
    generators.push(identity(5));
    let report = lie_closure(&generators, 1e-9).unwrap();
    assert_eq!(report.span.dim(), 25);
}

#[test]
fn iterated_commutators_match_the_closed_block_form() {
    for k in [1usize, 2, 3] {
        let f = four_projector_family::<Real>(k).unwrap();
        let seq = iterated_commutator_sequence(&f, 8).unwrap();
        assert_eq!(seq.len(), 9);
        for (n, z) in seq.iter().enumerate() {
            let expected = closed_form_z(&f, n).unwrap();
            let gap = max_abs_diff(z, &expected);
            assert!(gap < 1e-10, "k = {k}, n = {n}: {gap:.3e}");
        }
    }
}

#[test]
fn iterated_commutator_k1_frozen_entries() {
    // k = 1: z_0 = 2/3 and w_0 = sqrt(2*4)/3 = 2*sqrt(2)/3; the blocks
    // are w_0 sigma_1, 2[A,B] = w_0 z_0 (i sigma_2), w_0 z_0^2 sigma_1.
    let f = four_projector_family::<Real>(1).unwrap();
    let seq = iterated_commutator_sequence(&f, 2).unwrap();
    let w0 = 2.0 * 2f64.sqrt() / 3.0;
    let z0 = 2.0 / 3.0;
    assert!((seq[0][(0, 1)].re - w0).abs() < 1e-14);
    assert!((seq[0][(1, 0)].re - w0).abs() < 1e-14);
    assert!((seq[1][(0, 1)].re - w0 * z0).abs() < 1e-14);
    assert!((seq[1][(1, 0)].re + w0 * z0).abs() < 1e-14);
    assert!((seq[2][(0, 1)].re - w0 * z0 * z0).abs() < 1e-14);
    assert!((seq[2][(1, 0)].re - w0 * z0 * z0).abs() < 1e-14);
    // The last row and column stay zero: the unit entries of A and B
    // cancel in A-B and commute thereafter.
    for i in 0..3 {
        assert!(seq[2][(i, 2)].norm() < 1e-14 && seq[2][(2, i)].norm() < 1e-14);
    }
}

#[test]
fn commutant_trivial_cases() {
    let full = commutant(&[identity(2)], 1e-8).unwrap();
    assert_eq!(full.dim(), 4);
    assert!(full.gram_deviation() < 1e-8);

    let diag = commutant(&[sigma_z()], 1e-8).unwrap();
    assert_eq!(diag.dim(), 2);
    for b in diag.basis() {
        assert!(b[(0, 1)].norm() < 1e-10 && b[(1, 0)].norm() < 1e-10);
    }
}

#[test]
fn t_operator_commutant_is_the_permutation_span() {
    let f = four_projector_family::<Real>(1).unwrap();
    let ts: Vec<ComplexMatrix> = (0..4).map(|mu| t_mu(&f, mu).unwrap()).collect();
    let k = commutant(&ts, 1e-8).unwrap();
    // dim = sum over partitions of (dim of the permutation module)^2
    //     = 1 + 2^2 + 1 = 3! = 6.
    assert_eq!(k.dim(), 6);
    assert!(k.gram_deviation() < 1e-8);

    let v_sigmas: Vec<ComplexMatrix> = permutations_lex(3)
        .iter()
        .map(|sigma| permutation_operator::<Real>(sigma, 3).unwrap())
        .collect();
    // One direction is unconditional: every permutation operator
    // commutes with every T_mu.
    for v in &v_sigmas {
        assert!(k.residual(v) <= 1e-8 * (27f64).sqrt(), "V_sigma outside commutant");
    }
    // Equality of subspaces: the permutation span has the same
    // dimension and absorbs the commutant basis.
    let (v_rank, v_basis) = numerical_rank(&v_sigmas, 1e-9).unwrap();
    assert_eq!(v_rank, 6);
    for b in k.basis() {
        let mut rest = b.clone();
        for q in &v_basis {
            let coefficient = supersinglet::tensor::trace_product(&q.adjoint(), b);
            rest -= q * coefficient;
        }
        let residual = rest.iter().map(|z| z.norm_sqr()).sum::<Real>().sqrt();
        assert!(residual <= 1e-8, "commutant escaped the permutation span");
    }
}

#[test]
fn bicommutant_dimension_matches_the_hook_length_count() {
    let f = four_projector_family::<Real>(1).unwrap();
    let ts: Vec<ComplexMatrix> = (0..4).map(|mu| t_mu(&f, mu).unwrap()).collect();
    let k = commutant(&ts, 1e-8).unwrap();
    let kk = commutant(k.basis(), 1e-8).unwrap();
    // Sum over partitions of (dim of the unitary module)^2:
    // 10^2 + 8^2 + 1 = 165.
    assert_eq!(kk.dim(), 165);
}

#[test]
fn partitions_enumerate_descending() {
    let p3 = partitions(3).unwrap();
    let parts: Vec<&[usize]> = p3.iter().map(|p| p.parts()).collect();
    assert_eq!(parts, vec![&[3][..], &[2, 1][..], &[1, 1, 1][..]]);
    assert_eq!(partitions(4).unwrap().len(), 5);
    assert_eq!(partitions(7).unwrap().len(), 15);
}

#[test]
fn schur_weyl_dimensions_hand_checked_cases() {
    let pi = Partition::new(vec![2, 1]).unwrap();
    assert_eq!(schur_weyl_dimensions(&pi, 3, 3).unwrap(), (2, 8));

    let row = Partition::new(vec![5]).unwrap();
    let (dim_perm, _) = schur_weyl_dimensions(&row, 4, 5).unwrap();
    assert_eq!(dim_perm, 1, "fully symmetric module is one-dimensional");

    let column = Partition::new(vec![1; 4]).unwrap();
    let (_, dim_sym) = schur_weyl_dimensions(&column, 4, 4).unwrap();
    assert_eq!(dim_sym, 1, "fermionic line at d = n");

    let too_tall = Partition::new(vec![1; 3]).unwrap();
    let (_, dim_sym) = schur_weyl_dimensions(&too_tall, 2, 3).unwrap();
    assert_eq!(dim_sym, 0, "more rows than local dimension");

    // Weyl dimension at d != n: the (2,1) module of C^2 under U(2).
    let pi = Partition::new(vec![2, 1]).unwrap();
    assert_eq!(schur_weyl_dimensions(&pi, 2, 3).unwrap(), (2, 2));
}

#[test]
fn schur_weyl_totals_are_exact() {
    let report = schur_weyl_check(3, 3).unwrap();
    assert!(report.pass);
    assert_eq!(report.total, 27);
    let dims: Vec<(u64, u64)> = report
        .records
        .iter()
        .map(|r| (r.dim_perm, r.dim_sym))
        .collect();
    assert_eq!(dims, vec![(1, 10), (2, 8), (1, 1)]);
    assert_eq!(report.antisymmetric_dim_sym, 1);
    assert_eq!(report.unit_dim_sym_count, 1);

    assert_eq!(schur_weyl_check(2, 2).unwrap().total, 4);
    assert_eq!(schur_weyl_check(3, 2).unwrap().total, 9);
    let qubit3 = schur_weyl_check(2, 3).unwrap();
    assert!(qubit3.pass);
    assert_eq!(qubit3.total, 8);
    assert_eq!(qubit3.antisymmetric_dim_sym, 0, "three rows exceed d = 2");

    for dn in 2..=6 {
        // d, n <= 8 cap: check the d = n diagonal, where a unique
        // one-dimensional unitary module is expected.
        if dn <= 8 {
            let report = schur_weyl_check(dn, dn).unwrap();
            assert!(report.pass, "d = n = {dn}");
            assert_eq!(report.unit_dim_sym_count, 1, "d = n = {dn}");
            assert_eq!(report.antisymmetric_dim_sym, 1, "d = n = {dn}");
        }
    }
}

#[test]
fn spectral_certificate_frozen_values_d3() {
    for f in [
        four_projector_family::<Real>(1).unwrap(),
        rank_one_family::<Real>(3).unwrap(),
    ] {
        let c = spectral_certificate(&f).unwrap();
        assert!(c.pass, "{c:?}");
        assert!((c.lambda_max - 4.0).abs() < 1e-10);
        assert_eq!(c.multiplicity, 1);
        // Frozen runner-up: 28/9 for both d = 3 families.
        assert!((c.lambda_2 - 28.0 / 9.0).abs() < 1e-9, "{}", c.lambda_2);
        assert!((c.gap - 8.0 / 9.0).abs() < 1e-9);
        assert!(c.slater_overlap > 1.0 - 1e-8);
    }
}

#[test]
fn spectral_certificate_rank_one_d4() {
    let f = rank_one_family::<Real>(4).unwrap();
    let c = spectral_certificate(&f).unwrap();
    assert!(c.pass);
    assert!((c.lambda_max - 5.0).abs() < 1e-10);
    assert_eq!(c.multiplicity, 1);
    // Frozen runner-up: 35/8.
    assert!((c.lambda_2 - 4.375).abs() < 1e-9, "{}", c.lambda_2);
    assert!(c.slater_overlap > 1.0 - 1e-8);
}

#[test]
fn spectral_certificate_rejects_oversized_families() {
    let f = rank_one_family::<Real>(6).unwrap();
    assert!(matches!(
        spectral_certificate(&f),
        Err(supersinglet::Error::SizeCap { .. })
    ));
}

#[test]
fn closure_tolerates_scaled_generators() {
    // Scaling a generator must not change the closure.
    let scaled: Vec<ComplexMatrix> = [sigma_x(), sigma_y(), sigma_z()]
        .iter()
        .map(|m| m * Complex::new(1e-3, 0.0))
        .collect();
    let report = lie_closure(&scaled, 1e-9).unwrap();
    assert_eq!(report.span.dim(), 3);
}
