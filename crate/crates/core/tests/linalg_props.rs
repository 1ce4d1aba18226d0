mod common;

use common::*;
use proptest::prelude::*;
use structenc::linalg::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigh_reconstructs(seed in any::<u64>(), n in 1usize..6) {
        let h = random_hermitian(&mut rng(seed), n);
        let e = eigh(&h);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let back = e.reconstruct(|l| num_complex::Complex64::new(l, 0.0));
        prop_assert!(frobenius(&(back - h.matrix())) < 1e-12 * (1.0 + frobenius(h.matrix())));
    }

    #[test]
    fn exponential_is_unitary_and_additive(seed in any::<u64>(), n in 1usize..6, s in -2.0f64..2.0, t in -2.0f64..2.0) {
        let h = random_hermitian(&mut rng(seed), n);
        let us = expm_i(&h, s);
        let ut = expm_i(&h, t);
        let ust = expm_i(&h, s + t);
        let gram = us.matrix().adjoint() * us.matrix();
        prop_assert!(frobenius(&(gram - identity(n))) < 1e-12);
        prop_assert!(frobenius(&(us.compose(&ut).matrix() - ust.matrix())) < 1e-11);
    }

    #[test]
    fn logarithm_inverts_small_exponentials(seed in any::<u64>(), n in 1usize..5) {
        let h = random_hermitian(&mut rng(seed), n);
        let e = eigh(&h);
        let spread = e.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
        // Scale the spectrum into (-π/2, π/2) so the principal branch applies.
        let scaled = h.scale(1.5 / spread.max(1.0));
        let back = logm_unitary(&expm_i(&scaled, 1.0)).unwrap();
        prop_assert!(frobenius(&(back.matrix() - scaled.matrix())) < 1e-10);
    }

    #[test]
    fn square_root_squares_back(seed in any::<u64>(), n in 1usize..6, rank in 1usize..6) {
        let rho = random_density(&mut rng(seed), n, rank.min(n));
        let root = sqrtm_psd(rho.hermitian()).unwrap();
        prop_assert!(frobenius(&(root.matrix() * root.matrix() - rho.matrix())) < 1e-10);
    }

    #[test]
    fn basis_round_trip(seed in any::<u64>(), n in 2usize..5) {
        let h = random_hermitian(&mut rng(seed), n);
        let basis = hermitian_basis(n, false);
        prop_assert_eq!(basis.len(), n * n);
        let c = basis_coefficients(h.matrix(), &basis);
        let back = from_coefficients(&c, &basis);
        prop_assert!(frobenius(&(back.matrix() - h.matrix())) < 1e-12);
    }
}

#[test]
fn basis_is_orthonormal_under_half_trace() {
    for n in 2..5 {
        let basis = hermitian_basis(n, true);
        assert_eq!(basis.len(), n * n - 1);
        for (i, a) in basis.iter().enumerate() {
            assert!(a.is_traceless());
            for (j, b) in basis.iter().enumerate() {
                let ip = 0.5 * trace_product(a.matrix(), b.matrix()).re;
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn branch_cut_refused() {
    let z = HermitianMatrix::new(pauli_z()).unwrap();
    let u = expm_i(&z, std::f64::consts::PI);
    assert!(matches!(logm_unitary(&u), Err(structenc::Error::BranchCut { .. })));
}

#[test]
fn nullspace_of_rank_deficient_matrix() {
    let m = RealMatrix::from_row_slice(2, 3, &[1.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
    let null = nullspace_real(&m, NULLSPACE_TOL);
    assert_eq!(null.len(), 1);
    let v = &null[0];
    assert!((m * v).norm() < 1e-14);
    assert!((v.norm() - 1.0).abs() < 1e-14);
}
