use approx::assert_abs_diff_eq;
use bures_core::euler::THETA2_MAX;
use bures_core::*;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

fn qubit_coords() -> impl Strategy<Value = Vec<f64>> {
    (0.0..=FRAC_PI_4, 0.0..=PI, 0.0..=FRAC_PI_2).prop_map(|(t, a, b)| vec![t, a, b])
}

fn qutrit_coords() -> impl Strategy<Value = Vec<f64>> {
    (
        (0.0..=FRAC_PI_4, 0.0..=THETA2_MAX),
        (0.0..=PI, 0.0..=FRAC_PI_2, 0.0..=PI),
        (0.0..=FRAC_PI_2, 0.0..=PI, 0.0..=FRAC_PI_2),
    )
        .prop_map(|((t1, t2), (a, b, g), (tb, a2, b2))| vec![t1, t2, a, b, g, tb, a2, b2])
}

fn check_density(rho: &ComplexSquareMatrix) {
    assert!(rho.hermiticity_deviation() < 1e-12);
    assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(rho.trace().im, 0.0, epsilon = 1e-12);
    let eig = eig_hermitian(rho).unwrap();
    for &l in eig.eigenvalues() {
        assert!(l >= -1e-12, "negative eigenvalue {l}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn qubit_states_are_valid(coords in qubit_coords()) {
        let p = DensityMatrixParams::from_coordinates(2, &coords).unwrap();
        check_density(&density_from_params(&p));
    }

    #[test]
    fn qutrit_states_are_valid(coords in qutrit_coords()) {
        let p = DensityMatrixParams::from_coordinates(3, &coords).unwrap();
        check_density(&density_from_params(&p));
    }

    #[test]
    fn qutrit_spectrum_matches_angles(coords in qutrit_coords()) {
        let p = DensityMatrixParams::from_coordinates(3, &coords).unwrap();
        let mut expected = diag_eigenvalues(&p.eigen);
        expected.sort_by(|a, b| b.total_cmp(a));
        let eig = eig_hermitian(&density_from_params(&p)).unwrap();
        for (got, want) in eig.eigenvalues().iter().zip(&expected) {
            assert_abs_diff_eq!(*got, *want, epsilon = 1e-12);
        }
    }

    #[test]
    fn euler_unitary_is_special_unitary(
        coords in qutrit_coords(),
        gamma in 0.0..=PI,
        c in 0.0..=PI,
        phi in 0.0..=2.0 * PI,
    ) {
        let full = [coords[2], coords[3], gamma, coords[5], coords[6], coords[7], c, phi];
        let u = euler_unitary(3, &full).unwrap();
        let id = ComplexSquareMatrix::identity(3).unwrap();
        assert!((u * u.dagger()).distance(&id) < 1e-13);
        assert!((u.det() - C64::new(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn qubit_inverse_round_trip(coords in qubit_coords()) {
        let p = DensityMatrixParams::from_coordinates(2, &coords).unwrap();
        let rho = density_from_params(&p);
        let inv = params_from_density_2(&rho).unwrap();
        assert!(density_from_params(&inv.params).distance(&rho) < 1e-10);
    }

    #[test]
    fn bures_density_is_nonnegative(coords in qutrit_coords()) {
        let p = DensityMatrixParams::from_coordinates(3, &coords).unwrap();
        let d = bures_joint_density(&p, NormalizationMode::Normalized);
        assert!(d.value >= 0.0 && d.value.is_finite());
    }

    #[test]
    fn haar_qubit_density_depends_only_on_beta(a1 in 0.0..=PI, a2 in 0.0..=PI, b in 0.0..=FRAC_PI_2) {
        let c1 = CosetAngles::new(2, &[a1, b]).unwrap();
        let c2 = CosetAngles::new(2, &[a2, b]).unwrap();
        assert_abs_diff_eq!(haar_coset_density(&c1), haar_coset_density(&c2), epsilon = 1e-13);
        assert_abs_diff_eq!(haar_coset_density(&c1), (2.0 * b).sin(), epsilon = 1e-13);
    }

    #[test]
    fn spectral_functionals_are_in_range(coords in qutrit_coords()) {
        let p = DensityMatrixParams::from_coordinates(3, &coords).unwrap();
        let rho = density_from_params(&p);
        let s = von_neumann_entropy(&rho).unwrap();
        let pur = purity(&rho).unwrap();
        assert!((-1e-12..=3f64.ln() + 1e-12).contains(&s));
        assert!((1.0 / 3.0 - 1e-12..=1.0 + 1e-12).contains(&pur));
    }
}
