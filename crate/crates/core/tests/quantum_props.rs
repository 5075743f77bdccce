mod common;

use common::{angles, rotation_product};
use proptest::prelude::*;
use qbos::quantum::{
    apply_pair, density_from_state, su2_from_angles, Complex, Density4, Matrix2, State4, Unitary2,
};

const TOL: f64 = 1e-12;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn euler_unitaries_are_special_unitary(a in angles()) {
        let u = su2_from_angles(a);
        prop_assert!(u.unitarity_defect() < TOL);
        prop_assert!(u.det_defect() < TOL);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn matches_rotation_product(a in angles()) {
        let u = su2_from_angles(a);
        let r = rotation_product(a.theta(), a.phi(), a.psi());
        for (i, row) in r.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                prop_assert!((u.matrix().entry(i, j) - x).norm() < TOL);
            }
        }
    }

    #[test]
    fn products_stay_special_unitary(a in angles(), b in angles()) {
        let uv = su2_from_angles(a) * su2_from_angles(b);
        prop_assert!(uv.unitarity_defect() < TOL);
        prop_assert!(uv.det_defect() < TOL);
        prop_assert!(Unitary2::try_from_matrix(*uv.matrix()).is_ok());
    }

    #[test]
    fn apply_pair_preserves_norm(
        a in angles(),
        b in angles(),
        amps in proptest::array::uniform8(-1.0f64..1.0),
    ) {
        let raw: [Complex; 4] = std::array::from_fn(|k| Complex::new(amps[2 * k], amps[2 * k + 1]));
        let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let state = State4::new(raw.map(|c| c / norm)).unwrap();
        let out = apply_pair(&su2_from_angles(a), &su2_from_angles(b), &state);
        prop_assert!((out.norm_sqr() - 1.0).abs() < TOL);
    }

    #[test]
    fn pure_state_densities_are_valid(
        amps in proptest::array::uniform8(-1.0f64..1.0),
    ) {
        let raw: [Complex; 4] = std::array::from_fn(|k| Complex::new(amps[2 * k], amps[2 * k + 1]));
        let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let state = State4::new(raw.map(|c| c / norm)).unwrap();
        let rho = density_from_state(&state);
        prop_assert!(rho.matrix().hermiticity_defect() < TOL);
        prop_assert!((rho.matrix().trace() - Complex::new(1.0, 0.0)).norm() < TOL);
        prop_assert!(rho.min_eigenvalue() > -1e-10);
        prop_assert!(Density4::try_from_matrix(*rho.matrix()).is_ok());
    }
}

#[test]
fn non_unitary_matrix_rejected() {
    let m = Matrix2::hadamard().scale(Complex::new(2.0, 0.0));
    assert!(Unitary2::try_from_matrix(m).is_err());
    // Hadamard is unitary with det −1, so it is not in SU(2).
    assert!(Unitary2::try_from_matrix(Matrix2::hadamard()).is_err());
}
