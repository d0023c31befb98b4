use num_complex::Complex64 as C64;
use proptest::prelude::*;

use imaginarity::channels::{apply, random_real_channel};
use imaginarity::io::{density_to_json, ensemble_to_json, parse_ensemble, parse_state, pure_to_json};
use imaginarity::measures::{
    equalized_decomposition, geometric_like_from_geometric, measure_mixed, measure_pure, optimal_decomposition,
    transpose_fidelity, MeasureKind,
};
use imaginarity::numerics::{eig_hermitian, root_fidelity, sqrt_psd, takagi, ComplexMatrix};
use imaginarity::sampling::{random_density, random_orthogonal, random_pure, random_real_density, seeded};
use imaginarity::DensityMatrix;

fn square(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim).prop_flat_map(|n| {
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n).prop_map(move |v| {
            ComplexMatrix::from_row_major(n, v.into_iter().map(|(re, im)| C64::new(re, im)).collect()).unwrap()
        })
    })
}

fn hermitian() -> impl Strategy<Value = ComplexMatrix> {
    square(6).prop_map(|m| &m + &m.adjoint())
}

fn symmetric() -> impl Strategy<Value = ComplexMatrix> {
    square(6).prop_map(|m| &m + &m.transpose())
}

/// Seeded random state in dimension 2 to 4, pure or mixed.
fn state() -> impl Strategy<Value = DensityMatrix> {
    (any::<u64>(), 2..=4usize, any::<bool>()).prop_map(|(seed, d, pure)| {
        let mut rng = seeded(seed);
        if pure {
            random_pure(&mut rng, d).density()
        } else {
            random_density(&mut rng, d)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigendecomposition_reconstructs(h in hermitian()) {
        let eig = eig_hermitian(&h).unwrap();
        prop_assert!(eig.reconstruct_with(|x| x).max_abs_diff(&h) <= 1e-10);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!((eig.eigenvalues.iter().sum::<f64>() - h.trace().re).abs() <= 1e-10);
        let v = &eig.eigenvectors;
        prop_assert!((&v.adjoint() * v).max_abs_diff(&ComplexMatrix::identity(h.dim())) < 1e-10);
    }

    #[test]
    fn takagi_reconstructs(s in symmetric()) {
        let t = takagi(&s).unwrap();
        prop_assert!(t.reconstruct().max_abs_diff(&s) <= 1e-9);
        prop_assert!(t.singular_values.iter().all(|&d| d >= 0.0));
        // Singular values from the eigenvalues of S†S, without Takagi.
        let gram = &s.adjoint() * &s;
        let singular: f64 = eig_hermitian(&gram.hermitian_part()).unwrap().eigenvalues.iter().map(|l| l.max(0.0).sqrt()).sum();
        prop_assert!((t.singular_values.iter().sum::<f64>() - singular).abs() <= 1e-9);
        let u = &t.unitary;
        prop_assert!((&u.adjoint() * u).max_abs_diff(&ComplexMatrix::identity(s.dim())) < 1e-9);
    }

    #[test]
    fn psd_square_root_squares_back(m in square(6)) {
        let psd = &m * &m.adjoint();
        let root = sqrt_psd(&psd).unwrap();
        prop_assert!((&root * &root).max_abs_diff(&psd) <= 1e-9);
    }

    #[test]
    fn measures_stay_in_range(rho in state()) {
        let g = measure_mixed(&rho, MeasureKind::Geometric).unwrap();
        let gl = measure_mixed(&rho, MeasureKind::GeometricLike).unwrap();
        prop_assert!((-1e-12..=0.5 + 1e-12).contains(&g));
        prop_assert!((-1e-12..=MeasureKind::GeometricLike.max_value() + 1e-12).contains(&gl));
        prop_assert!((gl - geometric_like_from_geometric(g)).abs() < 1e-10);
    }

    #[test]
    fn pure_and_mixed_evaluations_agree(seed in any::<u64>(), d in 2..=5usize) {
        let psi = random_pure(&mut seeded(seed), d);
        for kind in MeasureKind::ALL {
            let mixed = measure_mixed(&psi.density(), kind).unwrap();
            prop_assert!((mixed - measure_pure(&psi, kind)).abs() < 1e-9);
        }
    }

    #[test]
    fn real_states_are_free(seed in any::<u64>(), d in 2..=5usize) {
        let rho = random_real_density(&mut seeded(seed), d);
        prop_assert!(measure_mixed(&rho, MeasureKind::GeometricLike).unwrap().abs() < 1e-8);
        prop_assert!((transpose_fidelity(&rho).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn orthogonal_rotations_preserve_measures(rho in state(), seed in any::<u64>()) {
        let o = random_orthogonal(&mut seeded(seed), rho.dim());
        let rotated = DensityMatrix::new(o.sandwich(rho.matrix()).hermitian_part()).unwrap();
        for kind in MeasureKind::ALL {
            let diff = measure_mixed(&rotated, kind).unwrap() - measure_mixed(&rho, kind).unwrap();
            prop_assert!(diff.abs() < 1e-9);
        }
    }

    #[test]
    fn real_channels_do_not_create_imaginarity(rho in state(), seed in any::<u64>(), n in 1..=4usize) {
        let channel = random_real_channel(rho.dim(), n, seed).unwrap();
        let out = apply(&channel, &rho).unwrap();
        for kind in MeasureKind::ALL {
            prop_assert!(measure_mixed(&out, kind).unwrap() <= measure_mixed(&rho, kind).unwrap() + 1e-9);
        }
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded(a in state(), seed in any::<u64>()) {
        let b = random_density(&mut seeded(seed), a.dim());
        let ab = root_fidelity(&a, &b).unwrap();
        prop_assert!((ab - root_fidelity(&b, &a).unwrap()).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!((root_fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn decompositions_reach_the_roof(rho in state()) {
        let gl = measure_mixed(&rho, MeasureKind::GeometricLike).unwrap();
        let g = measure_mixed(&rho, MeasureKind::Geometric).unwrap();
        let opt = optimal_decomposition(&rho).unwrap();
        prop_assert!(opt.density_matrix().max_abs_diff(rho.matrix()) < 1e-9);
        prop_assert!((opt.average(|m| measure_pure(m, MeasureKind::Geometric)) - g).abs() < 1e-8);
        let eq = equalized_decomposition(&rho).unwrap();
        prop_assert!(eq.density_matrix().max_abs_diff(rho.matrix()) < 1e-9);
        for m in &eq.members {
            prop_assert!((measure_pure(m, MeasureKind::GeometricLike) - gl).abs() < 1e-7);
        }
    }

    #[test]
    fn state_files_round_trip(rho in state(), seed in any::<u64>()) {
        let back = parse_state(&density_to_json(&rho)).unwrap().density();
        prop_assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-12);
        let psi = random_pure(&mut seeded(seed), rho.dim());
        let back = parse_state(&pure_to_json(&psi)).unwrap().density();
        prop_assert!(back.matrix().max_abs_diff(psi.density().matrix()) < 1e-12);
        let ensemble = optimal_decomposition(&rho).unwrap();
        let back = parse_ensemble(&ensemble_to_json(&ensemble)).unwrap();
        prop_assert!(back.density_matrix().max_abs_diff(rho.matrix()) < 1e-9);
    }
}
