use geoharmonic::stencil::second_derivative;
use geoharmonic::*;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn complex_vec(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n)
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
}

fn state_and_hamiltonian() -> impl Strategy<Value = (StateVector, Hamiltonian)> {
    (2usize..=8).prop_flat_map(|n| (complex_vec(n), complex_vec(n * n))).prop_filter_map(
        "degenerate draw",
        |(psi, h)| {
            let n = psi.len();
            let psi = StateVector::normalized(DVector::from_vec(psi)).ok()?;
            let a = DMatrix::from_vec(n, n, h);
            let herm = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
            Some((psi, Hamiltonian::new(herm).ok()?))
        },
    )
}

fn horizontal_pair() -> impl Strategy<Value = (DVector<Complex64>, DVector<Complex64>, f64)> {
    (2usize..=6)
        .prop_flat_map(|n| (complex_vec(n), complex_vec(n), 0.1..3.0f64))
        .prop_filter_map("degenerate draw", |(a, b, v)| {
            let psi = DVector::from_vec(a);
            if psi.norm() < 1e-3 {
                return None;
            }
            let psi = psi.normalize();
            let w = DVector::from_vec(b);
            let w = &w - &psi * psi.dotc(&w);
            if w.norm() < 1e-3 {
                return None;
            }
            let w = w.normalize() * Complex64::new(v, 0.0);
            Some((psi, w, v))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn speed_matches_dispersion((psi, h) in state_and_hamiltonian()) {
        let (speed, dispersion) = speed_equals_dispersion_check(&psi, &h).unwrap();
        prop_assert!((speed - dispersion).abs() <= 1e-12);
        prop_assert!((speed * speed - dispersion * dispersion).abs() <= 1e-12);
    }

    #[test]
    fn geodesic_keeps_unit_norm((psi, w, v) in horizontal_pair(), s in -10.0..10.0f64) {
        let g = horizontal_geodesic(&psi, &w, v, s).unwrap();
        prop_assert!((g.amplitudes().norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn transition_follows_cosine_law((psi, w, v) in horizontal_pair(), s in -5.0..5.0f64) {
        let start = horizontal_geodesic(&psi, &w, v, 0.0).unwrap();
        let g = horizontal_geodesic(&psi, &w, v, s).unwrap();
        let p = transition_probability(&g, &start).unwrap();
        prop_assert!((p - (v * s).cos().powi(2)).abs() <= 1e-12);
    }

    #[test]
    fn arc_endpoints_project_onto_rays(a in complex_vec(4), b in complex_vec(4)) {
        let (Ok(psi_a), Ok(psi_b)) = (
            StateVector::normalized(DVector::from_vec(a)),
            StateVector::normalized(DVector::from_vec(b)),
        ) else { return Ok(()) };
        let Ok((theta, _)) = arc_parameters(&psi_a, &psi_b) else { return Ok(()) };
        prop_assume!(theta > 1e-3);
        let start = geodesic_arc_between(&psi_a, &psi_b, 0.0).unwrap();
        let end = geodesic_arc_between(&psi_a, &psi_b, theta).unwrap();
        prop_assert!((transition_probability(&start, &psi_a).unwrap() - 1.0).abs() <= 1e-12);
        prop_assert!((transition_probability(&end, &psi_b).unwrap() - 1.0).abs() <= 1e-12);
    }
}

fn sho_residual(psi: &DVector<Complex64>, w: &DVector<Complex64>, v: f64, h: f64) -> f64 {
    let n = (2.0 / h).round() as usize;
    let samples: Vec<DVector<Complex64>> = (0..=n)
        .map(|i| horizontal_geodesic(psi, w, v, i as f64 * h).unwrap().into_inner())
        .collect();
    let acc = second_derivative(&samples, h).unwrap();
    acc.iter()
        .zip(&samples)
        .map(|(a, x)| (a + x * Complex64::new(v * v, 0.0)).norm())
        .fold(0.0, f64::max)
}

#[test]
fn geodesic_residual_is_second_order() {
    let psi = DVector::from_vec(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8), Complex64::new(0.0, 0.0)]);
    let w = DVector::from_vec(vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.96, 0.28)]);
    let v = w.norm();
    let errors: Vec<f64> = [1e-2, 5e-3, 2.5e-3].iter().map(|&h| sho_residual(&psi, &w, v, h)).collect();
    assert!(errors[0] / errors[1] >= 3.5 && errors[1] / errors[2] >= 3.5, "{errors:?}");
    assert!(errors[2] <= 1e-5, "{errors:?}");
}

fn propagate_grid(h: &Hamiltonian, psi: &StateVector, t_end: f64, intervals: usize) -> Vec<StateVector> {
    (0..=intervals)
        .map(|i| h.propagate(psi, t_end * i as f64 / intervals as f64).unwrap())
        .collect()
}

#[test]
fn ray_phase_survives_closed_gauge_loops() {
    let h = Hamiltonian::new(DMatrix::from_row_slice(3, 3, &[
        Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.2), Complex64::new(0.0, 0.0),
        Complex64::new(0.3, -0.2), Complex64::new(-0.5, 0.0), Complex64::new(0.4, 0.0),
        Complex64::new(0.0, 0.0), Complex64::new(0.4, 0.0), Complex64::new(0.2, 0.0),
    ])).unwrap();
    let psi = StateVector::from_real(&[0.6, 0.8, 0.0]).unwrap();
    let (t_end, intervals) = (2.0, 400);
    let dt = t_end / intervals as f64;
    let traj = propagate_grid(&h, &psi, t_end, intervals);
    let base = ray_phase(&traj, dt).unwrap();
    for winding in [0.0, 1.0, -2.0] {
        for amplitude in [0.3, 1.5] {
            let gauged: Vec<StateVector> = traj
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let t = i as f64 * dt;
                    let alpha = amplitude * (2.0 * PI * t / t_end).sin() + 2.0 * PI * winding * t / t_end;
                    p.with_phase(alpha)
                })
                .collect();
            let moved = ray_phase(&gauged, dt).unwrap();
            let diff = principal_angle(moved.value - base.value).abs();
            let bound = 10.0 * (base.truncation_estimate + moved.truncation_estimate);
            assert!(diff <= bound, "diff {diff} bound {bound}");
        }
    }
}

#[test]
fn stationary_state_has_no_geometric_phase() {
    let h = Hamiltonian::from_real_diagonal(&[0.7, -1.2, 2.5]).unwrap();
    let psi = StateVector::basis(3, 1).unwrap();
    let traj = propagate_grid(&h, &psi, 7.0, 700);
    let phases = phase_decomposition(&traj, std::slice::from_ref(&h), 0.01, 1.0).unwrap();
    assert!(phases.geometric.abs() <= 1e-10, "{phases:?}");
    assert!((phases.dynamical - 1.2 * 7.0).abs() <= 1e-12);
}
