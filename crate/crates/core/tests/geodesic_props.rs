use geoharmonic::*;
use nalgebra::{dvector, DMatrix};
use proptest::prelude::*;
use std::f64::consts::PI;

fn embed(x: &[f64]) -> [f64; 3] {
    let (st, ct) = x[0].sin_cos();
    let (sp, cp) = x[1].sin_cos();
    [st * cp, st * sp, ct]
}

// Great circle through the equator point (1,0,0) heading north-east at `tilt`.
fn great_circle(tilt: f64, s: f64) -> [f64; 3] {
    let t = [0.0, tilt.sin(), -tilt.cos()];
    let (ss, cs) = s.sin_cos();
    [cs + ss * t[0], ss * t[1], ss * t[2]]
}

// The drift monitor is switched off so every run takes exactly the fixed steps.
fn sphere_endpoint_error(h: f64, s_end: f64) -> f64 {
    let tilt: f64 = 0.7;
    let v0 = [tilt.cos(), tilt.sin()];
    let mut settings = IntegratorSettings::new(h, s_end);
    settings.drift_tolerance = f64::INFINITY;
    let traj = integrate_geodesic(&MetricField::unit_sphere(), &[PI / 2.0, 0.0], &v0, &settings, GeodesicHooks::default()).unwrap();
    assert_eq!(traj.termination, Termination::Completed);
    let p = embed(traj.positions.last().unwrap());
    let q = great_circle(tilt, *traj.parameters.last().unwrap());
    (0..3).map(|i| (p[i] - q[i]).powi(2)).sum::<f64>().sqrt()
}

#[test]
fn great_circle_closes_after_two_pi() {
    assert!(sphere_endpoint_error(1e-3, 2.0 * PI) <= 1e-8);
}

#[test]
fn sphere_convergence_is_fourth_order() {
    let coarse = sphere_endpoint_error(0.1, 2.0 * PI);
    let fine = sphere_endpoint_error(0.05, 2.0 * PI);
    assert!(coarse / fine >= 12.0, "{coarse} {fine}");
}

#[test]
fn speed_is_conserved_on_the_sphere() {
    let g = MetricField::unit_sphere();
    let traj = integrate_affine_geodesic(&g, &[1.2, 0.3], &[0.4, 0.9], 10.0, 1e-3).unwrap();
    assert!(traj.invariant_drift(&g).unwrap() <= 1e-8);
}

#[test]
fn forward_then_backward_returns_home() {
    let g = MetricField::unit_sphere();
    let x0 = [1.1, 0.2];
    let out = integrate_affine_geodesic(&g, &x0, &[0.3, -0.8], 5.0, 1e-3).unwrap();
    let x1 = out.positions.last().unwrap();
    let v1: Vec<f64> = out.velocities.last().unwrap().iter().map(|v| -v).collect();
    let back = integrate_affine_geodesic(&g, x1, &v1, 5.0, 1e-3).unwrap();
    let x2 = back.positions.last().unwrap();
    assert!((x2[0] - x0[0]).abs() <= 1e-9 && (x2[1] - x0[1]).abs() <= 1e-9);
}

fn anharmonic_jacobi() -> JacobiSystem {
    JacobiSystem::new(1, 1.3, 2.0, |q| 0.5 * q[0] * q[0] + 0.1 * q[0].powi(4) + 0.2 * q[0].sin(), |q| {
        vec![q[0] + 0.4 * q[0].powi(3) + 0.2 * q[0].cos()]
    })
    .unwrap()
}

#[test]
fn jacobi_christoffel_matches_closed_form() {
    let sys = anharmonic_jacobi();
    let g = jacobi_metric(&sys);
    for q in [-0.8, 0.0, 0.5, 1.1] {
        let gamma = christoffel(&g, &[q]).unwrap();
        let expected = -sys.gradient(&[q])[0] / (2.0 * sys.kinetic(&[q]));
        assert!((gamma.get(0, 0, 0) - expected).abs() <= 1e-14);
    }
}

#[test]
fn finite_difference_christoffels_track_analytic() {
    let polar = MetricField::polar_plane();
    let jacobi = jacobi_metric(&anharmonic_jacobi());
    for relative_step in [1e-3, 1e-4] {
        let mode = DerivativeMode::FiniteDifference { relative_step };
        for x in [[0.5f64, 0.3], [1.0, -2.0], [2.0, 4.0]] {
            let h_g = relative_step * x[0].abs().max(x[1].abs()).max(1.0);
            let exact = christoffel(&polar, &x).unwrap();
            let fd = christoffel_with(&polar, &x, mode).unwrap();
            for (a, b, c) in iproduct() {
                assert!((exact.get(a, b, c) - fd.get(a, b, c)).abs() <= 10.0 * h_g * h_g);
            }
        }
        for q in [-0.8f64, 0.0, 0.5, 1.1] {
            let h_g = relative_step * f64::max(1.0, q.abs());
            let exact = christoffel(&jacobi, &[q]).unwrap().get(0, 0, 0);
            let fd = christoffel_with(&jacobi, &[q], mode).unwrap().get(0, 0, 0);
            assert!((exact - fd).abs() <= 10.0 * h_g * h_g, "q {q} {}", (exact - fd).abs());
        }
    }
}

fn iproduct() -> impl Iterator<Item = (usize, usize, usize)> {
    (0..2).flat_map(|a| (0..2).flat_map(move |b| (0..2).map(move |c| (a, b, c))))
}

fn warped_metric() -> MetricField {
    MetricField::new(3, Signature::Riemannian, |x| {
        let off = 0.1 * x[0] * x[1];
        let mut g = DMatrix::from_diagonal(&dvector![1.0 + x[0] * x[0], 1.0 + x[1].sin().powi(2), 2.0 + x[2].cos()]);
        g[(0, 1)] = off;
        g[(1, 0)] = off;
        Ok(g)
    })
}

proptest! {
    #[test]
    fn christoffels_are_bitwise_symmetric(x in prop::array::uniform3(-2.0..2.0f64)) {
        let gamma = christoffel(&warped_metric(), &x).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    prop_assert_eq!(gamma.get(a, b, c).to_bits(), gamma.get(a, c, b).to_bits());
                }
            }
        }
    }

    #[test]
    fn euclidean_geodesics_are_lines(x0 in prop::array::uniform2(-5.0..5.0f64), v0 in prop::array::uniform2(-2.0..2.0f64)) {
        let traj = integrate_affine_geodesic(&MetricField::euclidean(2), &x0, &v0, 3.0, 0.1).unwrap();
        for (s, x) in traj.parameters.iter().zip(&traj.positions) {
            for k in 0..2 {
                prop_assert!((x[k] - (x0[k] + v0[k] * s)).abs() <= 1e-12);
            }
        }
    }
}

struct Warp {
    sigma: fn(f64) -> f64,
    d1: fn(f64) -> f64,
    d2: fn(f64) -> f64,
}

const WARPS: [Warp; 3] = [
    Warp { sigma: |s| s * s, d1: |s| 2.0 * s, d2: |_| 2.0 },
    Warp { sigma: |s| (0.5 * s).exp(), d1: |s| 0.5 * (0.5 * s).exp(), d2: |s| 0.25 * (0.5 * s).exp() },
    Warp { sigma: |s| s.sinh(), d1: |s| s.cosh(), d2: |s| s.sinh() },
];

fn warped_line(w: &Warp, h: f64) -> (GeodesicTrajectory, Vec<f64>) {
    let (x0, v0) = ([1.0, -2.0], [0.6, 0.8]);
    let n = (1.0 / h).round() as usize;
    let s: Vec<f64> = (0..=n).map(|i| 1.0 + i as f64 * h).collect();
    let pos = s.iter().map(|&s| vec![x0[0] + v0[0] * (w.sigma)(s), x0[1] + v0[1] * (w.sigma)(s)]).collect();
    let vel = s.iter().map(|&s| vec![v0[0] * (w.d1)(s), v0[1] * (w.d1)(s)]).collect();
    let g = s.iter().map(|&s| (w.d2)(s) / (w.d1)(s)).collect();
    (GeodesicTrajectory::from_samples(s, pos, vel).unwrap(), g)
}

fn max_norm(r: &[Vec<f64>]) -> f64 {
    r.iter().map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt()).fold(0.0, f64::max)
}

#[test]
fn warped_lines_solve_the_nonaffine_equation() {
    let flat = MetricField::euclidean(2);
    for w in &WARPS {
        let (traj, g) = warped_line(w, 5e-4);
        let r = max_norm(&nonaffine_residual(&traj, &flat, &g).unwrap());
        assert!(r <= 1e-6, "{r}");
        let wrong = max_norm(&nonaffine_residual(&traj, &flat, &vec![0.0; g.len()]).unwrap());
        assert!(wrong >= 1e-2, "{wrong}");
    }
}

#[test]
fn affine_samples_have_second_order_residual() {
    let g = MetricField::unit_sphere();
    let residual = |h: f64| {
        let traj = integrate_affine_geodesic(&g, &[1.0, 0.0], &[0.5, 1.0], 2.0, h).unwrap();
        max_norm(&nonaffine_residual(&traj, &g, &vec![0.0; traj.len()]).unwrap())
    };
    let (a, b) = (residual(1e-2), residual(5e-3));
    assert!(a / b >= 3.5, "{a} {b}");
}

#[test]
fn reparametrized_line_has_second_order_residual() {
    let (x0, v0) = ([1.0, -2.0], [0.6, 0.8]);
    let residual = |n: usize| max_norm(&squared_parameter_run(x0, v0, n).1);
    let (a, b) = (residual(1000), residual(2000));
    assert!(a / b >= 3.5 && b <= 1e-5, "{a} {b}");
}

fn squared_parameter_run(x0: [f64; 2], v0: [f64; 2], n: usize) -> (GeodesicTrajectory, Vec<Vec<f64>>) {
    let s: Vec<f64> = (0..=n).map(|i| 1.0 + 3.0 * i as f64 / n as f64).collect();
    let pos = s.iter().map(|&s| vec![x0[0] + v0[0] * s.sqrt(), x0[1] + v0[1] * s.sqrt()]).collect();
    let vel = s.iter().map(|&s| vec![v0[0] * 0.5 / s.sqrt(), v0[1] * 0.5 / s.sqrt()]).collect();
    let lambda: Vec<f64> = s.iter().map(|&s| 2.0 * s.sqrt()).collect();
    let traj = GeodesicTrajectory::from_samples(s, pos, vel).unwrap();
    let affine = reparametrize_to_affine(&traj, &lambda).unwrap();
    let r = nonaffine_residual(&affine, &MetricField::euclidean(2), &vec![0.0; affine.len()]).unwrap();
    (affine, r)
}

#[test]
fn squared_parameter_gives_constant_speed_line() {
    let (x0, v0) = ([1.0, -2.0], [0.6, 0.8]);
    let (affine, _) = squared_parameter_run(x0, v0, 1000);
    assert!((affine.parameters.last().unwrap() - 1.0).abs() <= 1e-6);
    for (tau, (x, v)) in affine.parameters.iter().zip(affine.positions.iter().zip(&affine.velocities)) {
        for k in 0..2 {
            assert!((x[k] - (x0[k] + v0[k] * (tau + 1.0))).abs() <= 1e-6);
            assert!((v[k] - v0[k]).abs() <= 1e-6);
        }
    }
    assert!(affine.uniform_step().unwrap() > 0.0);
}
