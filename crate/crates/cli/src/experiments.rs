//! The named experiments and the measurements they share with the acceptance suite.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use geoharmonic::stencil::second_derivative;
use geoharmonic::*;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::config::{ExperimentConfig, ExperimentId};
use crate::record::ResultRecord;
use crate::rng::SplitMix64;
use crate::{HarnessError, Result};

pub const GRAVITY_SURFACE_RATIO: f64 = 0.015;
pub const GRAVITY_T_END: f64 = 40.0;
pub const GRAVITY_STEP: f64 = 1e-3;
pub const JACOBI_RELATIVE_STEP: f64 = 1e-3;
pub const FISHER_GRID: usize = 1000;

/// Parameters of a run with their defaults; unknown keys are a config error.
struct Params<'a> {
    values: &'a BTreeMap<String, f64>,
    defaults: &'static [(&'static str, f64)],
}

impl<'a> Params<'a> {
    fn new(experiment: ExperimentId, values: &'a BTreeMap<String, f64>, defaults: &'static [(&'static str, f64)]) -> Result<Self> {
        if let Some(key) = values.keys().find(|k| !defaults.iter().any(|(d, _)| d == k)) {
            let known: Vec<&str> = defaults.iter().map(|(k, _)| *k).collect();
            return Err(HarnessError::Config(format!(
                "unknown parameter `{key}` for experiment {} (expected one of: {})",
                experiment.name(),
                known.join(", ")
            )));
        }
        Ok(Self { values, defaults })
    }

    fn get(&self, key: &str) -> f64 {
        self.values.get(key).copied().unwrap_or_else(|| {
            self.defaults.iter().find(|(k, _)| *k == key).map(|(_, v)| *v).unwrap_or(f64::NAN)
        })
    }

    fn count(&self, key: &str) -> Result<usize> {
        let v = self.get(key);
        if v.fract() != 0.0 || v < 0.0 || !v.is_finite() || v > 1e12 {
            return Err(HarnessError::Config(format!("parameter `{key}` must be a non-negative integer, got {v}")));
        }
        Ok(v as usize)
    }

    fn positive(&self, key: &str) -> Result<f64> {
        let v = self.get(key);
        if !(v > 0.0 && v.is_finite()) {
            return Err(HarnessError::Config(format!("parameter `{key}` must be positive, got {v}")));
        }
        Ok(v)
    }
}

pub fn defaults(id: ExperimentId) -> &'static [(&'static str, f64)] {
    match id {
        ExperimentId::Grover => &[("N", 4.0), ("target", 1.0)],
        ExperimentId::Fisher => &[("N", 16.0), ("points", 1000.0), ("fd_step", 1e-5)],
        ExperimentId::AnandanAharonov => &[("N", 8.0), ("trials", 50.0)],
        ExperimentId::Gravity => &[("xi0", 1e-3), ("surface_ratio", GRAVITY_SURFACE_RATIO), ("omega", 1.0)],
        ExperimentId::Thermal => &[
            ("P0", 1.0),
            ("m", 1.0),
            ("A", 1.0),
            ("V0", 1.0),
            ("gamma", 1.4),
            ("amplitude", 0.1),
        ],
        ExperimentId::Jacobi => &[("trials", 20.0)],
        ExperimentId::Phases => &[("trials", 50.0), ("N", 3.0), ("steps", 400.0), ("t_end", 2.0)],
        ExperimentId::Table1 => &[],
    }
}

pub fn describe(id: ExperimentId) -> &'static str {
    match id {
        ExperimentId::Grover => "optimal iteration count, success probability, matrix-free iterate, Fisher information",
        ExperimentId::Fisher => "Fisher information along the Groverian path, geodesic residual, AQC schedule",
        ExperimentId::AnandanAharonov => "Fubini-Study speed against energy dispersion for random states",
        ExperimentId::Gravity => "radial oscillation frequency inside a constant-density sphere",
        ExperimentId::Thermal => "Ruchhardt frequency measured through the Jacobi-metric period",
        ExperimentId::Jacobi => "Jacobi geodesics against Newtonian harmonic motion",
        ExperimentId::Phases => "geometric phase under closed gauge loops and for stationary states",
        ExperimentId::Table1 => "measured against closed-form frequency for the four oscillator families",
    }
}

/// Runs one configured experiment; records come back in declaration order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let started = Instant::now();
    let id = config.experiment;
    let p = Params::new(id, &config.parameters, defaults(id))?;
    let mut rng = SplitMix64::new(config.seed);
    let mut records = match id {
        ExperimentId::Grover => grover(&p)?,
        ExperimentId::Fisher => fisher(&p)?,
        ExperimentId::AnandanAharonov => anandan_aharonov(&p, &mut rng)?,
        ExperimentId::Gravity => gravity(&p, config)?,
        ExperimentId::Thermal => thermal(&p, config)?,
        ExperimentId::Jacobi => jacobi(&p, config, &mut rng)?,
        ExperimentId::Phases => phases(&p, &mut rng)?,
        ExperimentId::Table1 => table1(&mut rng)?,
    };
    if config.output.timing {
        let ms = started.elapsed().as_millis() as u64;
        for r in &mut records {
            r.wall_ms = ms;
        }
    }
    Ok(records)
}

fn grover(p: &Params) -> Result<Vec<ResultRecord>> {
    let n = p.count("N")?;
    let target = p.count("target")?;
    let problem = GroverProblem::new(n, target)?;
    let phi = problem.rotation_angle();
    let opt = optimal_iterations(&problem);
    let echo = [("N", n as f64), ("target", target as f64)];
    let mut out = vec![ResultRecord::within(
        "grover",
        &echo,
        "k_exact",
        opt.k_exact as f64,
        PI / (2.0 * phi) - 0.5,
        0.5,
    )];
    if n <= MATRIX_FREE_CAP {
        let state = grover_state_matrix(&problem, opt.k_exact)?;
        let deviation = matrix_free_deviation(&problem, opt.k_exact)?;
        out.push(ResultRecord::within("grover", &echo, "success_prob", state.amplitudes()[target - 1].norm_sqr(), 1.0, (phi / 2.0).sin().powi(2) + 1e-12));
        out.push(ResultRecord::within("grover", &echo, "matrix_free_deviation", deviation, 0.0, 1e-10));
    } else {
        out.push(ResultRecord::within("grover", &echo, "success_prob", opt.success_probability, 1.0, (phi / 2.0).sin().powi(2) + 1e-12));
    }
    out.push(ResultRecord::within("grover", &echo, "fisher", fisher_worst(n, FisherMode::Analytic, FISHER_GRID)?, 4.0, 1e-10));
    out.push(ResultRecord::within("grover", &echo, "fisher_fd", fisher_worst(n, FisherMode::finite_difference(), FISHER_GRID)?, 4.0, 1e-6));
    Ok(out)
}

/// `max_m |<m|G^k|s> - closed form|` for the matrix-free iterate.
pub fn matrix_free_deviation(problem: &GroverProblem, k: u64) -> Result<f64> {
    let n = problem.size();
    let (a, b) = grover_state(problem, k);
    let other = b / ((n - 1) as f64).sqrt();
    let state = grover_state_matrix(problem, k)?;
    Ok(state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, amp)| {
            let expected = if i + 1 == problem.target() { a } else { other };
            (amp - Complex64::new(expected, 0.0)).norm()
        })
        .fold(0.0, f64::max))
}

/// The value of `F(theta)` furthest from 4 on a uniform grid over `[0, pi/2]`.
pub fn fisher_worst(n: usize, mode: FisherMode, points: usize) -> Result<f64> {
    let path = groverian_path(n)?;
    let mut worst = 4.0;
    for i in 0..points {
        let theta = PI / 2.0 * i as f64 / (points - 1).max(1) as f64;
        let f = fisher_information(&path, theta, mode)?;
        if (f - 4.0).abs() > (worst - 4.0f64).abs() {
            worst = f;
        }
    }
    Ok(worst)
}

/// `H` with `H (sin t, cos t) = i d/dt (sin t, cos t)`, generating the Groverian rotation.
pub fn groverian_generator() -> Result<Hamiltonian> {
    let i = Complex64::new(0.0, 1.0);
    let z = Complex64::new(0.0, 0.0);
    Ok(Hamiltonian::new(DMatrix::from_row_slice(2, 2, &[z, i, -i, z]))?)
}

/// Largest `|v_H^2 - F/4|` over the Groverian path driven by [`groverian_generator`].
pub fn groverian_speed_defect() -> Result<f64> {
    let h = groverian_generator()?;
    let path = groverian_path(2)?;
    let mut worst = 0.0f64;
    for k in 0..=50 {
        let theta = PI / 2.0 * k as f64 / 50.0;
        let psi = StateVector::from_real(&[theta.sin(), theta.cos()])?;
        let speed = fubini_study_speed(&psi, &h.schrodinger_tangent(&psi)?)?;
        let f = fisher_information(&path, theta, FisherMode::Analytic)?;
        worst = worst.max((speed * speed - f / 4.0).abs());
    }
    Ok(worst)
}

/// Max residual of `q_ddot + v^2 q` on closed-form Fisher geodesic samples with `F0 = 4`.
pub fn information_geodesic_residual(h: f64) -> Result<f64> {
    let f0 = 4.0;
    let v = information_speed(f0)?;
    let (q0, q_dot0) = ([0.0, 1.0], [v, 0.0]);
    let n = (2.0 / h).round() as usize;
    let q = (0..=n)
        .map(|i| sho_amplitude_solution(&q0, &q_dot0, f0, i as f64 * h))
        .collect::<geoharmonic::Result<Vec<_>>>()?;
    let residual = el_residual(&q, h, lagrange_multiplier_for_grover(f0)?, &vec![f0; n + 1])?;
    Ok(residual.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())))
}

/// Max `|D^2 psi + v^2 psi|` on unit-speed horizontal geodesic samples in C^3.
pub fn hilbert_geodesic_residual(h: f64) -> Result<f64> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let psi = DVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0)]);
    let w = DVector::from_vec(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.96, 0.28)]);
    let v = 1.0;
    let n = (2.0 / h).round() as usize;
    let samples = (0..=n)
        .map(|i| horizontal_geodesic(&psi, &w, v, i as f64 * h).map(StateVector::into_inner))
        .collect::<geoharmonic::Result<Vec<_>>>()?;
    let acc = second_derivative(&samples, h)?;
    Ok(acc
        .iter()
        .zip(&samples)
        .map(|(a, x)| (a + x * c(v * v, 0.0)).norm())
        .fold(0.0, f64::max))
}

fn fisher(p: &Params) -> Result<Vec<ResultRecord>> {
    let n = p.count("N")?;
    let points = p.count("points")?.max(2);
    let step = p.positive("fd_step")?;
    let echo = [("N", n as f64), ("points", points as f64), ("fd_step", step)];
    let e = "fisher";
    let mut out = vec![
        ResultRecord::within(e, &echo, "fisher", fisher_worst(n, FisherMode::Analytic, points)?, 4.0, 1e-10),
        ResultRecord::within(e, &echo, "fisher_fd", fisher_worst(n, FisherMode::FiniteDifference { step }, points)?, 4.0, 1e-6),
    ];
    let path = groverian_path(n)?;
    let lifted = PhasedPath::from_path(path)?;
    let mut worst = 0.0f64;
    for i in 0..points {
        let theta = PI / 2.0 * i as f64 / (points - 1) as f64;
        let cf = fisher_information(&path, theta, FisherMode::Analytic)?;
        worst = worst.max((quantum_fisher(&lifted, theta)? - cf / 4.0).abs());
    }
    out.push(ResultRecord::within(e, &echo, "quantum_minus_quarter_classical", worst, 0.0, 1e-10));
    out.push(ResultRecord::within(e, &echo, "speed_sq_minus_quarter_fisher", groverian_speed_defect()?, 0.0, 1e-10));
    out.push(ResultRecord::within(e, &echo, "information_speed", information_speed(4.0)?, 1.0, 1e-15));
    let r0 = information_geodesic_residual(1e-2)?;
    let r1 = information_geodesic_residual(5e-3)?;
    let r2 = information_geodesic_residual(2.5e-3)?;
    out.push(ResultRecord::at_least(e, &echo, "geodesic_residual_ratio_1", r0 / r1, 3.5));
    out.push(ResultRecord::at_least(e, &echo, "geodesic_residual_ratio_2", r1 / r2, 3.5));
    out.push(ResultRecord::at_most(e, &echo, "geodesic_residual", r2, 1e-5));
    out.extend(schedule_records(e, n)?);
    Ok(out)
}

pub fn schedule_records(experiment: &str, n: usize) -> Result<Vec<ResultRecord>> {
    let echo = [("N", n as f64)];
    let xs = (0..10_000)
        .map(|i| aqc_schedule(n, i as f64 / 9999.0))
        .collect::<geoharmonic::Result<Vec<f64>>>()?;
    let violations = xs.windows(2).filter(|w| !(w[1] > w[0])).count();
    Ok(vec![
        ResultRecord::within(experiment, &echo, "schedule_at_0", aqc_schedule(n, 0.0)?, 0.0, 1e-12),
        ResultRecord::within(experiment, &echo, "schedule_at_half", aqc_schedule(n, 0.5)?, 0.5, 1e-12),
        ResultRecord::within(experiment, &echo, "schedule_at_1", aqc_schedule(n, 1.0)?, 1.0, 1e-12),
        ResultRecord::within(experiment, &echo, "schedule_monotonicity_violations", violations as f64, 0.0, 0.0),
    ])
}

fn random_complex(rng: &mut SplitMix64, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| Complex64::new(rng.gaussian(), rng.gaussian())).collect()
}

/// Gaussian random state and Hermitian matrix of dimension `n`.
pub fn random_state_and_hamiltonian(rng: &mut SplitMix64, n: usize) -> Result<(StateVector, Hamiltonian)> {
    let psi = StateVector::normalized(DVector::from_vec(random_complex(rng, n)))?;
    let a = DMatrix::from_vec(n, n, random_complex(rng, n * n));
    let h = Hamiltonian::new((&a + a.adjoint()) * Complex64::new(0.5, 0.0))?;
    Ok((psi, h))
}

fn anandan_aharonov(p: &Params, rng: &mut SplitMix64) -> Result<Vec<ResultRecord>> {
    let n = p.count("N")?;
    let trials = p.count("trials")?;
    if n < 2 {
        return Err(HarnessError::Config(format!("N must be at least 2, got {n}")));
    }
    (0..trials)
        .map(|t| {
            let (psi, h) = random_state_and_hamiltonian(rng, n)?;
            let (speed, dispersion) = speed_equals_dispersion_check(&psi, &h)?;
            Ok(ResultRecord::within(
                "anandan-aharonov",
                &[("N", n as f64), ("trial", t as f64)],
                "speed",
                speed,
                dispersion,
                1e-12,
            ))
        })
        .collect()
}

fn integrator_or(config: &ExperimentConfig, h: f64, end: f64) -> Result<(f64, f64)> {
    let h = config.integrator.h.unwrap_or(h);
    let end = config.integrator.end.unwrap_or(end);
    if !(h > 0.0 && end > 0.0 && h.is_finite() && end.is_finite()) {
        return Err(HarnessError::Config(format!("integrator step and end must be positive, got h = {h}, end = {end}")));
    }
    Ok((h, end))
}

fn gravity(p: &Params, config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let xi0 = p.positive("xi0")?;
    let ratio = p.positive("surface_ratio")?;
    let omega = p.positive("omega")?;
    let (h, t_end) = integrator_or(config, GRAVITY_STEP, GRAVITY_T_END)?;
    let model = FluidSphereModel::with_frequency(omega, ratio)?;
    let run = simulate_radial_oscillation(&model, xi0, t_end, h)?;
    let echo = [("xi0", xi0), ("surface_ratio", ratio), ("omega", omega), ("h", h), ("t_end", t_end)];
    let v = gr_sho_frequency(&model);
    let fit = run.fitted_frequency.unwrap_or(f64::NAN);
    Ok(vec![
        ResultRecord::within("gravity", &echo, "frequency", fit, v, 1e-3 * v),
        ResultRecord::within("gravity", &echo, "cross_check_frequency", run.cross_check_frequency.unwrap_or(f64::NAN), fit, 1e-8),
        surface_record("gravity", &model)?,
    ])
}

pub fn surface_record(experiment: &str, model: &FluidSphereModel) -> Result<ResultRecord> {
    let c2 = model.light_speed().powi(2);
    let exterior = c2 * (1.0 - 2.0 * model.gravitational_constant() * model.mass() / (model.radius() * c2));
    Ok(ResultRecord::within(
        experiment,
        &[("surface_ratio", model.radius() / model.curvature_radius())],
        "surface_g0",
        model.g0(model.radius())?,
        exterior,
        1e-12,
    ))
}

/// Angular frequency `2 pi / T` with the period assembled from Jacobi half-runs.
pub fn jacobi_frequency(model: &RuchhardtModel, amplitude: f64) -> Result<f64> {
    let omega = ruchhardt_frequency(model);
    let energy = 0.5 * model.mass * (omega * amplitude).powi(2);
    let system = model.jacobi_system(energy)?;
    let quarter_arc = PI * energy / (2.0 * omega);
    let period = jacobi_period(&system, 0.0, JACOBI_RELATIVE_STEP * quarter_arc, 10.0 * model.period())?;
    Ok(2.0 * PI / period)
}

fn thermal(p: &Params, _config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let model = RuchhardtModel::new(p.get("P0"), p.get("m"), p.get("A"), p.get("V0"), p.get("gamma"))?;
    let amplitude = p.positive("amplitude")?;
    let echo = [
        ("P0", model.pressure),
        ("m", model.mass),
        ("A", model.area),
        ("V0", model.volume),
        ("gamma", model.gamma),
        ("amplitude", amplitude),
    ];
    let v = ruchhardt_frequency(&model);
    let measured = jacobi_frequency(&model, amplitude)?;
    Ok(vec![
        ResultRecord::within("thermal", &echo, "frequency", measured, v, 1e-5 * v),
        ResultRecord::within("thermal", &echo, "gamma_round_trip", model.gamma_from_period(model.period()), model.gamma, 1e-14 * model.gamma),
        ResultRecord::within("thermal", &echo, "gamma_from_measured_period", model.gamma_from_period(2.0 * PI / measured), model.gamma, 1e-4 * model.gamma),
    ])
}

/// Max `|q_jacobi(t) - q_newton(t)|` from equilibrium until `|q| = 0.95 A`.
pub fn jacobi_newton_deviation(mass: f64, omega: f64, amplitude: f64) -> Result<f64> {
    let energy = 0.5 * mass * (omega * amplitude).powi(2);
    let system = JacobiSystem::harmonic(mass, omega, energy)?;
    let t_end = 0.95f64.asin() / omega;
    let h = JACOBI_RELATIVE_STEP * PI * energy / (2.0 * omega);
    let run = jacobi_geodesic_to_newton(&system, &[0.0], &[1.0], t_end, h)?;
    if run.termination != Termination::Completed {
        return Ok(f64::INFINITY);
    }
    let mut worst = 0.0f64;
    for (t, q) in run.times.iter().zip(&run.positions) {
        worst = worst.max((q[0] - newton_sho_solution(0.0, omega * amplitude, omega, *t)?).abs());
    }
    Ok(worst)
}

pub fn random_sho(rng: &mut SplitMix64) -> (f64, f64, f64) {
    (rng.uniform(0.2, 5.0), rng.uniform(0.3, 4.0), rng.uniform(0.05, 2.0))
}

fn jacobi(p: &Params, _config: &ExperimentConfig, rng: &mut SplitMix64) -> Result<Vec<ResultRecord>> {
    let trials = p.count("trials")?;
    (0..trials)
        .map(|_| {
            let (mass, omega, amplitude) = random_sho(rng);
            Ok(ResultRecord::within(
                "jacobi",
                &[("mass", mass), ("omega", omega), ("amplitude", amplitude)],
                "max_deviation",
                jacobi_newton_deviation(mass, omega, amplitude)?,
                0.0,
                1e-6,
            ))
        })
        .collect()
}

/// Ray phase of a propagated trajectory against the same trajectory under
/// random closed gauge loops: `(base, [(gauged, bound)])`, with the bound ten
/// times the summed truncation estimates.
pub fn gauge_loop_phases(
    rng: &mut SplitMix64,
    n: usize,
    trials: usize,
    steps: usize,
    t_end: f64,
) -> Result<(f64, Vec<(f64, f64)>)> {
    let steps = steps + steps % 2;
    let (psi, h) = random_state_and_hamiltonian(rng, n)?;
    let dt = t_end / steps as f64;
    let traj = (0..=steps)
        .map(|i| h.propagate(&psi, i as f64 * dt))
        .collect::<geoharmonic::Result<Vec<_>>>()?;
    let base = ray_phase(&traj, dt)?;
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let coefficients = [rng.uniform(-1.5, 1.5), rng.uniform(-1.0, 1.0), rng.uniform(-0.5, 0.5)];
        let winding = rng.range_inclusive(0, 4) as f64 - 2.0;
        let gauged: Vec<StateVector> = traj
            .iter()
            .enumerate()
            .map(|(i, state)| {
                let x = i as f64 / steps as f64;
                let alpha = coefficients
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * (2.0 * PI * (k + 1) as f64 * x).sin())
                    .sum::<f64>()
                    + 2.0 * PI * winding * x;
                state.with_phase(alpha)
            })
            .collect();
        let moved = ray_phase(&gauged, dt)?;
        let value = base.value + principal_angle(moved.value - base.value);
        out.push((value, 10.0 * (base.truncation_estimate + moved.truncation_estimate)));
    }
    Ok((base.value, out))
}

/// Geometric phase of an energy eigenstate evolved for time `t_end`.
pub fn stationary_geometric_phase() -> Result<f64> {
    let h = Hamiltonian::from_real_diagonal(&[0.7, -1.2, 2.5])?;
    let psi = StateVector::basis(3, 1)?;
    let steps = 700;
    let dt = 7.0 / steps as f64;
    let traj = (0..=steps)
        .map(|i| h.propagate(&psi, i as f64 * dt))
        .collect::<geoharmonic::Result<Vec<_>>>()?;
    Ok(phase_decomposition(&traj, std::slice::from_ref(&h), dt, 1.0)?.geometric)
}

fn phases(p: &Params, rng: &mut SplitMix64) -> Result<Vec<ResultRecord>> {
    let trials = p.count("trials")?;
    let n = p.count("N")?;
    let steps = p.count("steps")?;
    let t_end = p.positive("t_end")?;
    if n < 2 || steps < 4 {
        return Err(HarnessError::Config("phases needs N >= 2 and steps >= 4".into()));
    }
    let (base, gauged) = gauge_loop_phases(rng, n, trials, steps, t_end)?;
    let mut out: Vec<ResultRecord> = gauged
        .iter()
        .enumerate()
        .map(|(t, (value, bound))| {
            ResultRecord::within("phases", &[("N", n as f64), ("trial", t as f64)], "gauged_ray_phase", *value, base, *bound)
        })
        .collect();
    out.push(ResultRecord::within("phases", &[], "stationary_geometric_phase", stationary_geometric_phase()?, 0.0, 1e-10));
    Ok(out)
}

/// Fubini-Study speed of `e^{-iHt} psi` at `t = 0`, differentiated numerically.
fn measured_hilbert_speed(psi: &StateVector, h: &Hamiltonian) -> Result<f64> {
    let delta = 1e-4;
    let ahead = h.propagate(psi, delta)?.into_inner();
    let behind = h.propagate(psi, -delta)?.into_inner();
    let tangent = (ahead - behind) / Complex64::new(2.0 * delta, 0.0);
    Ok(fubini_study_speed(psi, &tangent)?)
}

fn table1(rng: &mut SplitMix64) -> Result<Vec<ResultRecord>> {
    let e = "table1";
    let (psi, h) = random_state_and_hamiltonian(rng, 4)?;
    let v_h = energy_dispersion(&psi, &h)? / h.hbar();
    let n = 16;
    let f_fd = fisher_worst(n, FisherMode::finite_difference(), FISHER_GRID)?;
    let f0 = fisher_information(&groverian_path(n)?, 0.0, FisherMode::Analytic)?;
    let sphere = FluidSphereModel::with_frequency(1.0, GRAVITY_SURFACE_RATIO)?;
    let xi0 = 1e-3;
    let fit = simulate_radial_oscillation(&sphere, xi0, GRAVITY_T_END, GRAVITY_STEP)?
        .fitted_frequency
        .unwrap_or(f64::NAN);
    let piston = RuchhardtModel::new(1.0, 1.0, 1.0, 1.0, 1.4)?;
    let v_th = ruchhardt_frequency(&piston);
    let v_gr = gr_sho_frequency(&sphere);
    Ok(vec![
        ResultRecord::within(e, &[("N", 4.0)], "quantum", measured_hilbert_speed(&psi, &h)?, v_h, 1e-6 * v_h),
        ResultRecord::within(e, &[("N", n as f64)], "quantum-information", f_fd.sqrt() / 2.0, information_speed(f0)?, 1e-6),
        ResultRecord::within(e, &[("xi0", xi0), ("surface_ratio", GRAVITY_SURFACE_RATIO)], "gravitational", fit, v_gr, 1e-3 * v_gr),
        ResultRecord::within(e, &[("gamma", piston.gamma), ("amplitude", 0.1)], "thermal", jacobi_frequency(&piston, 0.1)?, v_th, 1e-5 * v_th),
    ])
}
