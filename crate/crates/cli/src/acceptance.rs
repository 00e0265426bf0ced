//! The acceptance suite run by `selftest`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use geoharmonic::*;

use crate::config::Format;
use crate::emit::render;
use crate::experiments::*;
use crate::record::{all_pass, ResultRecord};
use crate::rng::SplitMix64;
use crate::Result;

pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub budget: Duration,
    pub records: Vec<ResultRecord>,
    pub elapsed: Duration,
}

impl Criterion {
    pub fn within_budget(&self) -> bool {
        self.elapsed < self.budget
    }

    pub fn passed(&self) -> bool {
        all_pass(&self.records) && self.within_budget()
    }

    /// One line: `criterion N: PASS|FAIL title (k/n checks, t s of budget s)`.
    pub fn summary(&self) -> String {
        let ok = self.records.iter().filter(|r| r.pass).count();
        let mut line = format!(
            "criterion {}: {} {} ({}/{} checks, {:.3} s of {} s)",
            self.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.title,
            ok,
            self.records.len(),
            self.elapsed.as_secs_f64(),
            self.budget.as_secs_f64(),
        );
        if let Some(worst) = self.records.iter().find(|r| !r.pass) {
            line.push_str(&format!(
                "; first failure {} {} measured {:e} reference {:e} tolerance {:e}",
                worst.experiment, worst.quantity, worst.measured, worst.reference, worst.tolerance
            ));
        }
        if !self.within_budget() {
            line.push_str("; over time budget");
        }
        line
    }
}

type CheckFn = fn(u64) -> Result<Vec<ResultRecord>>;

const CRITERIA: [(u32, &str, u64, CheckFn); 9] = [
    (1, "Fisher information is 4 along the Groverian path", 1, fisher_constancy),
    (2, "Fubini-Study speed equals energy dispersion", 1, speed_identity),
    (3, "Grover optimality", 5, grover_optimality),
    (4, "closed-form geodesics are second order", 1, geodesic_closed_forms),
    (5, "gravitational oscillation frequency", 10, gravitational_frequency),
    (6, "Jacobi geodesics reproduce Newtonian motion", 5, thermal_jacobi),
    (7, "geometric phase machinery", 2, phase_machinery),
    (8, "AQC schedule", 1, schedule),
    (9, "non-affine reparametrization", 1, reparametrization),
];

/// Runs criteria 1 through 9.
pub fn run_criteria(seed: u64) -> Result<Vec<Criterion>> {
    CRITERIA
        .iter()
        .map(|&(id, title, budget, check)| {
            let started = Instant::now();
            let records = check(seed)?;
            Ok(Criterion { id, title, budget: Duration::from_secs(budget), records, elapsed: started.elapsed() })
        })
        .collect()
}

/// Criteria 1 through 9, then criterion 10: a second pass whose CSV must match
/// the first byte for byte.
pub fn selftest(seed: u64) -> Result<Vec<Criterion>> {
    let mut criteria = run_criteria(seed)?;
    let started = Instant::now();
    let first = render(&flatten(&criteria), Format::Csv)?;
    let second = render(&flatten(&run_criteria(seed)?), Format::Csv)?;
    let identical = if first == second { 1.0 } else { 0.0 };
    criteria.push(Criterion {
        id: 10,
        title: "reruns are byte-identical",
        budget: Duration::from_secs(60),
        records: vec![ResultRecord::within("criterion-10", &[("seed", seed as f64)], "csv_identical", identical, 1.0, 0.0)],
        elapsed: started.elapsed(),
    });
    Ok(criteria)
}

pub fn flatten(criteria: &[Criterion]) -> Vec<ResultRecord> {
    criteria.iter().flat_map(|c| c.records.iter().cloned()).collect()
}

fn stream(seed: u64, criterion: u64) -> SplitMix64 {
    SplitMix64::new(seed ^ criterion.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn fisher_constancy(_seed: u64) -> Result<Vec<ResultRecord>> {
    let mut out = Vec::new();
    for n in [2usize, 4, 16, 256, 4096] {
        let echo = [("N", n as f64)];
        out.push(ResultRecord::within("criterion-1", &echo, "fisher", fisher_worst(n, FisherMode::Analytic, FISHER_GRID)?, 4.0, 1e-10));
        out.push(ResultRecord::within(
            "criterion-1",
            &echo,
            "fisher_fd",
            fisher_worst(n, FisherMode::FiniteDifference { step: 1e-5 }, FISHER_GRID)?,
            4.0,
            1e-6,
        ));
    }
    Ok(out)
}

fn speed_identity(seed: u64) -> Result<Vec<ResultRecord>> {
    let mut rng = stream(seed, 2);
    let mut out = Vec::new();
    for trial in 0..100 {
        let n = rng.range_inclusive(2, 8) as usize;
        let (psi, h) = random_state_and_hamiltonian(&mut rng, n)?;
        let (speed, dispersion) = speed_equals_dispersion_check(&psi, &h)?;
        out.push(ResultRecord::within(
            "criterion-2",
            &[("N", n as f64), ("trial", trial as f64)],
            "speed_squared",
            speed * speed,
            dispersion * dispersion,
            1e-12,
        ));
    }
    out.push(ResultRecord::within("criterion-2", &[("N", 2.0)], "speed_sq_minus_quarter_fisher", groverian_speed_defect()?, 0.0, 1e-10));
    Ok(out)
}

fn grover_optimality(_seed: u64) -> Result<Vec<ResultRecord>> {
    let e = "criterion-3";
    let four = GroverProblem::new(4, 1)?;
    let opt = optimal_iterations(&four);
    let state = grover_state_matrix(&four, opt.k_exact)?;
    let mut out = vec![
        ResultRecord::within(e, &[("N", 4.0)], "k_exact", opt.k_exact as f64, 1.0, 0.0),
        ResultRecord::at_least(e, &[("N", 4.0)], "success_prob", state.amplitudes()[0].norm_sqr(), 1.0 - 1e-12),
        ResultRecord::within(e, &[("N", 4.0)], "matrix_free_deviation", matrix_free_deviation(&four, opt.k_exact)?, 0.0, 1e-10),
    ];
    for p in 6..=12 {
        let n = 1usize << p;
        let problem = GroverProblem::new(n, n / 3)?;
        let opt = optimal_iterations(&problem);
        let echo = [("N", n as f64)];
        let ratio = opt.k_exact as f64 / (PI / 4.0 * (n as f64).sqrt());
        out.push(ResultRecord::within(e, &echo, "k_exact_over_asymptotic", ratio, 1.0, 2.0 / (n as f64).sqrt()));
        out.push(ResultRecord::within(e, &echo, "matrix_free_deviation", matrix_free_deviation(&problem, opt.k_exact)?, 0.0, 1e-10));
    }
    Ok(out)
}

fn geodesic_closed_forms(_seed: u64) -> Result<Vec<ResultRecord>> {
    let steps = [1e-2, 5e-3, 2.5e-3];
    let mut out = Vec::new();
    for (name, residual) in [
        ("hilbert", hilbert_geodesic_residual as fn(f64) -> Result<f64>),
        ("information", information_geodesic_residual),
    ] {
        let r = steps.iter().map(|&h| residual(h)).collect::<Result<Vec<f64>>>()?;
        for k in 0..2 {
            out.push(ResultRecord::at_least("criterion-4", &[("h", steps[k + 1])], &format!("{name}_residual_ratio"), r[k] / r[k + 1], 3.5));
        }
        out.push(ResultRecord::at_most("criterion-4", &[("h", steps[2])], &format!("{name}_residual"), r[2], 1e-5));
    }
    Ok(out)
}

fn gravitational_frequency(_seed: u64) -> Result<Vec<ResultRecord>> {
    let e = "criterion-5";
    let model = FluidSphereModel::with_frequency(1.0, GRAVITY_SURFACE_RATIO)?;
    let mut out = Vec::new();
    let mut previous: Option<(f64, f64)> = None;
    for xi0 in [1e-2, 3e-3, 1e-3] {
        let run = simulate_radial_oscillation(&model, xi0, GRAVITY_T_END, GRAVITY_STEP)?;
        let fit = run.fitted_frequency.unwrap_or(f64::NAN);
        let echo = [("xi0", xi0), ("surface_ratio", GRAVITY_SURFACE_RATIO)];
        out.push(ResultRecord::within(e, &echo, "frequency", fit, 1.0, 1e-3));
        out.push(ResultRecord::within(e, &echo, "cross_check_frequency", run.cross_check_frequency.unwrap_or(f64::NAN), fit, 1e-8));
        let err = (fit - 1.0).abs();
        if let Some((prev_xi0, prev_err)) = previous {
            out.push(ResultRecord::at_most(e, &[("xi0_from", prev_xi0), ("xi0_to", xi0)], "error_change", err - prev_err, 0.0));
        }
        previous = Some((xi0, err));
    }
    out.push(surface_record(e, &model)?);
    Ok(out)
}

fn thermal_jacobi(seed: u64) -> Result<Vec<ResultRecord>> {
    let e = "criterion-6";
    let mut rng = stream(seed, 6);
    let mut out = Vec::new();
    for _ in 0..20 {
        let (mass, omega, amplitude) = random_sho(&mut rng);
        out.push(ResultRecord::within(
            e,
            &[("mass", mass), ("omega", omega), ("amplitude", amplitude)],
            "max_deviation",
            jacobi_newton_deviation(mass, omega, amplitude)?,
            0.0,
            1e-6,
        ));
    }
    for _ in 0..20 {
        let model = RuchhardtModel::new(
            rng.uniform(0.5, 2.0),
            rng.uniform(0.5, 2.0),
            rng.uniform(0.5, 2.0),
            rng.uniform(0.5, 2.0),
            rng.uniform(1.0, 1.7),
        )?;
        out.push(ResultRecord::within(
            e,
            &[("gamma", model.gamma)],
            "gamma_round_trip",
            model.gamma_from_period(model.period()),
            model.gamma,
            1e-14 * model.gamma,
        ));
    }
    Ok(out)
}

fn phase_machinery(seed: u64) -> Result<Vec<ResultRecord>> {
    let mut rng = stream(seed, 7);
    let (base, gauged) = gauge_loop_phases(&mut rng, 3, 50, 400, 2.0)?;
    let mut out: Vec<ResultRecord> = gauged
        .iter()
        .enumerate()
        .map(|(t, (value, bound))| ResultRecord::within("criterion-7", &[("trial", t as f64)], "gauged_ray_phase", *value, base, *bound))
        .collect();
    out.push(ResultRecord::within("criterion-7", &[], "stationary_geometric_phase", stationary_geometric_phase()?, 0.0, 1e-10));
    Ok(out)
}

fn schedule(_seed: u64) -> Result<Vec<ResultRecord>> {
    let mut out = Vec::new();
    for n in [4, 64, 1024] {
        out.extend(schedule_records("criterion-8", n)?);
    }
    Ok(out)
}

struct Warp {
    name: &'static str,
    sigma: fn(f64) -> f64,
    d1: fn(f64) -> f64,
    d2: fn(f64) -> f64,
}

const WARPS: [Warp; 3] = [
    Warp { name: "square", sigma: |s| s * s, d1: |s| 2.0 * s, d2: |_| 2.0 },
    Warp { name: "exp", sigma: |s| (0.5 * s).exp(), d1: |s| 0.5 * (0.5 * s).exp(), d2: |s| 0.25 * (0.5 * s).exp() },
    Warp { name: "sinh", sigma: |s| s.sinh(), d1: |s| s.cosh(), d2: |s| s.sinh() },
];

const WARP_STEP: f64 = 2.5e-4;

fn max_norm(r: &[Vec<f64>]) -> f64 {
    r.iter().map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt()).fold(0.0, f64::max)
}

/// Straight lines traversed with parameter `sigma(s)`: in Cartesian
/// coordinates and, through the polar chart, the line `x = 1`.
fn warped_samples(w: &Warp, polar: bool) -> Result<(GeodesicTrajectory, Vec<f64>)> {
    let n = (1.0 / WARP_STEP).round() as usize;
    let s: Vec<f64> = (0..=n).map(|i| 1.0 + i as f64 * WARP_STEP).collect();
    let mut pos = Vec::with_capacity(s.len());
    let mut vel = Vec::with_capacity(s.len());
    for &si in &s {
        let (t, dt) = ((w.sigma)(si) * 0.3 - 0.5, (w.d1)(si) * 0.3);
        if polar {
            let r = (1.0 + t * t).sqrt();
            pos.push(vec![r, t.atan()]);
            vel.push(vec![t / r * dt, dt / (1.0 + t * t)]);
        } else {
            pos.push(vec![1.0 + 0.6 * t, -2.0 + 0.8 * t]);
            vel.push(vec![0.6 * dt, 0.8 * dt]);
        }
    }
    let g = s.iter().map(|&si| (w.d2)(si) / (w.d1)(si)).collect();
    Ok((GeodesicTrajectory::from_samples(s, pos, vel)?, g))
}

fn reparametrization(_seed: u64) -> Result<Vec<ResultRecord>> {
    let mut out = Vec::new();
    for (chart, metric) in [("cartesian", MetricField::euclidean(2)), ("polar", MetricField::polar_plane())] {
        for (k, w) in WARPS.iter().enumerate() {
            let (traj, g) = warped_samples(w, chart == "polar")?;
            let echo = [("warp", k as f64), ("h", WARP_STEP)];
            let residual = max_norm(&nonaffine_residual(&traj, &metric, &g)?);
            let control = max_norm(&nonaffine_residual(&traj, &metric, &vec![0.0; g.len()])?);
            out.push(ResultRecord::at_most("criterion-9", &echo, &format!("{chart}_{}_residual", w.name), residual, 1e-6));
            out.push(ResultRecord::at_least("criterion-9", &echo, &format!("{chart}_{}_affine_control", w.name), control, 1e-2));
        }
    }
    Ok(out)
}
