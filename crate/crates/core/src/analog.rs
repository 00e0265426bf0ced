//! Classical systems whose motion is a geodesic that reduces to a harmonic
//! oscillator: radial free fall inside a constant-density fluid sphere, and
//! Newtonian motion recovered from the Jacobi metric `2m(E - V) delta_ab`.
//! Also the Ruchhardt piston frequency.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{check_dimension, Error, Result};
use crate::geodesic::{
    integrate_geodesic, resample_uniform, GeodesicHooks, GeodesicTrajectory, IntegratorSettings,
    MetricField, Signature, Termination,
};
use crate::ode::rk4_integrate;
use crate::stencil;

/// Largest starting amplitude `xi0` accepted by [`simulate_radial_oscillation`].
pub const MAX_RADIAL_AMPLITUDE: f64 = 1e-2;
/// Jacobi integration stops once `E - V < TURNING_FRACTION * E`.
pub const TURNING_FRACTION: f64 = 1e-9;

/// Harmonic closed form `x(t) = cos(wt) x0 + sin(wt)/w v0`.
pub fn newton_sho_solution(x0: f64, v0: f64, omega: f64, t: f64) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidArgument(format!("omega must be positive, got {omega}")));
    }
    let (s, c) = (omega * t).sin_cos();
    Ok(c * x0 + s / omega * v0)
}

/// Angular frequency from zero crossings of the signal centred on its midrange:
/// `pi / mean crossing interval`, crossings located by linear interpolation.
///
/// Returns `None` when fewer than two crossings occur.
pub fn fit_frequency(times: &[f64], signal: &[f64]) -> Result<Option<f64>> {
    check_dimension(times.len(), signal.len())?;
    stencil::require(times.len(), 2)?;
    let (lo, hi) = signal
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let mid = 0.5 * (lo + hi);
    if !(hi - lo > 0.0) {
        return Ok(None);
    }
    let mut crossings = Vec::new();
    for i in 1..signal.len() {
        let (a, b) = (signal[i - 1] - mid, signal[i] - mid);
        if (a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0) {
            let frac = a / (a - b);
            crossings.push(times[i - 1] + frac * (times[i] - times[i - 1]));
        }
    }
    if crossings.len() < 2 {
        return Ok(None);
    }
    let mean = (crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64;
    Ok(Some(PI / mean))
}

/// Constant-density fluid sphere; geometric units `G = c = 1` by default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidSphereModel {
    density: f64,
    radius: f64,
    gravitational_constant: f64,
    light_speed: f64,
}

impl FluidSphereModel {
    /// Sphere of density `rho` and surface radius `a` in geometric units.
    pub fn new(density: f64, radius: f64) -> Result<Self> {
        Self::with_units(density, radius, 1.0, 1.0)
    }

    pub fn with_units(density: f64, radius: f64, g: f64, c: f64) -> Result<Self> {
        for (name, v) in [("density", density), ("radius", radius), ("G", g), ("c", c)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        let model = Self {
            density,
            radius,
            gravitational_constant: g,
            light_speed: c,
        };
        let ratio = radius / model.curvature_radius();
        if ratio >= 1.0 {
            return Err(Error::Domain(format!("surface radius exceeds curvature radius (a/R = {ratio})")));
        }
        if 3.0 * model.surface_angle().cos() <= 1.0 {
            return Err(Error::Domain("g0 vanishes inside the sphere".into()));
        }
        Ok(model)
    }

    /// Geometric-units sphere whose radial frequency `(4 pi G rho / 3)^(1/2)` is `omega`,
    /// with surface at `a = surface_ratio * R`.
    pub fn with_frequency(omega: f64, surface_ratio: f64) -> Result<Self> {
        let density = 3.0 * omega * omega / (4.0 * PI);
        let r = (3.0 / (8.0 * PI * density)).sqrt();
        Self::new(density, surface_ratio * r)
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn gravitational_constant(&self) -> f64 {
        self.gravitational_constant
    }

    pub fn light_speed(&self) -> f64 {
        self.light_speed
    }

    /// `R = c (3 / (8 pi G rho))^(1/2)`.
    pub fn curvature_radius(&self) -> f64 {
        self.light_speed * (3.0 / (8.0 * PI * self.gravitational_constant * self.density)).sqrt()
    }

    /// `xi_a = asin(a / R)`.
    pub fn surface_angle(&self) -> f64 {
        (self.radius / self.curvature_radius()).asin()
    }

    /// `xi = asin(r / R)`.
    pub fn angle(&self, r: f64) -> Result<f64> {
        let ratio = r / self.curvature_radius();
        if !(ratio.abs() < 1.0) {
            return Err(Error::Domain(format!("|r| = {} must be below R = {}", r.abs(), self.curvature_radius())));
        }
        Ok(ratio.asin())
    }

    /// Total mass `(4/3) pi a^3 rho`.
    pub fn mass(&self) -> f64 {
        4.0 / 3.0 * PI * self.radius.powi(3) * self.density
    }

    /// `g0(r) = (c^2/4) (3 cos xi_a - cos xi)^2`.
    pub fn g0(&self, r: f64) -> Result<f64> {
        let (c2, cos) = (self.light_speed.powi(2), self.angle(r)?.cos());
        Ok(0.25 * c2 * (3.0 * self.surface_angle().cos() - cos).powi(2))
    }

    /// `g1(r) = 1 / cos^2 xi`.
    pub fn g1(&self, r: f64) -> Result<f64> {
        Ok(1.0 / self.angle(r)?.cos().powi(2))
    }

    fn g0_derivative(&self, r: f64) -> Result<f64> {
        let big_r = self.curvature_radius();
        let cos = self.angle(r)?.cos();
        let bracket = 3.0 * self.surface_angle().cos() - cos;
        Ok(0.5 * self.light_speed.powi(2) * bracket * r / (big_r * big_r * cos))
    }

    fn g1_derivative(&self, r: f64) -> Result<f64> {
        let big_r = self.curvature_radius();
        let cos = self.angle(r)?.cos();
        Ok(2.0 * r / (big_r * big_r * cos.powi(4)))
    }

    /// `|g0(a) - c^2 (1 - 2GM/(a c^2))|`, the mismatch with the exterior solution at the surface.
    pub fn surface_continuity_defect(&self) -> Result<f64> {
        let c2 = self.light_speed.powi(2);
        let exterior = c2 * (1.0 - 2.0 * self.gravitational_constant * self.mass() / (self.radius * c2));
        Ok((self.g0(self.radius)? - exterior).abs())
    }
}

/// The `(t, r)` metric `diag(g0(r), -g1(r))` of the sphere's interior.
pub fn interior_metric(model: &FluidSphereModel) -> MetricField {
    let m = *model;
    let d = *model;
    MetricField::new(2, Signature::Lorentzian, move |x| {
        Ok(DMatrix::from_diagonal(&nalgebra::dvector![m.g0(x[1])?, -m.g1(x[1])?]))
    })
    .with_derivatives(move |x| {
        Ok(vec![
            DMatrix::zeros(2, 2),
            DMatrix::from_diagonal(&nalgebra::dvector![d.g0_derivative(x[1])?, -d.g1_derivative(x[1])?]),
        ])
    })
}

/// `(4 pi G rho / 3)^(1/2)`.
pub fn gr_sho_frequency(model: &FluidSphereModel) -> f64 {
    (4.0 * PI * model.gravitational_constant * model.density / 3.0).sqrt()
}

/// Exact small-amplitude frequency of the radial motion,
/// `v_GR ((3 cos xi_a - 1) / 2)^(1/2)`. Tends to `v_GR` as `a / R -> 0`.
pub fn linearized_frequency(model: &FluidSphereModel) -> f64 {
    gr_sho_frequency(model) * ((3.0 * model.surface_angle().cos() - 1.0) / 2.0).sqrt()
}

/// Output of [`simulate_radial_oscillation`].
#[derive(Debug, Clone, PartialEq)]
pub struct RadialOscillation {
    /// Uniform coordinate-time grid.
    pub times: Vec<f64>,
    pub radii: Vec<f64>,
    /// `xi(t) = asin(r(t) / R)`.
    pub angles: Vec<f64>,
    /// Frequency fitted to `xi(t)`; `None` for a particle at rest at the centre.
    pub fitted_frequency: Option<f64>,
    /// Affine-parameter integration of the full `(t, r)` geodesic.
    pub geodesic: GeodesicTrajectory,
    /// Frequency fitted to `r` against the coordinate time of [`Self::geodesic`].
    pub cross_check_frequency: Option<f64>,
}

/// Radial geodesic released from rest at `xi0`, followed in coordinate time.
///
/// With `E = g0 dt/dtau` conserved and `E^2 = g0(r0)`, the motion obeys
/// `(dr/dt)^2 = W(r) = g0 (E^2 - g0) / (g1 E^2)`, integrated here as
/// `r_ddot = W'(r) / 2` by RK4 with step `h`. The same geodesic is also
/// integrated in proper time on [`interior_metric`] as a cross-check.
pub fn simulate_radial_oscillation(
    model: &FluidSphereModel,
    xi0: f64,
    t_end: f64,
    h: f64,
) -> Result<RadialOscillation> {
    if !(0.0..=MAX_RADIAL_AMPLITUDE).contains(&xi0) {
        return Err(Error::RegimeViolation(format!(
            "starting amplitude {xi0} outside [0, {MAX_RADIAL_AMPLITUDE}]"
        )));
    }
    let xi_a = model.surface_angle();
    if xi0 >= xi_a {
        return Err(Error::RegimeViolation(format!("starting amplitude {xi0} at or beyond surface {xi_a}")));
    }
    if !(h > 0.0 && t_end > 0.0 && h.is_finite() && t_end.is_finite()) {
        return Err(Error::InvalidArgument("step and end time must be positive".into()));
    }
    let big_r = model.curvature_radius();
    let r0 = big_r * xi0.sin();
    let e2 = model.g0(r0)?;

    let w_prime = |r: f64| -> Result<f64> {
        let (g0, g1) = (model.g0(r)?, model.g1(r)?);
        let (dg0, dg1) = (model.g0_derivative(r)?, model.g1_derivative(r)?);
        let numerator = g0 * (e2 - g0);
        let d_numerator = dg0 * (e2 - g0) - g0 * dg0;
        Ok((d_numerator * g1 - numerator * dg1) / (g1 * g1 * e2))
    };
    let rhs = |_t: f64, y: &[f64]| -> Result<Vec<f64>> { Ok(vec![y[1], 0.5 * w_prime(y[0])?]) };
    let steps = (t_end / h).round().max(1.0) as usize;
    let dt = t_end / steps as f64;
    let states = rk4_integrate(&rhs, 0.0, &[r0, 0.0], dt, steps)?;

    let times: Vec<f64> = (0..=steps).map(|i| i as f64 * dt).collect();
    let radii: Vec<f64> = states.iter().map(|y| y[0]).collect();
    let angles = radii
        .iter()
        .map(|&r| {
            let xi = model.angle(r)?;
            if xi.abs() >= xi_a {
                return Err(Error::RegimeViolation(format!("|xi| = {} reached the surface", xi.abs())));
            }
            Ok(xi)
        })
        .collect::<Result<Vec<f64>>>()?;
    let fitted_frequency = if xi0 == 0.0 { None } else { fit_frequency(&times, &angles)? };

    let metric = interior_metric(model);
    let t_dot = 1.0 / e2.sqrt();
    let mut settings = IntegratorSettings::new(h, t_end * e2.sqrt() * 1.01 + h);
    settings.drift_tolerance = 1e-10;
    let stop = move |x: &[f64], _v: &[f64], _clock: f64| (x[0] >= t_end).then(|| "end time reached".to_string());
    let mut geodesic = integrate_geodesic(
        &metric,
        &[0.0, r0],
        &[t_dot, 0.0],
        &settings,
        GeodesicHooks { clock: None, stop: Some(&stop) },
    )?;
    if matches!(&geodesic.termination, Termination::Stopped { reason, .. } if reason == "end time reached") {
        geodesic.termination = Termination::Completed;
    }
    let cross_check_frequency = if xi0 == 0.0 || geodesic.len() < 2 {
        None
    } else {
        let t: Vec<f64> = geodesic.positions.iter().map(|x| x[0]).collect();
        let r: Vec<f64> = geodesic.positions.iter().map(|x| x[1]).collect();
        fit_frequency(&t, &r)?
    };

    Ok(RadialOscillation {
        times,
        radii,
        angles,
        fitted_frequency,
        geodesic,
        cross_check_frequency,
    })
}

/// Piston on an adiabatically compressed gas column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuchhardtModel {
    pub pressure: f64,
    pub mass: f64,
    pub area: f64,
    pub volume: f64,
    pub gamma: f64,
}

impl RuchhardtModel {
    pub fn new(pressure: f64, mass: f64, area: f64, volume: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [("pressure", pressure), ("mass", mass), ("area", area), ("volume", volume)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!("gamma must exceed 1, got {gamma}")));
        }
        Ok(Self { pressure, mass, area, volume, gamma })
    }

    /// Spring constant `P0 A^2 gamma / V0` of the restoring force.
    pub fn stiffness(&self) -> f64 {
        self.pressure * self.area * self.area * self.gamma / self.volume
    }

    /// `T = 2 pi / v_th`.
    pub fn period(&self) -> f64 {
        2.0 * PI / ruchhardt_frequency(self)
    }

    /// `gamma = v^2 m V0 / (P0 A^2)` with `v = 2 pi / period`.
    pub fn gamma_from_period(&self, period: f64) -> f64 {
        let v = 2.0 * PI / period;
        v * v * self.mass * self.volume / (self.pressure * self.area * self.area)
    }

    /// The piston as a Jacobi system at displacement energy `energy`.
    pub fn jacobi_system(&self, energy: f64) -> Result<JacobiSystem> {
        JacobiSystem::harmonic(self.mass, ruchhardt_frequency(self), energy)
    }
}

/// `v_th = (P0 A^2 gamma / (m V0))^(1/2)`.
pub fn ruchhardt_frequency(model: &RuchhardtModel) -> f64 {
    (model.stiffness() / model.mass).sqrt()
}

type PotentialFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type GradientFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// Mechanical system of mass `m`, energy `E` and potential `V(q)`.
#[derive(Clone)]
pub struct JacobiSystem {
    dimension: usize,
    mass: f64,
    energy: f64,
    potential: std::sync::Arc<PotentialFn>,
    gradient: std::sync::Arc<GradientFn>,
}

impl std::fmt::Debug for JacobiSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("JacobiSystem")
            .field("dimension", &self.dimension)
            .field("mass", &self.mass)
            .field("energy", &self.energy)
            .finish()
    }
}

impl JacobiSystem {
    pub fn new(
        dimension: usize,
        mass: f64,
        energy: f64,
        potential: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::DimensionTooSmall(dimension, 1));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidArgument(format!("mass must be positive, got {mass}")));
        }
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(Error::InvalidArgument(format!("energy must be positive, got {energy}")));
        }
        Ok(Self {
            dimension,
            mass,
            energy,
            potential: std::sync::Arc::new(potential),
            gradient: std::sync::Arc::new(gradient),
        })
    }

    /// One-dimensional `V = m omega^2 q^2 / 2`.
    pub fn harmonic(mass: f64, omega: f64, energy: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidArgument(format!("omega must be positive, got {omega}")));
        }
        let k = mass * omega * omega;
        Self::new(1, mass, energy, move |q| 0.5 * k * q[0] * q[0], move |q| vec![k * q[0]])
    }

    /// Free particle, `V = 0`.
    pub fn free(dimension: usize, mass: f64, energy: f64) -> Result<Self> {
        Self::new(dimension, mass, energy, |_| 0.0, move |_| vec![0.0; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn potential(&self, q: &[f64]) -> f64 {
        (self.potential)(q)
    }

    pub fn gradient(&self, q: &[f64]) -> Vec<f64> {
        (self.gradient)(q)
    }

    /// Kinetic energy `E - V(q)`.
    pub fn kinetic(&self, q: &[f64]) -> f64 {
        self.energy - self.potential(q)
    }
}

/// Jacobi metric `2 m (E - V(q)) delta_ab`; arc length along it is `2T dt`.
pub fn jacobi_metric(system: &JacobiSystem) -> MetricField {
    let (s1, s2) = (system.clone(), system.clone());
    let d = system.dimension;
    MetricField::new(d, Signature::Riemannian, move |q| {
        Ok(DMatrix::identity(d, d) * (2.0 * s1.mass * s1.kinetic(q)))
    })
    .with_derivatives(move |q| {
        Ok(s2
            .gradient(q)
            .into_iter()
            .map(|dv| DMatrix::identity(d, d) * (-2.0 * s2.mass * dv))
            .collect())
    })
}

/// A Jacobi geodesic re-expressed in physical time.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiTrajectory {
    /// Physical time at each arc-length sample.
    pub times: Vec<f64>,
    pub positions: Vec<Vec<f64>>,
    /// `dq/dt`.
    pub velocities: Vec<Vec<f64>>,
    /// The arc-length geodesic; its clock is the physical time.
    pub geodesic: GeodesicTrajectory,
    /// `Completed` when `t_end` was reached; otherwise why the geodesic stopped.
    pub termination: Termination,
}

impl JacobiTrajectory {
    /// Resamples onto a uniform time grid with the same number of samples.
    pub fn uniform(&self) -> Result<(Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        stencil::require(self.times.len(), 2)?;
        Ok(resample_uniform(&self.times, &self.positions, &self.velocities))
    }
}

/// Integrates the Jacobi geodesic from `q0` with unit speed in the direction
/// of `direction`, using arc-length step `h`, until physical time `t_end`
/// or a turning point. The physical time is carried as an RK4 clock with
/// rate `dt/ds = 1 / (2 (E - V))`.
pub fn jacobi_geodesic_to_newton(
    system: &JacobiSystem,
    q0: &[f64],
    direction: &[f64],
    t_end: f64,
    h: f64,
) -> Result<JacobiTrajectory> {
    check_dimension(system.dimension, q0.len())?;
    check_dimension(system.dimension, direction.len())?;
    let kinetic = system.kinetic(q0);
    if !(kinetic > TURNING_FRACTION * system.energy) {
        return Err(Error::Domain(format!("E - V(q0) = {kinetic} leaves no kinetic energy")));
    }
    let norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        return Err(Error::InvalidArgument("direction must be nonzero".into()));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidArgument(format!("t_end must be positive, got {t_end}")));
    }
    let speed = (2.0 * kinetic / system.mass).sqrt();
    let v0: Vec<f64> = direction.iter().map(|x| x / norm * speed / (2.0 * kinetic)).collect();

    let metric = jacobi_metric(system);
    let energy = system.energy;
    let clock_system = system.clone();
    let clock = move |q: &[f64], _v: &[f64]| 1.0 / (2.0 * clock_system.kinetic(q));
    let stop_system = system.clone();
    let stop = move |q: &[f64], _v: &[f64], t: f64| {
        if stop_system.kinetic(q) < TURNING_FRACTION * energy {
            Some("turning point".to_string())
        } else if t >= t_end {
            Some("end time reached".to_string())
        } else {
            None
        }
    };
    // Arc length covered by t_end at most 2 E t_end.
    let settings = IntegratorSettings::new(h, 2.0 * energy * t_end + h);
    let geodesic = integrate_geodesic(
        &metric,
        q0,
        &v0,
        &settings,
        GeodesicHooks { clock: Some(&clock), stop: Some(&stop) },
    )?;
    let termination = match &geodesic.termination {
        Termination::Stopped { reason, .. } if reason == "end time reached" => Termination::Completed,
        other => other.clone(),
    };
    let velocities = geodesic
        .positions
        .iter()
        .zip(&geodesic.velocities)
        .map(|(q, v)| {
            let rate = 2.0 * system.kinetic(q);
            v.iter().map(|x| x * rate).collect()
        })
        .collect();
    Ok(JacobiTrajectory {
        times: geodesic.clock.clone(),
        positions: geodesic.positions.clone(),
        velocities,
        geodesic,
        termination,
    })
}

/// `m q_ddot + grad V(q)` at each sample of a time series, with `q_ddot`
/// from the Lagrange polynomial through neighbouring samples (three inside,
/// four at either end). The grid may be non-uniform; on a smooth image of a
/// uniform grid, such as the times of a Jacobi geodesic, the residual is O(h²).
pub fn newton_residual(system: &JacobiSystem, times: &[f64], positions: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    stencil::require(positions.len(), 4)?;
    check_dimension(times.len(), positions.len())?;
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("times must be strictly increasing".into()));
    }
    let n = times.len();
    (0..n)
        .map(|i| {
            let nodes: Vec<usize> = match i {
                0 => (0..4).collect(),
                _ if i == n - 1 => (n - 4..n).collect(),
                _ => (i - 1..=i + 1).collect(),
            };
            let q = &positions[i];
            check_dimension(system.dimension, q.len())?;
            let grad = system.gradient(q);
            Ok((0..system.dimension)
                .map(|a| {
                    let acc = lagrange_second_derivative(
                        nodes.iter().map(|&j| (times[j], positions[j][a])),
                        times[i],
                    );
                    system.mass * acc + grad[a]
                })
                .collect())
        })
        .collect()
}

fn lagrange_second_derivative(points: impl Iterator<Item = (f64, f64)>, t: f64) -> f64 {
    let pts: Vec<(f64, f64)> = points.collect();
    let n = pts.len();
    let mut total = 0.0;
    for j in 0..n {
        let denom: f64 = (0..n).filter(|&m| m != j).map(|m| pts[j].0 - pts[m].0).product();
        let mut numer = 0.0;
        for k in (0..n).filter(|&k| k != j) {
            for l in (0..n).filter(|&l| l != j && l != k) {
                numer += (0..n)
                    .filter(|&m| m != j && m != k && m != l)
                    .map(|m| t - pts[m].0)
                    .product::<f64>();
            }
        }
        total += pts[j].1 * numer / denom;
    }
    total
}

/// Period of a one-dimensional oscillation, assembled by reflection from two
/// runs that start at `q_eq` and head towards either turning point.
///
/// Each run stops short of its turning point, where the Jacobi metric
/// degenerates. The remaining time is the exact travel time to the turning
/// point in the quadratic expansion of `V` about the last sample, which is
/// exact for a harmonic potential. `t_max` bounds each run.
pub fn jacobi_period(system: &JacobiSystem, q_eq: f64, h: f64, t_max: f64) -> Result<f64> {
    if system.dimension != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: system.dimension });
    }
    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        let run = jacobi_geodesic_to_newton(system, &[q_eq], &[sign], t_max, h)?;
        if matches!(run.termination, Termination::Completed) {
            return Err(Error::Domain("no turning point reached".into()));
        }
        let last = run.times.len() - 1;
        let q = run.positions[last][0];
        total += run.times[last] + time_to_turning(system, q, sign)?;
    }
    Ok(2.0 * total)
}

fn time_to_turning(system: &JacobiSystem, q: f64, sign: f64) -> Result<f64> {
    let m = system.mass;
    let kinetic = system.kinetic(&[q]).max(0.0);
    // Force opposing the motion, and the curvature of V, along the direction of travel.
    let b = sign * system.gradient(&[q])[0];
    let delta = 1e-6 * q.abs().max(1.0);
    let k = (system.gradient(&[q + delta])[0] - system.gradient(&[q - delta])[0]) / (2.0 * delta);
    if !(b > 0.0) {
        return Err(Error::Domain("motion is not decelerating towards a turning point".into()));
    }
    if k > 0.0 {
        let amplitude = (2.0 * kinetic / k + (b / k).powi(2)).sqrt();
        Ok((m / k).sqrt() * (0.5 * PI - (b / (k * amplitude)).min(1.0).asin()))
    } else {
        Ok((2.0 * m * kinetic).sqrt() / b)
    }
}
