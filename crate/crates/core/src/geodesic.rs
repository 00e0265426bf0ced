//! Geodesics of a coordinate metric: Christoffel symbols, fixed-step RK4
//! integration of the affine geodesic equation, the residual of the
//! non-affine form, and reparametrization back to an affine parameter.
//!
//! A geodesic is integrated as the first-order system `(x, x_dot)` of
//! dimension `2d`. Each step is monitored through the invariant
//! `g_ab x_dot^a x_dot^b`: a step whose drift exceeds the tolerance is
//! replaced by two half steps, recursively, and integration stops with a
//! diagnostic when halving no longer helps.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{check_dimension, Error, Result};
use crate::ode::rk4_step;
use crate::stencil::{self, first_derivative, second_derivative};

/// `|det g|` below this is treated as singular.
pub const SINGULAR_DETERMINANT: f64 = 1e-300;
/// Allowed `max |g - g^T|`.
pub const SYMMETRY_TOLERANCE: f64 = 1e-13;
/// Default per-step drift of `g_ab x_dot^a x_dot^b` that triggers step halving.
pub const DEFAULT_DRIFT_TOLERANCE: f64 = 1e-6;
/// Default number of successive halvings before a step is rejected.
pub const DEFAULT_MAX_HALVINGS: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signature {
    Riemannian,
    Lorentzian,
}

/// How metric derivatives are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeMode {
    /// Analytic derivatives when the metric provides them, central differences otherwise.
    Auto,
    Analytic,
    /// Central differences with step `relative_step * max(1, |x_k|)`.
    FiniteDifference { relative_step: f64 },
}

impl DerivativeMode {
    pub fn finite_difference() -> Self {
        DerivativeMode::FiniteDifference { relative_step: 1e-6 }
    }
}

type MetricFn = dyn Fn(&[f64]) -> Result<DMatrix<f64>> + Send + Sync;
type MetricDerivativeFn = dyn Fn(&[f64]) -> Result<Vec<DMatrix<f64>>> + Send + Sync;

/// A symmetric metric tensor `g_ab(x)` on a `d`-dimensional coordinate patch.
#[derive(Clone)]
pub struct MetricField {
    dimension: usize,
    signature: Signature,
    metric: Arc<MetricFn>,
    derivatives: Option<Arc<MetricDerivativeFn>>,
}

impl std::fmt::Debug for MetricField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MetricField")
            .field("dimension", &self.dimension)
            .field("signature", &self.signature)
            .field("analytic_derivatives", &self.derivatives.is_some())
            .finish()
    }
}

impl MetricField {
    pub fn new(
        dimension: usize,
        signature: Signature,
        metric: impl Fn(&[f64]) -> Result<DMatrix<f64>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            dimension,
            signature,
            metric: Arc::new(metric),
            derivatives: None,
        }
    }

    /// Attaches analytic partial derivatives; element `k` of the returned
    /// vector is `d g / d x^k`.
    pub fn with_derivatives(
        mut self,
        derivatives: impl Fn(&[f64]) -> Result<Vec<DMatrix<f64>>> + Send + Sync + 'static,
    ) -> Self {
        self.derivatives = Some(Arc::new(derivatives));
        self
    }

    /// Flat metric `delta_ab`.
    pub fn euclidean(dimension: usize) -> Self {
        Self::new(dimension, Signature::Riemannian, move |_| {
            Ok(DMatrix::identity(dimension, dimension))
        })
        .with_derivatives(move |_| Ok(vec![DMatrix::zeros(dimension, dimension); dimension]))
    }

    /// Round metric `diag(1, sin^2 theta)` on the unit 2-sphere, coordinates `(theta, phi)`.
    pub fn unit_sphere() -> Self {
        Self::new(2, Signature::Riemannian, |x| {
            let s = x[0].sin();
            Ok(DMatrix::from_diagonal(&nalgebra::dvector![1.0, s * s]))
        })
        .with_derivatives(|x| {
            let (s, c) = x[0].sin_cos();
            Ok(vec![
                DMatrix::from_diagonal(&nalgebra::dvector![0.0, 2.0 * s * c]),
                DMatrix::zeros(2, 2),
            ])
        })
    }

    /// Flat plane in polar coordinates `(r, theta)`: `diag(1, r^2)`.
    pub fn polar_plane() -> Self {
        Self::new(2, Signature::Riemannian, |x| {
            Ok(DMatrix::from_diagonal(&nalgebra::dvector![1.0, x[0] * x[0]]))
        })
        .with_derivatives(|x| {
            Ok(vec![
                DMatrix::from_diagonal(&nalgebra::dvector![0.0, 2.0 * x[0]]),
                DMatrix::zeros(2, 2),
            ])
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.derivatives.is_some()
    }

    /// `g_ab(x)`, checked for shape, symmetry and invertibility.
    pub fn metric_at(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        check_dimension(self.dimension, x.len())?;
        let g = (self.metric)(x)?;
        check_dimension(self.dimension, g.nrows())?;
        check_dimension(self.dimension, g.ncols())?;
        let defect = (&g - g.transpose()).amax();
        if defect > SYMMETRY_TOLERANCE {
            return Err(Error::AsymmetricMetric { x: x.to_vec(), defect });
        }
        let det = g.determinant();
        if !(det.abs() >= SINGULAR_DETERMINANT) {
            return Err(Error::SingularMetric { x: x.to_vec(), det });
        }
        Ok(g)
    }

    /// `g^ab(x)`.
    pub fn inverse_at(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let g = self.metric_at(x)?;
        let det = g.determinant();
        g.try_inverse()
            .ok_or_else(|| Error::SingularMetric { x: x.to_vec(), det })
    }

    /// `g_ab v^a v^b`.
    pub fn squared_norm(&self, x: &[f64], v: &[f64]) -> Result<f64> {
        check_dimension(self.dimension, v.len())?;
        let g = self.metric_at(x)?;
        Ok(quadratic_form(&g, v))
    }

    /// Partial derivatives `d g / d x^k`, `k = 0..d`.
    pub fn derivatives_at(&self, x: &[f64], mode: DerivativeMode) -> Result<Vec<DMatrix<f64>>> {
        check_dimension(self.dimension, x.len())?;
        match (mode, &self.derivatives) {
            (DerivativeMode::Auto | DerivativeMode::Analytic, Some(dg)) => {
                let out = dg(x)?;
                check_dimension(self.dimension, out.len())?;
                Ok(out)
            }
            (DerivativeMode::Analytic, None) => Err(Error::MissingDerivative),
            (DerivativeMode::Auto, None) => {
                self.finite_difference_derivatives(x, 1e-6)
            }
            (DerivativeMode::FiniteDifference { relative_step }, _) => {
                self.finite_difference_derivatives(x, relative_step)
            }
        }
    }

    fn finite_difference_derivatives(&self, x: &[f64], relative_step: f64) -> Result<Vec<DMatrix<f64>>> {
        (0..self.dimension)
            .map(|k| {
                let h = relative_step * x[k].abs().max(1.0);
                let mut ahead = x.to_vec();
                let mut behind = x.to_vec();
                ahead[k] += h;
                behind[k] -= h;
                let ga = (self.metric)(&ahead)?;
                let gb = (self.metric)(&behind)?;
                Ok((ga - gb) / (2.0 * h))
            })
            .collect()
    }
}

fn quadratic_form(g: &DMatrix<f64>, v: &[f64]) -> f64 {
    let d = v.len();
    let mut sum = 0.0;
    for a in 0..d {
        for b in 0..d {
            sum += g[(a, b)] * v[a] * v[b];
        }
    }
    sum
}

/// Christoffel symbols of the second kind `Gamma^a_bc` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffel {
    dimension: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// `Gamma^a_bc`.
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        let d = self.dimension;
        self.data[(a * d + b) * d + c]
    }

    /// `-Gamma^a_bc v^b v^c`, the geodesic acceleration.
    pub fn acceleration(&self, v: &[f64]) -> Vec<f64> {
        let d = self.dimension;
        (0..d)
            .map(|a| {
                let mut sum = 0.0;
                for b in 0..d {
                    for c in 0..d {
                        sum += self.get(a, b, c) * v[b] * v[c];
                    }
                }
                -sum
            })
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// `Gamma^a_bc = (1/2) g^am (d_b g_cm + d_c g_mb - d_m g_bc)`, using analytic
/// metric derivatives when available.
pub fn christoffel(metric: &MetricField, x: &[f64]) -> Result<Christoffel> {
    christoffel_with(metric, x, DerivativeMode::Auto)
}

pub fn christoffel_with(metric: &MetricField, x: &[f64], mode: DerivativeMode) -> Result<Christoffel> {
    let d = metric.dimension();
    let inverse = metric.inverse_at(x)?;
    let dg = metric.derivatives_at(x, mode)?;
    let mut data = vec![0.0; d * d * d];
    for a in 0..d {
        for b in 0..d {
            for c in b..d {
                let mut sum = 0.0;
                for m in 0..d {
                    sum += inverse[(a, m)] * (dg[b][(c, m)] + dg[c][(m, b)] - dg[m][(b, c)]);
                }
                let value = 0.5 * sum;
                data[(a * d + b) * d + c] = value;
                data[(a * d + c) * d + b] = value;
            }
        }
    }
    Ok(Christoffel { dimension: d, data })
}

/// Whether a trajectory's parameter is affine.
#[derive(Debug, Clone, PartialEq)]
pub enum Parametrization {
    Affine,
    /// Non-affine, with the samples of `g(s)` in `x_ddot + Gamma x_dot x_dot = g(s) x_dot`.
    NonAffine { g: Vec<f64> },
}

/// Why integration ended.
#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    Completed,
    /// The metric or its derivatives failed at parameter `at`; the trajectory is truncated.
    Singular { at: f64, error: Error },
    /// The invariant drift stayed above tolerance after the maximum number of halvings.
    DriftRejected { at: f64, drift: f64 },
    /// A caller-supplied stop condition fired.
    Stopped { at: f64, reason: String },
}

/// A sampled geodesic `(s_i, x_i, x_dot_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicTrajectory {
    pub parameters: Vec<f64>,
    pub positions: Vec<Vec<f64>>,
    pub velocities: Vec<Vec<f64>>,
    /// Running integral of the caller's clock rate, zero without one.
    pub clock: Vec<f64>,
    pub parametrization: Parametrization,
    pub termination: Termination,
    /// Number of step halvings performed by the drift monitor.
    pub halvings: usize,
}

impl GeodesicTrajectory {
    /// Builds an affine trajectory from samples; the grid must be strictly increasing.
    pub fn from_samples(
        parameters: Vec<f64>,
        positions: Vec<Vec<f64>>,
        velocities: Vec<Vec<f64>>,
    ) -> Result<Self> {
        check_dimension(parameters.len(), positions.len())?;
        check_dimension(parameters.len(), velocities.len())?;
        if parameters.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("parameter grid must be strictly increasing".into()));
        }
        let n = parameters.len();
        Ok(Self {
            parameters,
            positions,
            velocities,
            clock: vec![0.0; n],
            parametrization: Parametrization::Affine,
            termination: Termination::Completed,
            halvings: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.parameters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parameters.is_empty()
    }

    /// Spacing of a uniform grid, or an error if the grid is not uniform.
    pub fn uniform_step(&self) -> Result<f64> {
        stencil::require(self.len(), 2)?;
        let h = self.parameters[1] - self.parameters[0];
        let span = (self.parameters[self.len() - 1] - self.parameters[0]).abs();
        let tol = 1e-9 * span.max(1.0);
        let uniform = self
            .parameters
            .iter()
            .enumerate()
            .all(|(i, s)| (s - (self.parameters[0] + i as f64 * h)).abs() <= tol);
        if uniform {
            Ok(h)
        } else {
            Err(Error::InvalidArgument("parameter grid is not uniform".into()))
        }
    }

    /// `max_i |g(x_i)(x_dot_i, x_dot_i) - g(x_0)(x_dot_0, x_dot_0)|`.
    pub fn invariant_drift(&self, metric: &MetricField) -> Result<f64> {
        let first = metric.squared_norm(&self.positions[0], &self.velocities[0])?;
        let mut max = 0.0f64;
        for (x, v) in self.positions.iter().zip(&self.velocities) {
            max = max.max((metric.squared_norm(x, v)? - first).abs());
        }
        Ok(max)
    }
}

/// Fixed-step integration settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorSettings {
    pub step: f64,
    pub end: f64,
    pub drift_tolerance: f64,
    pub max_halvings: u32,
    pub derivative_mode: DerivativeMode,
}

impl IntegratorSettings {
    pub fn new(step: f64, end: f64) -> Self {
        Self {
            step,
            end,
            drift_tolerance: DEFAULT_DRIFT_TOLERANCE,
            max_halvings: DEFAULT_MAX_HALVINGS,
            derivative_mode: DerivativeMode::Auto,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidArgument(format!("step must be positive, got {}", self.step)));
        }
        if !(self.end > 0.0 && self.end.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "end parameter must be positive, got {}",
                self.end
            )));
        }
        Ok(())
    }
}

type ClockFn<'a> = &'a (dyn Fn(&[f64], &[f64]) -> f64 + Sync);
type StopFn<'a> = &'a (dyn Fn(&[f64], &[f64], f64) -> Option<String> + Sync);

/// Optional extras carried along an integration.
#[derive(Default, Clone, Copy)]
pub struct GeodesicHooks<'a> {
    /// Rate `d(clock)/ds` as a function of `(x, x_dot)`, integrated with the same RK4 stages.
    pub clock: Option<ClockFn<'a>>,
    /// Checked with `(x, x_dot, clock)` after every accepted step; `Some(reason)`
    /// ends the integration.
    pub stop: Option<StopFn<'a>>,
}

/// Integrates `x_ddot^a = -Gamma^a_bc x_dot^b x_dot^c` from `(x0, v0)` up to
/// parameter `s_end` with fixed RK4 step `h`.
pub fn integrate_affine_geodesic(
    metric: &MetricField,
    x0: &[f64],
    v0: &[f64],
    s_end: f64,
    h: f64,
) -> Result<GeodesicTrajectory> {
    integrate_geodesic(metric, x0, v0, &IntegratorSettings::new(h, s_end), GeodesicHooks::default())
}

/// As [`integrate_affine_geodesic`], with explicit settings and hooks.
///
/// Fails only if the initial data are invalid; problems met along the way
/// truncate the trajectory and are reported in [`GeodesicTrajectory::termination`].
pub fn integrate_geodesic(
    metric: &MetricField,
    x0: &[f64],
    v0: &[f64],
    settings: &IntegratorSettings,
    hooks: GeodesicHooks<'_>,
) -> Result<GeodesicTrajectory> {
    settings.validate()?;
    let d = metric.dimension();
    check_dimension(d, x0.len())?;
    check_dimension(d, v0.len())?;
    christoffel_with(metric, x0, settings.derivative_mode)?;

    let rhs = |_s: f64, y: &[f64]| -> Result<Vec<f64>> {
        let (x, v) = (&y[..d], &y[d..2 * d]);
        let gamma = christoffel_with(metric, x, settings.derivative_mode)?;
        let mut out = Vec::with_capacity(y.len());
        out.extend_from_slice(v);
        out.extend(gamma.acceleration(v));
        if let Some(clock) = hooks.clock {
            out.push(clock(x, v));
        }
        Ok(out)
    };

    let mut state: Vec<f64> = x0.iter().chain(v0).copied().collect();
    if hooks.clock.is_some() {
        state.push(0.0);
    }
    let steps = (settings.end / settings.step).round().max(1.0) as usize;
    let h = settings.end / steps as f64;

    let mut traj = GeodesicTrajectory {
        parameters: vec![0.0],
        positions: vec![x0.to_vec()],
        velocities: vec![v0.to_vec()],
        clock: vec![0.0],
        parametrization: Parametrization::Affine,
        termination: Termination::Completed,
        halvings: 0,
    };
    let invariant = |y: &[f64]| metric.squared_norm(&y[..d], &y[d..2 * d]);

    for i in 0..steps {
        let s = i as f64 * h;
        match advance(&rhs, &invariant, s, &state, h, settings, 0, &mut traj.halvings) {
            Ok(Advance::Accepted(next)) => state = next,
            Ok(Advance::Rejected(drift)) => {
                traj.termination = Termination::DriftRejected { at: s, drift };
                break;
            }
            Err(error) => {
                traj.termination = Termination::Singular { at: s, error };
                break;
            }
        }
        let (x, v) = (&state[..d], &state[d..2 * d]);
        traj.parameters.push(s + h);
        traj.positions.push(x.to_vec());
        traj.velocities.push(v.to_vec());
        traj.clock.push(if hooks.clock.is_some() { state[2 * d] } else { 0.0 });
        if let Some(stop) = hooks.stop {
            if let Some(reason) = stop(x, v, *traj.clock.last().unwrap()) {
                traj.termination = Termination::Stopped { at: s + h, reason };
                break;
            }
        }
    }
    Ok(traj)
}

enum Advance {
    Accepted(Vec<f64>),
    Rejected(f64),
}

#[allow(clippy::too_many_arguments)]
fn advance<F, I>(
    rhs: &F,
    invariant: &I,
    s: f64,
    y: &[f64],
    h: f64,
    settings: &IntegratorSettings,
    depth: u32,
    halvings: &mut usize,
) -> Result<Advance>
where
    F: Fn(f64, &[f64]) -> Result<Vec<f64>>,
    I: Fn(&[f64]) -> Result<f64>,
{
    let before = invariant(y)?;
    let full = rk4_step(rhs, s, y, h)?;
    let drift = match invariant(&full) {
        Ok(after) => (after - before).abs(),
        Err(e) if depth >= settings.max_halvings => return Err(e),
        Err(_) => f64::INFINITY,
    };
    if drift <= settings.drift_tolerance * before.abs().max(1.0) && full.iter().all(|x| x.is_finite()) {
        return Ok(Advance::Accepted(full));
    }
    if depth >= settings.max_halvings {
        return Ok(Advance::Rejected(drift));
    }
    *halvings += 1;
    let half = 0.5 * h;
    let mid = match advance(rhs, invariant, s, y, half, settings, depth + 1, halvings)? {
        Advance::Accepted(m) => m,
        rejected => return Ok(rejected),
    };
    advance(rhs, invariant, s + half, &mid, half, settings, depth + 1, halvings)
}

/// Residual `x_ddot^a + Gamma^a_bc x_dot^b x_dot^c - g(s) x_dot^a` at every
/// sample, with derivatives taken by finite differences of the positions.
///
/// Vanishes to O(h²) exactly when the trajectory is a geodesic whose
/// parametrization is described by `g(s) = d/ds ln(1/lambda(s))`.
pub fn nonaffine_residual(
    trajectory: &GeodesicTrajectory,
    metric: &MetricField,
    g_of_s: &[f64],
) -> Result<Vec<Vec<f64>>> {
    stencil::require(trajectory.len(), 4)?;
    check_dimension(trajectory.len(), g_of_s.len())?;
    let h = trajectory.uniform_step()?;
    let x = &trajectory.positions;
    let x_dot = first_derivative(x, h)?;
    let x_ddot = second_derivative(x, h)?;
    (0..trajectory.len())
        .map(|i| {
            let gamma = christoffel(metric, &x[i])?;
            let accel = gamma.acceleration(&x_dot[i]);
            Ok((0..metric.dimension())
                .map(|a| x_ddot[i][a] - accel[a] - g_of_s[i] * x_dot[i][a])
                .collect())
        })
        .collect()
}

/// Re-expresses a trajectory in the parameter `tau` with `ds/dtau = lambda(s)`.
///
/// `tau` is accumulated by the trapezoid rule with the endpoint-slope
/// correction `-(dx^2/12)(f'_{i+1} - f'_i)` on each interval (starting at zero), velocities
/// become `lambda dx/ds`, and the result is resampled onto a uniform `tau` grid
/// with the same number of samples using cubic Hermite interpolation.
pub fn reparametrize_to_affine(
    trajectory: &GeodesicTrajectory,
    lambda_of_s: &[f64],
) -> Result<GeodesicTrajectory> {
    stencil::require(trajectory.len(), 2)?;
    check_dimension(trajectory.len(), lambda_of_s.len())?;
    if let Some(index) = lambda_of_s.iter().position(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(Error::InvalidReparametrization {
            index,
            value: lambda_of_s[index],
        });
    }
    let rates: Vec<f64> = lambda_of_s.iter().map(|l| 1.0 / l).collect();
    let tau = corrected_cumulative_trapezoid(&trajectory.parameters, &rates);
    let velocities: Vec<Vec<f64>> = trajectory
        .velocities
        .iter()
        .zip(lambda_of_s)
        .map(|(v, l)| v.iter().map(|x| x * l).collect())
        .collect();

    let (parameters, positions, velocities) = resample_uniform(&tau, &trajectory.positions, &velocities);
    let n = parameters.len();
    Ok(GeodesicTrajectory {
        parameters,
        positions,
        velocities,
        clock: vec![0.0; n],
        parametrization: Parametrization::Affine,
        termination: trajectory.termination.clone(),
        halvings: trajectory.halvings,
    })
}

fn corrected_cumulative_trapezoid(x: &[f64], f: &[f64]) -> Vec<f64> {
    let plain = stencil::cumulative_trapezoid_nonuniform(x, f);
    if x.len() < 3 {
        return plain;
    }
    let slopes = node_slopes(x, f);
    let mut correction = 0.0;
    let mut out = Vec::with_capacity(x.len());
    out.push(0.0);
    for i in 1..x.len() {
        let dx = x[i] - x[i - 1];
        correction -= dx * dx / 12.0 * (slopes[i] - slopes[i - 1]);
        out.push(plain[i] + correction);
    }
    out
}

// Second-order slopes from the quadratic through three neighbouring nodes.
fn node_slopes(x: &[f64], f: &[f64]) -> Vec<f64> {
    let n = x.len();
    let quad = |i: usize, j: usize, k: usize, at: usize| {
        let (x0, x1, x2) = (x[i], x[j], x[k]);
        let t = x[at];
        f[i] * (2.0 * t - x1 - x2) / ((x0 - x1) * (x0 - x2))
            + f[j] * (2.0 * t - x0 - x2) / ((x1 - x0) * (x1 - x2))
            + f[k] * (2.0 * t - x0 - x1) / ((x2 - x0) * (x2 - x1))
    };
    (0..n)
        .map(|i| match i {
            0 => quad(0, 1, 2, 0),
            _ if i == n - 1 => quad(n - 3, n - 2, n - 1, n - 1),
            _ => quad(i - 1, i, i + 1, i),
        })
        .collect()
}

/// Cubic Hermite resampling of `(tau_i, x_i, dx/dtau_i)` onto a uniform grid
/// from `tau_0` to `tau_last` with the same number of samples. `tau` must be
/// strictly increasing.
pub(crate) fn resample_uniform(
    tau: &[f64],
    positions: &[Vec<f64>],
    velocities: &[Vec<f64>],
) -> (Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let n = tau.len();
    let (start, end) = (tau[0], tau[n - 1]);
    let mut out_params = Vec::with_capacity(n);
    let mut out_pos = Vec::with_capacity(n);
    let mut out_vel = Vec::with_capacity(n);
    let mut k = 0;
    for j in 0..n {
        let t = if j == n - 1 {
            end
        } else {
            start + (end - start) * j as f64 / (n - 1) as f64
        };
        while k + 2 < n && tau[k + 1] < t {
            k += 1;
        }
        let (p, v) = hermite(
            tau[k],
            tau[k + 1],
            &positions[k],
            &positions[k + 1],
            &velocities[k],
            &velocities[k + 1],
            t,
        );
        out_params.push(t);
        out_pos.push(p);
        out_vel.push(v);
    }
    (out_params, out_pos, out_vel)
}

fn hermite(
    t0: f64,
    t1: f64,
    x0: &[f64],
    x1: &[f64],
    v0: &[f64],
    v1: &[f64],
    t: f64,
) -> (Vec<f64>, Vec<f64>) {
    let dt = t1 - t0;
    let u = (t - t0) / dt;
    let (u2, u3) = (u * u, u * u * u);
    let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    let h10 = u3 - 2.0 * u2 + u;
    let h01 = -2.0 * u3 + 3.0 * u2;
    let h11 = u3 - u2;
    let d00 = (6.0 * u2 - 6.0 * u) / dt;
    let d10 = 3.0 * u2 - 4.0 * u + 1.0;
    let d01 = (-6.0 * u2 + 6.0 * u) / dt;
    let d11 = 3.0 * u2 - 2.0 * u;
    let pos = (0..x0.len())
        .map(|a| h00 * x0[a] + h10 * dt * v0[a] + h01 * x1[a] + h11 * dt * v1[a])
        .collect();
    let vel = (0..x0.len())
        .map(|a| d00 * x0[a] + d10 * v0[a] + d01 * x1[a] + d11 * v1[a])
        .collect();
    (pos, vel)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_christoffels_vanish() {
        let g = MetricField::euclidean(3);
        let gamma = christoffel(&g, &[0.3, -1.0, 2.0]).unwrap();
        assert_eq!(gamma.max_abs(), 0.0);
    }

    #[test]
    fn polar_christoffels_match_closed_form() {
        let g = MetricField::polar_plane();
        for r in [0.5, 1.0, 2.0] {
            let gamma = christoffel(&g, &[r, 0.7]).unwrap();
            assert!((gamma.get(0, 1, 1) + r).abs() < 1e-15);
            assert!((gamma.get(1, 0, 1) - 1.0 / r).abs() < 1e-15);
            assert_eq!(gamma.get(1, 0, 1).to_bits(), gamma.get(1, 1, 0).to_bits());
            assert_eq!(gamma.get(0, 0, 0), 0.0);
        }
    }

    #[test]
    fn singular_and_asymmetric_metrics_are_reported() {
        let g = MetricField::polar_plane();
        assert!(matches!(christoffel(&g, &[0.0, 0.0]), Err(Error::SingularMetric { .. })));
        let skew = MetricField::new(2, Signature::Riemannian, |_| {
            Ok(DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]))
        });
        assert!(matches!(skew.metric_at(&[0.0, 0.0]), Err(Error::AsymmetricMetric { .. })));
    }

    #[test]
    fn straight_line_in_flat_space() {
        let g = MetricField::euclidean(2);
        let traj = integrate_affine_geodesic(&g, &[1.0, -1.0], &[0.3, 0.4], 2.0, 0.01).unwrap();
        assert_eq!(traj.termination, Termination::Completed);
        for (s, x) in traj.parameters.iter().zip(&traj.positions) {
            assert!((x[0] - (1.0 + 0.3 * s)).abs() < 1e-13);
            assert!((x[1] - (-1.0 + 0.4 * s)).abs() < 1e-13);
        }
    }

    #[test]
    fn polar_geodesic_hitting_origin_is_truncated() {
        let g = MetricField::polar_plane();
        let traj = integrate_affine_geodesic(&g, &[1.0, 0.0], &[-1.0, 0.0], 2.0, 0.25).unwrap();
        assert!(!matches!(traj.termination, Termination::Completed));
        assert!(matches!(traj.termination, Termination::Singular { .. }));
        assert!(traj.len() < 9);
    }

    #[test]
    fn invalid_settings_are_errors() {
        let g = MetricField::euclidean(1);
        assert!(integrate_affine_geodesic(&g, &[0.0], &[1.0], 1.0, 0.0).is_err());
        assert!(integrate_affine_geodesic(&g, &[0.0], &[1.0], -1.0, 0.1).is_err());
        assert!(integrate_affine_geodesic(&g, &[0.0, 1.0], &[1.0], 1.0, 0.1).is_err());
    }

    #[test]
    fn reparametrization_rejects_nonpositive_lambda() {
        let traj = GeodesicTrajectory::from_samples(
            vec![0.0, 1.0, 2.0],
            vec![vec![0.0]; 3],
            vec![vec![1.0]; 3],
        )
        .unwrap();
        assert_eq!(
            reparametrize_to_affine(&traj, &[1.0, 0.0, 1.0]).unwrap_err(),
            Error::InvalidReparametrization { index: 1, value: 0.0 }
        );
    }

    #[test]
    fn constant_lambda_rescales() {
        let params: Vec<f64> = (0..11).map(|i| 1.0 + 0.1 * i as f64).collect();
        let pos: Vec<Vec<f64>> = params.iter().map(|s| vec![2.0 * s]).collect();
        let vel = vec![vec![2.0]; 11];
        let traj = GeodesicTrajectory::from_samples(params.clone(), pos.clone(), vel).unwrap();
        let same = reparametrize_to_affine(&traj, &[1.0; 11]).unwrap();
        for i in 0..11 {
            assert!((same.parameters[i] - (params[i] - 1.0)).abs() < 1e-14);
            assert!((same.positions[i][0] - pos[i][0]).abs() < 1e-13);
        }
        let doubled = reparametrize_to_affine(&traj, &[2.0; 11]).unwrap();
        for i in 0..11 {
            assert!((doubled.parameters[i] - (params[i] - 1.0) / 2.0).abs() < 1e-14);
            assert!((doubled.velocities[i][0] - 4.0).abs() < 1e-13);
            assert!((doubled.positions[i][0] - pos[i][0]).abs() < 1e-13);
        }
    }
}
