//! Grover search in closed form and as an explicit iteration, the continuous
//! probability path it traces, and the classical Fisher information along it.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::StateVector;

/// Largest search space simulated by [`grover_state_matrix`].
pub const MATRIX_FREE_CAP: usize = 1 << 14;

/// Parameter domain of the Groverian path, from source (`0`) to target (`pi/2`).
pub const GROVER_THETA_DOMAIN: (f64, f64) = (0.0, PI / 2.0);

/// Default step of the finite-difference Fisher information.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// A search over `n` items for the single item `target` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroverProblem {
    n: usize,
    target: usize,
}

impl GroverProblem {
    pub fn new(n: usize, target: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n, 2));
        }
        if target == 0 || target > n {
            return Err(Error::InvalidArgument(format!(
                "target index {target} outside 1..={n}"
            )));
        }
        Ok(Self { n, target })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// 1-based index of the marked item.
    pub fn target(&self) -> usize {
        self.target
    }

    /// Rotation angle per iteration, `sin(phi/2) = 1/sqrt(N)`.
    pub fn rotation_angle(&self) -> f64 {
        2.0 * (1.0 / (self.n as f64).sqrt()).asin()
    }
}

/// Amplitudes `(sin[(k+1/2)phi], cos[(k+1/2)phi])` on the target and on the
/// uniform superposition of the remaining items after `k` iterations.
pub fn grover_state(problem: &GroverProblem, k: u64) -> (f64, f64) {
    let angle = (k as f64 + 0.5) * problem.rotation_angle();
    angle.sin_cos()
}

/// Applies the Grover iterate `(2|s><s| - I)(I - 2|w><w|)` `k` times to the
/// uniform superposition, on the full `N`-dimensional vector.
///
/// Both reflections are rank-one updates, so no `N x N` matrix is formed.
pub fn grover_state_matrix(problem: &GroverProblem, k: u64) -> Result<StateVector> {
    let n = problem.n;
    if n > MATRIX_FREE_CAP {
        return Err(Error::ResourceLimit { n, cap: MATRIX_FREE_CAP });
    }
    let w = problem.target - 1;
    let uniform = 1.0 / (n as f64).sqrt();
    let mut amps = vec![uniform; n];
    for _ in 0..k {
        amps[w] = -amps[w];
        // 2<s|psi>|s> - psi, with <s|psi> = sum(psi)/sqrt(N)
        let twice_mean = 2.0 * amps.iter().sum::<f64>() / n as f64;
        for a in amps.iter_mut() {
            *a = twice_mean - *a;
        }
    }
    Ok(StateVector::from_raw(DVector::from_iterator(
        n,
        amps.into_iter().map(|a| Complex64::new(a, 0.0)),
    )))
}

/// Iteration counts for maximal success probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalIterations {
    /// `round(pi/(2 phi) - 1/2)`.
    pub k_exact: u64,
    /// Large-`N` estimate `(pi/4) sqrt(N)`.
    pub k_asymptotic: f64,
    /// `sin^2[(k_exact + 1/2) phi]`, reported because for small `N` no integer
    /// reaches success probability one.
    pub success_probability: f64,
}

pub fn optimal_iterations(problem: &GroverProblem) -> OptimalIterations {
    let phi = problem.rotation_angle();
    let k_exact = (PI / (2.0 * phi) - 0.5).round().max(0.0) as u64;
    let (target, _) = grover_state(problem, k_exact);
    OptimalIterations {
        k_exact,
        k_asymptotic: PI / 4.0 * (problem.n as f64).sqrt(),
        success_probability: target * target,
    }
}

/// A one-parameter family of probability vectors on the simplex.
///
/// Implementors supply `p(theta)`; the amplitude view `q_m` with `q_m^2 = p_m`
/// defaults to the non-negative square root, and may be overridden with a
/// smooth signed branch.
pub trait ProbabilityPath {
    fn dimension(&self) -> usize;

    fn probabilities(&self, theta: f64) -> Vec<f64>;

    fn amplitudes(&self, theta: f64) -> Result<Vec<f64>> {
        self.probabilities(theta)
            .into_iter()
            .enumerate()
            .map(|(index, p)| {
                if p < 0.0 || !p.is_finite() {
                    Err(Error::InvalidPath { index, value: p, theta })
                } else {
                    Ok(p.sqrt())
                }
            })
            .collect()
    }

    /// Analytic `dq_m/dtheta`, if known.
    fn amplitude_rates(&self, _theta: f64) -> Option<Vec<f64>> {
        None
    }
}

/// `p_1 = sin^2(theta)`, `p_l = cos^2(theta)/(N-1)` for `l != 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroverianPath {
    n: usize,
}

/// The continuous probability path of Grover search over `n` items, with the
/// marked item at index 1.
pub fn groverian_path(n: usize) -> Result<GroverianPath> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n, 2));
    }
    Ok(GroverianPath { n })
}

impl ProbabilityPath for GroverianPath {
    fn dimension(&self) -> usize {
        self.n
    }

    fn probabilities(&self, theta: f64) -> Vec<f64> {
        let (s, c) = theta.sin_cos();
        let rest = c * c / (self.n - 1) as f64;
        let mut p = vec![rest; self.n];
        p[0] = s * s;
        p
    }

    /// `q_1 = sin(theta)`, `q_l = cos(theta)/sqrt(N-1)`: smooth through the
    /// simplex boundary at `theta = 0` and `theta = pi/2`.
    fn amplitudes(&self, theta: f64) -> Result<Vec<f64>> {
        let (s, c) = theta.sin_cos();
        let mut q = vec![c / ((self.n - 1) as f64).sqrt(); self.n];
        q[0] = s;
        Ok(q)
    }

    fn amplitude_rates(&self, theta: f64) -> Option<Vec<f64>> {
        let (s, c) = theta.sin_cos();
        let mut dq = vec![-s / ((self.n - 1) as f64).sqrt(); self.n];
        dq[0] = c;
        Some(dq)
    }
}

type VectorFn = Box<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// A probability path given by closures.
pub struct FnPath {
    dimension: usize,
    probabilities: VectorFn,
    amplitude_rates: Option<VectorFn>,
}

impl FnPath {
    pub fn new(
        dimension: usize,
        probabilities: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            dimension,
            probabilities: Box::new(probabilities),
            amplitude_rates: None,
        }
    }

    /// Supplies analytic derivatives of the non-negative amplitudes `sqrt(p_m)`.
    pub fn with_amplitude_rates(
        mut self,
        rates: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.amplitude_rates = Some(Box::new(rates));
        self
    }
}

impl ProbabilityPath for FnPath {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn probabilities(&self, theta: f64) -> Vec<f64> {
        (self.probabilities)(theta)
    }

    fn amplitude_rates(&self, theta: f64) -> Option<Vec<f64>> {
        self.amplitude_rates.as_ref().map(|f| f(theta))
    }
}

/// How [`fisher_information`] differentiates the amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FisherMode {
    /// Analytic amplitude derivatives from [`ProbabilityPath::amplitude_rates`].
    Analytic,
    /// Central differences of the amplitudes with step `h`.
    FiniteDifference { step: f64 },
}

impl FisherMode {
    pub fn finite_difference() -> Self {
        FisherMode::FiniteDifference { step: DEFAULT_FD_STEP }
    }
}

fn check_probabilities(path: &dyn ProbabilityPath, theta: f64) -> Result<()> {
    let p = path.probabilities(theta);
    crate::error::check_dimension(path.dimension(), p.len())?;
    match p.iter().position(|&x| x < 0.0 || !x.is_finite()) {
        Some(index) => Err(Error::InvalidPath { index, value: p[index], theta }),
        None => Ok(()),
    }
}

/// Classical Fisher information `4 sum_m (d sqrt(p_m) / d theta)^2`, computed
/// in amplitude variables so vanishing `p_m` never appears in a denominator.
pub fn fisher_information(path: &dyn ProbabilityPath, theta: f64, mode: FisherMode) -> Result<f64> {
    let rates = amplitude_rates(path, theta, mode)?;
    Ok(4.0 * rates.iter().map(|r| r * r).sum::<f64>())
}

pub(crate) fn amplitude_rates(
    path: &dyn ProbabilityPath,
    theta: f64,
    mode: FisherMode,
) -> Result<Vec<f64>> {
    check_probabilities(path, theta)?;
    match mode {
        FisherMode::Analytic => path.amplitude_rates(theta).ok_or(Error::MissingDerivative),
        FisherMode::FiniteDifference { step } => {
            if !(step > 0.0) {
                return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
            }
            let ahead = path.amplitudes(theta + step)?;
            let behind = path.amplitudes(theta - step)?;
            Ok(ahead
                .iter()
                .zip(&behind)
                .map(|(a, b)| (a - b) / (2.0 * step))
                .collect())
        }
    }
}
