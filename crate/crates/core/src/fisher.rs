//! Geodesics of probability amplitudes under the Fisher information metric.
//!
//! Everything here works in amplitude variables `q_m` with `p_m = q_m^2`, which
//! turns the simplex into a sphere and removes the `1/p_m` singularity of the
//! Fisher metric at the boundary.

use crate::error::{check_dimension, Error, Result};
use crate::grover::{FisherMode, ProbabilityPath};
use crate::stencil::{self, first_derivative, second_derivative};

const VARIANCE_CLAMP: f64 = 1e-14;
const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Amplitudes and their rates at one parameter value.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudePathState {
    pub q: Vec<f64>,
    pub q_dot: Vec<f64>,
}

impl AmplitudePathState {
    /// `sum q_m^2`; equals one on the simplex sphere.
    pub fn norm_squared(&self) -> f64 {
        self.q.iter().map(|x| x * x).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.q.iter().map(|x| x * x).collect()
    }
}

type VectorFn = Box<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// A curve of pure states `sum_m sqrt(p_m) e^{i phi_m} |m>`, described by
/// signed amplitudes `q_m` (`p_m = q_m^2`), phases `phi_m` and their rates.
pub struct PhasedPath {
    dimension: usize,
    q: VectorFn,
    q_dot: VectorFn,
    phi: VectorFn,
    phi_dot: VectorFn,
}

impl PhasedPath {
    /// A path with constant (zero) phases.
    pub fn new(
        dimension: usize,
        q: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static,
        q_dot: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            dimension,
            q: Box::new(q),
            q_dot: Box::new(q_dot),
            phi: Box::new(move |_| vec![0.0; dimension]),
            phi_dot: Box::new(move |_| vec![0.0; dimension]),
        }
    }

    /// Lifts a probability path with analytic amplitude rates, phases zero.
    pub fn from_path<P>(path: P) -> Result<Self>
    where
        P: ProbabilityPath + Send + Sync + Clone + 'static,
    {
        let dimension = path.dimension();
        if path.amplitude_rates(0.0).is_none() {
            return Err(Error::MissingDerivative);
        }
        let for_q = path.clone();
        Ok(Self::new(
            dimension,
            move |t| for_q.amplitudes(t).unwrap_or_else(|_| vec![f64::NAN; dimension]),
            move |t| path.amplitude_rates(t).unwrap_or_else(|| vec![f64::NAN; dimension]),
        ))
    }

    pub fn with_phases(
        mut self,
        phi: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static,
        phi_dot: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.phi = Box::new(phi);
        self.phi_dot = Box::new(phi_dot);
        self
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn state(&self, theta: f64) -> AmplitudePathState {
        AmplitudePathState {
            q: (self.q)(theta),
            q_dot: (self.q_dot)(theta),
        }
    }

    pub fn probabilities(&self, theta: f64) -> Vec<f64> {
        self.state(theta).probabilities()
    }

    pub fn phases(&self, theta: f64) -> Vec<f64> {
        (self.phi)(theta)
    }

    fn checked(&self, theta: f64) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let state = self.state(theta);
        let phi_dot = (self.phi_dot)(theta);
        check_dimension(self.dimension, state.q.len())?;
        check_dimension(self.dimension, state.q_dot.len())?;
        check_dimension(self.dimension, phi_dot.len())?;
        if let Some(index) = state
            .q
            .iter()
            .chain(&state.q_dot)
            .chain(&phi_dot)
            .position(|x| !x.is_finite())
        {
            return Err(Error::InvalidPath {
                index: index % self.dimension,
                value: f64::NAN,
                theta,
            });
        }
        let total = state.norm_squared();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized(total));
        }
        Ok((state.q, state.q_dot, phi_dot))
    }
}

/// `sum p_m phi_dot_m^2 - (sum p_m phi_dot_m)^2`, the variance of the phase rates.
pub fn phase_variance(path: &PhasedPath, theta: f64) -> Result<f64> {
    let (q, _, phi_dot) = path.checked(theta)?;
    variance(&q, &phi_dot)
}

fn variance(q: &[f64], phi_dot: &[f64]) -> Result<f64> {
    let (mut mean, mut mean_sq) = (0.0, 0.0);
    for (qm, w) in q.iter().zip(phi_dot) {
        let p = qm * qm;
        mean += p * w;
        mean_sq += p * w * w;
    }
    let var = mean_sq - mean * mean;
    if var < -VARIANCE_CLAMP {
        return Err(Error::NegativeVariance(var));
    }
    Ok(var.max(0.0))
}

/// Quantum Fisher information along a phased path,
/// `(1/4){ sum p_dot_m^2 / p_m + 4 sigma^2_phi_dot }`.
///
/// Where `p_m` vanishes the term `p_dot_m^2/p_m` is replaced by its amplitude
/// limit `4 q_dot_m^2`.
pub fn quantum_fisher(path: &PhasedPath, theta: f64) -> Result<f64> {
    let (q, q_dot, phi_dot) = path.checked(theta)?;
    let classical: f64 = q
        .iter()
        .zip(&q_dot)
        .map(|(qm, dq)| {
            let p = qm * qm;
            if p > 0.0 {
                let p_dot = 2.0 * qm * dq;
                p_dot * p_dot / p
            } else {
                4.0 * dq * dq
            }
        })
        .sum();
    Ok(0.25 * (classical + 4.0 * variance(&q, &phi_dot)?))
}

/// `[sum q_dot_m^2]^{1/2}`, which equals `sqrt(F)/2`.
pub fn lagrangian_density(q_dot: &[f64], q: &[f64]) -> Result<f64> {
    check_dimension(q.len(), q_dot.len())?;
    Ok(q_dot.iter().map(|x| x * x).sum::<f64>().sqrt())
}

/// The same density written in probability variables, `(1/2)[sum p_dot^2/p]^{1/2}`.
/// Components with `p_m = 0` must have `p_dot_m = 0`.
pub fn lagrangian_density_from_probabilities(p_dot: &[f64], p: &[f64]) -> Result<f64> {
    check_dimension(p.len(), p_dot.len())?;
    let mut sum = 0.0;
    for (index, (&pm, &dp)) in p.iter().zip(p_dot).enumerate() {
        if pm > 0.0 {
            sum += dp * dp / pm;
        } else if dp != 0.0 || pm < 0.0 {
            return Err(Error::InvalidPath { index, value: pm, theta: f64::NAN });
        }
    }
    Ok(0.5 * sum.sqrt())
}

/// Classical Fisher information of a probability path; see [`crate::grover::fisher_information`].
pub fn classical_fisher(path: &dyn ProbabilityPath, theta: f64) -> Result<f64> {
    crate::grover::fisher_information(path, theta, FisherMode::Analytic)
}

/// Residual of the Euler-Lagrange equation
/// `q_ddot - (1/2)(F_dot/F) q_dot + lambda sqrt(F) q` on uniformly sampled
/// amplitudes `q_samples[i][m]` with spacing `step`.
///
/// `fisher_samples` is an independent input, so hypotheses about `F(theta)`
/// can be tested against any curve. Derivatives are second order on the
/// whole grid.
pub fn el_residual(
    q_samples: &[Vec<f64>],
    step: f64,
    lambda_fs: f64,
    fisher_samples: &[f64],
) -> Result<Vec<Vec<f64>>> {
    stencil::require(q_samples.len(), 5)?;
    check_dimension(q_samples.len(), fisher_samples.len())?;
    let dim = q_samples[0].len();
    for q in q_samples {
        check_dimension(dim, q.len())?;
    }
    if let Some(index) = fisher_samples.iter().position(|&f| !(f > 0.0)) {
        return Err(Error::NonPositiveInformation {
            index,
            value: fisher_samples[index],
        });
    }
    let q_dot = first_derivative(q_samples, step)?;
    let q_ddot = second_derivative(q_samples, step)?;
    let f_dot = first_derivative(fisher_samples, step)?;
    Ok((0..q_samples.len())
        .map(|i| {
            let f = fisher_samples[i];
            let damping = 0.5 * f_dot[i] / f;
            let restoring = lambda_fs * f.sqrt();
            (0..dim)
                .map(|m| q_ddot[i][m] - damping * q_dot[i][m] + restoring * q_samples[i][m])
                .collect()
        })
        .collect())
}

/// Closed-form geodesic for constant information `F0`:
/// `q(theta) = cos(v theta) q0 + sin(v theta)/v q_dot0` with `v = sqrt(F0)/2`.
pub fn sho_amplitude_solution(q0: &[f64], q_dot0: &[f64], f0: f64, theta: f64) -> Result<Vec<f64>> {
    check_dimension(q0.len(), q_dot0.len())?;
    let v = information_speed(f0)?;
    let (s, c) = (v * theta).sin_cos();
    Ok(q0.iter().zip(q_dot0).map(|(a, b)| c * a + s / v * b).collect())
}

/// `v_F = sqrt(F0)/2`.
pub fn information_speed(f0: f64) -> Result<f64> {
    if !(f0 > 0.0 && f0.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "Fisher information must be positive, got {f0}"
        )));
    }
    Ok(f0.sqrt() / 2.0)
}

/// Multiplier that keeps `sum q_m^2 = 1` for constant information `F0`: `sqrt(F0)/4`.
pub fn lagrange_multiplier_for_grover(f0: f64) -> Result<f64> {
    Ok(information_speed(f0)? / 2.0)
}

/// Time-optimal interpolation schedule for adiabatic search,
/// `x(tau) = 1/2 - tan[(1 - 2 tau) arccos(1/sqrt N)] / (2 sqrt(N - 1))`.
///
/// Maps `tau = 0` to `0` and `tau = 1` to `1`.
pub fn aqc_schedule(n: usize, tau: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n, 2));
    }
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::InvalidArgument(format!("tau = {tau} outside [0, 1]")));
    }
    let nf = n as f64;
    let half_angle = (1.0 / nf.sqrt()).acos();
    Ok(0.5 - ((1.0 - 2.0 * tau) * half_angle).tan() / (2.0 * (nf - 1.0).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grover::groverian_path;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn lagrangian_examples() {
        assert_eq!(lagrangian_density(&[0.0, 0.0], &[0.6, 0.8]).unwrap(), 0.0);
        let t: f64 = 0.7;
        let l = lagrangian_density(&[-t.sin(), t.cos()], &[t.cos(), t.sin()]).unwrap();
        assert!((l - 1.0).abs() < 1e-15);
        let path = groverian_path(9).unwrap();
        let q = path.amplitudes(0.3).unwrap();
        let dq = path.amplitude_rates(0.3).unwrap();
        assert!((lagrangian_density(&dq, &q).unwrap() - 1.0).abs() < 1e-14);
        let p: Vec<f64> = q.iter().map(|x| x * x).collect();
        let dp: Vec<f64> = q.iter().zip(&dq).map(|(a, b)| 2.0 * a * b).collect();
        assert!((lagrangian_density_from_probabilities(&dp, &p).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn multiplier_examples() {
        assert_eq!(lagrange_multiplier_for_grover(4.0).unwrap(), 0.5);
        assert_eq!(lagrange_multiplier_for_grover(1.0).unwrap(), 0.25);
        assert!(lagrange_multiplier_for_grover(0.0).is_err());
    }

    #[test]
    fn sho_solution_reproduces_grover_amplitudes() {
        // target at index 0, remaining weight pooled on index 1
        let q = sho_amplitude_solution(&[0.0, 1.0], &[1.0, 0.0], 4.0, 0.0).unwrap();
        assert_eq!(q, vec![0.0, 1.0]);
        for theta in [0.1, 0.8, 1.5] {
            let q = sho_amplitude_solution(&[0.0, 1.0], &[1.0, 0.0], 4.0, theta).unwrap();
            assert!((q[0] - f64::sin(theta)).abs() < 1e-15);
            assert!((q[1] - f64::cos(theta)).abs() < 1e-15);
            let p_target = groverian_path(2).unwrap().probabilities(theta)[0];
            assert!((q[0] * q[0] - p_target).abs() < 1e-15);
        }
    }

    #[test]
    fn quantum_fisher_examples() {
        let grover = PhasedPath::from_path(groverian_path(6).unwrap()).unwrap();
        for theta in [0.0, 0.5, PI / 2.0] {
            assert!((quantum_fisher(&grover, theta).unwrap() - 1.0).abs() < 1e-12);
        }
        let omega = 1.7;
        let global = PhasedPath::from_path(groverian_path(3).unwrap())
            .unwrap()
            .with_phases(move |t| vec![omega * t; 3], move |_| vec![omega; 3]);
        assert!((quantum_fisher(&global, 0.4).unwrap() - 1.0).abs() < 1e-12);
        let split = PhasedPath::new(2, |_| vec![FRAC_1_SQRT_2; 2], |_| vec![0.0; 2])
            .with_phases(move |t| vec![omega * t, -omega * t], move |_| vec![omega, -omega]);
        assert!((quantum_fisher(&split, 0.0).unwrap() - omega * omega).abs() < 1e-14);
    }

    #[test]
    fn phase_variance_examples() {
        let uniform = PhasedPath::new(2, |_| vec![0.6, 0.8], |_| vec![0.0; 2])
            .with_phases(|t| vec![t, t], |_| vec![1.0, 1.0]);
        assert_eq!(phase_variance(&uniform, 0.0).unwrap(), 0.0);
        let split = PhasedPath::new(2, |_| vec![FRAC_1_SQRT_2; 2], |_| vec![0.0; 2])
            .with_phases(|t| vec![t, -t], |_| vec![1.0, -1.0]);
        assert!((phase_variance(&split, 0.0).unwrap() - 1.0).abs() < 1e-15);
        let point = PhasedPath::new(2, |_| vec![1.0, 0.0], |_| vec![0.0; 2])
            .with_phases(|t| vec![3.0 * t, 0.0], |_| vec![3.0, -40.0]);
        assert_eq!(phase_variance(&point, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn unnormalized_path_rejected() {
        let bad = PhasedPath::new(2, |_| vec![1.0, 1.0], |_| vec![0.0; 2]);
        assert!(matches!(quantum_fisher(&bad, 0.0), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn el_residual_rejects_nonpositive_information() {
        let q = vec![vec![0.6, 0.8]; 6];
        let f = vec![0.0; 6];
        assert_eq!(
            el_residual(&q, 0.1, 0.5, &f).unwrap_err(),
            Error::NonPositiveInformation { index: 0, value: 0.0 }
        );
        assert!(matches!(
            el_residual(&q[..4], 0.1, 0.5, &f[..4]),
            Err(Error::TooFewSamples { needed: 5, got: 4 })
        ));
    }

    #[test]
    fn aqc_schedule_examples() {
        for n in [2, 3, 4, 17, 64, 1024] {
            assert!(aqc_schedule(n, 0.0).unwrap().abs() < 1e-12);
            assert!((aqc_schedule(n, 0.5).unwrap() - 0.5).abs() < 1e-15);
            assert!((aqc_schedule(n, 1.0).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(aqc_schedule(1, 0.5).is_err());
        assert!(aqc_schedule(4, 1.5).is_err());
    }
}
