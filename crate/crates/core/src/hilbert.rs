//! Geometry of pure states: the Fubini-Study line element, energy dispersion,
//! horizontal geodesics and the split of the total phase into dynamical and
//! geometric parts.
//!
//! States are unit vectors in `C^N`. Curves of states are passed around as
//! slices of [`StateVector`] sampled on a uniform parameter grid; derivatives
//! of sampled curves use the stencils in [`crate::stencil`].

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{check_dimension, Error, Result};
use crate::stencil::{self, first_derivative_at};

/// Tolerance on `<psi|psi> = 1` accepted by [`StateVector::new`].
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Tolerance used for the three horizontal-geodesic initial conditions.
pub const HORIZONTAL_TOLERANCE: f64 = 1e-10;
/// Tolerance on `max |H - H^dagger|`.
pub const HERMITICITY_TOLERANCE: f64 = 1e-12;

const DISPERSION_CLAMP: f64 = 1e-12;

/// A unit-norm state vector in `C^N`, `N >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(DVector<Complex64>);

impl StateVector {
    /// Wraps `amplitudes`, checking `N >= 2` and `|<psi|psi> - 1| <= 1e-12`.
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::DimensionTooSmall(amplitudes.len(), 2));
        }
        let norm_sq = amplitudes.norm_squared();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm_sq));
        }
        Ok(Self(amplitudes))
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        Self::new(amplitudes.unscale(norm))
    }

    pub fn from_slice(amplitudes: &[Complex64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(amplitudes))
    }

    /// Real amplitudes, checked for unit norm.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(DVector::from_iterator(
            amplitudes.len(),
            amplitudes.iter().map(|&a| Complex64::new(a, 0.0)),
        ))
    }

    /// Computational basis state `|index>` (0-based) in dimension `n`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {n}"
            )));
        }
        let mut v = DVector::zeros(n);
        v[index] = Complex64::new(1.0, 0.0);
        Self::new(v)
    }

    /// Skips the norm check; callers guarantee unit norm up to their own tolerance.
    pub(crate) fn from_raw(amplitudes: DVector<Complex64>) -> Self {
        Self(amplitudes)
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DVector<Complex64> {
        self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.0.dotc(&other.0)
    }

    /// Multiplies by the global phase `e^{i alpha}`.
    pub fn with_phase(&self, alpha: f64) -> StateVector {
        StateVector(self.0.map(|a| a * Complex64::from_polar(1.0, alpha)))
    }
}

/// A Hermitian operator together with the value of `hbar` it is measured in.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    matrix: DMatrix<Complex64>,
    hbar: f64,
}

impl Hamiltonian {
    /// Checks squareness and Hermiticity; `hbar` defaults to 1.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let defect = (&matrix - matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if defect > HERMITICITY_TOLERANCE {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self { matrix, hbar: 1.0 })
    }

    pub fn from_real_diagonal(diagonal: &[f64]) -> Result<Self> {
        let d = DVector::from_iterator(
            diagonal.len(),
            diagonal.iter().map(|&x| Complex64::new(x, 0.0)),
        );
        Self::new(DMatrix::from_diagonal(&d))
    }

    pub fn with_hbar(mut self, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")));
        }
        self.hbar = hbar;
        Ok(self)
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    /// `<psi|H|psi>`, real for Hermitian `H`.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        check_dimension(self.dimension(), psi.dimension())?;
        Ok(psi.0.dotc(&(&self.matrix * &psi.0)).re)
    }

    /// Schrödinger tangent `-(i/hbar) H |psi>`.
    pub fn schrodinger_tangent(&self, psi: &StateVector) -> Result<DVector<Complex64>> {
        check_dimension(self.dimension(), psi.dimension())?;
        let factor = Complex64::new(0.0, -1.0 / self.hbar);
        Ok((&self.matrix * &psi.0) * factor)
    }

    /// Exact evolution `exp(-i H t / hbar) |psi>` for this time-independent `H`.
    pub fn propagate(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        check_dimension(self.dimension(), psi.dimension())?;
        let eig = self.matrix.clone().symmetric_eigen();
        let vecs = &eig.eigenvectors;
        let mut coeffs = vecs.adjoint() * &psi.0;
        for (c, e) in coeffs.iter_mut().zip(eig.eigenvalues.iter()) {
            *c *= Complex64::from_polar(1.0, -e * t / self.hbar);
        }
        Ok(StateVector(vecs * coeffs))
    }
}

/// Total, dynamical and geometric phase of an evolution.
///
/// `total - dynamical == geometric + 2 pi winding` holds exactly up to
/// rounding; `geometric` is reduced to `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDecomposition {
    pub total: f64,
    pub dynamical: f64,
    pub geometric: f64,
    pub winding: i64,
}

/// Reduces an angle to the principal interval `(-pi, pi]`.
pub fn principal_angle(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Norm of the component of `psi_dot` orthogonal to `psi`, i.e. the
/// Fubini-Study speed `<u_perp|u_perp>^{1/2}`.
pub fn fubini_study_speed(psi: &StateVector, psi_dot: &DVector<Complex64>) -> Result<f64> {
    check_dimension(psi.dimension(), psi_dot.len())?;
    let overlap = psi.0.dotc(psi_dot);
    let perp = psi_dot - &psi.0 * overlap;
    Ok(perp.norm())
}

/// Energy uncertainty `[<H^2> - <H>^2]^{1/2}`.
pub fn energy_dispersion(psi: &StateVector, hamiltonian: &Hamiltonian) -> Result<f64> {
    check_dimension(hamiltonian.dimension(), psi.dimension())?;
    let h_psi = &hamiltonian.matrix * &psi.0;
    let mean = psi.0.dotc(&h_psi).re;
    let mean_sq = h_psi.norm_squared();
    let variance = mean_sq - mean * mean;
    if variance < -DISPERSION_CLAMP {
        return Err(Error::NegativeVariance(variance));
    }
    Ok(variance.max(0.0).sqrt())
}

/// Returns `(v_H, Delta E / hbar)` where `v_H` is the Fubini-Study speed of the
/// Schrödinger tangent. The two agree for every state and Hamiltonian.
pub fn speed_equals_dispersion_check(
    psi: &StateVector,
    hamiltonian: &Hamiltonian,
) -> Result<(f64, f64)> {
    let tangent = hamiltonian.schrodinger_tangent(psi)?;
    let speed = fubini_study_speed(psi, &tangent)?;
    let dispersion = energy_dispersion(psi, hamiltonian)?;
    Ok((speed, dispersion / hamiltonian.hbar))
}

/// Horizontal, affinely parametrized geodesic
/// `cos(v s) |psi0> + sin(v s)/v |psi_dot0>`.
///
/// Requires `<psi0|psi0> = 1`, `<psi0|psi_dot0> = 0` and
/// `<psi_dot0|psi_dot0> = v^2`, each within [`HORIZONTAL_TOLERANCE`].
pub fn horizontal_geodesic(
    psi0: &DVector<Complex64>,
    psi_dot0: &DVector<Complex64>,
    speed: f64,
    s: f64,
) -> Result<StateVector> {
    check_dimension(psi0.len(), psi_dot0.len())?;
    if !(speed > 0.0 && speed.is_finite()) {
        return Err(Error::InvalidArgument(format!("speed must be positive, got {speed}")));
    }
    let mut failures = Vec::new();
    let norm_defect = (psi0.norm_squared() - 1.0).abs();
    if norm_defect > HORIZONTAL_TOLERANCE {
        failures.push(format!("<psi0|psi0> deviates from 1 by {norm_defect:e}"));
    }
    let overlap = psi0.dotc(psi_dot0).norm();
    if overlap > HORIZONTAL_TOLERANCE {
        failures.push(format!("|<psi0|psi_dot0>| = {overlap:e} is not zero"));
    }
    let speed_defect = (psi_dot0.norm_squared() - speed * speed).abs();
    if speed_defect > HORIZONTAL_TOLERANCE {
        failures.push(format!("<psi_dot0|psi_dot0> deviates from v^2 by {speed_defect:e}"));
    }
    if !failures.is_empty() {
        return Err(Error::HorizontalPrecondition(failures.join("; ")));
    }
    let (sin, cos) = (speed * s).sin_cos();
    Ok(StateVector(
        psi0 * Complex64::new(cos, 0.0) + psi_dot0 * Complex64::new(sin / speed, 0.0),
    ))
}

/// `|<psi_b|psi_a>|^2`.
pub fn transition_probability(psi_a: &StateVector, psi_b: &StateVector) -> Result<f64> {
    check_dimension(psi_a.dimension(), psi_b.dimension())?;
    Ok(psi_b.inner(psi_a).norm_sqr().min(1.0))
}

/// Arc length `theta` and overlap phase `beta` of the geodesic joining two rays,
/// from `<psi_a|psi_b> = |<psi_a|psi_b>| e^{i beta}` and `theta = arccos |<psi_a|psi_b>|`.
///
/// Orthogonal inputs select `beta = 0, theta = pi/2`.
pub fn arc_parameters(psi_a: &StateVector, psi_b: &StateVector) -> Result<(f64, f64)> {
    check_dimension(psi_a.dimension(), psi_b.dimension())?;
    let overlap = psi_a.inner(psi_b);
    let modulus = overlap.norm();
    if modulus < 1e-15 {
        return Ok((PI / 2.0, 0.0));
    }
    let theta = modulus.min(1.0).acos();
    if theta < 1e-9 {
        return Err(Error::DegenerateArc);
    }
    Ok((theta, overlap.arg()))
}

/// Point at parameter `s in [0, theta]` on the geodesic arc from the ray of
/// `psi_a` to the ray of `psi_b`:
/// `e^{i beta s/theta} [sin(theta - s)|psi_a> + e^{-i beta} sin(s)|psi_b>]`,
/// rescaled to unit norm.
pub fn geodesic_arc_between(psi_a: &StateVector, psi_b: &StateVector, s: f64) -> Result<StateVector> {
    let (theta, beta) = arc_parameters(psi_a, psi_b)?;
    let slack = 1e-12 * theta.max(1.0);
    if !(s >= -slack && s <= theta + slack) {
        return Err(Error::ArcParameterOutOfRange { s, theta });
    }
    let s = s.clamp(0.0, theta);
    let weight_a = Complex64::new((theta - s).sin(), 0.0);
    let weight_b = Complex64::from_polar(s.sin(), -beta);
    let raw = (&psi_a.0 * weight_a + &psi_b.0 * weight_b) * Complex64::from_polar(1.0, beta * s / theta);
    StateVector::normalized(raw)
}

fn check_trajectory(trajectory: &[StateVector], min_samples: usize) -> Result<usize> {
    stencil::require(trajectory.len(), min_samples)?;
    let n = trajectory[0].dimension();
    for psi in trajectory {
        check_dimension(n, psi.dimension())?;
    }
    Ok(n)
}

fn hamiltonian_at(hamiltonians: &[Hamiltonian], i: usize) -> &Hamiltonian {
    if hamiltonians.len() == 1 {
        &hamiltonians[0]
    } else {
        &hamiltonians[i]
    }
}

fn energy_samples(
    trajectory: &[StateVector],
    hamiltonians: &[Hamiltonian],
) -> Result<Vec<f64>> {
    if hamiltonians.len() != 1 && hamiltonians.len() != trajectory.len() {
        return Err(Error::DimensionMismatch {
            expected: trajectory.len(),
            found: hamiltonians.len(),
        });
    }
    trajectory
        .iter()
        .enumerate()
        .map(|(i, psi)| hamiltonian_at(hamiltonians, i).expectation(psi))
        .collect()
}

/// Splits the phase acquired along `trajectory` (uniform step `dt`) into
/// `total = arg <psi(0)|psi(T)>`, `dynamical = -(1/hbar) int <H> dt` and the
/// geometric remainder.
///
/// `hamiltonians` holds one operator per sample, or a single operator used for
/// every sample. The dynamical integral uses the composite trapezoid rule.
pub fn phase_decomposition(
    trajectory: &[StateVector],
    hamiltonians: &[Hamiltonian],
    dt: f64,
    hbar: f64,
) -> Result<PhaseDecomposition> {
    check_trajectory(trajectory, 3)?;
    let overlap = trajectory[0].inner(&trajectory[trajectory.len() - 1]);
    if overlap.norm() < 1e-14 {
        return Err(Error::UndefinedTotalPhase);
    }
    let total = overlap.arg();
    let energies = energy_samples(trajectory, hamiltonians)?;
    let dynamical = -stencil::trapezoid(&energies, dt) / hbar;
    let raw = total - dynamical;
    let geometric = principal_angle(raw);
    let winding = ((raw - geometric) / (2.0 * PI)).round() as i64;
    Ok(PhaseDecomposition {
        total,
        dynamical,
        geometric,
        winding,
    })
}

/// The gauge- and reparametrization-invariant phase functional
/// `arg <psi(0)|psi(T)> - Im int <psi|psi_dot> ds`, evaluated on samples alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayPhase {
    /// Functional value reduced to `(-pi, pi]`.
    pub value: f64,
    /// Richardson estimate `|phi_h - phi_2h| / 3` of the discretization error,
    /// zero when the grid cannot be coarsened.
    pub truncation_estimate: f64,
}

fn ray_phase_raw(trajectory: &[StateVector], ds: f64) -> f64 {
    let n = trajectory.len();
    let amps: Vec<DVector<Complex64>> = trajectory.iter().map(|p| p.0.clone()).collect();
    let connection: Vec<f64> = (0..n)
        .map(|i| amps[i].dotc(&first_derivative_at(&amps, ds, i)).im)
        .collect();
    let total = trajectory[0].inner(&trajectory[n - 1]).arg();
    total - stencil::trapezoid(&connection, ds)
}

pub fn ray_phase(trajectory: &[StateVector], ds: f64) -> Result<RayPhase> {
    check_trajectory(trajectory, 3)?;
    if trajectory[0].inner(&trajectory[trajectory.len() - 1]).norm() < 1e-14 {
        return Err(Error::UndefinedTotalPhase);
    }
    let fine = ray_phase_raw(trajectory, ds);
    let intervals = trajectory.len() - 1;
    let truncation_estimate = if intervals.is_multiple_of(2) && intervals >= 4 {
        let coarse: Vec<StateVector> = trajectory.iter().step_by(2).cloned().collect();
        principal_angle(fine - ray_phase_raw(&coarse, 2.0 * ds)).abs() / 3.0
    } else {
        0.0
    };
    Ok(RayPhase {
        value: principal_angle(fine),
        truncation_estimate,
    })
}

/// `max |<psi|psi_dot>|` over interior samples, with `psi_dot` from central
/// differences on a grid of spacing `ds`. Vanishes (to O(h²)) exactly for
/// horizontal curves.
pub fn horizontality_defect(trajectory: &[StateVector], ds: f64) -> Result<f64> {
    check_trajectory(trajectory, 3)?;
    let amps: Vec<DVector<Complex64>> = trajectory.iter().map(|p| p.0.clone()).collect();
    Ok((1..amps.len() - 1)
        .map(|i| amps[i].dotc(&first_derivative_at(&amps, ds, i)).norm())
        .fold(0.0, f64::max))
}

/// Removes the dynamical phase from a Schrödinger trajectory:
/// `psi_h(s) = exp[(i/hbar) int_0^s <H> ds'] psi(s)`, with the running
/// integral evaluated by the trapezoid rule.
pub fn horizontal_lift(
    trajectory: &[StateVector],
    hamiltonians: &[Hamiltonian],
    dt: f64,
    hbar: f64,
) -> Result<Vec<StateVector>> {
    check_trajectory(trajectory, 1)?;
    let energies = energy_samples(trajectory, hamiltonians)?;
    let accumulated = stencil::cumulative_trapezoid(&energies, dt);
    Ok(trajectory
        .iter()
        .zip(accumulated)
        .map(|(psi, phase)| psi.with_phase(phase / hbar))
        .collect())
}
