//! Finite-difference stencils and quadrature on uniform grids.
//!
//! Interior points use second-order central differences; the endpoints use
//! second-order one-sided stencils, so every derivative returned here is
//! O(h²) accurate on the whole grid.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// A value that can be scaled and summed, i.e. an element of a real vector space.
pub trait Linear: Clone {
    fn zero_like(&self) -> Self;
    fn add_scaled(&mut self, weight: f64, other: &Self);
}

impl Linear for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn add_scaled(&mut self, weight: f64, other: &Self) {
        *self += weight * other;
    }
}

impl Linear for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add_scaled(&mut self, weight: f64, other: &Self) {
        *self += other * weight;
    }
}

impl Linear for Vec<f64> {
    fn zero_like(&self) -> Self {
        vec![0.0; self.len()]
    }
    fn add_scaled(&mut self, weight: f64, other: &Self) {
        for (a, b) in self.iter_mut().zip(other) {
            *a += weight * b;
        }
    }
}

impl Linear for DVector<Complex64> {
    fn zero_like(&self) -> Self {
        DVector::zeros(self.len())
    }
    fn add_scaled(&mut self, weight: f64, other: &Self) {
        for (a, b) in self.iter_mut().zip(other.iter()) {
            *a += b * weight;
        }
    }
}

fn combine<T: Linear>(samples: &[T], terms: &[(usize, f64)], scale: f64) -> T {
    let mut out = samples[terms[0].0].zero_like();
    for &(idx, w) in terms {
        out.add_scaled(w * scale, &samples[idx]);
    }
    out
}

/// First derivative at sample `i` of a uniformly sampled function.
pub fn first_derivative_at<T: Linear>(samples: &[T], step: f64, i: usize) -> T {
    let n = samples.len();
    let scale = 1.0 / (2.0 * step);
    if i == 0 {
        combine(samples, &[(0, -3.0), (1, 4.0), (2, -1.0)], scale)
    } else if i == n - 1 {
        combine(samples, &[(n - 1, 3.0), (n - 2, -4.0), (n - 3, 1.0)], scale)
    } else {
        combine(samples, &[(i + 1, 1.0), (i - 1, -1.0)], scale)
    }
}

/// Second derivative at sample `i` of a uniformly sampled function.
pub fn second_derivative_at<T: Linear>(samples: &[T], step: f64, i: usize) -> T {
    let n = samples.len();
    let scale = 1.0 / (step * step);
    if i == 0 {
        combine(samples, &[(0, 2.0), (1, -5.0), (2, 4.0), (3, -1.0)], scale)
    } else if i == n - 1 {
        combine(
            samples,
            &[(n - 1, 2.0), (n - 2, -5.0), (n - 3, 4.0), (n - 4, -1.0)],
            scale,
        )
    } else {
        combine(samples, &[(i + 1, 1.0), (i, -2.0), (i - 1, 1.0)], scale)
    }
}

/// First derivative on the whole grid. Needs at least 3 samples.
pub fn first_derivative<T: Linear>(samples: &[T], step: f64) -> Result<Vec<T>> {
    require(samples.len(), 3)?;
    Ok((0..samples.len())
        .map(|i| first_derivative_at(samples, step, i))
        .collect())
}

/// Second derivative on the whole grid. Needs at least 4 samples.
pub fn second_derivative<T: Linear>(samples: &[T], step: f64) -> Result<Vec<T>> {
    require(samples.len(), 4)?;
    Ok((0..samples.len())
        .map(|i| second_derivative_at(samples, step, i))
        .collect())
}

/// Composite trapezoid rule over a uniform grid.
pub fn trapezoid(values: &[f64], step: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => step * (0.5 * (values[0] + values[n - 1]) + values[1..n - 1].iter().sum::<f64>()),
    }
}

/// Running trapezoid integral; element `i` is the integral from sample 0 to sample `i`.
pub fn cumulative_trapezoid(values: &[f64], step: f64) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(values.len());
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            acc += 0.5 * step * (values[i - 1] + v);
        }
        out.push(acc);
    }
    out
}

/// Cumulative trapezoid over a non-uniform abscissa.
pub fn cumulative_trapezoid_nonuniform(abscissa: &[f64], values: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(values.len());
    for i in 0..values.len() {
        if i > 0 {
            acc += 0.5 * (abscissa[i] - abscissa[i - 1]) * (values[i - 1] + values[i]);
        }
        out.push(acc);
    }
    out
}

pub(crate) fn require(got: usize, needed: usize) -> Result<()> {
    if got < needed {
        Err(Error::TooFewSamples { needed, got })
    } else {
        Ok(())
    }
}
