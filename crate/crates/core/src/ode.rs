//! Classical fourth-order Runge-Kutta for first-order systems `y' = f(t, y)`.

use crate::error::Result;

/// One RK4 step of size `h` from `(t, y)`.
pub fn rk4_step<F>(f: &F, t: f64, y: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(f64, &[f64]) -> Result<Vec<f64>> + ?Sized,
{
    let n = y.len();
    let shifted = |k: &[f64], scale: f64| -> Vec<f64> {
        y.iter().zip(k).map(|(a, b)| a + scale * b).collect()
    };
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, &shifted(&k1, 0.5 * h))?;
    let k3 = f(t + 0.5 * h, &shifted(&k2, 0.5 * h))?;
    let k4 = f(t + h, &shifted(&k3, h))?;
    Ok((0..n)
        .map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// Integrates `steps` fixed steps of size `h`, returning every state
/// including the initial one.
pub fn rk4_integrate<F>(f: &F, t0: f64, y0: &[f64], h: f64, steps: usize) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64, &[f64]) -> Result<Vec<f64>> + ?Sized,
{
    let mut out = Vec::with_capacity(steps + 1);
    out.push(y0.to_vec());
    for i in 0..steps {
        let next = rk4_step(f, t0 + i as f64 * h, &out[i], h)?;
        out.push(next);
    }
    Ok(out)
}
