//! Classical fixed-step fourth-order Runge-Kutta integration.

use crate::error::Error;

/// One RK4 step for an autonomous system `y' = f(y)`.
pub fn rk4_step<const N: usize>(
    f: impl Fn(&[f64; N]) -> [f64; N],
    y: &[f64; N],
    dt: f64,
) -> Result<[f64; N], Error> {
    let k1 = f(y);
    let mut y2 = *y;
    for i in 0..N {
        y2[i] = y[i] + 0.5 * dt * k1[i];
    }
    let k2 = f(&y2);
    let mut y3 = *y;
    for i in 0..N {
        y3[i] = y[i] + 0.5 * dt * k2[i];
    }
    let k3 = f(&y3);
    let mut y4 = *y;
    for i in 0..N {
        y4[i] = y[i] + dt * k3[i];
    }
    let k4 = f(&y4);
    let mut out = *y;
    for i in 0..N {
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if !out[i].is_finite() {
            return Err(Error::Numerics(format!(
                "integration diverged (component {i} is not finite)"
            )));
        }
    }
    Ok(out)
}

/// `n` consecutive RK4 steps.
pub fn rk4_integrate<const N: usize>(
    f: impl Fn(&[f64; N]) -> [f64; N],
    y: &[f64; N],
    dt: f64,
    n: u64,
) -> Result<[f64; N], Error> {
    let mut y = *y;
    for _ in 0..n {
        y = rk4_step(&f, &y, dt)?;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// One step of y' = -y from 1.0 at dt = 0.1. The Butcher tableau gives
    /// exactly 0.9048375, which sits within 1e-7 of e^(-0.1).
    #[test]
    fn single_step_of_exponential_decay() {
        let y = rk4_step(|y: &[f64; 1]| [-y[0]], &[1.0], 0.1).unwrap();
        assert!((y[0] - 0.9048375).abs() < 1e-15, "got {}", y[0]);
        assert!((y[0] - (-0.1f64).exp()).abs() < 1e-7);
    }

    /// Fourth-order convergence: halving dt shrinks the global error on
    /// [0, 1] by roughly 2^4.
    #[test]
    fn halving_dt_divides_error_by_sixteen() {
        let err = |dt: f64| {
            let n = (1.0 / dt).round() as u64;
            let y = rk4_integrate(|y: &[f64; 1]| [-y[0]], &[1.0], dt, n).unwrap();
            (y[0] - (-1.0f64).exp()).abs()
        };
        let ratio = err(0.05) / err(0.025);
        assert!((14.0..=18.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn divergence_is_reported() {
        let huge = [1e308];
        // y' = y^2 overflows immediately at this magnitude
        let r = rk4_step(|y: &[f64; 1]| [y[0] * y[0]], &huge, 1.0);
        assert!(matches!(r, Err(Error::Numerics(_))));
    }
}
