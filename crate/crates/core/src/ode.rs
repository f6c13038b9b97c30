//! Classic fixed-step fourth-order Runge-Kutta for scalar ODEs.

/// One RK4 step of `x' = rhs(t, x)` from `(t, x)` with step `h`.
pub fn rk4_step<F>(rhs: &F, t: f64, x: f64, h: f64) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    let k1 = rhs(t, x);
    let k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
    let k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
    let k4 = rhs(t + h, x + h * k3);
    x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// Result of [`integrate`].
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Set when `stop` fired before the horizon was reached.
    pub stopped_early: bool,
}

/// Integrates from `t = 0` to `horizon` with step `dt`, recording every step.
///
/// The last step is shortened so that the path ends exactly at `horizon`.
/// Integration halts (and the offending sample is dropped) as soon as
/// `stop(x)` returns true for a freshly computed state.
pub fn integrate<F, S>(rhs: F, x0: f64, horizon: f64, dt: f64, stop: S) -> Trajectory
where
    F: Fn(f64, f64) -> f64,
    S: Fn(f64) -> bool,
{
    let steps = (horizon / dt - 1e-9).ceil().max(0.0) as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut values = Vec::with_capacity(steps + 1);
    times.push(0.0);
    values.push(x0);

    let mut t = 0.0;
    let mut x = x0;
    for k in 1..=steps {
        let t_next = if k == steps { horizon } else { k as f64 * dt };
        let next = rk4_step(&rhs, t, x, t_next - t);
        if !next.is_finite() || stop(next) {
            return Trajectory {
                times,
                values,
                stopped_early: true,
            };
        }
        t = t_next;
        x = next;
        times.push(t);
        values.push(x);
    }
    Trajectory {
        times,
        values,
        stopped_early: false,
    }
}
