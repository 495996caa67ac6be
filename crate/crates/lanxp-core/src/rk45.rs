//! Embedded Dormand–Prince 5(4) integrator over fixed-size real state vectors.
//!
//! Generic over the state dimension so the same kernel drives both the
//! confluent-hypergeometric continuation (dimension 4: two complex values)
//! and the planar equations of motion (dimension 4: positions + momenta).
//! The `on_step` hook runs after every accepted step and may mutate the
//! state (renormalization, event bookkeeping) or abort with an error.

use crate::error::{Error, Result};

pub struct Dp45Options {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Largest step the controller may take (also bounds the first step).
    pub max_dt: f64,
    /// Abort threshold: a requested step below this is a stiffness signal.
    pub min_dt: f64,
    pub max_steps: usize,
}

impl Default for Dp45Options {
    fn default() -> Self {
        Dp45Options {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_dt: f64::INFINITY,
            min_dt: 1e-14,
            max_steps: 2_000_000,
        }
    }
}

const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
/// Difference between the 5th- and embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrate dy/dt = f(t, y) from `t0` to `t1` (t1 > t0). Returns y(t1).
pub fn integrate<const N: usize, F, H>(
    f: F,
    t0: f64,
    t1: f64,
    y0: [f64; N],
    opts: &Dp45Options,
    mut on_step: H,
) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    H: FnMut(f64, &mut [f64; N]) -> Result<()>,
{
    debug_assert!(t1 > t0);
    let mut t = t0;
    let mut y = y0;
    let mut dt = (t1 - t0).min(opts.max_dt) * 0.01;

    let combine = |y: &[f64; N], ks: &[[f64; N]], ws: &[f64], dt: f64| -> [f64; N] {
        let mut out = *y;
        for (k, w) in ks.iter().zip(ws) {
            for i in 0..N {
                out[i] += dt * w * k[i];
            }
        }
        out
    };

    for _ in 0..opts.max_steps {
        if t >= t1 {
            return Ok(y);
        }
        dt = dt.min(t1 - t).min(opts.max_dt);
        if dt < opts.min_dt {
            return Err(Error::StepUnderflow { t });
        }

        let k1 = f(t, &y);
        let k2 = f(t + dt / 5.0, &combine(&y, &[k1], &A2, dt));
        let k3 = f(t + 0.3 * dt, &combine(&y, &[k1, k2], &A3, dt));
        let k4 = f(t + 0.8 * dt, &combine(&y, &[k1, k2, k3], &A4, dt));
        let k5 = f(t + 8.0 / 9.0 * dt, &combine(&y, &[k1, k2, k3, k4], &A5, dt));
        let k6 = f(t + dt, &combine(&y, &[k1, k2, k3, k4, k5], &A6, dt));
        let y_new = combine(&y, &[k1, k2, k3, k4, k5, k6], &B, dt);
        let k7 = f(t + dt, &y_new);

        let ks = [k1, k2, k3, k4, k5, k6, k7];
        // error measured against the state max-norm: components of one state
        // routinely pass through zero (oscillations) and must not stall the
        // controller individually
        let mut ymax = 0.0f64;
        for i in 0..N {
            ymax = ymax.max(y[i].abs()).max(y_new[i].abs());
        }
        let scale = opts.abs_tol + opts.rel_tol * ymax;
        let mut err_sq = 0.0;
        for i in 0..N {
            let mut e = 0.0;
            for (k, w) in ks.iter().zip(&E) {
                e += w * k[i];
            }
            e *= dt;
            err_sq += (e / scale) * (e / scale);
        }
        let err = (err_sq / N as f64).sqrt();

        if !err.is_finite() {
            dt *= 0.2;
            continue;
        }
        if err <= 1.0 {
            t += dt;
            y = y_new;
            on_step(t, &mut y)?;
            dt *= (0.9 * err.max(1e-30).powf(-0.2)).clamp(0.2, 5.0);
        } else {
            dt *= (0.9 * err.powf(-0.2)).clamp(0.2, 0.9);
        }
    }
    Err(Error::NonConvergence { what: "runge-kutta step budget", budget: opts.max_steps })
}
