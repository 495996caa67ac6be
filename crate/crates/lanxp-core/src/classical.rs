//! Planar charged-particle dynamics in a uniform magnetic field with the
//! hyperbolic potential φ = −λxy: normal modes, trajectory integration, the
//! mode-diagonalizing canonical map, coherent gyration, and the two action
//! contributions behind the corrected state count.

use std::f64::consts::PI;

use crate::counting::{semiclassical_count, HigherLevelParams};
use crate::error::{Error, Result};
use crate::geometry::ModelGeometry;
use crate::quad;
use crate::rk45::{self, Dp45Options};

/// Dimensionful inputs of the planar model. Any self-consistent unit system
/// works; tests use B = μ = e = c = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub b_field: f64,
    pub lambda: f64,
    pub mu: f64,
    pub e_charge: f64,
    pub c_light: f64,
}

impl PhysicalParams {
    pub fn new(b_field: f64, lambda: f64, mu: f64, e_charge: f64, c_light: f64) -> Result<PhysicalParams> {
        let p = PhysicalParams { b_field, lambda, mu, e_charge, c_light };
        if !(p.b_field > 0.0 && p.mu > 0.0 && p.e_charge > 0.0 && p.c_light > 0.0)
            || !(p.lambda >= 0.0)
            || !p.mixing_angle().is_finite()
        {
            return Err(Error::Domain(format!("invalid physical parameters {p:?}")));
        }
        Ok(p)
    }

    /// Bare cyclotron frequency eB/μc.
    pub fn omega0(&self) -> f64 {
        self.e_charge * self.b_field / (self.mu * self.c_light)
    }

    /// ϑ from sinh(2ϑ) = 2λμc²/(eB²).
    pub fn mixing_angle(&self) -> f64 {
        let s = 2.0 * self.lambda * self.mu * self.c_light * self.c_light
            / (self.e_charge * self.b_field * self.b_field);
        0.5 * s.asinh()
    }
}

/// (ω_c, |ω_h|) = eB/μc · (cosh ϑ, sinh ϑ). The hyperbolic frequency is
/// imaginary; its magnitude is returned.
pub fn normal_mode_frequencies(p: &PhysicalParams) -> (f64, f64) {
    let theta = p.mixing_angle();
    (p.omega0() * theta.cosh(), p.omega0() * theta.sinh())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub x: f64,
    pub y: f64,
    pub p_x: f64,
    pub p_y: f64,
    pub t: f64,
}

impl PhaseState {
    pub fn new(x: f64, y: f64, p_x: f64, p_y: f64) -> PhaseState {
        PhaseState { x, y, p_x, p_y, t: 0.0 }
    }
}

/// H = (1/2μ)[p_x² + (p_y + (eB/c)x)²] + eλxy.
pub fn hamiltonian(s: &PhaseState, p: &PhysicalParams) -> f64 {
    let shifted = s.p_y + p.e_charge * p.b_field / p.c_light * s.x;
    (s.p_x * s.p_x + shifted * shifted) / (2.0 * p.mu) + p.e_charge * p.lambda * s.x * s.y
}

/// The same Hamiltonian in ħ = ℓ = μ = 1 units (eB/c = 1), with the
/// hyperbolic coupling given directly.
pub fn hamiltonian_landau(s: &PhaseState, coupling: f64) -> f64 {
    let shifted = s.p_y + s.x;
    0.5 * (s.p_x * s.p_x + shifted * shifted) + coupling * s.x * s.y
}

/// Mode form γ/2·(p² + q²) + QP, energies measured in units of |ω_h|.
pub fn hamiltonian_modes(q: f64, p: f64, big_q: f64, big_p: f64, gamma: f64) -> f64 {
    0.5 * gamma * (p * p + q * q) + big_q * big_p
}

/// The mode-diagonalizing map in ħ = ℓ = 1 units:
/// (q, p, Q, P) = (x + p_y, p_x, −p_y, y + p_x).
pub fn canonical_transform(s: &PhaseState) -> (f64, f64, f64, f64) {
    (s.x + s.p_y, s.p_x, -s.p_y, s.y + s.p_x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<PhaseState>,
    pub energy_series: Vec<f64>,
}

const BLOWUP_LIMIT: f64 = 1e9;

/// Integrates Hamilton's equations of the planar model with an adaptive
/// embedded Runge–Kutta stepper, recording every accepted step.
pub fn integrate_trajectory(s0: &PhaseState, p: &PhysicalParams, t_final: f64, tol: f64) -> Result<Trajectory> {
    if !(t_final > 0.0) {
        return Err(Error::Domain(format!("horizon must be positive, got {t_final}")));
    }
    if !(tol > 1e-14 && tol < 1e-6) {
        return Err(Error::Domain(format!("tolerance {tol} outside (1e-14, 1e-6)")));
    }
    let omega0 = p.omega0();
    let eb_c = p.e_charge * p.b_field / p.c_light;
    let e_lambda = p.e_charge * p.lambda;
    let mu = p.mu;
    let field = move |_t: f64, y: &[f64; 4]| -> [f64; 4] {
        let shifted = y[3] + eb_c * y[0];
        [
            y[2] / mu,
            shifted / mu,
            -omega0 * shifted - e_lambda * y[1],
            -e_lambda * y[0],
        ]
    };
    let record = |t: f64, y: &[f64; 4], tr: &mut Trajectory| {
        let s = PhaseState { x: y[0], y: y[1], p_x: y[2], p_y: y[3], t };
        tr.energy_series.push(hamiltonian(&s, p));
        tr.samples.push(s);
    };

    let mut tr = Trajectory { samples: Vec::new(), energy_series: Vec::new() };
    let y0 = [s0.x, s0.y, s0.p_x, s0.p_y];
    record(0.0, &y0, &mut tr);
    let opts = Dp45Options { rel_tol: tol, abs_tol: tol * 1e-3, ..Dp45Options::default() };
    rk45::integrate(field, 0.0, t_final, y0, &opts, |t, y| {
        if y[0].abs() > BLOWUP_LIMIT || y[1].abs() > BLOWUP_LIMIT {
            return Err(Error::Overflow { what: "trajectory left the tracked region" });
        }
        record(t, y, &mut tr);
        Ok(())
    })?;
    Ok(tr)
}

/// Gyration samples (Q, q, p) with q = √2·z·cos(γ ln Q),
/// p = −√2·z·sin(γ ln Q) on a log-uniform Q grid.
pub fn coherent_trajectory(z_coh: f64, gamma: f64, q_min: f64, q_max: f64, n: usize) -> Result<Vec<(f64, f64, f64)>> {
    if !(q_min > 0.0 && q_max > q_min) || !(gamma > 0.0) || !(z_coh >= 0.0) || n < 2 {
        return Err(Error::Domain(format!(
            "gyration needs 0 < Q_min < Q_max, gamma > 0, z >= 0, n >= 2; got ({q_min}, {q_max}, {gamma}, {z_coh}, {n})"
        )));
    }
    let amp = 2f64.sqrt() * z_coh;
    let step = (q_max / q_min).ln() / (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let q_big = q_min * (i as f64 * step).exp();
            let (s, c) = (gamma * q_big.ln()).sin_cos();
            (q_big, amp * c, -amp * s)
        })
        .collect())
}

/// ∮ p dq over exactly one gyration starting at Q = q_start, by adaptive
/// quadrature of 2z²γ·sin²(γ ln Q)/Q.
pub fn gyration_action(z_coh: f64, gamma: f64, q_start: f64) -> Result<f64> {
    if !(q_start > 0.0 && gamma > 0.0 && z_coh >= 0.0) {
        return Err(Error::Domain(format!(
            "gyration action needs Q > 0, gamma > 0, z >= 0; got ({q_start}, {gamma}, {z_coh})"
        )));
    }
    let q_end = q_start * (2.0 * PI / gamma).exp();
    quad::integrate_real(
        |q| {
            let s = (gamma * q.ln()).sin();
            2.0 * z_coh * z_coh * gamma * s * s / q
        },
        q_start,
        q_end,
        1e-12,
        1e-15,
        100_000,
    )
}

/// Both action contributions at energy E, in units with 2πħ = 2π:
/// the hyperbolic term ∮P dQ as the phase-space area over 2πℓ² (times 2π),
/// and the gyration term ∮p dq integrated along one box traversal
/// Q ∈ (Eℓ²/L, L).
pub fn action_integral(e: f64, geom: &ModelGeometry, hl: &HigherLevelParams) -> Result<(f64, f64)> {
    hl.validate()?;
    if !(e > 0.0) || e > geom.e_max() {
        return Err(Error::NonClosure { t: e });
    }
    let action_q_big = 2.0 * PI * semiclassical_count(e, geom)?;
    let q_lo = e * geom.ell() * geom.ell() / geom.l();
    let z2g = 2.0 * hl.z_coh * hl.z_coh * hl.gamma;
    let action_q = if hl.z_coh == 0.0 {
        0.0
    } else {
        quad::integrate_real(
            |q| {
                let s = (hl.gamma * q.ln()).sin();
                z2g * s * s / q
            },
            q_lo,
            geom.l(),
            1e-11,
            1e-14,
            400_000,
        )?
    };
    Ok((action_q_big, action_q))
}
