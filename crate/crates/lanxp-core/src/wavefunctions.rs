//! Exact eigenfunctions of the lowest-level model, their large-argument edge
//! forms, the twisted-boundary residual, and field-grid emission.
//!
//! Each parity sector has a closed form: a Gaussian times a confluent
//! hypergeometric factor in the complex combination (x − iy)²/2ℓ² (the odd
//! sector carries an extra prefactor x − iy). The same functions arise as a
//! half-line superposition of scale eigenstates, which we also evaluate by
//! quadrature as an independent oracle.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::accuracy::AccuracySpec;
use crate::error::{Error, Result};
use crate::exec;
use crate::geometry::ModelGeometry;
use crate::quad;
use crate::special::kummer::{kummer_scaled, Scaled};
use crate::special::log_gamma::log_gamma;
use crate::spectrum::Parity;

/// How the free constant in front of each eigenfunction is fixed. The
/// closed forms carry an arbitrary constant; `UnitConstant` sets it to 1.
/// `SupOne` rescales a sampled field so its largest magnitude is 1 — it
/// binds to a concrete grid (see [`FieldGrid::apply_normalization`]);
/// pointwise evaluation always uses the unit constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizationConvention {
    UnitConstant,
    SupOne,
}

/// Scale eigenstates of definite parity: Φ⁺ = |Q|^{−1/2+iE},
/// Φ⁻ = sign(Q)|Q|^{−1/2+iE}.
pub fn phi_parity(q: f64, e: f64, parity: Parity) -> Result<Complex64> {
    if q == 0.0 || !q.is_finite() {
        return Err(Error::Singular(format!("scale eigenstate undefined at Q = {q}")));
    }
    let ln_q = q.abs().ln();
    let v = Complex64::from_polar((-0.5 * ln_q).exp(), e * ln_q);
    Ok(match parity {
        Parity::Even => v,
        Parity::Odd => q.signum() * v,
    })
}

/// ψ with magnitude split out, so edge arguments (where the hypergeometric
/// factor is e^{L²/2ℓ²}-large against the Gaussian) stay representable.
pub fn psi_scaled(x: f64, y: f64, e: f64, geom: &ModelGeometry, parity: Parity) -> Result<Scaled> {
    if !(x.is_finite() && y.is_finite() && e.is_finite()) {
        return Err(Error::Domain(format!("non-finite field point ({x}, {y}) or E = {e}")));
    }
    let ell2 = geom.ell() * geom.ell();
    let zc = Complex64::new(x, -y);
    let arg = zc * zc / (2.0 * ell2);
    let acc = AccuracySpec::default();
    let (a, b, prefactor) = match parity {
        Parity::Even => (Complex64::new(0.25, 0.5 * e), Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0)),
        Parity::Odd => (Complex64::new(0.75, 0.5 * e), Complex64::new(1.5, 0.0), zc),
    };
    let m = kummer_scaled(a, b, arg, &acc)?;
    Ok(m.mul(&Scaled::from_c64(prefactor)).scale_exp(-x * x / (2.0 * ell2)))
}

/// Closed-form eigenfunction value at one point.
pub fn psi_closed_form(
    x: f64,
    y: f64,
    e: f64,
    geom: &ModelGeometry,
    parity: Parity,
    norm: NormalizationConvention,
) -> Result<Complex64> {
    // both conventions use C = 1 pointwise; SupOne rescales grids on assembly
    let _ = norm;
    psi_scaled(x, y, e, geom, parity)?.to_c64()
}

/// The superposition integral ∫ dQ e^{−iQy/ℓ²} e^{−(x−Q)²/2ℓ²} Φ±(Q),
/// evaluated by adaptive quadrature. The endpoint singularity |Q|^{−1/2}
/// is removed by Q = ±u²; below u = δ the slowly varying part is frozen at
/// u = 0 and the remaining u^{2iE} integrated analytically. Agrees with
/// the closed form up to one constant per (E, parity).
pub fn psi_integral_rep(x: f64, y: f64, e: f64, geom: &ModelGeometry, parity: Parity) -> Result<Complex64> {
    if !(x.is_finite() && y.is_finite() && e.is_finite()) {
        return Err(Error::Domain(format!("non-finite field point ({x}, {y}) or E = {e}")));
    }
    let ell = geom.ell();
    let ell2 = ell * ell;
    let window = 12.0 * ell;
    let delta = 1e-5 * ell.sqrt();

    let branch = |sigma: f64| -> Result<Complex64> {
        let top = ((sigma * x + window).max(4.0 * delta * delta)).sqrt();
        quad::integrate_complex(
            |u| {
                let q = sigma * u * u;
                let gauss = (-(x - q) * (x - q) / (2.0 * ell2)).exp();
                2.0 * gauss * Complex64::from_polar(1.0, 2.0 * e * u.ln() - q * y / ell2)
            },
            delta,
            top,
            1e-10,
            // the absolute floor reflects the cancellation noise of the
            // oscillatory integrand; demanding less drains the panel budget
            // at points where the branch value sits below roundoff
            5e-14,
            400_000,
        )
    };
    // ∫₀^δ ≈ s(0)·δ^{1+2iE}/(1+2iE) with s(0) = 2e^{−x²/2ℓ²}; the next term
    // of s is O(u²), so the neglect is O(δ³)
    let strip = 2.0 * (-x * x / (2.0 * ell2)).exp() * delta
        * Complex64::from_polar(1.0, 2.0 * e * delta.ln())
        / Complex64::new(1.0, 2.0 * e);
    let plus = branch(1.0)? + strip;
    let minus = branch(-1.0)? + strip;
    Ok(plus + parity.sign() * minus)
}

/// Which box edge an asymptotic value refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    /// the x = L edge; the evaluation point is (L, x)
    XEdge,
    /// the y = L edge; the evaluation point is (x, L)
    YEdge,
}

/// Large-L/ℓ edge value of ψ at (L, x) or (x, L): Gaussian and travelling
/// phase times a Γ-ratio and the power (L²/2ℓ²)^{(−1±2iE)/4·(parity weight)}.
pub fn edge_asymptotic(x: f64, e: f64, geom: &ModelGeometry, parity: Parity, edge: Edge) -> Result<Complex64> {
    if geom.l() < 10.0 * geom.ell() {
        return Err(Error::Domain(format!(
            "edge forms need L/ell >= 10, got {}",
            geom.l() / geom.ell()
        )));
    }
    let ell2 = geom.ell() * geom.ell();
    let l = geom.l();
    let log_ratio = geom.log_odd_ratio(); // ln(L²/2ℓ²), shared by both sectors
    let (half, gamma_num) = match parity {
        Parity::Even => (0.25, log_gamma(Complex64::new(0.5, 0.0))?),
        Parity::Odd => (0.75, log_gamma(Complex64::new(1.5, 0.0))?),
    };
    let conj_sign = match edge {
        Edge::XEdge => 1.0,
        Edge::YEdge => -1.0,
    };
    let mut w = gamma_num - log_gamma(Complex64::new(half, conj_sign * 0.5 * e))?
        + Complex64::new(-half, conj_sign * 0.5 * e) * log_ratio;
    if parity == Parity::Odd {
        w += l.ln();
        if edge == Edge::YEdge {
            w += Complex64::new(0.0, -FRAC_PI_2); // the −i prefactor
        }
    }
    let travel = if edge == Edge::XEdge { -x * l / ell2 } else { 0.0 };
    Scaled {
        value: Complex64::from_polar(1.0, w.im + travel),
        log_scale: w.re - x * x / (2.0 * ell2),
    }
    .to_c64()
}

fn twist_phase(x: f64, e_parity: Parity, geom: &ModelGeometry) -> Complex64 {
    let mut phase = geom.l() * x / (geom.ell() * geom.ell());
    if e_parity == Parity::Odd {
        phase -= FRAC_PI_2; // e^{iπ(η−1)/4} at η = −1
    }
    Complex64::from_polar(1.0, phase)
}

/// Twisted-boundary defect in the edge forms: the worst relative mismatch of
/// ψ(x, L) against the phase-translated ψ(L, x) over the sample points.
/// Vanishes exactly when the sector phase sits on a quantization branch.
pub fn boundary_residual(e: f64, geom: &ModelGeometry, parity: Parity, x_samples: &[f64]) -> Result<f64> {
    residual_over_samples(geom, parity, x_samples, |x, edge| {
        edge_asymptotic(x, e, geom, parity, edge)
    })
}

/// Same defect measured on the exact closed form instead of the edge forms;
/// decays as the box grows at a fixed spectral branch.
pub fn boundary_residual_exact(e: f64, geom: &ModelGeometry, parity: Parity, x_samples: &[f64]) -> Result<f64> {
    residual_over_samples(geom, parity, x_samples, |x, edge| {
        let (px, py) = match edge {
            Edge::XEdge => (geom.l(), x),
            Edge::YEdge => (x, geom.l()),
        };
        psi_closed_form(px, py, e, geom, parity, NormalizationConvention::UnitConstant)
    })
}

fn residual_over_samples<F>(
    geom: &ModelGeometry,
    parity: Parity,
    x_samples: &[f64],
    eval: F,
) -> Result<f64>
where
    F: Fn(f64, Edge) -> Result<Complex64>,
{
    if x_samples.is_empty() {
        return Err(Error::Domain("boundary residual needs at least one sample".into()));
    }
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for &x in x_samples {
        if !(x > 0.0 && x < geom.l()) {
            return Err(Error::Domain(format!("boundary sample {x} outside (0, L)")));
        }
        let at_y_edge = eval(x, Edge::YEdge)?;
        let at_x_edge = eval(x, Edge::XEdge)?;
        let defect = (at_y_edge - twist_phase(x, parity, geom) * at_x_edge).norm();
        worst = worst.max(defect);
        scale = scale.max(at_y_edge.norm()).max(at_x_edge.norm());
    }
    if scale == 0.0 {
        return Err(Error::Singular("all boundary samples vanished".into()));
    }
    Ok(worst / scale)
}

/// Sampled eigenfunction over a rectangle, row-major with x fastest:
/// `values[j·n_x + i] = ψ(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub n_x: usize,
    pub n_y: usize,
    pub values: Vec<Complex64>,
    pub e: f64,
    pub parity: Parity,
}

impl FieldGrid {
    pub fn x_at(&self, i: usize) -> f64 {
        grid_coord(self.x_min, self.x_max, self.n_x, i)
    }

    pub fn y_at(&self, j: usize) -> f64 {
        grid_coord(self.y_min, self.y_max, self.n_y, j)
    }

    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        self.values[j * self.n_x + i]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Applies the sup convention in place; the unit convention is a no-op.
    pub fn apply_normalization(&mut self, norm: NormalizationConvention) {
        if norm == NormalizationConvention::SupOne {
            let sup = self.max_abs();
            if sup > 0.0 {
                for v in &mut self.values {
                    *v /= sup;
                }
            }
        }
    }

    /// Indices of the largest-magnitude cell in the open quadrant x, y > 0.
    pub fn ridge_cell(&self) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), f64)> = None;
        for j in 0..self.n_y {
            if self.y_at(j) <= 0.0 {
                continue;
            }
            for i in 0..self.n_x {
                if self.x_at(i) <= 0.0 {
                    continue;
                }
                let m = self.value(i, j).norm();
                if best.map_or(true, |(_, b)| m > b) {
                    best = Some(((i, j), m));
                }
            }
        }
        best.map(|(ij, _)| ij)
    }

    /// Perpendicular distance, in cell units, from the ridge cell to the
    /// classical curve xy = Eℓ².
    pub fn ridge_deviation_cells(&self, ell: f64) -> Option<f64> {
        let (i, j) = self.ridge_cell()?;
        let (x, y) = (self.x_at(i), self.y_at(j));
        let h = (self.x_max - self.x_min) / (self.n_x - 1) as f64;
        Some((x * y - self.e * ell * ell).abs() / x.hypot(y) / h)
    }
}

fn grid_coord(min: f64, max: f64, n: usize, i: usize) -> f64 {
    // midpoint-symmetric form so index reflection negates the coordinate
    // exactly on symmetric ranges
    let c = (n - 1) as f64 / 2.0;
    let h = (max - min) / (n - 1) as f64;
    0.5 * (min + max) + (i as f64 - c) * h
}

/// Samples the closed form on the symmetric n×n plotting window
/// [−10ℓ, 10ℓ]².
pub fn grid_field(e: f64, geom: &ModelGeometry, parity: Parity, n: usize) -> Result<FieldGrid> {
    if n < 16 {
        return Err(Error::Domain(format!("field grid needs n >= 16, got {n}")));
    }
    let half = 10.0 * geom.ell();
    let cells: Vec<usize> = (0..n * n).collect();
    let values: Vec<Complex64> = exec::map_collect(&cells, |&idx| {
        let (i, j) = (idx % n, idx / n);
        let x = grid_coord(-half, half, n, i);
        let y = grid_coord(-half, half, n, j);
        psi_closed_form(x, y, e, geom, parity, NormalizationConvention::UnitConstant)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    Ok(FieldGrid {
        x_min: -half,
        x_max: half,
        y_min: -half,
        y_max: half,
        n_x: n,
        n_y: n,
        values,
        e,
        parity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::solve_spectrum;

    fn unit() -> NormalizationConvention {
        NormalizationConvention::UnitConstant
    }

    #[test]
    fn scale_eigenstate_anchor_values() {
        assert_eq!(phi_parity(1.0, 3.7, Parity::Even).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(phi_parity(-1.0, 3.7, Parity::Odd).unwrap(), Complex64::new(-1.0, 0.0));
        assert!(matches!(phi_parity(0.0, 1.0, Parity::Even), Err(Error::Singular(_))));
    }

    #[test]
    fn scale_eigenstate_satisfies_its_eigen_equation() {
        // central-difference residual of −i(Q∂_Q + 1/2)Φ = EΦ shrinks as h²
        let (q, e) = (2.0, 7.0);
        let residual = |h: f64| -> f64 {
            let up = phi_parity(q + h, e, Parity::Even).unwrap();
            let dn = phi_parity(q - h, e, Parity::Even).unwrap();
            let mid = phi_parity(q, e, Parity::Even).unwrap();
            let d = (up - dn) / (2.0 * h);
            (-Complex64::i() * (q * d + 0.5 * mid) - e * mid).norm()
        };
        let rs: Vec<f64> = [1e-2, 1e-3, 1e-4].iter().map(|&h| residual(h)).collect();
        for w in rs.windows(2) {
            let slope = (w[0] / w[1]).ln() / 10f64.ln();
            assert!((slope - 2.0).abs() < 0.1, "order {slope}");
        }
        assert!(residual(1e-5) < 1e-8);
    }

    #[test]
    fn closed_form_parity_and_anchors() {
        let geom = ModelGeometry::default();
        let at_origin = psi_closed_form(0.0, 0.0, 10.0, &geom, Parity::Even, unit()).unwrap();
        assert!((at_origin - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(psi_closed_form(0.0, 0.0, 10.0, &geom, Parity::Odd, unit()).unwrap(), Complex64::new(0.0, 0.0));

        let pts = [(0.7, 1.3), (3.0, 2.0), (-4.5, 6.25), (8.0, -7.5)];
        for &(x, y) in &pts {
            for (parity, sign) in [(Parity::Even, 1.0), (Parity::Odd, -1.0)] {
                let v = psi_closed_form(x, y, 12.0, &geom, parity, unit()).unwrap();
                let r = psi_closed_form(-x, -y, 12.0, &geom, parity, unit()).unwrap();
                assert!(
                    (v - sign * r).norm() <= 1e-12 * v.norm(),
                    "parity broken at ({x}, {y})"
                );
            }
        }
    }

    #[test]
    fn integral_representation_matches_closed_form() {
        let geom = ModelGeometry::default();
        for (parity, e) in [(Parity::Even, 10.0), (Parity::Odd, 5.0)] {
            // fit the free constant at one point, then it must transfer
            let (x0, y0) = (3.0, 2.0);
            let c = psi_closed_form(x0, y0, e, &geom, parity, unit()).unwrap()
                / psi_integral_rep(x0, y0, e, &geom, parity).unwrap();
            for &(x, y) in &[(1.0, 0.5), (2.0, -1.0), (-0.8, 1.7), (4.0, 3.5)] {
                let closed = psi_closed_form(x, y, e, &geom, parity, unit()).unwrap();
                let via_int = c * psi_integral_rep(x, y, e, &geom, parity).unwrap();
                assert!(
                    (closed - via_int).norm() <= 1e-8 * closed.norm(),
                    "{parity} at ({x}, {y}): {closed} vs {via_int}"
                );
            }
        }
    }

    #[test]
    fn odd_integral_vanishes_at_origin() {
        let geom = ModelGeometry::default();
        let v = psi_integral_rep(0.0, 0.0, 8.0, &geom, Parity::Odd).unwrap();
        assert!(v.norm() < 1e-12, "got {v}");
    }

    #[test]
    fn even_integral_at_y_zero_has_the_real_axis_phase() {
        // at y = 0 the two branches are conjugate-symmetric in the E-phase
        // only through u^{2iE}; the combined value must match the closed
        // form's phase (M on the real axis), i.e. a constant ratio with the
        // same argument across x
        let geom = ModelGeometry::default();
        let c0 = psi_closed_form(1.0, 0.0, 5.0, &geom, Parity::Even, unit()).unwrap()
            / psi_integral_rep(1.0, 0.0, 5.0, &geom, Parity::Even).unwrap();
        for &x in &[0.5, 2.0, 3.0] {
            let c = psi_closed_form(x, 0.0, 5.0, &geom, Parity::Even, unit()).unwrap()
                / psi_integral_rep(x, 0.0, 5.0, &geom, Parity::Even).unwrap();
            assert!((c - c0).norm() < 1e-8 * c0.norm(), "ratio drifted at x = {x}");
        }
    }

    #[test]
    fn edge_forms_have_conjugate_moduli_at_zero_offset() {
        let geom = ModelGeometry::new(20.0, 1.0).unwrap();
        // the two even edges differ only by conjugation of the Γ/power pair
        // at x = 0; pointwise x = 0 is on the boundary of the sample domain,
        // so evaluate the forms directly
        let a = edge_asymptotic(0.0, 10.0, &geom, Parity::Even, Edge::XEdge).unwrap();
        let b = edge_asymptotic(0.0, 10.0, &geom, Parity::Even, Edge::YEdge).unwrap();
        assert!((a.norm() - b.norm()).abs() < 1e-13 * a.norm());
    }

    #[test]
    fn edge_moduli_scale_as_expected_when_the_box_doubles() {
        let g1 = ModelGeometry::new(20.0, 1.0).unwrap();
        let g2 = ModelGeometry::new(40.0, 1.0).unwrap();
        let ratio = |parity| {
            let a = edge_asymptotic(1.0, 10.0, &g2, parity, Edge::YEdge).unwrap().norm();
            let b = edge_asymptotic(1.0, 10.0, &g1, parity, Edge::YEdge).unwrap().norm();
            a / b
        };
        // even: (L²)^{−1/4} → 4^{−1/4}; odd: L·(L²)^{−3/4} → 2·4^{−3/4};
        // both collapse to 2^{−1/2}
        let target = 0.5f64.sqrt();
        assert!((ratio(Parity::Even) - target).abs() < 1e-13);
        assert!((ratio(Parity::Odd) - target).abs() < 1e-13);
    }

    #[test]
    fn exact_edge_values_approach_the_asymptotic_forms() {
        let x = 0.2;
        let e = 10.0;
        let mut last = f64::INFINITY;
        for l in [10.0, 20.0, 40.0] {
            let geom = ModelGeometry::new(l, 1.0).unwrap();
            let exact = psi_closed_form(l, x, e, &geom, Parity::Even, unit()).unwrap();
            let asym = edge_asymptotic(x, e, &geom, Parity::Even, Edge::XEdge).unwrap();
            let dev = (exact.norm() / asym.norm() - 1.0).abs();
            assert!(dev < last, "deviation not shrinking at L = {l}: {dev} vs {last}");
            if l >= 20.0 {
                assert!(dev < 0.03, "deviation {dev} at L = {l}");
            }
            last = dev;
        }
    }

    #[test]
    fn boundary_residual_vanishes_on_spectrum_only() {
        let geom = ModelGeometry::default();
        let samples = [0.2, 0.5, 0.8];
        for parity in [Parity::Even, Parity::Odd] {
            let recs = solve_spectrum(20.0, &geom, parity).unwrap();
            let e1 = recs[1].e_k;
            let on = boundary_residual(e1, &geom, parity, &samples).unwrap();
            assert!(on < 1e-6, "{parity} residual {on} at eigenvalue");
            let half_spacing = 0.5 * (recs[2].e_k - recs[1].e_k);
            let off = boundary_residual(e1 + half_spacing, &geom, parity, &samples).unwrap();
            assert!(off > 0.1, "{parity} residual {off} off resonance");
        }
    }

    #[test]
    fn exact_boundary_residual_decays_with_the_box() {
        // follow one spectral branch while the box grows; the defect of the
        // exact closed form under the twist must shrink
        let samples = [0.2, 0.5];
        let mut last = f64::INFINITY;
        for l in [10.0, 20.0, 40.0] {
            let geom = ModelGeometry::new(l, 1.0).unwrap();
            let e3 = solve_spectrum(15.0, &geom, Parity::Even).unwrap()[2].e_k;
            let r = boundary_residual_exact(e3, &geom, Parity::Even, &samples).unwrap();
            assert!(r < last, "exact residual grew at L = {l}: {r} vs {last}");
            last = r;
        }
    }

    #[test]
    fn grid_is_symmetric_and_centered() {
        let geom = ModelGeometry::default();
        let grid = grid_field(10.0, &geom, Parity::Even, 32).unwrap();
        assert_eq!(grid.values.len(), 32 * 32);
        for (i, j) in [(0usize, 0usize), (3, 17), (10, 4), (31, 20)] {
            let v = grid.value(i, j);
            let r = grid.value(31 - i, 31 - j);
            assert!((v - r).norm() <= 1e-10 * v.norm().max(1.0), "asymmetry at ({i}, {j})");
        }
        // odd parity on an odd grid has an exact zero at the center cell
        let odd = grid_field(10.0, &geom, Parity::Odd, 17).unwrap();
        assert_eq!(odd.value(8, 8), Complex64::new(0.0, 0.0));
        for (i, j) in [(2usize, 5usize), (13, 9)] {
            let v = odd.value(i, j);
            let r = odd.value(16 - i, 16 - j);
            assert!((v + r).norm() <= 1e-10 * v.norm().max(1.0));
        }
    }

    #[test]
    fn ridge_follows_the_classical_curve() {
        let geom = ModelGeometry::default();
        let grid = grid_field(10.0, &geom, Parity::Even, 64).unwrap();
        let dev = grid.ridge_deviation_cells(geom.ell()).unwrap();
        assert!(dev <= 1.5, "ridge {dev} cells from xy = Eℓ²");
        let (i, j) = grid.ridge_cell().unwrap();
        assert!(grid.x_at(i) > 0.0 && grid.y_at(j) > 0.0);
    }

    #[test]
    fn sup_normalization_rescales_in_place() {
        let geom = ModelGeometry::default();
        let mut grid = grid_field(6.0, &geom, Parity::Even, 16).unwrap();
        grid.apply_normalization(NormalizationConvention::SupOne);
        assert!((grid.max_abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn grid_rejects_degenerate_sizes() {
        let geom = ModelGeometry::default();
        assert!(grid_field(10.0, &geom, Parity::Even, 8).is_err());
    }
}
