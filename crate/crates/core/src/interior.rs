//! Interior evaluation of the Cauchy and Beurling transforms of a density
//! supported on the unit disk.
//!
//! Everything works angular mode by angular mode. For a density
//! `nu(rho e^{i theta}) = sum_n f_n(rho) e^{i n theta}` the Cauchy
//! transform at `z = s e^{i phi}`, |z| < 1, splits into radial moment
//! integrals of each mode,
//!
//! ```text
//! C nu(z) = 2 sum_{n<=0} z^{n-1} I_in(n,s) - 2 sum_{n>=1} z^{n-1} I_out(n,s),
//! I_in(n,s)  = int_0^s f_n(rho) rho^{1-n} d rho,
//! I_out(n,s) = int_s^1 f_n(rho) rho^{1-n} d rho,
//! ```
//!
//! and differentiating in `z` gives the Beurling transform
//!
//! ```text
//! S nu(z) = e^{-2 i phi} nu(z)
//!         + 2 sum_{n<=0} (n-1) z^{n-2} I_in(n,s)
//!         - 2 sum_{n>=1} (n-1) z^{n-2} I_out(n,s).
//! ```
//!
//! All radial integrals are evaluated in the scaled form with weight
//! `(rho/s)^{1-n}`, which is bounded by one on its integration range for
//! every mode, so large mode numbers never overflow and rounding noise in
//! the small modes is never amplified. Radial quadrature is composite
//! Gauss-Legendre; the partial panel containing the target radius is
//! integrated against the panel's polynomial interpolant. Accuracy is set
//! by the panel count and the angular mode cutoff; `tests` exercise the
//! closed-form monomial images `S(w^a conj(w)^b)` as the oracle.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grids::{fft_forward, fft_inverse, gauss_legendre, pairwise_sum_complex, RadialRule};

/// Panelled polar grid for the operator calculus.
#[derive(Debug, Clone)]
pub struct OperatorGrid {
    pub edges: Vec<f64>,
    pub nodes_per_panel: usize,
    pub angles: usize,
    /// All radial nodes, increasing.
    pub radii: Vec<f64>,
    /// Plain `d rho` weights per node.
    w_dr: Vec<f64>,
    /// `2 rho d rho` weights per node (disk measure).
    w_area: Vec<f64>,
    /// Barycentric weights on the reference panel [-1, 1].
    bary: Vec<f64>,
    /// Reference Gauss-Legendre nodes on [-1, 1].
    ref_nodes: Vec<f64>,
    /// Small rule for partial-panel integrals.
    sub_nodes: Vec<f64>,
    sub_weights: Vec<f64>,
}

impl OperatorGrid {
    pub fn new(panels: usize, nodes_per_panel: usize, angles: usize) -> Result<Self> {
        if !(angles >= 8 && angles.is_power_of_two()) {
            return Err(Error::InvalidGrid("angular count must be a power of two >= 8"));
        }
        let edges: Vec<f64> = (0..=panels).map(|p| p as f64 / panels as f64).collect();
        let (ref_nodes, ref_weights) = gauss_legendre(nodes_per_panel);
        let mut radii = Vec::new();
        let mut w_dr = Vec::new();
        let mut w_area = Vec::new();
        for e in edges.windows(2) {
            let half = 0.5 * (e[1] - e[0]);
            let mid = 0.5 * (e[0] + e[1]);
            for k in 0..nodes_per_panel {
                let r = mid + half * ref_nodes[k];
                radii.push(r);
                w_dr.push(ref_weights[k] * half);
                w_area.push(ref_weights[k] * half * 2.0 * r);
            }
        }
        // Barycentric weights for the reference nodes.
        let mut bary = vec![0.0; nodes_per_panel];
        for k in 0..nodes_per_panel {
            let mut w = 1.0;
            for l in 0..nodes_per_panel {
                if l != k {
                    w /= ref_nodes[k] - ref_nodes[l];
                }
            }
            bary[k] = w;
        }
        let (sub_nodes, sub_weights) = gauss_legendre(12);
        Ok(OperatorGrid {
            edges,
            nodes_per_panel,
            angles,
            radii,
            w_dr,
            w_area,
            bary,
            ref_nodes,
            sub_nodes,
            sub_weights,
        })
    }

    /// Workhorse default: resolves smooth symbols to ~1e-9 and keeps a
    /// full Neumann-series pass under a second.
    pub fn standard() -> Self {
        OperatorGrid::new(8, 16, 512).expect("valid standard operator grid")
    }

    pub fn radial_rule(&self) -> RadialRule {
        RadialRule { nodes: self.radii.clone(), weights: self.w_area.clone() }
    }

    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        Complex64::from_polar(self.radii[i], 2.0 * PI * j as f64 / self.angles as f64)
    }

    pub fn panel_of(&self, node_index: usize) -> usize {
        node_index / self.nodes_per_panel
    }

    /// Evaluate the interpolant of panel values at radius `r` inside the panel.
    fn panel_interp(&self, panel: usize, values: &[Complex64], r: f64) -> Complex64 {
        let (a, b) = (self.edges[panel], self.edges[panel + 1]);
        let x = (2.0 * r - a - b) / (b - a);
        let base = panel * self.nodes_per_panel;
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for k in 0..self.nodes_per_panel {
            let d = x - self.ref_nodes[k];
            if d.abs() < 1e-14 {
                return values[base + k];
            }
            let t = self.bary[k] / d;
            num += values[base + k] * t;
            den += t;
        }
        num / den
    }
}

/// Two-sided angular modes of a field sampled on an operator grid,
/// mode-major: `modes[m][i]` is mode `n = m - half + 1` at radius i... see
/// `mode_index`.
pub struct ModeField {
    /// modes[k][i] = mode n(k) at radius index i.
    pub modes: Vec<Vec<Complex64>>,
    pub angles: usize,
}

/// Mode numbers run through -(N/2 - 1) ..= N/2 - 1; the Nyquist bin is dropped.
pub fn mode_numbers(angles: usize) -> impl Iterator<Item = i64> {
    let half = (angles / 2) as i64;
    (-(half - 1))..=(half - 1)
}

/// Angular FFT of grid values (radius-major rows) into two-sided modes.
pub fn analyze_modes(grid: &OperatorGrid, values: &[Complex64]) -> ModeField {
    let n = grid.angles;
    let nr = grid.radii.len();
    assert_eq!(values.len(), n * nr);
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(nr);
    for i in 0..nr {
        let mut row = values[i * n..(i + 1) * n].to_vec();
        fft_forward(&mut row);
        for v in row.iter_mut() {
            *v /= n as f64;
        }
        rows.push(row);
    }
    let modes = mode_numbers(n)
        .map(|nn| {
            let bin = nn.rem_euclid(n as i64) as usize;
            (0..nr).map(|i| rows[i][bin]).collect()
        })
        .collect();
    ModeField { modes, angles: n }
}

/// Disk-measure moments `int nu(w) w^m dA(w)` for m = 0..len-1 from modes.
pub fn moments_from_modes(grid: &OperatorGrid, mf: &ModeField, len: usize) -> Vec<Complex64> {
    let half = (grid.angles / 2) as i64;
    let mut out = Vec::with_capacity(len);
    for m in 0..len as i64 {
        if m > half - 1 {
            out.push(Complex64::new(0.0, 0.0));
            continue;
        }
        // w^m picks angular mode -m.
        let row = &mf.modes[(-m + half - 1) as usize];
        let mut terms = Vec::with_capacity(row.len());
        for (i, &v) in row.iter().enumerate() {
            terms.push(v * grid.w_area[i] * grid.radii[i].powi(m as i32));
        }
        out.push(pairwise_sum_complex(&terms));
    }
    out
}

/// Conjugate moments `int nu(w) conj(w)^m dA(w)`.
pub fn conj_moments_from_modes(grid: &OperatorGrid, mf: &ModeField, len: usize) -> Vec<Complex64> {
    let half = (grid.angles / 2) as i64;
    let mut out = Vec::with_capacity(len);
    for m in 0..len as i64 {
        if m > half - 1 {
            out.push(Complex64::new(0.0, 0.0));
            continue;
        }
        let row = &mf.modes[(m + half - 1) as usize];
        let mut terms = Vec::with_capacity(row.len());
        for (i, &v) in row.iter().enumerate() {
            terms.push(v * grid.w_area[i] * grid.radii[i].powi(m as i32));
        }
        out.push(pairwise_sum_complex(&terms));
    }
    out
}

/// `(rho/s)^(1-n)` on the range where it is <= 1, computed through logs so
/// that extreme modes underflow to zero instead of overflowing.
#[inline]
fn scaled_pow(log_ratio: f64, one_minus_n: f64) -> f64 {
    let e = one_minus_n * log_ratio;
    debug_assert!(e < 1e-9, "scaled power must not exceed one");
    if e < -745.0 {
        0.0
    } else {
        e.exp()
    }
}

/// Scaled partial radial integrals for one mode:
/// `T_in(i)  = (1/s_i) int_0^{s_i} f(rho) (rho/s_i)^{1-n} d rho` for n <= 0,
/// `T_out(i) = (1/s_i) int_{s_i}^1 f(rho) (rho/s_i)^{1-n} d rho` for n >= 1.
fn scaled_partials(grid: &OperatorGrid, f: &[Complex64], n: i64, log_r: &[f64]) -> Vec<Complex64> {
    let nr = grid.radii.len();
    let npp = grid.nodes_per_panel;
    let omn = (1 - n) as f64;
    let inward = n <= 0;
    let mut out = vec![Complex64::new(0.0, 0.0); nr];

    for i in 0..nr {
        let s = grid.radii[i];
        let panel = grid.panel_of(i);
        let mut acc = Complex64::new(0.0, 0.0);
        // Full panels strictly inside the integration range.
        if inward {
            for k in 0..panel * npp {
                let w = scaled_pow(log_r[k] - log_r[i], omn);
                acc += f[k] * (grid.w_dr[k] * w);
            }
        } else {
            for k in (panel + 1) * npp..nr {
                let w = scaled_pow(log_r[k] - log_r[i], omn);
                acc += f[k] * (grid.w_dr[k] * w);
            }
        }
        // Partial panel from the edge up to (or down from) the target.
        let (a, b) = if inward { (grid.edges[panel], s) } else { (s, grid.edges[panel + 1]) };
        if b - a > 1e-300 {
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for q in 0..grid.sub_nodes.len() {
                let rho = mid + half * grid.sub_nodes[q];
                let w = scaled_pow(rho.ln() - log_r[i], omn);
                let fv = grid.panel_interp(panel, f, rho);
                acc += fv * (grid.sub_weights[q] * half * w);
            }
        }
        out[i] = acc / s;
    }
    out
}

/// Beurling transform of a grid density, evaluated on the same grid.
pub fn beurling_interior(grid: &OperatorGrid, values: &[Complex64]) -> Vec<Complex64> {
    use rayon::prelude::*;

    let n_ang = grid.angles;
    let nr = grid.radii.len();
    let mf = analyze_modes(grid, values);
    let log_r: Vec<f64> = grid.radii.iter().map(|r| r.ln()).collect();
    let half = (n_ang / 2) as i64;

    // Angular coefficient of e^{i(n-2)phi} at each radius, summed over
    // modes. Modes at the rounding floor contribute nothing and are
    // skipped; smooth symbols keep only a handful alive.
    let global_max = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mode_floor = 1e-15 * global_max;
    let contribs: Vec<(i64, Vec<Complex64>)> = mode_numbers(n_ang)
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter_map(|nn| {
            let f = &mf.modes[(nn + half - 1) as usize];
            if f.iter().map(|v| v.norm()).fold(0.0, f64::max) <= mode_floor {
                return None;
            }
            let t = scaled_partials(grid, f, nn, &log_r);
            let factor = 2.0 * (nn - 1) as f64 * if nn <= 0 { 1.0 } else { -1.0 };
            let col: Vec<Complex64> = t.iter().map(|v| v * factor).collect();
            Some((nn, col))
        })
        .collect();

    let mut out = vec![Complex64::new(0.0, 0.0); nr * n_ang];
    let mut bins = vec![Complex64::new(0.0, 0.0); n_ang];
    for i in 0..nr {
        bins.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
        for (nn, col) in &contribs {
            let bin = (nn - 2).rem_euclid(n_ang as i64) as usize;
            bins[bin] += col[i];
        }
        let mut row = bins.clone();
        fft_inverse(&mut row);
        for j in 0..n_ang {
            let phi = 2.0 * PI * j as f64 / n_ang as f64;
            let local = Complex64::from_polar(1.0, -2.0 * phi) * values[i * n_ang + j];
            out[i * n_ang + j] = row[j] + local;
        }
    }
    out
}

/// Cauchy transform of a grid density at one interior point.
pub fn cauchy_interior_at(grid: &OperatorGrid, values: &[Complex64], z: Complex64) -> Complex64 {
    let s = z.norm();
    if s == 0.0 {
        // Only mode 1 survives: C nu(0) = -2 int_0^1 f_1(rho) d rho.
        let mf = analyze_modes(grid, values);
        let half = (grid.angles / 2) as i64;
        let f1 = &mf.modes[half as usize];
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &v) in f1.iter().enumerate() {
            acc += v * grid.w_dr[k];
        }
        return -2.0 * acc;
    }
    let mf = analyze_modes(grid, values);
    let half = (grid.angles / 2) as i64;
    let log_s = s.ln();
    let phi = z.arg();
    // Locate the panel containing s.
    let panel = grid
        .edges
        .windows(2)
        .position(|e| s >= e[0] && s <= e[1])
        .expect("target inside [0, 1]");

    let mut total = Complex64::new(0.0, 0.0);
    for nn in mode_numbers(grid.angles) {
        let f = &mf.modes[(nn + half - 1) as usize];
        let omn = (1 - nn) as f64;
        let inward = nn <= 0;
        let mut acc = Complex64::new(0.0, 0.0);
        let npp = grid.nodes_per_panel;
        let full_range = if inward { 0..panel * npp } else { (panel + 1) * npp..grid.radii.len() };
        for k in full_range {
            let w = scaled_pow(grid.radii[k].ln() - log_s, omn);
            acc += f[k] * (grid.w_dr[k] * w);
        }
        let (a, b) = if inward { (grid.edges[panel], s) } else { (s, grid.edges[panel + 1]) };
        if b - a > 1e-300 {
            let halfw = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for q in 0..grid.sub_nodes.len() {
                let rho = mid + halfw * grid.sub_nodes[q];
                let w = scaled_pow(rho.ln() - log_s, omn);
                acc += grid.panel_interp(panel, f, rho) * (grid.sub_weights[q] * halfw * w);
            }
        }
        // z^{n-1} * s^{1-n} = e^{i(n-1)phi}; sign: +2 inward, -2 outward.
        let phase = Complex64::from_polar(1.0, (nn - 1) as f64 * phi);
        let sign = if inward { 2.0 } else { -2.0 };
        total += acc * phase * sign;
    }
    total
}
