//! The integral operators: Bergman projection, Cauchy transform, Beurling
//! transform (exterior evaluation through the projection identity), and the
//! Mobius automorphisms of the disk.
//!
//! The Bergman projection is computed coefficient-wise from moments,
//! `c_j = (j+1) int mu(w) conj(w)^j dA`, never by 2-D kernel quadrature:
//! the kernel is singular as z approaches the boundary while the moments
//! are smooth integrals. Exterior Beurling values come from
//! `S mu(1/z) = -z^2 P mu*(z)` with `mu*(z) = mu(conj z)`; in moment form
//! the conjugated-node resampling of a grid symbol is the angular index
//! flip, so the identity stays usable for sampled data.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grids::{
    fft_forward, pairwise_sum_complex, DiskField, PolarGrid, PowerSeries, RadialRule,
};
use crate::interior::{self, OperatorGrid};

/// A bounded symbol on the unit disk, closed-form where possible.
#[derive(Clone)]
pub enum Symbol {
    /// Constant c.
    Const(Complex64),
    /// conj(w)^m for m >= 1.
    ConjMonomial(u32),
    /// The extremal symbol (1 - conj w)/(1 - w), unimodular on the disk.
    Mu0,
    /// The reflected extremal symbol w -> Mu0(conj w) = (1 - w)/(1 - conj w).
    Mu0Reflected,
    /// |w|^p for p > 0.
    RadialPower(f64),
    /// Unimodular phase e^{i Re p(w)} for a polynomial p.
    Phase(PowerSeries),
    /// Sampled data on a polar grid.
    Field(Arc<DiskField>),
    /// Arbitrary callable with a known sup bound.
    Custom {
        f: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
        sup: f64,
    },
}

impl std::fmt::Debug for Symbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Symbol::Const(c) => write!(f, "Const({c})"),
            Symbol::ConjMonomial(m) => write!(f, "ConjMonomial({m})"),
            Symbol::Mu0 => write!(f, "Mu0"),
            Symbol::Mu0Reflected => write!(f, "Mu0Reflected"),
            Symbol::RadialPower(p) => write!(f, "RadialPower({p})"),
            Symbol::Phase(p) => write!(f, "Phase(deg {})", p.degree()),
            Symbol::Field(_) => write!(f, "Field"),
            Symbol::Custom { sup, .. } => write!(f, "Custom(sup {sup})"),
        }
    }
}

impl Symbol {
    pub fn mu0_value(w: Complex64) -> Complex64 {
        let d = Complex64::new(1.0, 0.0) - w;
        if d.norm() < 1e-300 {
            // Removable direction: |mu0| = 1; the limit along rays exists but
            // the boundary point itself never sits on our grids.
            return Complex64::new(1.0, 0.0);
        }
        d.conj() / d
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        match self {
            Symbol::Const(c) => *c,
            Symbol::ConjMonomial(m) => w.conj().powu(*m),
            Symbol::Mu0 => Self::mu0_value(w),
            Symbol::Mu0Reflected => Self::mu0_value(w.conj()),
            Symbol::RadialPower(p) => Complex64::new(w.norm().powf(*p), 0.0),
            Symbol::Phase(poly) => {
                let v = poly.eval(w);
                Complex64::from_polar(1.0, v.re)
            }
            Symbol::Field(field) => field_eval(field, w),
            Symbol::Custom { f, .. } => f(w),
        }
    }

    /// Essential sup of |mu| (exact for the closed forms).
    pub fn sup_norm(&self) -> f64 {
        match self {
            Symbol::Const(c) => c.norm(),
            Symbol::ConjMonomial(_) => 1.0,
            Symbol::Mu0 | Symbol::Mu0Reflected => 1.0,
            Symbol::RadialPower(p) => {
                if *p >= 0.0 {
                    1.0
                } else {
                    f64::INFINITY
                }
            }
            Symbol::Phase(_) => 1.0,
            Symbol::Field(field) => field.values.iter().map(|v| v.norm()).fold(0.0, f64::max),
            Symbol::Custom { sup, .. } => *sup,
        }
    }

    /// Moments `int mu(w) w^m dA` for m = 0..len-1.
    pub fn moments(&self, len: usize) -> Vec<Complex64> {
        match self {
            Symbol::Const(c) => singleton(len, 0, *c),
            Symbol::ConjMonomial(m) => {
                // int conj(w)^m w^j dA = delta_{jm}/(m+1).
                singleton(len, *m as usize, Complex64::new(1.0 / (*m as f64 + 1.0), 0.0))
            }
            Symbol::Mu0 => {
                // Modes of mu0: (1-rho^2) rho^n for n >= 0 and -rho at n = -1,
                // so only the first two moments survive.
                let mut v = vec![Complex64::new(0.0, 0.0); len];
                if len > 0 {
                    v[0] = Complex64::new(0.5, 0.0);
                }
                if len > 1 {
                    v[1] = Complex64::new(-0.5, 0.0);
                }
                v
            }
            Symbol::Mu0Reflected => (0..len)
                .map(|j| Complex64::new(1.0 / ((j as f64 + 1.0) * (j as f64 + 2.0)), 0.0))
                .collect(),
            Symbol::RadialPower(p) => singleton(len, 0, Complex64::new(2.0 / (p + 2.0), 0.0)),
            _ => self.quadrature_moments(len, false),
        }
    }

    /// Conjugate moments `int mu(w) conj(w)^m dA` for m = 0..len-1.
    pub fn conj_moments(&self, len: usize) -> Vec<Complex64> {
        match self {
            Symbol::Const(c) => singleton(len, 0, *c),
            Symbol::ConjMonomial(_) => vec![Complex64::new(0.0, 0.0); len],
            Symbol::Mu0 => (0..len)
                .map(|j| Complex64::new(1.0 / ((j as f64 + 1.0) * (j as f64 + 2.0)), 0.0))
                .collect(),
            Symbol::Mu0Reflected => {
                let mut v = vec![Complex64::new(0.0, 0.0); len];
                if !v.is_empty() {
                    v[0] = Complex64::new(0.5, 0.0);
                }
                if len > 1 {
                    v[1] = Complex64::new(-0.5, 0.0);
                }
                v
            }
            Symbol::RadialPower(p) => singleton(len, 0, Complex64::new(2.0 / (p + 2.0), 0.0)),
            _ => self.quadrature_moments(len, true),
        }
    }

    fn quadrature_moments(&self, len: usize, conjugated: bool) -> Vec<Complex64> {
        let grid = standard_symbol_grid();
        let field = match self {
            Symbol::Field(f) => f.as_ref().clone(),
            _ => DiskField::from_fn(grid.clone(), |w| self.eval(w)).expect("finite symbol values"),
        };
        moments_of_field(&field, len, conjugated)
    }
}

fn singleton(len: usize, at: usize, value: Complex64) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); len];
    if at < len {
        v[at] = value;
    }
    v
}

fn standard_symbol_grid() -> Arc<PolarGrid> {
    use std::sync::OnceLock;
    static GRID: OnceLock<Arc<PolarGrid>> = OnceLock::new();
    GRID.get_or_init(|| Arc::new(PolarGrid::new(RadialRule::gauss(400), 4096).unwrap()))
        .clone()
}

/// Moments of a sampled field by angular FFT + radial rule. Mode m of the
/// FFT is paired with rho^m against the grid's area weights.
pub fn moments_of_field(field: &DiskField, len: usize, conjugated: bool) -> Vec<Complex64> {
    let n = field.grid.angles;
    let nr = field.grid.radial.len();
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(nr);
    for i in 0..nr {
        let mut row = field.row(i).to_vec();
        fft_forward(&mut row);
        rows.push(row);
    }
    let mut out = Vec::with_capacity(len);
    for m in 0..len {
        if m >= n / 2 {
            out.push(Complex64::new(0.0, 0.0));
            continue;
        }
        // w^m picks angular mode -m; conj(w)^m picks mode +m.
        let bin = if conjugated { m } else { (n - m) % n };
        let mut terms = Vec::with_capacity(nr);
        for i in 0..nr {
            let mode = rows[i][bin] / n as f64;
            terms.push(mode * field.grid.radial.weights[i] * field.grid.radial.nodes[i].powi(m as i32));
        }
        out.push(pairwise_sum_complex(&terms));
    }
    out
}

/// Trig interpolation in the angle, linear interpolation in the radius.
/// File-provided fields carry grid-limited accuracy by nature.
fn field_eval(field: &DiskField, w: Complex64) -> Complex64 {
    let grid = &field.grid;
    let rho = w.norm();
    let radii = &grid.radial.nodes;
    let (i0, i1, t) = if rho <= radii[0] {
        (0, 0, 0.0)
    } else if rho >= *radii.last().unwrap() {
        (radii.len() - 1, radii.len() - 1, 0.0)
    } else {
        let i1 = radii.partition_point(|r| *r < rho);
        let i0 = i1 - 1;
        (i0, i1, (rho - radii[i0]) / (radii[i1] - radii[i0]))
    };
    let theta = w.arg();
    let ang = |i: usize| -> Complex64 {
        let row = field.row(i);
        let n = grid.angles as f64;
        let x = theta / (2.0 * PI) * n;
        let j0 = x.floor() as i64;
        let s = x - j0 as f64;
        let j0 = j0.rem_euclid(grid.angles as i64) as usize;
        let j1 = (j0 + 1) % grid.angles;
        row[j0] * (1.0 - s) + row[j1] * s
    };
    let v0 = ang(i0);
    if i0 == i1 {
        v0
    } else {
        v0 * (1.0 - t) + ang(i1) * t
    }
}

/// Bergman projection as a coefficient series, plus a crude tail residual.
#[derive(Debug, Clone)]
pub struct ProjectionResult {
    pub series: PowerSeries,
    /// Magnitude of the trailing coefficients; a truncation indicator,
    /// not an error bound.
    pub residual: f64,
}

/// Coefficients `c_j = (j+1) int mu(w) conj(w)^j dA` for j = 0..=degree,
/// from the kernel expansion (1 - z conj w)^{-2} = sum (j+1) z^j conj(w)^j.
pub fn bergman_project(mu: &Symbol, degree: usize) -> Result<ProjectionResult> {
    if !mu.sup_norm().is_finite() {
        return Err(Error::SymbolNotBounded);
    }
    let moments = mu.conj_moments(degree + 1);
    let coeffs: Vec<Complex64> = moments
        .iter()
        .enumerate()
        .map(|(j, m)| m * (j as f64 + 1.0))
        .collect();
    let tail = coeffs.iter().rev().take(4).map(|c| c.norm()).fold(0.0, f64::max);
    Ok(ProjectionResult { series: PowerSeries::new(coeffs), residual: tail })
}

/// Exterior evaluations keep this margin from the support circle; closer
/// in, the Laurent tail is no longer controlled by the moment cutoff.
const EXTERIOR_MARGIN: f64 = 0.005;
const EXTERIOR_MOMENTS: usize = 2000;

fn exterior_moment_count(symbol: &Symbol, radius: f64) -> usize {
    match symbol {
        // Closed-form moment lists are cheap to extend.
        Symbol::Const(_)
        | Symbol::ConjMonomial(_)
        | Symbol::Mu0
        | Symbol::Mu0Reflected
        | Symbol::RadialPower(_) => {
            ((42.0 / radius.ln()).ceil() as usize).clamp(8, 4_000_000)
        }
        _ => EXTERIOR_MOMENTS,
    }
}

/// Cauchy transform `int mu(w)/(zeta - w) dA(w)` of a disk-supported symbol.
///
/// Exterior points use the Laurent expansion `sum_m mom_m / zeta^{m+1}`;
/// interior points go through the mode-split evaluation in [`interior`].
pub fn cauchy_transform(mu: &Symbol, zeta: Complex64) -> Result<Complex64> {
    let r = zeta.norm();
    if r < 1.0 {
        let grid = OperatorGrid::standard();
        let values = symbol_on_operator_grid(mu, &grid);
        return Ok(interior::cauchy_interior_at(&grid, &values, zeta));
    }
    if r < 1.0 + EXTERIOR_MARGIN {
        return Err(Error::NearSupportBoundary);
    }
    let len = exterior_moment_count(mu, r);
    let moments = mu.moments(len);
    let inv = 1.0 / zeta;
    let mut acc = Complex64::new(0.0, 0.0);
    for m in (0..moments.len()).rev() {
        acc = (acc + moments[m]) * inv;
    }
    Ok(acc)
}

/// Beurling transform at an exterior point via `S mu(1/z) = -z^2 P mu*(z)`,
/// i.e. `S mu(zeta) = -sum_m (m+1) mom_m / zeta^{m+2}`.
pub fn beurling_transform_exterior(mu: &Symbol, zeta: Complex64) -> Result<Complex64> {
    let r = zeta.norm();
    if r <= 1.0 {
        return Err(Error::InteriorEvaluation);
    }
    if r < 1.0 + EXTERIOR_MARGIN {
        return Err(Error::NearSupportBoundary);
    }
    let len = exterior_moment_count(mu, r);
    let moments = mu.moments(len);
    Ok(beurling_exterior_from_moments(&moments, zeta))
}

/// Same series, reusable when the moments are already in hand.
pub fn beurling_exterior_from_moments(moments: &[Complex64], zeta: Complex64) -> Complex64 {
    let inv = 1.0 / zeta;
    let mut acc = Complex64::new(0.0, 0.0);
    for m in (0..moments.len()).rev() {
        acc = (acc + moments[m] * (m as f64 + 1.0)) * inv;
    }
    -acc * inv
}

/// zeta-derivative of the exterior Beurling series.
pub fn beurling_exterior_derivative_from_moments(moments: &[Complex64], zeta: Complex64) -> Complex64 {
    let inv = 1.0 / zeta;
    let mut acc = Complex64::new(0.0, 0.0);
    for m in (0..moments.len()).rev() {
        acc = (acc + moments[m] * ((m as f64 + 1.0) * (m as f64 + 2.0))) * inv;
    }
    acc * inv * inv
}

/// Sample a symbol on the operator grid used by the interior calculus.
pub fn symbol_on_operator_grid(mu: &Symbol, grid: &OperatorGrid) -> Vec<Complex64> {
    let mut values = Vec::with_capacity(grid.radii.len() * grid.angles);
    for i in 0..grid.radii.len() {
        for j in 0..grid.angles {
            values.push(mu.eval(grid.node(i, j)));
        }
    }
    values
}

/// The involutive Mobius automorphism `phi_zeta(z) = (zeta - z)/(1 - conj(zeta) z)`.
pub fn mobius(zeta: Complex64, z: Complex64) -> Result<Complex64> {
    if zeta.norm() >= 1.0 {
        return Err(Error::OutOfDomain { name: "zeta", value: zeta.norm(), domain: "[0, 1)" });
    }
    if z.norm() > 1.0 + 1e-12 {
        return Err(Error::OutOfDomain { name: "z", value: z.norm(), domain: "[0, 1]" });
    }
    let den = Complex64::new(1.0, 0.0) - zeta.conj() * z;
    if den.norm() < 1e-14 {
        return Err(Error::MobiusPole);
    }
    Ok((zeta - z) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::disk_integral;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn projection_reproduces_constants() {
        let p = bergman_project(&Symbol::Const(c(0.3, -0.7)), 8).unwrap();
        assert!((p.series.coeffs[0] - c(0.3, -0.7)).norm() < 1e-12);
        assert!(p.series.coeffs[1..].iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn projection_annihilates_conjugate() {
        // Brute-force moment oracle: every int conj(w)^{j+1} dA vanishes by
        // angular symmetry, so P conj(w) = 0.
        let grid = Arc::new(PolarGrid::standard(64, 128));
        for j in 0..6u32 {
            let f = DiskField::from_fn(grid.clone(), |w| w.conj().powu(j + 1)).unwrap();
            assert!(disk_integral(&f).unwrap().norm() < 1e-13);
        }
        let p = bergman_project(&Symbol::ConjMonomial(1), 16).unwrap();
        assert!(p.series.coeffs.iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn projection_of_mu0_at_half() {
        // Closed form of the extremal projection: 4 log 2 - 2 at z = 1/2.
        let p = bergman_project(&Symbol::Mu0, 128).unwrap();
        let v = p.series.eval(c(0.5, 0.0));
        let expect = 4.0 * 2.0f64.ln() - 2.0;
        assert!((v - expect).norm() < 1e-10, "got {v}, want {expect}");
    }

    #[test]
    fn mu0_quadrature_moments_match_analytic() {
        // The closed-form conj moments 1/((j+1)(j+2)) against the honest
        // tensor quadrature of the sampled symbol.
        let grid = standard_symbol_grid();
        let field = DiskField::from_fn(grid, |w| Symbol::mu0_value(w)).unwrap();
        // The boundary phase singularity of mu0 limits the tensor route to
        // O(1/N^2) in the angular count; the analytic moment path is exact.
        let quad = moments_of_field(&field, 24, true);
        for (j, q) in quad.iter().enumerate() {
            let exact = 1.0 / ((j as f64 + 1.0) * (j as f64 + 2.0));
            assert!((q - exact).norm() < 1e-6, "j={j} quad={q} exact={exact}");
        }
    }

    #[test]
    fn cauchy_exterior_values() {
        assert!(cauchy_transform(&Symbol::Const(c(0.0, 0.0)), c(2.0, 0.0)).unwrap().norm() < 1e-15);

        // Indicator: only the zeroth moment survives, C = 1/zeta.
        let zeta = c(1.7, -0.4);
        let v = cauchy_transform(&Symbol::Const(c(1.0, 0.0)), zeta).unwrap();
        assert!((v - 1.0 / zeta).norm() < 1e-13);

        // |w|^2: int |w|^2 dA = 1/2, higher moments vanish.
        let v = cauchy_transform(&Symbol::RadialPower(2.0), zeta).unwrap();
        assert!((v - 0.5 / zeta).norm() < 1e-13);
    }

    #[test]
    fn cauchy_interior_of_indicator() {
        let v = cauchy_transform(&Symbol::Const(c(1.0, 0.0)), c(0.3, 0.4)).unwrap();
        assert!((v - c(0.3, -0.4)).norm() < 1e-10, "C(1_D) = conj(z) inside, got {v}");
    }

    #[test]
    fn cauchy_near_boundary_errors() {
        assert_eq!(
            cauchy_transform(&Symbol::Mu0, c(1.001, 0.0)).unwrap_err(),
            Error::NearSupportBoundary
        );
    }

    #[test]
    fn beurling_exterior_values() {
        let zeta = c(1.3, 0.9);
        // S(1_D) = -1/zeta^2 outside.
        let v = beurling_transform_exterior(&Symbol::Const(c(1.0, 0.0)), zeta).unwrap();
        assert!((v + 1.0 / (zeta * zeta)).norm() < 1e-13);

        // S(conj w) = -1/zeta^3 outside: mu* = w, P reproduces it.
        let v = beurling_transform_exterior(&Symbol::ConjMonomial(1), zeta).unwrap();
        assert!((v + 1.0 / (zeta * zeta * zeta)).norm() < 1e-13);

        assert!(beurling_transform_exterior(&Symbol::Mu0, c(0.9, 0.0)).is_err());
    }

    #[test]
    fn beurling_is_derivative_of_cauchy() {
        // Direct differentiation oracle for S = dC/dzeta at an exterior point.
        let zeta = c(1.6, 0.5);
        let h = 1e-6;
        for mu in [Symbol::Const(c(1.0, 0.0)), Symbol::Mu0, Symbol::ConjMonomial(2)] {
            let s = beurling_transform_exterior(&mu, zeta).unwrap();
            let dx = (cauchy_transform(&mu, zeta + h).unwrap() - cauchy_transform(&mu, zeta - h).unwrap()) / (2.0 * h);
            let dy = (cauchy_transform(&mu, zeta + c(0.0, h)).unwrap()
                - cauchy_transform(&mu, zeta - c(0.0, h)).unwrap())
                / (2.0 * h);
            let dz = 0.5 * (dx - c(0.0, 1.0) * dy);
            assert!((dz - s).norm() < 1e-7, "mu={mu:?}");
        }
    }

    #[test]
    fn mobius_basics() {
        let z = c(0.3, -0.2);
        assert!((mobius(c(0.0, 0.0), z).unwrap() + z).norm() < 1e-15);
        let zeta = c(0.5, 0.1);
        assert!(mobius(zeta, zeta).unwrap().norm() < 1e-15);
        assert!((mobius(c(0.5, 0.0), c(0.0, 0.0)).unwrap() - 0.5).norm() < 1e-15);
        // Involution.
        let w = mobius(zeta, z).unwrap();
        assert!((mobius(zeta, w).unwrap() - z).norm() < 1e-14);
    }

    #[test]
    fn phase_symbol_is_unimodular_with_decaying_moments() {
        let poly = PowerSeries::new(vec![c(0.0, 0.0), c(0.4, 0.1), c(-0.2, 0.3)]);
        let mu = Symbol::Phase(poly);
        assert!((mu.eval(c(0.3, 0.2)).norm() - 1.0).abs() < 1e-14);
        let m = mu.moments(64);
        assert!(m[40].norm() < 1e-12, "phase moments must superdecay");
    }
}
