//! Quadrature and series infrastructure: circle averages, disk integrals in
//! polar form, Fourier/Taylor coefficient extraction, radii ladders.
//!
//! Normalizations follow `ds = |dz|/2pi` on the circle and `dA = dx dy/pi`
//! on the disk, so constants integrate to one on both.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place forward FFT, rustfft convention `X_k = sum_j x_j e^{-2pi i jk/N}`.
pub fn fft_forward(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()).process(buf));
}

/// In-place unnormalized inverse FFT, `x_j = sum_k X_k e^{+2pi i jk/N}`.
pub fn fft_inverse(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()).process(buf));
}

pub fn next_pow2(n: usize) -> usize {
    n.next_power_of_two()
}

/// Pairwise summation; keeps rounding error at O(log n * eps) for the long
/// boundary-layer sums where a naive loop would lose five digits.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 64 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 64 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// three-term recurrence. Good to ~1e-15 for n up to several thousand.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative via recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            // n == 1: p1 = x, p0 = 1.
            pp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / pp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Radial quadrature rule on [0, 1] against the weight `2 r dr`, so that
/// `disk mean = sum_i w_i * (circle mean at r_i)`.
#[derive(Debug, Clone)]
pub struct RadialRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl RadialRule {
    /// Single Gauss-Legendre panel mapped to [0, 1].
    pub fn gauss(n: usize) -> Self {
        Self::gauss_panels(&[0.0, 1.0], n)
    }

    /// Composite Gauss-Legendre over the given panel edges. Used when the
    /// integrand has a known radial break (the omega weight jumps at 1/2).
    pub fn gauss_panels(edges: &[f64], per_panel: usize) -> Self {
        assert!(edges.len() >= 2 && edges.windows(2).all(|e| e[0] < e[1]));
        let (x, w) = gauss_legendre(per_panel);
        let mut nodes = Vec::with_capacity(per_panel * (edges.len() - 1));
        let mut weights = Vec::with_capacity(nodes.capacity());
        for e in edges.windows(2) {
            let (a, b) = (e[0], e[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for k in 0..per_panel {
                let r = mid + half * x[k];
                nodes.push(r);
                weights.push(w[k] * half * 2.0 * r);
            }
        }
        RadialRule { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Polar evaluation grid: radial rule x equispaced angles.
#[derive(Debug, Clone)]
pub struct PolarGrid {
    pub radial: RadialRule,
    pub angles: usize,
}

impl PolarGrid {
    pub fn new(radial: RadialRule, angles: usize) -> Result<Self> {
        if angles < 4 || !angles.is_power_of_two() {
            return Err(Error::InvalidGrid("angular count must be a power of two >= 4"));
        }
        if radial.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if radial.nodes.windows(2).any(|r| r[0] >= r[1]) || *radial.nodes.last().unwrap() >= 1.0 {
            return Err(Error::InvalidGrid("radii must increase strictly and stay below 1"));
        }
        Ok(PolarGrid { radial, angles })
    }

    /// Default quadrature grid for bounded symbols on the disk.
    pub fn standard(radial_n: usize, angles: usize) -> Self {
        PolarGrid::new(RadialRule::gauss(radial_n), angles).expect("valid standard grid")
    }

    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        let theta = 2.0 * PI * j as f64 / self.angles as f64;
        Complex64::from_polar(self.radial.nodes[i], theta)
    }
}

/// Samples of a complex function on a polar grid, radius-major.
#[derive(Debug, Clone)]
pub struct DiskField {
    pub grid: Arc<PolarGrid>,
    pub values: Vec<Complex64>,
}

impl DiskField {
    pub fn new(grid: Arc<PolarGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.radial.len() * grid.angles {
            return Err(Error::InvalidGrid("value count does not match grid"));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        Ok(DiskField { grid, values })
    }

    pub fn from_fn(grid: Arc<PolarGrid>, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.radial.len() * grid.angles);
        for i in 0..grid.radial.len() {
            for j in 0..grid.angles {
                values.push(f(grid.node(i, j)));
            }
        }
        DiskField::new(grid, values)
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.values[i * self.grid.angles..(i + 1) * self.grid.angles]
    }
}

/// Values of a function at N equispaced points of the circle of given radius.
#[derive(Debug, Clone)]
pub struct CircleSamples {
    pub radius: f64,
    pub values: Vec<Complex64>,
}

impl CircleSamples {
    pub fn new(radius: f64, values: Vec<Complex64>) -> Result<Self> {
        let n = values.len();
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid("sample count must be a power of two >= 4"));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::OutOfDomain {
                name: "radius",
                value: radius,
                domain: "(0, inf)",
            });
        }
        Ok(CircleSamples { radius, values })
    }

    pub fn from_fn(radius: f64, n: usize, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        let values = (0..n)
            .map(|j| f(Complex64::from_polar(radius, 2.0 * PI * j as f64 / n as f64)))
            .collect();
        CircleSamples::new(radius, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Mean of the samples; realizes the normalized arc-length integral, exact
/// for trigonometric polynomials of degree < N/2.
pub fn circle_integral(f: &CircleSamples) -> Result<Complex64> {
    if f.values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    Ok(pairwise_sum_complex(&f.values) / f.values.len() as f64)
}

/// Polar quadrature of a disk field: circle means per radius against the
/// radial rule (which carries the `2 r dr` weight).
pub fn disk_integral(f: &DiskField) -> Result<Complex64> {
    if f.values.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut acc = Vec::with_capacity(f.grid.radial.len());
    for i in 0..f.grid.radial.len() {
        let mean = pairwise_sum_complex(f.row(i)) / f.grid.angles as f64;
        acc.push(mean * f.grid.radial.weights[i]);
    }
    Ok(pairwise_sum_complex(&acc))
}

/// One-sided Taylor coefficients of a holomorphic function on the disk.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    pub coeffs: Vec<Complex64>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        PowerSeries { coeffs }
    }

    pub fn zero() -> Self {
        PowerSeries { coeffs: vec![Complex64::new(0.0, 0.0)] }
    }

    pub fn constant(c: Complex64) -> Self {
        PowerSeries { coeffs: vec![c] }
    }

    pub fn monomial(degree: usize, c: Complex64) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
        coeffs[degree] = c;
        PowerSeries { coeffs }
    }

    pub fn from_fn(len: usize, f: impl Fn(usize) -> Complex64) -> Self {
        PowerSeries { coeffs: (0..len).map(f).collect() }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> PowerSeries {
        if self.coeffs.len() <= 1 {
            return PowerSeries::zero();
        }
        PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c * j as f64)
                .collect(),
        }
    }

    /// Termwise antiderivative with zero constant term.
    pub fn integral(&self) -> PowerSeries {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / (j + 1) as f64);
        }
        PowerSeries { coeffs }
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs[j] += c;
        }
        for (j, c) in other.coeffs.iter().enumerate() {
            coeffs[j] += c;
        }
        PowerSeries { coeffs }
    }

    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs[j] += c;
        }
        for (j, c) in other.coeffs.iter().enumerate() {
            coeffs[j] -= c;
        }
        PowerSeries { coeffs }
    }

    pub fn scale(&self, c: Complex64) -> PowerSeries {
        PowerSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiply by z^k (shift coefficients up).
    pub fn shift(&self, k: usize) -> PowerSeries {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + k];
        coeffs[k..].copy_from_slice(&self.coeffs);
        PowerSeries { coeffs }
    }

    /// Cauchy product truncated to `len` coefficients.
    pub fn mul_truncated(&self, other: &PowerSeries, len: usize) -> PowerSeries {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        PowerSeries { coeffs }
    }

    /// exp of the series, truncated to `len` coefficients, via the standard
    /// recurrence n e_n = sum_{k=1..n} k b_k e_{n-k}.
    pub fn exp_truncated(&self, len: usize) -> PowerSeries {
        let b = &self.coeffs;
        let mut e = vec![Complex64::new(0.0, 0.0); len];
        e[0] = b[0].exp();
        for n in 1..len {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 1..=n.min(b.len() - 1) {
                acc += b[k] * k as f64 * e[n - k];
            }
            e[n] = acc / n as f64;
        }
        PowerSeries { coeffs: e }
    }

    /// log of the series (constant term must be 1), truncated to `len`.
    pub fn log_truncated(&self, len: usize) -> Result<PowerSeries> {
        let u = &self.coeffs;
        if (u[0] - 1.0).norm() > 1e-12 {
            return Err(Error::NotNormalized("log of a series requires unit constant term"));
        }
        let mut l = vec![Complex64::new(0.0, 0.0); len];
        for n in 1..len {
            let mut acc = if n < u.len() { u[n] * n as f64 } else { Complex64::new(0.0, 0.0) };
            for k in 1..n {
                if n - k < u.len() {
                    acc -= l[k] * k as f64 * u[n - k];
                }
            }
            l[n] = acc / n as f64;
        }
        Ok(PowerSeries { coeffs: l })
    }

    /// Samples of the dilate z -> g(r z) at n equispaced points of the unit
    /// circle. Coefficients are folded modulo n before the inverse FFT, so
    /// the evaluation is exact however long the series is.
    pub fn eval_on_circle(&self, r: f64, n: usize) -> Vec<Complex64> {
        let mut bins = vec![Complex64::new(0.0, 0.0); n];
        let mut rj = 1.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            bins[j % n] += c * rj;
            rj *= r;
            if rj == 0.0 {
                break;
            }
        }
        fft_inverse(&mut bins);
        bins
    }

    /// Parseval mean square of the dilate: `int |g(r zeta)|^2 ds = sum |c_j|^2 r^{2j}`.
    pub fn mean_square_dilate(&self, r: f64) -> f64 {
        let r2 = r * r;
        let mut terms = Vec::with_capacity(self.coeffs.len());
        let mut p = 1.0;
        for c in &self.coeffs {
            terms.push(c.norm_sqr() * p);
            p *= r2;
        }
        pairwise_sum(&terms)
    }
}

/// Exact circle samples of the dilate `g(r zeta)` of a holomorphic function.
///
/// The two implementors cover the two shapes in play: finite coefficient
/// vectors, and coefficient rules for log-type functions whose useful
/// series length grows like 1/(1-r).
pub trait DilateEvaluable: Sync {
    fn dilate_samples(&self, r: f64, n: usize) -> Vec<Complex64>;
    /// Polynomial degree when finite; `None` when the length is r-dependent.
    fn finite_degree(&self) -> Option<usize>;
}

impl DilateEvaluable for PowerSeries {
    fn dilate_samples(&self, r: f64, n: usize) -> Vec<Complex64> {
        self.eval_on_circle(r, n)
    }

    fn finite_degree(&self) -> Option<usize> {
        Some(self.degree())
    }
}

/// Holomorphic function given by a coefficient rule with coefficients of
/// at most polynomial growth; folded on demand up to where r^j falls
/// below machine precision.
pub struct AnalyticCoeffs<F: Fn(usize) -> Complex64 + Sync> {
    pub coeff: F,
}

impl<F: Fn(usize) -> Complex64 + Sync> DilateEvaluable for AnalyticCoeffs<F> {
    fn dilate_samples(&self, r: f64, n: usize) -> Vec<Complex64> {
        assert!((0.0..1.0).contains(&r), "coefficient-rule dilates need r < 1");
        let jmax = (44.0 / (1.0 - r)).ceil() as usize;
        let mut bins = vec![Complex64::new(0.0, 0.0); n];
        let mut rj = 1.0f64;
        for j in 0..=jmax {
            bins[j % n] += (self.coeff)(j) * rj;
            rj *= r;
        }
        fft_inverse(&mut bins);
        bins
    }

    fn finite_degree(&self) -> Option<usize> {
        None
    }
}

/// Taylor coefficients from circle samples of a holomorphic function:
/// bin j of the forward FFT divided by radius^j, for j < N/2.
pub fn taylor_from_circle(f: &CircleSamples) -> Result<PowerSeries> {
    if f.radius == 0.0 {
        return Err(Error::OutOfDomain { name: "radius", value: 0.0, domain: "(0, inf)" });
    }
    let n = f.values.len();
    let mut buf = f.values.clone();
    fft_forward(&mut buf);
    let mut coeffs = Vec::with_capacity(n / 2);
    let mut rj = 1.0;
    for item in buf.iter().take(n / 2) {
        coeffs.push(item / (n as f64 * rj));
        rj *= f.radius;
    }
    Ok(PowerSeries { coeffs })
}

/// Increasing radii approaching 1 from below.
#[derive(Debug, Clone)]
pub struct RadiiLadder {
    pub radii: Vec<f64>,
}

/// Hard cap for dyadic ladders; beyond this `1 - r` is noise in f64.
pub const LADDER_CAP: f64 = 1.0 - 1e-6;

impl RadiiLadder {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if radii.windows(2).any(|r| r[0] >= r[1]) || *radii.last().unwrap() >= 1.0 {
            return Err(Error::InvalidGrid("ladder radii must increase strictly and stay below 1"));
        }
        Ok(RadiiLadder { radii })
    }

    /// r_m = 1 - 2^-m for m in [m_min, m_max], capped at `LADDER_CAP`.
    pub fn dyadic(m_min: u32, m_max: u32) -> Self {
        let mut radii: Vec<f64> = (m_min..=m_max)
            .map(|m| (1.0 - 0.5f64.powi(m as i32)).min(LADDER_CAP))
            .collect();
        radii.dedup();
        RadiiLadder { radii }
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// The trailing window standing in for the r -> 1 limit.
    pub fn tail(&self, window: usize) -> &[f64] {
        let start = self.radii.len().saturating_sub(window);
        &self.radii[start..]
    }
}

/// log(1/(1 - r^2)), the clock of every boundary asymptotic here.
pub fn boundary_clock(r: f64) -> f64 {
    -(-r * r).ln_1p()
}

/// Angular resolution for boundary dilates: N >= max(256, 16/(1-r)),
/// rounded to a power of two. Integrands built from Bergman projections
/// develop an O(1-r)-wide peak, and 16 points across it keep the FFT
/// quadrature error below regression noise.
pub fn boundary_angular_resolution(r: f64) -> usize {
    let need = (16.0 / (1.0 - r)).ceil().max(256.0) as usize;
    next_pow2(need).min(1 << 24)
}
