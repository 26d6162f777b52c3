//! Green-formula checks, the harmonic energy inequality, the differential
//! anentropy bound, level-set (weak-type) estimates with the inscribed
//! polygon trick, the N-optimization that assembles the tail-integral
//! constant, and Carleman's Hardy-Bergman inequality.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grids::{
    boundary_angular_resolution, boundary_clock, fft_inverse, next_pow2, pairwise_sum,
    DilateEvaluable, PowerSeries, RadialRule,
};

// ---------------------------------------------------------------------------
// Polynomial test fields in z and conj(z)

/// Polynomial in z and conj(z); the Laplacian is exact, which makes these
/// the natural test fields for the Green identity.
#[derive(Debug, Clone, Default)]
pub struct ZZbarPoly {
    /// (power of z, power of conj z, coefficient)
    pub terms: Vec<(u32, u32, Complex64)>,
}

impl ZZbarPoly {
    pub fn new(terms: Vec<(u32, u32, Complex64)>) -> Self {
        ZZbarPoly { terms }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(a, b, c)| c * z.powu(a) * z.conj().powu(b))
            .sum()
    }

    /// Normalized Laplacian `Delta = d/dz d/dconj(z)` acting termwise.
    pub fn laplacian(&self) -> ZZbarPoly {
        ZZbarPoly {
            terms: self
                .terms
                .iter()
                .filter(|&&(a, b, _)| a >= 1 && b >= 1)
                .map(|&(a, b, c)| (a - 1, b - 1, c * (a as f64) * (b as f64)))
                .collect(),
        }
    }

    fn max_degree(&self) -> u32 {
        self.terms.iter().map(|&(a, b, _)| a + b).max().unwrap_or(0)
    }
}

fn poly_disk_integral(p: &ZZbarPoly, weight: impl Fn(f64) -> f64) -> Complex64 {
    let deg = p.max_degree() as usize;
    let rule = RadialRule::gauss(deg / 2 + 8);
    let n = next_pow2((2 * deg + 8).max(16));
    let mut acc = Complex64::new(0.0, 0.0);
    for (r, w) in rule.nodes.iter().zip(&rule.weights) {
        let mut mean = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let z = Complex64::from_polar(*r, 2.0 * PI * j as f64 / n as f64);
            mean += p.eval(z);
        }
        acc += mean / n as f64 * (w * weight(*r));
    }
    acc
}

fn poly_circle_integral(p: &ZZbarPoly) -> Complex64 {
    let n = next_pow2((2 * p.max_degree() as usize + 8).max(16));
    let mut mean = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
        mean += p.eval(z);
    }
    mean / n as f64
}

/// Green identity with `v = 1 - |z|^2`:
/// `int u dA + int (1-|z|^2) Delta u dA = int_T u ds`.
pub fn green_identity_check(u: &ZZbarPoly) -> (Complex64, Complex64) {
    let lap = u.laplacian();
    let lhs = poly_disk_integral(u, |_| 1.0) + poly_disk_integral(&lap, |r| 1.0 - r * r);
    let rhs = poly_circle_integral(u);
    (lhs, rhs)
}

// ---------------------------------------------------------------------------
// Boundary data and Poisson extensions

/// Boundary data on the unit circle with exact Fourier coefficients.
#[derive(Debug, Clone)]
pub enum BoundaryData {
    /// Indicator of an arc, scaled to height `1/length`: unit mean by
    /// construction. `center` is the angular midpoint, `length` the
    /// normalized arc length in (0, 1].
    Arc { center: f64, length: f64 },
    /// Finite trigonometric series `sum_n c_n e^{i n theta}`, n-major with
    /// modes[k] holding c_k for k >= 0 and the reality convention
    /// c_{-k} = conj(c_k) applied on evaluation when `real` is set.
    Trig { modes: Vec<Complex64>, real: bool },
}

impl BoundaryData {
    pub fn fourier(&self, n: i64) -> Complex64 {
        match self {
            BoundaryData::Arc { center, length } => {
                if n == 0 {
                    return Complex64::new(1.0, 0.0);
                }
                let delta = PI * length;
                let x = n as f64 * delta;
                Complex64::from_polar(1.0, -n as f64 * center) * (x.sin() / x)
            }
            BoundaryData::Trig { modes, real } => {
                if n >= 0 {
                    modes.get(n as usize).copied().unwrap_or_default()
                } else if *real {
                    modes.get((-n) as usize).copied().unwrap_or_default().conj()
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
        }
    }

    pub fn value(&self, theta: f64) -> Complex64 {
        match self {
            BoundaryData::Arc { center, length } => {
                let delta = PI * length;
                let mut d = (theta - center) % (2.0 * PI);
                if d > PI {
                    d -= 2.0 * PI;
                }
                if d < -PI {
                    d += 2.0 * PI;
                }
                if d.abs() <= delta {
                    Complex64::new(1.0 / length, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            BoundaryData::Trig { modes, real } => {
                let mut acc = modes.first().copied().unwrap_or_default();
                for (k, c) in modes.iter().enumerate().skip(1) {
                    let e = Complex64::from_polar(1.0, k as f64 * theta);
                    acc += c * e;
                    if *real {
                        acc += c.conj() * e.conj();
                    }
                }
                acc
            }
        }
    }

    fn is_identically_zero(&self) -> bool {
        match self {
            BoundaryData::Arc { .. } => false,
            BoundaryData::Trig { modes, .. } => modes.iter().all(|c| c.norm() == 0.0),
        }
    }

    /// Circle samples of the Poisson extension at radius rho < 1, by
    /// folding the damped Fourier series.
    pub fn poisson_circle(&self, rho: f64, n: usize) -> Vec<Complex64> {
        let jmax: i64 = match self {
            BoundaryData::Arc { .. } => ((44.0 / (1.0 - rho)).ceil() as i64).max(8),
            BoundaryData::Trig { modes, .. } => modes.len() as i64,
        };
        let mut bins = vec![Complex64::new(0.0, 0.0); n];
        for nn in -jmax..=jmax {
            let c = self.fourier(nn);
            if c.norm() == 0.0 {
                continue;
            }
            let bin = nn.rem_euclid(n as i64) as usize;
            bins[bin] += c * rho.powi(nn.unsigned_abs() as i32);
        }
        fft_inverse(&mut bins);
        bins
    }

    /// Circle samples of `(d h)(rho e^{i theta})`, the holomorphic-part
    /// derivative `sum_{j>=0} (j+1) h_hat(j+1) z^j` of the extension.
    pub fn complex_derivative_circle(&self, rho: f64, n: usize) -> Vec<Complex64> {
        let jmax: i64 = match self {
            BoundaryData::Arc { .. } => ((44.0 / (1.0 - rho)).ceil() as i64).max(8),
            BoundaryData::Trig { modes, .. } => modes.len() as i64,
        };
        let mut bins = vec![Complex64::new(0.0, 0.0); n];
        let mut rj = 1.0f64;
        for j in 0..=jmax {
            let c = self.fourier(j + 1) * (j + 1) as f64;
            bins[(j as usize) % n] += c * rj;
            rj *= rho;
        }
        fft_inverse(&mut bins);
        bins
    }
}

/// Nonnegative boundary data of unit mean (the Poisson extension then has
/// h(0) = 1): the hypotheses of the anentropy bound.
#[derive(Debug, Clone)]
pub struct BoundaryDensity {
    pub data: BoundaryData,
}

impl BoundaryDensity {
    pub fn new(data: BoundaryData) -> Result<Self> {
        if (data.fourier(0).re - 1.0).abs() > 1e-12 || data.fourier(0).im.abs() > 1e-13 {
            return Err(Error::NotNormalized("boundary density must have unit mean"));
        }
        // Nonnegativity on a dense angular sample.
        let n = 4096;
        for j in 0..n {
            let v = data.value(2.0 * PI * j as f64 / n as f64);
            if v.re < -1e-10 || v.im.abs() > 1e-12 {
                return Err(Error::NotNormalized("boundary density must be real and nonnegative"));
            }
        }
        Ok(BoundaryDensity { data })
    }

    pub fn arc(center: f64, length: f64) -> Result<Self> {
        if !(length > 0.0 && length <= 1.0) {
            return Err(Error::OutOfDomain { name: "length", value: length, domain: "(0, 1]" });
        }
        BoundaryDensity::new(BoundaryData::Arc { center, length })
    }

    /// `int h log h ds` with `t log t := 0` at t = 0. Exact for arcs.
    pub fn anentropy(&self) -> f64 {
        match &self.data {
            BoundaryData::Arc { length, .. } => (1.0 / length).ln(),
            BoundaryData::Trig { .. } => {
                let n = 1 << 16;
                let mut acc = 0.0;
                for j in 0..n {
                    let t = self.data.value(2.0 * PI * j as f64 / n as f64).re.max(0.0);
                    if t > 0.0 {
                        acc += t * t.ln();
                    }
                }
                acc / n as f64
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Energy and anentropy inequalities

/// Disk quadrature of a radially-sampled integrand with per-radius angular
/// resolution adapted to how close `scale * rho` gets to the boundary.
fn disk_quadrature(
    radial: &RadialRule,
    scale: f64,
    mut row_mean: impl FnMut(f64, usize) -> f64,
) -> f64 {
    let mut acc = Vec::with_capacity(radial.len());
    for (i, &rho) in radial.nodes.iter().enumerate() {
        let n = boundary_angular_resolution(scale * rho);
        acc.push(radial.weights[i] * row_mean(rho, n));
    }
    pairwise_sum(&acc)
}

/// Energy inequality for Poisson extensions, 1 < q <= 2:
/// `int_D |h|^q dA + (q-1) int_D (1-|z|^2) |dh|^2 / |h|^{2-q} dA <= int_T |h|^q ds`.
pub fn green_energy_inequality(data: &BoundaryData, q: f64) -> Result<(f64, f64)> {
    if !(1.0 < q && q <= 2.0) {
        return Err(Error::OutOfDomain { name: "q", value: q, domain: "(1, 2]" });
    }
    if data.is_identically_zero() {
        return Err(Error::NotNormalized("identically zero data is excluded by the inequality"));
    }
    let radial = RadialRule::gauss(220);
    let term1 = disk_quadrature(&radial, 1.0, |rho, n| {
        let h = data.poisson_circle(rho, n);
        h.iter().map(|v| v.norm().powf(q)).sum::<f64>() / n as f64
    });
    let term2 = disk_quadrature(&radial, 1.0, |rho, n| {
        let h = data.poisson_circle(rho, n);
        let dh = data.complex_derivative_circle(rho, n);
        let w = 1.0 - rho * rho;
        let mut acc = 0.0;
        for j in 0..n {
            let habs = h[j].norm();
            if habs > 1e-300 {
                acc += w * dh[j].norm_sqr() / habs.powf(2.0 - q);
            }
        }
        acc / n as f64
    });
    let lhs = term1 + (q - 1.0) * term2;

    let rhs = match data {
        BoundaryData::Arc { length, .. } => length.powf(1.0 - q),
        _ => {
            let n = 1 << 14;
            let mut acc = 0.0;
            for j in 0..n {
                acc += data.value(2.0 * PI * j as f64 / n as f64).norm().powf(q);
            }
            acc / n as f64
        }
    };
    Ok((lhs, rhs))
}

/// Differential anentropy bound at radius r:
/// `int_D |(dh)(r z)| dA(z) <= (1/r^2) sqrt(int h log h ds) sqrt(log 1/(1-r^2))`.
pub fn anentropy_bound_check(h: &BoundaryDensity, r: f64) -> Result<(f64, f64)> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutOfDomain { name: "r", value: r, domain: "(0, 1)" });
    }
    let radial = RadialRule::gauss(220);
    let lhs = disk_quadrature(&radial, r, |rho, n| {
        let dh = h.data.complex_derivative_circle(r * rho, n);
        dh.iter().map(|v| v.norm()).sum::<f64>() / n as f64
    });
    let rhs = (h.anentropy().max(0.0) * boundary_clock(r)).sqrt() / (r * r);
    Ok((lhs, rhs))
}

// ---------------------------------------------------------------------------
// Level sets

#[derive(Debug, Clone, Copy)]
pub struct LevelSetReport {
    pub r: f64,
    pub eta: f64,
    /// s-length of {zeta : |g(r zeta)| >= eta}, by angular counting.
    pub measured_length: f64,
    /// min over 3 <= N <= n_cap of N exp{-r^4 eta^2 cos^2(pi/N) / (sup^2 L)}.
    pub bound: f64,
}

/// The polygon majorant `max_k Re(omega^k w)` for the N-th roots of unity;
/// |w| >= eta implies the majorant is >= eta cos(pi/N) for N >= 3.
pub fn polygon_majorant(w: Complex64, n: u32) -> f64 {
    (0..n)
        .map(|k| (w * Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)).re)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Weak-type bound for the sublevel structure of a projected symbol.
pub fn level_set_check(
    g: &dyn DilateEvaluable,
    mu_sup: f64,
    r: f64,
    eta: f64,
    n_cap: u32,
) -> Result<LevelSetReport> {
    if n_cap < 3 {
        return Err(Error::OutOfDomain { name: "n_cap", value: n_cap as f64, domain: "[3, inf)" });
    }
    if eta < 0.0 {
        return Err(Error::OutOfDomain { name: "eta", value: eta, domain: "[0, inf)" });
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutOfDomain { name: "r", value: r, domain: "(0, 1)" });
    }
    let n_angles = match g.finite_degree() {
        Some(d) => next_pow2((16 * (d + 1)).max(4096)),
        None => boundary_angular_resolution(r).max(4096),
    };
    let samples = g.dilate_samples(r, n_angles);
    let count = samples.iter().filter(|v| v.norm() >= eta).count();
    let measured_length = count as f64 / n_angles as f64;

    let l = boundary_clock(r);
    let c = r.powi(4) * eta * eta / (mu_sup * mu_sup * l);
    let bound = (3..=n_cap)
        .map(|n| {
            let cos = (PI / n as f64).cos();
            n as f64 * (-c * cos * cos).exp()
        })
        .fold(f64::INFINITY, f64::min);
    Ok(LevelSetReport { r, eta, measured_length, bound })
}

/// Exact layer-cake reassembly of the tail integral from the measured
/// distribution function: sorting the samples and integrating the step
/// function `nu_r` in closed form must reproduce the quadrature mean.
pub fn tail_integral_by_parts(g: &dyn DilateEvaluable, a: f64, r: f64) -> Result<(f64, f64)> {
    let n = match g.finite_degree() {
        Some(d) => next_pow2((16 * (d + 1)).max(1024)),
        None => boundary_angular_resolution(r),
    };
    let samples = g.dilate_samples(r, n);
    let c = a * r.powi(4) / boundary_clock(r);
    let direct: f64 = samples.iter().map(|v| (c * v.norm_sqr()).exp()).sum::<f64>() / n as f64;

    let mut mags: Vec<f64> = samples.iter().map(|v| v.norm()).collect();
    mags.sort_by(|x, y| x.partial_cmp(y).unwrap());
    // nu_r(eta) = (n - k)/n on [mags[k-1], mags[k]); integrate
    // exp(c eta^2) 2 c eta nu_r(eta) d eta piecewise exactly.
    let mut acc = 1.0;
    let mut prev = 0.0;
    for (k, &m) in mags.iter().enumerate() {
        let surviving = (n - k) as f64 / n as f64;
        acc += surviving * ((c * m * m).exp() - (c * prev * prev).exp());
        prev = m;
    }
    Ok((direct, acc))
}

/// The N-choice assembling the strong bound: the smallest integer
/// N >= pi sqrt(3) / sqrt(1-a), and `1 + a N / (cos^2(pi/N) - a)`.
#[derive(Debug, Clone, Copy)]
pub struct StrongBound {
    pub n: u32,
    pub assembled_bound: f64,
}

pub fn strong_bound_n(a: f64) -> Result<StrongBound> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::OutOfDomain { name: "a", value: a, domain: "(0, 1)" });
    }
    let n = (PI * 3.0f64.sqrt() / (1.0 - a).sqrt()).ceil() as u32;
    let cos2 = (PI / n as f64).cos().powi(2);
    Ok(StrongBound { n, assembled_bound: 1.0 + a * n as f64 / (cos2 - a) })
}

/// Carleman: `||f||_{A^{2p}} <= ||f||_{H^p}` for holomorphic f.
pub fn carleman_check(f: &PowerSeries, p: f64) -> Result<(f64, f64)> {
    if p <= 0.0 || !p.is_finite() {
        return Err(Error::OutOfDomain { name: "p", value: p, domain: "(0, inf)" });
    }
    let n = next_pow2((16 * (f.degree() + 1)).max(512));
    let radial = RadialRule::gauss(180);
    let mut acc = Vec::with_capacity(radial.len());
    for (i, &rho) in radial.nodes.iter().enumerate() {
        let row = f.eval_on_circle(rho, n);
        let mean = row.iter().map(|v| v.norm().powf(2.0 * p)).sum::<f64>() / n as f64;
        acc.push(radial.weights[i] * mean);
    }
    let lhs = pairwise_sum(&acc).powf(1.0 / (2.0 * p));
    let boundary = f.eval_on_circle(1.0, n);
    let rhs = (boundary.iter().map(|v| v.norm().powf(p)).sum::<f64>() / n as f64).powf(1.0 / p);
    Ok((lhs, rhs))
}
