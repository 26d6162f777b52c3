//! Bloch seminorm scans, the piecewise radial weight behind the
//! derivative-quotient estimate, and the decomposition of a Bloch function
//! into a small projection part plus a bounded remainder.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grids::{next_pow2, DiskField, PolarGrid, PowerSeries, RadialRule};
use crate::transforms::moments_of_field;

/// Grid supremum of `(1-|z|^2) |g'(z)|` on a uniform polar scan grid.
/// Monotone nondecreasing under doubling of either resolution.
pub fn bloch_seminorm_on_grid(g: &PowerSeries, radii: usize, angles: usize) -> f64 {
    let deriv = g.derivative();
    let n = next_pow2(angles.max(8 * (deriv.degree() + 1)).max(256));
    let mut sup: f64 = 0.0;
    for i in 0..=radii {
        let r = i as f64 / (radii + 1) as f64;
        let w = 1.0 - r * r;
        let row = deriv.eval_on_circle(r, n);
        let m = row.iter().map(|v| v.norm()).fold(0.0, f64::max);
        sup = sup.max(w * m);
    }
    sup
}

/// Default scan resolution.
pub fn bloch_seminorm(g: &PowerSeries) -> f64 {
    bloch_seminorm_on_grid(g, 256, 1024)
}

/// Scan plus local polish: golden-section passes in angle and radius from
/// the best grid cell. Used wherever a normalization needs the supremum to
/// a few units in the last digits (the scan alone is only O(h^2) below it).
pub fn bloch_seminorm_refined(g: &PowerSeries) -> f64 {
    let deriv = g.derivative();
    let objective = |r: f64, theta: f64| -> f64 {
        let z = Complex64::from_polar(r, theta);
        (1.0 - r * r) * deriv.eval(z).norm()
    };
    let radii = 192;
    let n = next_pow2((8 * (deriv.degree() + 1)).max(512));
    let mut best = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..=radii {
        let r = i as f64 / (radii + 1) as f64;
        let w = 1.0 - r * r;
        let row = deriv.eval_on_circle(r, n);
        for (j, v) in row.iter().enumerate() {
            let val = w * v.norm();
            if val > best.0 {
                best = (val, r, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
            }
        }
    }
    let (_, mut r, mut theta) = best;
    let dr = 1.5 / (radii + 1) as f64;
    let dth = 1.5 * 2.0 * std::f64::consts::PI / n as f64;
    for _ in 0..3 {
        theta = golden_max(|t| objective(r, t), theta - dth, theta + dth);
        r = golden_max(|rr| objective(rr.clamp(0.0, 1.0 - 1e-12), theta), r - dr, r + dr);
        r = r.clamp(0.0, 1.0 - 1e-12);
    }
    objective(r, theta).max(best.0)
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
        if (b - a).abs() < 1e-13 {
            break;
        }
    }
    0.5 * (a + b)
}

/// The radial weight: 1/3 on [0, 1/2), t/(2-t^2) on [1/2, 1). The jump at
/// 1/2 is intentional; both branches feed the constant-5 integral.
pub fn omega_weight(t: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::OutOfDomain { name: "t", value: t, domain: "[0, 1)" });
    }
    if t < 0.5 {
        Ok(1.0 / 3.0)
    } else {
        Ok(t / (2.0 - t * t))
    }
}

/// Decomposition `g = z^2 P nu_g + G` with `||nu_g|| <= ||g||_B` and G
/// bounded by `|g(0)| + 6 ||g||_B`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub nu: DiskField,
    pub g_remainder: PowerSeries,
    /// Max grid error of g - z^2 P nu_g - G; the two projections are
    /// computed by independent quadratures, so this is a real check.
    pub residual: f64,
    pub nu_sup: f64,
    pub remainder_sup: f64,
}

fn decomposition_grid() -> Arc<PolarGrid> {
    use std::sync::OnceLock;
    static GRID: OnceLock<Arc<PolarGrid>> = OnceLock::new();
    // Panel split at 1/2 where the omega weight jumps.
    GRID.get_or_init(|| {
        Arc::new(PolarGrid::new(RadialRule::gauss_panels(&[0.0, 0.5, 1.0], 160), 2048).unwrap())
    })
    .clone()
}

/// The density `nu_g(z) = (1-|z|^2) omega(|z|) (g'(z) - g'(0))/z`, with the
/// removable singularity at zero filled from the series: nu_g(0) = g''(0)/3.
pub fn nu_g_field(g: &PowerSeries) -> Result<DiskField> {
    let grid = decomposition_grid();
    let deriv = g.derivative();
    let d0 = deriv.coeffs.first().copied().unwrap_or(Complex64::new(0.0, 0.0));
    let second0 = deriv
        .coeffs
        .get(1)
        .copied()
        .unwrap_or(Complex64::new(0.0, 0.0));
    DiskField::from_fn(grid, |z| {
        let t = z.norm();
        let w = omega_weight(t).expect("grid radii live in [0,1)");
        if t < 1e-13 {
            second0 / 3.0
        } else {
            (1.0 - t * t) * w * (deriv.eval(z) - d0) / z
        }
    })
}

pub fn bloch_decompose(g: &PowerSeries) -> Result<Decomposition> {
    let nu = nu_g_field(g)?;
    let deriv = g.derivative();
    let g0 = g.coeffs.first().copied().unwrap_or(Complex64::new(0.0, 0.0));
    let d0 = deriv.coeffs.first().copied().unwrap_or(Complex64::new(0.0, 0.0));

    let degree = g.degree().max(8) + 8;
    let proj_nu = projection_series_of_field(&nu, degree);

    // Remainder by its own projection: G = g(0) + g'(0) z + z^2 P(mu_g - nu_g),
    // where mu_g - nu_g = ((1 - omega)/omega) nu_g.
    let grid = nu.grid.clone();
    let mut diff_values = Vec::with_capacity(nu.values.len());
    for i in 0..grid.radial.len() {
        let t = grid.radial.nodes[i];
        let w = omega_weight(t)?;
        let factor = (1.0 - w) / w;
        for v in nu.row(i) {
            diff_values.push(v * factor);
        }
    }
    let diff = DiskField::new(grid, diff_values)?;
    let proj_diff = projection_series_of_field(&diff, degree);
    let remainder = PowerSeries::new(vec![g0, d0])
        .add(&proj_diff.shift(2));

    // Reconstruction residual on a modest grid: the z^2 P nu + G sum must
    // reproduce g where truncation is negligible.
    let recon = proj_nu.shift(2).add(&remainder);
    let mut residual: f64 = 0.0;
    for i in 0..20 {
        let r = 0.9 * (i as f64 + 1.0) / 20.0;
        let n = 256;
        let a = recon.eval_on_circle(r, n);
        let b = g.eval_on_circle(r, n);
        for j in 0..n {
            residual = residual.max((a[j] - b[j]).norm());
        }
    }

    let nu_sup = nu.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let remainder_sup = remainder
        .eval_on_circle(0.999, next_pow2(8 * (remainder.degree() + 1)).max(512))
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);

    Ok(Decomposition { nu, g_remainder: remainder, residual, nu_sup, remainder_sup })
}

fn projection_series_of_field(field: &DiskField, degree: usize) -> PowerSeries {
    let moments = moments_of_field(field, degree + 1, true);
    PowerSeries::new(
        moments
            .iter()
            .enumerate()
            .map(|(j, m)| m * (j as f64 + 1.0))
            .collect(),
    )
}

/// `int_D w(|u|) |1 - z conj(u)|^{-2} dA(u)` for a radial weight w, via the
/// angular mean `1/(1 - |z|^2 rho^2)` and a panelled radial rule.
pub fn radial_kernel_integral(weight: impl Fn(f64) -> f64, z: Complex64) -> f64 {
    let rule = RadialRule::gauss_panels(&[0.0, 0.5, 1.0], 200);
    let s2 = z.norm_sqr();
    let mut acc = 0.0;
    for (rho, w) in rule.nodes.iter().zip(&rule.weights) {
        acc += w * weight(*rho) / (1.0 - s2 * rho * rho);
    }
    acc
}

/// Grid maximum of `int (1-omega)/omega |1 - z conj(w)|^{-2} dA(w)`;
/// the decomposition's remainder bound needs this to stay at or below 5.
pub fn constant5_check(zs: &[Complex64]) -> f64 {
    let f = |t: f64| {
        let w = omega_weight(t).expect("radial nodes in [0,1)");
        (1.0 - w) / w
    };
    zs.iter()
        .map(|&z| radial_kernel_integral(f, z))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::disk_integral;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Truncated 0.5 log((1+z)/(1-z)) = sum z^{2k+1}/(2k+1).
    fn half_log_ratio(len: usize) -> PowerSeries {
        PowerSeries::from_fn(len, |j| {
            if j % 2 == 1 {
                c(1.0 / j as f64, 0.0)
            } else {
                c(0.0, 0.0)
            }
        })
    }

    #[test]
    fn seminorm_basic_values() {
        let g = PowerSeries::monomial(1, c(1.0, 0.0));
        assert!((bloch_seminorm(&g) - 1.0).abs() < 1e-12);
        let g = PowerSeries::constant(c(5.0, 1.0));
        assert_eq!(bloch_seminorm(&g), 0.0);
        // g' = 1/(1-z^2): (1-|z|^2)|g'| = 1 on the real axis.
        let g = half_log_ratio(4001);
        let s = bloch_seminorm_refined(&g);
        assert!((s - 1.0).abs() < 1e-6, "s={s}");
    }

    #[test]
    fn seminorm_monotone_under_refinement() {
        let g = PowerSeries::new(vec![c(0.0, 0.0), c(0.3, 0.2), c(0.0, -0.5), c(0.7, 0.0)]);
        let coarse = bloch_seminorm_on_grid(&g, 64, 256);
        let fine = bloch_seminorm_on_grid(&g, 128, 512);
        let finer = bloch_seminorm_on_grid(&g, 256, 1024);
        assert!(coarse <= fine + 1e-15 && fine <= finer + 1e-15);
    }

    #[test]
    fn omega_values() {
        assert!((omega_weight(0.0).unwrap() - 1.0 / 3.0).abs() < 1e-16);
        assert!((omega_weight(0.5).unwrap() - 2.0 / 7.0).abs() < 1e-16);
        assert!((omega_weight(1.0 - 1e-12).unwrap() - 1.0).abs() < 1e-10);
        assert!(omega_weight(1.0).is_err());
        assert!(omega_weight(-0.1).is_err());
    }

    #[test]
    fn quotient_bound_for_normalized_derivative() {
        // Lemma-style check: if (1-|z|^2)|f| <= 1 then
        // (1-|z|^2) omega(|z|) |(f(z)-f(0))/z| <= 1 on a grid.
        let g = half_log_ratio(2001);
        let f = g.derivative();
        let f0 = f.coeffs[0];
        for i in 1..40 {
            let r = i as f64 / 41.0;
            for j in 0..64 {
                let z = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / 64.0);
                let q = (1.0 - r * r) * omega_weight(r).unwrap() * ((f.eval(z) - f0) / z).norm();
                assert!(q <= 1.0 + 1e-9, "z={z} q={q}");
            }
        }
    }

    #[test]
    fn growth_bound_from_seminorm() {
        // |g(z)| <= ||g||_B * 0.5 log((1+|z|)/(1-|z|)) when g(0) = 0.
        let g = PowerSeries::new(vec![c(0.0, 0.0), c(0.4, 0.1), c(-0.3, 0.25), c(0.1, -0.2)]);
        let s = bloch_seminorm_refined(&g);
        for i in 1..30 {
            let r = i as f64 / 31.0;
            for j in 0..32 {
                let z = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / 32.0);
                let cap = s * 0.5 * ((1.0 + r) / (1.0 - r)).ln();
                assert!(g.eval(z).norm() <= cap + 1e-10);
            }
        }
    }

    #[test]
    fn decompose_linear_is_trivial() {
        let g = PowerSeries::monomial(1, c(1.0, 0.0));
        let d = bloch_decompose(&g).unwrap();
        assert!(d.nu_sup < 1e-12, "g' constant means nu vanishes");
        assert!((d.g_remainder.eval(c(0.3, 0.3)) - c(0.3, 0.3)).norm() < 1e-10);
    }

    #[test]
    fn decompose_reconstructs_square() {
        let g = PowerSeries::monomial(2, c(1.0, 0.0));
        let d = bloch_decompose(&g).unwrap();
        assert!(d.residual < 1e-8, "residual={}", d.residual);
    }

    #[test]
    fn decompose_norm_bounds_for_log() {
        let g = half_log_ratio(801);
        let s = bloch_seminorm_refined(&g);
        let d = bloch_decompose(&g).unwrap();
        assert!(d.nu_sup <= s + 1e-6, "nu_sup={} seminorm={s}", d.nu_sup);
        assert!(d.remainder_sup <= 6.0 * s + 1e-3, "remainder_sup={}", d.remainder_sup);
        assert!(d.residual < 1e-7, "residual={}", d.residual);
    }

    #[test]
    fn constant5_holds_and_degenerates() {
        // Frozen value at z = 0: the weight integrates to exactly 7/6.
        let at_zero = constant5_check(&[c(0.0, 0.0)]);
        assert!((at_zero - 7.0 / 6.0).abs() < 1e-12, "{at_zero}");

        let zs: Vec<Complex64> = (0..40)
            .map(|k| Complex64::from_polar(0.999 * k as f64 / 39.0, 0.37 * k as f64))
            .collect();
        let m = constant5_check(&zs);
        assert!(m <= 5.0, "constant-5 violated: {m}");

        // Degenerate weight check: omega == 1 makes the integrand vanish.
        assert_eq!(radial_kernel_integral(|_| 0.0, c(0.5, 0.2)), 0.0);

        // 2-D quadrature oracle at a couple of points.
        let grid = Arc::new(PolarGrid::new(RadialRule::gauss_panels(&[0.0, 0.5, 1.0], 96), 512).unwrap());
        for z in [c(0.0, 0.0), c(0.6, 0.2)] {
            let f = DiskField::from_fn(grid.clone(), |w| {
                let om = omega_weight(w.norm()).unwrap();
                c(
                    (1.0 - om) / om / (c(1.0, 0.0) - z * w.conj()).norm_sqr(),
                    0.0,
                )
            })
            .unwrap();
            let direct = disk_integral(&f).unwrap().re;
            let reduced = radial_kernel_integral(
                |t| {
                    let om = omega_weight(t).unwrap();
                    (1.0 - om) / om
                },
                z,
            );
            assert!((direct - reduced).abs() < 1e-10, "z={z}: {direct} vs {reduced}");
        }
    }
}
