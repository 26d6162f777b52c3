//! The sharpness machinery: the unimodular symbol `mu0 = (1-conj z)/(1-z)`,
//! the closed form of its Bergman projection, and the lower bound that
//! rules out any uniform tail-integral bound past a = 1.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grids::{AnalyticCoeffs, PowerSeries};
use crate::variance::{tail_integral, TailSample};

/// Closed form of the projection: `(1/z^2) log(1/(1-z)) - 1/z`, with the
/// removable singularity at zero filled by the series value 1/2.
///
/// The principal branch is the right one: 1 - z avoids the cut (-inf, 0]
/// for z in the disk.
pub fn mu0_projection(z: Complex64) -> Result<Complex64> {
    if z.norm() >= 1.0 {
        return Err(Error::OutOfDomain { name: "z", value: z.norm(), domain: "|z| < 1" });
    }
    if z.norm() < 0.25 {
        // sum z^j/(j+2); 40 terms reach machine precision at |z| < 1/4.
        let mut acc = Complex64::new(0.0, 0.0);
        let mut zj = Complex64::new(1.0, 0.0);
        for j in 0..40 {
            acc += zj / (j as f64 + 2.0);
            zj *= z;
        }
        return Ok(acc);
    }
    let log_term = -(Complex64::new(1.0, 0.0) - z).ln();
    Ok(log_term / (z * z) - 1.0 / z)
}

/// Taylor coefficients of the projection: c_j = 1/(j+2).
pub fn mu0_projection_series(len: usize) -> PowerSeries {
    PowerSeries::from_fn(len, |j| Complex64::new(1.0 / (j as f64 + 2.0), 0.0))
}

/// Coefficient rule for the projection, for dilates arbitrarily close to
/// the boundary.
pub fn mu0_projection_evaluable() -> AnalyticCoeffs<impl Fn(usize) -> Complex64 + Sync> {
    AnalyticCoeffs { coeff: |j: usize| Complex64::new(1.0 / (j as f64 + 2.0), 0.0) }
}

/// Coefficient rule for `z^2 P mu0 = log(1/(1-z)) - z`: c_m = 1/m for m >= 2.
pub fn z2_mu0_projection_evaluable() -> AnalyticCoeffs<impl Fn(usize) -> Complex64 + Sync> {
    AnalyticCoeffs {
        coeff: |m: usize| {
            if m >= 2 {
                Complex64::new(1.0 / m as f64, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        },
    }
}

/// `exp(z^2 P mu0(z))` collapses to `e^{-z}/(1-z)`; both sides exposed for
/// the identity check.
pub fn exp_z2_mu0_closed_form(z: Complex64) -> Complex64 {
    (-z).exp() / (Complex64::new(1.0, 0.0) - z)
}

#[derive(Debug, Clone, Copy)]
pub struct LowerBoundCheck {
    pub lhs: TailSample,
    pub rhs: f64,
}

/// Sharpness direction: `I_{P mu0}(a, r) >= e^{-2} (1-r^2)^{-(a-1)/a}` for
/// every a > 0 and 0 < r < 1.
pub fn lower_bound_check(a: f64, r: f64) -> Result<LowerBoundCheck> {
    if a <= 0.0 {
        return Err(Error::OutOfDomain { name: "a", value: a, domain: "(0, inf)" });
    }
    let g = mu0_projection_evaluable();
    let lhs = tail_integral(&g, a, r)?;
    let rhs = (-2.0f64).exp() * (1.0 - r * r).powf(-(a - 1.0) / a);
    Ok(LowerBoundCheck { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::{bergman_project, Symbol};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_form_values() {
        let v = mu0_projection(c(0.5, 0.0)).unwrap();
        assert!((v - (4.0 * 2.0f64.ln() - 2.0)).norm() < 1e-14);

        // Series limit at the origin.
        assert!((mu0_projection(c(0.0, 0.0)).unwrap() - 0.5).norm() < 1e-15);
        // Branch consistency where the two evaluation paths meet.
        let z = c(0.2499, 0.001);
        let series = mu0_projection(z).unwrap();
        let direct = -(c(1.0, 0.0) - z).ln() / (z * z) - 1.0 / z;
        assert!((series - direct).norm() < 1e-13);

        // Real point near the boundary dominates the log growth floor.
        let x = 0.9;
        let v = mu0_projection(c(x, 0.0)).unwrap().re;
        assert!(v >= (1.0 / (x * x)) * (1.0 / (1.0 - x)).ln() - 1.0 / x - 1e-12);

        assert!(mu0_projection(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn near_maximal_growth_on_radius() {
        // P mu0(x) >= (1/x^2) log(1/(1-x^2)) - 1/2 on (0, 1).
        for k in 1..40 {
            let x = k as f64 / 40.0;
            let v = mu0_projection(c(x, 0.0)).unwrap().re;
            let floor = (1.0 / (x * x)) * (1.0 / (1.0 - x * x)).ln() - 0.5;
            assert!(v >= floor - 1e-12, "x={x}");
        }
    }

    #[test]
    fn exp_identity_on_grid() {
        // exp(z^2 P mu0(z)) = e^{-z}(1-z)^{-1} to 1e-12.
        for k in 0..60 {
            let t = k as f64 / 60.0;
            let z = Complex64::from_polar(0.97 * t, 6.0 * t);
            let lhs = (z * z * mu0_projection(z).unwrap()).exp();
            let rhs = exp_z2_mu0_closed_form(z);
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0), "z={z}");
        }
    }

    #[test]
    fn quadrature_projection_matches_closed_form() {
        let p = bergman_project(&Symbol::Mu0, 2048).unwrap();
        for k in 0..25 {
            let z = Complex64::from_polar(0.99 * (k as f64 / 25.0), 2.7 * k as f64);
            let series = p.series.eval(z);
            let exact = mu0_projection(z).unwrap();
            assert!((series - exact).norm() < 1e-8, "z={z} diff={}", (series - exact).norm());
        }
    }

    #[test]
    fn lower_bound_trivial_and_derived() {
        // a = 1: the exponent vanishes and lhs >= 1 >= e^{-2}.
        let lb = lower_bound_check(1.0, 0.9).unwrap();
        assert!(lb.lhs.value >= lb.rhs && (lb.rhs - (-2.0f64).exp()).abs() < 1e-15);

        // a = 2, r^2 = 0.9999: rhs = e^{-2} * 100.
        let r = 0.9999f64.sqrt();
        let lb = lower_bound_check(2.0, r).unwrap();
        assert!((lb.rhs - (-2.0f64).exp() * 100.0).abs() < 1e-9);
        assert!(lb.lhs.value >= lb.rhs, "lhs={} rhs={}", lb.lhs.value, lb.rhs);

        // Spec'd spot value: a = 2, r^2 = 0.99 gives a floor of about 1.353.
        let lb = lower_bound_check(2.0, 0.99f64.sqrt()).unwrap();
        assert!(lb.lhs.value >= (-2.0f64).exp() * 10.0 - 1e-9);
    }

    #[test]
    fn unbounded_growth_for_large_a() {
        // a = 4: the tail integral grows monotonically along the ladder.
        let ladder = crate::grids::RadiiLadder::dyadic(6, 14);
        let g = mu0_projection_evaluable();
        let mut prev = 0.0;
        for &r in &ladder.radii {
            let v = tail_integral(&g, 4.0, r).unwrap().value;
            assert!(v > prev, "r={r} v={v} prev={prev}");
            prev = v;
        }
    }
}
