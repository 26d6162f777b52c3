//! Property tests for the algebraic invariants, with independent oracles
//! where the spec names one (midpoint quadrature against the Gauss rule,
//! Parseval against direct circle sums).

use blochvar::dimension::{desymmetrize, symmetrize};
use blochvar::grids::{
    circle_integral, disk_integral, CircleSamples, DiskField, PolarGrid, PowerSeries, RadialRule,
};
use blochvar::transforms::mobius;
use blochvar::variance::{betterest_exponent, marshall_bound_check, tail_integral};
use num_complex::Complex64;
use proptest::prelude::*;
use std::sync::Arc;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn small_complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| c(re, im))
}

fn disk_point(max_norm: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max_norm, 0.0..std::f64::consts::TAU).prop_map(|(r, th)| Complex64::from_polar(r, th))
}

fn short_series() -> impl Strategy<Value = PowerSeries> {
    prop::collection::vec(small_complex(), 1..10).prop_map(PowerSeries::new)
}

/// Midpoint polar rule, deliberately different from the production
/// Gauss-Legendre radial rule.
fn midpoint_disk_integral(f: impl Fn(Complex64) -> Complex64, nr: usize, na: usize) -> Complex64 {
    let mut acc = c(0.0, 0.0);
    for i in 0..nr {
        let r = (i as f64 + 0.5) / nr as f64;
        let mut mean = c(0.0, 0.0);
        for j in 0..na {
            let z = Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / na as f64);
            mean += f(z);
        }
        acc += mean / na as f64 * (2.0 * r / nr as f64);
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circle_quadrature_isolates_the_mean(g in short_series(), r in 0.1..0.95f64) {
        let samples = CircleSamples::new(r, g.eval_on_circle(r, 64)).unwrap();
        let v = circle_integral(&samples).unwrap();
        prop_assert!((v - g.coeffs[0]).norm() < 1e-12);
    }

    #[test]
    fn gauss_disk_rule_matches_midpoint_oracle(a in 0u32..4, b in 0u32..4, w in small_complex()) {
        let grid = Arc::new(PolarGrid::new(RadialRule::gauss(96), 64).unwrap());
        let f = |z: Complex64| w * z.powu(a) * z.conj().powu(b) + z.powu(a + 1);
        let fine = DiskField::from_fn(grid, f).unwrap();
        let quick = disk_integral(&fine).unwrap();
        let oracle = midpoint_disk_integral(f, 4000, 64);
        prop_assert!((quick - oracle).norm() < 1e-6, "{quick} vs {oracle}");
    }

    #[test]
    fn parseval_agrees_with_direct_sum(g in short_series(), r in 0.1..0.99f64) {
        let n = 128;
        let direct: f64 =
            g.eval_on_circle(r, n).iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
        prop_assert!((direct - g.mean_square_dilate(r)).abs() < 1e-11);
    }

    #[test]
    fn mobius_is_involutive(zeta in disk_point(0.95), z in disk_point(1.0)) {
        let w = mobius(zeta, z).unwrap();
        prop_assert!(w.norm() <= 1.0 + 1e-12);
        let back = mobius(zeta, w).unwrap();
        prop_assert!((back - z).norm() < 1e-10);
    }

    #[test]
    fn pointwise_subadditivity_split(xi in small_complex(), eta in small_complex(), alpha in 0.01..20.0f64) {
        let lhs = (xi + eta).norm_sqr();
        let rhs = (1.0 + alpha) * xi.norm_sqr() + (1.0 + 1.0 / alpha) * eta.norm_sqr();
        prop_assert!(lhs <= rhs * (1.0 + 1e-13) + 1e-300);
    }

    #[test]
    fn symmetrization_inverts(k in 0.0..0.999f64) {
        prop_assert!((symmetrize(desymmetrize(k).unwrap()).unwrap() - k).abs() < 1e-14);
    }

    #[test]
    fn marshall_square_never_fails(g in short_series(), sigma in 0.3..3.0f64,
                                   t in small_complex(), r in 0.1..0.999f64) {
        let m = marshall_bound_check(&g, sigma, 4.0 * t, r).unwrap();
        if !m.flagged {
            prop_assert!(m.lhs <= m.rhs * (1.0 + 1e-11), "{} vs {}", m.lhs, m.rhs);
        }
    }

    #[test]
    fn tail_integral_jensen_floor(g in short_series(), a in 0.0..3.0f64, r in 0.1..0.999f64) {
        let s = tail_integral(&g, a, r).unwrap();
        if !s.flagged {
            prop_assert!(s.value >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn refined_exponent_piecewise_form(a in 0.05..0.95f64, t_abs in 0.0..6.0f64) {
        let t = c(t_abs, 0.0);
        let v = betterest_exponent(a, t).unwrap();
        if t_abs <= 2.0 * a {
            prop_assert!((v + t_abs * t_abs / (4.0 * a)).abs() < 1e-14);
        } else {
            prop_assert!((v - (a - t_abs)).abs() < 1e-14);
        }
        // Continuity across the splice from either side.
        let splice = 2.0 * a;
        let lo = betterest_exponent(a, c(splice - 1e-10, 0.0)).unwrap();
        let hi = betterest_exponent(a, c(splice + 1e-10, 0.0)).unwrap();
        prop_assert!((lo - hi).abs() < 1e-9);
    }
}
