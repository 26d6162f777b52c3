//! Quasicircle dimension machinery: the quadratic whose root bounds the
//! box-counting dimension, the explicit root with its validity interval,
//! and the symmetrization between one-sided and two-sided dilatation.

use crate::error::{Error, Result};

/// `F(k, t) = k^2 t^2 (1+7k)^2 / 4 - t + 1`.
pub fn f_quadratic(k: f64, t: f64) -> f64 {
    let s = 1.0 + 7.0 * k;
    0.25 * k * k * t * t * s * s - t + 1.0
}

pub fn f_quadratic_dt(k: f64, t: f64) -> f64 {
    let s = 1.0 + 7.0 * k;
    0.5 * k * k * t * s * s - 1.0
}

/// Upper end of the validity interval, (sqrt(15) - 1)/14 = 0.205...
pub fn validity_sup() -> f64 {
    (15.0f64.sqrt() - 1.0) / 14.0
}

/// The root of F(k, .) in (1, 2): `t_k = 2/(1 + sqrt(1 - k^2 (1+7k)^2))`.
///
/// The closed form is defended against transcription drift: the general
/// quadratic formula must produce the same root, F must change sign across
/// it, and the t-derivative must be negative there.
pub fn t_k(k: f64) -> Result<f64> {
    if !(k > 0.0 && k < validity_sup()) {
        return Err(Error::OutsideValidityInterval);
    }
    let x = k * k * (1.0 + 7.0 * k) * (1.0 + 7.0 * k);
    let root = 2.0 / (1.0 + (1.0 - x).sqrt());

    // Independent quadratic solver on a t^2 + b t + c with a = x/4.
    let (a, b, c) = (0.25 * x, -1.0, 1.0);
    let disc = (b * b - 4.0 * a * c).sqrt();
    let q = -0.5 * (b + b.signum() * disc);
    let r1 = q / a;
    let r2 = c / q;
    let small = r1.min(r2);
    assert!(
        (small - root).abs() < 1e-12 * root,
        "closed-form root drifted from the quadratic solver: {root} vs {small}"
    );
    assert!(root > 1.0 && root < 2.0, "root left (1, 2): {root}");
    let eps = 1e-7;
    assert!(
        f_quadratic(k, root - eps) > 0.0 && f_quadratic(k, root + eps) < 0.0,
        "no sign change at the root"
    );
    assert!(f_quadratic_dt(k, root) < 0.0, "t-derivative not negative at the root");
    Ok(root)
}

/// One-sided dilatation from the two-sided one: `k = 2k'/(1 + k'^2)`.
pub fn symmetrize(k_prime: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k_prime) {
        return Err(Error::OutOfDomain { name: "k_prime", value: k_prime, domain: "[0, 1]" });
    }
    Ok(2.0 * k_prime / (1.0 + k_prime * k_prime))
}

/// Inverse of [`symmetrize`] on [0, 1]: `k' = (1 - sqrt(1 - k^2))/k`, 0 at 0.
pub fn desymmetrize(k: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::OutOfDomain { name: "k", value: k, domain: "[0, 1]" });
    }
    if k == 0.0 {
        return Ok(0.0);
    }
    // Conjugate form avoids cancellation for small k; the factored
    // discriminant keeps full precision as k approaches 1.
    Ok(k / (1.0 + ((1.0 - k) * (1.0 + k)).sqrt()))
}

/// Dimension bound report for a two-sided dilatation k'.
#[derive(Debug, Clone, Copy)]
pub struct DimensionReport {
    pub k_prime: f64,
    pub k: f64,
    pub t_k: f64,
    pub f_at_root: f64,
    pub derivative_sign: f64,
    /// t_k - (1 + k'^2), the distance to the quadratic asymptote.
    pub asymptotic_gap: f64,
}

/// Upper bound for the box-counting dimension of a k'-quasicircle:
/// `t_{k(k')}` with `k = 2k'/(1+k'^2)`.
pub fn dim_bound(k_prime: f64) -> Result<DimensionReport> {
    let k = symmetrize(k_prime)?;
    let root = t_k(k)?;
    Ok(DimensionReport {
        k_prime,
        k,
        t_k: root,
        f_at_root: f_quadratic(k, root),
        derivative_sign: f_quadratic_dt(k, root),
        asymptotic_gap: root - 1.0 - k_prime * k_prime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_values() {
        for k in [0.05, 0.1, 0.3, 0.9] {
            assert_eq!(f_quadratic(k, 0.0), 1.0);
        }
        assert!((f_quadratic(0.1, 1.0) - 0.007225).abs() < 1e-15);
    }

    #[test]
    fn root_values_and_validity() {
        // k -> 0+: t_k -> 1.
        assert!((t_k(1e-6).unwrap() - 1.0).abs() < 1e-11);
        // Frozen formula evaluation.
        assert!((t_k(0.1).unwrap() - 1.0073313259923518).abs() < 1e-14);
        // Root residual across the domain.
        for i in 1..=20 {
            let k = 0.01 * i as f64;
            let root = t_k(k).unwrap();
            assert!(f_quadratic(k, root).abs() < 1e-12, "k={k}");
            assert!(f_quadratic_dt(k, root) < 0.0);
        }
        assert_eq!(t_k(0.206).unwrap_err(), Error::OutsideValidityInterval);
        assert_eq!(t_k(0.0).unwrap_err(), Error::OutsideValidityInterval);
    }

    #[test]
    fn asymptotic_gap_series_oracle() {
        // t_k = 1 + x/4 + O(x^2) with x = k^2(1+7k)^2, so
        // t_k - 1 - k^2/4 ~ 3.5 k^3 for small k.
        let k = 0.01;
        let gap = t_k(k).unwrap() - 1.0 - k * k / 4.0;
        // Next order is 12.25 k^4, i.e. 0.1225 on the ratio at this k.
        assert!((gap / (k * k * k) - 3.5).abs() < 0.2, "gap={gap}");
        let k = 1e-4;
        let gap = t_k(k).unwrap() - 1.0 - k * k / 4.0;
        assert!((gap / (k * k * k) - 3.5).abs() < 0.01, "gap={gap}");
    }

    #[test]
    fn symmetrization_round_trip() {
        assert_eq!(symmetrize(0.0).unwrap(), 0.0);
        assert_eq!(symmetrize(1.0).unwrap(), 1.0);
        assert!((symmetrize(0.1).unwrap() - 0.2 / 1.01).abs() < 1e-16);
        for i in 0..100 {
            let kp = i as f64 / 100.0;
            let back = desymmetrize(symmetrize(kp).unwrap()).unwrap();
            assert!((back - kp).abs() < 1e-14, "kp={kp}");
        }
    }

    #[test]
    fn dim_bound_reports() {
        // k' -> 0: bound -> 1.
        assert!((dim_bound(1e-5).unwrap().t_k - 1.0).abs() < 1e-9);

        let rep = dim_bound(0.05).unwrap();
        assert!((rep.k - 0.09975).abs() < 1e-4);
        assert!(rep.f_at_root.abs() < 1e-14 && rep.derivative_sign < 0.0);

        // k' = 0.1 keeps k = 0.198... inside the validity interval.
        let rep = dim_bound(0.1).unwrap();
        assert!(rep.k < validity_sup());
        assert!(rep.t_k > 1.0 && rep.t_k < 2.0);

        // The true leading gap coefficient in powers of k' is
        // 3.5 * 2^3 = 28: the k-expansion coefficient times the cube of
        // dk/dk' at zero. Pinned here so any change shows up loudly.
        let kp = 0.001;
        let ratio = dim_bound(kp).unwrap().asymptotic_gap / (kp * kp * kp);
        assert!((ratio - 28.0).abs() < 0.5, "ratio={ratio}");
    }
}
