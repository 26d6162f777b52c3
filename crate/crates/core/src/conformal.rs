//! Univalent-map distortion: the local distortion exponent of a normalized
//! schlicht map, its exterior counterpart, Goluzin's inequality with the
//! complete elliptic integrals, and the density whose projection rebuilds
//! the distortion exponent.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grids::{DiskField, PolarGrid, PowerSeries};
use crate::transforms::moments_of_field;

/// A normalized univalent map phi: D -> C, phi(0) = 0, phi'(0) = 1.
#[derive(Debug, Clone)]
pub enum SchlichtMap {
    Identity,
    /// z / (1 - u z)^2 with |u| = 1.
    Koebe { rotation: f64 },
    /// phi = int_0^z exp(h(w)) dw for a Bloch datum h with h(0) = 0 and
    /// seminorm at most 1; univalence comes with the construction, the
    /// seminorm bound is the caller's responsibility.
    FromDistortion {
        h: PowerSeries,
        phi: PowerSeries,
        g: PowerSeries,
    },
}

/// Series length used for generated maps; exp of a polynomial has
/// super-exponentially decaying coefficients, so this is ample.
const GENERATED_LEN: usize = 192;

impl SchlichtMap {
    /// Build the map from its distortion exponent h = log phi'.
    pub fn from_distortion(h: PowerSeries) -> Result<Self> {
        if h.coeffs.first().map(|c| c.norm()).unwrap_or(0.0) > 1e-12 {
            return Err(Error::NotNormalized("distortion exponent must vanish at the origin"));
        }
        let phi_prime = h.exp_truncated(GENERATED_LEN);
        let phi = phi_prime.integral();
        // g = h - 2 log(phi/z).
        let over_z = PowerSeries::new(phi.coeffs[1..].to_vec());
        let g = h.sub(&over_z.log_truncated(GENERATED_LEN)?.scale(Complex64::new(2.0, 0.0)));
        Ok(SchlichtMap::FromDistortion { h, phi, g })
    }

    pub fn phi(&self, z: Complex64) -> Complex64 {
        match self {
            SchlichtMap::Identity => z,
            SchlichtMap::Koebe { rotation } => {
                let u = Complex64::from_polar(1.0, *rotation);
                let d = Complex64::new(1.0, 0.0) - u * z;
                z / (d * d)
            }
            SchlichtMap::FromDistortion { phi, .. } => phi.eval(z),
        }
    }

    /// `h'_phi = phi''/phi'`.
    pub fn h_prime(&self, z: Complex64) -> Complex64 {
        match self {
            SchlichtMap::Identity => Complex64::new(0.0, 0.0),
            SchlichtMap::Koebe { rotation } => {
                let u = Complex64::from_polar(1.0, *rotation);
                let one = Complex64::new(1.0, 0.0);
                u / (one + u * z) + 3.0 * u / (one - u * z)
            }
            SchlichtMap::FromDistortion { h, .. } => h.derivative().eval(z),
        }
    }

    /// The exterior distortion exponent `g_phi(z) = log(z^2 phi'/phi^2)`,
    /// continued from g(0) = 0 (series route, branch-safe).
    pub fn g_value(&self, z: Complex64) -> Complex64 {
        match self {
            SchlichtMap::Identity => Complex64::new(0.0, 0.0),
            SchlichtMap::Koebe { rotation } => {
                let u = Complex64::from_polar(1.0, *rotation);
                (Complex64::new(1.0, 0.0) - u * u * z * z).ln()
            }
            SchlichtMap::FromDistortion { g, .. } => g.eval(z),
        }
    }

    pub fn g_derivative(&self, z: Complex64) -> Complex64 {
        match self {
            SchlichtMap::Identity => Complex64::new(0.0, 0.0),
            SchlichtMap::Koebe { rotation } => {
                let u = Complex64::from_polar(1.0, *rotation);
                let u2 = u * u;
                -2.0 * u2 * z / (Complex64::new(1.0, 0.0) - u2 * z * z)
            }
            SchlichtMap::FromDistortion { g, .. } => g.derivative().eval(z),
        }
    }
}

/// Pointwise evaluation of `log(z^2 phi'(z)/phi(z)^2)` by the defining
/// formula (principal branch); the series route in [`SchlichtMap::g_value`]
/// is the branch-safe one, this is its independent cross-check.
pub fn g_phi_formula(map: &SchlichtMap, z: Complex64) -> Result<Complex64> {
    if z.norm() >= 1.0 {
        return Err(Error::OutOfDomain { name: "z", value: z.norm(), domain: "|z| < 1" });
    }
    if z.norm() < 1e-8 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let phi = map.phi(z);
    if phi.norm() < 1e-280 {
        return Err(Error::NotNormalized("map vanishes away from the origin"));
    }
    let phi_prime = match map {
        SchlichtMap::Identity => Complex64::new(1.0, 0.0),
        SchlichtMap::Koebe { rotation } => {
            let u = Complex64::from_polar(1.0, *rotation);
            let one = Complex64::new(1.0, 0.0);
            (one + u * z) / (one - u * z).powu(3)
        }
        SchlichtMap::FromDistortion { h, .. } => h.eval(z).exp(),
    };
    Ok((z * z * phi_prime / (phi * phi)).ln())
}

/// Exterior maps psi(zeta) = zeta + O(1) with computable distortion.
#[derive(Debug, Clone)]
pub enum ExteriorMap {
    Identity,
    /// zeta + 1/zeta.
    Joukowski,
    /// 1/phi(1/zeta) for a schlicht phi.
    OfSchlicht(Arc<SchlichtMap>),
}

impl ExteriorMap {
    /// `zeta h'_psi(zeta)` with `h_psi = log psi'`.
    pub fn zeta_h_prime(&self, zeta: Complex64) -> Result<Complex64> {
        if zeta.norm() <= 1.0 {
            return Err(Error::OutOfDomain { name: "zeta", value: zeta.norm(), domain: "|zeta| > 1" });
        }
        match self {
            ExteriorMap::Identity => Ok(Complex64::new(0.0, 0.0)),
            ExteriorMap::Joukowski => Ok(2.0 / (zeta * zeta - 1.0)),
            ExteriorMap::OfSchlicht(map) => {
                // h_psi(zeta) = g_phi(1/zeta), so zeta h'_psi = -g'_phi(1/zeta)/zeta.
                let z = 1.0 / zeta;
                Ok(-map.g_derivative(z) * z)
            }
        }
    }
}

/// Complete elliptic integrals in the modulus convention:
/// `E(s) = int_0^1 sqrt((1-s^2 t^2)/(1-t^2)) dt`,
/// `K(s) = int_0^1 dt/sqrt((1-s^2 t^2)(1-t^2))`,
/// by the arithmetic-geometric mean; K(1) is the +infinity marker.
pub fn elliptic_ek(s: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutOfDomain { name: "s", value: s, domain: "[0, 1]" });
    }
    if s == 1.0 {
        return Ok((1.0, f64::INFINITY));
    }
    let mut a = 1.0f64;
    let mut b = (1.0 - s * s).sqrt();
    let mut c = s;
    let mut sum = 0.5 * c * c;
    let mut pow2 = 1.0;
    for _ in 0..60 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        c = 0.5 * (a - b);
        pow2 *= 2.0;
        sum += 0.5 * pow2 * c * c;
        a = an;
        b = bn;
        if c.abs() < 1e-17 * a {
            break;
        }
    }
    let k = PI / (2.0 * a);
    let e = k * (1.0 - sum);
    Ok((e, k))
}

#[derive(Debug, Clone, Copy)]
pub struct GoluzinCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub simple_lhs: f64,
    pub simple_rhs: f64,
}

/// Goluzin's distortion inequality at an exterior point, full form with
/// the elliptic ratio and the simplified `|zeta h'| <= 6/(|zeta|^2 - 1)`.
pub fn goluzin_check(zeta_h_prime: Complex64, zeta: Complex64) -> Result<GoluzinCheck> {
    let r2 = zeta.norm_sqr();
    if r2 <= 1.0 {
        return Err(Error::OutOfDomain { name: "zeta", value: r2.sqrt(), domain: "|zeta| > 1" });
    }
    let (e, k) = elliptic_ek(1.0 / r2.sqrt())?;
    let ratio = e / k;
    let lhs = (zeta_h_prime + (4.0 * r2 - 2.0) / (r2 - 1.0) - 4.0 * r2 / (r2 - 1.0) * ratio).norm();
    let rhs = 4.0 * r2 / (r2 - 1.0) * (1.0 - ratio);
    Ok(GoluzinCheck {
        lhs,
        rhs,
        simple_lhs: zeta_h_prime.norm(),
        simple_rhs: 6.0 / (r2 - 1.0),
    })
}

/// The density `nu_phi(z) = (1-|z|^2) g'_phi(z)/z` whose shifted projection
/// rebuilds `g_phi`; its sup stays below 6 by the simplified Goluzin bound.
pub fn nu_phi(map: &SchlichtMap, grid: Arc<PolarGrid>) -> Result<DiskField> {
    let g2 = match map {
        SchlichtMap::Identity => Complex64::new(0.0, 0.0),
        SchlichtMap::Koebe { rotation } => {
            // g = log(1 - u^2 z^2): g''(0) = -2u^2.
            let u = Complex64::from_polar(1.0, *rotation);
            -2.0 * u * u
        }
        SchlichtMap::FromDistortion { g, .. } => {
            g.coeffs.get(2).copied().unwrap_or_default() * 2.0
        }
    };
    DiskField::from_fn(grid, |z| {
        let t = z.norm();
        if t < 1e-13 {
            g2
        } else {
            (1.0 - t * t) * map.g_derivative(z) / z
        }
    })
}

/// `z^2 P nu_phi` as a series, for the reconstruction check.
pub fn nu_phi_projection(field: &DiskField, degree: usize) -> PowerSeries {
    let moments = moments_of_field(field, degree + 1, true);
    PowerSeries::new(
        moments
            .iter()
            .enumerate()
            .map(|(j, m)| m * (j as f64 + 1.0))
            .collect(),
    )
    .shift(2)
}

/// Same projection at high angular resolution, streamed row by row so the
/// field is never materialized. Needed because boundary-singular maps
/// (Koebe above all) have angular modes decaying only like the radial
/// damping, which floors the standard grid's moments at O(1/N^2).
pub fn nu_phi_projection_fine(
    map: &SchlichtMap,
    degree: usize,
    radial_n: usize,
    angles: usize,
) -> PowerSeries {
    use crate::grids::{fft_forward, RadialRule};
    use rayon::prelude::*;

    let rule = RadialRule::gauss(radial_n);
    let rows: Vec<Vec<Complex64>> = rule
        .nodes
        .par_iter()
        .zip(rule.weights.par_iter())
        .map(|(&rho, &w)| {
            let mut row: Vec<Complex64> = (0..angles)
                .map(|j| {
                    let z = Complex64::from_polar(rho, 2.0 * PI * j as f64 / angles as f64);
                    (1.0 - rho * rho) * map.g_derivative(z) / z
                })
                .collect();
            fft_forward(&mut row);
            let mut partial = vec![Complex64::new(0.0, 0.0); degree + 1];
            let mut rp = 1.0; // rho^m; the area weight already carries 2 rho
            for (m, p) in partial.iter_mut().enumerate() {
                *p = row[m % angles] / angles as f64 * (w * rp);
                rp *= rho;
            }
            partial
        })
        .collect();
    let mut moments = vec![Complex64::new(0.0, 0.0); degree + 1];
    for partial in rows {
        for (m, p) in partial.into_iter().enumerate() {
            moments[m] += p;
        }
    }
    PowerSeries::new(
        moments
            .iter()
            .enumerate()
            .map(|(j, m)| m * (j as f64 + 1.0))
            .collect(),
    )
    .shift(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::gauss_legendre;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn g_of_identity_and_koebe() {
        let id = SchlichtMap::Identity;
        assert_eq!(id.g_value(c(0.3, 0.2)), c(0.0, 0.0));

        // Symbolic simplification for the Koebe map: z^2 phi'/phi^2 = 1 - z^2.
        let koebe = SchlichtMap::Koebe { rotation: 0.0 };
        for z in [c(0.4, 0.1), c(-0.6, 0.3), c(0.0, 0.8)] {
            let want = (c(1.0, 0.0) - z * z).ln();
            assert!((koebe.g_value(z) - want).norm() < 1e-14);
            let formula = g_phi_formula(&koebe, z).unwrap();
            assert!((formula - want).norm() < 1e-12, "z={z}");
        }
    }

    #[test]
    fn pointwise_distortion_bound() {
        // |g_phi(z)| <= log(1/(1-|z|^2)), equality for Koebe on the real axis.
        let koebe = SchlichtMap::Koebe { rotation: 0.0 };
        for k in 1..20 {
            let x = k as f64 / 21.0;
            let cap = (1.0 / (1.0 - x * x)).ln();
            let v = koebe.g_value(c(x, 0.0)).norm();
            assert!((v - cap).abs() < 1e-12, "Koebe attains the cap on the axis");
            let v = koebe.g_value(Complex64::from_polar(x, 1.1)).norm();
            assert!(v <= cap + 1e-12);
        }
    }

    #[test]
    fn generated_map_matches_formula_route() {
        // Small distortion datum; series evaluation of g agrees with the
        // principal-branch formula inside the disk.
        let h = PowerSeries::new(vec![c(0.0, 0.0), c(0.3, 0.1), c(-0.15, 0.2), c(0.05, -0.1)]);
        let map = SchlichtMap::from_distortion(h).unwrap();
        for z in [c(0.5, 0.2), c(-0.3, -0.6), c(0.85, 0.0)] {
            let series = map.g_value(z);
            let formula = g_phi_formula(&map, z).unwrap();
            assert!((series - formula).norm() < 1e-10, "z={z} {series} vs {formula}");
        }
        // phi(0) = 0, phi'(0) = 1.
        assert!(map.phi(c(0.0, 0.0)).norm() < 1e-15);
        let h = 1e-6;
        let d = (map.phi(c(h, 0.0)) - map.phi(c(0.0, 0.0))) / h;
        assert!((d - 1.0).norm() < 1e-5);
    }

    #[test]
    fn elliptic_values_and_ratio_bounds() {
        let (e, k) = elliptic_ek(0.0).unwrap();
        assert!((e - PI / 2.0).abs() < 1e-15 && (k - PI / 2.0).abs() < 1e-15);
        let (e, k) = elliptic_ek(1.0).unwrap();
        assert!(e == 1.0 && k.is_infinite());
        for i in 1..=99 {
            let s = i as f64 / 100.0;
            let (e, k) = elliptic_ek(s).unwrap();
            let ratio = e / k;
            assert!(ratio <= 1.0 + 1e-15 && ratio >= 1.0 - s * s - 1e-13, "s={s}");
        }
    }

    #[test]
    fn elliptic_agrees_with_quadrature_oracle() {
        // Independent oracle: Gauss-Legendre after t = sin(theta), which
        // absorbs the K endpoint singularity.
        let (x, w) = gauss_legendre(200);
        for s in [0.1, 0.5, 0.9, 0.99] {
            let mut ke = 0.0;
            let mut ee = 0.0;
            for i in 0..x.len() {
                let theta = (x[i] + 1.0) * PI / 4.0;
                let jac = w[i] * PI / 4.0;
                let root = (1.0 - s * s * theta.sin().powi(2)).sqrt();
                ke += jac / root;
                ee += jac * root;
            }
            let (e, k) = elliptic_ek(s).unwrap();
            assert!((k - ke).abs() < 1e-12, "K at s={s}: {k} vs {ke}");
            assert!((e - ee).abs() < 1e-12, "E at s={s}: {e} vs {ee}");
        }
    }

    #[test]
    fn goluzin_joukowski() {
        // zeta h' = 2/(zeta^2-1); at zeta = 2 the simple form reads 2/3 <= 2.
        let m = ExteriorMap::Joukowski;
        let v = m.zeta_h_prime(c(2.0, 0.0)).unwrap();
        assert!((v - c(2.0 / 3.0, 0.0)).norm() < 1e-15);
        let g = goluzin_check(v, c(2.0, 0.0)).unwrap();
        assert!(g.lhs <= g.rhs + 1e-12 && g.simple_lhs <= g.simple_rhs);

        // Imaginary axis: |2/(-R^2-1)| <= 6/(R^2-1).
        for rr in [1.5f64, 3.0, 10.0] {
            let zeta = c(0.0, rr);
            let v = m.zeta_h_prime(zeta).unwrap();
            assert!((v.norm() - 2.0 / (rr * rr + 1.0)).abs() < 1e-13);
            let g = goluzin_check(v, zeta).unwrap();
            assert!(g.lhs <= g.rhs + 1e-12, "R={rr}: {} vs {}", g.lhs, g.rhs);
            assert!(g.simple_lhs <= g.simple_rhs);
        }

        let id = ExteriorMap::Identity;
        let g = goluzin_check(id.zeta_h_prime(c(1.4, 0.0)).unwrap(), c(1.4, 0.0)).unwrap();
        assert!(g.lhs <= g.rhs + 1e-12, "centering term alone: {} vs {}", g.lhs, g.rhs);
        assert!(goluzin_check(c(0.0, 0.0), c(0.9, 0.0)).is_err());
    }

    #[test]
    fn koebe_exterior_map_is_explicit() {
        // psi(zeta) = 1/phi(1/zeta) = zeta - 2 + 1/zeta for the Koebe map:
        // h_psi(zeta) = log(1 - zeta^{-2}) = g_phi(1/zeta).
        let koebe = SchlichtMap::Koebe { rotation: 0.0 };
        let m = ExteriorMap::OfSchlicht(Arc::new(koebe.clone()));
        for zeta in [c(1.7, 0.4), c(-2.0, 1.0), c(5.0, -3.0)] {
            let direct = 2.0 / (zeta * (zeta * zeta - 1.0)) * zeta;
            let via = m.zeta_h_prime(zeta).unwrap();
            assert!((via - direct).norm() < 1e-13, "zeta={zeta}");
            let g = koebe.g_value(1.0 / zeta);
            let h_psi = (c(1.0, 0.0) - 1.0 / (zeta * zeta)).ln();
            assert!((g - h_psi).norm() < 1e-13);
        }
    }

    #[test]
    fn koebe_bieberbach_on_grid() {
        // |(1-|z|^2) h'_phi - 2 conj(z)| <= 4 for schlicht maps.
        let maps = [
            SchlichtMap::Identity,
            SchlichtMap::Koebe { rotation: 0.0 },
            SchlichtMap::Koebe { rotation: 2.2 },
            SchlichtMap::from_distortion(PowerSeries::new(vec![
                c(0.0, 0.0),
                c(0.25, 0.1),
                c(0.0, -0.2),
            ]))
            .unwrap(),
        ];
        for map in &maps {
            for i in 0..30 {
                let z = Complex64::from_polar(0.97 * i as f64 / 30.0, 0.71 * i as f64);
                let v = ((1.0 - z.norm_sqr()) * map.h_prime(z) - 2.0 * z.conj()).norm();
                assert!(v <= 4.0 + 1e-10, "map={map:?} z={z} v={v}");
            }
        }
    }

    #[test]
    fn nu_phi_koebe_and_reconstruction() {
        let grid = Arc::new(PolarGrid::standard(200, 1024));
        let id_field = nu_phi(&SchlichtMap::Identity, grid.clone()).unwrap();
        assert!(id_field.values.iter().all(|v| v.norm() < 1e-14));

        let koebe = SchlichtMap::Koebe { rotation: 0.0 };
        let field = nu_phi(&koebe, grid.clone()).unwrap();
        // Symbolic value: -2 (1-|z|^2)/(1-z^2); sup norm 2 <= 6.
        let sup = field.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(sup <= 2.0 + 1e-10, "sup={sup}");
        for i in [3usize, 77, 150] {
            for j in [0usize, 91, 512] {
                let z = grid.node(i, j);
                let want = -2.0 * (1.0 - z.norm_sqr()) / (c(1.0, 0.0) - z * z);
                let got = field.values[i * grid.angles + j];
                assert!((got - want).norm() < 1e-12);
            }
        }

        // The standard grid floors near 1e-4 on this boundary-singular map;
        // the streamed fine-resolution path reaches the 1e-8 contract on
        // |z| <= 0.8 at truncation 256.
        let coarse = nu_phi_projection(&field, 256);
        let mut worst_coarse = 0.0f64;
        let fine = nu_phi_projection_fine(&koebe, 256, 280, 1 << 17);
        let mut worst = 0.0f64;
        for k in 0..40 {
            let z = Complex64::from_polar(0.8 * k as f64 / 39.0, 0.41 * k as f64);
            worst_coarse = worst_coarse.max((coarse.eval(z) - koebe.g_value(z)).norm());
            worst = worst.max((fine.eval(z) - koebe.g_value(z)).norm());
        }
        assert!(worst_coarse < 1e-3, "coarse sanity: {worst_coarse}");
        assert!(worst < 1e-8, "reconstruction residual {worst}");
    }
}
