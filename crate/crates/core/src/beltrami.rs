//! The standard Beltrami solution restricted to circles: Neumann series of
//! the complex derivative, log-derivative motion coefficients extracted by
//! a lambda-contour FFT, the exterior-disk distortion function G(lambda, z)
//! with its growth and derivative bounds, the quasiconformal spectrum bound
//! B(k, t), and the Plancherel averaging inequality.
//!
//! Operator words alternate multiplication by mu on an interior polar grid
//! with Beurling evaluations: exterior values come from moment series,
//! interior values from the mode-split calculus in [`crate::interior`].
//! That interior step is the module's main numerical approximation; its
//! refinement behavior is pinned by the monomial oracles in `interior` and
//! the terminating closed form at mu = 1_D here.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grids::{fft_forward, pairwise_sum, CircleSamples};
use crate::interior::{analyze_modes, beurling_interior, moments_from_modes, OperatorGrid};
use crate::transforms::{
    beurling_exterior_derivative_from_moments, beurling_exterior_from_moments,
    symbol_on_operator_grid, Symbol,
};

/// Contour radius for the lambda-FFT; one code path covers all orders,
/// with the closed forms at j <= 2 as cross-checks.
pub const LAMBDA_CONTOUR_RADIUS: f64 = 0.5;
/// Contour sample count.
pub const LAMBDA_CONTOUR_POINTS: usize = 128;
/// Branch tracking step along rays from lambda = 0.
pub const LAMBDA_RAY_STEP: f64 = 0.05;

/// log(R^2/(R^2-1)), the exterior boundary clock.
pub fn exterior_clock(r: f64) -> f64 {
    (r * r / (r * r - 1.0)).ln()
}

/// Truncated lambda-power-series coefficients of log dPsi on a circle
/// |zeta| = R > 1.
#[derive(Debug, Clone)]
pub struct MotionSeries {
    pub radius: f64,
    /// coefficients[j-1] holds H_hat_j, j = 1..=truncation.
    pub coefficients: Vec<CircleSamples>,
}

impl MotionSeries {
    pub fn truncation(&self) -> usize {
        self.coefficients.len()
    }
}

/// Upper bound for the universal quasiconformal extension spectrum.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumBound {
    pub k: f64,
    pub t: Complex64,
    pub bound: f64,
}

/// `B(k,t) <= k^2|t|^2(1+7k)^2/4`, improved to `k|t| - (1+7k)^{-2}` for
/// `|t| >= 2/(k(1+7k)^2)`; the two branches agree at the splice.
pub fn bk_bound(k: f64, t: Complex64) -> Result<SpectrumBound> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::OutOfDomain { name: "k", value: k, domain: "(0, 1)" });
    }
    let s = 1.0 + 7.0 * k;
    let t_abs = t.norm();
    let quadratic = 0.25 * k * k * t_abs * t_abs * s * s;
    let bound = if t_abs >= 2.0 / (k * s * s) {
        quadratic.min(k * t_abs - 1.0 / (s * s))
    } else {
        quadratic
    };
    Ok(SpectrumBound { k, t, bound })
}

/// Neumann operator words for one symbol: moments of
/// `nu_1 = mu`, `nu_{j+1} = mu * (S nu_j)|_D`, so that the j-th series term
/// is `T_j = S nu_j` evaluated off the disk.
pub struct NeumannTerms {
    pub grid: OperatorGrid,
    pub term_moments: Vec<Vec<Complex64>>,
}

/// Default operator grid for the Beltrami calculus: enough angular modes
/// to control exterior moment tails down to |zeta| ~ 1.05 for rough
/// symbols (smooth symbols reach much closer in).
pub fn beltrami_grid() -> OperatorGrid {
    OperatorGrid::new(8, 16, 1024).expect("valid beltrami grid")
}

impl NeumannTerms {
    pub fn build(mu: &Symbol, terms: usize) -> Self {
        Self::build_on(mu, beltrami_grid(), terms)
    }

    pub fn build_on(mu: &Symbol, grid: OperatorGrid, terms: usize) -> Self {
        assert!(terms >= 1);
        let moment_len = grid.angles / 2 - 1;
        let mu_values = symbol_on_operator_grid(mu, &grid);
        let mut term_moments = Vec::with_capacity(terms);
        // The first word is mu itself: closed-form moments where available
        // (the grid route would alias the slow modes of mu0).
        term_moments.push(mu.moments(moment_len));
        let mut values = mu_values.clone();
        for _ in 1..terms {
            let s_int = beurling_interior(&grid, &values);
            values = mu_values.iter().zip(&s_int).map(|(m, s)| m * s).collect();
            let mf = analyze_modes(&grid, &values);
            term_moments.push(moments_from_modes(&grid, &mf, moment_len));
        }
        NeumannTerms { grid, term_moments }
    }

    pub fn truncation(&self) -> usize {
        self.term_moments.len()
    }

    /// `T_j(zeta) = S nu_j(zeta)`, 1-based, |zeta| > 1.
    pub fn term_value(&self, j: usize, zeta: Complex64) -> Complex64 {
        beurling_exterior_from_moments(&self.term_moments[j - 1], zeta)
    }

    pub fn term_derivative(&self, j: usize, zeta: Complex64) -> Complex64 {
        beurling_exterior_derivative_from_moments(&self.term_moments[j - 1], zeta)
    }

    /// `dPsi(lambda, zeta) = 1 + sum_j lambda^j T_j(zeta)`.
    pub fn dpsi(&self, lambda: Complex64, zeta: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in (1..=self.truncation()).rev() {
            acc = (acc + self.term_value(j, zeta)) * lambda;
        }
        acc + 1.0
    }

    /// zeta-derivative of dPsi.
    pub fn dpsi_dzeta(&self, lambda: Complex64, zeta: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in (1..=self.truncation()).rev() {
            acc = (acc + self.term_derivative(j, zeta)) * lambda;
        }
        acc
    }

    /// `H(lambda, zeta) = log dPsi(lambda, zeta)`, branch tracked by
    /// continuation along the ray from lambda = 0 in steps of at most
    /// `LAMBDA_RAY_STEP`; dPsi is zero-free for |lambda| < 1 but a coarse
    /// step could wind past the principal branch.
    pub fn log_dpsi(&self, lambda: Complex64, zeta: Complex64) -> Result<Complex64> {
        let steps = (lambda.norm() / LAMBDA_RAY_STEP).ceil().max(1.0) as usize;
        let mut h = Complex64::new(0.0, 0.0);
        let mut prev = Complex64::new(1.0, 0.0);
        for s in 1..=steps {
            let l = lambda * (s as f64 / steps as f64);
            let cur = self.dpsi(l, zeta);
            if cur.norm() < 1e-14 {
                return Err(Error::LogBranchLost);
            }
            let ratio = cur / prev;
            if (ratio - 1.0).norm() >= 1.0 {
                return Err(Error::LogBranchLost);
            }
            h += ratio.ln();
            prev = cur;
        }
        Ok(h)
    }

    /// `zeta h'_psi(zeta)` for the frozen-lambda map psi = Psi(lambda, .):
    /// the log derivative needs no branch.
    pub fn zeta_h_prime(&self, lambda: Complex64, zeta: Complex64) -> Complex64 {
        zeta * self.dpsi_dzeta(lambda, zeta) / self.dpsi(lambda, zeta)
    }

    /// Motion coefficients H_hat_j on |zeta| = R by the exact
    /// lambda-contour FFT of log dPsi over |lambda| = 0.5.
    pub fn motion_coefficients(&self, r: f64, truncation: usize, n_angles: usize) -> Result<MotionSeries> {
        if r <= 1.0 {
            return Err(Error::OutOfDomain { name: "R", value: r, domain: "(1, inf)" });
        }
        if truncation < 1 || truncation >= LAMBDA_CONTOUR_POINTS / 2 {
            return Err(Error::OutOfDomain {
                name: "truncation",
                value: truncation as f64,
                domain: "1 ..= 63",
            });
        }
        let q = LAMBDA_CONTOUR_POINTS;
        let mut per_j: Vec<Vec<Complex64>> =
            vec![vec![Complex64::new(0.0, 0.0); n_angles]; truncation];
        for l in 0..n_angles {
            let zeta = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * l as f64 / n_angles as f64);
            let mut ring = Vec::with_capacity(q);
            for m in 0..q {
                let lambda = Complex64::from_polar(
                    LAMBDA_CONTOUR_RADIUS,
                    2.0 * std::f64::consts::PI * m as f64 / q as f64,
                );
                ring.push(self.log_dpsi(lambda, zeta)?);
            }
            fft_forward(&mut ring);
            for j in 1..=truncation {
                per_j[j - 1][l] = ring[j] / (q as f64 * LAMBDA_CONTOUR_RADIUS.powi(j as i32));
            }
        }
        let coefficients = per_j
            .into_iter()
            .map(|values| CircleSamples::new(r, values))
            .collect::<Result<Vec<_>>>()?;
        Ok(MotionSeries { radius: r, coefficients })
    }

    /// `G(lambda, z) = H(lambda, 1/z)/lambda` with the removable lambda = 0
    /// filled by `G(0, z) = T_1(1/z)`.
    pub fn g_lambda(&self, lambda: Complex64, z: Complex64) -> Result<Complex64> {
        if z.norm() >= 1.0 {
            return Err(Error::OutOfDomain { name: "z", value: z.norm(), domain: "|z| < 1" });
        }
        if lambda.norm() >= 1.0 {
            return Err(Error::OutOfDomain { name: "lambda", value: lambda.norm(), domain: "|lambda| < 1" });
        }
        if z.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let zeta = 1.0 / z;
        if lambda.norm() < 1e-12 {
            return Ok(self.term_value(1, zeta));
        }
        Ok(self.log_dpsi(lambda, zeta)? / lambda)
    }

    /// z-derivative of G(lambda, .): `-H_zeta(lambda, 1/z)/(lambda z^2)`.
    pub fn g_lambda_dz(&self, lambda: Complex64, z: Complex64) -> Result<Complex64> {
        if z.norm() == 0.0 || z.norm() >= 1.0 {
            return Err(Error::OutOfDomain { name: "z", value: z.norm(), domain: "0 < |z| < 1" });
        }
        let zeta = 1.0 / z;
        if lambda.norm() < 1e-12 {
            return Ok(-self.term_derivative(1, zeta) / (z * z));
        }
        let h_zeta = self.dpsi_dzeta(lambda, zeta) / self.dpsi(lambda, zeta);
        Ok(-h_zeta / (lambda * z * z))
    }
}

/// One Neumann-series evaluation with convergence diagnostics.
#[derive(Debug, Clone)]
pub struct NeumannValue {
    pub value: Complex64,
    /// |lambda^j T_j(zeta)| per term.
    pub term_magnitudes: Vec<f64>,
    /// Geometric tail estimate from the last two magnitudes; infinite when
    /// the terms fail to decay.
    pub tail_estimate: f64,
}

/// Truncated `dPsi(lambda, zeta) = 1 + sum_{j<=J} lambda^j (S M_mu)^{j-1} S mu`.
pub fn neumann_derivative(
    mu: &Symbol,
    lambda: Complex64,
    zeta: Complex64,
    truncation: usize,
) -> Result<NeumannValue> {
    if lambda.norm() >= 1.0 {
        return Err(Error::OutOfDomain { name: "lambda", value: lambda.norm(), domain: "|lambda| < 1" });
    }
    if zeta.norm() <= 1.0 {
        return Err(Error::InteriorEvaluation);
    }
    let terms = NeumannTerms::build(mu, truncation);
    let mut value = Complex64::new(1.0, 0.0);
    let mut term_magnitudes = Vec::with_capacity(truncation);
    for j in 1..=truncation {
        let t = lambda.powu(j as u32) * terms.term_value(j, zeta);
        term_magnitudes.push(t.norm());
        value += t;
    }
    let tail_estimate = match term_magnitudes.as_slice() {
        [.., a, b] if *b > 0.0 && b < a => b * (b / a) / (1.0 - b / a),
        [.., _, b] if *b == 0.0 => 0.0,
        _ => f64::INFINITY,
    };
    Ok(NeumannValue { value, term_magnitudes, tail_estimate })
}

/// `H_hat_2 = S M_mu S mu - (S mu)^2/2`, the closed combinatorial form
/// used to cross-check the contour extraction.
pub fn hat_h2_formula(terms: &NeumannTerms, zeta: Complex64) -> Complex64 {
    let t1 = terms.term_value(1, zeta);
    terms.term_value(2, zeta) - 0.5 * t1 * t1
}

#[derive(Debug, Clone, Copy)]
pub struct PlancherelCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// Multiplicative truncation allowance from the first dropped
    /// coefficient, propagated through the exponential.
    pub allowance: f64,
}

/// Averaging inequality: the Plancherel sum of coefficient energies is
/// dominated by the worst lambda-slice,
/// `int exp{a sum_j |H_hat_j(R zeta)|^2 / L_R} ds <= sup_lambda int exp{a |H(lambda, R zeta)|^2 / L_R} ds`,
/// checked at truncation J with the sup over the given lambda samples.
pub fn plancherel_average_check(
    terms: &NeumannTerms,
    motion: &MotionSeries,
    a: f64,
    lambda_samples: &[Complex64],
) -> Result<PlancherelCheck> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::OutOfDomain { name: "a", value: a, domain: "(0, 1)" });
    }
    let r = motion.radius;
    let l = exterior_clock(r);
    let n = motion.coefficients[0].len();
    let j_trunc = motion.truncation();

    // lhs: coefficient energy per angle.
    let mut energy = vec![0.0f64; n];
    for coeff in &motion.coefficients {
        for (e, v) in energy.iter_mut().zip(&coeff.values) {
            *e += v.norm_sqr();
        }
    }
    let lhs_terms: Vec<f64> = energy.iter().map(|e| (a * e / l).exp()).collect();
    let lhs = pairwise_sum(&lhs_terms) / n as f64;

    // rhs: sup over lambda samples of the slice integral.
    let mut rhs = 0.0f64;
    for &lambda in lambda_samples {
        let mut acc = Vec::with_capacity(n);
        for j in 0..n {
            let zeta = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
            let h = terms.log_dpsi(lambda, zeta)?;
            acc.push((a * h.norm_sqr() / l).exp());
        }
        rhs = rhs.max(pairwise_sum(&acc) / n as f64);
    }

    // Allowance: the next coefficient's worst-case cross term in the
    // exponent, applied multiplicatively to the lhs.
    let next = terms.motion_coefficients(r, j_trunc + 1, n)?;
    let m_next = next.coefficients[j_trunc]
        .values
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    let e_max = energy.iter().cloned().fold(0.0, f64::max);
    let allowance = lhs * ((a * (m_next * m_next + 2.0 * m_next * e_max.sqrt()) / l).exp() - 1.0);
    Ok(PlancherelCheck { lhs, rhs, allowance })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bk_bound_values_and_splice() {
        assert_eq!(bk_bound(0.3, c(0.0, 0.0)).unwrap().bound, 0.0);
        // Quadratic branch evaluation.
        let b = bk_bound(0.1, c(1.0, 0.0)).unwrap().bound;
        assert!((b - 0.007225).abs() < 1e-15);
        // Splice continuity: both branches equal (1+7k)^{-2}.
        for k in [0.05, 0.1, 0.2, 0.5] {
            let s = 1.0 + 7.0 * k;
            let t = c(2.0 / (k * s * s), 0.0);
            let quad = 0.25 * k * k * t.norm_sqr() * s * s;
            let lin = k * t.norm() - 1.0 / (s * s);
            assert!((quad - lin).abs() < 1e-12, "k={k}");
            assert!((bk_bound(k, t).unwrap().bound - 1.0 / (s * s)).abs() < 1e-12);
        }
        assert!(bk_bound(0.0, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn neumann_zero_symbol() {
        let v = neumann_derivative(&Symbol::Const(c(0.0, 0.0)), c(0.4, 0.1), c(1.5, 0.3), 4).unwrap();
        assert!((v.value - 1.0).norm() < 1e-15);
        assert!(v.term_magnitudes.iter().all(|m| *m == 0.0));
    }

    #[test]
    fn neumann_indicator_terminates() {
        // S(1_D) vanishes inside the disk, so the series ends after one
        // term: dPsi = 1 - lambda/zeta^2, matching Psi = zeta + lambda/zeta.
        let lambda = c(0.37, 0.0);
        for zeta in [c(1.4, 0.2), c(-2.0, 0.5)] {
            let v = neumann_derivative(&Symbol::Const(c(1.0, 0.0)), lambda, zeta, 5).unwrap();
            let want = c(1.0, 0.0) - lambda / (zeta * zeta);
            assert!((v.value - want).norm() < 1e-12, "zeta={zeta}");
            assert!(v.term_magnitudes[1..].iter().all(|m| *m < 1e-13));
            assert!(v.tail_estimate < 1e-12);
        }
    }

    #[test]
    fn neumann_conjugate_first_order() {
        // mu = conj(w): H_hat_1(zeta) = S mu(zeta) = -1/zeta^3.
        let terms = NeumannTerms::build(&Symbol::ConjMonomial(1), 3);
        let zeta = c(1.3, -0.4);
        let t1 = terms.term_value(1, zeta);
        assert!((t1 + 1.0 / (zeta * zeta * zeta)).norm() < 1e-12);
    }

    #[test]
    fn motion_coefficients_indicator_closed_form() {
        // log(1 - lambda/zeta^2) = -sum_j lambda^j/(j zeta^{2j}):
        // H_hat_j = -1/(j zeta^{2j}) to full precision.
        let terms = NeumannTerms::build(&Symbol::Const(c(1.0, 0.0)), 6);
        let r = 1.3;
        let motion = terms.motion_coefficients(r, 6, 64).unwrap();
        for j in 1..=6usize {
            for l in [0usize, 11, 40] {
                let zeta = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * l as f64 / 64.0);
                let want = -1.0 / (j as f64 * zeta.powu(2 * j as u32));
                let got = motion.coefficients[j - 1].values[l];
                assert!((got - want).norm() < 1e-12, "j={j} l={l}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn motion_coefficients_zero_symbol() {
        let terms = NeumannTerms::build(&Symbol::Const(c(0.0, 0.0)), 3);
        let motion = terms.motion_coefficients(1.1, 3, 32).unwrap();
        for coeff in &motion.coefficients {
            assert!(coeff.values.iter().all(|v| v.norm() < 1e-14));
        }
    }

    #[test]
    fn hat_h2_two_routes_agree() {
        // Formula vs lambda-contour for a rough and a smooth symbol.
        for mu in [Symbol::ConjMonomial(1), Symbol::Mu0] {
            let terms = NeumannTerms::build(&mu, 4);
            let r = 1.05;
            let motion = terms.motion_coefficients(r, 2, 32).unwrap();
            for l in [0usize, 7, 19] {
                let zeta = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * l as f64 / 32.0);
                let formula = hat_h2_formula(&terms, zeta);
                let contour = motion.coefficients[1].values[l];
                assert!(
                    (formula - contour).norm() < 1e-8,
                    "mu={mu:?} l={l}: {formula} vs {contour}"
                );
            }
        }
    }

    #[test]
    fn g_lambda_indicator_closed_form() {
        // G(lambda, z) = log(1 - lambda z^2)/lambda for mu = 1_D, and the
        // growth bound |G| <= log(1/(1-|z|^2)) holds.
        let terms = NeumannTerms::build(&Symbol::Const(c(1.0, 0.0)), 8);
        for lambda in [c(0.3, 0.0), c(-0.2, 0.45), c(0.0, 0.0)] {
            for z in [c(0.4, 0.1), c(-0.3, 0.6), c(0.85, 0.0)] {
                let got = terms.g_lambda(lambda, z).unwrap();
                let want = if lambda.norm() < 1e-12 {
                    -z * z
                } else {
                    (c(1.0, 0.0) - lambda * z * z).ln() / lambda
                };
                assert!((got - want).norm() < 1e-12, "lambda={lambda} z={z}");
                assert!(got.norm() <= (1.0 / (1.0 - z.norm_sqr())).ln() + 1e-12);
            }
        }
        // z = 0: all coefficients vanish there.
        assert_eq!(terms.g_lambda(c(0.3, 0.1), c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn g_lambda_zero_limit_matches_projection() {
        // Feeding the reflected symbol makes G(0, z) = S mu0*(1/z)
        // = -z^2 P mu0(z); cross-module consistency with the closed form.
        let terms = NeumannTerms::build(&Symbol::Mu0Reflected, 3);
        let series = crate::extremal::mu0_projection_series(600);
        for z in [c(0.5, 0.0), c(0.3, -0.4), c(-0.7, 0.2)] {
            let got = terms.g_lambda(c(0.0, 0.0), z).unwrap();
            let want = -z * z * series.eval(z);
            assert!((got - want).norm() < 1e-8, "z={z}: {got} vs {want}");
        }
    }

    #[test]
    fn g_lambda_derivative_bound() {
        // (1-|z|^2)|dG/dz| <= 6|z| on a grid, for |lambda| in {0.1, 0.5, 0.9}.
        let terms = NeumannTerms::build(&Symbol::ConjMonomial(1), 24);
        for lam in [0.1, 0.5, 0.9] {
            let lambda = Complex64::from_polar(lam, 0.7);
            for i in 1..8 {
                let z = Complex64::from_polar(0.11 * i as f64, 0.9 * i as f64);
                let d = terms.g_lambda_dz(lambda, z).unwrap();
                let lhs = (1.0 - z.norm_sqr()) * d.norm();
                assert!(lhs <= 6.0 * z.norm() + 1e-9, "lam={lam} z={z} lhs={lhs}");
            }
        }
    }

    #[test]
    fn plancherel_trivial_and_indicator() {
        let zero = NeumannTerms::build(&Symbol::Const(c(0.0, 0.0)), 3);
        let motion = zero.motion_coefficients(1.2, 3, 32).unwrap();
        let chk = plancherel_average_check(&zero, &motion, 0.5, &[c(0.3, 0.0)]).unwrap();
        assert!((chk.lhs - 1.0).abs() < 1e-14 && (chk.rhs - 1.0).abs() < 1e-14);

        // The sup needs lambda samples close to the unit circle: the
        // coefficient energies on the left carry no rho^{2j} damping.
        let ind = NeumannTerms::build(&Symbol::Const(c(1.0, 0.0)), 6);
        let motion = ind.motion_coefficients(1.2, 6, 64).unwrap();
        let samples: Vec<Complex64> = (0..16)
            .map(|m| Complex64::from_polar(0.999, 2.0 * std::f64::consts::PI * m as f64 / 16.0))
            .collect();
        let chk = plancherel_average_check(&ind, &motion, 0.5, &samples).unwrap();
        assert!(chk.lhs <= chk.rhs + chk.allowance + 1e-12, "{chk:?}");
    }

    #[test]
    fn log_branch_is_tracked() {
        // A symbol with |mu| = 1 pushed to |lambda| close to 1 makes the
        // principal log wind; the ray walk must stay continuous (finite,
        // no error) and reproduce exp(H) = dPsi.
        let terms = NeumannTerms::build(&Symbol::Mu0, 12);
        let zeta = c(1.06, 0.02);
        let lambda = c(-0.62, 0.7); // |lambda| ~ 0.934
        let h = terms.log_dpsi(lambda, zeta).unwrap();
        let dpsi = terms.dpsi(lambda, zeta);
        assert!((h.exp() - dpsi).norm() < 1e-10 * dpsi.norm().max(1.0));
    }
}
