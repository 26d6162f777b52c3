//! Named verification checks, one per module invariant, grouped into
//! suites. The suite manifest is generated from the `Invariant` registry
//! through an exhaustive match, so an invariant that belongs to no suite
//! does not compile.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::beltrami::{exterior_clock, hat_h2_formula, plancherel_average_check, NeumannTerms};
use crate::bloch::{
    bloch_decompose, bloch_seminorm_refined, constant5_check, omega_weight,
};
use crate::conformal::{elliptic_ek, goluzin_check, nu_phi, ExteriorMap, SchlichtMap};
use crate::corpus;
use crate::dimension::{desymmetrize, dim_bound, f_quadratic, f_quadratic_dt, symmetrize, t_k};
use crate::error::Result;
use crate::extremal::{
    exp_z2_mu0_closed_form, lower_bound_check, mu0_projection, mu0_projection_evaluable,
    z2_mu0_projection_evaluable,
};
use crate::grids::{
    boundary_angular_resolution, boundary_clock, circle_integral, disk_integral, fft_inverse,
    next_pow2, taylor_from_circle, AnalyticCoeffs, CircleSamples, DilateEvaluable, DiskField,
    PolarGrid, PowerSeries, RadiiLadder,
};
use crate::levelsets::{
    anentropy_bound_check, carleman_check, green_energy_inequality, green_identity_check,
    level_set_check, polygon_majorant, strong_bound_n, tail_integral_by_parts, BoundaryData,
    BoundaryDensity, ZZbarPoly,
};
use crate::transforms::{bergman_project, beurling_transform_exterior, mobius, Symbol};
use crate::variance::{
    betterest_exponent, exp_type_spectrum, marshall_bound_check, moment_bound_check,
    tail_integral, variance_ratio,
};

/// The parameter grids pinned by the sweep checks.
pub const A_GRID_MAIN: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const A_GRID_SHARP: [f64; 3] = [1.5, 2.0, 4.0];
pub const TAU_GRID_MAKAROV: [f64; 3] = [1.5, 2.0, 4.0];

#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub seed: u64,
    /// Ladder for r -> 1 sweeps; reaches past 1 - 1e-5 by default.
    pub ladder: RadiiLadder,
    /// Sample count for the randomized pointwise inequalities.
    pub random_samples: usize,
    /// Size of the random Bloch polynomial corpus.
    pub bloch_corpus: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 0,
            ladder: RadiiLadder::dyadic(4, 17),
            random_samples: 10_000,
            bloch_corpus: 50,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub invariant: Invariant,
    pub passed: bool,
    /// Worst margin observed: negative slack means a violation.
    pub worst: f64,
    pub detail: String,
}

impl CheckReport {
    fn of(invariant: Invariant, passed: bool, worst: f64, detail: impl Into<String>) -> Self {
        CheckReport { invariant, passed, worst, detail: detail.into() }
    }
}

macro_rules! invariants {
    ($($variant:ident => ($suite:ident, $name:literal, $desc:literal),)*) => {
        /// Every named check the workbench knows about.
        #[derive(Debug, Clone, Copy, PartialEq, Eq)]
        pub enum Invariant { $($variant,)* }

        impl Invariant {
            pub const ALL: &'static [Invariant] = &[$(Invariant::$variant,)*];

            pub fn name(self) -> &'static str {
                match self { $(Invariant::$variant => $name,)* }
            }

            pub fn description(self) -> &'static str {
                match self { $(Invariant::$variant => $desc,)* }
            }

            pub fn suite(self) -> Suite {
                match self { $(Invariant::$variant => Suite::$suite,)* }
            }
        }
    };
}

invariants! {
    CircleTrigExactness => (Quadrature, "circle-trig-exactness",
        "circle quadrature integrates zeta^k to 0 for 1 <= |k| < N/2 and to 1 at k = 0"),
    DiskMomentOracle => (Quadrature, "disk-moment-oracle",
        "disk quadrature of w^a conj(w)^b vanishes off the diagonal and gives 1/(a+1) on it"),
    TaylorRoundTrip => (Quadrature, "taylor-round-trip",
        "coefficient extraction after circle evaluation is the identity below degree N/2"),
    DilateExchange => (Transforms, "dilate-exchange",
        "int f(rz) conj(g(z)) dA = int f(z) conj(g(rz)) dA for holomorphic f, g"),
    CircleDiskPairing => (Transforms, "circle-disk-pairing",
        "<g_r, conj(z) h>_T = <g, (dh)_r>_D for polynomial g and harmonic polynomial h"),
    ProjectionBlochBound => (Transforms, "projection-bloch-bound",
        "Bloch seminorm of a projected unit symbol stays within 8/pi"),
    ProjectionPointwiseBound => (Transforms, "projection-pointwise-bound",
        "|P mu(z)| <= sup|mu| (1/|z|^2) log(1/(1-|z|^2))"),
    MobiusInvariance => (Transforms, "mobius-invariance",
        "the Bloch seminorm is invariant under disk automorphisms"),
    BlochGrowthBound => (Bloch, "bloch-growth-bound",
        "|g(z)| <= seminorm * (1/2) log((1+|z|)/(1-|z|)) when g(0) = 0"),
    DerivativeQuotientBound => (Bloch, "derivative-quotient-bound",
        "(1-|z|^2) omega(|z|) |(f(z)-f(0))/z| <= 1 when (1-|z|^2)|f| <= 1"),
    DecompositionNorms => (Bloch, "decomposition-norms",
        "g = z^2 P nu_g + G with |nu_g| <= seminorm and |G| <= |g(0)| + 6 seminorm"),
    RemainderKernelConstant => (Bloch, "remainder-kernel-constant",
        "the weighted kernel integral behind the remainder bound stays at or below 5"),
    MakarovVarianceRatio => (Makarov, "makarov-variance-ratio",
        "int |g_r|^2 ds / log(1/(1-r^2)) <= seminorm^2 at every radius"),
    MakarovExponentialBound => (Makarov, "makarov-exponential-bound",
        "int exp(|X_r|^2/tau) ds <= tau/(tau - seminorm^2)"),
    VarianceSubadditivityAlgebra => (Makarov, "variance-subadditivity-algebra",
        "|xi + eta|^2 <= (1+alpha)|xi|^2 + (1+1/alpha)|eta|^2 pointwise"),
    TailIntegralUniformBound => (MainTheorem, "tail-integral-uniform-bound",
        "I_g(a,r) <= 10 (1-a)^{-3/2} for projected unit symbols, 0 < a < 1"),
    TailIntegralMonotoneInA => (MainTheorem, "tail-integral-monotone-in-a",
        "I_g(a,r) is nondecreasing in a"),
    SpectrumExponentBranches => (MainTheorem, "spectrum-exponent-branches",
        "the refined spectrum exponent is continuous and convex in |t|"),
    MarshallCompletedSquare => (MainTheorem, "marshall-completed-square",
        "int |e^{t g_r}| ds <= (1-r^2)^{-sigma^2|t|^2/4} int exp(|g_r|^2/(sigma^2 L)) ds"),
    MomentGrowthBound => (MainTheorem, "moment-growth-bound",
        "int |g_r|^q ds <= 10 (3+q)^{3/2} sup^q (q/2e)^{q/2} (r^{-4} L)^{q/2}"),
    SharpnessLowerBound => (Sharpness, "sharpness-lower-bound",
        "the extremal projection keeps I(a,r) >= e^{-2} (1-r^2)^{-(a-1)/a}"),
    SharpnessMonotoneGrowth => (Sharpness, "sharpness-monotone-growth",
        "for a > 1 the extremal tail integral increases along the ladder tail"),
    ExtremalExpIdentity => (Sharpness, "extremal-exp-identity",
        "exp(z^2 P mu0(z)) = e^{-z}/(1-z)"),
    ExtremalProjectionConsistency => (Sharpness, "extremal-projection-consistency",
        "quadrature projection of mu0 matches the closed form on |z| <= 0.99"),
    ExtremalNearMaximalGrowth => (Sharpness, "extremal-near-maximal-growth",
        "P mu0(x) >= (1/x^2) log(1/(1-x^2)) - 1/2 on (0, 1)"),
    SpectrumLogSlope => (Spectrum, "spectrum-log-slope",
        "the type spectrum of log(1/(1-z)) at t = 2 regresses to slope 1"),
    SpectrumExtremalSlope => (Spectrum, "spectrum-extremal-slope",
        "the type spectrum of z^2 P mu0 at t = 2 regresses to slope 1 within the envelope"),
    GreenIdentityPolynomials => (Levelsets, "green-identity-polynomials",
        "int u dA + int (1-|z|^2) Lap u dA = int_T u ds for polynomial fields"),
    GreenEnergyInequality => (Levelsets, "green-energy-inequality",
        "Poisson extensions obey the weighted gradient energy inequality for 1 < q <= 2"),
    AnentropyBound => (Levelsets, "anentropy-bound",
        "int |(dh)(rz)| dA <= (1/r^2) sqrt(int h log h ds) sqrt(L)"),
    LevelSetWeakBound => (Levelsets, "level-set-weak-bound",
        "measured s-length of {|g_r| >= eta} stays below the polygon-optimized bound"),
    LayerCakeReassembly => (Levelsets, "layer-cake-reassembly",
        "the tail integral equals its distribution-function reassembly"),
    PolygonContainment => (Levelsets, "polygon-containment",
        "|w| >= eta implies max_k Re(omega^k w) >= eta cos(pi/N)"),
    StrongBoundAssembly => (Levelsets, "strong-bound-assembly",
        "the smallest N >= pi sqrt(3)/sqrt(1-a) gives N > 5 and a bound within 10 (1-a)^{-3/2}"),
    CarlemanContraction => (Levelsets, "carleman-contraction",
        "the A^{2p} norm never exceeds the H^p norm"),
    KoebeBieberbachBound => (Conformal, "koebe-bieberbach-bound",
        "|(1-|z|^2) h'_phi - 2 conj(z)| <= 4 for normalized univalent maps"),
    DistortionPointwiseBound => (Conformal, "distortion-pointwise-bound",
        "|g_phi(z)| <= log(1/(1-|z|^2)), with equality for the Koebe map on the axis"),
    EllipticRatioBounds => (Conformal, "elliptic-ratio-bounds",
        "1 - s^2 <= E(s)/K(s) <= 1 on the modulus range"),
    GoluzinInequality => (Conformal, "goluzin-inequality",
        "the exterior distortion inequality holds in full and simplified form"),
    DistortionDensityBound => (Conformal, "distortion-density-bound",
        "the distortion density has sup at most 6 and its projection rebuilds g_phi"),
    BeurlingFormUniformBound => (Beltrami, "beurling-form-uniform-bound",
        "int exp(a |S mu(R zeta)|^2 / log(R^2/(R^2-1))) ds <= 10 (1-a)^{-3/2}"),
    MotionFirstCoefficient => (Beltrami, "motion-first-coefficient",
        "the first motion coefficient equals the Beurling transform, both routes"),
    MotionSecondCoefficient => (Beltrami, "motion-second-coefficient",
        "the second motion coefficient matches its closed combinatorial form"),
    MotionIndicatorClosedForm => (Beltrami, "motion-indicator-closed-form",
        "the indicator symbol reproduces the terminating closed-form motion"),
    MotionDerivativeBound => (Beltrami, "motion-derivative-bound",
        "(1-|z|^2)|dG/dz| <= 6|z| and |G| <= log(1/(1-|z|^2)) on grids"),
    PlancherelAveraging => (Beltrami, "plancherel-averaging",
        "coefficient energies are dominated by the worst lambda slice"),
    DimensionRootResidual => (Dimension, "dimension-root-residual",
        "F(k, t_k) = 0 to 1e-12 across the validity interval"),
    DimensionRootDerivative => (Dimension, "dimension-root-derivative",
        "dF/dt < 0 at the root across the validity interval"),
    SymmetrizationRoundTrip => (Dimension, "symmetrization-round-trip",
        "symmetrize and desymmetrize invert each other to 1e-14"),
    DimensionGapRatio => (Dimension, "dimension-gap-ratio",
        "dim bound gap over (k')^3 stays below 8 on (0, 0.05]"),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Quadrature,
    Transforms,
    Bloch,
    Makarov,
    MainTheorem,
    Sharpness,
    Spectrum,
    Levelsets,
    Conformal,
    Beltrami,
    Dimension,
}

impl Suite {
    pub const ALL: &'static [Suite] = &[
        Suite::Quadrature,
        Suite::Transforms,
        Suite::Bloch,
        Suite::Makarov,
        Suite::MainTheorem,
        Suite::Sharpness,
        Suite::Spectrum,
        Suite::Levelsets,
        Suite::Conformal,
        Suite::Beltrami,
        Suite::Dimension,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Quadrature => "quadrature",
            Suite::Transforms => "transforms",
            Suite::Bloch => "bloch",
            Suite::Makarov => "makarov",
            Suite::MainTheorem => "main-theorem",
            Suite::Sharpness => "sharpness",
            Suite::Spectrum => "spectrum",
            Suite::Levelsets => "levelsets",
            Suite::Conformal => "conformal",
            Suite::Beltrami => "beltrami",
            Suite::Dimension => "dimension",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.iter().copied().find(|x| x.name() == s)
    }

    pub fn members(self) -> Vec<Invariant> {
        Invariant::ALL.iter().copied().filter(|i| i.suite() == self).collect()
    }
}

/// The full manifest, suite by suite. Generated from the registry.
pub fn manifest() -> Vec<(Suite, Vec<Invariant>)> {
    Suite::ALL.iter().map(|&s| (s, s.members())).collect()
}

pub fn run_suite(suite: Suite, cfg: &CheckConfig) -> Result<Vec<CheckReport>> {
    suite.members().into_iter().map(|i| i.run(cfg)).collect()
}

/// Bergman projection of a corpus symbol as a dilate-evaluable function.
/// The extremal symbol gets its exact coefficient rule; everything else in
/// the corpus has fast-decaying coefficients and a finite series suffices.
pub fn projection_evaluable(mu: &Symbol) -> Result<Box<dyn DilateEvaluable>> {
    match mu {
        Symbol::Mu0 => Ok(Box::new(AnalyticCoeffs {
            coeff: Box::new(|j: usize| Complex64::new(1.0 / (j as f64 + 2.0), 0.0))
                as Box<dyn Fn(usize) -> Complex64 + Send + Sync>,
        })),
        _ => Ok(Box::new(bergman_project(mu, 512)?.series)),
    }
}

impl Invariant {
    pub fn run(self, cfg: &CheckConfig) -> Result<CheckReport> {
        match self {
            Invariant::CircleTrigExactness => check_circle_trig(self),
            Invariant::DiskMomentOracle => check_disk_moments(self),
            Invariant::TaylorRoundTrip => check_taylor_round_trip(self),
            Invariant::DilateExchange => check_dilate_exchange(self, cfg),
            Invariant::CircleDiskPairing => check_circle_disk_pairing(self, cfg),
            Invariant::ProjectionBlochBound => check_projection_bloch_bound(self, cfg),
            Invariant::ProjectionPointwiseBound => check_projection_pointwise(self, cfg),
            Invariant::MobiusInvariance => check_mobius_invariance(self, cfg),
            Invariant::BlochGrowthBound => check_growth_bound(self, cfg),
            Invariant::DerivativeQuotientBound => check_quotient_bound(self, cfg),
            Invariant::DecompositionNorms => check_decomposition_norms(self, cfg),
            Invariant::RemainderKernelConstant => check_constant5(self),
            Invariant::MakarovVarianceRatio => check_makarov_variance(self, cfg),
            Invariant::MakarovExponentialBound => check_makarov_exponential(self, cfg),
            Invariant::VarianceSubadditivityAlgebra => check_subadditivity_algebra(self, cfg),
            Invariant::TailIntegralUniformBound => check_main_upper_bound(self, cfg),
            Invariant::TailIntegralMonotoneInA => check_monotone_in_a(self, cfg),
            Invariant::SpectrumExponentBranches => check_betterest_branches(self),
            Invariant::MarshallCompletedSquare => check_marshall_square(self, cfg),
            Invariant::MomentGrowthBound => check_moment_bound(self, cfg),
            Invariant::SharpnessLowerBound => check_sharpness_lower(self, cfg),
            Invariant::SharpnessMonotoneGrowth => check_sharpness_monotone(self, cfg),
            Invariant::ExtremalExpIdentity => check_exp_identity(self),
            Invariant::ExtremalProjectionConsistency => check_projection_consistency(self),
            Invariant::ExtremalNearMaximalGrowth => check_near_maximal(self),
            Invariant::SpectrumLogSlope => check_spectrum_log(self, cfg),
            Invariant::SpectrumExtremalSlope => check_spectrum_extremal(self, cfg),
            Invariant::GreenIdentityPolynomials => check_green_identity(self, cfg),
            Invariant::GreenEnergyInequality => check_green_energy(self, cfg),
            Invariant::AnentropyBound => check_anentropy(self),
            Invariant::LevelSetWeakBound => check_level_sets(self),
            Invariant::LayerCakeReassembly => check_layer_cake(self),
            Invariant::PolygonContainment => check_polygon(self, cfg),
            Invariant::StrongBoundAssembly => check_strong_bound(self),
            Invariant::CarlemanContraction => check_carleman(self, cfg),
            Invariant::KoebeBieberbachBound => check_koebe_bieberbach(self, cfg),
            Invariant::DistortionPointwiseBound => check_distortion_pointwise(self, cfg),
            Invariant::EllipticRatioBounds => check_elliptic_ratio(self),
            Invariant::GoluzinInequality => check_goluzin(self, cfg),
            Invariant::DistortionDensityBound => check_distortion_density(self, cfg),
            Invariant::BeurlingFormUniformBound => check_beurling_form(self, cfg),
            Invariant::MotionFirstCoefficient => check_motion_first(self, cfg),
            Invariant::MotionSecondCoefficient => check_motion_second(self, cfg),
            Invariant::MotionIndicatorClosedForm => check_motion_indicator(self),
            Invariant::MotionDerivativeBound => check_motion_derivative(self, cfg),
            Invariant::PlancherelAveraging => check_plancherel(self),
            Invariant::DimensionRootResidual => check_dim_root(self),
            Invariant::DimensionRootDerivative => check_dim_derivative(self),
            Invariant::SymmetrizationRoundTrip => check_symmetrization(self),
            Invariant::DimensionGapRatio => check_dim_gap_ratio(self),
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// --------------------------------------------------------------- quadrature

fn check_circle_trig(inv: Invariant) -> Result<CheckReport> {
    let n = 256;
    let mut worst = 0.0f64;
    for k in 0..(n / 2) {
        let f = CircleSamples::from_fn(1.0, n, |z| z.powu(k as u32))?;
        let v = circle_integral(&f)?;
        let err = if k == 0 { (v - 1.0).norm() } else { v.norm() };
        worst = worst.max(err);
    }
    Ok(CheckReport::of(inv, worst < 1e-12, worst, format!("max quadrature error {worst:.3e}")))
}

fn check_disk_moments(inv: Invariant) -> Result<CheckReport> {
    let grid = std::sync::Arc::new(PolarGrid::standard(64, 64));
    let mut worst = 0.0f64;
    for a in 0..6u32 {
        for b in 0..6u32 {
            let f = DiskField::from_fn(grid.clone(), |w| w.powu(a) * w.conj().powu(b))?;
            let v = disk_integral(&f)?;
            let want = if a == b { 1.0 / (a as f64 + 1.0) } else { 0.0 };
            worst = worst.max((v - want).norm());
        }
    }
    Ok(CheckReport::of(inv, worst < 1e-12, worst, format!("max moment error {worst:.3e}")))
}

fn check_taylor_round_trip(inv: Invariant) -> Result<CheckReport> {
    // The r^{-j} normalization amplifies FFT rounding; radii are chosen so
    // the amplification stays below the 1e-12 identity target.
    let g = PowerSeries::from_fn(16, |j| c((0.7 * j as f64).sin(), 1.0 / (j + 1) as f64));
    let n = 128;
    let mut worst = 0.0f64;
    for r in [0.7, 0.9, 0.95] {
        let samples = CircleSamples::new(r, g.eval_on_circle(r, n))?;
        let back = taylor_from_circle(&samples)?;
        for j in 0..g.coeffs.len() {
            worst = worst.max((back.coeffs[j] - g.coeffs[j]).norm());
        }
    }
    Ok(CheckReport::of(inv, worst < 1e-12, worst, format!("round-trip error {worst:.3e}")))
}

// --------------------------------------------------------------- transforms

fn check_dilate_exchange(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut rng = corpus::rng(cfg.seed);
    let grid = std::sync::Arc::new(PolarGrid::standard(128, 256));
    let mut worst = 0.0f64;
    for _ in 0..4 {
        let f = corpus::normalized_bloch_polynomial(&mut rng, 9);
        let g = corpus::normalized_bloch_polynomial(&mut rng, 7);
        for r in [0.3, 0.7, 0.95] {
            let lhs = disk_integral(&DiskField::from_fn(grid.clone(), |z| {
                f.eval(r * z) * g.eval(z).conj()
            })?)?;
            let rhs = disk_integral(&DiskField::from_fn(grid.clone(), |z| {
                f.eval(z) * g.eval(r * z).conj()
            })?)?;
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(CheckReport::of(inv, worst < 1e-10, worst, format!("exchange mismatch {worst:.3e}")))
}

fn check_circle_disk_pairing(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    // h = harmonic polynomial sum a_n z^n + b_n conj(z)^n; dh keeps the
    // analytic part: (dh)(z) = sum (n+1) a_{n+1} z^n... using boundary
    // coefficients h_hat(n) = a_n (n >= 0), b_{-n} (n < 0).
    let mut rng = corpus::rng(cfg.seed + 1);
    let grid = std::sync::Arc::new(PolarGrid::standard(128, 256));
    let mut worst = 0.0f64;
    for _ in 0..4 {
        let g = corpus::normalized_bloch_polynomial(&mut rng, 8);
        let a: Vec<Complex64> = (0..6).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let b: Vec<Complex64> = (0..6).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let h = |z: Complex64| -> Complex64 {
            let mut acc = c(0.0, 0.0);
            for (n, an) in a.iter().enumerate() {
                acc += an * z.powu(n as u32);
            }
            for (n, bn) in b.iter().enumerate().skip(1) {
                acc += bn * z.conj().powu(n as u32);
            }
            acc
        };
        let dh = |z: Complex64| -> Complex64 {
            let mut acc = c(0.0, 0.0);
            for (n, an) in a.iter().enumerate().skip(1) {
                acc += an * (n as f64) * z.powu(n as u32 - 1);
            }
            acc
        };
        for r in [0.4, 0.9] {
            let n = 512;
            let mut lhs = c(0.0, 0.0);
            for j in 0..n {
                let zeta = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
                lhs += g.eval(r * zeta) * (zeta.conj() * h(zeta)).conj();
            }
            lhs /= n as f64;
            let rhs = disk_integral(&DiskField::from_fn(grid.clone(), |z| {
                g.eval(z) * dh(r * z).conj()
            })?)?;
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(CheckReport::of(inv, worst < 1e-10, worst, format!("pairing mismatch {worst:.3e}")))
}

fn check_projection_bloch_bound(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut worst = f64::NEG_INFINITY;
    let mut detail = String::new();
    for (name, mu) in corpus::symbol_corpus(cfg.seed) {
        let p = bergman_project(&mu, 256)?;
        let s = bloch_seminorm_refined(&p.series);
        let margin = 8.0 / PI * mu.sup_norm() + 1e-6 - s;
        if margin < worst || detail.is_empty() {
            detail = format!("tightest at {name}: seminorm {s:.6}");
        }
        worst = worst.max(s - 8.0 / PI * mu.sup_norm());
    }
    Ok(CheckReport::of(inv, worst <= 1e-6, worst, detail))
}

fn check_projection_pointwise(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut worst = 0.0f64;
    for (_, mu) in corpus::symbol_corpus(cfg.seed) {
        let p = bergman_project(&mu, 512)?;
        let sup = mu.sup_norm();
        for i in 1..24 {
            let rho = i as f64 / 25.0;
            let cap = sup / (rho * rho) * (1.0 / (1.0 - rho * rho)).ln();
            for j in 0..16 {
                let z = Complex64::from_polar(rho, 2.0 * PI * j as f64 / 16.0);
                worst = worst.max(p.series.eval(z).norm() - cap);
            }
        }
    }
    Ok(CheckReport::of(inv, worst <= 1e-8, worst, format!("max excess {worst:.3e}")))
}

fn check_mobius_invariance(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut rng = corpus::rng(cfg.seed + 2);
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let g = corpus::normalized_bloch_polynomial(&mut rng, 6);
        let deriv = g.derivative();
        let base = bloch_seminorm_refined(&g);
        for zeta in [c(0.4, 0.1), c(-0.2, 0.6)] {
            // Chain rule scan: sup (1-|z|^2) |g'(phi(z))| |phi'(z)|.
            let phi_prime_norm = |z: Complex64| {
                let den = c(1.0, 0.0) - zeta.conj() * z;
                (zeta.norm_sqr() - 1.0).abs() / den.norm_sqr()
            };
            let mut sup = 0.0f64;
            for i in 0..=220 {
                let r = i as f64 / 221.0;
                for j in 0..220 {
                    let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / 220.0);
                    let w = mobius(zeta, z)?;
                    let v = (1.0 - r * r) * deriv.eval(w).norm() * phi_prime_norm(z);
                    sup = sup.max(v);
                }
            }
            // The scan sits below the true sup; invariance means it cannot
            // exceed the refined base seminorm and must come close to it.
            worst = worst.max(sup - base).max(base - sup - 5e-3);
        }
    }
    Ok(CheckReport::of(inv, worst <= 1e-6, worst, format!("worst deviation {worst:.3e}")))
}

// -------------------------------------------------------------------- bloch

fn check_growth_bound(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut rng = corpus::rng(cfg.seed + 3);
    let mut worst = 0.0f64;
    for _ in 0..6 {
        let g = corpus::normalized_bloch_polynomial(&mut rng, 10);
        for i in 1..30 {
            let r = i as f64 / 31.0;
            let cap = 0.5 * ((1.0 + r) / (1.0 - r)).ln();
            for j in 0..24 {
                let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / 24.0);
                worst = worst.max(g.eval(z).norm() - cap);
            }
        }
    }
    Ok(CheckReport::of(inv, worst <= 1e-9, worst, format!("max excess {worst:.3e}")))
}

fn check_quotient_bound(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut rng = corpus::rng(cfg.seed + 4);
    let mut worst = 0.0f64;
    for _ in 0..6 {
        let g = corpus::normalized_bloch_polynomial(&mut rng, 10);
        let f = g.derivative();
        let f0 = f.coeffs.first().copied().unwrap_or_default();
        for i in 1..40 {
            let r = i as f64 / 41.0;
            let om = omega_weight(r)?;
            for j in 0..24 {
                let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / 24.0);
                let q = (1.0 - r * r) * om * ((f.eval(z) - f0) / z).norm();
                worst = worst.max(q - 1.0);
            }
        }
    }
    Ok(CheckReport::of(inv, worst <= 1e-9, worst, format!("max excess {worst:.3e}")))
}

fn check_decomposition_norms(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut rng = corpus::rng(cfg.seed + 5);
    let mut worst = 0.0f64;
    let mut max_residual = 0.0f64;
    for _ in 0..4 {
        let g = corpus::normalized_bloch_polynomial(&mut rng, 8);
        let g0 = g.coeffs[0].norm();
        let d = bloch_decompose(&g)?;
        worst = worst.max(d.nu_sup - 1.0).max(d.remainder_sup - (g0 + 6.0));
        max_residual = max_residual.max(d.residual);
    }
    let passed = worst <= 1e-6 && max_residual < 1e-7;
    Ok(CheckReport::of(
        inv,
        passed,
        worst,
        format!("norm excess {worst:.3e}, reconstruction residual {max_residual:.3e}"),
    ))
}

fn check_constant5(inv: Invariant) -> Result<CheckReport> {
    let zs: Vec<Complex64> = (0..60)
        .map(|i| Complex64::from_polar(0.9995 * i as f64 / 59.0, 0.41 * i as f64))
        .collect();
    let m = constant5_check(&zs);
    Ok(CheckReport::of(inv, m <= 5.0, m, format!("grid max {m:.6}")))
}

// ------------------------------------------------------------------ makarov

fn check_makarov_variance(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut rng = corpus::rng(cfg.seed + 6);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..cfg.bloch_corpus {
        let g = corpus::normalized_bloch_polynomial(&mut rng, 16);
        for &r in &cfg.ladder.radii {
            worst = worst.max(variance_ratio(&g, r) - 1.0);
        }
    }
    Ok(CheckReport::of(inv, worst <= 1e-6, worst, format!("max ratio excess {worst:.3e}")))
}

fn check_makarov_exponential(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut rng = corpus::rng(cfg.seed + 7);
    let polys: Vec<PowerSeries> = (0..cfg.bloch_corpus)
        .map(|_| corpus::normalized_bloch_polynomial(&mut rng, 16))
        .collect();
    let worst = polys
        .par_iter()
        .map(|g| {
            let mut w = f64::NEG_INFINITY;
            for &tau in &TAU_GRID_MAKAROV {
                for &r in &cfg.ladder.radii {
                    let l = boundary_clock(r);
                    let n = next_pow2(16 * (g.degree() + 1)).max(256);
                    let samples = g.dilate_samples(r, n);
                    let value = samples
                        .iter()
                        .map(|v| (v.norm_sqr() / (tau * l)).exp())
                        .sum::<f64>()
                        / n as f64;
                    w = w.max(value - tau / (tau - 1.0));
                }
            }
            w
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    Ok(CheckReport::of(inv, worst <= 1e-6, worst, format!("max bound excess {worst:.3e}")))
}

fn check_subadditivity_algebra(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut rng = corpus::rng(cfg.seed + 8);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..cfg.random_samples {
        let xi = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let eta = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let alpha: f64 = rng.gen_range(0.01..10.0);
        let lhs = (xi + eta).norm_sqr();
        let rhs = (1.0 + alpha) * xi.norm_sqr() + (1.0 + 1.0 / alpha) * eta.norm_sqr();
        worst = worst.max(lhs - rhs * (1.0 + 1e-14));
    }
    Ok(CheckReport::of(inv, worst <= 1e-12, worst, format!("max excess {worst:.3e}")))
}

// ------------------------------------------------------------- main theorem

fn check_main_upper_bound(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let corpus = corpus::symbol_corpus(cfg.seed);
    let results: Result<Vec<(String, f64)>> = corpus
        .par_iter()
        .map(|(name, mu)| {
            let g = projection_evaluable(mu)?;
            let mut w = f64::NEG_INFINITY;
            for &a in &A_GRID_MAIN {
                let cap = 10.0 * (1.0 - a).powf(-1.5);
                for &r in &cfg.ladder.radii {
                    let s = tail_integral(g.as_ref(), a, r)?;
                    let excess = if s.flagged { f64::INFINITY } else { s.value - cap };
                    w = w.max(excess);
                }
            }
            Ok((name.clone(), w))
        })
        .collect();
    let results = results?;
    let (name, worst) = results
        .into_iter()
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    Ok(CheckReport::of(
        inv,
        worst <= 0.0,
        worst,
        format!("tightest symbol {name}, max I - C(a) = {worst:.3e}"),
    ))
}

fn check_monotone_in_a(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let g = projection_evaluable(&Symbol::Mu0)?;
    let mut worst = f64::NEG_INFINITY;
    for &r in cfg.ladder.tail(6) {
        let mut prev = f64::NEG_INFINITY;
        for k in 1..=12 {
            let v = tail_integral(g.as_ref(), 0.08 * k as f64, r)?.value;
            worst = worst.max(prev - v);
            prev = v;
        }
    }
    Ok(CheckReport::of(inv, worst <= 0.0, worst, format!("max decrease {worst:.3e}")))
}

fn check_betterest_branches(inv: Invariant) -> Result<CheckReport> {
    let mut worst = 0.0f64;
    for a in [0.1, 0.3, 0.5, 0.7, 0.9] {
        // Continuity at the splice.
        let t = c(2.0 * a, 0.0);
        let inner = betterest_exponent(a, t * (1.0 - 1e-9))?;
        let outer = betterest_exponent(a, t * (1.0 + 1e-9))?;
        worst = worst.max((inner - outer).abs());
        // Convexity in |t| by second differences.
        let h = 0.05;
        for k in 1..80 {
            let tm = betterest_exponent(a, c((k as f64 - 1.0) * h, 0.0))?;
            let t0 = betterest_exponent(a, c(k as f64 * h, 0.0))?;
            let tp = betterest_exponent(a, c((k as f64 + 1.0) * h, 0.0))?;
            worst = worst.max(-(tm - 2.0 * t0 + tp) - 1e-12);
        }
    }
    Ok(CheckReport::of(inv, worst <= 1e-7, worst, format!("max defect {worst:.3e}")))
}

fn check_marshall_square(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut rng = corpus::rng(cfg.seed + 9);
    let mut cases = Vec::with_capacity(cfg.random_samples);
    for _ in 0..cfg.random_samples {
        let deg = rng.gen_range(1..=12);
        let mut coeffs = vec![c(0.0, 0.0); deg + 1];
        for coeff in coeffs.iter_mut() {
            *coeff = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let g = PowerSeries::new(coeffs);
        let sigma = rng.gen_range(0.4..2.5);
        let t = c(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        let r = rng.gen_range(0.2..(1.0 - 1e-4));
        cases.push((g, sigma, t, r));
    }
    let worst = cases
        .par_iter()
        .map(|(g, sigma, t, r)| {
            let m = marshall_bound_check(g, *sigma, *t, *r).expect("valid sample");
            if m.flagged {
                0.0
            } else {
                (m.lhs - m.rhs) / m.rhs
            }
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    Ok(CheckReport::of(
        inv,
        worst <= 1e-10,
        worst,
        format!("{} samples, worst relative excess {worst:.3e}", cfg.random_samples),
    ))
}

fn check_moment_bound(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut worst = f64::NEG_INFINITY;
    for (_, mu) in corpus::symbol_corpus(cfg.seed) {
        let g = projection_evaluable(&mu)?;
        let sup = mu.sup_norm();
        for q in [0.5, 2.0, 6.0] {
            for &r in cfg.ladder.tail(4) {
                let (lhs, rhs) = moment_bound_check(g.as_ref(), q, r, sup)?;
                worst = worst.max((lhs - rhs) / rhs);
            }
        }
    }
    Ok(CheckReport::of(inv, worst <= 0.0, worst, format!("worst relative excess {worst:.3e}")))
}

// ---------------------------------------------------------------- sharpness

fn check_sharpness_lower(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut worst = f64::NEG_INFINITY;
    for &a in &A_GRID_SHARP {
        for &r in &cfg.ladder.radii {
            let lb = lower_bound_check(a, r)?;
            worst = worst.max((lb.rhs - lb.lhs.value) / lb.rhs);
        }
    }
    Ok(CheckReport::of(inv, worst <= 0.0, worst, format!("worst relative shortfall {worst:.3e}")))
}

fn check_sharpness_monotone(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let g = mu0_projection_evaluable();
    let mut worst = f64::NEG_INFINITY;
    for &a in &A_GRID_SHARP {
        let mut prev = f64::NEG_INFINITY;
        for &r in cfg.ladder.tail(6) {
            let v = tail_integral(&g, a, r)?.value;
            worst = worst.max(prev - v);
            prev = v;
        }
    }
    Ok(CheckReport::of(inv, worst < 0.0, worst, format!("max decrease over tail {worst:.3e}")))
}

fn check_exp_identity(inv: Invariant) -> Result<CheckReport> {
    let mut worst = 0.0f64;
    for k in 0..100 {
        let t = k as f64 / 100.0;
        let z = Complex64::from_polar(0.98 * t, 7.0 * t);
        let lhs = (z * z * mu0_projection(z)?).exp();
        let rhs = exp_z2_mu0_closed_form(z);
        worst = worst.max((lhs - rhs).norm() / rhs.norm().max(1.0));
    }
    Ok(CheckReport::of(inv, worst < 1e-12, worst, format!("max relative error {worst:.3e}")))
}

fn check_projection_consistency(inv: Invariant) -> Result<CheckReport> {
    let p = bergman_project(&Symbol::Mu0, 2048)?;
    let mut worst = 0.0f64;
    for k in 0..100 {
        let z = Complex64::from_polar(0.99 * (k as f64 + 1.0) / 100.0, 2.39996 * k as f64);
        worst = worst.max((p.series.eval(z) - mu0_projection(z)?).norm());
    }
    Ok(CheckReport::of(inv, worst < 1e-8, worst, format!("max deviation {worst:.3e} at 100 points")))
}

fn check_near_maximal(inv: Invariant) -> Result<CheckReport> {
    let mut worst = f64::NEG_INFINITY;
    for k in 1..200 {
        let x = k as f64 / 200.0;
        let floor = (1.0 / (x * x)) * (1.0 / (1.0 - x * x)).ln() - 0.5;
        worst = worst.max(floor - mu0_projection(c(x, 0.0))?.re);
    }
    Ok(CheckReport::of(inv, worst <= 1e-12, worst, format!("max shortfall {worst:.3e}")))
}

// ----------------------------------------------------------------- spectrum

fn check_spectrum_log(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let g = AnalyticCoeffs {
        coeff: |j: usize| if j == 0 { c(0.0, 0.0) } else { c(1.0 / j as f64, 0.0) },
    };
    let est = exp_type_spectrum(&g, c(2.0, 0.0), &cfg.ladder)?;
    let err = (est.beta_hat - 1.0).abs();
    Ok(CheckReport::of(
        inv,
        err <= 0.02,
        err,
        format!("beta_hat = {:.6}, residual {:.2e}", est.beta_hat, est.fit_residual),
    ))
}

fn check_spectrum_extremal(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let g = z2_mu0_projection_evaluable();
    let t = c(2.0, 0.0);
    let est = exp_type_spectrum(&g, t, &cfg.ladder)?;
    let envelope = (t.norm_sqr() / 4.0).min(t.norm() - 1.0);
    let err = (est.beta_hat - 1.0).abs();
    let within_envelope = est.beta_hat <= envelope + 0.05;
    Ok(CheckReport::of(
        inv,
        err <= 0.05 && within_envelope,
        err,
        format!("beta_hat = {:.6} against envelope {envelope}", est.beta_hat),
    ))
}

// ---------------------------------------------------------------- levelsets

fn green_test_fields(seed: u64) -> Vec<ZZbarPoly> {
    let mut rng = corpus::rng(seed);
    let mut out = vec![
        ZZbarPoly::new(vec![(0, 0, c(1.0, 0.0))]),
        ZZbarPoly::new(vec![(1, 1, c(1.0, 0.0))]),
        ZZbarPoly::new(vec![(1, 0, c(0.5, 0.0)), (0, 1, c(0.5, 0.0))]),
        ZZbarPoly::new(vec![(2, 2, c(1.0, 0.0)), (1, 0, c(0.3, 0.2))]),
    ];
    while out.len() < 10 {
        let terms: Vec<(u32, u32, Complex64)> = (0..4)
            .map(|_| {
                (
                    rng.gen_range(0..4u32),
                    rng.gen_range(0..4u32),
                    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                )
            })
            .collect();
        out.push(ZZbarPoly::new(terms));
    }
    out
}

fn check_green_identity(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut worst = 0.0f64;
    for u in green_test_fields(cfg.seed + 10) {
        let (lhs, rhs) = green_identity_check(&u);
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(CheckReport::of(inv, worst < 1e-8, worst, format!("10 fields, max identity gap {worst:.3e}")))
}

fn energy_test_data(seed: u64) -> Vec<BoundaryData> {
    let mut rng = corpus::rng(seed);
    let mut out = vec![
        BoundaryData::Arc { center: 0.0, length: 0.5 },
        BoundaryData::Arc { center: 1.3, length: 0.2 },
        BoundaryData::Arc { center: -2.0, length: 0.05 },
        BoundaryData::Trig { modes: vec![c(1.0, 0.0), c(0.5, 0.0)], real: true },
        BoundaryData::Trig { modes: vec![c(1.0, 0.0), c(0.2, 0.1), c(0.0, 0.15)], real: true },
    ];
    while out.len() < 10 {
        // Strictly positive random densities: 1 + small trig tail.
        let mut modes = vec![c(1.0, 0.0)];
        let mut budget = 0.45;
        for _ in 0..3 {
            let m = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let m = m / m.norm().max(1.0) * rng.gen_range(0.0..budget / 2.0);
            budget -= m.norm();
            modes.push(m);
        }
        out.push(BoundaryData::Trig { modes, real: true });
    }
    out
}

fn check_green_energy(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let data = energy_test_data(cfg.seed + 11);
    let worst = data
        .par_iter()
        .map(|d| {
            let mut w = f64::NEG_INFINITY;
            for q in [1.25, 1.5, 2.0] {
                let (lhs, rhs) = green_energy_inequality(d, q).expect("nonzero data");
                w = w.max((lhs - rhs) / rhs);
            }
            w
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    Ok(CheckReport::of(inv, worst <= 1e-6, worst, format!("10 extensions, worst relative excess {worst:.3e}")))
}

fn check_anentropy(inv: Invariant) -> Result<CheckReport> {
    let mut densities = vec![
        BoundaryDensity::new(BoundaryData::Trig { modes: vec![c(1.0, 0.0), c(0.5, 0.0)], real: true })?,
    ];
    for length in [0.05, 0.1, 0.25, 0.5, 0.75] {
        densities.push(BoundaryDensity::arc(0.7, length)?);
    }
    let radii = [0.5, 0.9, 0.99, 0.999];
    let cells: Vec<(usize, f64)> = (0..densities.len())
        .flat_map(|i| radii.iter().map(move |&r| (i, r)))
        .collect();
    let worst = cells
        .par_iter()
        .map(|&(i, r)| {
            let (lhs, rhs) = anentropy_bound_check(&densities[i], r).expect("valid density");
            lhs - rhs
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    Ok(CheckReport::of(inv, worst <= 1e-9, worst, format!("max bound excess {worst:.3e}")))
}

fn check_level_sets(inv: Invariant) -> Result<CheckReport> {
    let g = mu0_projection_evaluable();
    let mut worst = f64::NEG_INFINITY;
    for r in [0.9f64, 0.99, 0.999, 0.9999] {
        let max_abs = (1.0 / (r * r)) * (1.0 / (1.0 - r * r)).ln();
        for frac in [0.1, 0.25, 0.4, 0.6, 0.8, 0.95] {
            let rep = level_set_check(&g, 1.0, r, frac * max_abs, 256)?;
            worst = worst.max(rep.measured_length - rep.bound);
        }
    }
    Ok(CheckReport::of(inv, worst <= 0.0, worst, format!("max measured-bound gap {worst:.3e}")))
}

fn check_layer_cake(inv: Invariant) -> Result<CheckReport> {
    let g = mu0_projection_evaluable();
    let mut worst = 0.0f64;
    for (a, r) in [(0.3, 0.9), (0.6, 0.97), (0.9, 0.995)] {
        let (direct, reassembled) = tail_integral_by_parts(&g, a, r)?;
        worst = worst.max((direct - reassembled).abs() / direct);
    }
    Ok(CheckReport::of(inv, worst < 1e-11, worst, format!("max relative gap {worst:.3e}")))
}

fn check_polygon(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut rng = corpus::rng(cfg.seed + 12);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..2000 {
        let w = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        for n in 3..=24u32 {
            let want = w.norm() * (PI / n as f64).cos();
            worst = worst.max(want - polygon_majorant(w, n));
        }
    }
    Ok(CheckReport::of(inv, worst <= 1e-12, worst, format!("max shortfall {worst:.3e}")))
}

fn check_strong_bound(inv: Invariant) -> Result<CheckReport> {
    let mut worst = f64::NEG_INFINITY;
    let mut ok = true;
    for k in 1..=19 {
        let a = 0.05 * k as f64;
        let s = strong_bound_n(a)?;
        ok &= s.n > 5 && (PI / s.n as f64).cos().powi(2) > a;
        worst = worst.max(s.assembled_bound - 10.0 * (1.0 - a).powf(-1.5));
    }
    Ok(CheckReport::of(inv, ok && worst <= 0.0, worst, format!("max assembled excess {worst:.3e}")))
}

fn check_carleman(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut rng = corpus::rng(cfg.seed + 13);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..8 {
        let deg = rng.gen_range(0..=8);
        let f = PowerSeries::new(
            (0..=deg)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        );
        for p in [0.5, 1.0, 2.0, 3.5] {
            let (lhs, rhs) = carleman_check(&f, p)?;
            worst = worst.max((lhs - rhs) / rhs.max(1e-300));
        }
    }
    Ok(CheckReport::of(inv, worst <= 1e-9, worst, format!("worst relative excess {worst:.3e}")))
}

// ---------------------------------------------------------------- conformal

fn conformal_corpus(seed: u64) -> Vec<SchlichtMap> {
    let mut maps = vec![
        SchlichtMap::Identity,
        SchlichtMap::Koebe { rotation: 0.0 },
        SchlichtMap::Koebe { rotation: 1.1 },
        SchlichtMap::Koebe { rotation: -2.6 },
    ];
    maps.extend(corpus::schlicht_corpus(seed, 6, 0.85));
    maps
}

fn check_koebe_bieberbach(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut worst = f64::NEG_INFINITY;
    for map in conformal_corpus(cfg.seed + 14) {
        for i in 0..60 {
            let z = Complex64::from_polar(0.995 * i as f64 / 60.0, 0.37 * i as f64);
            let v = ((1.0 - z.norm_sqr()) * map.h_prime(z) - 2.0 * z.conj()).norm();
            worst = worst.max(v - 4.0);
        }
    }
    Ok(CheckReport::of(inv, worst <= 1e-9, worst, format!("max excess over 4: {worst:.3e}")))
}

fn check_distortion_pointwise(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut worst = f64::NEG_INFINITY;
    for map in conformal_corpus(cfg.seed + 15) {
        for i in 1..40 {
            let rho = 0.97 * i as f64 / 40.0;
            let cap = (1.0 / (1.0 - rho * rho)).ln();
            for j in 0..16 {
                let z = Complex64::from_polar(rho, 2.0 * PI * j as f64 / 16.0);
                worst = worst.max(map.g_value(z).norm() - cap);
            }
        }
    }
    // Koebe attains the cap on the real axis.
    let koebe = SchlichtMap::Koebe { rotation: 0.0 };
    let x = 0.7;
    let eq = (koebe.g_value(c(x, 0.0)).norm() - (1.0 / (1.0 - x * x)).ln()).abs();
    Ok(CheckReport::of(
        inv,
        worst <= 1e-9 && eq < 1e-12,
        worst,
        format!("max excess {worst:.3e}, Koebe equality defect {eq:.3e}"),
    ))
}

fn check_elliptic_ratio(inv: Invariant) -> Result<CheckReport> {
    let mut worst = f64::NEG_INFINITY;
    for i in 1..=99 {
        let s = i as f64 / 100.0;
        let (e, k) = elliptic_ek(s)?;
        let ratio = e / k;
        worst = worst.max(ratio - 1.0).max((1.0 - s * s) - ratio);
    }
    Ok(CheckReport::of(inv, worst <= 1e-13, worst, format!("max bound defect {worst:.3e}")))
}

fn check_goluzin(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    // Joukowski plus motion-generated exterior maps from smooth symbols.
    let mut values: Vec<(Complex64, Complex64)> = Vec::new();
    let zeta_grid: Vec<Complex64> = [1.01f64, 1.05, 1.2, 2.0, 5.0, 10.0]
        .iter()
        .flat_map(|&rr| (0..8).map(move |j| Complex64::from_polar(rr, 2.0 * PI * j as f64 / 8.0)))
        .collect();
    for zeta in &zeta_grid {
        values.push((ExteriorMap::Joukowski.zeta_h_prime(*zeta)?, *zeta));
    }
    let mut symbols: Vec<Symbol> = vec![
        Symbol::ConjMonomial(1),
        Symbol::ConjMonomial(2),
        Symbol::ConjMonomial(3),
        Symbol::Const(c(0.8, 0.0)),
    ];
    for i in 0..6 {
        symbols.push(corpus::phase_symbol(cfg.seed + 20 + i, 5));
    }
    for mu in &symbols {
        let terms = NeumannTerms::build(mu, 14);
        let lambda = c(0.3, 0.0);
        for zeta in &zeta_grid {
            values.push((terms.zeta_h_prime(lambda, *zeta), *zeta));
        }
    }
    let mut worst = f64::NEG_INFINITY;
    for (v, zeta) in values {
        let gch = goluzin_check(v, zeta)?;
        worst = worst.max(gch.lhs - gch.rhs).max(gch.simple_lhs - gch.simple_rhs);
    }
    Ok(CheckReport::of(inv, worst <= 1e-9, worst, format!("max inequality excess {worst:.3e}")))
}

fn check_distortion_density(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let grid = std::sync::Arc::new(PolarGrid::standard(160, 1024));
    let mut worst_sup = f64::NEG_INFINITY;
    let mut worst_recon = 0.0f64;
    for map in conformal_corpus(cfg.seed + 16) {
        let field = nu_phi(&map, grid.clone())?;
        let sup = field.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        worst_sup = worst_sup.max(sup - 6.0);
        let proj = crate::conformal::nu_phi_projection(&field, 128);
        for k in 0..20 {
            let z = Complex64::from_polar(0.7 * k as f64 / 19.0, 0.9 * k as f64);
            worst_recon = worst_recon.max((proj.eval(z) - map.g_value(z)).norm());
        }
    }
    Ok(CheckReport::of(
        inv,
        worst_sup <= 1e-9 && worst_recon < 1e-3,
        worst_sup,
        format!("sup excess {worst_sup:.3e}, coarse reconstruction {worst_recon:.3e}"),
    ))
}

// ----------------------------------------------------------------- beltrami

/// Exterior circle samples of `S mu(R zeta)` from the moment series.
fn beurling_dilate_samples(moments: &[Complex64], radius: f64, n: usize) -> Vec<Complex64> {
    let mut bins = vec![c(0.0, 0.0); n];
    let inv = 1.0 / radius;
    let mut p = inv * inv;
    for (m, mom) in moments.iter().enumerate() {
        let bin = (n - (m + 2) % n) % n;
        bins[bin] += -mom * (m as f64 + 1.0) * p;
        p *= inv;
    }
    fft_inverse(&mut bins);
    bins
}

fn check_beurling_form(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let corpus = corpus::symbol_corpus(cfg.seed);
    let results: Vec<f64> = corpus
        .par_iter()
        .map(|(_, mu)| {
            let needed = (44.0 / (1.0 / cfg.ladder.radii.last().unwrap() - 1.0).ln_1p()).ceil() as usize;
            let len = match mu {
                Symbol::Phase(_) => 4096.min(needed),
                Symbol::Field(_) | Symbol::Custom { .. } => 2000,
                _ => 8,
            };
            let moments = mu.moments(len);
            let mut w = f64::NEG_INFINITY;
            for &r in &cfg.ladder.radii {
                let big_r = 1.0 / r;
                let n = boundary_angular_resolution(r);
                let samples = beurling_dilate_samples(&moments, big_r, n);
                let l = exterior_clock(big_r);
                for &a in &[0.2f64, 0.5, 0.8] {
                    let cap = 10.0 * (1.0 - a).powf(-1.5);
                    let value = samples.iter().map(|v| (a * v.norm_sqr() / l).exp()).sum::<f64>() / n as f64;
                    w = w.max(value - cap);
                }
            }
            w
        })
        .collect();
    let worst = results.into_iter().fold(f64::NEG_INFINITY, f64::max);
    Ok(CheckReport::of(inv, worst <= 0.0, worst, format!("max excess over C(a): {worst:.3e}")))
}

fn check_motion_first(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut worst = 0.0f64;
    let r = 1.05;
    let symbols = vec![
        Symbol::Mu0,
        Symbol::Mu0Reflected,
        Symbol::ConjMonomial(1),
        Symbol::Const(c(0.7, 0.0)),
        corpus::phase_symbol(cfg.seed + 30, 5),
    ];
    for mu in &symbols {
        let terms = NeumannTerms::build(mu, 4);
        let motion = terms.motion_coefficients(r, 2, 64)?;
        for (l, got) in motion.coefficients[0].values.iter().enumerate() {
            let zeta = Complex64::from_polar(r, 2.0 * PI * l as f64 / 64.0);
            let direct = beurling_transform_exterior(mu, zeta)?;
            worst = worst.max((got - direct).norm());
        }
    }
    Ok(CheckReport::of(inv, worst < 1e-8, worst, format!("max two-route gap {worst:.3e}")))
}

fn check_motion_second(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut worst = 0.0f64;
    let r = 1.05;
    let symbols = vec![
        Symbol::Mu0,
        Symbol::Mu0Reflected,
        Symbol::ConjMonomial(1),
        Symbol::Const(c(0.7, 0.0)),
        corpus::phase_symbol(cfg.seed + 30, 5),
    ];
    for mu in &symbols {
        let terms = NeumannTerms::build(mu, 4);
        let motion = terms.motion_coefficients(r, 2, 64)?;
        for (l, got) in motion.coefficients[1].values.iter().enumerate() {
            let zeta = Complex64::from_polar(r, 2.0 * PI * l as f64 / 64.0);
            worst = worst.max((got - hat_h2_formula(&terms, zeta)).norm());
        }
    }
    Ok(CheckReport::of(inv, worst < 1e-8, worst, format!("max two-route gap {worst:.3e}")))
}

fn check_motion_indicator(inv: Invariant) -> Result<CheckReport> {
    // mu = 1_D: dPsi = 1 - lambda/zeta^2, H_hat_j = -1/(j zeta^{2j}),
    // G(lambda, z) = log(1 - lambda z^2)/lambda; everything to 1e-12.
    let terms = NeumannTerms::build(&Symbol::Const(c(1.0, 0.0)), 8);
    let mut worst = 0.0f64;
    let r = 1.25;
    for zeta in [c(1.3, 0.0), c(0.0, 1.8), c(-1.1, 0.9)] {
        let lambda = c(0.41, -0.2);
        let got = terms.dpsi(lambda, zeta);
        worst = worst.max((got - (c(1.0, 0.0) - lambda / (zeta * zeta))).norm());
    }
    let motion = terms.motion_coefficients(r, 6, 64)?;
    for j in 1..=6usize {
        for (l, got) in motion.coefficients[j - 1].values.iter().enumerate() {
            let zeta = Complex64::from_polar(r, 2.0 * PI * l as f64 / 64.0);
            let want = -1.0 / (j as f64 * zeta.powu(2 * j as u32));
            worst = worst.max((got - want).norm());
        }
    }
    for lambda in [c(0.5, 0.0), c(-0.3, 0.6)] {
        for z in [c(0.5, 0.1), c(-0.2, 0.7)] {
            let got = terms.g_lambda(lambda, z)?;
            let want = (c(1.0, 0.0) - lambda * z * z).ln() / lambda;
            worst = worst.max((got - want).norm());
        }
    }
    Ok(CheckReport::of(inv, worst < 1e-12, worst, format!("max closed-form gap {worst:.3e}")))
}

fn check_motion_derivative(inv: Invariant, cfg: &CheckConfig) -> Result<CheckReport> {
    let symbols = vec![
        Symbol::ConjMonomial(1),
        Symbol::Const(c(0.9, 0.0)),
        corpus::phase_symbol(cfg.seed + 31, 5),
        Symbol::Mu0Reflected,
    ];
    let mut worst = f64::NEG_INFINITY;
    for mu in &symbols {
        let terms = NeumannTerms::build(mu, 20);
        for lam in [0.1, 0.5, 0.9] {
            let lambda = Complex64::from_polar(lam, 0.8);
            for i in 1..10 {
                let z = Complex64::from_polar(0.095 * i as f64, 1.3 * i as f64);
                let g = terms.g_lambda(lambda, z)?;
                worst = worst.max(g.norm() - (1.0 / (1.0 - z.norm_sqr())).ln());
                let d = terms.g_lambda_dz(lambda, z)?;
                worst = worst.max((1.0 - z.norm_sqr()) * d.norm() - 6.0 * z.norm());
            }
        }
    }
    Ok(CheckReport::of(inv, worst <= 1e-6, worst, format!("max bound excess {worst:.3e}")))
}

fn check_plancherel(inv: Invariant) -> Result<CheckReport> {
    let lambda_samples: Vec<Complex64> = (0..16)
        .map(|m| Complex64::from_polar(0.999, 2.0 * PI * m as f64 / 16.0))
        .collect();
    let mut worst = f64::NEG_INFINITY;
    for mu in [Symbol::Const(c(1.0, 0.0)), Symbol::Mu0Reflected] {
        let terms = NeumannTerms::build(&mu, 6);
        let motion = terms.motion_coefficients(1.05, 3, 64)?;
        let chk = plancherel_average_check(&terms, &motion, 0.5, &lambda_samples)?;
        worst = worst.max(chk.lhs - chk.rhs - chk.allowance);
    }
    Ok(CheckReport::of(inv, worst <= 1e-10, worst, format!("max excess {worst:.3e}")))
}

// ---------------------------------------------------------------- dimension

fn check_dim_root(inv: Invariant) -> Result<CheckReport> {
    let mut worst = 0.0f64;
    for i in 1..=200 {
        let k = 0.001 * i as f64;
        worst = worst.max(f_quadratic(k, t_k(k)?).abs());
    }
    Ok(CheckReport::of(inv, worst < 1e-12, worst, format!("max residual {worst:.3e}")))
}

fn check_dim_derivative(inv: Invariant) -> Result<CheckReport> {
    let mut worst = f64::NEG_INFINITY;
    for i in 1..=200 {
        let k = 0.001 * i as f64;
        worst = worst.max(f_quadratic_dt(k, t_k(k)?));
    }
    Ok(CheckReport::of(inv, worst < 0.0, worst, format!("max derivative {worst:.3e}")))
}

fn check_symmetrization(inv: Invariant) -> Result<CheckReport> {
    let mut worst = 0.0f64;
    for i in 0..1000 {
        // symmetrize . desymmetrize is the well-conditioned composition and
        // holds to 1e-14 on all of [0, 1).
        let k = i as f64 / 1000.0;
        worst = worst.max((symmetrize(desymmetrize(k)?)? - k).abs());
        // The reverse passes through a compressed intermediate whose f64
        // rounding expands like 1/(1-k'), so it is checked away from 1.
        let kp = 0.9 * i as f64 / 1000.0;
        worst = worst.max((desymmetrize(symmetrize(kp)?)? - kp).abs());
    }
    Ok(CheckReport::of(inv, worst < 1e-14, worst, format!("max round-trip error {worst:.3e}")))
}

fn check_dim_gap_ratio(inv: Invariant) -> Result<CheckReport> {
    // As specified the ratio must stay below 8 on (0, 0.05]. The expansion
    // of the bound gives gap = 28 (k')^3 + O((k')^4) (the k-variable
    // coefficient 3.5 times (dk/dk')^3 = 8 at zero), so this check reports
    // the measured ratio honestly and fails.
    let mut worst = f64::NEG_INFINITY;
    for i in 1..=50 {
        let kp = 0.001 * i as f64;
        let rep = dim_bound(kp)?;
        worst = worst.max(rep.asymptotic_gap.abs() / (kp * kp * kp));
    }
    Ok(CheckReport::of(
        inv,
        worst <= 8.0,
        worst,
        format!("max |gap|/(k')^3 = {worst:.3} against the specified 8"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_covers_every_invariant_once() {
        let manifest = manifest();
        let total: usize = manifest.iter().map(|(_, v)| v.len()).sum();
        assert_eq!(total, Invariant::ALL.len());
        for inv in Invariant::ALL {
            let homes = manifest
                .iter()
                .filter(|(s, v)| *s == inv.suite() && v.contains(inv))
                .count();
            assert_eq!(homes, 1, "{} must sit in exactly one suite", inv.name());
        }
        assert!(Suite::parse("main-theorem").is_some());
        assert!(Suite::parse("nope").is_none());
    }

    #[test]
    fn fast_suites_pass() {
        let cfg = CheckConfig {
            random_samples: 500,
            bloch_corpus: 6,
            ladder: RadiiLadder::dyadic(4, 12),
            ..CheckConfig::default()
        };
        for suite in [Suite::Quadrature, Suite::Dimension] {
            for report in run_suite(suite, &cfg).unwrap() {
                if report.invariant == Invariant::DimensionGapRatio {
                    // Known spec defect: the true leading coefficient is 28.
                    assert!(!report.passed);
                    assert!(report.worst > 27.0 && report.worst < 40.0);
                } else {
                    assert!(report.passed, "{}: {}", report.invariant.name(), report.detail);
                }
            }
        }
    }
}
