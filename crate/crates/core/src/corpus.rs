//! Seeded test corpora: random Bloch polynomials, unimodular phase
//! symbols, the mixed symbol family used by the sweep checks, and
//! univalent maps generated through the distortion criterion.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bloch::bloch_seminorm_refined;
use crate::conformal::SchlichtMap;
use crate::grids::PowerSeries;
use crate::transforms::Symbol;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_coeff(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random polynomial with decaying coefficients and no constant term,
/// normalized to refined grid seminorm exactly one.
pub fn normalized_bloch_polynomial(rng: &mut ChaCha8Rng, degree: usize) -> PowerSeries {
    loop {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
        for (j, c) in coeffs.iter_mut().enumerate().skip(1) {
            *c = random_coeff(rng) / (j as f64);
        }
        let g = PowerSeries::new(coeffs);
        let s = bloch_seminorm_refined(&g);
        if s > 1e-6 {
            return g.scale(Complex64::new(1.0 / s, 0.0));
        }
    }
}

/// Real-phase polynomial datum for `Symbol::Phase`: e^{i Re p(w)} is
/// exactly unimodular whatever the coefficients.
pub fn phase_polynomial(rng: &mut ChaCha8Rng, degree: usize) -> PowerSeries {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
    for (j, c) in coeffs.iter_mut().enumerate().skip(1) {
        *c = random_coeff(rng) * (1.2 / (j as f64));
    }
    PowerSeries::new(coeffs)
}

pub fn phase_symbol(seed: u64, degree: usize) -> Symbol {
    Symbol::Phase(phase_polynomial(&mut rng(seed), degree))
}

/// The standard sweep family: constants, the extremal symbol and its
/// reflection, conjugate monomials, radial powers, and random phases.
/// All have sup norm at most one; at least 20 members.
pub fn symbol_corpus(seed: u64) -> Vec<(String, Symbol)> {
    let mut out: Vec<(String, Symbol)> = vec![
        ("const:1".into(), Symbol::Const(Complex64::new(1.0, 0.0))),
        ("const:0.5".into(), Symbol::Const(Complex64::new(0.5, 0.0))),
        ("const:0.6+0.8i".into(), Symbol::Const(Complex64::new(0.6, 0.8))),
        ("const:-0.9i".into(), Symbol::Const(Complex64::new(0.0, -0.9))),
        ("mu0".into(), Symbol::Mu0),
        ("mu0-reflected".into(), Symbol::Mu0Reflected),
        ("conj:1".into(), Symbol::ConjMonomial(1)),
        ("conj:2".into(), Symbol::ConjMonomial(2)),
        ("conj:3".into(), Symbol::ConjMonomial(3)),
        ("conj:4".into(), Symbol::ConjMonomial(4)),
        ("radial:0.5".into(), Symbol::RadialPower(0.5)),
        ("radial:2".into(), Symbol::RadialPower(2.0)),
    ];
    for i in 0..8 {
        out.push((format!("phase:{}", seed + i), phase_symbol(seed + i, 6)));
    }
    out
}

/// Univalent maps from distortion data with seminorm at most the given
/// target (< 1 keeps univalence by the distortion criterion, used here
/// generatively, never as a checker).
pub fn schlicht_corpus(seed: u64, count: usize, target_seminorm: f64) -> Vec<SchlichtMap> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 7];
        for (j, c) in coeffs.iter_mut().enumerate().skip(1) {
            *c = random_coeff(&mut rng) / (j as f64 + 1.0);
        }
        let h = PowerSeries::new(coeffs);
        let s = bloch_seminorm_refined(&h);
        if s < 1e-6 {
            continue;
        }
        let h = h.scale(Complex64::new(target_seminorm / s, 0.0));
        out.push(SchlichtMap::from_distortion(h).expect("normalized distortion datum"));
    }
    out
}
