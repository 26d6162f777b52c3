//! Symbol selection and the JSON polar-grid file format.

use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::Deserialize;

use blochvar::corpus;
use blochvar::grids::{DiskField, PolarGrid, RadialRule};
use blochvar::transforms::Symbol;

/// Polar-grid samples on disk: increasing radii in (0, 1), a power-of-two
/// angular count, and radius-major complex pairs.
#[derive(Debug, Deserialize)]
pub struct SymbolFile {
    pub radii: Vec<f64>,
    pub angular_count: usize,
    pub values: Vec<[f64; 2]>,
}

/// Trapezoid weights against `2 r dr` on the given radii, with constant
/// extension to the ends of [0, 1]. File symbols are grid-limited by
/// nature; this keeps their disk integrals first-order consistent.
fn trapezoid_weights(radii: &[f64]) -> Vec<f64> {
    let n = radii.len();
    let mut w = vec![0.0; n];
    let seg = |a: f64, b: f64| b * b - a * a; // integral of 2r dr
    for i in 0..n {
        let lo = if i == 0 { 0.0 } else { 0.5 * (radii[i - 1] + radii[i]) };
        let hi = if i == n - 1 { 1.0 } else { 0.5 * (radii[i] + radii[i + 1]) };
        w[i] = seg(lo, hi);
    }
    w
}

pub fn load_symbol_file(path: &Path) -> Result<Symbol> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading symbol file {}", path.display()))?;
    let file: SymbolFile = serde_json::from_str(&text).context("parsing symbol JSON")?;
    if file.values.len() != file.radii.len() * file.angular_count {
        bail!(
            "value count {} does not match radii x angular_count = {}",
            file.values.len(),
            file.radii.len() * file.angular_count
        );
    }
    let rule = RadialRule { weights: trapezoid_weights(&file.radii), nodes: file.radii };
    let grid = Arc::new(PolarGrid::new(rule, file.angular_count)?);
    let values = file.values.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
    Ok(Symbol::Field(Arc::new(DiskField::new(grid, values)?)))
}

pub fn parse_complex(s: &str) -> Result<Complex64> {
    // Accept "0.5", "0.5+0.3i", "-0.2i", "0.5-0.3i".
    let s = s.trim();
    if let Ok(re) = s.parse::<f64>() {
        return Ok(Complex64::new(re, 0.0));
    }
    if let Some(body) = s.strip_suffix('i') {
        // Split into real and imaginary parts at the last +/- that is not
        // at the start and not part of an exponent.
        let bytes = body.as_bytes();
        for pos in (1..bytes.len()).rev() {
            let ch = bytes[pos] as char;
            if (ch == '+' || ch == '-') && bytes[pos - 1] as char != 'e' && bytes[pos - 1] as char != 'E' {
                let re: f64 = body[..pos].parse()?;
                let im_str = &body[pos..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str.parse()?
                };
                return Ok(Complex64::new(re, im));
            }
        }
        let im: f64 = if body.is_empty() { 1.0 } else { body.parse()? };
        return Ok(Complex64::new(0.0, im));
    }
    bail!("cannot parse complex number from {s:?}")
}

/// `zero | const:c | mu0 | mu0-reflected | conj[:m] | radial:p | phase:seed | file:path`
pub fn parse_symbol(spec: &str) -> Result<Symbol> {
    let (head, rest) = match spec.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (spec, None),
    };
    match (head, rest) {
        ("zero", None) => Ok(Symbol::Const(Complex64::new(0.0, 0.0))),
        ("const", Some(c)) => Ok(Symbol::Const(parse_complex(c)?)),
        ("mu0", None) => Ok(Symbol::Mu0),
        ("mu0-reflected", None) => Ok(Symbol::Mu0Reflected),
        ("conj", None) => Ok(Symbol::ConjMonomial(1)),
        ("conj", Some(m)) => Ok(Symbol::ConjMonomial(m.parse()?)),
        ("radial", Some(p)) => Ok(Symbol::RadialPower(p.parse()?)),
        ("phase", Some(seed)) => Ok(corpus::phase_symbol(seed.parse()?, 6)),
        ("file", Some(path)) => load_symbol_file(Path::new(path)),
        _ => bail!("unknown symbol {spec:?}; expected zero|const:c|mu0|mu0-reflected|conj[:m]|radial:p|phase:seed|file:path"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(parse_complex("0.5+0.3i").unwrap(), Complex64::new(0.5, 0.3));
        assert_eq!(parse_complex("-0.2i").unwrap(), Complex64::new(0.0, -0.2));
        assert_eq!(parse_complex("1-2i").unwrap(), Complex64::new(1.0, -2.0));
        assert!(parse_complex("nope").is_err());
    }

    #[test]
    fn symbol_specs() {
        assert!(matches!(parse_symbol("mu0").unwrap(), Symbol::Mu0));
        assert!(matches!(parse_symbol("conj:3").unwrap(), Symbol::ConjMonomial(3)));
        assert!(matches!(parse_symbol("phase:7").unwrap(), Symbol::Phase(_)));
        assert!(parse_symbol("wat").is_err());
    }

    #[test]
    fn trapezoid_weights_integrate_area() {
        let radii: Vec<f64> = (1..40).map(|i| i as f64 / 40.0).collect();
        let w = trapezoid_weights(&radii);
        let total: f64 = w.iter().sum();
        assert!((total - 1.0).abs() < 1e-12, "area weights must sum to 1, got {total}");
    }
}
