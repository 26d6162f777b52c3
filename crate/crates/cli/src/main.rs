//! Experiment runner for the disk workbench: projection tables, tail
//! integral sweeps, spectrum regressions, tail-variance estimates, motion
//! coefficients, dimension bounds, and the verification suites.

mod output;
mod symbols;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use blochvar::checks::{projection_evaluable, run_suite, CheckConfig, Suite};
use blochvar::grids::{boundary_clock, RadiiLadder};
use blochvar::transforms::bergman_project;
use blochvar::variance::{atvar_estimate, exp_abs_integral, exp_type_spectrum, tail_sweep};

use output::{Format, Sink};

#[derive(Parser)]
#[command(name = "blochvar", version, about = "Numerical workbench for the unit disk")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format for tables.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,

    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for the random corpora.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    /// Emit bare two-column plot data instead of the full table.
    #[arg(long, default_value_t = false, global = true)]
    plot_data: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Bergman projection of a symbol at points of the real axis.
    Project {
        #[arg(long)]
        symbol: String,
        /// Number of evaluation points x_k = 0.99 (k+1)/points.
        #[arg(long, default_value_t = 8)]
        points: usize,
        /// Truncation degree of the coefficient series.
        #[arg(long, default_value_t = 1024)]
        truncation: usize,
    },
    /// Sweep the exponential tail integral of the projected symbol.
    Tail {
        #[arg(long)]
        symbol: String,
        /// Comma-separated a values.
        #[arg(long, default_value = "0.1,0.3,0.5,0.7,0.9")]
        a_grid: String,
        /// Dyadic ladder bounds m_min:m_max, radii 1 - 2^-m.
        #[arg(long, default_value = "4:17")]
        ladder: String,
    },
    /// Growth exponent of the circle integral of |e^{t P mu}| along the ladder.
    Spectrum {
        #[arg(long)]
        symbol: String,
        /// Complex parameter, e.g. "2" or "1+0.5i".
        #[arg(long, default_value = "2")]
        t: String,
        #[arg(long, default_value = "4:17")]
        ladder: String,
    },
    /// Tail-variance estimate of the projected symbol on a tau grid.
    Atvar {
        #[arg(long)]
        symbol: String,
        /// start:step:end
        #[arg(long, default_value = "0.7:0.05:1.4")]
        tau_grid: String,
        #[arg(long, default_value = "4:20")]
        ladder: String,
    },
    /// Motion coefficients of the Beltrami solution on an exterior circle.
    Motion {
        #[arg(long)]
        symbol: String,
        #[arg(long, default_value_t = 1.05)]
        radius: f64,
        #[arg(long, default_value_t = 4)]
        truncation: usize,
        #[arg(long, default_value_t = 64)]
        angles: usize,
    },
    /// Quasicircle dimension bound for two-sided dilatations.
    Dimension {
        /// Comma-separated k' values.
        #[arg(long)]
        kprime: String,
    },
    /// Run verification suites; nonzero exit on any violated check.
    Verify {
        /// Suite name or "all".
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value = "4:14")]
        ladder: String,
        /// Sample count for randomized pointwise checks.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
}

#[derive(Serialize)]
struct ProjectRow {
    x: f64,
    projection_re: f64,
    projection_im: f64,
}

#[derive(Serialize)]
struct SweepRowOut {
    a: f64,
    r: f64,
    value: f64,
    flagged: bool,
}

#[derive(Serialize)]
struct SpectrumRow {
    t_re: f64,
    t_im: f64,
    beta_hat: f64,
    fit_residual: f64,
}

#[derive(Serialize)]
struct AtvarRow {
    tau_estimate: f64,
}

#[derive(Serialize)]
struct MotionRow {
    j: usize,
    angle_index: usize,
    theta: f64,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct DimensionRow {
    k_prime: f64,
    k: f64,
    t_k: f64,
    bound: f64,
    gap_to_quadratic: f64,
}

fn parse_ladder(spec: &str) -> Result<RadiiLadder> {
    let (lo, hi) = spec
        .split_once(':')
        .context("ladder must be m_min:m_max")?;
    let lo: u32 = lo.parse()?;
    let hi: u32 = hi.parse()?;
    if lo < 1 || hi < lo {
        bail!("ladder bounds must satisfy 1 <= m_min <= m_max");
    }
    Ok(RadiiLadder::dyadic(lo, hi))
}

fn parse_f64_list(spec: &str) -> Result<Vec<f64>> {
    spec.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(Into::into))
        .collect()
}

fn parse_range(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        bail!("range must be start:step:end");
    }
    let (start, step, end): (f64, f64, f64) = (parts[0].parse()?, parts[1].parse()?, parts[2].parse()?);
    if step <= 0.0 || end < start {
        bail!("range must increase");
    }
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let v = start + step * k as f64;
        if v > end + 1e-12 {
            break;
        }
        out.push(v);
        k += 1;
    }
    Ok(out)
}

fn parse_complex_arg(spec: &str) -> Result<Complex64> {
    if let Ok(re) = spec.parse::<f64>() {
        return Ok(Complex64::new(re, 0.0));
    }
    symbols::parse_complex(spec)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut sink = Sink::open(&cli.out)?;
    match cli.command {
        Command::Project { symbol, points, truncation } => {
            if points == 0 {
                bail!("points must be positive");
            }
            let mu = symbols::parse_symbol(&symbol)?;
            let proj = bergman_project(&mu, truncation)?;
            let rows: Vec<ProjectRow> = (0..points)
                .map(|k| {
                    let x = 0.99 * (k as f64 + 1.0) / points as f64;
                    let v = proj.series.eval(Complex64::new(x, 0.0));
                    ProjectRow { x, projection_re: v.re, projection_im: v.im }
                })
                .collect();
            if cli.plot_data {
                let pairs: Vec<(f64, f64)> =
                    rows.iter().map(|r| (r.x, r.projection_re)).collect();
                sink.write_pairs(&pairs)?;
            } else {
                sink.write_rows(cli.format, &rows)?;
            }
        }
        Command::Tail { symbol, a_grid, ladder } => {
            let mu = symbols::parse_symbol(&symbol)?;
            let g = projection_evaluable(&mu)?;
            let a_grid = parse_f64_list(&a_grid)?;
            let ladder = parse_ladder(&ladder)?;
            let table = tail_sweep(g.as_ref(), &a_grid, &ladder)?;
            if cli.plot_data {
                if a_grid.len() != 1 {
                    bail!("--plot-data needs a single a value");
                }
                let pairs: Vec<(f64, f64)> = table
                    .rows
                    .iter()
                    .map(|row| (boundary_clock(row.r), row.value))
                    .collect();
                sink.write_pairs(&pairs)?;
            } else {
                let rows: Vec<SweepRowOut> = table
                    .rows
                    .iter()
                    .map(|row| SweepRowOut { a: row.param, r: row.r, value: row.value, flagged: row.flagged })
                    .collect();
                sink.write_rows(cli.format, &rows)?;
            }
        }
        Command::Spectrum { symbol, t, ladder } => {
            let mu = symbols::parse_symbol(&symbol)?;
            let g = projection_evaluable(&mu)?;
            let t = parse_complex_arg(&t)?;
            let ladder = parse_ladder(&ladder)?;
            if cli.plot_data {
                let mut pairs = Vec::new();
                for &r in &ladder.radii {
                    let s = exp_abs_integral(g.as_ref(), t, r)?;
                    if !s.flagged {
                        pairs.push((boundary_clock(r), s.value.ln()));
                    }
                }
                sink.write_pairs(&pairs)?;
            } else {
                let est = exp_type_spectrum(g.as_ref(), t, &ladder)?;
                sink.write_rows(
                    cli.format,
                    &[SpectrumRow {
                        t_re: t.re,
                        t_im: t.im,
                        beta_hat: est.beta_hat,
                        fit_residual: est.fit_residual,
                    }],
                )?;
            }
        }
        Command::Atvar { symbol, tau_grid, ladder } => {
            let mu = symbols::parse_symbol(&symbol)?;
            let g = projection_evaluable(&mu)?;
            let grid = parse_range(&tau_grid)?;
            let ladder = parse_ladder(&ladder)?;
            let est = atvar_estimate(g.as_ref(), &ladder, &grid);
            sink.write_rows(cli.format, &[AtvarRow { tau_estimate: est }])?;
        }
        Command::Motion { symbol, radius, truncation, angles } => {
            let mu = symbols::parse_symbol(&symbol)?;
            let terms = blochvar::beltrami::NeumannTerms::build(&mu, truncation.max(2));
            let motion = terms.motion_coefficients(radius, truncation, angles)?;
            let mut rows = Vec::new();
            for (idx, coeff) in motion.coefficients.iter().enumerate() {
                for (l, v) in coeff.values.iter().enumerate() {
                    rows.push(MotionRow {
                        j: idx + 1,
                        angle_index: l,
                        theta: 2.0 * std::f64::consts::PI * l as f64 / coeff.len() as f64,
                        re: v.re,
                        im: v.im,
                    });
                }
            }
            sink.write_rows(cli.format, &rows)?;
        }
        Command::Dimension { kprime } => {
            let rows: Result<Vec<DimensionRow>> = parse_f64_list(&kprime)?
                .into_iter()
                .map(|kp| {
                    let rep = blochvar::dimension::dim_bound(kp)?;
                    Ok(DimensionRow {
                        k_prime: rep.k_prime,
                        k: rep.k,
                        t_k: rep.t_k,
                        bound: rep.t_k,
                        gap_to_quadratic: rep.asymptotic_gap,
                    })
                })
                .collect();
            sink.write_rows(cli.format, &rows?)?;
        }
        Command::Verify { suite, ladder, samples } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![Suite::parse(&suite)
                    .with_context(|| format!("unknown suite {suite:?}; one of all, {}",
                        Suite::ALL.iter().map(|s| s.name()).collect::<Vec<_>>().join(", ")))?]
            };
            let cfg = CheckConfig {
                seed: cli.seed,
                ladder: parse_ladder(&ladder)?,
                random_samples: samples,
                bloch_corpus: 12,
            };
            let mut violated = Vec::new();
            for s in suites {
                for report in run_suite(s, &cfg)? {
                    sink.line(&format!(
                        "[{}] {} {}: {}",
                        s.name(),
                        if report.passed { "PASS" } else { "FAIL" },
                        report.invariant.name(),
                        report.detail
                    ))?;
                    if !report.passed {
                        violated.push(report);
                    }
                }
            }
            if !violated.is_empty() {
                eprintln!("violated checks:");
                for report in &violated {
                    eprintln!(
                        "  {}: {} ({})",
                        report.invariant.name(),
                        report.invariant.description(),
                        report.detail
                    );
                }
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
