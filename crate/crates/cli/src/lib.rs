//! Argument handling and command implementations for the `dicke-cat` binary.
//!
//! Commands write to caller-supplied streams so they can be driven
//! in-process by tests; `main` only parses flags and maps the outcome to an
//! exit status.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use dicke_cat::dynamics::{equivalence_sweep, ghz_dicke};
use dicke_cat::oracle::MAX_FULL_ATOMS;
use dicke_cat::{
    coherent_dicke, compare_channels, overlap, propagate, AtomCount, BetaGrid, CoherentParams,
    ComplexAmplitude, Error, FringeSeries, ScaledTime,
};

pub const CSV_HEADER: &str = "beta,p_coherent,p_mixture,p_no_cavity";

/// Simulate atomic cat / GHZ state generation under η S⁺S⁻ and the
/// Ramsey fringes used to detect it.
#[derive(Debug, Parser)]
#[command(name = "dicke-cat", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub params: Params,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Print the Dicke amplitudes of the coherent state |θ,φ⟩.
    Coherent,
    /// Print |θ,φ⟩ propagated to τ = ηt.
    Evolve,
    /// Check the cat/GHZ equivalence for N = 1..n (default n = 12).
    Verify,
    /// Print |⟨GHZ|ψ(τ)⟩|² for ψ(0) = |θ,φ⟩; passes when within tolerance of 1.
    GhzFidelity,
    /// Write coherent / mixture / no-cavity fringes as CSV.
    Fringes,
}

#[derive(Debug, Clone, Args)]
pub struct Params {
    /// Number of atoms [default: 12 for verify, 3 otherwise]
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// First-zone polar angle θ [default: π/2]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// First-zone azimuth φ [default: −π/2]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Second-zone polar angle α [default: π/2]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Scaled interaction time τ = ηt [default: π/2]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    /// Read θ, φ, α, τ and the β range as multiples of π
    #[arg(long, global = true)]
    pub pi_units: bool,
    /// Start of the β grid [default: −π]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta_min: Option<f64>,
    /// End of the β grid, excluded [default: π]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta_max: Option<f64>,
    /// Number of β grid points [default: 256]
    #[arg(long, global = true)]
    pub beta_steps: Option<usize>,
    /// Pass/fail tolerance for checks [default: 1e-10]
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// CSV destination for `fringes` [default: standard output]
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

/// Fully resolved run parameters, angles in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub theta: f64,
    pub phi: f64,
    pub alpha: f64,
    pub tau: f64,
    pub beta_min: f64,
    pub beta_max: f64,
    pub beta_steps: usize,
    pub tolerance: f64,
    pub output: Option<PathBuf>,
}

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, String> {
        let p = &cli.params;
        let unit = if p.pi_units { PI } else { 1.0 };
        let angle = |v: Option<f64>, default: f64| v.map_or(default, |x| x * unit);
        let default_n = if cli.command == Command::Verify { 12 } else { 3 };
        let config = RunConfig {
            command: cli.command,
            n: p.n.unwrap_or(default_n),
            theta: angle(p.theta, FRAC_PI_2),
            phi: angle(p.phi, -FRAC_PI_2),
            alpha: angle(p.alpha, FRAC_PI_2),
            tau: angle(p.tau, FRAC_PI_2),
            beta_min: angle(p.beta_min, -PI),
            beta_max: angle(p.beta_max, PI),
            beta_steps: p.beta_steps.unwrap_or(BetaGrid::DEFAULT_STEPS),
            tolerance: p.tolerance.unwrap_or(DEFAULT_TOLERANCE),
            output: p.output.clone(),
        };
        if !(config.tolerance > 0.0 && config.tolerance.is_finite()) {
            return Err(format!("tolerance must be positive, got {}", config.tolerance));
        }
        if config.command == Command::Fringes && config.beta_steps < 2 {
            return Err(format!(
                "--beta-steps must be at least 2, got {}",
                config.beta_steps
            ));
        }
        Ok(config)
    }
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success = 0,
    CheckFailed = 1,
    Usage = 2,
}

impl Outcome {
    pub fn code(self) -> i32 {
        self as i32
    }
}

fn classify(err: &Error) -> Outcome {
    match err {
        Error::ZeroAtoms
        | Error::NonFinite { .. }
        | Error::Capacity { .. }
        | Error::InvalidGrid(_) => Outcome::Usage,
        _ => Outcome::CheckFailed,
    }
}

/// Runs one command. Reports go to `out`; diagnostics (and the fringe
/// summary when the CSV itself occupies `out`) go to `err`.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let result = match config.command {
        Command::Coherent => cmd_coherent(config, out),
        Command::Evolve => cmd_evolve(config, out),
        Command::Verify => cmd_verify(config, out),
        Command::GhzFidelity => cmd_ghz_fidelity(config, out),
        Command::Fringes => cmd_fringes(config, out, err),
    };
    match result {
        Ok(outcome) => outcome,
        Err(CommandError::Core(e)) => {
            let _ = writeln!(err, "error: {e}");
            classify(&e)
        }
        Err(CommandError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            Outcome::Usage
        }
    }
}

#[derive(Debug)]
enum CommandError {
    Core(Error),
    Io(io::Error),
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        CommandError::Core(e)
    }
}

impl From<io::Error> for CommandError {
    fn from(e: io::Error) -> Self {
        CommandError::Io(e)
    }
}

type CmdResult = Result<Outcome, CommandError>;

fn source_state(config: &RunConfig) -> Result<(AtomCount, CoherentParams), Error> {
    Ok((
        AtomCount::new(config.n)?,
        CoherentParams::new(config.theta, config.phi)?,
    ))
}

/// `k amplitude` lines, with −0 printed as 0.
fn write_amplitudes(out: &mut dyn Write, amps: &[ComplexAmplitude]) -> io::Result<()> {
    for (k, c) in amps.iter().enumerate() {
        let c = ComplexAmplitude::new(c.re + 0.0, c.im + 0.0);
        writeln!(out, "{k} {c}")?;
    }
    Ok(())
}

fn cmd_coherent(config: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let (n, p) = source_state(config)?;
    write_amplitudes(out, coherent_dicke(n, p).amplitudes())?;
    Ok(Outcome::Success)
}

fn cmd_evolve(config: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let (n, p) = source_state(config)?;
    let evolved = propagate(&coherent_dicke(n, p), ScaledTime::new(config.tau)?);
    write_amplitudes(out, evolved.amplitudes())?;
    Ok(Outcome::Success)
}

fn cmd_verify(config: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let n = AtomCount::new(config.n)?.ensure_at_most(MAX_FULL_ATOMS, "verify")?;
    let reports = equivalence_sweep(n)?;
    writeln!(
        out,
        "{:>3}  {:>22}  {:>22}  {:>22}  {:>22}  {:>22}  {:>10}  status",
        "n", "F(prop,cat)", "F(prop,ghz)", "phase(cat/ghz)", "expected", "residual", "phase_err"
    )?;
    let mut first_failure = None;
    for r in &reports {
        let ok = r.passes(config.tolerance);
        if !ok && first_failure.is_none() {
            first_failure = Some(r.n);
        }
        writeln!(
            out,
            "{:>3}  {:>22.16}  {:>22.16}  {:>22.16}  {:>22.16}  {:>22.3e}  {:>10.2e}  {}",
            r.n,
            r.fidelity_prop_vs_cat,
            r.fidelity_prop_vs_ghz,
            r.phase_cat_over_ghz,
            r.expected_phase,
            r.max_residual,
            r.phase_error(),
            if ok { "pass" } else { "FAIL" }
        )?;
    }
    match first_failure {
        None => {
            writeln!(
                out,
                "all {} cases pass at tolerance {:e}",
                reports.len(),
                config.tolerance
            )?;
            Ok(Outcome::Success)
        }
        Some(n) => {
            writeln!(out, "first failing n = {n}")?;
            Ok(Outcome::CheckFailed)
        }
    }
}

fn cmd_ghz_fidelity(config: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let (n, p) = source_state(config)?;
    let n = n.ensure_at_most(MAX_FULL_ATOMS, "ghz-fidelity")?;
    let evolved = propagate(&coherent_dicke(n, p), ScaledTime::new(config.tau)?);
    let fidelity = overlap(&ghz_dicke(n)?, &evolved)?.norm_sqr();
    let ok = (fidelity - 1.0).abs() < config.tolerance;
    writeln!(out, "fidelity {fidelity}")?;
    writeln!(
        out,
        "{} (|1 - F| = {:e}, tolerance {:e})",
        if ok { "pass" } else { "FAIL" },
        (fidelity - 1.0).abs(),
        config.tolerance
    )?;
    Ok(if ok { Outcome::Success } else { Outcome::CheckFailed })
}

/// 17 significant digits; parses back to the identical f64.
fn csv_number(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

/// The CSV text for a fringe series: header plus one LF-terminated row per β.
pub fn fringe_csv(series: &FringeSeries) -> String {
    let mut csv = String::with_capacity(80 * (series.betas.len() + 1));
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for i in 0..series.betas.len() {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            csv_number(series.betas[i]),
            csv_number(series.p_coherent[i]),
            csv_number(series.p_mixture[i]),
            csv_number(series.p_no_cavity[i])
        );
    }
    csv
}

pub fn fringe_summary(series: &FringeSeries) -> String {
    let mut s = String::new();
    let src = series.source;
    let _ = writeln!(
        s,
        "n = {}, theta = {}, phi = {}, tau = {}, alpha = {}, points = {}",
        series.n,
        src.theta,
        src.phi,
        src.tau,
        series.alpha,
        series.betas.len()
    );
    let _ = writeln!(s, "max |p_coherent - p_mixture|   = {:.17e}", series.max_gap_coherent_mixture());
    let _ = writeln!(s, "max |p_coherent - p_no_cavity| = {:.17e}", series.max_gap_coherent_no_cavity());
    let _ = writeln!(s, "max |p_mixture - p_no_cavity|  = {:.17e}", series.max_gap_mixture_no_cavity());
    match series.harmonics() {
        Ok(h) => {
            let fmt = |v: &[f64]| {
                v.iter()
                    .map(|x| format!("{x:.6e}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let _ = writeln!(s, "harmonics 0..{} (|DFT|/len):", series.n);
            let _ = writeln!(s, "  coherent  {}", fmt(&h.coherent));
            let _ = writeln!(s, "  mixture   {}", fmt(&h.mixture));
            let _ = writeln!(s, "  no_cavity {}", fmt(&h.no_cavity));
        }
        Err(e) => {
            let _ = writeln!(s, "harmonics unavailable: {e}");
        }
    }
    s
}

fn cmd_fringes(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let grid = BetaGrid::new(config.beta_min, config.beta_max, config.beta_steps)?;
    let (n, p) = source_state(config)?;
    let series = compare_channels(n, p, ScaledTime::new(config.tau)?, config.alpha, grid)?;
    let csv = fringe_csv(&series);
    let summary = fringe_summary(&series);
    match &config.output {
        Some(path) => {
            std::fs::write(path, csv.as_bytes()).map_err(|e| {
                io::Error::new(e.kind(), format!("cannot write {}: {e}", path.display()))
            })?;
            out.write_all(summary.as_bytes())?;
            writeln!(out, "wrote {} rows to {}", series.betas.len(), path.display())?;
        }
        None => {
            out.write_all(csv.as_bytes())?;
            err.write_all(summary.as_bytes())?;
        }
    }
    Ok(Outcome::Success)
}
