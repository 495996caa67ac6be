//! Command-line front end. Every subcommand emits a deterministic CSV or JSON
//! artifact: identical flags (and seed) produce byte-identical files, so the
//! outputs work as golden fixtures and plot inputs.
//!
//! Exit codes: 0 success, 2 configuration/domain error, 3 numerical failure.
//! Diagnostics go to stderr only.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lanxp_core::classical::{
    action_integral, coherent_trajectory, integrate_trajectory, PhaseState, PhysicalParams,
};
use lanxp_core::counting::{
    area_count_monte_carlo, area_count_numeric, breakdown, higher_level_count, locate_zeros,
    semiclassical_count, AreaMethod, CountingBreakdown, HigherLevelParams,
};
use lanxp_core::defaults::DEFAULTS;
use lanxp_core::spectrum::{solve_spectrum, spectral_staircase};
use lanxp_core::wavefunctions::{grid_field, NormalizationConvention};
use lanxp_core::{Error, ModelGeometry, Parity};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "lanxp",
    version,
    about = "Level counting, spectra, eigenfunctions and classical orbits of a charged \
             particle in a magnetic field with an inverted (xy) potential"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Locate critical-line zero heights below a ceiling
    Zeros(ZerosArgs),
    /// Counting-function table: smooth, fluctuating, exact and semiclassical counts
    Count(CountArgs),
    /// Eigenvalues of the twisted boundary condition (or a staircase over a grid)
    Spectrum(SpectrumArgs),
    /// Eigenfunction samples on a square grid, with ridge metadata
    Wavefunction(WavefunctionArgs),
    /// Classical dynamics: trajectory, coherent gyration, or action integrals
    Classical(ClassicalArgs),
    /// Phase-space area counts: closed form vs quadrature vs Monte Carlo
    Area(AreaArgs),
}

/// Inclusive numeric grid written as `a:b:step`.
#[derive(Clone, Debug)]
struct RangeSpec {
    start: f64,
    stop: f64,
    step: f64,
}

impl FromStr for RangeSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected a:b:step, got {s:?}"));
        }
        let mut nums = [0.0f64; 3];
        for (slot, part) in nums.iter_mut().zip(&parts) {
            *slot = part
                .parse()
                .map_err(|_| format!("not a number in range: {part:?}"))?;
        }
        let [start, stop, step] = nums;
        if !(start.is_finite() && stop.is_finite() && step > 0.0 && stop >= start) {
            return Err(format!("need finite a <= b and step > 0, got {s:?}"));
        }
        Ok(RangeSpec { start, stop, step })
    }
}

impl RangeSpec {
    fn expand(&self) -> Vec<f64> {
        // half-ulp slack so 1:100:1 and friends include their endpoint
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=count).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Parity {
        match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

#[derive(Args)]
struct GeomArgs {
    /// Box half-width L (default: the defaults-table log box ratio)
    #[arg(long = "L")]
    l: Option<f64>,
    /// Magnetic length
    #[arg(long)]
    ell: Option<f64>,
}

impl GeomArgs {
    fn build(&self) -> Result<ModelGeometry, Error> {
        let ell = self.ell.unwrap_or(DEFAULTS.ell);
        match self.l {
            Some(l) => ModelGeometry::new(l, ell),
            None => ModelGeometry::from_log_box_ratio(DEFAULTS.log_box_ratio, ell),
        }
    }
}

#[derive(Args)]
struct IoArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnergyArgs {
    /// Single energy/height E
    #[arg(long)]
    e: Option<f64>,
    /// Energy grid a:b:step (inclusive)
    #[arg(long)]
    range: Option<RangeSpec>,
}

impl EnergyArgs {
    fn grid(&self) -> Result<Vec<f64>, Error> {
        match (self.e, &self.range) {
            (Some(e), None) => Ok(vec![e]),
            (None, Some(r)) => Ok(r.expand()),
            _ => Err(Error::Domain("give exactly one of --e or --range".into())),
        }
    }
}

#[derive(Args)]
struct ZerosArgs {
    /// Height ceiling for the zero scan
    #[arg(long)]
    emax: f64,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    energy: EnergyArgs,
    #[command(flatten)]
    geom: GeomArgs,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Solve for every eigenvalue below this energy
    #[arg(long, required_unless_present = "range")]
    emax: Option<f64>,
    /// Staircase mode: count levels on this grid instead of listing them
    #[arg(long)]
    range: Option<RangeSpec>,
    /// Boundary-condition sector
    #[arg(long, value_enum, default_value_t = ParityArg::Even)]
    parity: ParityArg,
    #[command(flatten)]
    geom: GeomArgs,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct WavefunctionArgs {
    /// Eigenfunction energy
    #[arg(long)]
    e: f64,
    /// Boundary-condition sector
    #[arg(long, value_enum, default_value_t = ParityArg::Even)]
    parity: ParityArg,
    /// Grid resolution per axis
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    geom: GeomArgs,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassicalMode {
    /// Integrate Hamilton's equations from (1, 0, 0, 0)
    Trajectory,
    /// Sample the coherent gyration (q, p) along a log-spaced Q sweep
    Coherent,
    /// Action integrals of both modes against the level-count prediction
    Action,
}

#[derive(Args)]
struct ClassicalArgs {
    mode: ClassicalMode,
    /// Frequency ratio of the fast mode to the slow mode (> 1); trajectory: sets
    /// the coupling, absent means pure cyclotron motion
    #[arg(long)]
    gamma: Option<f64>,
    /// Coherent-state radius parameter (real)
    #[arg(long)]
    z: Option<f64>,
    /// Energy (coherent Q-sweep endpoints and action integrals)
    #[arg(long)]
    e: Option<f64>,
    /// Action over an energy grid a:b:step
    #[arg(long)]
    range: Option<RangeSpec>,
    /// Trajectory: cyclotron periods to integrate; coherent: sample count
    #[arg(long)]
    n: Option<usize>,
    /// Trajectory integrator tolerance
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    geom: GeomArgs,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct AreaArgs {
    #[command(flatten)]
    energy: EnergyArgs,
    /// Monte Carlo sample count
    #[arg(long)]
    n: Option<u64>,
    /// Monte Carlo seed
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    geom: GeomArgs,
    #[command(flatten)]
    io: IoArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, io) = match &cli.cmd {
        Cmd::Zeros(a) => (cmd_zeros(a), &a.io),
        Cmd::Count(a) => (cmd_count(a), &a.io),
        Cmd::Spectrum(a) => (cmd_spectrum(a), &a.io),
        Cmd::Wavefunction(a) => (cmd_wavefunction(a), &a.io),
        Cmd::Classical(a) => (cmd_classical(a), &a.io),
        Cmd::Area(a) => (cmd_area(a), &a.io),
    };
    let bytes = match result {
        Ok(b) => b,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(exit_code(&err));
        }
    };
    if let Err(err) = emit(&bytes, io.out.as_deref()) {
        eprintln!("error: {err}");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}

/// 2 = the request itself is out of range; 3 = the numerics gave up on an
/// admissible request.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Domain(_)
        | Error::CeilingExceeded { .. }
        | Error::Bracketing(_)
        | Error::Pole { .. }
        | Error::Singular(_)
        | Error::NonClosure { .. } => 2,
        _ => 3,
    }
}

fn emit(bytes: &[u8], out: Option<&std::path::Path>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .or_else(|e| {
                    // a downstream consumer closing the pipe (e.g. `| head`)
                    // is not an error worth reporting
                    if e.kind() == std::io::ErrorKind::BrokenPipe {
                        std::process::exit(0);
                    }
                    Err(Error::Domain(format!("cannot write stdout: {e}")))
                })
        }
    }
}

/// 17 significant digits: enough to round-trip any f64 exactly.
fn fmt17(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

fn json_doc(value: serde_json::Value) -> Vec<u8> {
    let mut bytes = value.to_string().into_bytes();
    bytes.push(b'\n');
    bytes
}

fn cmd_zeros(args: &ZerosArgs) -> Result<Vec<u8>, Error> {
    let zeros = locate_zeros(args.emax)?;
    Ok(match args.io.format {
        Format::Csv => {
            let mut s = String::from("index,E_zero\n");
            for (i, z) in zeros.iter().enumerate() {
                let _ = writeln!(s, "{},{}", i + 1, fmt17(*z));
            }
            s.into_bytes()
        }
        Format::Json => json_doc(json!({ "emax": args.emax, "zeros": zeros })),
    })
}

fn count_row(e: f64, geom: &ModelGeometry) -> Result<CountingBreakdown, Error> {
    if e == 0.0 {
        // the fluctuation march needs E > 0; every other column has an exact
        // value at the origin, so emit the row with the fluctuation marked
        return Ok(CountingBreakdown {
            e: 0.0,
            theta: 0.0,
            n_smooth: 1.0,
            s_fluct: f64::NAN,
            n_exact: 0,
            n_sc: 0.0,
        });
    }
    breakdown(e, geom)
}

fn cmd_count(args: &CountArgs) -> Result<Vec<u8>, Error> {
    let geom = args.geom.build()?;
    let grid = args.energy.grid()?;
    let mut rows = Vec::with_capacity(grid.len());
    for &e in &grid {
        rows.push(count_row(e, &geom)?);
    }
    Ok(match args.io.format {
        Format::Csv => {
            let mut s = String::from("E,theta,n_smooth,s_fluct,n_exact,n_sc\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    fmt17(r.e),
                    fmt17(r.theta),
                    fmt17(r.n_smooth),
                    fmt17(r.s_fluct),
                    r.n_exact,
                    fmt17(r.n_sc)
                );
            }
            s.into_bytes()
        }
        Format::Json => json_doc(json!({
            "rows": rows
                .iter()
                .map(|r| {
                    json!({
                        "e": r.e,
                        "theta": r.theta,
                        "n_smooth": r.n_smooth,
                        "s_fluct": r.s_fluct, // null when marked
                        "n_exact": r.n_exact,
                        "n_sc": r.n_sc,
                    })
                })
                .collect::<Vec<_>>(),
        })),
    })
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<Vec<u8>, Error> {
    let geom = args.geom.build()?;
    let parity: Parity = args.parity.into();
    if let Some(range) = &args.range {
        let rows = spectral_staircase(&range.expand(), &geom, parity)?;
        return Ok(match args.io.format {
            Format::Csv => {
                let mut s = String::from("E,count,continuum,missing\n");
                for r in &rows {
                    let _ = writeln!(
                        s,
                        "{},{},{},{}",
                        fmt17(r.e),
                        r.count,
                        fmt17(r.continuum),
                        fmt17(r.missing)
                    );
                }
                s.into_bytes()
            }
            Format::Json => json_doc(json!({
                "parity": parity.to_string(),
                "rows": rows
                    .iter()
                    .map(|r| json!({
                        "e": r.e,
                        "count": r.count,
                        "continuum": r.continuum,
                        "missing": r.missing,
                    }))
                    .collect::<Vec<_>>(),
            })),
        });
    }
    let emax = args.emax.expect("clap requires emax without range");
    let records = if emax == 0.0 {
        Vec::new()
    } else {
        solve_spectrum(emax, &geom, parity)?
    };
    Ok(match args.io.format {
        Format::Csv => {
            let mut s = String::from("parity,k,E_k,residual\n");
            for r in &records {
                let _ = writeln!(s, "{},{},{},{}", r.parity, r.k, fmt17(r.e_k), fmt17(r.residual));
            }
            s.into_bytes()
        }
        Format::Json => json_doc(json!({
            "parity": parity.to_string(),
            "eigenvalues": records
                .iter()
                .map(|r| json!({ "k": r.k, "e": r.e_k, "residual": r.residual }))
                .collect::<Vec<_>>(),
        })),
    })
}

fn cmd_wavefunction(args: &WavefunctionArgs) -> Result<Vec<u8>, Error> {
    let geom = args.geom.build()?;
    let parity: Parity = args.parity.into();
    let n = args.n.unwrap_or(DEFAULTS.grid_n);
    let mut grid = grid_field(args.e, &geom, parity, n)?;
    grid.apply_normalization(NormalizationConvention::SupOne);
    let ridge = grid.ridge_cell();
    let deviation = grid.ridge_deviation_cells(geom.ell());
    Ok(match args.io.format {
        Format::Csv => {
            let mut s = String::new();
            match (ridge, deviation) {
                (Some((i, j)), Some(d)) => {
                    let _ = writeln!(
                        s,
                        "# ridge_x={} ridge_y={} ridge_deviation_cells={}",
                        fmt17(grid.x_at(i)),
                        fmt17(grid.y_at(j)),
                        fmt17(d)
                    );
                }
                _ => s.push_str("# ridge: none\n"),
            }
            s.push_str("x,y,re,im,abs\n");
            for j in 0..grid.n_y {
                for i in 0..grid.n_x {
                    let v = grid.value(i, j);
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{}",
                        fmt17(grid.x_at(i)),
                        fmt17(grid.y_at(j)),
                        fmt17(v.re),
                        fmt17(v.im),
                        fmt17(v.norm())
                    );
                }
            }
            s.into_bytes()
        }
        Format::Json => {
            // one JSON header line, then five little-endian f64 column blocks
            // (x, y, re, im, abs), each n_x*n_y values with x fastest
            let header = json!({
                "e": grid.e,
                "parity": parity.to_string(),
                "n_x": grid.n_x,
                "n_y": grid.n_y,
                "x_min": grid.x_min,
                "x_max": grid.x_max,
                "y_min": grid.y_min,
                "y_max": grid.y_max,
                "ridge_x": ridge.map(|(i, _)| grid.x_at(i)),
                "ridge_y": ridge.map(|(_, j)| grid.y_at(j)),
                "ridge_deviation_cells": deviation,
                "columns": ["x", "y", "re", "im", "abs"],
                "dtype": "f64le",
                "points": grid.n_x * grid.n_y,
            });
            let points = grid.n_x * grid.n_y;
            let mut bytes = header.to_string().into_bytes();
            bytes.push(b'\n');
            bytes.reserve(5 * 8 * points);
            let mut push_column = |f: &dyn Fn(usize, usize) -> f64| {
                for j in 0..grid.n_y {
                    for i in 0..grid.n_x {
                        bytes.extend_from_slice(&f(i, j).to_le_bytes());
                    }
                }
            };
            push_column(&|i, _| grid.x_at(i));
            push_column(&|_, j| grid.y_at(j));
            push_column(&|i, j| grid.value(i, j).re);
            push_column(&|i, j| grid.value(i, j).im);
            push_column(&|i, j| grid.value(i, j).norm());
            bytes
        }
    })
}

/// Coupling that gives a prescribed fast-to-slow frequency ratio in the
/// B = mu = e = c = 1 unit system: ratio = coth(theta), coupling = sinh(2 theta)/2.
fn lambda_for_gamma(gamma: f64) -> Result<f64, Error> {
    if !(gamma > 1.0) {
        return Err(Error::Domain(format!(
            "frequency ratio must exceed 1, got {gamma}"
        )));
    }
    Ok((2.0 * (1.0 / gamma).atanh()).sinh() / 2.0)
}

fn require(name: &str, v: Option<f64>) -> Result<f64, Error> {
    v.ok_or_else(|| Error::Domain(format!("--{name} is required for this mode")))
}

fn cmd_classical(args: &ClassicalArgs) -> Result<Vec<u8>, Error> {
    let geom = args.geom.build()?;
    match args.mode {
        ClassicalMode::Trajectory => {
            let lambda = match args.gamma {
                Some(g) => lambda_for_gamma(g)?,
                None => 0.0,
            };
            let params = PhysicalParams::new(1.0, lambda, 1.0, 1.0, 1.0)?;
            let periods = args.n.unwrap_or(10) as f64;
            let t_final = periods * 2.0 * std::f64::consts::PI / params.omega0();
            let tol = args.tol.unwrap_or(DEFAULTS.rel_tol);
            let traj = integrate_trajectory(&PhaseState::new(1.0, 0.0, 0.0, 0.0), &params, t_final, tol)?;
            Ok(match args.io.format {
                Format::Csv => {
                    let mut s = String::from("t,x,y,p_x,p_y,energy\n");
                    for (state, energy) in traj.samples.iter().zip(&traj.energy_series) {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{}",
                            fmt17(state.t),
                            fmt17(state.x),
                            fmt17(state.y),
                            fmt17(state.p_x),
                            fmt17(state.p_y),
                            fmt17(*energy)
                        );
                    }
                    s.into_bytes()
                }
                Format::Json => json_doc(json!({
                    "lambda": lambda,
                    "t": traj.samples.iter().map(|s| s.t).collect::<Vec<_>>(),
                    "x": traj.samples.iter().map(|s| s.x).collect::<Vec<_>>(),
                    "y": traj.samples.iter().map(|s| s.y).collect::<Vec<_>>(),
                    "p_x": traj.samples.iter().map(|s| s.p_x).collect::<Vec<_>>(),
                    "p_y": traj.samples.iter().map(|s| s.p_y).collect::<Vec<_>>(),
                    "energy": traj.energy_series,
                })),
            })
        }
        ClassicalMode::Coherent => {
            let gamma = require("gamma", args.gamma)?;
            let z = require("z", args.z)?;
            let e = require("e", args.e)?;
            if !(e > 0.0) {
                return Err(Error::Domain(format!("energy must be positive, got {e}")));
            }
            // sweep Q across one box traversal of the energy-E orbit
            let q_min = e * geom.ell().powi(2) / geom.l();
            let q_max = geom.l();
            let n = args.n.unwrap_or(DEFAULTS.grid_n);
            let samples = coherent_trajectory(z, gamma, q_min, q_max, n)?;
            Ok(match args.io.format {
                Format::Csv => {
                    let mut s = String::from("Q,q,p,radius_sq\n");
                    for (big_q, q, p) in &samples {
                        let _ = writeln!(
                            s,
                            "{},{},{},{}",
                            fmt17(*big_q),
                            fmt17(*q),
                            fmt17(*p),
                            fmt17(q * q + p * p)
                        );
                    }
                    s.into_bytes()
                }
                Format::Json => json_doc(json!({
                    "gamma": gamma,
                    "z": z,
                    "Q": samples.iter().map(|s| s.0).collect::<Vec<_>>(),
                    "q": samples.iter().map(|s| s.1).collect::<Vec<_>>(),
                    "p": samples.iter().map(|s| s.2).collect::<Vec<_>>(),
                })),
            })
        }
        ClassicalMode::Action => {
            let gamma = require("gamma", args.gamma)?;
            let z = require("z", args.z)?;
            let hl = HigherLevelParams::new(gamma, z)?;
            let grid = match (&args.range, args.e) {
                (Some(r), None) => r.expand(),
                (None, Some(e)) => vec![e],
                _ => return Err(Error::Domain("give exactly one of --e or --range".into())),
            };
            let tau = 2.0 * std::f64::consts::PI;
            let mut rows = Vec::with_capacity(grid.len());
            for &e in &grid {
                let (action_hyp, action_gyr) = action_integral(e, &geom, &hl)?;
                let total = (action_hyp + action_gyr) / tau;
                let predicted = higher_level_count(e, &geom, &hl)?;
                rows.push((e, action_hyp, action_gyr, total, predicted));
            }
            Ok(match args.io.format {
                Format::Csv => {
                    let mut s =
                        String::from("E,action_hyperbolic,action_gyration,states_total,states_predicted,difference\n");
                    for (e, ah, ag, total, predicted) in &rows {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{}",
                            fmt17(*e),
                            fmt17(*ah),
                            fmt17(*ag),
                            fmt17(*total),
                            fmt17(*predicted),
                            fmt17(total - predicted)
                        );
                    }
                    s.into_bytes()
                }
                Format::Json => json_doc(json!({
                    "gamma": gamma,
                    "z": z,
                    "rows": rows
                        .iter()
                        .map(|(e, ah, ag, total, predicted)| json!({
                            "e": e,
                            "action_hyperbolic": ah,
                            "action_gyration": ag,
                            "states_total": total,
                            "states_predicted": predicted,
                            "difference": total - predicted,
                        }))
                        .collect::<Vec<_>>(),
                })),
            })
        }
    }
}

fn cmd_area(args: &AreaArgs) -> Result<Vec<u8>, Error> {
    let geom = args.geom.build()?;
    let grid = args.energy.grid()?;
    let samples = args.n.unwrap_or(DEFAULTS.mc_samples);
    let seed = args.seed.unwrap_or(DEFAULTS.seed);
    let mut rows = Vec::with_capacity(grid.len());
    for &e in &grid {
        let closed = semiclassical_count(e, &geom)?;
        let quad = area_count_numeric(e, &geom, AreaMethod::Quadrature, seed)?;
        let mc = area_count_monte_carlo(e, &geom, samples, seed)?;
        rows.push((e, closed, quad, mc));
    }
    Ok(match args.io.format {
        Format::Csv => {
            let mut s = format!("# samples={samples} seed={seed}\n");
            s.push_str("E,closed_form,quadrature,monte_carlo\n");
            for (e, closed, quad, mc) in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    fmt17(*e),
                    fmt17(*closed),
                    fmt17(*quad),
                    fmt17(*mc)
                );
            }
            s.into_bytes()
        }
        Format::Json => json_doc(json!({
            "samples": samples,
            "seed": seed,
            "rows": rows
                .iter()
                .map(|(e, closed, quad, mc)| json!({
                    "e": e,
                    "closed_form": closed,
                    "quadrature": quad,
                    "monte_carlo": mc,
                }))
                .collect::<Vec<_>>(),
        })),
    })
}
