//! Command-line entry point: `groundstate`, `thresholds`, `minimize`,
//! `sweep`, and the `verify` acceptance-battery runner.
//!
//! Conventions shared by every subcommand:
//! * JSON outputs print floats with 17 significant digits (exact f64
//!   round-trip) and carry a `meta` block with the crate version, the
//!   resolved configuration, and the grid.
//! * Files are written atomically (temp file + rename).
//! * Identical configuration and seed produce byte-identical outputs.
//! * Exit codes: 0 success, 1 numerical failure, 2 usage error.
//! * `KIRCHHOFF_LOG={error|info|debug}` controls logging.

use crate::blowup::{run_sweep, FrameRule, SweepRecord, SweepSpec};
use crate::energy::{ModelParams, Potential};
use crate::error::{Error, Result};
use crate::grid::{Grid, GridKind, GridSpec};
use crate::groundstate::{shoot_ground_state_with, ShootOptions};
use crate::minimize::{multistart_minimize, FlowConfig, FlowStatus};
use crate::thresholds::{classify_existence, compute_report};
use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(
    name = "kirchhoff",
    version,
    about = "Constrained minimization laboratory for Kirchhoff-type energies"
)]
struct Cli {
    /// Seed for randomized verification fields.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand, Debug, Clone)]
enum CliCommand {
    /// Compute the ground state of the scalar field equation by shooting.
    Groundstate(GroundstateArgs),
    /// Evaluate every explicit existence threshold as JSON.
    Thresholds(ThresholdsArgs),
    /// Minimize the energy over the unit L2 sphere.
    Minimize(MinimizeArgs),
    /// Run a p -> 8/N sweep from a config file.
    Sweep(SweepArgs),
    /// Run the acceptance battery and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
struct GroundstateArgs {
    #[arg(long)]
    dim: u32,
    #[arg(long)]
    p: f64,
    /// Pohozaev-residual tolerance.
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    #[arg(long, default_value_t = 4096)]
    grid_m: usize,
    /// Domain radius; defaults to 14 decay lengths.
    #[arg(long)]
    grid_r: Option<f64>,
    /// Profile CSV destination.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct ThresholdsArgs {
    #[arg(long)]
    dim: u32,
    /// Exponent p; may be omitted with --critical.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    /// Evaluate at the critical exponent p* = 8/N.
    #[arg(long, default_value_t = false)]
    critical: bool,
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
}

#[derive(Args, Debug, Clone)]
struct MinimizeArgs {
    #[arg(long)]
    dim: u32,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    #[arg(long)]
    beta: f64,
    /// zero | harmonic:k[:c] | power:s
    #[arg(long, default_value = "zero")]
    potential: String,
    /// Grid as M,R.
    #[arg(long)]
    grid: String,
    /// Use the full-line grid (N = 1 only); required for off-origin traps.
    #[arg(long, default_value_t = false)]
    line: bool,
    #[arg(long, default_value_t = 6)]
    multistart: usize,
    #[arg(long)]
    out: PathBuf,
    /// Also write the final field as CSV.
    #[arg(long)]
    field: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug, Clone)]
struct VerifyArgs {
    /// Fast 1-D closed-form subset only.
    #[arg(long, default_value_t = false)]
    quick: bool,
}

/// A parsed and semantically validated invocation.
#[derive(Debug)]
pub struct RunConfig {
    command: CliCommand,
    seed: u64,
}

/// Parse and validate argv (the first element is the binary name). Unknown
/// flags, missing values, and out-of-range parameters are usage errors.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::Usage(e.to_string()))?;
    let config = RunConfig { command: cli.command, seed: cli.seed };
    validate(&config)?;
    Ok(config)
}

fn validate(config: &RunConfig) -> Result<()> {
    match &config.command {
        CliCommand::Groundstate(a) => {
            crate::groundstate::shoot_ground_state_validate(a.dim, a.p)?;
            if a.grid_m < 16 {
                return Err(Error::Usage(format!("--grid-m must be at least 16, got {}", a.grid_m)));
            }
            Ok(())
        }
        CliCommand::Thresholds(a) => {
            let p = resolve_threshold_p(a)?;
            let p_star = 8.0 / a.dim as f64;
            if !(p > 0.0 && p <= p_star + 1e-12) {
                return Err(Error::Usage(format!(
                    "--p must lie in (0, 8/N] = (0, {}], got {}",
                    p_star, p
                )));
            }
            Ok(())
        }
        CliCommand::Minimize(a) => {
            ModelParams::new(a.a, a.b, a.beta, a.p, a.dim).map_err(usage)?;
            parse_potential(&a.potential)?;
            parse_grid_arg(&a.grid)?;
            if a.line && a.dim != 1 {
                return Err(Error::Usage("--line requires --dim 1".to_string()));
            }
            Ok(())
        }
        CliCommand::Sweep(a) => {
            if !a.config.exists() {
                return Err(Error::Usage(format!(
                    "sweep config not found: {}",
                    a.config.display()
                )));
            }
            Ok(())
        }
        CliCommand::Verify(_) => Ok(()),
    }
}

fn usage(e: Error) -> Error {
    match e {
        Error::Config(msg) => Error::Usage(msg),
        other => other,
    }
}

fn resolve_threshold_p(a: &ThresholdsArgs) -> Result<f64> {
    match (a.p, a.critical) {
        (Some(p), false) => Ok(p),
        (None, true) => Ok(8.0 / a.dim as f64),
        (Some(p), true) => {
            let p_star = 8.0 / a.dim as f64;
            if (p - p_star).abs() > 1e-12 {
                return Err(Error::Usage(format!(
                    "--critical means p = 8/N = {}, but --p {} was given",
                    p_star, p
                )));
            }
            Ok(p_star)
        }
        (None, false) => Err(Error::Usage("either --p or --critical is required".to_string())),
    }
}

/// Parse `zero | harmonic:k[:c] | power:s`.
fn parse_potential(text: &str) -> Result<Potential> {
    let parts: Vec<&str> = text.split(':').collect();
    let pot = match parts[0] {
        "zero" if parts.len() == 1 => Potential::Zero,
        "harmonic" if parts.len() == 2 || parts.len() == 3 => {
            let strength: f64 = parts[1].parse().map_err(|_| {
                Error::Usage(format!("bad harmonic strength in --potential {}", text))
            })?;
            let center: f64 = if parts.len() == 3 {
                parts[2].parse().map_err(|_| {
                    Error::Usage(format!("bad harmonic center in --potential {}", text))
                })?
            } else {
                0.0
            };
            Potential::HarmonicShifted { strength, center }
        }
        "power" if parts.len() == 2 => {
            let exponent: f64 = parts[1]
                .parse()
                .map_err(|_| Error::Usage(format!("bad power exponent in --potential {}", text)))?;
            Potential::PowerRadial { exponent }
        }
        _ => {
            return Err(Error::Usage(format!(
                "--potential must be zero | harmonic:k[:c] | power:s, got {}",
                text
            )))
        }
    };
    pot.validate().map_err(usage)?;
    Ok(pot)
}

fn parse_grid_arg(text: &str) -> Result<(usize, f64)> {
    let mut parts = text.split(',');
    let (Some(ms), Some(rs), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::Usage(format!("--grid must be M,R, got {}", text)));
    };
    let m: usize =
        ms.trim().parse().map_err(|_| Error::Usage(format!("bad node count in --grid {}", text)))?;
    let r: f64 =
        rs.trim().parse().map_err(|_| Error::Usage(format!("bad extent in --grid {}", text)))?;
    if m < 16 || !(r > 0.0) {
        return Err(Error::Usage(format!("--grid needs M >= 16 and R > 0, got {}", text)));
    }
    Ok((m, r))
}

/// Parse the process arguments and run; the result is the exit status.
pub fn main_entry() -> i32 {
    init_logging();
    match parse_args(std::env::args()) {
        Ok(config) => run(&config),
        Err(Error::Usage(msg)) => {
            eprintln!("{}", msg);
            2
        }
        Err(e) => {
            eprintln!("error: {}", e);
            2
        }
    }
}

fn init_logging() {
    let env = env_logger::Env::new().filter("KIRCHHOFF_LOG");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Dispatch a validated configuration; outputs are written atomically.
pub fn run(config: &RunConfig) -> i32 {
    let outcome = match &config.command {
        CliCommand::Groundstate(a) => run_groundstate(a),
        CliCommand::Thresholds(a) => run_thresholds(a),
        CliCommand::Minimize(a) => run_minimize(a),
        CliCommand::Sweep(a) => run_sweep_cmd(a),
        CliCommand::Verify(a) => return run_verify(a, config.seed),
    };
    match outcome {
        Ok(()) => 0,
        Err(Error::Usage(msg)) | Err(Error::Config(msg)) => {
            eprintln!("{}", msg);
            2
        }
        Err(e) => {
            eprintln!("error: {}", e);
            1
        }
    }
}

// ---------------------------------------------------------------------------
// JSON with 17 significant digits
// ---------------------------------------------------------------------------

/// serde_json formatter printing every float with 17 significant digits, so
/// outputs round-trip f64 exactly and reruns are byte-identical.
struct G17Formatter;

impl serde_json::ser::Formatter for G17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{:.16e}", value)
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{:.16e}", value)
    }
}

fn to_json_17<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, G17Formatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Numerical(format!("JSON serialization failed: {}", e)))?;
    String::from_utf8(out).map_err(|e| Error::Numerical(format!("non-UTF8 JSON: {}", e)))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension(match path.extension() {
        Some(e) => format!("{}.tmp", e.to_string_lossy()),
        None => "tmp".to_string(),
    });
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[derive(serde::Serialize)]
struct Meta {
    version: &'static str,
    command: &'static str,
    config: BTreeMap<String, String>,
    grid: Option<GridSpec>,
}

fn meta(command: &'static str, config: BTreeMap<String, String>, grid: Option<GridSpec>) -> Meta {
    Meta { version: env!("CARGO_PKG_VERSION"), command, config, grid }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn run_groundstate(a: &GroundstateArgs) -> Result<()> {
    let opts = ShootOptions { nodes: a.grid_m, extent: a.grid_r, max_refinements: 3 };
    let gs = shoot_ground_state_with(a.dim, a.p, a.tol, &opts)?;

    if let Some(out) = &a.out {
        let mut buf = Vec::new();
        writeln!(buf, "# kirchhoff groundstate profile")?;
        writeln!(buf, "# version={}", env!("CARGO_PKG_VERSION"))?;
        writeln!(
            buf,
            "# dim={} p={:.16e} tol={:.16e} grid_m={} grid_r={:.16e}",
            a.dim,
            a.p,
            a.tol,
            gs.profile.grid().len(),
            gs.profile.grid().spec().extent
        )?;
        gs.profile.write_csv(&mut buf)?;
        write_atomic(out, &buf)?;
    }

    #[derive(serde::Serialize)]
    struct Summary {
        meta: Meta,
        dim: u32,
        p: f64,
        l2_norm_sq: f64,
        dirichlet: f64,
        lp2_norm: f64,
        shoot_height: f64,
        pohozaev_res1: f64,
        pohozaev_res2: f64,
    }
    let mut cfg = BTreeMap::new();
    cfg.insert("dim".into(), a.dim.to_string());
    cfg.insert("p".into(), format!("{:.16e}", a.p));
    cfg.insert("tol".into(), format!("{:.16e}", a.tol));
    if let Some(out) = &a.out {
        cfg.insert("out".into(), out.display().to_string());
    }
    let summary = Summary {
        meta: meta("groundstate", cfg, Some(*gs.profile.grid().spec())),
        dim: gs.dim,
        p: gs.p,
        l2_norm_sq: gs.l2_norm_sq,
        dirichlet: gs.dirichlet,
        lp2_norm: gs.lp2_norm,
        shoot_height: gs.shoot_height,
        pohozaev_res1: gs.pohozaev_res1,
        pohozaev_res2: gs.pohozaev_res2,
    };
    println!("{}", to_json_17(&summary)?);
    Ok(())
}

fn run_thresholds(a: &ThresholdsArgs) -> Result<()> {
    let p = resolve_threshold_p(a)?;
    let report = compute_report(a.dim, p, a.a, a.b, a.tol)?;

    #[derive(serde::Serialize)]
    struct Out {
        meta: Meta,
        report: crate::thresholds::ThresholdReport,
    }
    let mut cfg = BTreeMap::new();
    cfg.insert("dim".into(), a.dim.to_string());
    cfg.insert("p".into(), format!("{:.16e}", p));
    cfg.insert("a".into(), format!("{:.16e}", a.a));
    cfg.insert("b".into(), format!("{:.16e}", a.b));
    cfg.insert("critical".into(), a.critical.to_string());
    let out = Out { meta: meta("thresholds", cfg, None), report };
    println!("{}", to_json_17(&out)?);
    Ok(())
}

fn status_name(status: FlowStatus) -> &'static str {
    match status {
        FlowStatus::Converged => "Converged",
        FlowStatus::DivergedUnbounded => "DivergedUnbounded",
        FlowStatus::VanishingSpreading => "VanishingSpreading",
        FlowStatus::MaxIters => "MaxIters",
    }
}

fn run_minimize(a: &MinimizeArgs) -> Result<()> {
    let params = ModelParams::new(a.a, a.b, a.beta, a.p, a.dim)?;
    let potential = parse_potential(&a.potential)?;
    let (m, r) = parse_grid_arg(&a.grid)?;
    let spec = if a.line { GridSpec::line(r, m) } else { GridSpec::radial(a.dim, r, m) };
    let grid = Grid::new(spec)?;

    let report = compute_report(a.dim, a.p, a.a, a.b, 1e-4)?;
    let verdict = classify_existence(a.p, a.beta, !potential.is_zero(), &report);
    let cfg = FlowConfig { multistart: a.multistart, ..FlowConfig::default() };
    let res = multistart_minimize(&params, &potential, &grid, &cfg)?;

    if let Some(field_path) = &a.field {
        let mut buf = Vec::new();
        writeln!(buf, "# kirchhoff minimize field")?;
        writeln!(buf, "# version={}", env!("CARGO_PKG_VERSION"))?;
        writeln!(buf, "# status={} energy={:.16e}", status_name(res.status), res.energy.total)?;
        res.u_final.write_csv(&mut buf)?;
        write_atomic(field_path, &buf)?;
    }

    #[derive(serde::Serialize)]
    struct Out {
        meta: Meta,
        status: &'static str,
        energy: crate::energy::EnergyBreakdown,
        lambda: f64,
        grad_residual: f64,
        iterations: u64,
        mass_dev_max: f64,
        thresholds: crate::thresholds::ThresholdReport,
        verdict: Option<crate::thresholds::ExistenceVerdict>,
        verdict_error: Option<String>,
    }
    let mut cfg_echo = BTreeMap::new();
    cfg_echo.insert("dim".into(), a.dim.to_string());
    cfg_echo.insert("p".into(), format!("{:.16e}", a.p));
    cfg_echo.insert("a".into(), format!("{:.16e}", a.a));
    cfg_echo.insert("b".into(), format!("{:.16e}", a.b));
    cfg_echo.insert("beta".into(), format!("{:.16e}", a.beta));
    cfg_echo.insert("potential".into(), a.potential.clone());
    cfg_echo.insert("grid".into(), a.grid.clone());
    cfg_echo.insert("line".into(), a.line.to_string());
    cfg_echo.insert("multistart".into(), a.multistart.to_string());
    let (verdict_ok, verdict_err) = match verdict {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let out = Out {
        meta: meta("minimize", cfg_echo, Some(spec)),
        status: status_name(res.status),
        energy: res.energy,
        lambda: res.lambda,
        grad_residual: res.grad_residual,
        iterations: res.iterations,
        mass_dev_max: res.mass_dev_max,
        thresholds: report,
        verdict: verdict_ok,
        verdict_error: verdict_err,
    };
    write_atomic(&a.out, to_json_17(&out)?.as_bytes())?;
    println!(
        "{} energy={:.10e} lambda={:.10e} residual={:.3e} iterations={}",
        status_name(res.status),
        res.energy.total,
        res.lambda,
        res.grad_residual,
        res.iterations
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

/// Flat `key = value` config with `#` comments.
fn parse_kv_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read {}: {}", path.display(), e)))?;
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Usage(format!(
                "{}:{}: expected key = value",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn cfg_parse<T: std::str::FromStr>(
    map: &BTreeMap<String, String>,
    key: &str,
    default: T,
) -> Result<T> {
    match map.get(key) {
        None => Ok(default),
        Some(v) => v.parse().map_err(|_| Error::Usage(format!("bad value for {}: {}", key, v))),
    }
}

fn sweep_spec_from_config(map: &BTreeMap<String, String>) -> Result<SweepSpec> {
    let dim: u32 = cfg_parse(map, "dim", 1)?;
    let a: f64 = cfg_parse(map, "a", 1.0)?;
    let b: f64 = cfg_parse(map, "b", 1.0)?;
    let potential = parse_potential(map.get("potential").map(String::as_str).unwrap_or("zero"))?;
    let shoot_tol: f64 = cfg_parse(map, "shoot_tol", 1e-5)?;

    // beta, either absolute or relative to the critical threshold
    let beta = match (map.get("beta"), map.get("beta_over_beta_star")) {
        (Some(v), None) => {
            v.parse::<f64>().map_err(|_| Error::Usage(format!("bad value for beta: {}", v)))?
        }
        (None, Some(v)) => {
            let factor: f64 = v.parse().map_err(|_| {
                Error::Usage(format!("bad value for beta_over_beta_star: {}", v))
            })?;
            let gs = crate::groundstate::shoot_ground_state(dim, 8.0 / dim as f64, shoot_tol)?;
            factor * crate::thresholds::beta_p(b, &gs)
        }
        (Some(_), Some(_)) => {
            return Err(Error::Usage(
                "give either beta or beta_over_beta_star, not both".to_string(),
            ))
        }
        (None, None) => {
            return Err(Error::Usage("sweep config needs beta or beta_over_beta_star".to_string()))
        }
    };

    let deltas: Vec<f64> = map
        .get("deltas")
        .map(String::as_str)
        .unwrap_or("0.5,0.3,0.2,0.1,0.05,0.02")
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Usage(format!("bad delta: {}", s))))
        .collect::<Result<_>>()?;

    let grid_m: usize = cfg_parse(map, "grid_m", 4096)?;
    let grid_r: f64 = cfg_parse(map, "grid_r", 40.0)?;
    let kind = match map.get("grid_kind").map(String::as_str).unwrap_or("line") {
        "line" => GridKind::FullLine1D,
        "radial" => GridKind::RadialHalfLine,
        other => {
            return Err(Error::Usage(format!("grid_kind must be line or radial, got {}", other)))
        }
    };
    let grid = match kind {
        GridKind::FullLine1D => GridSpec::line(grid_r, grid_m),
        GridKind::RadialHalfLine => GridSpec::radial(dim, grid_r, grid_m),
    };
    let frame = match map.get("frame").map(String::as_str).unwrap_or("auto") {
        "auto" => FrameRule::Auto,
        "never" => FrameRule::Never,
        other => return Err(Error::Usage(format!("frame must be auto or never, got {}", other))),
    };
    let flow = FlowConfig {
        max_iters: cfg_parse(map, "max_iters", FlowConfig::default().max_iters)?,
        grad_tol: cfg_parse(map, "grad_tol", FlowConfig::default().grad_tol)?,
        multistart: cfg_parse(map, "multistart", FlowConfig::default().multistart)?,
        ..FlowConfig::default()
    };

    Ok(SweepSpec { a, b, dim, beta, potential, deltas, grid, frame, flow, shoot_tol })
}

fn records_csv(records: &[SweepRecord], header_meta: &[String]) -> String {
    let mut out = String::new();
    for line in header_meta {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(
        "p,delta,d_measured,d_asym,ratio_d,r_p,eps_p,T,T_sq_over_rp,\
         interaction_scaled_over_rp,lambda_eps4,V_term,profile_dist,center_x\n",
    );
    for r in records {
        let t_over = r.grad_sq / r.r_p.sqrt();
        let row = [
            r.p,
            r.delta,
            r.d_measured,
            r.d_asym,
            r.d_measured / r.d_asym,
            r.r_p,
            r.eps_p,
            r.grad_sq,
            t_over * t_over,
            r.interaction_scaled / r.r_p,
            r.lambda_eps4,
            r.v_term,
            r.profile_dist,
            r.center,
        ];
        let cells: Vec<String> = row.iter().map(|v| format!("{:.16e}", v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn run_sweep_cmd(a: &SweepArgs) -> Result<()> {
    let map = parse_kv_config(&a.config)?;
    let spec = sweep_spec_from_config(&map)?;
    let records = run_sweep(&spec)?;
    let mut header = vec![
        format!("kirchhoff sweep version={}", env!("CARGO_PKG_VERSION")),
        format!("config={}", a.config.display()),
        format!(
            "dim={} a={:.16e} b={:.16e} beta={:.16e} grid_m={} grid_r={:.16e} kind={}",
            spec.dim, spec.a, spec.b, spec.beta, spec.grid.nodes, spec.grid.extent, spec.grid.kind
        ),
    ];
    for (k, v) in &map {
        header.push(format!("cfg.{}={}", k, v));
    }
    write_atomic(&a.out, records_csv(&records, &header).as_bytes())?;
    for r in &records {
        println!(
            "p={:.4} d={:.6e} d/d_asym={:.4} T2/rp={:.4} lambda_eps4={:.4} center={:.4} {}",
            r.p,
            r.d_measured,
            r.d_measured / r.d_asym,
            (r.grad_sq / r.r_p.sqrt()).powi(2),
            r.lambda_eps4,
            r.center,
            if r.converged { "converged" } else { "NOT-CONVERGED" }
        );
    }
    if records.iter().any(|r| !r.converged) {
        return Err(Error::Solver("one or more sweep points did not converge".to_string()));
    }
    Ok(())
}

fn run_verify(a: &VerifyArgs, seed: u64) -> i32 {
    let outcomes = crate::verify::run(a.quick, seed);
    let mut passed = 0;
    println!("{:<5} {:<6} NAME", "CHECK", "RESULT");
    for o in &outcomes {
        println!("{:<5} {:<6} {}", o.id, if o.passed { "PASS" } else { "FAIL" }, o.name);
        if !o.passed {
            println!("      -> {}", o.detail);
        }
        if o.passed {
            passed += 1;
        }
    }
    println!("{}/{} checks passed", passed, outcomes.len());
    if passed == outcomes.len() {
        0
    } else {
        1
    }
}
