//! Command-line front end: resolves a [`RunConfig`] into a sweep or focal
//! scan, writes the CSV and a JSON manifest beside it.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, ValueEnum};
use serde_json::json;

use crate::config::{key_section, parse_config, Command, ConfigError, LayerSpec, RunConfig};
use crate::error::Error;
use crate::maslov::{write_focal_csv, GoMode, Paraboloid, QuadratureOrders};
use crate::media::ChiralMedium;
use crate::planar::{quarter_wave_thickness, Excitation, LayerStack};
use crate::presets::{
    focal_preset, focal_preset_names, planar_preset, planar_preset_names, FocalPreset, Reflector,
    FOCAL_F, FOCAL_H,
};
use crate::sweep::{
    default_kappa_grid, default_theta_grid, run_sweep, uniform_grid, write_sweep_csv, SweepSpec,
    SweepVariable,
};

pub const EXIT_SOLVER: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CommandArg {
    SweepAngle,
    SweepChirality,
    FocalScan,
    Presets,
}

impl From<CommandArg> for Command {
    fn from(c: CommandArg) -> Self {
        match c {
            CommandArg::SweepAngle => Command::SweepAngle,
            CommandArg::SweepChirality => Command::SweepChirality,
            CommandArg::FocalScan => Command::FocalScan,
            CommandArg::Presets => Command::Presets,
        }
    }
}

/// Power sweeps and focal-field scans for two-layer chiral stacks.
#[derive(Debug, Parser)]
#[command(name = "chiralfocus", version)]
struct Args {
    /// What to run (sweep-angle, sweep-chirality, focal-scan, presets), followed by
    /// extra `key=value` settings applied after the config file. The command may
    /// instead come from `command` in the config file.
    #[arg(value_name = "COMMAND | KEY=VALUE")]
    items: Vec<String>,
    /// Config file with `key = value` lines and [stack]/[excitation]/[sweep]/[focal] sections.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named preset; see `chiralfocus presets`.
    #[arg(long)]
    preset: Option<String>,
    /// Output CSV; a JSON manifest is written next to it. Default `<preset>.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (output does not depend on this).
    #[arg(long)]
    threads: Option<usize>,
    /// Gauss-Legendre order in alpha for focal scans.
    #[arg(long)]
    quad_alpha: Option<usize>,
    /// Trapezoid order in gamma for focal scans.
    #[arg(long)]
    quad_gamma: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Solver(Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Solver(_) => EXIT_SOLVER,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownPreset(p) => CliError::Config(ConfigError::UnknownPreset(p)),
            Error::InvalidParameter(m) => CliError::Config(ConfigError::Invalid(m)),
            other => CliError::Solver(other),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// A fully resolved run.
#[derive(Debug, Clone)]
pub enum Job {
    Sweep {
        spec: SweepSpec,
        preset: Option<String>,
    },
    Focal {
        preset: FocalPreset,
        grid: Vec<f64>,
        orders: QuadratureOrders,
        mode: GoMode,
    },
    Presets,
}

fn build_layer(spec: &LayerSpec, n: usize) -> Result<ChiralMedium, ConfigError> {
    let kappa = spec.kappa.unwrap_or(0.0);
    if let Some(eta) = spec.eta_r {
        return Ok(ChiralMedium::from_impedance(eta, kappa));
    }
    match spec.eps_r {
        Some(eps) => Ok(ChiralMedium::chiral(eps, spec.mu_r.unwrap_or(1.0), kappa)),
        None => Err(ConfigError::Invalid(format!(
            "layer {n} is not defined: set eps_r{n} (and optionally mu_r{n}, kappa{n}) or eta_r{n}, or choose a preset"
        ))),
    }
}

fn apply_layer(mut m: ChiralMedium, spec: &LayerSpec) -> ChiralMedium {
    if let Some(eta) = spec.eta_r {
        m = ChiralMedium::from_impedance(eta, m.kappa);
    }
    if let Some(e) = spec.eps_r {
        m.eps_r = e.into();
    }
    if let Some(mu) = spec.mu_r {
        m.mu_r = mu.into();
    }
    if let Some(k) = spec.kappa {
        m.kappa = k;
    }
    m
}

/// Stack from explicit layer settings, optionally on top of a base stack.
fn resolve_stack(cfg: &RunConfig, base: Option<LayerStack>) -> Result<LayerStack, CliError> {
    let k0 = cfg.k0.or(base.map(|s| s.k0)).unwrap_or(1.0);
    let (l1, l2) = match base {
        Some(b) => (
            apply_layer(b.layer1, &cfg.layers[0]),
            apply_layer(b.layer2, &cfg.layers[1]),
        ),
        None => (
            build_layer(&cfg.layers[0], 1)?,
            build_layer(&cfg.layers[1], 2)?,
        ),
    };
    let lambda0 = 2.0 * std::f64::consts::PI / k0;
    let thickness = |spec: &LayerSpec,
                     m: &ChiralMedium,
                     base_d: Option<f64>,
                     n: usize|
     -> Result<f64, ConfigError> {
        let material_changed =
            spec.eps_r.is_some() || spec.mu_r.is_some() || spec.eta_r.is_some() || cfg.k0.is_some();
        match (spec.thickness, cfg.quarter_wave, base_d) {
            (Some(d), _, _) => Ok(d),
            (None, Some(true), _) => Ok(quarter_wave_thickness(m, lambda0)),
            (None, _, Some(d)) if !material_changed => Ok(d),
            (None, Some(false), _) => Err(ConfigError::Invalid(format!(
                "quarter_wave = false needs an explicit d{n}"
            ))),
            (None, _, _) => Ok(quarter_wave_thickness(m, lambda0)),
        }
    };
    let d1 = thickness(&cfg.layers[0], &l1, base.map(|b| b.d1), 1)?;
    let d2 = thickness(&cfg.layers[1], &l2, base.map(|b| b.d2), 2)?;
    Ok(LayerStack::new(l1, d1, l2, d2, k0)?)
}

fn grid_or(
    cfg_start: Option<f64>,
    cfg_stop: Option<f64>,
    cfg_step: Option<f64>,
    default: Vec<f64>,
    default_step: f64,
) -> Result<Vec<f64>, CliError> {
    if cfg_start.is_none() && cfg_stop.is_none() && cfg_step.is_none() {
        return Ok(default);
    }
    let start = cfg_start.unwrap_or(default[0]);
    let stop = cfg_stop.unwrap_or(default[default.len() - 1]);
    Ok(uniform_grid(start, stop, cfg_step.unwrap_or(default_step))?)
}

/// Turns a parsed configuration into a concrete job.
pub fn resolve(cfg: &RunConfig) -> Result<Job, CliError> {
    let command = cfg.command.ok_or(ConfigError::MissingCommand)?;
    match command {
        Command::Presets => Ok(Job::Presets),
        Command::SweepAngle | Command::SweepChirality => {
            let preset = match &cfg.preset {
                Some(name) => Some(
                    planar_preset(name).map_err(|_| ConfigError::UnknownPreset(name.clone()))?,
                ),
                None => None,
            };
            let stack = resolve_stack(cfg, preset.as_ref().map(|p| p.stack))?;
            let variable =
                match command {
                    Command::SweepAngle => {
                        if matches!(cfg.variable, Some(v) if v != SweepVariable::ThetaI) {
                            return Err(ConfigError::Invalid(
                                "sweep-angle sweeps theta_i; use sweep-chirality for kappa1/kappa2"
                                    .into(),
                            )
                            .into());
                        }
                        SweepVariable::ThetaI
                    }
                    _ => match cfg.variable {
                        Some(SweepVariable::ThetaI) => return Err(ConfigError::Invalid(
                            "sweep-chirality sweeps kappa1 or kappa2; use sweep-angle for theta_i"
                                .into(),
                        )
                        .into()),
                        Some(v) => v,
                        None => match preset.as_ref().map(|p| p.variable) {
                            Some(v @ (SweepVariable::Kappa1 | SweepVariable::Kappa2)) => v,
                            _ => SweepVariable::Kappa1,
                        },
                    },
                };
            let grid = match variable {
                SweepVariable::ThetaI => {
                    grid_or(cfg.start, cfg.stop, cfg.step, default_theta_grid(), 0.25)?
                }
                _ => grid_or(cfg.start, cfg.stop, cfg.step, default_kappa_grid(), 0.025)?,
            };
            let theta_deg = cfg
                .theta_deg
                .or(preset.as_ref().map(|p| p.theta_deg))
                .unwrap_or(45.0);
            let excitation = match (cfg.e_par, cfg.e_perp) {
                (None, None) => Excitation::parallel(theta_deg.to_radians()),
                (p, q) => Excitation::new(
                    theta_deg.to_radians(),
                    p.unwrap_or_default(),
                    q.unwrap_or_default(),
                )?,
            };
            let spec = SweepSpec::new(variable, grid, stack, excitation).map_err(|e| match e {
                Error::InvalidParameter(m) => ConfigError::Invalid(m),
                other => ConfigError::Invalid(other.to_string()),
            })?;
            Ok(Job::Sweep {
                spec,
                preset: cfg.preset.clone(),
            })
        }
        Command::FocalScan => {
            let has_layers = cfg.layers.iter().any(|l| !l.is_empty());
            let mut preset = match &cfg.preset {
                Some(name) => match focal_preset(name) {
                    Ok(p) => p,
                    Err(_) => {
                        let planar = planar_preset(name)
                            .map_err(|_| ConfigError::UnknownPreset(name.clone()))?;
                        focal_from_stack(name, planar.stack)
                    }
                },
                None => focal_from_stack("custom", resolve_stack(cfg, None)?),
            };
            if has_layers && cfg.preset.is_some() {
                let Reflector::Stack(base) = preset.reflector else {
                    return Err(ConfigError::Invalid(
                        "the ideal mirror has no layers to override".into(),
                    )
                    .into());
                };
                preset.reflector = Reflector::Stack(resolve_stack(cfg, Some(base))?);
            }
            if let Reflector::Stack(s) = preset.reflector {
                preset.k0 = s.k0;
            }
            if cfg.focal_f.is_some() || cfg.focal_d.is_some() {
                let f = cfg.focal_f.unwrap_or(preset.paraboloid.f);
                let d = cfg.focal_d.unwrap_or(2.0 * f * FOCAL_H.tan());
                preset.paraboloid = Paraboloid::new(f, d)?;
            }
            let kf = preset.k0 * preset.paraboloid.f;
            let default_grid = if (kf - 100.0).abs() < 1e-12 {
                crate::maslov::default_kz_grid()
            } else {
                uniform_grid(0.8 * kf, 1.2 * kf, 0.0025 * kf)?
            };
            let grid = grid_or(cfg.kz_start, cfg.kz_stop, cfg.kz_step, default_grid, 0.25)?;
            let min = preset.default_orders(&grid);
            let orders = QuadratureOrders {
                n_alpha: cfg.n_alpha.unwrap_or(min.n_alpha),
                n_gamma: cfg.n_gamma.unwrap_or(min.n_gamma),
            };
            Ok(Job::Focal {
                preset,
                grid,
                orders,
                mode: cfg.mode.unwrap_or_default(),
            })
        }
    }
}

fn focal_from_stack(name: &str, stack: LayerStack) -> FocalPreset {
    FocalPreset {
        name: name.to_string(),
        case: "custom",
        reflector: Reflector::Stack(stack),
        paraboloid: Paraboloid::from_aperture_angle(FOCAL_F, FOCAL_H).expect("static geometry"),
        k0: stack.k0,
        varied: None,
    }
}

fn preset_listing() -> String {
    let mut s = String::new();
    for n in planar_preset_names() {
        let p = planar_preset(&n).expect("listed preset");
        s.push_str(&format!("{n}\tplanar\t{}\t{}\n", p.case, p.variable.name()));
    }
    for n in focal_preset_names() {
        let p = focal_preset(&n).expect("listed preset");
        let varied = p
            .varied
            .map(|(k, v)| format!("{k}={v}"))
            .unwrap_or_else(|| "-".into());
        s.push_str(&format!("{n}\tfocal\t{}\t{varied}\n", p.case));
    }
    s
}

fn default_out(cfg: &RunConfig, command: Command) -> PathBuf {
    let stem = cfg
        .preset
        .clone()
        .unwrap_or_else(|| command.as_str().to_string())
        .replace([':', '/'], "_");
    PathBuf::from(format!("{stem}.csv"))
}

/// Executes a job, writing the CSV to `out` and the manifest to `<out>.manifest`.
pub fn execute(cfg: &RunConfig, job: &Job, out: Option<&Path>) -> Result<(), CliError> {
    let started = Instant::now();
    let (csv, details) = match job {
        Job::Presets => {
            let text = preset_listing();
            match out {
                Some(p) => fs::write(p, text).map_err(io_err(p))?,
                None => std::io::stdout()
                    .write_all(text.as_bytes())
                    .map_err(io_err(Path::new("<stdout>")))?,
            }
            return Ok(());
        }
        Job::Sweep { spec, preset } => {
            let rows = run_sweep(spec)?;
            let flagged = rows.iter().filter(|r| r.degenerate).count();
            let mut buf = Vec::new();
            write_sweep_csv(&mut buf, &rows).expect("in-memory write");
            let details = json!({
                "preset": preset,
                "variable": spec.variable.name(),
                "grid": { "rows": rows.len(), "first": spec.grid.first(), "last": spec.grid.last() },
                "stack": spec.base_stack,
                "excitation": spec.excitation,
                "degenerate_rows": flagged,
                "max_residual": rows.iter().filter(|r| !r.degenerate).map(|r| r.residual).fold(0.0, f64::max),
            });
            (buf, details)
        }
        Job::Focal {
            preset,
            grid,
            orders,
            mode,
        } => {
            let scan = preset.scan(grid, *orders, *mode)?;
            let mut buf = Vec::new();
            write_focal_csv(&mut buf, &scan).expect("in-memory write");
            let (peak_kz, peak_mag) = scan.peak();
            let details = json!({
                "preset": preset,
                "grid": { "rows": grid.len(), "first": grid.first(), "last": grid.last() },
                "quadrature": { "n_alpha": orders.n_alpha, "n_gamma": orders.n_gamma },
                "mode": mode,
                "peak": { "kz": peak_kz, "mag": peak_mag },
            });
            (buf, details)
        }
    };
    let out = out.expect("output path resolved for data commands");
    fs::write(out, &csv).map_err(io_err(out))?;
    let manifest = json!({
        "command": cfg.command.map(|c| c.as_str()),
        "config": cfg.to_text(),
        "output": out.display().to_string(),
        "library_version": env!("CARGO_PKG_VERSION"),
        "threads": rayon::current_num_threads(),
        "wall_clock_seconds": started.elapsed().as_secs_f64(),
        "created_unix": SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        "resolved": details,
    });
    let mpath = PathBuf::from(format!("{}.manifest", out.display()));
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&mpath, text + "\n").map_err(io_err(&mpath))?;
    Ok(())
}

fn load(args: &Args) -> Result<RunConfig, CliError> {
    let text = match &args.config {
        Some(p) => fs::read_to_string(p).map_err(io_err(p))?,
        None => String::new(),
    };
    let mut cfg = parse_config(&text)?;
    let (settings, commands): (Vec<&String>, Vec<&String>) =
        args.items.iter().partition(|s| s.contains('='));
    let command = match commands.as_slice() {
        [] => None,
        [c] => Some(CommandArg::from_str(c, false).map_err(|_| {
            ConfigError::Invalid(format!(
                "unknown command `{c}` (expected sweep-angle, sweep-chirality, focal-scan or presets)"
            ))
        })?),
        many => {
            return Err(ConfigError::Invalid(format!(
                "expected one command, got {}",
                many.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
            ))
            .into())
        }
    };
    if !settings.is_empty() {
        let mut extra = String::new();
        for s in settings {
            let key = s.split_once('=').map(|(k, _)| k.trim()).ok_or_else(|| {
                ConfigError::Invalid(format!("command-line setting `{s}` is not KEY=VALUE"))
            })?;
            let section = key_section(key).filter(|s| !s.is_empty()).unwrap_or("run");
            extra.push_str(&format!("[{section}]\n{s}\n"));
        }
        cfg.overlay(parse_config(&extra)?);
    }
    if let Some(c) = command {
        let c = Command::from(c);
        if matches!(cfg.command, Some(existing) if existing != c) {
            return Err(ConfigError::Invalid(format!(
                "command `{}` conflicts with `command = {}` in the config",
                c.as_str(),
                cfg.command.map(|c| c.as_str()).unwrap_or_default()
            ))
            .into());
        }
        cfg.command = Some(c);
    }
    if let Some(p) = &args.preset {
        cfg.preset = Some(p.clone());
    }
    if let Some(o) = &args.out {
        cfg.out = Some(o.clone());
    }
    if let Some(t) = args.threads {
        if t == 0 {
            return Err(ConfigError::Invalid("--threads must be at least 1".into()).into());
        }
        cfg.threads = Some(t);
    }
    for (flag, v) in [
        ("--quad-alpha", args.quad_alpha),
        ("--quad-gamma", args.quad_gamma),
    ] {
        if v == Some(0) {
            return Err(ConfigError::Invalid(format!("{flag} must be at least 1")).into());
        }
    }
    cfg.n_alpha = args.quad_alpha.or(cfg.n_alpha);
    cfg.n_gamma = args.quad_gamma.or(cfg.n_gamma);
    Ok(cfg)
}

fn run_args(args: &Args) -> Result<(), CliError> {
    let cfg = load(args)?;
    let job = resolve(&cfg)?;
    let out = match (&job, &cfg.out) {
        (Job::Presets, o) => o.clone(),
        (_, Some(o)) => Some(o.clone()),
        (_, None) => Some(default_out(&cfg, cfg.command.expect("resolved"))),
    };
    match cfg.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| ConfigError::Invalid(format!("cannot start {n} threads: {e}")))?;
            pool.install(|| execute(&cfg, &job, out.as_deref()))
        }
        None => execute(&cfg, &job, out.as_deref()),
    }
}

/// Parses process arguments, runs, and returns the exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };
    match run_args(&args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
