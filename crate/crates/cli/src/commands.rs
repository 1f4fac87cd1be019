use std::ffi::OsString;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use zgv_core::mfrd::QuadraticPencil;
use zgv_core::refine::{classify, default_tol, refine_candidate, ClassifyOptions, ZgvPoint, DEFAULT_MAXIT};
use zgv_core::scanner::{scan, trivial_zgv, ScanConfig};
use zgv_core::waveguide::{
    assemble_plate, dispersion_sweep, example21, linspace, zgv_oracle, BoundaryCondition, Discretization, Polarization,
};
use zgv_core::C;

use crate::error::{CliError, CliResult};
use crate::input::{load_pencil, read_material, PencilSource};
use crate::output::{emit_candidates, emit_oracle, emit_results, write_manifest, RunManifest};

#[derive(Debug, Parser)]
#[command(name = "zgv", version, about = "Zero-group-velocity points of quadratic eigenvalue problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan [k-min, k-max] for ZGV points.
    Scan(ScanArgs),
    /// Sample the real dispersion curves.
    Disperse(DisperseArgs),
    /// Refine one candidate (k0, omega0) by Gauss-Newton.
    Refine(RefineArgs),
    /// Locate slope sign changes of the sampled dispersion curves.
    Oracle(DisperseArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Example21,
    Plate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolarizationArg {
    Inplane,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BcArg {
    #[value(name = "free_free")]
    FreeFree,
    #[value(name = "clamped_free")]
    ClampedFree,
    #[value(name = "clamped_clamped")]
    ClampedClamped,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    #[arg(long, value_name = "FILE")]
    pub l0: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub l1: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub l2: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub m: Option<PathBuf>,
    /// Built-in model instead of matrix files.
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    /// Material file for the plate model.
    #[arg(long, value_name = "FILE")]
    pub material: Option<PathBuf>,
    /// Polynomial degree per element of the plate model.
    #[arg(long, default_value_t = 12)]
    pub order: usize,
    #[arg(long, default_value_t = 1)]
    pub elements: usize,
    #[arg(long, value_enum, default_value = "inplane")]
    pub polarization: PolarizationArg,
    #[arg(long, value_enum, default_value = "free_free")]
    pub bc: BcArg,
}

#[derive(Debug, Clone, Args)]
pub struct RangeArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub k_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub k_max: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    #[arg(long)]
    pub dk: Option<f64>,
    #[arg(long, default_value_t = 8)]
    pub num_eigs: usize,
    #[arg(long, default_value_t = 1e-2)]
    pub delta: f64,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Output prefix; files are `<prefix>_zgv.csv` and friends.
    #[arg(long, value_name = "PREFIX")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct DisperseArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    /// Number of grid points on [k-min, k-max].
    #[arg(long)]
    pub k_steps: Option<usize>,
    #[arg(long, value_name = "PREFIX")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct RefineArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub k0: f64,
    #[arg(long)]
    pub omega0: f64,
    #[arg(long, default_value_t = 1e-2)]
    pub delta: f64,
    #[arg(long, value_name = "PREFIX")]
    pub out: PathBuf,
}

/// A resolved pencil with its provenance and default wavenumber range.
pub struct LoadedPencil {
    pub pencil: QuadraticPencil<f64>,
    pub source: PencilSource,
    pub default_range: Option<(f64, f64)>,
    pub default_dk: Option<f64>,
    pub description: serde_json::Value,
}

impl InputArgs {
    pub fn resolve(&self) -> CliResult<PencilSource> {
        let files = [&self.l0, &self.l1, &self.l2, &self.m];
        let given = files.iter().filter(|f| f.is_some()).count();
        match (self.model, given) {
            (Some(_), n) if n > 0 => Err(CliError::Usage("--model cannot be combined with matrix files".into())),
            (Some(Model::Example21), _) => Ok(PencilSource::Example21),
            (Some(Model::Plate), _) => {
                let material = self
                    .material
                    .clone()
                    .ok_or_else(|| CliError::Usage("--model plate needs --material <file>".into()))?;
                Ok(PencilSource::Plate {
                    material,
                    order: self.order,
                    elements: self.elements,
                    polarization: match self.polarization {
                        PolarizationArg::Inplane => Polarization::InPlane,
                        PolarizationArg::Full => Polarization::Full,
                    },
                    bc: match self.bc {
                        BcArg::FreeFree => BoundaryCondition::FreeFree,
                        BcArg::ClampedFree => BoundaryCondition::ClampedFree,
                        BcArg::ClampedClamped => BoundaryCondition::ClampedClamped,
                    },
                })
            }
            (None, 4) => Ok(PencilSource::Files(files.map(|f| f.clone().unwrap()))),
            (None, _) => Err(CliError::Usage("give --l0 --l1 --l2 --m or --model".into())),
        }
    }

    pub fn load(&self) -> CliResult<LoadedPencil> {
        let source = self.resolve()?;
        match &source {
            PencilSource::Files(paths) => {
                let pencil = load_pencil([&paths[0], &paths[1], &paths[2], &paths[3]].map(|p| p.as_path()))?;
                let description = json!({
                    "kind": "files",
                    "l0": paths[0], "l1": paths[1], "l2": paths[2], "m": paths[3],
                });
                Ok(LoadedPencil {
                    pencil,
                    source,
                    default_range: None,
                    default_dk: None,
                    description,
                })
            }
            PencilSource::Example21 => Ok(LoadedPencil {
                pencil: example21(),
                source,
                default_range: Some((0.05, 2.0)),
                default_dk: Some(0.1),
                description: json!({ "kind": "model", "model": "example21" }),
            }),
            PencilSource::Plate {
                material,
                order,
                elements,
                polarization,
                bc,
            } => {
                let mat = read_material(material)?;
                let disc = Discretization::new(*order, *elements, *polarization, *bc)?;
                let pencil = assemble_plate(&mat.nondimensional(), &disc)?;
                let description = json!({
                    "kind": "model",
                    "model": "plate",
                    "material": material,
                    "rho": mat.rho,
                    "h": mat.h,
                    "voigt": mat.c,
                    "order": order,
                    "elements": elements,
                    "polarization": format!("{polarization:?}"),
                    "bc": format!("{bc:?}"),
                    "units": { "k": "k*h", "omega": "omega*h/c_ref", "c_ref": mat.reference_speed(), "h": mat.h },
                });
                Ok(LoadedPencil {
                    pencil,
                    source,
                    default_range: Some((0.1, 6.0)),
                    default_dk: Some(0.1),
                    description,
                })
            }
        }
    }
}

impl RangeArgs {
    fn resolve(&self, loaded: &LoadedPencil) -> CliResult<(f64, f64)> {
        let d = loaded.default_range;
        let k_min = self.k_min.or(d.map(|r| r.0));
        let k_max = self.k_max.or(d.map(|r| r.1));
        match (k_min, k_max) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(CliError::Usage("--k-min and --k-max are required for matrix-file input".into())),
        }
    }
}

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn manifest(command: &str, argv: &[String], loaded: &LoadedPencil, config: serde_json::Value, seed: u64) -> RunManifest {
    RunManifest {
        command: command.to_string(),
        argv: argv.to_vec(),
        input: loaded.description.clone(),
        config,
        timestamp_unix: timestamp(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        outputs: vec![],
    }
}

fn display_outputs(paths: &[PathBuf]) -> Vec<String> {
    paths.iter().map(|p| p.display().to_string()).collect()
}

fn config_json(c: &ScanConfig<f64>) -> serde_json::Value {
    json!({
        "k_a": c.k_a, "k_b": c.k_b, "dk": c.dk, "m": c.m, "delta": c.delta,
        "arnoldi": {
            "max_subspace": c.arnoldi.max_subspace, "max_restarts": c.arnoldi.max_restarts,
            "tol": c.arnoldi.tol, "seed": c.arnoldi.seed,
        },
        "filters": { "real": c.filters.real, "imag": c.filters.imag, "eta": c.filters.eta },
        "newton_tol": c.newton_tol, "newton_maxit": c.newton_maxit,
        "dedup_tol": c.dedup_tol, "threads": c.threads,
    })
}

fn run_scan(a: &ScanArgs, argv: &[String]) -> CliResult<()> {
    let loaded = a.input.load()?;
    let (k_a, k_b) = a.range.resolve(&loaded)?;
    let dk = a.dk.or(loaded.default_dk).unwrap_or((k_b - k_a) / 20.0);
    let mut config = ScanConfig::new(k_a, k_b, dk).with_m(a.num_eigs);
    config.delta = a.delta;
    config.threads = a.threads;
    config.validate()?;
    let report = scan(&loaded.pencil, &config)?;
    let trivial = trivial_zgv(&loaded.pencil)?;
    let mut rows: Vec<ZgvPoint<f64>> = trivial;
    rows.extend(report.points.iter().cloned());
    rows.extend(report.crossings.iter().cloned());
    let mut outputs = emit_results(&rows, None, &a.out)?;
    outputs.push(emit_candidates(&report.candidates, &a.out)?);
    let mut m = manifest("scan", argv, &loaded, config_json(&config), config.arnoldi.seed);
    m.outputs = display_outputs(&outputs);
    write_manifest(&m, &a.out)?;
    for p in &report.points {
        println!("zgv       k = {:.10}  omega = {:.10}  residual = {:.2e}", p.k, p.omega, p.residual);
    }
    for p in &report.crossings {
        println!("crossing  k = {:.10}  omega = {:.10}", p.k, p.omega);
    }
    let failed = report.targets.iter().filter(|t| t.error.is_some()).count();
    println!(
        "{} zgv point(s), {} crossing(s), {} target(s) ({} failed), {} candidate(s) ({} filtered)",
        report.points.len(),
        report.crossings.len(),
        report.targets.len(),
        failed,
        report.candidates.len(),
        report.filtered_count()
    );
    if failed == report.targets.len() && !report.targets.is_empty() {
        return Err(CliError::Core(zgv_core::Error::NoConvergence {
            what: "every scan target",
            iterations: report.targets.len(),
        }));
    }
    Ok(())
}

fn grid_of(a: &DisperseArgs, loaded: &LoadedPencil) -> CliResult<Vec<f64>> {
    let (k_a, k_b) = a.range.resolve(loaded)?;
    if !(k_a <= k_b) {
        return Err(CliError::Usage("--k-min must not exceed --k-max".into()));
    }
    let steps = a.k_steps.unwrap_or(((k_b - k_a) / 1e-3).round() as usize + 1);
    if steps == 0 || (steps == 1 && k_a != k_b) {
        return Err(CliError::Usage("--k-steps must be at least 2 for a nonempty interval".into()));
    }
    Ok(linspace(k_a, k_b, steps))
}

fn run_disperse(a: &DisperseArgs, argv: &[String]) -> CliResult<()> {
    let loaded = a.input.load()?;
    let ks = grid_of(a, &loaded)?;
    let grid = dispersion_sweep(&loaded.pencil, &ks)?;
    let outputs = emit_results(&[], Some(&grid), &a.out)?;
    let cfg = json!({ "k_min": ks[0], "k_max": ks[ks.len() - 1], "k_steps": ks.len() });
    let mut m = manifest("disperse", argv, &loaded, cfg, 0);
    m.outputs = display_outputs(&outputs);
    write_manifest(&m, &a.out)?;
    println!("{} wavenumbers x {} branches", ks.len(), grid.branch_count());
    Ok(())
}

fn run_oracle(a: &DisperseArgs, argv: &[String]) -> CliResult<()> {
    let loaded = a.input.load()?;
    let ks = grid_of(a, &loaded)?;
    let pts = zgv_oracle(&loaded.pencil, &ks)?;
    let outputs = vec![emit_oracle(&pts, &a.out)?];
    let cfg = json!({ "k_min": ks[0], "k_max": ks[ks.len() - 1], "k_steps": ks.len() });
    let mut m = manifest("oracle", argv, &loaded, cfg, 0);
    m.outputs = display_outputs(&outputs);
    write_manifest(&m, &a.out)?;
    for (k, w) in &pts {
        println!("extremum  k = {k:.10}  omega = {w:.10}");
    }
    println!("{} extrema", pts.len());
    Ok(())
}

fn run_refine(a: &RefineArgs, argv: &[String]) -> CliResult<()> {
    let loaded = a.input.load()?;
    if !(a.delta > 0.0) {
        return Err(CliError::Usage("--delta must be positive".into()));
    }
    let p = &loaded.pencil;
    let lambda0 = C::new(0.0, a.k0);
    let mu0 = C::new(a.omega0 * a.omega0, 0.0);
    let radius = 10.0 * a.delta * (1.0 + a.k0.abs());
    let state = refine_candidate(p, lambda0, mu0, default_tol(p), DEFAULT_MAXIT, radius)?;
    let point = classify(p, &state, &ClassifyOptions::default())?;
    let outputs = emit_results(std::slice::from_ref(&point), None, &a.out)?;
    let cfg = json!({ "k0": a.k0, "omega0": a.omega0, "delta": a.delta, "tol": default_tol(p), "maxit": DEFAULT_MAXIT });
    let mut m = manifest("refine", argv, &loaded, cfg, 0);
    m.outputs = display_outputs(&outputs);
    write_manifest(&m, &a.out)?;
    println!(
        "{}  k = {:.12}  omega = {:.12}  residual = {:.2e}  iterations = {}",
        point.classification, point.k, point.omega, point.residual, state.iterations
    );
    Ok(())
}

/// Executes one command; the return value is the process exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let argv: Vec<String> = args.iter().map(|s| s.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Scan(a) => run_scan(a, &argv),
        Command::Disperse(a) => run_disperse(a, &argv),
        Command::Refine(a) => run_refine(a, &argv),
        Command::Oracle(a) => run_oracle(a, &argv),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
