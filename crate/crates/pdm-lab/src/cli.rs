//! Command-line interface: config loading, subcommand dispatch, result export.
//!
//! This is the only module with I/O side effects. Every run writes its
//! results plus a `metadata.json` carrying the fully resolved configuration,
//! tool version, pinned tolerances and a timestamp, so outputs are
//! reproducible from the metadata alone. Exit codes: 0 success, 1 for
//! config/validation problems, 2 for numerical failures.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::classical::{
    measure_period, FlatCoupling, HarmonicPotential, PdmSystem, PhaseState, Trajectory,
    CROSSING_TOLERANCE, MIDPOINT_TOLERANCE,
};
use crate::dilaton::{
    field_grid, liouville_residual, BackgroundDescriptor, DilatonBackground, GridSpec2D,
    LinearBackgroundInfo, LinearNormalization, ResidualStats, SINGULARITY_MARGIN_CELLS,
};
use crate::error::{Error, Result};
use crate::expr::HolomorphicExpr;
use crate::io;
use crate::quantum::{
    build_radial_hamiltonian, default_grid, solve_spectrum, Dimension, OscillatorSpec,
    RadialGridParams, BOUND_TAIL_THRESHOLD,
};
use crate::string::{
    critical_radius, density_profile, tension_report, StringConfig, TENSION_QUAD_REL_TOL,
};
use crate::verify;

#[derive(Parser, Debug)]
#[command(
    name = "pdm-lab",
    version,
    about = "Dilaton backgrounds, position-dependent-mass spectra and dynamics, dilaton-string energetics"
)]
struct Cli {
    /// TOML configuration file; command-line flags override file values
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Output directory (created if missing)
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an exact Liouville background on a grid and verify its residual
    Liouville(LiouvilleArgs),
    /// Solve the PDM oscillator spectrum with bound-state classification
    Spectrum(SpectrumArgs),
    /// Integrate a classical PDM trajectory; report drift and period
    Classical(ClassicalArgs),
    /// Dilaton-string tension, energy density and energy-condition reports
    String(StringArgs),
    /// Run the bundled verification suite and print a pass/fail table
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct LiouvilleArgs {
    /// Holomorphic seed: "linear" (f = Aζ) or "exp" (f = exp(ζ))
    #[arg(long)]
    f: Option<String>,
    /// JSON file holding an arbitrary f-expression tree (overrides --f)
    #[arg(long, value_name = "FILE")]
    f_json: Option<PathBuf>,
    /// Coefficient A of the linear seed
    #[arg(long)]
    a_coeff: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    /// |Λ|; mutually exclusive with --c-target
    #[arg(long)]
    abs_lambda: Option<f64>,
    /// Target C of the linear background; |Λ| is derived
    #[arg(long)]
    c_target: Option<f64>,
    /// Use the Λ > 0 solution branch (requires --abs-lambda; the default
    /// branch is Λ < 0)
    #[arg(long)]
    positive_branch: bool,
    #[arg(long)]
    x_min: Option<f64>,
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long)]
    y_min: Option<f64>,
    #[arg(long)]
    y_max: Option<f64>,
    #[arg(long)]
    spacing: Option<f64>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct SpectrumArgs {
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    m0: Option<f64>,
    /// Spatial dimension, 1 or 2
    #[arg(long)]
    dim: Option<u32>,
    /// Angular sector ℓ (d = 2 only)
    #[arg(long)]
    ell: Option<u32>,
    /// Interior grid nodes
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r_max: Option<f64>,
    /// Number of eigenpairs
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct ClassicalArgs {
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    m0: Option<f64>,
    /// Initial position, comma-separated (1 or 2 components)
    #[arg(long, value_name = "X0[,X1]", allow_hyphen_values = true)]
    x0: Option<String>,
    /// Initial momentum, comma-separated
    #[arg(long, value_name = "P0[,P1]", allow_hyphen_values = true)]
    p0: Option<String>,
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Keep the rest-mass term m₀·b^{-1/2} in the energy
    #[arg(long)]
    include_rest_mass: bool,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct StringArgs {
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    abs_lambda: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    xi_c: Option<f64>,
    /// Sample count of the exported density profile
    #[arg(long)]
    profile_points: Option<usize>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct VerifyArgs {
    /// Worker threads (also PDM_LAB_THREADS); defaults to the CPU count
    #[arg(long)]
    threads: Option<usize>,
}

// ---------------------------------------------------------------------------
// configuration file

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    liouville: Option<LiouvilleSection>,
    spectrum: Option<SpectrumSection>,
    classical: Option<ClassicalSection>,
    string: Option<StringSection>,
    output: Option<OutputSection>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct LiouvilleSection {
    f: Option<String>,
    f_json: Option<String>,
    a_coeff: Option<f64>,
    kappa: Option<f64>,
    abs_lambda: Option<f64>,
    c_target: Option<f64>,
    positive_branch: Option<bool>,
    x_min: Option<f64>,
    x_max: Option<f64>,
    y_min: Option<f64>,
    y_max: Option<f64>,
    spacing: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumSection {
    lambda: Option<f64>,
    alpha: Option<f64>,
    m0: Option<f64>,
    dim: Option<u32>,
    ell: Option<u32>,
    n: Option<usize>,
    r_max: Option<f64>,
    k: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassicalSection {
    lambda: Option<f64>,
    alpha: Option<f64>,
    m0: Option<f64>,
    x0: Option<Vec<f64>>,
    p0: Option<Vec<f64>>,
    step: Option<f64>,
    steps: Option<usize>,
    include_rest_mass: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct StringSection {
    lambda: Option<f64>,
    abs_lambda: Option<f64>,
    kappa: Option<f64>,
    xi_c: Option<f64>,
    profile_points: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    dir: Option<String>,
}

fn load_file_config(path: Option<&Path>) -> Result<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    if !path.exists() {
        return Err(Error::Config(format!(
            "config file not found: {}",
            path.display()
        )));
    }
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| Error::Config(format!("failed to parse {}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// metadata

/// Fixed numerical tolerances baked into the build, echoed with every run.
#[derive(Debug, Clone, Copy, Serialize)]
struct Tolerances {
    tension_quadrature_rel_tol: f64,
    midpoint_fixed_point_tolerance: f64,
    crossing_tolerance: f64,
    bound_tail_threshold: f64,
    singularity_margin_cells: f64,
}

impl Tolerances {
    fn current() -> Self {
        Tolerances {
            tension_quadrature_rel_tol: TENSION_QUAD_REL_TOL,
            midpoint_fixed_point_tolerance: MIDPOINT_TOLERANCE,
            crossing_tolerance: CROSSING_TOLERANCE,
            bound_tail_threshold: BOUND_TAIL_THRESHOLD,
            singularity_margin_cells: SINGULARITY_MARGIN_CELLS,
        }
    }
}

#[derive(Debug, Serialize)]
struct Metadata<T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    timestamp_unix: u64,
    resolved_config: T,
    tolerances: Tolerances,
}

fn write_metadata<T: Serialize>(out_dir: &Path, command: &'static str, config: T) -> Result<()> {
    let timestamp_unix = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = Metadata {
        tool: "pdm-lab",
        version: env!("CARGO_PKG_VERSION"),
        command,
        timestamp_unix,
        resolved_config: config,
        tolerances: Tolerances::current(),
    };
    io::write_json(&out_dir.join("metadata.json"), &meta)
}

// ---------------------------------------------------------------------------
// resolution helpers

fn pick<T: Copy>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

fn parse_components(text: &str, name: &'static str) -> Result<Vec<f64>> {
    let parts: std::result::Result<Vec<f64>, _> =
        text.split(',').map(|s| s.trim().parse::<f64>()).collect();
    parts.map_err(|e| Error::InvalidParameter {
        name,
        reason: format!("expected comma-separated numbers, got `{text}`: {e}"),
    })
}

// ---------------------------------------------------------------------------
// liouville

#[derive(Debug, Serialize)]
struct ResolvedLiouville {
    f: String,
    a_coeff: f64,
    kappa: f64,
    abs_lambda: f64,
    branch: crate::dilaton::Branch,
    c: Option<f64>,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    spacing: f64,
    nx: usize,
    ny: usize,
    out_dir: String,
}

#[derive(Debug, Serialize)]
struct ResidualReport {
    residual: ResidualStats,
    background: BackgroundDescriptor,
    linear_normalization: Option<LinearBackgroundInfo>,
}

fn run_liouville(args: &LiouvilleArgs, file: &FileConfig, out_dir: &Path) -> Result<()> {
    let section = file.liouville.clone().unwrap_or_default();
    let f_kind = args
        .f
        .clone()
        .or(section.f)
        .unwrap_or_else(|| "linear".to_string());
    let a_coeff = pick(args.a_coeff, section.a_coeff, 1.0);
    let kappa = pick(args.kappa, section.kappa, 1.0);
    let abs_lambda_opt = args.abs_lambda.or(section.abs_lambda);
    let c_target_opt = args.c_target.or(section.c_target);
    let positive_branch = args.positive_branch || section.positive_branch.unwrap_or(false);
    if abs_lambda_opt.is_some() && c_target_opt.is_some() {
        return Err(Error::Config(
            "abs_lambda and c_target are mutually exclusive; set one".into(),
        ));
    }
    if positive_branch && c_target_opt.is_some() {
        return Err(Error::Config(
            "c_target applies to the Λ < 0 linear background only".into(),
        ));
    }
    let signed_lambda = |abs: f64| if positive_branch { abs } else { -abs };

    let f_json = args
        .f_json
        .clone()
        .or(section.f_json.map(PathBuf::from));
    let (bg, linear_info, f_label): (DilatonBackground, Option<LinearBackgroundInfo>, String) =
        if let Some(json_path) = f_json {
            let text = std::fs::read_to_string(&json_path).map_err(|e| {
                Error::Config(format!(
                    "cannot read f-expression {}: {e}",
                    json_path.display()
                ))
            })?;
            let expr: HolomorphicExpr = serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("invalid f-expression JSON: {e}")))?;
            let abs_lambda = abs_lambda_opt.unwrap_or(12.0 * a_coeff * a_coeff);
            let constants =
                crate::dilaton::PhysicalConstants::new(kappa, signed_lambda(abs_lambda))?;
            (
                DilatonBackground::new(constants, expr)?,
                None,
                format!("json:{}", json_path.display()),
            )
        } else {
            match f_kind.as_str() {
                "linear" if !positive_branch => {
                    let normalization = match (abs_lambda_opt, c_target_opt) {
                        (Some(al), None) => LinearNormalization::AbsLambda(al),
                        (None, Some(c)) => LinearNormalization::CTarget(c),
                        _ => LinearNormalization::CTarget(1.0),
                    };
                    let (bg, info) = DilatonBackground::linear(kappa, a_coeff, normalization)?;
                    (bg, Some(info), "linear".to_string())
                }
                "linear" => {
                    let abs_lambda = abs_lambda_opt.ok_or_else(|| {
                        Error::Config("the Λ > 0 branch needs an explicit abs_lambda".into())
                    })?;
                    let constants =
                        crate::dilaton::PhysicalConstants::new(kappa, abs_lambda)?;
                    (
                        DilatonBackground::new(constants, HolomorphicExpr::linear(a_coeff))?,
                        None,
                        "linear".to_string(),
                    )
                }
                "exp" => {
                    let abs_lambda = abs_lambda_opt.unwrap_or(12.0);
                    let constants =
                        crate::dilaton::PhysicalConstants::new(kappa, signed_lambda(abs_lambda))?;
                    (
                        DilatonBackground::new(
                            constants,
                            HolomorphicExpr::exp(HolomorphicExpr::zeta()),
                        )?,
                        None,
                        "exp".to_string(),
                    )
                }
                other => {
                    return Err(Error::Config(format!(
                        "unknown f kind `{other}`; use linear, exp, or --f-json"
                    )))
                }
            }
        };

    let x_min = pick(args.x_min, section.x_min, -0.5);
    let x_max = pick(args.x_max, section.x_max, 0.5);
    let y_min = pick(args.y_min, section.y_min, -0.5);
    let y_max = pick(args.y_max, section.y_max, 0.5);
    let spacing = pick(args.spacing, section.spacing, 0.01);
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(Error::InvalidParameter {
            name: "spacing",
            reason: format!("must be finite and positive, got {spacing}"),
        });
    }
    if !(x_max > x_min && y_max > y_min) {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: "ranges must be increasing".into(),
        });
    }
    let nx = ((x_max - x_min) / spacing).round() as usize + 1;
    let ny = ((y_max - y_min) / spacing).round() as usize + 1;
    let grid = GridSpec2D::with_spacing(x_min, y_min, spacing, nx, ny)?;

    let rows = field_grid(&bg, &grid)?;
    let stats = liouville_residual(&bg, &grid)?;

    io::write_text(&out_dir.join("fields.csv"), &io::field_grid_csv(&rows))?;
    io::write_json(
        &out_dir.join("residual.json"),
        &ResidualReport {
            residual: stats,
            background: bg.descriptor(),
            linear_normalization: linear_info,
        },
    )?;
    let resolved = ResolvedLiouville {
        f: f_label,
        a_coeff,
        kappa,
        abs_lambda: bg.constants().lambda.abs(),
        branch: bg.branch(),
        c: linear_info.map(|i| i.c),
        x_min,
        x_max: grid.x_max(),
        y_min,
        y_max: grid.y_max(),
        spacing,
        nx,
        ny,
        out_dir: out_dir.display().to_string(),
    };
    write_metadata(out_dir, "liouville", &resolved)?;
    println!(
        "liouville: {} nodes, max residual {:.3e}, outputs in {}",
        nx * ny,
        stats.max_abs,
        out_dir.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// spectrum

#[derive(Debug, Serialize)]
struct ResolvedSpectrum {
    lambda: f64,
    alpha: f64,
    m0: f64,
    hbar: f64,
    dim: u32,
    ell: u32,
    n: usize,
    r_max: f64,
    k: usize,
    out_dir: String,
}

fn run_spectrum(args: &SpectrumArgs, file: &FileConfig, out_dir: &Path) -> Result<()> {
    let section = file.spectrum.clone().unwrap_or_default();
    let lambda = pick(args.lambda, section.lambda, 1.0);
    let alpha = pick(args.alpha, section.alpha, 1.0);
    let m0 = pick(args.m0, section.m0, 1.0);
    let dim = pick(args.dim, section.dim, 1);
    let ell = pick(args.ell, section.ell, 0);
    let dimension = match dim {
        1 => {
            if ell != 0 {
                return Err(Error::InvalidParameter {
                    name: "ell",
                    reason: "angular sector requires dim = 2".into(),
                });
            }
            Dimension::One
        }
        2 => Dimension::Two { ell },
        other => {
            return Err(Error::InvalidParameter {
                name: "dim",
                reason: format!("must be 1 or 2, got {other}"),
            })
        }
    };
    let spec = OscillatorSpec::new(lambda, alpha, m0, dimension)?;
    let defaults = default_grid(&spec);
    let params = RadialGridParams {
        n: pick(args.n, section.n, defaults.n),
        r_max: pick(args.r_max, section.r_max, defaults.r_max),
    };
    let k = pick(args.k, section.k, 6);

    let op = build_radial_hamiltonian(&spec, &params)?;
    for w in &op.warnings {
        eprintln!("warning: {w}");
    }
    let spectrum = solve_spectrum(&op, k)?;
    io::write_json(&out_dir.join("spectrum.json"), &spectrum.report(&op, &params))?;
    io::write_text(
        &out_dir.join("eigenfunctions.csv"),
        &io::eigenfunctions_csv(&spectrum.nodes, &spectrum.eigenvectors),
    )?;
    let resolved = ResolvedSpectrum {
        lambda,
        alpha,
        m0,
        hbar: spec.hbar,
        dim,
        ell,
        n: params.n,
        r_max: params.r_max,
        k,
        out_dir: out_dir.display().to_string(),
    };
    write_metadata(out_dir, "spectrum", &resolved)?;
    let bound = spectrum
        .classification
        .flags
        .iter()
        .filter(|&&b| b)
        .count();
    println!(
        "spectrum: E0 = {:.6}, {bound}/{k} states bound, gram deviation {:.3e}, outputs in {}",
        spectrum.eigenvalues[0],
        spectrum.gram_deviation,
        out_dir.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// classical

#[derive(Debug, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
enum CouplingDescriptor {
    Flat,
    Dilaton { background: BackgroundDescriptor },
}

#[derive(Debug, Serialize)]
struct ResolvedClassical {
    lambda: f64,
    alpha: f64,
    m0: f64,
    spring_constant: f64,
    x0: Vec<f64>,
    p0: Vec<f64>,
    step: f64,
    steps: usize,
    include_rest_mass: bool,
    out_dir: String,
}

#[derive(Debug, Serialize)]
struct RunDescriptor {
    initial_state: PhaseState,
    coupling: CouplingDescriptor,
    integrator: &'static str,
    step: f64,
    steps: usize,
    initial_energy: f64,
    relative_energy_drift: f64,
    period: Option<f64>,
}

fn run_classical(args: &ClassicalArgs, file: &FileConfig, out_dir: &Path) -> Result<()> {
    let section = file.classical.clone().unwrap_or_default();
    let lambda = pick(args.lambda, section.lambda, 1.0);
    let alpha = pick(args.alpha, section.alpha, 1.0);
    let m0 = pick(args.m0, section.m0, 1.0);
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            reason: format!("must be finite and non-negative, got {lambda}"),
        });
    }
    let x0 = match &args.x0 {
        Some(text) => parse_components(text, "x0")?,
        None => section.x0.unwrap_or_else(|| vec![0.1]),
    };
    let p0 = match &args.p0 {
        Some(text) => parse_components(text, "p0")?,
        None => section.p0.unwrap_or_else(|| vec![0.0; x0.len()]),
    };
    let step = pick(args.step, section.step, 1e-3);
    // long enough for a few periods of the default oscillation
    let steps = pick(args.steps, section.steps, 20_000);
    let include_rest_mass = args.include_rest_mass || section.include_rest_mass.unwrap_or(false);

    let s0 = PhaseState::new(0.0, x0.clone(), p0.clone())?;
    let potential = HarmonicPotential {
        spring_constant: m0 * alpha * alpha,
    };

    let (trajectory, coupling_desc): (Trajectory, CouplingDescriptor) = if lambda == 0.0 {
        let coupling = FlatCoupling;
        let mut sys = PdmSystem::new(&coupling, &potential, m0)?;
        sys.include_rest_mass = include_rest_mass;
        (sys.integrate(&s0, step, steps)?, CouplingDescriptor::Flat)
    } else {
        let (bg, _) =
            DilatonBackground::linear(1.0, lambda.sqrt(), LinearNormalization::CTarget(1.0))?;
        let mut sys = PdmSystem::new(&bg, &potential, m0)?;
        sys.include_rest_mass = include_rest_mass;
        let tr = sys.integrate(&s0, step, steps)?;
        let desc = CouplingDescriptor::Dilaton {
            background: bg.descriptor(),
        };
        (tr, desc)
    };

    let period = measure_period(&trajectory).ok();
    io::write_text(
        &out_dir.join("trajectory.csv"),
        &io::trajectory_csv(&trajectory),
    )?;
    io::write_json(
        &out_dir.join("run.json"),
        &RunDescriptor {
            initial_state: s0,
            coupling: coupling_desc,
            integrator: trajectory.integrator,
            step,
            steps,
            initial_energy: trajectory.initial_energy(),
            relative_energy_drift: trajectory.energy_drift(),
            period,
        },
    )?;
    let resolved = ResolvedClassical {
        lambda,
        alpha,
        m0,
        spring_constant: potential.spring_constant,
        x0,
        p0,
        step,
        steps,
        include_rest_mass,
        out_dir: out_dir.display().to_string(),
    };
    write_metadata(out_dir, "classical", &resolved)?;
    match period {
        Some(t) => println!(
            "classical: drift {:.3e}, period {t:.6}, outputs in {}",
            trajectory.energy_drift(),
            out_dir.display()
        ),
        None => println!(
            "classical: drift {:.3e}, non-oscillatory, outputs in {}",
            trajectory.energy_drift(),
            out_dir.display()
        ),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// string

#[derive(Debug, Serialize)]
struct ResolvedString {
    lambda: f64,
    abs_lambda: f64,
    kappa: f64,
    xi_c: f64,
    profile_points: usize,
    out_dir: String,
}

fn run_string(args: &StringArgs, file: &FileConfig, out_dir: &Path) -> Result<()> {
    let section = file.string.clone().unwrap_or_default();
    let lambda = pick(args.lambda, section.lambda, 1.0);
    let kappa = pick(args.kappa, section.kappa, 1.0);
    // default |Λ| sits at the C = 1 consistency point, 12λ at κ = 1
    let abs_lambda = pick(args.abs_lambda, section.abs_lambda, 12.0 * lambda);
    let xi_c = pick(args.xi_c, section.xi_c, 100.0);
    let profile_points = pick(args.profile_points, section.profile_points, 501);

    let cfg = StringConfig::new(lambda, abs_lambda, kappa, xi_c)?;
    let report = tension_report(&cfg)?;
    let wec = critical_radius(&cfg)?;
    let r_span = (3.0 * cfg.r_crit()).max(cfg.r_c());
    let profile = density_profile(&cfg, r_span, profile_points);

    #[derive(Serialize)]
    struct FullStringReport<'a> {
        #[serde(flatten)]
        tension: &'a crate::string::TensionReport,
        wec: &'a crate::string::WecReport,
    }

    io::write_json(
        &out_dir.join("tension.json"),
        &FullStringReport {
            tension: &report,
            wec: &wec,
        },
    )?;
    io::write_text(&out_dir.join("density.csv"), &io::density_csv(&profile))?;
    let resolved = ResolvedString {
        lambda,
        abs_lambda,
        kappa,
        xi_c,
        profile_points,
        out_dir: out_dir.display().to_string(),
    };
    write_metadata(out_dir, "string", &resolved)?;
    println!(
        "string: mu = {:.6} (quadrature {:.6}), r_crit = {:.6}, positive: {}, outputs in {}",
        report.mu_closed,
        report.mu_quadrature,
        report.r_crit,
        report.positivity.flag,
        out_dir.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// verify

#[derive(Debug, Serialize)]
struct ResolvedVerify {
    threads: usize,
    out_dir: String,
}

fn run_verify(args: &VerifyArgs, out_dir: &Path) -> Result<bool> {
    let threads = args
        .threads
        .or_else(|| {
            std::env::var("PDM_LAB_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get().min(8))
                .unwrap_or(1)
        })
        .max(1);
    let report = verify::run_all(threads);
    print!("{}", verify::format_table(&report));
    io::write_json(&out_dir.join("verify_report.json"), &report)?;
    write_metadata(
        out_dir,
        "verify",
        &ResolvedVerify {
            threads,
            out_dir: out_dir.display().to_string(),
        },
    )?;
    Ok(report.passed)
}

// ---------------------------------------------------------------------------
// entry point

fn dispatch(cli: &Cli) -> Result<i32> {
    let file = load_file_config(cli.config.as_deref())?;
    let out_dir = cli
        .out
        .clone()
        .or_else(|| {
            file.output
                .as_ref()
                .and_then(|o| o.dir.clone())
                .map(PathBuf::from)
        })
        .unwrap_or_else(|| PathBuf::from("pdm-lab-out"));
    std::fs::create_dir_all(&out_dir)?;

    match &cli.command {
        Command::Liouville(args) => run_liouville(args, &file, &out_dir).map(|_| 0),
        Command::Spectrum(args) => run_spectrum(args, &file, &out_dir).map(|_| 0),
        Command::Classical(args) => run_classical(args, &file, &out_dir).map(|_| 0),
        Command::String(args) => run_string(args, &file, &out_dir).map(|_| 0),
        Command::Verify(args) => run_verify(args, &out_dir).map(|ok| if ok { 0 } else { 2 }),
    }
}

/// Parses argv and runs; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            let _ = e.print();
            return 1;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                2
            } else {
                1
            }
        }
    }
}
