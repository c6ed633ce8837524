//! `conebvp`: analyze boundary value problems on a cone.
//!
//! Exit codes: 0 success, 1 invalid input or numerical failure, 2 ellipticity
//! failure, 3 pole on the weight line, 4 characteristic boundary.

mod config;
mod expr;
mod output;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use conebvp::adjoint_lab::{adjoint_ellipticity, build_adjoint, condition_distance, conjugation_check, reflection_offset};
use conebvp::domains::{domain_report, DomainReport, WeightData};
use conebvp::fuchs::{BoundaryCondition, BoundaryFuchsOp};
use conebvp::scalar::C64;
use conebvp::{Error, Exec, Mat};

use config::{ProblemSpec, DEFAULT_SEED};

const OK: u8 = 0;
const INPUT: u8 = 1;
const NOT_ELLIPTIC: u8 = 2;
const WEIGHT_POLE: u8 = 3;
const CHARACTERISTIC: u8 = 4;

#[derive(Parser)]
#[command(name = "conebvp", version, about = "Domains, indices and adjoints of boundary value problems on a cone")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Conormal analysis, relative index and singular functions at each weight.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Adjoint problem, conjugation residual and adjoint ellipticity.
    Adjoint {
        file: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Run a built-in verification suite.
    Verify {
        suite: Suite,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Args, Clone)]
struct Opts {
    /// Weight; repeat for several. Overrides the weights of the problem file.
    #[arg(long, allow_negative_numbers = true)]
    gamma: Vec<f64>,
    /// Integrability exponent.
    #[arg(long)]
    p: Option<f64>,
    /// Cross-section collocation size N.
    #[arg(long)]
    grid_n: Option<usize>,
    /// Half-height H of the pole search box.
    #[arg(long)]
    imag_box: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory that receives the text report, CSV table and SVG map of each weight.
    #[arg(long)]
    out: Option<PathBuf>,
    /// What to print on standard output.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Svg,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Oracle,
    Fredholm,
    Green,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze { file, opts } => load(&file, &opts).and_then(|spec| analyze(&spec, &opts)),
        Command::Adjoint { file, opts } => load(&file, &opts).and_then(|spec| adjoint(&spec, &opts)),
        Command::Verify { suite, opts } => Ok(run_verify(suite, &opts)),
    };
    ExitCode::from(code.unwrap_or_else(|c| c))
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::CharacteristicBoundary { .. } => CHARACTERISTIC,
        Error::WeightOnPole { .. } => WEIGHT_POLE,
        Error::PrincipalSymbol(_) | Error::Lopatinskij(_) | Error::NotProperlyElliptic(_) => NOT_ELLIPTIC,
        _ => INPUT,
    }
}

fn fail(e: &Error) -> u8 {
    eprintln!("error: {e}");
    error_code(e)
}

/// Parses the file and applies the command-line overrides.
fn load(path: &Path, opts: &Opts) -> Result<ProblemSpec, u8> {
    let src = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        INPUT
    })?;
    let mut spec = config::parse(&src).map_err(|e| {
        eprintln!("{}:{e}", path.display());
        INPUT
    })?;
    for w in &spec.warnings {
        eprintln!("warning: {w}");
    }
    if !opts.gamma.is_empty() {
        spec.gammas = opts.gamma.clone();
    }
    if let Some(p) = opts.p {
        spec.p_int = p;
    }
    if let Some(n) = opts.grid_n {
        spec.solver.analysis.grid_n = n;
    }
    if let Some(h) = opts.imag_box {
        spec.solver.analysis.imag_box = h;
    }
    if let Some(s) = opts.seed {
        spec.solver.seed = s;
    }
    Ok(spec)
}

fn weights(spec: &ProblemSpec) -> Result<Vec<WeightData>, u8> {
    let p = &spec.problem;
    spec.gammas
        .iter()
        .map(|&g| WeightData::new(g, spec.p_int, p.mu(), p.n()).map_err(|e| fail(&e)))
        .collect()
}

fn report_code(r: &DomainReport) -> u8 {
    if !r.principal_symbol.passed || !r.lopatinskij.passed {
        NOT_ELLIPTIC
    } else if !r.conormal.passed {
        WEIGHT_POLE
    } else {
        OK
    }
}

fn write_out(dir: &Path, name: &str, content: &str) -> Result<(), u8> {
    fs::create_dir_all(dir).and_then(|_| fs::write(dir.join(name), content)).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", dir.join(name).display());
        INPUT
    })
}

fn analyze(spec: &ProblemSpec, opts: &Opts) -> Result<u8, u8> {
    let ws = weights(spec)?;
    if ws.is_empty() {
        eprintln!("error: no weights; pass --gamma or set [weights] gamma");
        return Err(INPUT);
    }
    let mut code = OK;
    let mut blocks = Vec::new();
    for w in &ws {
        let r = domain_report(&spec.problem, w, &spec.solver.analysis).map_err(|e| fail(&e))?;
        code = code.max(report_code(&r));
        let (text, csv, svg) = (output::text_report(&r), output::csv_table(&r), output::svg_map(&r));
        if let Some(dir) = &opts.out {
            let stem = format!("{}_gamma{}", spec.problem.name, w.gamma);
            write_out(dir, &format!("{stem}.txt"), &text)?;
            write_out(dir, &format!("{stem}.csv"), &csv)?;
            write_out(dir, &format!("{stem}.svg"), &svg)?;
        }
        blocks.push(match opts.format {
            Format::Text => text,
            Format::Csv => csv,
            Format::Svg => svg,
        });
    }
    print!("{}", blocks.join("\n"));
    Ok(code)
}

/// Identity on the traces `k < mu/2` (`low`) or `k >= mu/2`.
fn half_condition(mu: usize, m: usize, low: bool) -> Option<BoundaryCondition<C64>> {
    if !mu.is_multiple_of(2) {
        return None;
    }
    let picked = |j: usize| (j < mu / 2) == low;
    let dims = (0..mu).map(|j| if picked(j) { m } else { 0 }).collect();
    let entries = (0..mu)
        .filter(|&j| picked(j))
        .map(|j| (j, j, BoundaryFuchsOp::constant(Mat::identity(m))))
        .collect();
    BoundaryCondition::new(mu, m, dims, entries).ok()
}

fn adjoint(spec: &ProblemSpec, opts: &Opts) -> Result<u8, u8> {
    let p = &spec.problem;
    let adj = build_adjoint(p).map_err(|e| fail(&e))?.problem;
    let mu = p.mu() as f64;
    let dual: Vec<f64> = spec.gammas.iter().map(|g| -g + mu).collect();
    let mut out = String::new();
    out.push_str(&format!("# adjoint of {}\n", p.name));
    out.push_str(&config::dump(&adj, &dual, spec.p_int / (spec.p_int - 1.0)));

    let samples = [(0.3, 0.7), (-1.2, 0.4), (2.5, -1.1), (0.9, 2.2), (-0.4, -0.8), (1.7, 0.1)];
    let zs: Vec<C64> = samples.iter().map(|&(a, b)| C64::new(a, b)).collect();
    let c = reflection_offset(p);
    let report = conjugation_check(p, &adj, &zs, c, Exec::default());
    let residual = report.max_residual();
    out.push_str(&format!("\n# reflection z -> {c} - conj(z)\n"));
    out.push_str(&format!(
        "# conjugation residual {residual:.3e} (pairing {:.3e}, kernels {:.3e}): {}\n",
        report.pairing,
        report.kernel,
        if residual < 1e-6 { "PASS" } else { "FAIL" }
    ));
    for (side, bc) in [("left", &adj.left), ("right", &adj.right)] {
        for (label, low) in [("Dirichlet", true), ("Neumann", false)] {
            if let Some(reference) = half_condition(p.mu(), p.m(), low) {
                if bc.dims() == reference.dims() && condition_distance(bc, &reference, &zs) < 1e-8 {
                    out.push_str(&format!("# {side} adjoint condition is equivalent to {label}\n"));
                }
            }
        }
    }
    let mut code = OK;
    for w in weights(spec)? {
        match adjoint_ellipticity(p, &adj, &w, &spec.solver.analysis).map_err(|e| fail(&e))? {
            None => {
                out.push_str(&format!("# gamma = {}: pole on the weight line, adjoint not analyzed\n", w.gamma));
                code = code.max(WEIGHT_POLE);
            }
            Some(e) => {
                out.push_str(&format!(
                    "# adjoint at gamma = {}: principal symbol {}, Shapiro-Lopatinskij {}, weight line clear {}\n",
                    e.weight.gamma, e.principal_symbol, e.lopatinskij, e.line_clear
                ));
                if !e.passed() {
                    code = code.max(NOT_ELLIPTIC);
                }
            }
        }
    }
    if let Some(dir) = &opts.out {
        write_out(dir, &format!("{}_adjoint.cfg", p.name), &out)?;
    }
    print!("{out}");
    Ok(code)
}

fn run_verify(suite: Suite, opts: &Opts) -> u8 {
    let defaults = conebvp::domains::AnalysisSettings::default();
    let settings = conebvp::domains::AnalysisSettings {
        grid_n: opts.grid_n.unwrap_or(defaults.grid_n),
        imag_box: opts.imag_box.unwrap_or(defaults.imag_box),
        ..defaults
    };
    let seed = opts.seed.unwrap_or(DEFAULT_SEED);
    let checks = match suite {
        Suite::Oracle => verify::oracle_suite(&settings, seed),
        Suite::Fredholm => verify::fredholm_suite(seed),
        Suite::Green => verify::green_suite(seed),
    };
    print!("{}", verify::table(&checks));
    if checks.iter().all(|c| c.passed) {
        OK
    } else {
        INPUT
    }
}
