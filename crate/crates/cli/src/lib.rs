//! Command-line front end for the `isoflag` library.
//!
//! Exit codes: 0 on success, 2 for invalid input (including argument
//! errors), 3 when a computation fails numerically, 1 when `bounds sweep`
//! finds a failing comparison.

pub mod io;
pub mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isoflag::bounds::{all_signatures, bound_table};
use isoflag::embed::{embed, recover};
use isoflag::geometry::{gradient_descent, nearest_point, DescentOptions};
use isoflag::repdim::{enumerate_low_dim, verify_classification_with_cap, weyl_dim};
use isoflag::{
    random_flag_point, FlagPoint, FlagSignature, HighestWeight, Spectrum, SymmetricMatrix, Tolerances,
};
use num_bigint::BigUint;
use serde::Serialize;

use crate::io::{read_matrix, rows};
use crate::report::{
    DimReport, EmbedReport, Envelope, OptimizeReport, ProjectReport, RecoverReport, Render, SweepReport,
    SCHEMA_VERSION,
};

#[derive(Debug)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub code: u8,
}

impl CliError {
    pub fn validation(kind: &str, message: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            message: message.into(),
            code: 2,
        }
    }
}

impl From<isoflag::Error> for CliError {
    fn from(e: isoflag::Error) -> Self {
        Self {
            kind: e.kind().into(),
            message: e.to_string(),
            code: if e.is_numerical() { 3 } else { 2 },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "isoflag", version, about = "Flag manifolds as isospectral symmetric matrices")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Seed for random flags.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct TolArgs {
    /// Orthogonality tolerance for input rotations.
    #[arg(long, global = true)]
    pub orth_tol: Option<f64>,
    /// Symmetry tolerance for input matrices.
    #[arg(long, global = true)]
    pub sym_tol: Option<f64>,
    /// Minimum gap between spectrum values and at block boundaries.
    #[arg(long, global = true)]
    pub gap_tol: Option<f64>,
    /// Eigenvalue matching tolerance for recovery.
    #[arg(long, global = true)]
    pub eig_tol: Option<f64>,
}

impl TolArgs {
    fn resolve(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            orth: self.orth_tol.unwrap_or(d.orth),
            sym: self.sym_tol.unwrap_or(d.sym),
            spectrum_gap: self.gap_tol.unwrap_or(d.spectrum_gap),
            eig: self.eig_tol.unwrap_or(d.eig),
            ..d
        }
    }
}

#[derive(Debug, Args)]
pub struct FlagArgs {
    #[arg(long)]
    pub n: usize,
    /// Subspace dimensions, e.g. `2,3`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub ks: Vec<usize>,
    /// One value per block; defaults to an integer traceless spectrum.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub spectrum: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Use the standard flag instead of a random one.
    #[arg(long, conflicts_with = "q_file")]
    pub identity: bool,
    /// Rotation whose columns are adapted to the flag.
    #[arg(long)]
    pub q_file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Embed a flag as a symmetric matrix.
    Embed {
        #[command(flatten)]
        flag: FlagArgs,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Recover the flag of an embedded matrix.
    Recover {
        #[command(flatten)]
        flag: FlagArgs,
        #[arg(long)]
        matrix_file: PathBuf,
    },
    /// Nearest embedded flag to a symmetric matrix.
    Project {
        #[command(flatten)]
        flag: FlagArgs,
        #[arg(long)]
        matrix_file: PathBuf,
    },
    /// Gradient descent on `½‖X − A‖²`.
    Optimize {
        #[command(flatten)]
        flag: FlagArgs,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        target_file: PathBuf,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long)]
        grad_tol: Option<f64>,
    },
    /// Dimensions of irreducible SO(n) modules.
    Repdim {
        #[command(subcommand)]
        command: RepdimCommand,
    },
    /// Embedding dimension bounds for a flag manifold.
    Bounds(BoundsArgs),
}

#[derive(Debug, Subcommand)]
pub enum RepdimCommand {
    /// Dimension of the module with a given highest weight.
    Dim {
        #[arg(long)]
        n: usize,
        /// Comma-separated integers or halves, e.g. `2,1` or `1/2,1/2,-1/2`.
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    /// All modules up to a dimension.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_dim: BigUint,
        /// Largest first weight entry searched.
        #[arg(long, default_value = "4")]
        cap: String,
    },
    /// Check the low-dimensional classification for n >= 17.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "4")]
        cap: String,
    },
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct BoundsArgs {
    #[command(subcommand)]
    pub command: Option<BoundsCommand>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub ks: Option<Vec<usize>>,
    /// Order of a finite symmetry group, for the Wang bound.
    #[arg(long)]
    pub group_order: Option<u128>,
}

#[derive(Debug, Subcommand)]
pub enum BoundsCommand {
    /// Every signature for 2 <= n <= max-n.
    Sweep {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=24))]
        max_n: u8,
    },
}

/// Rendered output and the exit code it should produce.
pub struct Output {
    pub body: String,
    pub code: u8,
}

fn render<T: Serialize + Render>(format: Format, command: &str, report: &T) -> String {
    match format {
        Format::Json => {
            let env = Envelope {
                schema_version: SCHEMA_VERSION,
                command: command.to_string(),
                report,
            };
            serde_json::to_string_pretty(&env).expect("reports serialize") + "\n"
        }
        Format::Csv => report.csv(),
        Format::Text => report.text(),
    }
}

fn signature(flag: &FlagArgs) -> Result<FlagSignature, CliError> {
    Ok(FlagSignature::new(flag.n, flag.ks.clone())?)
}

fn spectrum(flag: &FlagArgs, sig: &FlagSignature, tol: &Tolerances) -> Result<Spectrum, CliError> {
    Ok(match &flag.spectrum {
        Some(values) => Spectrum::new(sig.clone(), values.clone(), tol.spectrum_gap)?,
        None => Spectrum::default_traceless(sig),
    })
}

fn point(p: &PointArgs, sig: &FlagSignature, seed: u64, tol: &Tolerances) -> Result<FlagPoint, CliError> {
    if p.identity {
        return Ok(FlagPoint::identity(sig));
    }
    match &p.q_file {
        Some(path) => Ok(FlagPoint::new(read_matrix(path)?, sig.clone(), tol.orth)?),
        None => Ok(random_flag_point(sig, seed)),
    }
}

fn symmetric_file(path: &Path, tol: &Tolerances) -> Result<SymmetricMatrix, CliError> {
    Ok(SymmetricMatrix::new(read_matrix(path)?, tol.sym)?)
}

fn half_integer(text: &str) -> Result<i64, CliError> {
    let bad = || isoflag::Error::WeightParse { entry: text.to_string() };
    let t = text.trim();
    let doubled = match t.strip_suffix("/2") {
        Some(num) => num.trim().parse::<i64>().map_err(|_| bad())?,
        None => t.parse::<i64>().map_err(|_| bad())?.checked_mul(2).ok_or_else(bad)?,
    };
    Ok(doubled)
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let tol = cli.tol.resolve();
    let fmt = cli.format;
    let ok = |body| Ok(Output { body, code: 0 });
    match &cli.command {
        Command::Embed { flag, point: p } => {
            let sig = signature(flag)?;
            let spec = spectrum(flag, &sig, &tol)?;
            let e = embed(&point(p, &sig, cli.seed, &tol)?, &spec)?;
            let report = EmbedReport {
                signature: sig,
                spectrum: spec.values().to_vec(),
                matrix: rows(e.x().matrix()),
                eigenvalues: e.x().eigenvalues_desc(),
                trace: e.x().trace(),
                q: rows(e.frame()),
            };
            ok(render(fmt, "embed", &report))
        }
        Command::Recover { flag, matrix_file } => {
            let sig = signature(flag)?;
            let spec = spectrum(flag, &sig, &tol)?;
            let x = symmetric_file(matrix_file, &tol)?;
            let f = recover(&x, &spec, tol.eig)?;
            let report = RecoverReport {
                block_bases: (0..sig.num_blocks()).map(|i| rows(&f.block_basis(i))).collect(),
                q: rows(f.q()),
                spectrum: spec.values().to_vec(),
                signature: sig,
            };
            ok(render(fmt, "recover", &report))
        }
        Command::Project { flag, matrix_file } => {
            let sig = signature(flag)?;
            let spec = spectrum(flag, &sig, &tol)?;
            let a = symmetric_file(matrix_file, &tol)?;
            let e = nearest_point(&a, &spec, tol.spectrum_gap)?;
            let report = ProjectReport {
                signature: sig,
                spectrum: spec.values().to_vec(),
                point: rows(e.x().matrix()),
                q: rows(e.frame()),
                distance: (e.x().matrix() - a.matrix()).norm(),
            };
            ok(render(fmt, "project", &report))
        }
        Command::Optimize {
            flag,
            point: p,
            target_file,
            step,
            max_iters,
            grad_tol,
        } => {
            let sig = signature(flag)?;
            let spec = spectrum(flag, &sig, &tol)?;
            let a = symmetric_file(target_file, &tol)?;
            if a.n() != sig.n() {
                return Err(isoflag::Error::DimensionMismatch {
                    expected: sig.n(),
                    rows: a.n(),
                    cols: a.n(),
                }
                .into());
            }
            let init = embed(&point(p, &sig, cli.seed, &tol)?, &spec)?;
            let mut opts = DescentOptions::for_spectrum(&spec);
            opts.gap_tol = tol.spectrum_gap;
            if let Some(s) = step {
                opts.step = *s;
            }
            if let Some(m) = max_iters {
                opts.max_iters = *m;
            }
            if let Some(g) = grad_tol {
                opts.grad_tol = *g;
            }
            let run = gradient_descent(|x| x.matrix() - a.matrix(), &spec, &init, &opts)?;
            let nearest = nearest_point(&a, &spec, tol.spectrum_gap)?;
            let report = OptimizeReport {
                signature: sig,
                spectrum: spec.values().to_vec(),
                point: rows(run.point.x().matrix()),
                iterations: run.iterations,
                converged: run.converged,
                final_grad_norm: run.final_grad_norm(),
                distance_to_nearest: (run.point.x().matrix() - nearest.x().matrix()).norm(),
                grad_norms: run.grad_norms,
            };
            ok(render(fmt, "optimize", &report))
        }
        Command::Repdim { command } => match command {
            RepdimCommand::Dim { n, weight } => {
                let w = HighestWeight::parse(*n, weight)?;
                let report = DimReport {
                    n: *n,
                    dim: weyl_dim(&w)?.to_string(),
                    weight: w,
                };
                ok(render(fmt, "repdim dim", &report))
            }
            RepdimCommand::Enumerate { n, max_dim, cap } => {
                let report = enumerate_low_dim(*n, max_dim, half_integer(cap)?)?;
                ok(render(fmt, "repdim enumerate", &report))
            }
            RepdimCommand::Verify { n, cap } => {
                let report = verify_classification_with_cap(*n, half_integer(cap)?)?;
                let code = if report.passed { 0 } else { 1 };
                Ok(Output {
                    body: render(fmt, "repdim verify", &report),
                    code,
                })
            }
        },
        Command::Bounds(args) => match &args.command {
            Some(BoundsCommand::Sweep { max_n }) => {
                let rows: Vec<_> = (2..=*max_n as usize)
                    .flat_map(all_signatures)
                    .map(|s| bound_table(&s, args.group_order))
                    .collect();
                let all = rows.iter().all(|r| r.comparison("isospectral < gunther") == Some(true));
                let report = SweepReport {
                    max_n: *max_n as usize,
                    rows,
                    all_gunther_hold: all,
                };
                Ok(Output {
                    body: render(fmt, "bounds sweep", &report),
                    code: if all { 0 } else { 1 },
                })
            }
            None => {
                let (Some(n), Some(ks)) = (args.n, args.ks.clone()) else {
                    return Err(CliError::validation("MissingArgument", "bounds needs --n and --ks, or `sweep`"));
                };
                let sig = FlagSignature::new(n, ks)?;
                ok(render(fmt, "bounds", &bound_table(&sig, args.group_order)))
            }
        },
    }
}

/// Parses `args`, runs the command and writes output to stdout/stderr.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{}", out.body);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {}: {}", e.kind, e.message);
            ExitCode::from(e.code)
        }
    }
}
