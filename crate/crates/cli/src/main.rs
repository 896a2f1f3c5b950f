use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use pencil_cli::commands::{self, CertifyClass, GenKind, Outcome};
use pencil_cli::{to_json, InstanceFile};
use pencil_core::solver::VERIFY_TOL;
use pencil_core::{Budget, Field, Order, SolveOptions};

#[derive(Parser)]
#[command(name = "pencil", version, about = "Feasibility of A + Σ λᵢBᵢ ⪰ 0 for Hermitian matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Relative tolerance for intervals, grids and classification.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Master seed of every randomised search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Indentation of the JSON output; 0 prints a single line.
    #[arg(long, global = true, default_value_t = 2)]
    json_indent: usize,
    /// Scalar field of the searched vectors.
    #[arg(long, global = true, value_enum, default_value = "complex")]
    field: FieldArg,
    #[arg(long, global = true, default_value_t = 64)]
    budget_restarts: usize,
    #[arg(long, global = true, default_value_t = 500)]
    budget_iters: usize,
    #[arg(long, global = true, default_value_t = 4096)]
    budget_grid: usize,
    #[arg(long, global = true, default_value_t = 16)]
    budget_pairs: usize,
    #[arg(long, global = true, default_value_t = 256)]
    budget_planes: usize,
    #[arg(long, global = true, default_value_t = 20_000)]
    budget_sphere_grid: usize,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FieldArg {
    Complex,
    Real,
}

impl Common {
    fn budget(&self) -> Budget {
        Budget {
            restarts: self.budget_restarts,
            iters: self.budget_iters,
            grid: self.budget_grid,
            pairs: self.budget_pairs,
            planes: self.budget_planes,
            sphere_grid: self.budget_sphere_grid,
            seed: self.seed,
            field: match self.field {
                FieldArg::Complex => Field::Complex,
                FieldArg::Real => Field::Real,
            },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Definiteness of every matrix in the file.
    Classify { file: PathBuf },
    /// Exact interval {λ : A + λB ⪰ 0} for a single indefinite B.
    Interval { file: PathBuf },
    /// Searches for λ with A + Σ λᵢBᵢ ⪰ 0.
    Solve {
        file: PathBuf,
        /// `norm` (largest ‖Bᵢ‖ first), `given` (last member first) or a permutation
        /// such as `2,0,1`.
        #[arg(long, default_value = "norm")]
        order: String,
        /// Relative tolerance of the final eigenvalue verification.
        #[arg(long, default_value_t = VERIFY_TOL)]
        verify_tol: f64,
    },
    /// Certifies a hypothesis class of the family B.
    Certify {
        file: PathBuf,
        #[arg(long, value_enum)]
        class: CertifyClass,
    },
    /// Brute-force λ-grid feasibility sweep.
    Oracle {
        file: PathBuf,
        /// Box `lo,hi` applied to every axis.
        #[arg(long = "box", default_value = "-2,2", allow_hyphen_values = true)]
        bounds: String,
        #[arg(long, default_value_t = 21)]
        points: usize,
    },
    /// Writes a generated instance file to stdout.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
}

fn parse_order(s: &str) -> Result<Order> {
    Ok(match s {
        "norm" => Order::Norm,
        "given" => Order::Given,
        list => Order::Custom(
            list.split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .with_context(|| format!("invalid --order {list:?}"))?,
        ),
    })
}

fn parse_box(s: &str) -> Result<(f64, f64)> {
    let (lo, hi) = s.split_once(',').context("--box expects lo,hi")?;
    Ok((
        lo.trim().parse().context("--box lower bound")?,
        hi.trim().parse().context("--box upper bound")?,
    ))
}

fn load(path: &Path) -> Result<pencil_cli::Instance> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    InstanceFile::parse(&text)?.to_instance()
}

fn run(cli: &Cli) -> Result<(String, u8)> {
    let c = &cli.common;
    let outcome: Outcome = match &cli.command {
        Command::Gen { kind, m, n } => {
            let file = commands::gen_cmd(*kind, *m, *n, c.seed)?;
            return Ok((to_json(&file, c.json_indent), 0));
        }
        Command::Classify { file } => commands::classify_cmd(&load(file)?, c.tol)?,
        Command::Interval { file } => commands::interval_cmd(&load(file)?, c.tol)?,
        Command::Solve {
            file,
            order,
            verify_tol,
        } => {
            let opts = SolveOptions {
                budget: c.budget(),
                order: parse_order(order)?,
                tol: *verify_tol,
            };
            commands::solve_cmd(&load(file)?, &opts)?
        }
        Command::Certify { file, class } => commands::certify_cmd(&load(file)?, *class, &c.budget())?,
        Command::Oracle {
            file,
            bounds,
            points,
        } => commands::oracle_cmd(&load(file)?, parse_box(bounds)?, *points, c.tol)?,
    };
    Ok((to_json(&outcome.report, c.json_indent), outcome.status.code()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("PENCIL_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match run(&cli) {
        Ok((json, code)) => {
            println!("{json}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
