//! `ivoa`: integral forms of lattice VOAs from the command line.
//!
//! Exit status: 0 on success, 1 on invalid input, 2 when a library-level
//! property (integrality, duality, Ising equations, ...) fails.

mod commands;
mod group;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use ivoa_core::voa::Form;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Lib(#[from] ivoa_core::Error),
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid input: {0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_invariant_violation() => 2,
            _ => 1,
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Parser, Debug)]
#[command(name = "ivoa", version, about = "Exact integral forms of lattice vertex operator algebras")]
pub struct Cli {
    /// Also write a JSON record of the run to this file.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Worker threads for the parallel backends (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormArg {
    Bilinear,
    Hermitian,
}

impl From<FormArg> for Form {
    fn from(f: FormArg) -> Form {
        match f {
            FormArg::Bilinear => Form::Bilinear,
            FormArg::Hermitian => Form::Hermitian,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BasisKindArg {
    /// Products of s_{g_i, n}: the integral form R.
    Sproduct,
    Schur,
    /// Schur elements of the dual basis: the form U.
    DualSchur,
}

#[derive(Args, Debug, Clone)]
pub struct LatticeArg {
    /// Catalog name (A2, D(4), E8, EE8, RANK1(4), A1+A1, ...) or a Gram file.
    #[arg(long, short = 'l')]
    pub lattice: String,
}

#[derive(Args, Debug, Clone)]
pub struct DegreeRange {
    /// A single degree.
    #[arg(long, short = 'n', conflicts_with = "max_degree")]
    pub degree: Option<u32>,
    /// All degrees 0..=N.
    #[arg(long)]
    pub max_degree: Option<u32>,
}

impl DegreeRange {
    pub fn degrees(&self) -> Result<Vec<u32>, CliError> {
        match (self.degree, self.max_degree) {
            (Some(n), None) => Ok(vec![n]),
            (None, Some(m)) => Ok((0..=m).collect()),
            _ => Err(usage("give --degree or --max-degree")),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Graded basis of V_L in one degree.
    Basis {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, short = 'n')]
        degree: u32,
        #[arg(long, value_enum, default_value = "sproduct")]
        kind: BasisKindArg,
        /// Print only the dimension.
        #[arg(long)]
        count_only: bool,
    },
    /// Gram matrix of the basis of R_n through a named pairing backend.
    Gram {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, short = 'n')]
        degree: u32,
        #[arg(long, value_enum, default_value = "hermitian")]
        form: FormArg,
        /// contraction or genfun.
        #[arg(long, default_value = "contraction")]
        backend: String,
        /// Refuse to print matrices larger than this.
        #[arg(long, default_value_t = 300)]
        max_dim: usize,
    },
    /// Rank, determinant, parity, discriminant, d(n) and blocks of R_n.
    Audit {
        #[command(flatten)]
        lattice: LatticeArg,
        #[command(flatten)]
        degrees: DegreeRange,
        #[arg(long, value_enum, default_value = "hermitian")]
        form: FormArg,
        /// Exact minimum norm of each degree (by enumeration per block).
        #[arg(long)]
        min_norm: bool,
        /// Audit a named sub-block; only `J` (degree 2, zero charge) is known.
        #[arg(long, value_name = "BLOCK")]
        min_norm_block: Option<String>,
    },
    /// Compare the dual of R_n with the dual-Schur form U_n.
    DualCheck {
        #[command(flatten)]
        lattice: LatticeArg,
        #[command(flatten)]
        degrees: DegreeRange,
        #[arg(long, value_enum, default_value = "hermitian")]
        form: FormArg,
    },
    /// u_k v for basis elements of R given by degree and index.
    Product {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long)]
        u_degree: u32,
        #[arg(long)]
        u_index: usize,
        #[arg(long)]
        v_degree: u32,
        #[arg(long)]
        v_index: usize,
        /// A single mode; default is every mode landing in degree <= --max-weight.
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        #[arg(long, default_value_t = 4)]
        max_weight: u32,
    },
    /// Z-span generated by e^{+-g_i} (or given charges) up to a degree, against R.
    Generate {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long)]
        max_degree: u32,
        /// Generators e^a given as comma-separated coordinates; repeatable.
        #[arg(long = "exp", value_name = "COORDS", allow_hyphen_values = true)]
        exps: Vec<String>,
    },
    /// Intersection of gR over the group generated by the given isometries.
    Intersect(GroupArgs),
    /// Sum of gR over the group generated by the given isometries.
    Sum(GroupArgs),
    /// Fixed points of R under the given isometries.
    Fix(GroupArgs),
    /// Eigenlattices of commuting involutions and the quotient by their sum.
    EigenSplit {
        /// Lattice whose R_n is split; otherwise use --matrix or --tensor-swap.
        #[arg(long, short = 'l')]
        lattice: Option<String>,
        #[arg(long, short = 'n')]
        degree: Option<u32>,
        /// Lifted isometries (with --lattice) or integer matrix files; repeatable.
        #[arg(long = "generator", short = 'g')]
        generators: Vec<String>,
        /// Integer involution files acting on Z^d; repeatable.
        #[arg(long = "matrix")]
        matrices: Vec<PathBuf>,
        /// The swap of tensor factors on Z^n (x) Z^n.
        #[arg(long)]
        tensor_swap: Option<usize>,
    },
    /// (A (x) B)_n for the integral forms of two lattices, against R of the sum.
    Tensor {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        max_degree: u32,
    },
    /// Build and verify a central charge 1/2 Ising vector.
    Ising {
        #[command(flatten)]
        lattice: LatticeArg,
        /// AA1 or EE8.
        #[arg(long = "type", default_value = "AA1")]
        kind: String,
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        sign: String,
        /// Norm-4 vector for AA1, comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// Signs of phi on the embedding generators (EE8), comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
        /// Run the mode equations and the bracket check.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 1)]
        bracket_degree: u32,
        /// Miyamoto data and stabilization on degrees 0..=N.
        #[arg(long)]
        miyamoto_through: Option<u32>,
    },
    /// f_m(a, b) = tr(ad a ad b) on R_m.
    TraceForm {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, short = 'n')]
        degree: u32,
    },
    /// Degrees 1 and 2 of the E8 lattice VOA: blocks, determinants and the J block.
    E8Audit {
        /// Skip the minimum-norm enumeration of J.
        #[arg(long)]
        no_min_norm: bool,
    },
}

#[derive(Args, Debug)]
pub struct GroupArgs {
    #[command(flatten)]
    pub lattice: LatticeArg,
    #[arg(long)]
    pub max_degree: u32,
    /// `theta`, or a file with the isometry matrix (columns are images) and an
    /// optional `signs` line; repeatable.
    #[arg(long = "generator", short = 'g', required = true)]
    pub generators: Vec<String>,
    /// Largest group the closure may reach.
    #[arg(long, default_value_t = 1024)]
    pub group_limit: usize,
}

fn run(cli: Cli) -> Result<report::Report, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(usage("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| usage(e.to_string()))?;
    }
    let rep = commands::dispatch(cli.command)?;
    if let Some(path) = &cli.json {
        rep.write_json(path)?;
    }
    Ok(rep)
}

fn report_status(rep: &report::Report) -> u8 {
    if rep.violations.is_empty() {
        0
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(rep) => {
            for l in &rep.lines {
                println!("{l}");
            }
            ExitCode::from(report_status(&rep))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
