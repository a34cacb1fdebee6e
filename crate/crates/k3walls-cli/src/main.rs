//! `k3walls` — batch front-end for the lattice engine.
//!
//! Exit codes: 0 success, 1 internal invariant violation, 2 user error.

mod commands;
mod json;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{NsSource, SweepRanges};

#[derive(Debug)]
pub enum CliError {
    User(String),
    Internal(String),
}

impl From<k3walls::Error> for CliError {
    fn from(e: k3walls::Error) -> Self {
        if e.is_user_error() {
            CliError::User(e.to_string())
        } else {
            CliError::Internal(e.to_string())
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Parser)]
#[command(
    name = "k3walls",
    version,
    about = "Vertical-wall classification for Mukai vectors on K3 surfaces",
    long_about = "Decides, over exact integer arithmetic, whether the reflection in the \
vertical wall of a Mukai vector is a monodromy operator, classifies the wall \
as divisorial or flopping, and decides existence of the induced symplectic \
birational involution."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct NsArgs {
    /// Néron–Severi data file: {"gram": [[...]], "D": [...]}
    #[arg(long)]
    ns: Option<String>,
    /// Shortcut for rank-1 NS = Z·D with the given D² (even, positive)
    #[arg(long, allow_hyphen_values = true)]
    d2: Option<i64>,
}

impl NsArgs {
    fn source(&self) -> NsSource {
        NsSource {
            ns_file: self.ns.clone(),
            d2: self.d2,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the vertical wall of a Mukai vector and decide the involution
    Classify {
        #[command(flatten)]
        ns: NsArgs,
        /// Mukai vector r,theta...,s (e.g. 3,0,-5)
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        /// Optional primitive embedding into U^4 + E8(-1)^2 for NS rank > 1:
        /// {"embedding": 24 rows of rho+2 integers}
        #[arg(long)]
        embedding: Option<String>,
        /// Coordinate bound for the higher-rank check of condition (*)
        #[arg(long, default_value_t = 20)]
        bound: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Apply an isometry word to a Mukai vector, with an audit trail
    Isometry {
        #[command(flatten)]
        ns: NsArgs,
        /// Word such as "exp(-1H);shift;twist;exp(-4H)" (rightmost atom acts first)
        #[arg(long)]
        word: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Classify a grid of Mukai vectors, streaming one JSONL record each
    Sweep {
        /// Comma-separated list of D² values (rank-1 NS), e.g. 2,4,6,8
        #[arg(long, allow_hyphen_values = true)]
        d2: String,
        /// Inclusive range for r, e.g. 1:8
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        /// Inclusive range for c (theta = c·D), e.g. -8:8
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Inclusive range for s, e.g. -20:20
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value_t = 20)]
        bound: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Exact lattice utilities
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// Fourier–Mukai reduction: send an isotropic wall class to (0,0,1)
    FmReduce {
        /// Rank-2 wall lattice file {"gram": [[..],[..]]}; coordinates are
        /// then 2-vectors in its basis
        #[arg(long)]
        h: Option<String>,
        #[command(flatten)]
        ns: NsArgs,
        /// v: 2 coordinates with --h, or full Mukai coordinates with --ns/--d2
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        /// isotropic class w, same convention as --v
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Smith normal form with transformation matrices
    Snf {
        /// Lattice file {"gram": [[...]]}
        #[arg(long)]
        lattice: Option<String>,
        /// Inline integer matrix, rows separated by ';': "2,0;0,3"
        #[arg(long, allow_hyphen_values = true)]
        matrix: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Discriminant group with its finite quadratic form
    Disc {
        #[arg(long)]
        lattice: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Orthogonal complement of a sublattice
    Complement {
        #[arg(long)]
        lattice: String,
        /// Sublattice basis rows, e.g. "1,1,0" or "2,0;0,3"
        #[arg(long, allow_hyphen_values = true)]
        sub: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Invariant/coinvariant splitting of a finite-order isometry
    Coinv {
        #[arg(long)]
        lattice: String,
        /// Isometry file {"matrix": [[...]]}
        #[arg(long)]
        isometry: String,
        /// Claimed order (g^order must be the identity)
        #[arg(long)]
        order: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Hyperbolic plane U(m²) spanned by an isotropic class
    UFromIsotropic {
        #[arg(long)]
        lattice: String,
        /// Isotropic primitive class, e.g. "1,0"
        #[arg(long, allow_hyphen_values = true)]
        e: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Classify {
            ns,
            v,
            embedding,
            bound,
            format,
        } => commands::cmd_classify(&ns.source(), &v, embedding.as_deref(), bound, format),
        Cmd::Isometry {
            ns,
            word,
            v,
            format,
        } => commands::cmd_isometry(&ns.source(), &word, &v, format),
        Cmd::Sweep {
            d2,
            r,
            c,
            s,
            bound,
            format,
        } => {
            let d2: Result<Vec<i64>, CliError> = d2
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<i64>()
                        .map_err(|_| CliError::User(format!("--d2: bad integer \"{p}\"")))
                })
                .collect();
            let ranges = SweepRanges {
                d2: d2?,
                r: commands::parse_range(&r, "--r")?,
                c: commands::parse_range(&c, "--c")?,
                s: commands::parse_range(&s, "--s")?,
            };
            commands::cmd_sweep(&ranges, bound, format)
        }
        Cmd::Lattice { cmd } => match cmd {
            LatticeCmd::Snf {
                lattice,
                matrix,
                format,
            } => {
                let m = commands::load_lattice_or_matrix(lattice.as_deref(), matrix.as_deref())?;
                commands::cmd_lattice_snf(&m, format)
            }
            LatticeCmd::Disc { lattice, format } => commands::cmd_lattice_disc(&lattice, format),
            LatticeCmd::Complement {
                lattice,
                sub,
                format,
            } => commands::cmd_lattice_complement(&lattice, &sub, format),
            LatticeCmd::Coinv {
                lattice,
                isometry,
                order,
                format,
            } => commands::cmd_lattice_coinv(&lattice, &isometry, order, format),
            LatticeCmd::UFromIsotropic { lattice, e, format } => {
                commands::cmd_lattice_u_from_isotropic(&lattice, &e, format)
            }
        },
        Cmd::FmReduce {
            h,
            ns,
            v,
            w,
            format,
        } => commands::cmd_fm_reduce(h.as_deref(), &ns.source(), &v, &w, format),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(CliError::User(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal invariant violation: {msg}");
            std::process::exit(1);
        }
    }
}
