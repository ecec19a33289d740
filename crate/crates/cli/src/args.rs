use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Clone, Parser)]
#[command(name = "frobsplit", version, about = "Explicit Frobenius-splitting and parabolic-weight checks")]
pub struct Cli {
    /// Seed for randomized jobs (default 0; batch jobs inherit the batch seed).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Coefficient of the top monomial in sigma^(p-1).
    SplitCheck {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        nvars: usize,
        /// Polynomial text, or a path to a file holding it.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Section on the big cell of the full flag variety and its checks.
    FlagVerify {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: u64,
        /// Vanishing orders at the special loci.
        #[arg(long)]
        orders: bool,
        /// Split checks along the delta chain.
        #[arg(long)]
        delta_chain: bool,
    },
    /// Lifts a splitting section up the Grassmannian tower.
    TowerVerify {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: u64,
        /// Allow rank 3.
        #[arg(long)]
        heavy: bool,
        /// File with the starting section on the bottom level.
        #[arg(long)]
        sigma_y: Option<PathBuf>,
    },
    /// Parabolic weight calculus.
    Weights {
        #[command(subcommand)]
        op: WeightsOp,
    },
    /// Genericity, special loci and stability of flag configurations on P^1.
    Stab(StabArgs),
    /// Dimension identity for sections of O(m) on the Grassmannian.
    Repdim {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Split checks for the delta chain alone.
    DeltaChain {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: u64,
    },
    /// Runs the jobs of a manifest file.
    Batch {
        #[arg(long)]
        manifest: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::SplitCheck { .. } => "split-check",
            Command::FlagVerify { .. } => "flag-verify",
            Command::TowerVerify { .. } => "tower-verify",
            Command::Weights { .. } => "weights",
            Command::Stab(_) => "stab",
            Command::Repdim { .. } => "repdim",
            Command::DeltaChain { .. } => "delta-chain",
            Command::Batch { .. } => "batch",
        }
    }
}

/// A weight datum from a file or from types with canonical weights.
#[derive(Debug, Clone, Args)]
pub struct OmegaArgs {
    /// Weight file.
    #[arg(long, conflicts_with = "types")]
    pub config: Option<PathBuf>,
    /// Types separated by ';', e.g. "(2,1);(1,1,1)".
    #[arg(long)]
    pub types: Option<String>,
    #[arg(long)]
    pub rank: Option<u32>,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub degree: i64,
    #[arg(long, default_value_t = 0)]
    pub genus: u64,
    /// Point labels for --types, comma separated (default x1, x2, ...).
    #[arg(long)]
    pub labels: Option<String>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum WeightsOp {
    /// Prints the weight table.
    Canonical(OmegaArgs),
    /// Sigma at a point for one m-vector, or its minimum over rank r1.
    Sigma {
        #[command(flatten)]
        omega: OmegaArgs,
        #[arg(long)]
        point: String,
        /// m-vector, comma separated.
        #[arg(long, conflicts_with = "r1")]
        m: Option<String>,
        #[arg(long)]
        r1: Option<u32>,
    },
    /// Codimension bounds for the non-stable loci.
    Codim(OmegaArgs),
    /// Hecke transformation at a full-flag point.
    Hecke {
        #[command(flatten)]
        omega: OmegaArgs,
        #[arg(long)]
        point: String,
    },
    /// The polarization exponent ell.
    Ell(OmegaArgs),
    /// Alpha-semistability inequality for one subsheaf of a GPS.
    Gps {
        #[command(flatten)]
        omega: OmegaArgs,
        /// Rank of F, or "r1,r2" on a two-component curve.
        #[arg(long)]
        sub_rank: String,
        #[arg(long, allow_hyphen_values = true)]
        parchi_f: String,
        #[arg(long)]
        dimq_f: u32,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        dimq: u32,
        /// Points on the first component, comma separated.
        #[arg(long)]
        i1: Option<String>,
        #[arg(long)]
        c1: Option<u64>,
        #[arg(long)]
        c2: Option<u64>,
    },
    /// The numbers n_j^omega, optionally with the chi range check.
    Njomega {
        #[command(flatten)]
        omega: OmegaArgs,
        #[arg(long, default_value = "")]
        i1: String,
        #[arg(long)]
        c1: u64,
        #[arg(long)]
        c2: u64,
        #[arg(long, allow_hyphen_values = true, requires_all = ["chi2", "alpha", "dimq1", "dimq2"])]
        chi1: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        chi2: Option<i64>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        dimq1: Option<u32>,
        #[arg(long)]
        dimq2: Option<u32>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct StabArgs {
    /// Configuration file.
    #[arg(long, required_unless_present = "random", conflicts_with = "random")]
    pub config: Option<PathBuf>,
    /// Number of random configurations instead of a file.
    #[arg(long, requires_all = ["r", "p"])]
    pub random: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub p: Option<u64>,
    /// Degree bound for the rank-2 search.
    #[arg(long)]
    pub d_max: Option<u64>,
}
