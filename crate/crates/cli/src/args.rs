use clap::{Args, Parser, Subcommand, ValueEnum};

/// Numerical verification of Weyl-covariant channel constructions and their
/// output entropy bounds. Prints one JSON report per run on stdout.
///
/// Exit status: 0 pass, 1 verification failure, 2 usage error, 3 precondition error.
#[derive(Debug, Parser)]
#[command(name = "weylcov", version)]
pub struct Cli {
    /// Master seed; every random case derives its own seed from it.
    #[arg(long, global = true, env = "WEYLCOV_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Override the command's pass tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Report entropies in bits instead of nats.
    #[arg(long, global = true)]
    pub bits: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mutually unbiased bases of a prime dimension.
    Mub {
        #[arg(long)]
        dim: usize,
    },
    /// Weyl commutation relations and the shift/clock factorization.
    Weyl {
        #[arg(long)]
        dim: usize,
    },
    /// Spectral covariance criterion against sampled group elements.
    Covariance {
        #[command(flatten)]
        channel: ChannelArgs,
        /// `computational`, `fourier`, `mub:S` or `pauli:x|y|z`.
        #[arg(long, default_value = "fourier")]
        group: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Convex decompositions into phase dampings.
    Decompose {
        #[command(subcommand)]
        which: Decompose,
    },
    /// Output entropy lower bounds on sampled bipartite states.
    Bound {
        #[command(subcommand)]
        which: Bound,
    },
    /// Relative-entropy identities behind the phase-damping bound.
    Trace(PhaseDampingArgs),
    /// Monotonicity of relative entropy under random Weyl channels.
    Dpi {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Fixed dimension; alternates 2 and 3 when omitted.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Minimal output entropy by multi-start descent.
    Minent {
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long, default_value_t = weylcov::minent::DEFAULT_RESTARTS)]
        restarts: usize,
    },
    /// Additivity gap of the minimal output entropy on `a (x) b`.
    Additivity {
        /// Channel as JSON, e.g. `{"kind":"depolarizing","d":2,"p":0.5}`.
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = weylcov::minent::DEFAULT_PRODUCT_RESTARTS)]
        restarts: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum Decompose {
    /// Phase-damping decomposition of a Weyl channel of the required shape.
    Prop7 {
        #[command(flatten)]
        channel: ChannelArgs,
    },
    /// Corrected two-Pauli decomposition, printed split and the TP2 mixture.
    TwoPauli {
        #[arg(long)]
        p: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum Bound {
    /// Phase damping in a basis of the MUB family.
    T1(PhaseDampingArgs),
    /// Depolarizing channel on prime `dim`.
    T2 {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        p: f64,
        /// Dimension of the reference system (defaults to `dim`).
        #[arg(long)]
        dim_k: Option<usize>,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = StateKind::Random)]
        state: StateKind,
    },
    /// Two-Pauli channel on qubit pairs.
    T3 {
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = StateKind::Random)]
        state: StateKind,
    },
}

#[derive(Debug, Clone, Args)]
pub struct PhaseDampingArgs {
    #[arg(long)]
    pub dim: usize,
    /// Damping weights, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub lambda: Vec<f64>,
    /// Index `s` of the damping basis in the MUB family.
    #[arg(long, default_value_t = 0)]
    pub basis: usize,
    #[arg(long)]
    pub dim_k: Option<usize>,
    /// Pure terms per sampled admissible state.
    #[arg(long, default_value_t = 1)]
    pub mix: usize,
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = StateKind::Random)]
    pub state: StateKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateKind {
    /// Maximally entangled state (one case).
    Maxent,
    /// Seeded random states.
    Random,
    /// `I/2 (x) y` with seeded random `y` (t3 only).
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelName {
    Depolarizing,
    TwoPauli,
    PhaseDamping,
    Weyl,
    Pauli,
}

#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    #[arg(long, value_enum)]
    pub channel: ChannelName,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Phase-damping weights.
    #[arg(long, value_delimiter = ',')]
    pub lambda: Vec<f64>,
    /// Phase-damping subgroup index.
    #[arg(long)]
    pub s: Option<usize>,
    /// Pauli weights of `I, X, Y, Z`.
    #[arg(long, value_delimiter = ',')]
    pub w: Vec<f64>,
    /// Weyl distribution `pi[m][n]`, row-major.
    #[arg(long, value_delimiter = ',')]
    pub pi: Vec<f64>,
}
