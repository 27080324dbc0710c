use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "labelprop",
    version,
    about = "Label propagation community detection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single propagation run; writes a partition TSV.
    Detect(DetectArgs),
    /// Repeated runs folded into consensus graphs.
    Consensus(ConsensusArgs),
    /// Agglomerative meta-network levels, optionally refined top-down.
    Hierarchy(HierarchyArgs),
    /// Overlapping groups; writes a cover TSV.
    Overlap(OverlapArgs),
    /// Structural-equivalence and citation grouping.
    Equivalence(EquivalenceArgs),
    /// Benchmark graph generators.
    Generate(GenerateArgs),
    /// Objectives, NMI and degeneracy of a partition.
    Eval(EvalArgs),
    /// NMI or iteration sweeps over planted partitions, as CSV.
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleName {
    Standard,
    Cpm,
    Modularity,
    Apm,
    /// Fixed preferences equal to node degrees.
    Degree,
    Defensive,
    Offensive,
    Balanced,
    BalancedDefensive,
    Neighborhood,
    Tau,
    Cocitation,
    Bibcoupling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScheduleName {
    Sync,
    Async,
    Semisync,
    Bipartite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieName {
    Random,
    Retention,
    Inclusion,
    Smallest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConvergenceName {
    NoChange,
    Equilibrium,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignedName {
    /// Each sign class sums to one in absolute value.
    EqualTotal,
    /// Weights +1 and -1.
    Unit,
}

#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    #[arg(long, value_enum, default_value = "async")]
    pub schedule: ScheduleName,
    #[arg(long, value_enum, default_value = "retention")]
    pub tie: TieName,
    #[arg(long, value_enum, default_value = "no-change")]
    pub convergence: ConvergenceName,
    #[arg(long, default_value_t = labelprop::engine::DEFAULT_MAX_ITERS)]
    pub max_iters: usize,
    /// Sample labels in proportion to their scores (sync schedule only).
    #[arg(long)]
    pub probabilistic: bool,
    /// Reweighting applied to signed graphs.
    #[arg(long, value_enum, default_value = "equal-total")]
    pub signed: SignedName,
    /// Required when the CI environment variable is set.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct RuleArgs {
    #[arg(long, value_enum, default_value = "standard")]
    pub rule: RuleName,
    /// λ1 for cpm, λ2 for modularity (default 1/2m), λ3 for apm.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.5)]
    pub tau: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Result file; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// JSON run report.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    pub graph: PathBuf,
    #[command(flatten)]
    pub rule: RuleArgs,
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Update only nodes whose neighborhood changed (async schedule).
    #[arg(long)]
    pub active_passive: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ConsensusArgs {
    pub graph: PathBuf,
    #[command(flatten)]
    pub rule: RuleArgs,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, default_value_t = 25)]
    pub runs: usize,
    #[arg(long, default_value_t = labelprop::pipelines::DEFAULT_CONSENSUS_THRESHOLD)]
    pub threshold: f64,
    #[arg(long, default_value_t = labelprop::pipelines::DEFAULT_CONSENSUS_ROUNDS)]
    pub max_rounds: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct HierarchyArgs {
    pub graph: PathBuf,
    #[command(flatten)]
    pub rule: RuleArgs,
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Rerun propagation inside every group, top-down.
    #[arg(long)]
    pub refine: bool,
    /// Directory receiving level_<t>.tsv files and index.tsv.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["copra_nu", "copra_rho", "memory"])))]
pub struct OverlapArgs {
    pub graph: PathBuf,
    /// At most this many groups per node.
    #[arg(long)]
    pub copra_nu: Option<usize>,
    /// Keep affiliations of at least this fraction of the node's largest.
    #[arg(long)]
    pub copra_rho: Option<f64>,
    /// Memory-based propagation with T iterations and frequency threshold R.
    #[arg(long, num_args = 2, value_names = ["T", "R"])]
    pub memory: Option<Vec<String>>,
    #[arg(long, default_value_t = labelprop::engine::DEFAULT_MAX_ITERS)]
    pub max_iters: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["two_step", "cocitation", "bibcoupling"])))]
pub struct EquivalenceArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub two_step: bool,
    #[arg(long)]
    pub cocitation: bool,
    #[arg(long)]
    pub bibcoupling: bool,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub kind: GenerateKind,
    /// Edge list file; stdout when omitted.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    /// Ground truth (partition or cover TSV) for planted and cliques.
    #[arg(long, global = true)]
    pub truth: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum GenerateKind {
    /// Uniform random graph.
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: f64,
    },
    /// Equal-size groups with mixing parameter mu.
    Planted {
        #[arg(long, default_value_t = 128)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        groups: usize,
        #[arg(long, default_value_t = 16.0)]
        degree: f64,
        #[arg(long)]
        mu: f64,
    },
    /// Triangular lattice, optionally with edges removed.
    Grid {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        /// Edge to drop, as `u-v`; repeatable.
        #[arg(long, value_parser = parse_pair)]
        remove: Vec<(usize, usize)>,
    },
    /// Two k-cliques sharing s nodes.
    Cliques {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        shared: usize,
    },
    /// Zachary's karate club.
    Karate,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once('-')
        .ok_or_else(|| format!("expected u-v, got '{s}'"))?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("'{x}': {e}"));
    Ok((parse(a)?, parse(b)?))
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("what").required(true).args(["nmi", "partition"])))]
pub struct EvalArgs {
    /// Print NMI between a reference and a result partition.
    #[arg(long, num_args = 2, value_names = ["REF", "OUT"], conflicts_with_all = ["partition", "graph"])]
    pub nmi: Option<Vec<PathBuf>>,
    /// Partition to evaluate; objectives need --graph.
    #[arg(long)]
    pub partition: Option<PathBuf>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub lambda1: Option<f64>,
    #[arg(long)]
    pub lambda2: Option<f64>,
    #[arg(long)]
    pub lambda3: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    /// Mean NMI against planted truth per mixing value.
    Mu,
    /// Mean iterations per graph size.
    Size,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Standard,
    Defensive,
    /// Defensive runs refined by offensive ones (a single offensive run in size sweeps).
    Offensive,
    Balanced,
    /// Mu sweeps only.
    Consensus,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[arg(long, value_enum)]
    pub sweep: SweepKind,
    /// Nodes per graph (mu sweep).
    #[arg(long, default_value_t = 128)]
    pub n: usize,
    /// Group count (mu sweep).
    #[arg(long, default_value_t = 4)]
    pub groups: usize,
    #[arg(long, default_value_t = 16.0)]
    pub degree: f64,
    /// Mixing values; defaults to 0, 0.05, ..., 0.5.
    #[arg(long, value_delimiter = ',')]
    pub mus: Vec<f64>,
    /// Mixing value of size sweeps.
    #[arg(long, default_value_t = 0.1)]
    pub mu: f64,
    /// Node counts (size sweep).
    #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
    pub sizes: Vec<usize>,
    /// Nodes per group (size sweep).
    #[arg(long, default_value_t = 100)]
    pub group_size: usize,
    #[arg(long, default_value_t = 25)]
    pub runs: usize,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "standard,defensive,offensive,balanced"
    )]
    pub methods: Vec<Method>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}
