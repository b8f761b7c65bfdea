use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "lcaforge", version, about = "Hard instances and experiments for non-adaptive LCAs")]
pub struct Cli {
    /// Seed for every random choice; required by stochastic commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub workers: Option<usize>,
    /// Output file, written atomically (default: stdout).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeArg {
    Desk,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExecutorArg {
    Positional,
    RandomNeighbor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StatisticArg {
    Full,
    /// Cut each sequence at the first dummy-sized degree.
    Prefix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    Edge,
    Vertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleArg {
    IncludeAll,
    LocalMinimumExclusion,
    DegreeDominance,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BlueprintArgs {
    /// Target approximation constant, e.g. 0.9 or 9/10.
    #[arg(long, default_value = "0.9")]
    pub c: String,
    #[arg(long)]
    pub r: u32,
    #[arg(long)]
    pub delta: u64,
    /// Root cluster size (default: smallest feasible).
    #[arg(long)]
    pub n0: Option<u64>,
    /// Override the derived query budget κ.
    #[arg(long)]
    pub kappa: Option<u64>,
    #[arg(long, value_enum, default_value = "desk")]
    pub regime: RegimeArg,
    /// Drop the main matching (the vertex-cover distribution).
    #[arg(long)]
    pub no_main_matching: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SamplerArgs {
    /// Switch steps per block, as a multiple of `m ln m`.
    #[arg(long, default_value_t = 10.0)]
    pub mixing_factor: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PlanArgs {
    /// `walk:L`, `ball:R`, `ball:R:W` or `file:PATH`.
    #[arg(long)]
    pub plan: String,
    #[arg(long, value_enum, default_value = "edge")]
    pub prompt_kind: KindArg,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Print the cluster tree as JSON.
    Tree {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        delta: u64,
    },
    /// Print the blueprint (clusters, sizes, labels) as JSON.
    Blueprint {
        #[command(flatten)]
        bp: BlueprintArgs,
    },
    /// Sample an instance and save it in the binary graph format.
    Gen {
        #[command(flatten)]
        bp: BlueprintArgs,
        #[command(flatten)]
        sampler: SamplerArgs,
        /// Also write the edge list with cluster labels as JSON.
        #[arg(long)]
        edge_list: Option<PathBuf>,
    },
    /// Run a plan from one prompt of a saved instance.
    Explore {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        plan: PlanArgs,
        /// `u,v` for an edge prompt, `v` for a vertex prompt.
        #[arg(long)]
        prompt: String,
        #[arg(long)]
        reveal_ids: bool,
        #[arg(long, value_enum, default_value = "positional")]
        executor: ExecutorArg,
    },
    /// Coupled walks from the significant and misleading edges.
    Couple {
        #[command(flatten)]
        bp: BlueprintArgs,
        #[arg(long)]
        length: u32,
        #[arg(long)]
        back_steps: bool,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        /// Also compute the exact failure distribution.
        #[arg(long)]
        exact: bool,
    },
    /// Total variation between the degree sequences seen from the two
    /// edge classes, plus classifier accuracies.
    Tv {
        #[command(flatten)]
        bp: BlueprintArgs,
        #[command(flatten)]
        sampler: SamplerArgs,
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Number of fixed instances to cycle through.
        #[arg(long, default_value_t = 1)]
        instances: u64,
        /// Use a fresh instance every this many trials instead.
        #[arg(long)]
        fresh_batch: Option<u64>,
        #[arg(long, value_enum, default_value = "positional")]
        executor: ExecutorArg,
        #[arg(long, value_enum, default_value = "full")]
        statistic: StatisticArg,
        #[arg(long, default_value_t = 200)]
        bootstrap: usize,
        #[arg(long, default_value_t = 20)]
        permutations: usize,
    },
    /// Non-tree exploration rate across root-cluster sizes.
    Cycles {
        #[command(flatten)]
        bp: BlueprintArgs,
        #[command(flatten)]
        sampler: SamplerArgs,
        #[command(flatten)]
        plan: PlanArgs,
        /// Comma-separated root sizes.
        #[arg(long, value_delimiter = ',')]
        n0_grid: Vec<u64>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 4)]
        instances: u64,
        #[arg(long, value_enum, default_value = "positional")]
        executor: ExecutorArg,
    },
    /// Inclusion probabilities of a vertex-cover rule on adjacent pairs
    /// between the two root-level sets (always without main matching).
    Xprob {
        #[command(flatten)]
        bp: BlueprintArgs,
        #[command(flatten)]
        sampler: SamplerArgs,
        #[arg(long, value_enum)]
        rule: RuleArg,
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        #[arg(long, default_value_t = 2_000)]
        trials: u64,
    },
    /// The distinguishing experiment on the line graph.
    Mis {
        #[command(flatten)]
        bp: BlueprintArgs,
        #[command(flatten)]
        sampler: SamplerArgs,
        /// `walk:L`, `ball:R` or `ball:R:W` (vertex prompts).
        #[arg(long)]
        plan: String,
        #[arg(long, default_value_t = 2_000)]
        trials: u64,
        #[arg(long, value_enum, default_value = "positional")]
        executor: ExecutorArg,
        #[arg(long, value_enum, default_value = "full")]
        statistic: StatisticArg,
    },
    /// Simulate the sparsify-and-cover MPC matching algorithm.
    Mpc {
        /// A saved instance; alternatively use --er.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// `n,avg_degree` for an Erdős–Rényi graph.
        #[arg(long)]
        er: Option<String>,
        #[arg(long, default_value = "1/2")]
        mem_exp: String,
        #[arg(long, default_value = "1/10")]
        eps: String,
        #[arg(long, default_value_t = 16)]
        lca_depth: u32,
        /// Replace the `log² n` switch to the terminal step.
        #[arg(long)]
        terminal_threshold: Option<f64>,
        /// Also compute the maximum matching for the approximation ratio.
        #[arg(long)]
        exact: bool,
    },
    /// Residual edges after removing a cover of an edge sample.
    Residual {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        er: Option<String>,
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Check every structural property exhaustively.
    Verify {
        #[arg(long, default_value_t = 0)]
        r_min: u32,
        #[arg(long, default_value_t = 4)]
        r_max: u32,
        #[arg(long, default_value_t = 3)]
        delta_min: u64,
        #[arg(long, default_value_t = 8)]
        delta_max: u64,
        #[arg(long, default_value = "0.9")]
        c: String,
        /// `r,delta,cluster,exp`: overwrite one upward label first.
        #[arg(long)]
        mutate: Option<String>,
        /// Also sweep label sequences up to this length (r ≤ 3 only).
        #[arg(long)]
        critical_len: Option<usize>,
    },
}
