use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Executable coarse geometry of groups: word-metric windows, Rips
/// complexes, certified r-homotopy contraction and friends.
///
/// Every command prints (or writes with --out) a JSON report. Exit codes:
/// 0 positive verdict, 1 negative verdict, 2 usage or input error, 3
/// resource cap hit or inconclusive.
#[derive(Debug, Parser)]
#[command(name = "coarse-geom", version)]
pub struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Write a Graphviz artifact here, when the command has one.
    #[arg(long, global = true, value_name = "PATH")]
    pub dot: Option<PathBuf>,
    /// Write a CSV artifact here, when the command has one.
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// key=value file with resource caps (max_ball_size, max_search_nodes,
    /// max_loop_length). COARSE_GEOM_MAX_* variables override it.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Vertices, edges, triangles and components of R_t(X).
    Rips(RipsArgs),
    /// Contract a based loop at a given scale.
    Contract(ContractArgs),
    /// Contract every based r-loop up to a length cap.
    ScProbe(ScProbeArgs),
    /// Test whether the triangle relations present the group.
    CheckDefining(CheckDefiningArgs),
    /// Generators of a finite-index subgroup and rewriting into them.
    MsGenerators(MsArgs),
    /// Contract the full loop of a circle and compare with the 3r law.
    CircleBound(CircleBoundArgs),
    /// Covering checks, homotopy lifting and the injectivity argument.
    Covering(CoveringArgs),
    /// Transfer of coarse constants along a quasi-isometry.
    QiTransfer(QiArgs),
    /// Filtration of a normal subgroup by the closures of N ∩ B_n.
    Filtration(FiltrationArgs),
    /// Run a named scenario.
    Scenario(ScenarioArgs),
    /// Re-verify every certificate in a report.
    Verify(VerifyArgs),
}

/// Where the metric space comes from. Exactly one source is used, in the
/// order --space, --circle, --bridged, --family.
#[derive(Debug, Clone, Args)]
pub struct SpaceArgs {
    /// Space JSON file (points, basepoint, distances).
    #[arg(long, value_name = "PATH")]
    pub space: Option<PathBuf>,
    /// Circle of this circumference.
    #[arg(long, value_name = "R")]
    pub circle: Option<String>,
    /// Number of points on the circle (default: the circumference).
    #[arg(long)]
    pub points: Option<usize>,
    /// Circles of these circumferences bridged to a hub, e.g. 6,9,12,15.
    #[arg(long, value_delimiter = ',')]
    pub bridged: Option<Vec<usize>>,
    /// Group family: line, free-abelian:d, free:k, heisenberg, cyclic:m,
    /// cyclic-quotient:m, a JSON object, or @file.json.
    #[arg(long)]
    pub family: Option<String>,
    /// Generators separated by ';' (symmetrized), or factorial:m.
    /// Default: the family's standard generators.
    #[arg(long)]
    pub gens: Option<String>,
    /// Window radius.
    #[arg(long, default_value_t = 4)]
    pub radius: usize,
}

#[derive(Debug, Args)]
pub struct RipsArgs {
    #[command(flatten)]
    pub source: SpaceArgs,
    #[arg(long, default_value = "1")]
    pub scale: String,
    /// Include the full vertex, edge and triangle lists.
    #[arg(long)]
    pub full: bool,
}

#[derive(Debug, Args)]
pub struct ContractArgs {
    #[command(flatten)]
    pub source: SpaceArgs,
    /// Whitespace-separated point labels; defaults to the full loop on a circle.
    #[arg(long = "loop", value_name = "LABELS")]
    pub loop_labels: Option<String>,
    /// Contraction scale r'.
    #[arg(long, default_value = "1")]
    pub scale: String,
    #[arg(long)]
    pub budget_nodes: Option<usize>,
    /// Also read off and verify a filling decomposition in R_{r'}.
    #[arg(long)]
    pub filling: bool,
}

#[derive(Debug, Args)]
pub struct ScProbeArgs {
    #[command(flatten)]
    pub source: SpaceArgs,
    /// Step bound r of the enumerated loops.
    #[arg(long, default_value = "1")]
    pub r: String,
    /// Contraction scale r'.
    #[arg(long, default_value = "1")]
    pub scale: String,
    #[arg(long, default_value_t = 8)]
    pub cap_loops: usize,
    #[arg(long)]
    pub budget_nodes: Option<usize>,
    /// Enumerate every loop instead of the irreducible ones.
    #[arg(long)]
    pub all: bool,
    /// Verify a filling for every contraction.
    #[arg(long)]
    pub fillings: bool,
    /// Keep certificates of this many contracted loops.
    #[arg(long, default_value_t = 0)]
    pub keep: usize,
}

#[derive(Debug, Args)]
pub struct CheckDefiningArgs {
    #[arg(long, default_value = "free-abelian:2")]
    pub family: String,
    /// Elements separated by ';', `factorial:m`, or `power:n` for all
    /// products of at most n standard generators.
    #[arg(long, default_value = "power:2")]
    pub gens: String,
    #[arg(long, default_value_t = 4)]
    pub cap_loops: usize,
}

#[derive(Debug, Clone, Args)]
pub struct MsArgs {
    #[arg(long, default_value = "free:2")]
    pub family: String,
    #[arg(long)]
    pub gens: Option<String>,
    /// Finite target group of φ; the subgroup is ker φ.
    #[arg(long, default_value = "cyclic:2")]
    pub target: String,
    /// Images of the family's basis under φ, separated by ';'.
    #[arg(long, default_value = "1;1")]
    pub images: String,
    /// Coset representatives separated by ';', identity first. Default:
    /// the first element of each coset in breadth-first order.
    #[arg(long)]
    pub transversal: Option<String>,
    /// Random subgroup words to rewrite.
    #[arg(long, default_value_t = 100)]
    pub words: usize,
    #[arg(long, default_value_t = 12)]
    pub max_len: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CircleBoundArgs {
    #[arg(long, default_value = "9")]
    pub circumference: String,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, default_value = "3")]
    pub scale: String,
    #[arg(long, default_value_t = 1)]
    pub turns: i64,
    #[arg(long)]
    pub budget_nodes: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CoveringArgs {
    /// Radius of the line window upstairs.
    #[arg(long, default_value_t = 14)]
    pub radius: usize,
    /// The map is reduction mod this modulus.
    #[arg(long, default_value_t = 10)]
    pub modulus: u32,
    /// Scale of the covering check.
    #[arg(long, default_value = "2")]
    pub scale: String,
    /// Run the injectivity argument with loops at scale r (and R = --big-r).
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long = "big-r", value_name = "R")]
    pub big_r: Option<String>,
    /// Contract this downstairs loop (residues, whitespace separated) at
    /// --scale and lift the contraction from 0.
    #[arg(long = "lift", value_name = "LOOP")]
    pub lift: Option<String>,
    #[arg(long)]
    pub budget_nodes: Option<usize>,
}

#[derive(Debug, Args)]
pub struct QiArgs {
    #[arg(long = "A", default_value = "1")]
    pub a: String,
    #[arg(long = "B", default_value = "0")]
    pub b: String,
    #[arg(long, default_value = "1")]
    pub alpha: String,
    #[arg(long, default_value = "0")]
    pub beta: String,
    #[arg(long = "C", default_value = "0")]
    pub c: String,
    #[arg(long, default_value = "0")]
    pub gamma: String,
    #[arg(long, default_value = "1")]
    pub r: String,
    #[arg(long = "R")]
    pub big_r: Option<String>,
    #[arg(long)]
    pub rho: Option<String>,
    /// Validate this certificate and use its constants.
    #[arg(long, value_name = "PATH")]
    pub cert: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FiltrationArgs {
    #[arg(long, default_value = "heisenberg")]
    pub family: String,
    #[arg(long)]
    pub gens: Option<String>,
    /// N is the kernel of φ into this family.
    #[arg(long, default_value = "free-abelian:2")]
    pub target: String,
    #[arg(long, default_value = "(1,0);(0,1);(0,0)")]
    pub images: String,
    #[arg(long, default_value_t = 6)]
    pub radius: usize,
    #[arg(long)]
    pub max_n: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioName {
    #[value(name = "circle-3r")]
    Circle3r,
    FactorialZ,
    Z2Rips,
    FreeTree,
    SchreierF2,
    HeisenbergExtension,
    CoveringZ10,
    QiTransfer,
    FiltrationHeisenberg,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    pub name: ScenarioName,
    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(long)]
    pub cap_loops: Option<usize>,
    #[arg(long)]
    pub scale: Option<String>,
    #[arg(long)]
    pub budget_nodes: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// A report written by this tool.
    pub report: PathBuf,
}
