use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fairdiv::arith::parse_value;
use fairdiv::generators::ValueModel;
use fairdiv::model::Criterion;
use fairdiv::{Rational, Value};

#[derive(Parser, Debug)]
#[command(name = "fairdiv", version, about = "Fair allocation of indivisible goods with exact verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run an allocation algorithm on an instance file.
    Allocate(AllocateArgs),
    /// Compute exact fairness ratios of an allocation.
    Check(CheckArgs),
    /// Maximin share of one agent, with a defining partition.
    Shares(SharesArgs),
    /// Write instances (and allocations where applicable).
    #[command(subcommand)]
    Gen(GenCommand),
    /// Allocate and check seeded random batches against exact bounds.
    Stress(StressArgs),
    /// Recompute the worked example and the guarantee matrix.
    Reproduce(ReproduceArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgoName {
    DraftEliminate,
    FewGoods,
    RoundRobin,
    Ece,
}

impl fmt::Display for AlgoName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

impl FromStr for AlgoName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, false)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphName {
    Standard,
    Adjusted,
}

impl fmt::Display for GraphName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

impl FromStr for GraphName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, false)
    }
}

fn value_arg(s: &str) -> Result<Value, String> {
    parse_value(s).ok_or_else(|| format!("expected phi, a named constant or p/q, got {s:?}"))
}

#[derive(Clone, Debug)]
pub struct RationalArg(pub Rational);

fn rational_arg(s: &str) -> Result<RationalArg, String> {
    match parse_value(s) {
        Some(v) if v.is_rational() => Ok(RationalArg(v.rat_part().clone())),
        _ => Err(format!("expected a rational p/q, got {s:?}")),
    }
}

#[derive(Clone, Debug)]
pub struct ModelArg(pub ValueModel);

fn model_arg(s: &str) -> Result<ModelArg, String> {
    let (kind, rest) = s.split_once(':').ok_or("expected int:MAX, rat:MAX_DEN or few:V1,V2,...")?;
    let model = match kind {
        "int" => ValueModel::UniformInteger(rest.parse().map_err(|_| format!("bad max {rest:?}"))?),
        "rat" => ValueModel::UniformRational(rest.parse().map_err(|_| format!("bad max_den {rest:?}"))?),
        "few" => ValueModel::FewDistinct(
            rest.split(',')
                .map(|v| rational_arg(v).map(|r| r.0))
                .collect::<Result<_, _>>()?,
        ),
        _ => return Err(format!("unknown value model {kind:?}")),
    };
    Ok(ModelArg(model))
}

#[derive(Clone, Debug)]
pub struct BoundArg(pub Criterion, pub Value);

fn bound_arg(s: &str) -> Result<BoundArg, String> {
    let (c, v) = s.split_once(">=").ok_or("expected CRITERION>=BOUND, e.g. efx>=phi-1")?;
    let criterion: Criterion = c.trim().parse().map_err(|e| format!("{e}"))?;
    Ok(BoundArg(criterion, value_arg(v)?))
}

fn criterion_arg(s: &str) -> Result<Criterion, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Args, Debug)]
pub struct AllocateArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = AlgoName::DraftEliminate)]
    pub algo: AlgoName,
    /// Preprocessing threshold: phi, 3/2 or any p/q > 1.
    #[arg(long, value_parser = value_arg, default_value = "phi")]
    pub theta: Value,
    #[arg(long, value_enum, default_value_t = GraphName::Standard)]
    pub envy_graph: GraphName,
    /// Write the allocation here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub allocation: PathBuf,
    /// Comma-separated subset of ef,ef1,efx,mms,pmms,gmms (default: all).
    #[arg(long, value_delimiter = ',', value_parser = criterion_arg)]
    pub criteria: Vec<Criterion>,
    /// Exit 1 unless the bounds proven for the configuration named in the
    /// allocation's provenance header hold.
    #[arg(long)]
    pub assert_guarantees: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct SharesArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Agent index (0-based).
    #[arg(long)]
    pub agent: usize,
    /// Number of parts (default: number of agents).
    #[arg(long)]
    pub parts: Option<usize>,
    /// Comma-separated good labels (default: all goods).
    #[arg(long, value_delimiter = ',')]
    pub goods: Option<Vec<String>>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    A,
    APrime,
}

impl Variant {
    pub fn is_prime(self) -> bool {
        self == Variant::APrime
    }
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// Seeded random instance.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// int:MAX, rat:MAX_DEN or few:V1,V2,...
        #[arg(long, value_parser = model_arg, default_value = "int:20")]
        model: ModelArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The 3-agent, 5-good worked example.
    AppendixA {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        allocation_out: Option<PathBuf>,
        /// Which of the two discussed allocations to write.
        #[arg(long, value_enum, default_value_t = Variant::A)]
        variant: Variant,
    },
    /// Adversarial family with its prescribed allocation.
    Adversarial {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_parser = rational_arg)]
        alpha: RationalArg,
        #[arg(long, value_parser = rational_arg)]
        beta: RationalArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        allocation_out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct StressArgs {
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    #[arg(long, default_value_t = 5)]
    pub n_max: usize,
    /// Default 2, or n-1 for few-goods.
    #[arg(long)]
    pub m_min: Option<usize>,
    /// Default 10, or n+2 for few-goods.
    #[arg(long)]
    pub m_max: Option<usize>,
    #[arg(long, value_parser = model_arg, default_value = "int:20")]
    pub model: ModelArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = AlgoName::DraftEliminate)]
    pub algo: AlgoName,
    #[arg(long, value_parser = value_arg, default_value = "phi")]
    pub theta: Value,
    #[arg(long, value_enum, default_value_t = GraphName::Standard)]
    pub envy_graph: GraphName,
    /// CRITERION>=BOUND, repeatable (default: the configuration's proven bounds).
    #[arg(long = "assert", value_parser = bound_arg)]
    pub asserts: Vec<BoundArg>,
    /// Where a violating instance is written.
    #[arg(long, default_value = "counterexample.json")]
    pub counterexample_out: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    #[arg(long, default_value_t = fairdiv::reproduce::DEFAULT_TRIALS)]
    pub trials: u64,
    #[arg(long, default_value_t = fairdiv::reproduce::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}
