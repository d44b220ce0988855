//! `hpc-lab`: generation, reductions, verification, measurement and
//! information-theory checks from the command line.
//!
//! Exit codes: 0 when every CHECK passes, 1 when any fails, 2 on usage or
//! library errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hpc_lab::info_theory::{
    communication_cost, internal_info_cost, verify_facts, FactsConfig, JointTable, NumericMode,
};
use hpc_lab::instances::{chase, sample_hpc, sample_set_int, sample_set_int_with, HpcInstance, PairIntInstance};
use hpc_lab::protocols::tree::{set_int_domain, set_int_input};
use hpc_lab::protocols::{
    measure_eps_solve, run_pair_int_reduction, EnumerationBudget, PairIntMode, PairIntOutcome, ProtocolTree,
};
use hpc_lab::reductions::{
    build_cut_graph, build_mis_graph, build_sfm_oracle, emit_stream, simplify_graph, to_undirected, EdgeStream,
    SubmodularOracle,
};
use hpc_lab::rng::{enumerate, Stream};
use hpc_lab::verifiers::{replay_stream, verify_suite, StoreEverything, VerificationReport};
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Parser, Debug)]
#[command(name = "hpc-lab", version, about = "Hidden-pointer chasing instances, reductions and exact verifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample an instance.
    Generate(GenerateArgs),
    /// Print the pointer trace z_0..z_k (1-based).
    Chase(ChaseArgs),
    /// Build a reduction graph, stream or oracle.
    Reduce {
        #[command(subcommand)]
        target: ReduceTarget,
    },
    /// Run the end-to-end CHECK suite.
    Verify(VerifyArgs),
    /// Exact ε, π_PI success probability and information cost of a Set-Int protocol.
    Measure(MeasureArgs),
    /// Check the information-theory facts on random tables and trees.
    Facts(FactsArgs),
    /// Replay a stream file through the store-everything consumer.
    Replay(ReplayArgs),
}

#[derive(Args, Debug, Clone)]
struct InstanceArgs {
    /// Universe size.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Read the instance from a file instead of sampling it.
    #[arg(long, conflicts_with = "n")]
    instance: Option<PathBuf>,
}

impl InstanceArgs {
    fn load(&self) -> Result<HpcInstance, String> {
        match (&self.instance, self.n) {
            (Some(path), _) => HpcInstance::parse(&read(path)?).map_err(err),
            (None, Some(n)) => sample_hpc(n, self.seed).map_err(err),
            (None, None) => Err("give --n or --instance".into()),
        }
    }
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = Kind::Hpc)]
    kind: Kind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Hpc,
    SetInt,
}

#[derive(Args, Debug)]
struct ChaseArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    #[arg(long)]
    k: usize,
}

#[derive(Subcommand, Debug)]
enum ReduceTarget {
    /// Min s-t cut graph as a stream file.
    Cut(CutArgs),
    /// LFMIS graph as a stream file.
    Mis(ReduceArgs),
    /// Submodular cut oracle over HPC_{3k}; answers `--query` values.
    Sfm(SfmArgs),
}

#[derive(Args, Debug)]
struct ReduceArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum GraphForm {
    Multigraph,
    Simple,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    Directed,
    Undirected,
}

#[derive(Args, Debug)]
struct CutArgs {
    #[command(flatten)]
    base: ReduceArgs,
    #[arg(long, value_enum, default_value_t = GraphForm::Multigraph)]
    form: GraphForm,
    #[arg(long, value_enum, default_value_t = Direction::Directed)]
    direction: Direction,
}

#[derive(Args, Debug)]
struct SfmArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    #[arg(long)]
    k: usize,
    /// A 0/1 mask over U or a comma-separated list of 0-based positions;
    /// `round` closes the current round of queries.
    #[arg(long = "query")]
    queries: Vec<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "instance")]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Number of consecutive seeds to check.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    instance: Option<PathBuf>,
    /// A stream file to compare against the rebuilt reduction.
    #[arg(long, requires = "instance")]
    graph: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum PairMode {
    Enumerate,
    Seeded,
}

#[derive(Args, Debug)]
struct MeasureArgs {
    #[arg(long)]
    n: usize,
    /// Protocol tree file; by default Alice announces the `--reveal` coordinates.
    #[arg(long)]
    tree: Option<PathBuf>,
    /// 1-based coordinates Alice announces, comma separated.
    #[arg(long, value_delimiter = ',')]
    reveal: Vec<usize>,
    #[arg(long, value_enum, default_value_t = PairMode::Enumerate)]
    mode: PairMode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Pair-Int instance `x1 x2 y1 y2` as four bits, for seeded mode.
    #[arg(long, default_value = "1010")]
    pair: String,
    #[arg(long, env = "HPC_LAB_MAX_ENUM_N", default_value_t = 4)]
    max_enum_n: usize,
    #[arg(long, env = "HPC_LAB_MAX_TREE_NODES", default_value_t = 64)]
    max_tree_nodes: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Numeric {
    Rational,
    Float,
}

#[derive(Args, Debug)]
struct FactsArgs {
    #[arg(long, env = "HPC_LAB_TRIALS", default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Numeric::Rational)]
    mode: Numeric,
}

#[derive(Args, Debug)]
struct ReplayArgs {
    /// Stream file written by `reduce cut`.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, env = "HPC_LAB_PASS_LIMIT", default_value_t = 1)]
    passes: usize,
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn read(path: &PathBuf) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn positive(name: &str, v: usize) -> Result<(), String> {
    if v == 0 {
        Err(format!("--{name} must be positive"))
    } else {
        Ok(())
    }
}

/// Returns whether every CHECK passed.
fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Generate(a) => {
            let text = match a.kind {
                Kind::Hpc => sample_hpc(a.n, a.seed).map_err(err)?.to_text(),
                Kind::SetInt => sample_set_int(a.n, a.seed).map_err(err)?.to_text() + "\n",
            };
            emit(&text, &a.out)?;
            Ok(true)
        }
        Command::Chase(a) => {
            let trace = chase(&a.inst.load()?, a.k);
            let z: Vec<String> = trace.z().iter().map(|z| (z + 1).to_string()).collect();
            println!("trace {}", z.join(","));
            println!("{}", trace.to_text());
            Ok(true)
        }
        Command::Reduce { target } => reduce(target),
        Command::Verify(a) => verify(a),
        Command::Measure(a) => measure(a),
        Command::Facts(a) => {
            positive("trials", a.trials)?;
            let cfg = FactsConfig {
                trials: a.trials,
                seed: a.seed,
                mode: match a.mode {
                    Numeric::Rational => NumericMode::Rational,
                    Numeric::Float => NumericMode::Float,
                },
                ..FactsConfig::default()
            };
            let report = verify_facts(&cfg).map_err(err)?;
            print!("{}", report.to_text());
            Ok(report.all_pass())
        }
        Command::Replay(a) => {
            positive("passes", a.passes)?;
            let stream = EdgeStream::parse(&read(&a.graph)?).map_err(err)?;
            let report = replay_stream(&stream, StoreEverything::default(), a.passes).map_err(err)?;
            println!(
                "replay passes={} max_bits={} serialized_bits={}",
                report.passes,
                report.max_bits,
                stream.serialized_bits()
            );
            println!("min_cut {}", report.output);
            Ok(true)
        }
    }
}

fn reduce(target: ReduceTarget) -> Result<bool, String> {
    match target {
        ReduceTarget::Cut(a) => {
            let inst = a.base.inst.load()?;
            let mut g = build_cut_graph(&inst, a.base.k).map_err(err)?;
            if a.form == GraphForm::Simple {
                g = simplify_graph(&g).map_err(err)?;
            }
            if a.direction == Direction::Undirected {
                g = to_undirected(&g).map_err(err)?.graph;
            }
            emit(&emit_stream(&g).map_err(err)?.to_text(), &a.base.out)?;
        }
        ReduceTarget::Mis(a) => {
            let g = build_mis_graph(&a.inst.load()?, a.k).map_err(err)?;
            emit(&emit_stream(&g).map_err(err)?.to_text(), &a.out)?;
        }
        ReduceTarget::Sfm(a) => {
            let mut oracle = build_sfm_oracle(&a.inst.load()?, a.k).map_err(err)?;
            let ground: Vec<String> = oracle.ground_set().iter().map(usize::to_string).collect();
            println!("oracle size={} max_value={} ground={}", oracle.ground_size(), oracle.max_value(), ground.join(","));
            for query in &a.queries {
                if query == "round" {
                    oracle.new_round();
                    continue;
                }
                let value = evaluate_query(&mut oracle, query)?;
                println!("evaluate {query} {value}");
            }
            let rounds: Vec<String> = oracle.stats().rounds.iter().map(u64::to_string).collect();
            println!("stats query_count={} rounds={}", oracle.stats().query_count, rounds.join(","));
        }
    }
    Ok(true)
}

fn evaluate_query(oracle: &mut SubmodularOracle, query: &str) -> Result<String, String> {
    let is_mask = query.len() == oracle.ground_size() && query.chars().all(|c| c == '0' || c == '1');
    let value = if is_mask {
        let mask: Vec<bool> = query.chars().map(|c| c == '1').collect();
        oracle.evaluate_bits(&mask)
    } else {
        let set = query
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|s| s.trim().parse::<usize>().map_err(|e| format!("query {query:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        oracle.evaluate(&set)
    };
    value.map(|v| v.to_string()).map_err(err)
}

fn print_report(report: &VerificationReport, suffix: &str) {
    for c in &report.checks {
        println!("{c}{suffix}");
    }
}

fn verify(a: VerifyArgs) -> Result<bool, String> {
    if let Some(path) = &a.instance {
        let inst = HpcInstance::parse(&read(path)?).map_err(err)?;
        let graph = match &a.graph {
            Some(g) => Some(EdgeStream::parse(&read(g)?).map_err(err)?.to_graph().map_err(err)?),
            None => None,
        };
        let k = match (a.k, &graph) {
            (Some(k), _) => k,
            (None, Some(g)) => g.k(),
            (None, None) => return Err("give --k or --graph".into()),
        };
        let report = verify_suite(&inst, k, graph.as_ref()).map_err(err)?;
        print_report(&report, "");
        return Ok(report.all_pass());
    }
    let n = a.n.ok_or("give --n or --instance")?;
    let k = a.k.ok_or("give --k")?;
    positive("seeds", a.seeds as usize)?;
    let mut all = true;
    for seed in a.seed..a.seed + a.seeds {
        let report = verify_suite(&sample_hpc(n, seed).map_err(err)?, k, None).map_err(err)?;
        print_report(&report, &format!(" seed={seed}"));
        all &= report.all_pass();
    }
    Ok(all)
}

/// D_SI as a table over the integer-coded inputs of a Set-Int protocol.
fn d_si_prior(n: usize) -> Result<JointTable, String> {
    let domain = set_int_domain(n).map_err(err)?;
    let mut probs = vec![BigRational::zero(); domain * domain];
    for w in enumerate(|r| sample_set_int_with(n, r, Stream::Public).expect("n >= 1")) {
        probs[set_int_input(w.value.a()) * domain + set_int_input(w.value.b())] += w.weight;
    }
    JointTable::from_rationals(&[domain, domain], probs).map_err(err)
}

fn measure(a: MeasureArgs) -> Result<bool, String> {
    let budget = EnumerationBudget {
        max_n: a.max_enum_n,
        max_tree_nodes: a.max_tree_nodes,
    };
    let tree = match &a.tree {
        Some(path) => ProtocolTree::parse(&read(path)?).map_err(err)?,
        None => {
            if a.reveal.contains(&0) {
                return Err("--reveal coordinates are 1-based".into());
            }
            let coords: Vec<usize> = a.reveal.iter().map(|c| c - 1).collect();
            ProtocolTree::alice_reveals(a.n, &coords).map_err(err)?
        }
    };
    let report = measure_eps_solve(&tree, a.n, &budget).map_err(err)?;
    println!("measure n={} nodes={} depth={}", a.n, tree.node_count(), tree.depth());
    for t in &report.transcripts {
        let path: String = t.path.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let post: Vec<String> = t.posterior.iter().map(BigRational::to_string).collect();
        println!(
            "transcript path={} probability={} posterior={} tvd={}",
            if path.is_empty() { "-" } else { &path },
            t.probability,
            post.join(","),
            t.tvd
        );
    }
    println!("epsilon {}", report.epsilon);
    if a.n >= 2 {
        let bits: Vec<bool> = a.pair.chars().map(|c| c == '1').collect();
        if bits.len() != 4 || !a.pair.chars().all(|c| c == '0' || c == '1') {
            return Err("--pair takes four bits x1 x2 y1 y2".into());
        }
        let p = PairIntInstance::new(bits[0], bits[1], bits[2], bits[3]).map_err(err)?;
        let mode = match a.mode {
            PairMode::Enumerate => PairIntMode::Enumerate,
            PairMode::Seeded => PairIntMode::Seeded(a.seed),
        };
        match run_pair_int_reduction(&p, a.n, &tree, mode, &budget).map_err(err)? {
            PairIntOutcome::SuccessProbability(s) => println!("pair_int_success {s}"),
            PairIntOutcome::Answer(ans) => println!("pair_int_answer {ans} correct={}", ans == p.k()),
        }
    }
    let ic = internal_info_cost(&tree, &d_si_prior(a.n)?).map_err(err)?;
    println!("ic {ic} ~{:.6}", ic.to_f64());
    println!("cc {}", communication_cost(&tree));
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
