use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde_json::json;

use hebbclique::dynamics::weight_trajectory_from;
use hebbclique::experiments::{error_curve, run_table1, summarize, CurveSpec, ExperimentSpec};
use hebbclique::io::{self, LearnSpec, NoiseParams, RunRecorder, SpecError};
use hebbclique::noise::{reduce_to_channel, total_stimulation_pmf, Pmf};
use hebbclique::{seed, CliqueNetwork, Error, HebbianNetwork, Message, TiePolicy};

/// Noisy consolidated Hebbian networks and clique associative memories.
#[derive(Parser)]
#[command(name = "hebbclique", version)]
struct Cli {
    /// Master seed; overrides the seed stored in a spec file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON spec file.
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Worker threads (changes speed, never results).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce synaptic and interference noise to {p_ins, p_del}.
    Noise {
        /// Also write pmf_signal.csv and pmf_silent.csv into --out.
        #[arg(long)]
        pmf: bool,
    },
    /// Learn a message CSV into a Hebbian network (network.json).
    Learn {
        /// Message CSV, one complete message per row.
        #[arg(long)]
        messages: PathBuf,
    },
    /// Complete partially erased probes with a learned Hebbian network.
    Recall {
        /// Network file written by `learn`.
        #[arg(long)]
        network: PathBuf,
        /// Probe CSV; ERASED or empty fields mark unknown positions.
        #[arg(long)]
        probes: PathBuf,
    },
    /// Binary clique memory.
    #[command(subcommand)]
    Clique(CliqueCommand),
    /// Weight of one connection under a random co-activation schedule.
    Trace {
        /// Increment per co-activation.
        #[arg(long)]
        epsilon: f64,
        /// Number of iterations.
        #[arg(long, default_value_t = 50)]
        iterations: usize,
        /// Probability that both ends are active in an iteration.
        #[arg(long, default_value_t = 0.64)]
        probability: f64,
        /// Starting weight.
        #[arg(long, default_value_t = 0.0)]
        initial: f64,
    },
    /// Learned network against the clique reference (table1.csv).
    Table1,
    /// Retrieval error rate as the clique memory fills (curve.csv).
    Curve,
}

#[derive(Subcommand)]
enum CliqueCommand {
    /// Store a message CSV (clique.json).
    Store {
        #[command(flatten)]
        shape: Shape,
        /// Message CSV, one complete message per row.
        #[arg(long)]
        messages: PathBuf,
    },
    /// Complete partially erased probes.
    Recall {
        /// Network file written by `clique store`.
        #[arg(long)]
        network: PathBuf,
        /// Probe CSV; ERASED or empty fields mark unknown positions.
        #[arg(long)]
        probes: PathBuf,
        /// Bonus added to currently active units.
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// Decoding iterations.
        #[arg(long, default_value_t = 6)]
        iterations: usize,
        /// How equal scores are resolved.
        #[arg(long, value_enum, default_value_t = Tie::Lowest)]
        tie: Tie,
    },
}

#[derive(Args)]
struct Shape {
    /// Number of clusters.
    #[arg(long)]
    clusters: usize,
    /// Units per cluster.
    #[arg(long)]
    cluster_size: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tie {
    Lowest,
    KeepAll,
    Random,
}

enum Failure {
    Spec(String),
    Runtime(String),
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        Failure::Spec(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Param(p) => Failure::Spec(p.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn required<'a, T>(value: &'a Option<T>, flag: &str) -> Result<&'a T, Failure> {
    value
        .as_ref()
        .ok_or_else(|| Failure::Spec(format!("--{flag} is required for this subcommand")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Spec(msg)) => {
            eprintln!("spec error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Noise { pmf } => noise(cli, *pmf),
        Command::Learn { messages } => learn(cli, messages),
        Command::Recall { network, probes } => recall(cli, network, probes),
        Command::Clique(CliqueCommand::Store { shape, messages }) => {
            clique_store(cli, shape, messages)
        }
        Command::Clique(CliqueCommand::Recall {
            network,
            probes,
            gamma,
            iterations,
            tie,
        }) => clique_recall(cli, network, probes, *gamma, *iterations, *tie),
        Command::Trace {
            epsilon,
            iterations,
            probability,
            initial,
        } => trace(cli, *epsilon, *iterations, *probability, *initial),
        Command::Table1 => table1(cli),
        Command::Curve => curve(cli),
    }
}

fn pmf_rows(pmf: &Pmf) -> Vec<(i64, f64)> {
    pmf.iter().collect()
}

fn noise(cli: &Cli, with_pmf: bool) -> Outcome {
    let (params, raw): (NoiseParams, _) = io::parse_spec(required(&cli.spec, "spec")?)?;
    let signal =
        total_stimulation_pmf(&params.synaptic, &params.interference, &params.firing, true)?;
    let silent = total_stimulation_pmf(
        &params.synaptic,
        &params.interference,
        &params.firing,
        false,
    )?;
    let channel = reduce_to_channel(&params.synaptic, &params.interference, &params.firing)?;
    println!(
        "{}",
        json!({ "p_ins": channel.p_ins(), "p_del": channel.p_del() })
    );
    if with_pmf {
        let out = required(&cli.out, "out")?;
        let mut rec = RunRecorder::start(out, "noise", &raw, cli.seed.unwrap_or(0))?;
        rec.write_csv("pmf_signal.csv", &io::PMF_HEADER, &pmf_rows(&signal))?;
        rec.write_csv("pmf_silent.csv", &io::PMF_HEADER, &pmf_rows(&silent))?;
        rec.write(
            "channel.json",
            &json!({ "p_ins": channel.p_ins(), "p_del": channel.p_del() }).to_string(),
        )?;
        rec.finish()?;
    }
    Ok(())
}

fn learn(cli: &Cli, messages: &Path) -> Outcome {
    let (spec, raw): (LearnSpec, _) = io::parse_spec(required(&cli.spec, "spec")?)?;
    let out = required(&cli.out, "out")?;
    let master = cli.seed.unwrap_or(spec.seed);
    let cfg = &spec.config;
    let dataset = io::read_messages(messages, cfg.c, cfg.ell)?;
    let mut net = HebbianNetwork::new(cfg.clone())?;
    let mut rng = seed::stream(master, "learning-noise", &[0]);
    for msg in &dataset {
        net.learn_pattern(msg, spec.n_it, &spec.channel, &mut rng)?;
    }
    let mut rec = RunRecorder::start(out, "learn", &raw, master)?;
    rec.write("network.json", &io::hebbian_to_json(&net))?;
    rec.finish()?;
    Ok(())
}

fn emit_completions(
    cli: &Cli,
    subcommand: &str,
    inputs: serde_json::Value,
    done: &[Message],
) -> Outcome {
    let text = io::messages_to_csv(done);
    match &cli.out {
        Some(out) => {
            let mut rec = RunRecorder::start(out, subcommand, &inputs, cli.seed.unwrap_or(0))?;
            rec.write("completions.csv", &text)?;
            rec.finish()?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn recall(cli: &Cli, network: &Path, probes: &Path) -> Outcome {
    let net = io::hebbian_from_json(&io::read_text(network)?)?;
    let cfg = net.config();
    let probes_in = io::read_messages(probes, cfg.c, cfg.ell)?;
    let done = probes_in
        .iter()
        .map(|p| net.recall(p))
        .collect::<Result<Vec<_>, _>>()?;
    let inputs = json!({ "network": network, "probes": probes });
    emit_completions(cli, "recall", inputs, &done)
}

fn clique_store(cli: &Cli, shape: &Shape, messages: &Path) -> Outcome {
    let out = required(&cli.out, "out")?;
    let mut net = CliqueNetwork::new(shape.clusters, shape.cluster_size)?;
    for msg in io::read_messages(messages, shape.clusters, shape.cluster_size)? {
        net.store(&msg)?;
    }
    let inputs = json!({
        "clusters": shape.clusters,
        "cluster_size": shape.cluster_size,
        "messages": messages,
    });
    let mut rec = RunRecorder::start(out, "clique store", &inputs, cli.seed.unwrap_or(0))?;
    rec.write("clique.json", &io::clique_to_json(&net))?;
    rec.finish()?;
    Ok(())
}

fn clique_recall(
    cli: &Cli,
    network: &Path,
    probes: &Path,
    gamma: f64,
    iterations: usize,
    tie: Tie,
) -> Outcome {
    if !(gamma >= 0.0 && gamma.is_finite()) || iterations == 0 {
        return Err(Failure::Spec(
            "--gamma must be >= 0 and --iterations >= 1".into(),
        ));
    }
    let tie = match tie {
        Tie::Lowest => TiePolicy::LowestIndex,
        Tie::KeepAll => TiePolicy::KeepAll,
        Tie::Random => TiePolicy::SeededRandom {
            seed: cli.seed.unwrap_or(0),
        },
    };
    let net = io::clique_from_json(&io::read_text(network)?)?;
    let probes_in = io::read_messages(probes, net.clusters(), net.cluster_size())?;
    let done = probes_in
        .iter()
        .map(|p| net.retrieve(p, gamma, iterations, &tie))
        .collect::<Result<Vec<_>, _>>()?;
    let inputs = json!({
        "network": network,
        "probes": probes,
        "gamma": gamma,
        "iterations": iterations,
    });
    emit_completions(cli, "clique recall", inputs, &done)
}

fn trace(cli: &Cli, epsilon: f64, iterations: usize, probability: f64, initial: f64) -> Outcome {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Failure::Spec(format!(
            "--epsilon must lie in (0, 1], got {epsilon}"
        )));
    }
    if !(0.0..=1.0).contains(&probability) || !(0.0..=1.0).contains(&initial) {
        return Err(Failure::Spec(
            "--probability and --initial must lie in [0, 1]".into(),
        ));
    }
    let master = cli.seed.unwrap_or(0);
    let mut rng = seed::stream(master, "trace", &[]);
    let schedule: Vec<bool> = (0..iterations)
        .map(|_| rng.random_bool(probability))
        .collect();
    let rows: Vec<(usize, f64, f64)> = weight_trajectory_from(initial, &schedule, epsilon)
        .into_iter()
        .enumerate()
        .map(|(i, (pre, post))| (i + 1, pre, post))
        .collect();
    match &cli.out {
        Some(out) => {
            let inputs = json!({
                "epsilon": epsilon,
                "iterations": iterations,
                "probability": probability,
                "initial": initial,
            });
            let mut rec = RunRecorder::start(out, "trace", &inputs, master)?;
            rec.write_csv("trace.csv", &io::TRACE_HEADER, &rows)?;
            rec.finish()?;
        }
        None => print!("{}", io::csv_string(&io::TRACE_HEADER, &rows)?),
    }
    Ok(())
}

fn table1(cli: &Cli) -> Outcome {
    let (mut specs, raw) = io::parse_spec_list::<ExperimentSpec>(required(&cli.spec, "spec")?)?;
    let out = required(&cli.out, "out")?;
    if let Some(s) = cli.seed {
        specs.iter_mut().for_each(|spec| spec.seed = s);
    }
    let master = specs.first().map_or(0, |s| s.seed);
    let mut rec = RunRecorder::start(out, "table1", &raw, master)?;
    let rows = run_table1(&specs)?;
    rec.write_csv("table1.csv", &io::TABLE1_HEADER, &rows)?;
    rec.write_csv(
        "table1_summary.csv",
        &io::TABLE1_SUMMARY_HEADER,
        &summarize(&specs, &rows),
    )?;
    rec.finish()?;
    Ok(())
}

fn curve(cli: &Cli) -> Outcome {
    let (mut spec, raw): (CurveSpec, _) = io::parse_spec(required(&cli.spec, "spec")?)?;
    let out = required(&cli.out, "out")?;
    if let Some(s) = cli.seed {
        spec.seed = s;
    }
    let mut rec = RunRecorder::start(out, "curve", &raw, spec.seed)?;
    let points = error_curve(&spec)?;
    rec.write_csv("curve.csv", &io::CURVE_HEADER, &points)?;
    rec.finish()?;
    Ok(())
}
