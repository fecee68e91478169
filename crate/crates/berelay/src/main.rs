//! Command-line front end for the bandwidth-exchange relaying toolkit.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use berelay::matching::{blossom_mwm, enumerate_mwm, greedy_local_mwm, Matching, WeightedGraph};
use berelay::pairsolver::{
    solve_alpha_fair, solve_maxmin, solve_minrate_feasible, PairProblem, DEFAULT_TOL,
};
use berelay::simharness::{
    csv_text, emit_csv, run_experiment, sweep_rows_csv, sweep_three_node, Experiment,
    ExperimentConfig, ExperimentSummary, Mode, SWEEP_CSV_HEADER,
};
use berelay::{Error, Result};

#[derive(Parser)]
#[command(
    name = "berelay",
    version,
    about = "Bandwidth-exchange relaying: pairwise allocation, relay selection \
             and Monte-Carlo experiments"
)]
struct Cli {
    /// key = value configuration file layered over the experiment defaults
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Master seed override
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Trial-count override
    #[arg(long, global = true)]
    trials: Option<usize>,

    /// Directory for CSV output; without it results go to stdout
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Comma-separated mode subset: direct,centralized,distributed
    #[arg(long, global = true, value_name = "MODES")]
    mode: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Deterministic sender-distance sweep of the sender/forwarder/AP
    /// scenario (direct vs sum-rate BE vs max-min BE)
    ThreeNode {
        /// Forwarder-to-AP distance, meters
        #[arg(long, default_value_t = 150.0)]
        forwarder_distance: f64,
        /// Smallest sender-to-AP distance, meters
        #[arg(long, default_value_t = 200.0)]
        min_distance: f64,
        /// Largest sender-to-AP distance, meters
        #[arg(long, default_value_t = 800.0)]
        max_distance: f64,
        /// Sweep step, meters
        #[arg(long, default_value_t = 25.0)]
        step: f64,
    },
    /// Monte-Carlo spectral-efficiency comparison across node counts
    Spectral {
        /// Comma-separated node counts (default sweep: 4,8,12,16,20)
        #[arg(long, value_name = "LIST")]
        n_nodes: Option<String>,
    },
    /// Monte-Carlo outage-probability comparison across node counts
    Outage {
        /// Comma-separated node counts (default sweep: 4,8,12,16,20)
        #[arg(long, value_name = "LIST")]
        n_nodes: Option<String>,
        /// Outage rate threshold, Mbps (calibrated from a pilot run when
        /// omitted)
        #[arg(long)]
        r_min: Option<f64>,
    },
    /// Solve one sender-forwarder allocation and print it
    SolvePair {
        #[arg(long)]
        w_s: f64,
        #[arg(long)]
        w_f: f64,
        /// Per-node transmit power, mW
        #[arg(long)]
        power: f64,
        /// Sender-to-AP link gain, MHz/mW
        #[arg(long)]
        rho_s0: f64,
        /// Forwarder-to-AP link gain, MHz/mW
        #[arg(long)]
        rho_f0: f64,
        /// Sender-to-forwarder link gain, MHz/mW
        #[arg(long)]
        rho_sf: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = Objective::AlphaFair)]
        objective: Objective,
        /// Minimum rate floor for the minrate objective, Mbps
        #[arg(long, default_value_t = 0.0)]
        r_min: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Match an edge-list file (`u v weight` per line) and print the result
    Match {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Algorithm::Blossom)]
        algorithm: Algorithm,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Objective {
    AlphaFair,
    Maxmin,
    Minrate,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Blossom,
    Greedy,
    Enumerate,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::ThreeNode {
            forwarder_distance,
            min_distance,
            max_distance,
            step,
        } => three_node(&cli, *forwarder_distance, *min_distance, *max_distance, *step),
        Command::Spectral { n_nodes } => {
            monte_carlo(&cli, Experiment::NNodeSpectral, n_nodes.as_deref(), None)
        }
        Command::Outage { n_nodes, r_min } => {
            monte_carlo(&cli, Experiment::NNodeOutage, n_nodes.as_deref(), *r_min)
        }
        Command::SolvePair {
            w_s,
            w_f,
            power,
            rho_s0,
            rho_f0,
            rho_sf,
            alpha,
            objective,
            r_min,
            tol,
        } => solve_pair(
            *w_s, *w_f, *power, *rho_s0, *rho_f0, *rho_sf, *alpha, *objective, *r_min, *tol,
        ),
        Command::Match { file, algorithm } => match_file(file, *algorithm),
    }
}

/// Defaults for the subcommand's experiment, then the config file, then the
/// global flag overrides.
fn load_config(cli: &Cli, experiment: Experiment) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig::defaults(experiment);
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        config = ExperimentConfig::parse(&text, config)?;
        config.experiment = experiment;
    }
    if let Some(seed) = cli.seed {
        config.master_seed = seed;
    }
    if let Some(trials) = cli.trials {
        config.trials = trials;
    }
    if let Some(modes) = &cli.mode {
        config.apply("modes", modes)?;
    }
    config.validate()?;
    Ok(config)
}

fn three_node(
    cli: &Cli,
    forwarder_distance: f64,
    min_distance: f64,
    max_distance: f64,
    step: f64,
) -> Result<()> {
    if !(step > 0.0) || max_distance < min_distance {
        return Err(Error::InvalidArgument(
            "need step > 0 and max_distance >= min_distance".into(),
        ));
    }
    let config = load_config(cli, Experiment::ThreeNodeSweep)?;
    let mut distances = Vec::new();
    let mut d = min_distance;
    while d <= max_distance + 1e-9 {
        distances.push(d);
        d += step;
    }
    let rows = sweep_three_node(&config, forwarder_distance, &distances)?;
    let csv_rows = sweep_rows_csv(&rows);
    match &cli.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            let path = dir.join("three_node.csv");
            emit_csv(&path, &SWEEP_CSV_HEADER, &csv_rows)?;
            println!("wrote {}", path.display());
        }
        None => print!("{}", csv_text(&SWEEP_CSV_HEADER, &csv_rows)),
    }
    Ok(())
}

fn parse_n_list(list: Option<&str>, has_config: bool, configured: usize) -> Result<Vec<usize>> {
    match list {
        Some(text) => text
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("bad node count {part:?}")))
            })
            .collect(),
        None if has_config => Ok(vec![configured]),
        None => Ok(vec![4, 8, 12, 16, 20]),
    }
}

fn monte_carlo(
    cli: &Cli,
    experiment: Experiment,
    n_list: Option<&str>,
    r_min: Option<f64>,
) -> Result<()> {
    let mut config = load_config(cli, experiment)?;
    if r_min.is_some() {
        config.r_min_mbps = r_min;
    }
    let n_values = parse_n_list(n_list, cli.config.is_some(), config.n_nodes)?;
    println!(
        "trials = {}, master_seed = {}, modes = {}",
        config.trials,
        config.master_seed,
        config
            .modes
            .iter()
            .map(|m| m.name())
            .collect::<Vec<_>>()
            .join(",")
    );
    for &n in &n_values {
        config.n_nodes = n;
        let out_dir = cli.out.as_ref().map(|dir| {
            if n_values.len() == 1 {
                dir.clone()
            } else {
                dir.join(format!("n{n}"))
            }
        });
        let summary = run_experiment(&config, out_dir.as_deref())?;
        print_summary(n, &summary, experiment);
        if let Some(dir) = out_dir {
            println!("  wrote {}/trials.csv and summary.csv", dir.display());
        }
    }
    Ok(())
}

fn print_summary(n: usize, summary: &ExperimentSummary, experiment: Experiment) {
    if let Some(r_min) = summary.r_min_mbps {
        println!("N = {n}, r_min = {r_min:.4} Mbps");
    } else {
        println!("N = {n}");
    }
    for m in &summary.modes {
        let mut line = format!(
            "  {:<12} spectral efficiency {:.4} \u{00b1} {:.4} bps/Hz",
            m.mode.name(),
            m.spectral_efficiency.mean,
            m.spectral_efficiency.std_error
        );
        if let Some(gain) = m.spectral_gain_pct {
            line.push_str(&format!(", gain {gain:.2}%"));
        }
        if experiment == Experiment::NNodeOutage {
            line.push_str(&format!(", outage {:.4}", m.outage_probability.mean));
            if let Some(red) = m.outage_reduction_pct {
                line.push_str(&format!(", reduction {red:.2}%"));
            }
        }
        if m.mode != Mode::Direct {
            line.push_str(&format!(", pairs {:.2}", m.pair_count.mean));
        }
        if m.mode == Mode::Distributed && m.message_count.mean > 0.0 {
            line.push_str(&format!(", messages {:.1}", m.message_count.mean));
        }
        println!("{line}");
    }
}

#[allow(clippy::too_many_arguments)]
fn solve_pair(
    w_s: f64,
    w_f: f64,
    power: f64,
    rho_s0: f64,
    rho_f0: f64,
    rho_sf: f64,
    alpha: f64,
    objective: Objective,
    r_min: f64,
    tol: f64,
) -> Result<()> {
    let problem = PairProblem::new(w_s, w_f, power, rho_s0, rho_f0, rho_sf, alpha)?;
    println!("r_s_in = {} Mbps", problem.r_s_in);
    println!("r_f_in = {} Mbps", problem.r_f_in);
    let allocation = match objective {
        Objective::AlphaFair => solve_alpha_fair(&problem, tol)?,
        Objective::Maxmin => solve_maxmin(&problem, tol)?,
        Objective::Minrate => match solve_minrate_feasible(&problem, r_min, tol)? {
            Some(a) => a,
            None => {
                println!("infeasible: no allocation puts both nodes at {r_min} Mbps");
                return Ok(());
            }
        },
    };
    println!("w_s_be = {} MHz", allocation.w_s_be);
    println!("w_f_be = {} MHz", allocation.w_f_be);
    println!("r_s_be = {} Mbps", allocation.r_s_be);
    println!("r_f_be = {} Mbps", allocation.r_f_be);
    println!("r_c    = {} Mbps", allocation.r_c);
    println!("gain   = {}", allocation.gain);
    Ok(())
}

fn print_matching(matching: &Matching) {
    for &(u, v) in matching.edges() {
        println!("{u} {v}");
    }
    println!("edges = {}", matching.len());
    println!("total_weight = {}", matching.total_weight());
}

fn match_file(path: &PathBuf, algorithm: Algorithm) -> Result<()> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let graph = WeightedGraph::parse(&text)?;
    match algorithm {
        Algorithm::Blossom => print_matching(&blossom_mwm(&graph)),
        Algorithm::Enumerate => print_matching(&enumerate_mwm(&graph)?),
        Algorithm::Greedy => {
            let (matching, trace) = greedy_local_mwm(&graph);
            print_matching(&matching);
            println!("messages = {}", trace.len());
            print!("{}", trace.dump());
        }
    }
    Ok(())
}
