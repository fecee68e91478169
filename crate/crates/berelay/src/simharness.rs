//! Seeded Monte-Carlo experiment runner: three-node rate sweeps, N-node
//! spectral-efficiency comparisons, and the outage-reduction experiment,
//! with key=value config input and CSV output.
//!
//! Every result is a pure function of the configuration, including the
//! master seed: trials derive their own random streams from
//! `(master_seed, trial_index)`, so parallel and serial execution emit
//! byte-identical CSVs.

use std::fmt::Write as _;
use std::path::Path;

use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::netmodel::{
    dbm_to_mw, initial_allocation, mean_gain, place_nodes, sample_rayleigh_gains,
    ChannelRealization, InitialAllocation, NodeState, Point,
};
use crate::pairsolver::{solve_alpha_fair, solve_maxmin, PairProblem};
use crate::protocol::{
    build_cooperation_graph, outage_pairing, outage_probability, select_pairs,
    NetworkAllocation, SelectionMode,
};
use crate::utility::alpha_utility;
use rand::SeedableRng;

/// Quantile of pilot direct rates used when `r_min` is left to calibration.
pub const CALIBRATION_QUANTILE: f64 = 0.3;
/// Trials of the calibration pilot run.
pub const CALIBRATION_TRIALS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    ThreeNodeSweep,
    NNodeSpectral,
    NNodeOutage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fading {
    Deterministic,
    Rayleigh,
}

/// One operating scheme compared by an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mode {
    Direct,
    Centralized,
    Distributed,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Direct => "direct",
            Mode::Centralized => "centralized",
            Mode::Distributed => "distributed",
        }
    }
}

/// Full parameterization of one experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n_nodes: usize,
    pub cell_radius_m: f64,
    pub power_dbm: f64,
    pub bandwidth_per_node_mhz: f64,
    pub alpha: f64,
    /// Pathloss proportionality constant, MHz·m³/mW.
    pub k_const: f64,
    pub pathloss_exp: f64,
    pub fading: Fading,
    /// Talk radius of the distributed protocol, meters.
    pub neighbor_radius_m: f64,
    pub modes: Vec<Mode>,
    /// Outage threshold; `None` lets [`run_experiment`] calibrate one.
    pub r_min_mbps: Option<f64>,
    pub trials: usize,
    pub master_seed: u64,
    pub solver_tol: f64,
    pub initial_allocation_mode: InitialAllocation,
}

impl ExperimentConfig {
    /// Reference constants: 800 m cell, 20 dBm, 1 MHz per node, k = 6e6,
    /// cubic pathloss, Rayleigh fading, 500 m talk radius, 500 trials.
    /// The three-node sweep swaps in its own deterministic geometry:
    /// 10 MHz per node and 100 mW (= 20 dBm).
    pub fn defaults(experiment: Experiment) -> Self {
        let three_node = experiment == Experiment::ThreeNodeSweep;
        ExperimentConfig {
            experiment,
            n_nodes: if three_node { 2 } else { 20 },
            cell_radius_m: 800.0,
            power_dbm: 20.0,
            bandwidth_per_node_mhz: if three_node { 10.0 } else { 1.0 },
            alpha: 0.0,
            k_const: 6.0e6,
            pathloss_exp: 3.0,
            fading: if three_node {
                Fading::Deterministic
            } else {
                Fading::Rayleigh
            },
            neighbor_radius_m: 500.0,
            modes: vec![Mode::Direct, Mode::Centralized, Mode::Distributed],
            r_min_mbps: None,
            trials: 500,
            master_seed: 1,
            solver_tol: 1e-6,
            initial_allocation_mode: InitialAllocation::Equal,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("cell_radius_m", self.cell_radius_m),
            ("bandwidth_per_node_mhz", self.bandwidth_per_node_mhz),
            ("k_const", self.k_const),
            ("pathloss_exp", self.pathloss_exp),
            ("neighbor_radius_m", self.neighbor_radius_m),
            ("solver_tol", self.solver_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.power_dbm.is_finite() {
            return Err(Error::Config("power_dbm must be finite".into()));
        }
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(Error::Config(format!(
                "alpha must be finite and nonnegative, got {}",
                self.alpha
            )));
        }
        if self.n_nodes == 0 {
            return Err(Error::Config("n_nodes must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.modes.is_empty() {
            return Err(Error::Config("modes must be nonempty".into()));
        }
        if let Some(r) = self.r_min_mbps {
            if !(r >= 0.0) || !r.is_finite() {
                return Err(Error::Config(format!(
                    "r_min_mbps must be finite and nonnegative, got {r}"
                )));
            }
        }
        Ok(())
    }

    /// Apply one `key = value` override.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Config(format!("key {key}: {what}: {value:?}"));
        macro_rules! num {
            ($t:ty) => {
                value.parse::<$t>().map_err(|_| bad("bad number"))?
            };
        }
        match key {
            "experiment" => {
                self.experiment = match value {
                    "three_node_sweep" => Experiment::ThreeNodeSweep,
                    "n_node_spectral" => Experiment::NNodeSpectral,
                    "n_node_outage" => Experiment::NNodeOutage,
                    _ => return Err(bad("unknown experiment")),
                }
            }
            "n_nodes" => self.n_nodes = num!(usize),
            "cell_radius_m" => self.cell_radius_m = num!(f64),
            "power_dbm" => self.power_dbm = num!(f64),
            "bandwidth_per_node_mhz" => self.bandwidth_per_node_mhz = num!(f64),
            "alpha" => self.alpha = num!(f64),
            "k_const" => self.k_const = num!(f64),
            "pathloss_exp" => self.pathloss_exp = num!(f64),
            "fading" => {
                self.fading = match value {
                    "deterministic" => Fading::Deterministic,
                    "rayleigh" => Fading::Rayleigh,
                    _ => return Err(bad("expected deterministic or rayleigh")),
                }
            }
            "neighbor_radius_m" => self.neighbor_radius_m = num!(f64),
            "modes" => {
                let mut modes = Vec::new();
                for part in value.split(',') {
                    modes.push(match part.trim() {
                        "direct" => Mode::Direct,
                        "centralized" => Mode::Centralized,
                        "distributed" => Mode::Distributed,
                        other => {
                            return Err(bad(&format!("unknown mode {other:?}")));
                        }
                    });
                }
                self.modes = modes;
            }
            "r_min_mbps" => self.r_min_mbps = Some(num!(f64)),
            "trials" => self.trials = num!(usize),
            "master_seed" => self.master_seed = num!(u64),
            "solver_tol" => self.solver_tol = num!(f64),
            "initial_allocation_mode" => {
                self.initial_allocation_mode = match value {
                    "equal" => InitialAllocation::Equal,
                    "direct_optimal" => InitialAllocation::DirectOptimal,
                    _ => return Err(bad("expected equal or direct_optimal")),
                }
            }
            _ => return Err(Error::Config(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Parse `key = value` lines over a base configuration. Blank lines and
    /// `#` comments are ignored; unknown keys are errors.
    pub fn parse(text: &str, base: ExperimentConfig) -> Result<Self> {
        let mut config = base;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected key = value, got {line:?}",
                    lineno + 1
                )));
            };
            config.apply(key.trim(), value.trim())?;
        }
        config.validate()?;
        Ok(config)
    }
}

/// Metrics of one mode inside one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeMetrics {
    pub mode: Mode,
    pub sum_rate: f64,
    pub sum_utility: f64,
    /// `sum_rate / (N · bandwidth_per_node)`, bps/Hz.
    pub spectral_efficiency: f64,
    /// Fraction of nodes below `r_min`; 0 when no threshold is configured.
    pub outage_probability: f64,
    pub pair_count: usize,
    /// Control messages of the distributed protocol; 0 elsewhere.
    pub message_count: usize,
}

/// One Monte-Carlo trial. `wall_time_ms` is informational and deliberately
/// kept out of the CSVs so that repeated runs stay byte-identical.
#[derive(Debug, Clone)]
pub struct TrialReport {
    pub trial: usize,
    pub seed: u64,
    pub metrics: Vec<ModeMetrics>,
    pub wall_time_ms: f64,
}

fn trial_seed(master_seed: u64, trial: usize) -> u64 {
    let mut z = master_seed ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministically generate the deployment and channel of one trial.
pub fn trial_instance(
    config: &ExperimentConfig,
    trial: usize,
) -> Result<(u64, ChannelRealization, Vec<NodeState>)> {
    let seed = trial_seed(config.master_seed, trial);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let n = config.n_nodes;
    let positions = place_nodes(n, config.cell_radius_m, &mut rng);
    let means =
        ChannelRealization::deterministic(&positions, config.k_const, config.pathloss_exp)?;
    let channel = match config.fading {
        Fading::Deterministic => means,
        Fading::Rayleigh => sample_rayleigh_gains(&means, &mut rng),
    };
    let p = dbm_to_mw(config.power_dbm);
    let ap_gains: Vec<f64> = (1..=n).map(|i| channel.ap_gain(i)).collect();
    let w = initial_allocation(
        &ap_gains,
        p,
        config.bandwidth_per_node_mhz * n as f64,
        &config.initial_allocation_mode,
        config.alpha,
    )?;
    let nodes = (1..=n)
        .map(|id| NodeState::new(id, positions[id - 1], w[id - 1], p, channel.ap_gain(id)))
        .collect::<Result<Vec<_>>>()?;
    Ok((seed, channel, nodes))
}

fn metrics_from_rates(
    config: &ExperimentConfig,
    mode: Mode,
    rates: &[f64],
    r_min: f64,
    pair_count: usize,
    message_count: usize,
) -> Result<ModeMetrics> {
    let sum_rate: f64 = rates.iter().sum();
    let sum_utility: f64 = rates.iter().map(|&r| alpha_utility(r, config.alpha)).sum();
    let total_bandwidth = config.bandwidth_per_node_mhz * config.n_nodes as f64;
    Ok(ModeMetrics {
        mode,
        sum_rate,
        sum_utility,
        spectral_efficiency: sum_rate / total_bandwidth,
        outage_probability: outage_probability(rates, r_min)?,
        pair_count,
        message_count,
    })
}

/// Run a single trial of the configured N-node experiment.
pub fn run_trial(config: &ExperimentConfig, trial: usize) -> Result<TrialReport> {
    config.validate()?;
    let start = std::time::Instant::now();
    let (seed, channel, nodes) = trial_instance(config, trial)?;
    let r_in: Vec<f64> = nodes.iter().map(|n| n.r_in).collect();
    let radius = Some(config.neighbor_radius_m);

    let mut metrics = Vec::new();
    match config.experiment {
        Experiment::ThreeNodeSweep => {
            return Err(Error::Config(
                "the three-node sweep is driven by sweep_three_node, not run_trial".into(),
            ));
        }
        Experiment::NNodeSpectral => {
            let r_min = config.r_min_mbps.unwrap_or(0.0);
            // Solved once without a radius limit; the distributed graph is
            // the radius-filtered subgraph of the same solutions.
            let coop = build_cooperation_graph(
                &channel,
                &nodes,
                config.alpha,
                config.solver_tol,
                None,
            )?;
            for &mode in &config.modes {
                metrics.push(match mode {
                    Mode::Direct => metrics_from_rates(config, mode, &r_in, r_min, 0, 0)?,
                    Mode::Centralized => {
                        let (outcome, _) = select_pairs(&coop, SelectionMode::Centralized);
                        let alloc = NetworkAllocation::assemble(&nodes, &outcome, config.alpha);
                        metrics_from_rates(
                            config,
                            mode,
                            &alloc.r_be,
                            r_min,
                            outcome.n_pairs(),
                            0,
                        )?
                    }
                    Mode::Distributed => {
                        let local = coop.restrict_radius(&nodes, radius);
                        let (outcome, trace) = select_pairs(&local, SelectionMode::Distributed);
                        let alloc = NetworkAllocation::assemble(&nodes, &outcome, config.alpha);
                        metrics_from_rates(
                            config,
                            mode,
                            &alloc.r_be,
                            r_min,
                            outcome.n_pairs(),
                            trace.map_or(0, |t| t.len()),
                        )?
                    }
                });
            }
        }
        Experiment::NNodeOutage => {
            let Some(r_min) = config.r_min_mbps else {
                return Err(Error::Config(
                    "r_min_mbps is required for the outage experiment; set it or let \
                     run_experiment calibrate one"
                        .into(),
                ));
            };
            for &mode in &config.modes {
                metrics.push(match mode {
                    Mode::Direct => metrics_from_rates(config, mode, &r_in, r_min, 0, 0)?,
                    Mode::Centralized | Mode::Distributed => {
                        let selection = if mode == Mode::Centralized {
                            SelectionMode::Centralized
                        } else {
                            SelectionMode::Distributed
                        };
                        let out = outage_pairing(&channel, &nodes, r_min, radius, selection)?;
                        metrics_from_rates(
                            config,
                            mode,
                            &out.rates,
                            r_min,
                            out.outcome.n_pairs(),
                            0,
                        )?
                    }
                });
            }
        }
    }
    Ok(TrialReport {
        trial,
        seed,
        metrics,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Run all trials, optionally in parallel. Reports come back ordered by
/// trial index either way.
pub fn run_trials(config: &ExperimentConfig, parallel: bool) -> Result<Vec<TrialReport>> {
    config.validate()?;
    if parallel {
        (0..config.trials)
            .into_par_iter()
            .map(|t| run_trial(config, t))
            .collect()
    } else {
        (0..config.trials).map(|t| run_trial(config, t)).collect()
    }
}

/// Pick `r_min` as the [`CALIBRATION_QUANTILE`] of direct rates pooled over
/// a deterministic pilot run, so the direct baseline has materially nonzero
/// outage.
pub fn calibrate_r_min(config: &ExperimentConfig, quantile: f64, pilot_trials: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&quantile) {
        return Err(Error::InvalidArgument(format!(
            "quantile must lie in [0, 1], got {quantile}"
        )));
    }
    if pilot_trials == 0 {
        return Err(Error::InvalidArgument("pilot needs at least one trial".into()));
    }
    let mut rates = Vec::with_capacity(pilot_trials * config.n_nodes);
    for t in 0..pilot_trials {
        let (_, _, nodes) = trial_instance(config, t)?;
        rates.extend(nodes.iter().map(|n| n.r_in));
    }
    rates.sort_by(f64::total_cmp);
    let idx = ((rates.len() as f64 * quantile) as usize).min(rates.len() - 1);
    Ok(rates[idx])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricStats {
    pub mean: f64,
    /// Standard error of the mean; 0 with fewer than two trials.
    pub std_error: f64,
}

fn stats(values: impl Iterator<Item = f64>) -> MetricStats {
    let values: Vec<f64> = values.collect();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std_error = if values.len() < 2 {
        0.0
    } else {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    };
    MetricStats { mean, std_error }
}

/// Aggregated metrics of one mode across all trials.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSummary {
    pub mode: Mode,
    pub sum_rate: MetricStats,
    pub sum_utility: MetricStats,
    pub spectral_efficiency: MetricStats,
    pub outage_probability: MetricStats,
    pub pair_count: MetricStats,
    pub message_count: MetricStats,
    /// Mean spectral-efficiency gain over the direct mode, percent.
    pub spectral_gain_pct: Option<f64>,
    /// Mean outage-probability reduction relative to direct, percent.
    pub outage_reduction_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub trials: usize,
    /// Outage threshold in effect, if any.
    pub r_min_mbps: Option<f64>,
    pub modes: Vec<ModeSummary>,
}

/// Aggregate per-trial reports into means and standard errors, plus the
/// derived comparisons against the direct baseline.
pub fn aggregate(config: &ExperimentConfig, reports: &[TrialReport]) -> Result<ExperimentSummary> {
    if reports.is_empty() {
        return Err(Error::InvalidArgument("no trial reports to aggregate".into()));
    }
    let pick = |mode: Mode| -> Vec<&ModeMetrics> {
        reports
            .iter()
            .map(|r| {
                r.metrics
                    .iter()
                    .find(|m| m.mode == mode)
                    .expect("every report carries every configured mode")
            })
            .collect()
    };
    let direct = config
        .modes
        .contains(&Mode::Direct)
        .then(|| pick(Mode::Direct));
    let direct_se = direct
        .as_ref()
        .map(|d| stats(d.iter().map(|m| m.spectral_efficiency)).mean);
    let direct_outage = direct
        .as_ref()
        .map(|d| stats(d.iter().map(|m| m.outage_probability)).mean);

    let mut modes = Vec::new();
    for &mode in &config.modes {
        let rows = pick(mode);
        let spectral_efficiency = stats(rows.iter().map(|m| m.spectral_efficiency));
        let outage = stats(rows.iter().map(|m| m.outage_probability));
        let spectral_gain_pct = match (mode, direct_se) {
            (Mode::Direct, _) | (_, None) => None,
            (_, Some(base)) if base > 0.0 => {
                Some((spectral_efficiency.mean - base) / base * 100.0)
            }
            _ => None,
        };
        let outage_reduction_pct = match (mode, direct_outage) {
            (Mode::Direct, _) | (_, None) => None,
            (_, Some(base)) if base > 0.0 => Some((base - outage.mean) / base * 100.0),
            _ => None,
        };
        modes.push(ModeSummary {
            mode,
            sum_rate: stats(rows.iter().map(|m| m.sum_rate)),
            sum_utility: stats(rows.iter().map(|m| m.sum_utility)),
            spectral_efficiency,
            outage_probability: outage,
            pair_count: stats(rows.iter().map(|m| m.pair_count as f64)),
            message_count: stats(rows.iter().map(|m| m.message_count as f64)),
            spectral_gain_pct,
            outage_reduction_pct,
        });
    }
    Ok(ExperimentSummary {
        trials: reports.len(),
        r_min_mbps: config.r_min_mbps,
        modes,
    })
}

pub const TRIAL_CSV_HEADER: [&str; 9] = [
    "trial",
    "seed",
    "mode",
    "sum_rate",
    "sum_utility",
    "spectral_efficiency",
    "outage_probability",
    "pair_count",
    "message_count",
];

pub const SUMMARY_CSV_HEADER: [&str; 17] = [
    "mode",
    "trials",
    "r_min",
    "sum_rate_mean",
    "sum_rate_se",
    "sum_utility_mean",
    "sum_utility_se",
    "spectral_efficiency_mean",
    "spectral_efficiency_se",
    "outage_probability_mean",
    "outage_probability_se",
    "pair_count_mean",
    "pair_count_se",
    "message_count_mean",
    "message_count_se",
    "spectral_gain_pct",
    "outage_reduction_pct",
];

/// One row per (trial, mode), ordered by trial then configured mode order.
pub fn trial_rows(reports: &[TrialReport]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for report in reports {
        for m in &report.metrics {
            rows.push(vec![
                report.trial.to_string(),
                report.seed.to_string(),
                m.mode.name().to_string(),
                m.sum_rate.to_string(),
                m.sum_utility.to_string(),
                m.spectral_efficiency.to_string(),
                m.outage_probability.to_string(),
                m.pair_count.to_string(),
                m.message_count.to_string(),
            ]);
        }
    }
    rows
}

/// One row per mode; inapplicable derived columns are left empty.
pub fn summary_rows(summary: &ExperimentSummary) -> Vec<Vec<String>> {
    let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
    summary
        .modes
        .iter()
        .map(|m| {
            vec![
                m.mode.name().to_string(),
                summary.trials.to_string(),
                opt(summary.r_min_mbps),
                m.sum_rate.mean.to_string(),
                m.sum_rate.std_error.to_string(),
                m.sum_utility.mean.to_string(),
                m.sum_utility.std_error.to_string(),
                m.spectral_efficiency.mean.to_string(),
                m.spectral_efficiency.std_error.to_string(),
                m.outage_probability.mean.to_string(),
                m.outage_probability.std_error.to_string(),
                m.pair_count.mean.to_string(),
                m.pair_count.std_error.to_string(),
                m.message_count.mean.to_string(),
                m.message_count.std_error.to_string(),
                opt(m.spectral_gain_pct),
                opt(m.outage_reduction_pct),
            ]
        })
        .collect()
}

/// Render rows as CSV text: header first, comma separators, every line
/// newline-terminated.
pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = String::new();
    writeln!(s, "{}", header.join(",")).unwrap();
    for row in rows {
        writeln!(s, "{}", row.join(",")).unwrap();
    }
    s
}

/// Write a CSV file; I/O failures carry the path.
pub fn emit_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    std::fs::write(path, csv_text(header, rows)).map_err(|e| Error::io(path, e))
}

/// Run the configured experiment end to end: all trials (in parallel),
/// aggregation, and `trials.csv` / `summary.csv` under `out_dir` when one
/// is given. The outage experiment calibrates `r_min` first if the config
/// leaves it unset.
pub fn run_experiment(
    config: &ExperimentConfig,
    out_dir: Option<&Path>,
) -> Result<ExperimentSummary> {
    let mut config = config.clone();
    config.validate()?;
    if config.experiment == Experiment::NNodeOutage && config.r_min_mbps.is_none() {
        config.r_min_mbps = Some(calibrate_r_min(
            &config,
            CALIBRATION_QUANTILE,
            CALIBRATION_TRIALS,
        )?);
    }
    let reports = run_trials(&config, true)?;
    let summary = aggregate(&config, &reports)?;
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        emit_csv(&dir.join("trials.csv"), &TRIAL_CSV_HEADER, &trial_rows(&reports))?;
        emit_csv(
            &dir.join("summary.csv"),
            &SUMMARY_CSV_HEADER,
            &summary_rows(&summary),
        )?;
    }
    Ok(summary)
}

/// Rates of sender and forwarder under one scheme of the three-node sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeRates {
    pub sender: f64,
    pub forwarder: f64,
}

impl SchemeRates {
    pub fn sum(self) -> f64 {
        self.sender + self.forwarder
    }

    pub fn min(self) -> f64 {
        self.sender.min(self.forwarder)
    }
}

/// One sender distance of the three-node sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub sender_distance_m: f64,
    pub direct: SchemeRates,
    /// Bandwidth exchange under sum-rate maximization (α = 0).
    pub alpha0: SchemeRates,
    /// Bandwidth exchange under max-min rate maximization.
    pub maxmin: SchemeRates,
}

pub const SWEEP_CSV_HEADER: [&str; 13] = [
    "sender_distance_m",
    "direct_sender",
    "direct_forwarder",
    "direct_sum",
    "direct_min",
    "alpha0_sender",
    "alpha0_forwarder",
    "alpha0_sum",
    "alpha0_min",
    "maxmin_sender",
    "maxmin_forwarder",
    "maxmin_sum",
    "maxmin_min",
];

pub fn sweep_rows_csv(rows: &[SweepRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.sender_distance_m.to_string(),
                r.direct.sender.to_string(),
                r.direct.forwarder.to_string(),
                r.direct.sum().to_string(),
                r.direct.min().to_string(),
                r.alpha0.sender.to_string(),
                r.alpha0.forwarder.to_string(),
                r.alpha0.sum().to_string(),
                r.alpha0.min().to_string(),
                r.maxmin.sender.to_string(),
                r.maxmin.forwarder.to_string(),
                r.maxmin.sum().to_string(),
                r.maxmin.min().to_string(),
            ]
        })
        .collect()
}

/// Deterministic sender-distance sweep of the sender/forwarder/AP setup:
/// the forwarder sits on the AP–sender line at a fixed distance, pathloss
/// gains are `k·d^(-exp)`, and each distance is solved directly, under
/// sum-rate BE (α = 0) and under max-min BE.
pub fn sweep_three_node(
    config: &ExperimentConfig,
    forwarder_ap_distance_m: f64,
    sender_distances_m: &[f64],
) -> Result<Vec<SweepRow>> {
    config.validate()?;
    if !(forwarder_ap_distance_m > 0.0) {
        return Err(Error::InvalidArgument(
            "forwarder distance must be positive".into(),
        ));
    }
    let p = dbm_to_mw(config.power_dbm);
    let w = config.bandwidth_per_node_mhz;
    let rho_f0 = mean_gain(forwarder_ap_distance_m, config.k_const, config.pathloss_exp)?;
    let mut rows = Vec::with_capacity(sender_distances_m.len());
    for &d in sender_distances_m {
        if d <= forwarder_ap_distance_m {
            return Err(Error::InvalidArgument(format!(
                "sender distance {d} m must exceed the forwarder distance \
                 {forwarder_ap_distance_m} m"
            )));
        }
        let rho_s0 = mean_gain(d, config.k_const, config.pathloss_exp)?;
        let rho_sf = mean_gain(d - forwarder_ap_distance_m, config.k_const, config.pathloss_exp)?;
        let problem = PairProblem::new(w, w, p, rho_s0, rho_f0, rho_sf, 0.0)?;
        let direct = SchemeRates {
            sender: problem.r_s_in,
            forwarder: problem.r_f_in,
        };
        let alpha0 = solve_alpha_fair(&problem, config.solver_tol)?;
        let maxmin = solve_maxmin(&problem, config.solver_tol)?;
        rows.push(SweepRow {
            sender_distance_m: d,
            direct,
            alpha0: SchemeRates {
                sender: alpha0.r_s_be,
                forwarder: alpha0.r_f_be,
            },
            maxmin: SchemeRates {
                sender: maxmin.r_s_be,
                forwarder: maxmin.r_f_be,
            },
        });
    }
    Ok(rows)
}

/// Three-node sweep positions for reference: AP at the origin, both nodes
/// on the positive x-axis.
pub fn sweep_positions(forwarder_ap_distance_m: f64, sender_distance_m: f64) -> [Point; 2] {
    [
        Point::new(sender_distance_m, 0.0),
        Point::new(forwarder_ap_distance_m, 0.0),
    ]
}
