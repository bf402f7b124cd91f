// Copyright 2026 The wkerr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Subcommands of the `wkerr` binary.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wkerr_core::homodyne::DEFAULT_THETA;
use wkerr_core::search::{find_coefficients_with_progress, DEFAULT_BOUND_CEILING};
use wkerr_core::{
    build_chain, build_phase_table, check_distinguishability, make_w_state, reference_coefficients,
    worst_pair, worst_w_pair, BranchPartition, CoefficientSet, Error, GuardPolicy, Measurer,
    Objective, PhotonicState, ProbeModel, SearchConfig,
};

use crate::format::{self, BranchCount, ErrorCurvePoint, SimulationSummary, TranscriptLine};
use crate::state_file;

pub const SEED_ENV: &str = "WKERR_SEED";

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    VerifyFailed,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::VerifyFailed => 1,
        }
    }
}

/// Exit code for a failed command: 3 for a hit search ceiling, otherwise 2.
pub fn error_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::SearchCeiling { .. }) => 3,
        _ => 2,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "wkerr",
    version,
    about = "Cross-Kerr parity networks for W-state identification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Phase table over all basis inputs.
    Table(TableArgs),
    /// Check that every single-V input is told apart from every other input.
    Verify(NetworkArgs),
    /// Find an optimal admissible coefficient set.
    Search(SearchArgs),
    /// Monte Carlo homodyne measurements with JSON-lines transcripts.
    Simulate(SimulateArgs),
    /// Worst-pair discrimination error over a range of probe amplitudes.
    ErrorCurve(ErrorCurveArgs),
    /// Classification counts from simulated measurements, as CSV.
    Confusion(ConfusionArgs),
    /// PBS wiring of the n-photon chain as JSON.
    Topology(TopologyArgs),
    /// Occupations routed through the chain for every basis input, as CSV.
    Occupations(TopologyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    /// Smallest max |c|.
    MaxAbs,
    /// Smallest max |total| over all inputs.
    Range,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl Output {
    fn open(&self) -> anyhow::Result<Box<dyn Write>> {
        Ok(match &self.output {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).with_context(|| format!("creating {}", p.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

#[derive(Debug, Args)]
pub struct NetworkArgs {
    /// Number of photons.
    #[arg(long)]
    pub n: usize,
    /// Comma-separated Kerr coefficients; defaults exist for n = 3 and 4.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub coeffs: Option<Vec<i64>>,
    #[command(flatten)]
    pub output: Output,
}

impl NetworkArgs {
    fn coefficients(&self) -> anyhow::Result<CoefficientSet> {
        let c = match &self.coeffs {
            Some(c) => CoefficientSet::new(c.clone()),
            None => reference_coefficients(self.n)
                .context("no default coefficients for this n; pass --coeffs")?,
        };
        if c.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: c.len(),
            }
            .into());
        }
        Ok(c)
    }
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub network: NetworkArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::MaxAbs)]
    pub objective: ObjectiveArg,
    /// Largest coefficient magnitude to try before giving up.
    #[arg(long, default_value_t = DEFAULT_BOUND_CEILING)]
    pub bound: u32,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    /// Coherent probe amplitude.
    #[arg(long, default_value_t = 100.0)]
    pub alpha: f64,
    /// Kerr phase per unit coefficient, in radians.
    #[arg(long, default_value_t = DEFAULT_THETA)]
    pub theta: f64,
    /// Fail instead of warning when max |total| * theta exceeds pi.
    #[arg(long)]
    pub strict_budget: bool,
}

impl ProbeArgs {
    fn probe(&self) -> anyhow::Result<ProbeModel> {
        Ok(ProbeModel::new(self.alpha, self.theta)?)
    }

    fn policy(&self) -> GuardPolicy {
        if self.strict_budget {
            GuardPolicy::Refuse
        } else {
            GuardPolicy::Warn
        }
    }
}

#[derive(Debug, Args)]
pub struct SeedArg {
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub network: NetworkArgs,
    #[command(flatten)]
    pub probe: ProbeArgs,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Report the true branch and its mean instead of sampling noise.
    #[arg(long)]
    pub ideal: bool,
    /// Input state file; defaults to the uniform W state.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Emit only the summary line.
    #[arg(long)]
    pub summary_only: bool,
}

#[derive(Debug, Args)]
pub struct ErrorCurveArgs {
    #[command(flatten)]
    pub network: NetworkArgs,
    #[arg(long, default_value_t = DEFAULT_THETA)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = 500.0)]
    pub alpha_max: f64,
    /// Number of evenly spaced alpha values, endpoints included.
    #[arg(long, default_value_t = 11)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct ConfusionArgs {
    #[command(flatten)]
    pub network: NetworkArgs,
    #[command(flatten)]
    pub probe: ProbeArgs,
    /// Trials per branch.
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[command(flatten)]
    pub seed: SeedArg,
}

#[derive(Debug, Args)]
pub struct TopologyArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub output: Output,
}

pub fn run(cli: &Cli) -> anyhow::Result<Status> {
    match &cli.command {
        Command::Table(a) => table(a),
        Command::Verify(a) => verify(a),
        Command::Search(a) => search(a),
        Command::Simulate(a) => simulate(a),
        Command::ErrorCurve(a) => error_curve(a),
        Command::Confusion(a) => confusion(a),
        Command::Topology(a) => topology(a),
        Command::Occupations(a) => occupations(a),
    }
}

fn write_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn finish(mut out: Box<dyn Write>) -> anyhow::Result<Status> {
    out.flush()?;
    Ok(Status::Success)
}

fn table(a: &TableArgs) -> anyhow::Result<Status> {
    let c = a.network.coefficients()?;
    let table = build_phase_table(a.network.n, &c)?;
    let modes = build_chain(a.network.n)?.mode_labels().to_vec();
    let mut out = a.network.output.open()?;
    match a.format {
        Format::Csv => out.write_all(format::table_csv(&table, &modes)?.as_bytes())?,
        Format::Json => write_json(&mut out, &format::table_json(&table, &modes))?,
    }
    finish(out)
}

fn verify(a: &NetworkArgs) -> anyhow::Result<Status> {
    let c = a.coefficients()?;
    let report = check_distinguishability(&build_phase_table(a.n, &c)?);
    let mut out = a.output.open()?;
    write_json(&mut out, &format::report_json(&report))?;
    finish(out)?;
    if !report.pass {
        eprintln!(
            "verification failed: {} collision(s)",
            report.collisions.len()
        );
        return Ok(Status::VerifyFailed);
    }
    Ok(Status::Success)
}

#[derive(serde::Serialize)]
struct SearchJson {
    n: usize,
    objective: &'static str,
    coefficients: Vec<i64>,
    max_abs_coefficient: u64,
    max_abs_total: u64,
    report: format::ReportJson,
}

fn search(a: &SearchArgs) -> anyhow::Result<Status> {
    let objective = match a.objective {
        ObjectiveArg::MaxAbs => Objective::MinMaxAbs,
        ObjectiveArg::Range => Objective::MinRange,
    };
    let config = SearchConfig::new(a.n, a.bound).with_objective(objective);
    let found = find_coefficients_with_progress(&config, |p| {
        let best = match &p.best {
            Some(c) => format!("{:?}", c.as_slice()),
            None => "none".into(),
        };
        eprintln!(
            "bound {}: {} candidates tested, best {best}",
            p.bound, p.candidates_tested
        );
    })?;
    let Some(c) = found else {
        return Err(Error::SearchCeiling {
            n: a.n,
            bound: a.bound,
        }
        .into());
    };
    let table = build_phase_table(a.n, &c)?;
    let report = check_distinguishability(&table);
    let mut out = a.output.open()?;
    write_json(
        &mut out,
        &SearchJson {
            n: a.n,
            objective: match a.objective {
                ObjectiveArg::MaxAbs => "max-abs",
                ObjectiveArg::Range => "range",
            },
            coefficients: c.as_slice().to_vec(),
            max_abs_coefficient: c.max_abs(),
            max_abs_total: table.max_abs_total(),
            report: format::report_json(&report),
        },
    )?;
    finish(out)
}

fn warn_partition(p: &BranchPartition) {
    if p.budget_exceeded {
        eprintln!(
            "warning: max |total| * theta exceeds pi; distinct |total| values may share a mean"
        );
    }
    if p.merged {
        eprintln!("warning: some branches with different |total| have equal means and were merged");
    }
}

fn simulate(a: &SimulateArgs) -> anyhow::Result<Status> {
    let c = a.network.coefficients()?;
    let measurer = Measurer::new(a.probe.probe()?, &c, a.probe.policy())?;
    warn_partition(measurer.partition());
    let state: PhotonicState = match &a.state {
        Some(path) => state_file::read_state(path)?,
        None => make_w_state(a.network.n, None)?,
    };
    if state.n() != a.network.n {
        bail!(
            "state file has {} photons but --n is {}",
            state.n(),
            a.network.n
        );
    }
    if a.trials == 0 {
        bail!("--trials must be at least 1");
    }

    let seed = a.seed.seed;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let partition = measurer.partition();
    let mut counts = vec![0u64; partition.len()];
    let (mut misclassified, mut invalid) = (0u64, 0u64);
    let mut out = a.network.output.open()?;
    for trial in 0..a.trials {
        let outcome = measurer.measure(&state, &mut rng, a.ideal)?;
        counts[outcome.branch] += 1;
        misclassified += outcome.misclassified() as u64;
        invalid += outcome.posterior.is_none() as u64;
        if !a.summary_only {
            serde_json::to_writer(&mut out, &TranscriptLine::new(seed, trial, &outcome))?;
            writeln!(out)?;
        }
    }
    let summary = SimulationSummary {
        seed,
        trials: a.trials,
        ideal: a.ideal,
        branches: partition
            .branches()
            .iter()
            .zip(&counts)
            .map(|(b, &count)| BranchCount {
                branch: b.id,
                abs_totals: b.abs_totals.clone(),
                count,
                frequency: format::round6(count as f64 / a.trials as f64),
            })
            .collect(),
        misclassified,
        misclassification_rate: format::round6(misclassified as f64 / a.trials as f64),
        invalid_classifications: invalid,
    };
    serde_json::to_writer(&mut out, &serde_json::json!({ "summary": summary }))?;
    writeln!(out)?;
    finish(out)
}

/// The error-curve rows for `c`; exposed for tests.
pub fn error_curve_points(
    n: usize,
    c: &CoefficientSet,
    theta: f64,
    alphas: &[f64],
) -> anyhow::Result<Vec<ErrorCurvePoint>> {
    let table = build_phase_table(n, c)?;
    let mut points = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let probe = ProbeModel::new(alpha, theta)?;
        let partition = wkerr_core::branch_partition(&table, &probe, GuardPolicy::Warn)?;
        if points.is_empty() {
            warn_partition(&partition);
        }
        // a single branch has nothing to confuse it with
        let (gap, err) = worst_pair(&partition).unwrap_or((f64::INFINITY, 0.0));
        let (w_gap, w_err) = worst_w_pair(&partition).unwrap_or((f64::INFINITY, 0.0));
        points.push(ErrorCurvePoint {
            alpha,
            min_separation: gap,
            worst_error: err,
            w_min_separation: w_gap,
            w_worst_error: w_err,
        });
    }
    Ok(points)
}

/// `steps` evenly spaced values over `[min, max]`.
pub fn alpha_range(min: f64, max: f64, steps: usize) -> anyhow::Result<Vec<f64>> {
    if steps == 0 || min.partial_cmp(&max).is_none_or(|o| o.is_gt()) || (steps == 1 && min != max) {
        bail!("empty alpha range: {steps} step(s) over [{min}, {max}]");
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    Ok((0..steps)
        .map(|i| min + (max - min) * i as f64 / (steps - 1) as f64)
        .collect())
}

fn error_curve(a: &ErrorCurveArgs) -> anyhow::Result<Status> {
    let c = a.network.coefficients()?;
    let alphas = alpha_range(a.alpha_min, a.alpha_max, a.steps)?;
    let points = error_curve_points(a.network.n, &c, a.theta, &alphas)?;
    let mut out = a.network.output.open()?;
    out.write_all(format::error_curve_csv(&points)?.as_bytes())?;
    finish(out)
}

fn confusion(a: &ConfusionArgs) -> anyhow::Result<Status> {
    let c = a.network.coefficients()?;
    if a.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let measurer = Measurer::new(a.probe.probe()?, &c, a.probe.policy())?;
    warn_partition(measurer.partition());
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed.seed);
    let m = measurer.confusion_matrix(a.trials, &mut rng);
    let mut out = a.network.output.open()?;
    out.write_all(format::confusion_csv(&m, measurer.partition())?.as_bytes())?;
    finish(out)
}

fn topology(a: &TopologyArgs) -> anyhow::Result<Status> {
    let t = build_chain(a.n)?;
    let mut out = a.output.open()?;
    write_json(&mut out, &format::topology_json(&t))?;
    finish(out)
}

fn occupations(a: &TopologyArgs) -> anyhow::Result<Status> {
    let t = build_chain(a.n)?;
    let mut out = a.output.open()?;
    out.write_all(format::occupations_csv(&t)?.as_bytes())?;
    finish(out)
}
