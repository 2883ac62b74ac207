//! `ndisco`: build, check, optimize and simulate multi-channel listening schedules.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ndisco::checks::{artifacts, format_report, run_all, SIM_SEED};
use ndisco::discovery::{format_decimal, format_ratio};
use ndisco::optimal::{
    build_mdtopt, build_sample_mdt, build_sample_wdt, export_lp, solve_exact, HorizonRule, IlpModel, DEFAULT_NODE_LIMIT,
};
use ndisco::oracle::verify;
use ndisco::sim::{evaluate, write_metrics_csv, write_sndot_csv, EvalOptions, Neighbor, ScenarioSpec};
use ndisco::{channel_switch_count, discovery_times, BeaconPeriodSet, ChannelSet, Schedule, Strategy};

#[derive(Parser)]
#[command(name = "ndisco", version, about = "Passive multi-channel neighbor discovery schedules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a listening schedule and print a summary line (wdt, mdt, switches).
    Generate {
        #[command(flatten)]
        instance: Instance,
        /// psv, greedy-first, greedy-stay, greedy-lookahead, chantrain, optb2 or recursive-f3.
        #[arg(long)]
        strategy: Strategy,
        /// Schedule JSON destination; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a schedule and print {complete, recursive, wdt_optimal, wdt, mdt}.
    Verify {
        #[command(flatten)]
        instance: Instance,
        /// Schedule JSON file, or `-` for standard input.
        #[arg(long)]
        schedule: PathBuf,
    },
    /// Solve an optimization model exactly and print {objective, status, schedule}.
    Optimize {
        #[command(flatten)]
        model: ModelArgs,
        /// Maximum number of search nodes.
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        node_limit: u64,
        /// Result JSON destination; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write an optimization model in LP format.
    ExportLp {
        #[command(flatten)]
        model: ModelArgs,
        /// LP destination; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a scenario grid and write metric and SNDoT CSVs.
    Simulate {
        /// Scenario JSON: one object or an array of objects with
        /// {bps, channels, neighbors, deaf_fraction, trials, seed, strategies}.
        #[arg(long)]
        scenarios: PathBuf,
        /// Metrics CSV destination; standard output if omitted.
        #[arg(long)]
        metrics_out: Option<PathBuf>,
        /// SNDoT CSV destination; not written if omitted.
        #[arg(long)]
        sndot_out: Option<PathBuf>,
        /// Normalize SMDT/SWDT by per-trial exact optima instead of max(B)|C|.
        #[arg(long)]
        normalize_ilp: bool,
        /// Node budget for each per-trial optimization.
        #[arg(long, default_value_t = EvalOptions::default().node_limit)]
        node_limit: u64,
        /// Replaces every scenario seed.
        #[arg(long, env = "NDISCO_SEED")]
        seed: Option<u64>,
        /// Keep beacon periods as given instead of dividing by their GCD.
        #[arg(long)]
        no_normalize: bool,
    },
    /// Run every reproduction check and print expected vs. actual values.
    PaperCheck {
        /// Directory receiving the deterministic CSV/JSON/LP artifacts.
        #[arg(long)]
        artifacts: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Instance {
    /// Comma-separated beacon periods in slots, e.g. 1,2,3.
    #[arg(long, value_delimiter = ',', required = true)]
    bps: Vec<u64>,
    /// Number of channels.
    #[arg(long)]
    channels: usize,
    /// Keep beacon periods as given instead of dividing by their GCD.
    #[arg(long)]
    no_normalize: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Objective {
    /// Mean discovery time.
    Mdt,
    /// Worst-case discovery time (makespan).
    Wdt,
}

#[derive(Args)]
struct ModelArgs {
    #[command(flatten)]
    instance: Instance,
    /// Last slot of the model; defaults to LCM(B)|C|-1, or
    /// min(1000 max(B)|C|, LCM(B)|C|)-1 for neighbor samples.
    #[arg(long)]
    t_max: Option<u64>,
    /// Neighbor sample JSON ([{channel, period, offset, phase}, ...]); models
    /// the sample instead of the full configuration space.
    #[arg(long)]
    neighbors: Option<PathBuf>,
    /// Objective for neighbor samples.
    #[arg(long, value_enum, default_value = "mdt", requires = "neighbors")]
    objective: Objective,
}

fn normalized(periods: &[u64], keep: bool) -> Result<BeaconPeriodSet> {
    let bps = BeaconPeriodSet::new(periods.iter().copied())?;
    if keep || bps.gcd() == 1 {
        return Ok(bps);
    }
    let reduced = bps.normalize();
    eprintln!("note: beacon periods {bps} divided by their GCD {} to {reduced}; slots are in reduced units", bps.gcd());
    Ok(reduced)
}

impl Instance {
    fn resolve(&self) -> Result<(BeaconPeriodSet, ChannelSet)> {
        Ok((normalized(&self.bps, self.no_normalize)?, ChannelSet::new(self.channels)?))
    }
}

impl ModelArgs {
    fn build(&self) -> Result<IlpModel> {
        let (bps, channels) = self.instance.resolve()?;
        let Some(path) = &self.neighbors else {
            return Ok(build_mdtopt(&bps, channels, self.t_max)?);
        };
        let neighbors: Vec<Neighbor> = serde_json::from_str(&read_input(path)?)
            .with_context(|| format!("parsing neighbors from {}", path.display()))?;
        let rule = self.t_max.map_or(HorizonRule::Default, HorizonRule::Fixed);
        Ok(match self.objective {
            Objective::Mdt => build_sample_mdt(&neighbors, &bps, channels, rule)?,
            Objective::Wdt => build_sample_wdt(&neighbors, &bps, channels, rule)?,
        })
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn write_output(dest: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match dest {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn json_line(value: &impl serde::Serialize) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Generate { instance, strategy, out } => {
            let (bps, channels) = instance.resolve()?;
            let schedule = strategy.generate(&bps, channels)?;
            let report = discovery_times(&schedule, &bps, channels);
            write_output(out.as_deref(), &json_line(&schedule)?)?;
            let wdt = report.wdt.map_or("none".to_string(), |w| w.to_string());
            let mdt =
                report.mdt.map_or("none".to_string(), |m| format!("{} ({})", format_decimal(&m, 12), format_ratio(&m)));
            let summary = format!("wdt = {wdt}, mdt = {mdt}, switches = {}", channel_switch_count(&schedule));
            if out.is_some() {
                println!("{summary}");
            } else {
                eprintln!("{summary}");
            }
            Ok(true)
        }
        Command::Verify { instance, schedule } => {
            let (bps, channels) = instance.resolve()?;
            let schedule: Schedule = serde_json::from_str(&read_input(&schedule)?).context("parsing schedule")?;
            if let Some(c) = schedule.max_channel() {
                if c >= channels.count() {
                    bail!("schedule scans channel {c} but only {} channels exist", channels.count());
                }
            }
            write_output(None, &json_line(&verify(&schedule, &bps, channels))?)?;
            Ok(true)
        }
        Command::Optimize { model, node_limit, out } => {
            let solution = solve_exact(&model.build()?, node_limit);
            write_output(out.as_deref(), &json_line(&solution)?)?;
            Ok(true)
        }
        Command::ExportLp { model, out } => {
            write_output(out.as_deref(), export_lp(&model.build()?).as_bytes())?;
            Ok(true)
        }
        Command::Simulate { scenarios, metrics_out, sndot_out, normalize_ilp, node_limit, seed, no_normalize } => {
            let text = read_input(&scenarios)?;
            let value: serde_json::Value = serde_json::from_str(&text).context("parsing scenarios")?;
            let specs: Vec<ScenarioSpec> = match value {
                serde_json::Value::Array(_) => serde_json::from_value(value)?,
                other => vec![serde_json::from_value(other)?],
            };
            let mut grid = Vec::new();
            for (i, mut spec) in specs.into_iter().enumerate() {
                spec.bps = normalized(&spec.bps, no_normalize)?.periods().to_vec();
                if let Some(seed) = seed {
                    spec.seed = seed;
                }
                grid.push(spec.into_scenario(i)?);
            }
            let eval = evaluate(&grid, EvalOptions { normalize_ilp, node_limit })?;
            let mut metrics = Vec::new();
            write_metrics_csv(&eval, &mut metrics)?;
            write_output(metrics_out.as_deref(), &metrics)?;
            if let Some(path) = sndot_out {
                let mut sndot = Vec::new();
                write_sndot_csv(&eval, &mut sndot)?;
                write_output(Some(&path), &sndot)?;
            }
            Ok(true)
        }
        Command::PaperCheck { artifacts: dir } => {
            let outcomes = run_all();
            print!("{}", format_report(&outcomes));
            if let Some(dir) = dir {
                fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                for (name, bytes) in artifacts(SIM_SEED)? {
                    write_output(Some(&dir.join(name)), &bytes)?;
                }
            }
            Ok(outcomes.iter().all(|o| o.passed))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
