//! Command-line interface.
//!
//! Every subcommand writes its primary output to `--out` (`-` for standard
//! output). When that output is a file, a run manifest is written next to it
//! as `<out>.manifest.json`; JSON outputs name their manifest in a `manifest`
//! field. Manifests hold timing and arguments, so the primary outputs stay
//! byte-identical across repeated seeded runs.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{
    heatmap_scan, inverse_discrepancy, reference_table, reproduce_table1, write_inverse_csv,
    Column, ReferenceTable,
};
use crate::discrepancy::{star_discrepancy_exact, star_discrepancy_oracle, Side};
use crate::optimize::{optimize_kronecker, random_search_kronecker, OptimizerConfig};
use crate::pointset::{
    fibonacci_set, kronecker_set, kronecker_with_unit_first, sobol_set, KroneckerParams, PointSet,
};
use crate::pointset::{load_csv_path, save_csv};
use crate::tune::{interval_study, race_tune, Instances, TuningScenario};
use crate::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "kronlow",
    version,
    about = "Low-discrepancy Kronecker point sets"
)]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "KRONLOW_THREADS")]
    pub threads: Option<usize>,
    /// Manifest path, overriding `<out>.manifest.json`.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a point set as CSV.
    Generate(GenerateArgs),
    /// Exact star discrepancy of a CSV point set.
    Eval(EvalArgs),
    /// Search Kronecker parameters for one set size.
    Optimize(OptimizeArgs),
    /// Tune Kronecker parameters for a range of set sizes.
    Tune(TuneArgs),
    /// Reference tables and reports.
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Kronecker,
    Fibonacci,
    Sobol,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: Option<usize>,
    /// Kronecker parameters: `p_2..p_d` (with `p_1 = 1/n`) or all of `p_1..p_d`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub params: Vec<f64>,
    /// Start at i = 1 instead of i = 0.
    #[arg(long)]
    pub shifted: bool,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Use the brute-force evaluator.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Cmaes,
    Random,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    /// Evaluations per run.
    #[arg(long)]
    pub budget: usize,
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub population: Option<usize>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, value_enum, default_value_t = Method::Cmaes)]
    pub method: Method,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    /// Scenario JSON; replaces the interval, budget and seed flags.
    #[arg(long, conflicts_with_all = ["n_lo", "n_hi", "budget", "seed"])]
    pub scenario: Option<PathBuf>,
    #[arg(long, required_unless_present_any = ["scenario", "intervals"])]
    pub n_lo: Option<usize>,
    #[arg(long, required_unless_present_any = ["scenario", "intervals"])]
    pub n_hi: Option<usize>,
    #[arg(long, required_unless_present = "scenario")]
    pub budget: Option<usize>,
    #[arg(long, required_unless_present = "scenario")]
    pub seed: Option<u64>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Number of training sizes sampled from the interval.
    #[arg(long, conflicts_with = "instance_list")]
    pub instances: Option<usize>,
    /// Explicit training sizes.
    #[arg(long, value_delimiter = ',')]
    pub instance_list: Vec<usize>,
    #[arg(long)]
    pub elites: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Run one tuning per interval, e.g. `5-100,101-200`.
    #[arg(long, value_delimiter = ',', value_parser = parse_interval)]
    pub intervals: Vec<(usize, usize)>,
    /// Probe sizes per interval for the cross-evaluation matrix.
    #[arg(long, default_value_t = 5)]
    pub probes: usize,
    /// Cross-evaluation matrix CSV for `--intervals`.
    #[arg(long)]
    pub matrix: Option<String>,
    #[arg(long, default_value = "-")]
    pub out: String,
}

fn parse_interval(s: &str) -> std::result::Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once(['-', ':'])
        .ok_or_else(|| format!("expected LO-HI, got {s:?}"))?;
    let lo = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
    Ok((lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum BenchCommand {
    /// Recompute Table I cells next to the published values.
    Table1(Table1Args),
    /// Discrepancy over a (p_2, p_3) grid.
    Heatmap(HeatmapArgs),
    /// Smallest published n reaching each target discrepancy.
    Inverse(InverseArgs),
    /// Published values of one table.
    Reference(ReferenceArgs),
}

#[derive(Debug, Args)]
pub struct Table1Args {
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "Sobol,I_200,I_1500,I_2500"
    )]
    pub columns: Vec<String>,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "20,25,32,40,50,60,80,100,150,200,250,300,500,750,1000"
    )]
    pub ns: Vec<usize>,
    /// Evaluations per run for the CMA-ES column.
    #[arg(long, default_value_t = 2000)]
    pub cma_budget: usize,
    #[arg(long, default_value_t = 3)]
    pub cma_runs: usize,
    /// Required with the CMA-ES column.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct HeatmapArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 200)]
    pub res: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.055,0.045")]
    pub thresholds: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Threshold counts and grid minimum as JSON (CSV format only).
    #[arg(long)]
    pub summary: Option<String>,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct InverseArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.05,0.01,0.005")]
    pub targets: Vec<f64>,
    #[arg(long, default_value = "table1")]
    pub table: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct ReferenceArgs {
    #[arg(long, default_value = "table1")]
    pub table: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub version: String,
    pub started_unix_secs: f64,
    pub wall_clock_secs: f64,
    pub outputs: Vec<String>,
}

/// Runs the CLI on `argv` and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli, &argv) {
        Ok(()) => 0,
        Err(e @ (Error::InvalidInput(_) | Error::Config(_) | Error::UnsupportedDimension(_))) => {
            eprintln!("error: {e}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

struct Session {
    subcommand: &'static str,
    args: Vec<String>,
    seed: Option<u64>,
    manifest: Option<PathBuf>,
    started: SystemTime,
    clock: Instant,
    outputs: Vec<String>,
}

impl Session {
    /// Manifest path for a primary output, or `None` for standard output.
    fn manifest_path(&self, out: &str) -> Option<PathBuf> {
        match (&self.manifest, out) {
            (Some(p), _) => Some(p.clone()),
            (None, "-") => None,
            (None, path) => Some(PathBuf::from(format!("{path}.manifest.json"))),
        }
    }

    fn manifest_name(&self, out: &str) -> Option<String> {
        self.manifest_path(out).map(|p| {
            p.file_name().map_or_else(
                || p.display().to_string(),
                |f| f.to_string_lossy().into_owned(),
            )
        })
    }

    fn write(&mut self, out: &str, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
        if out == "-" {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)?;
            lock.flush().map_err(|e| Error::io("<stdout>", e))?;
        } else {
            let file = File::create(out).map_err(|e| Error::io(out, e))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush().map_err(|e| Error::io(out, e))?;
            self.outputs.push(out.to_string());
        }
        Ok(())
    }

    fn write_json<T: Serialize>(&mut self, out: &str, value: &T) -> Result<()> {
        let mut v = serde_json::to_value(value)?;
        if let (Some(name), Some(map)) = (self.manifest_name(out), v.as_object_mut()) {
            map.insert("manifest".into(), name.into());
        }
        self.write(out, |w| {
            serde_json::to_writer_pretty(&mut *w, &v)?;
            writeln!(w).map_err(|e| Error::io(out, e))
        })
    }

    fn finish(self, primary: &str) -> Result<()> {
        let Some(path) = self.manifest_path(primary) else {
            return Ok(());
        };
        let manifest = RunManifest {
            subcommand: self.subcommand.to_string(),
            args: self.args,
            seed: self.seed,
            version: VERSION.to_string(),
            started_unix_secs: self
                .started
                .duration_since(UNIX_EPOCH)
                .map_or(0.0, |d| d.as_secs_f64()),
            wall_clock_secs: self.clock.elapsed().as_secs_f64(),
            outputs: self.outputs,
        };
        let text = serde_json::to_string_pretty(&manifest)?;
        std::fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))
    }
}

fn execute(cli: Cli, argv: &[OsString]) -> Result<()> {
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err(Error::InvalidInput("--threads must be at least 1".into()));
        }
        // A second initialisation in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global();
    }
    let (subcommand, seed) = match &cli.command {
        Command::Generate(_) => ("generate", None),
        Command::Eval(_) => ("eval", None),
        Command::Optimize(a) => ("optimize", Some(a.seed)),
        Command::Tune(a) => ("tune", a.seed),
        Command::Bench(BenchCommand::Table1(a)) => ("bench table1", a.seed),
        Command::Bench(BenchCommand::Heatmap(_)) => ("bench heatmap", None),
        Command::Bench(BenchCommand::Inverse(_)) => ("bench inverse", None),
        Command::Bench(BenchCommand::Reference(_)) => ("bench reference", None),
    };
    let mut session = Session {
        subcommand,
        args: argv
            .iter()
            .map(|a| a.to_string_lossy().into_owned())
            .collect(),
        seed,
        manifest: cli.manifest,
        started: SystemTime::now(),
        clock: Instant::now(),
        outputs: Vec::new(),
    };
    let primary = match cli.command {
        Command::Generate(a) => generate(&mut session, a)?,
        Command::Eval(a) => eval(&mut session, a)?,
        Command::Optimize(a) => optimize(&mut session, a)?,
        Command::Tune(a) => tune(&mut session, a)?,
        Command::Bench(BenchCommand::Table1(a)) => table1(&mut session, a)?,
        Command::Bench(BenchCommand::Heatmap(a)) => heatmap(&mut session, a)?,
        Command::Bench(BenchCommand::Inverse(a)) => inverse(&mut session, a)?,
        Command::Bench(BenchCommand::Reference(a)) => reference(&mut session, a)?,
    };
    session.finish(&primary)
}

fn generate(session: &mut Session, a: GenerateArgs) -> Result<String> {
    let set = match a.family {
        Family::Kronecker => {
            let d =
                a.d.ok_or_else(|| Error::InvalidInput("--d is required for kronecker".into()))?;
            if a.params.len() == d {
                kronecker_set(a.n, &KroneckerParams::new(a.params, a.shifted))?
            } else if a.params.len() + 1 == d {
                if a.shifted {
                    kronecker_with_unit_first(a.n, &a.params)?
                } else {
                    let mut params = vec![1.0 / a.n as f64];
                    params.extend(a.params);
                    kronecker_set(a.n, &KroneckerParams::new(params, false))?
                }
            } else {
                return Err(Error::InvalidInput(format!(
                    "--params needs {} or {} values for d = {d}, got {}",
                    d - 1,
                    d,
                    a.params.len()
                )));
            }
        }
        Family::Fibonacci => {
            if a.d.is_some_and(|d| d != 2) {
                return Err(Error::InvalidInput(
                    "the Fibonacci set is two-dimensional".into(),
                ));
            }
            fibonacci_set(a.n)?
        }
        Family::Sobol => {
            let d =
                a.d.ok_or_else(|| Error::InvalidInput("--d is required for sobol".into()))?;
            sobol_set(a.n, d)?
        }
    };
    session.write(&a.out, |w| save_csv(&set, w))?;
    Ok(a.out)
}

#[derive(Serialize)]
struct EvalOutput<'a> {
    value: f64,
    witness: &'a [f64],
    side: Side,
    n: usize,
    d: usize,
    millis: f64,
}

fn eval(session: &mut Session, a: EvalArgs) -> Result<String> {
    let set: PointSet = load_csv_path(&a.input)?;
    let clock = Instant::now();
    let result = if a.oracle {
        star_discrepancy_oracle(&set)?
    } else {
        star_discrepancy_exact(&set)?
    };
    let millis = clock.elapsed().as_secs_f64() * 1e3;
    let out = EvalOutput {
        value: result.value,
        witness: &result.witness,
        side: result.side,
        n: set.n(),
        d: set.d(),
        millis,
    };
    session.write_json(&a.out, &out)?;
    Ok(a.out)
}

fn optimize(session: &mut Session, a: OptimizeArgs) -> Result<String> {
    if a.d < 2 {
        return Err(Error::InvalidInput(format!(
            "d must be at least 2, got {}",
            a.d
        )));
    }
    let mut config = OptimizerConfig::new(a.d - 1, a.budget, a.runs, a.seed);
    config.population = a.population;
    if let Some(s) = a.sigma {
        config.initial_step = s;
    }
    let result = match a.method {
        Method::Cmaes => optimize_kronecker(a.n, a.d, &config)?,
        Method::Random => random_search_kronecker(a.n, a.d, &config)?,
    };
    session.write_json(&a.out, &result)?;
    Ok(a.out)
}

fn tune(session: &mut Session, a: TuneArgs) -> Result<String> {
    let mut scenario = match &a.scenario {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            TuningScenario::from_json(&text)?
        }
        None => {
            let (lo, hi) = match (a.n_lo, a.n_hi) {
                (Some(lo), Some(hi)) => (lo, hi),
                _ => a.intervals.first().copied().unwrap_or((5, 5)),
            };
            TuningScenario::new(lo, hi, a.budget.unwrap_or(0), a.seed.unwrap_or(0))
        }
    };
    session.seed = Some(scenario.seed);
    if let Some(d) = a.d {
        scenario.d = d;
    }
    if let Some(k) = a.instances {
        scenario.instances = Instances::Sampled(k);
    }
    if !a.instance_list.is_empty() {
        scenario.instances = Instances::Explicit(a.instance_list);
    }
    if let Some(e) = a.elites {
        scenario.elites = e;
    }
    if let Some(alpha) = a.alpha {
        scenario.elim_alpha = alpha;
    }
    if a.intervals.is_empty() {
        if a.matrix.is_some() {
            return Err(Error::InvalidInput("--matrix needs --intervals".into()));
        }
        let tuned = race_tune(&scenario)?;
        session.write_json(&a.out, &tuned)?;
    } else {
        let study = interval_study(&a.intervals, &scenario, a.probes)?;
        if let Some(path) = &a.matrix {
            session.write(path, |w| study.write_matrix_csv(w))?;
        }
        session.write_json(&a.out, &study)?;
    }
    Ok(a.out)
}

fn table1(session: &mut Session, a: Table1Args) -> Result<String> {
    let columns: Vec<Column> = a
        .columns
        .iter()
        .map(|c| Column::parse(c))
        .collect::<Result<_>>()?;
    let cma = if columns.contains(&Column::CmaEs) {
        let seed = a
            .seed
            .ok_or_else(|| Error::InvalidInput("the CMA-ES column needs --seed".into()))?;
        Some(OptimizerConfig::new(2, a.cma_budget, a.cma_runs, seed))
    } else {
        None
    };
    let report = reproduce_table1(&columns, &a.ns, cma.as_ref())?;
    match a.format {
        Format::Csv => session.write(&a.out, |w| report.write_csv(w))?,
        Format::Json => session.write_json(&a.out, &report)?,
    }
    Ok(a.out)
}

fn heatmap(session: &mut Session, a: HeatmapArgs) -> Result<String> {
    let report = heatmap_scan(a.n, a.res, &a.thresholds)?;
    match a.format {
        Format::Json => session.write_json(&a.out, &report)?,
        Format::Csv => {
            session.write(&a.out, |w| report.write_csv(w))?;
            #[derive(Serialize)]
            struct Summary<'a> {
                n: usize,
                resolution: usize,
                counts: &'a [crate::bench::ThresholdCount],
                minimum: &'a crate::bench::HeatmapCell,
            }
            let summary = Summary {
                n: report.n,
                resolution: report.resolution,
                counts: &report.counts,
                minimum: &report.minimum,
            };
            match &a.summary {
                Some(path) => session.write_json(path, &summary)?,
                None => eprintln!("{}", serde_json::to_string(&summary)?),
            }
        }
    }
    Ok(a.out)
}

fn parse_table(name: &str) -> Result<ReferenceTable> {
    ReferenceTable::parse(name).ok_or_else(|| {
        Error::InvalidInput(format!(
            "unknown table {name:?}; expected table1, postprocessing_table2 or table3"
        ))
    })
}

fn inverse(session: &mut Session, a: InverseArgs) -> Result<String> {
    let records = reference_table(parse_table(&a.table)?);
    let entries = inverse_discrepancy(&records, &a.targets);
    match a.format {
        Format::Csv => session.write(&a.out, |w| write_inverse_csv(&entries, w))?,
        Format::Json => {
            #[derive(Serialize)]
            struct Inverse<'a> {
                entries: &'a [crate::bench::InverseEntry],
            }
            session.write_json(&a.out, &Inverse { entries: &entries })?
        }
    }
    Ok(a.out)
}

fn reference(session: &mut Session, a: ReferenceArgs) -> Result<String> {
    let records = reference_table(parse_table(&a.table)?);
    match a.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Records<'a> {
                records: &'a [crate::bench::BenchmarkRecord],
            }
            session.write_json(&a.out, &Records { records: &records })?
        }
        Format::Csv => session.write(&a.out, |w| {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(["method", "n", "d", "value"])?;
            for r in &records {
                csv.write_record([
                    r.method.clone(),
                    r.n.to_string(),
                    r.d.to_string(),
                    r.value.to_string(),
                ])?;
            }
            csv.flush().map_err(|e| Error::io("<reference>", e))
        })?,
    }
    Ok(a.out)
}
