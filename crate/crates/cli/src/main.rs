use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use smoothlab::experiments::{read_csv, write_csv, write_json, CsvRow};
use smoothlab::verify::{self, Suite, DEFAULT_SEED};
use smoothlab::{
    fit_exponent, run_trials, Algorithm, DLaw, ExperimentConfig, ExperimentResult,
    GeneratorFamily, PerturbationModel, PivotRule, Target,
};

const DEFAULT_TRIALS: usize = 200;

#[derive(Parser)]
#[command(name = "smoothlab", version, about = "Smoothed-analysis experiments for quicksort, Hoare's find and scan maxima")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its per-trial rows.
    Run {
        #[command(flatten)]
        spec: ExperimentSpec,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run every `[[experiment]]` entry of a TOML config file.
    Sweep {
        config: PathBuf,
        /// Seed for entries that do not set one.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a verification suite and print a pass/fail table.
    Verify {
        #[arg(long, default_value = "deterministic")]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Fit mean cost against n for each experiment in a results CSV.
    Fit {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args)]
struct OutputArgs {
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
enum ModelKind {
    Additive,
    Partial,
    None,
}

/// Flags shared by `run` and the entries of a sweep file.
#[derive(Args, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct ExperimentSpec {
    /// Generator family.
    #[arg(long)]
    #[serde(default, deserialize_with = "parsed")]
    experiment: Option<GeneratorFamily>,
    #[arg(long)]
    #[serde(default, deserialize_with = "parsed")]
    algorithm: Option<Algorithm>,
    #[arg(long)]
    #[serde(default, deserialize_with = "parsed")]
    rule: Option<PivotRule>,
    /// k=INT, median, max or max-over-k.
    #[arg(long)]
    #[serde(default, deserialize_with = "parsed")]
    target: Option<Target>,
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    /// Constant noise magnitude.
    #[arg(long, conflicts_with = "d_law")]
    d: Option<f64>,
    /// Noise law d(n) = C * n^ALPHA, given as C,ALPHA.
    #[arg(long, value_name = "C,ALPHA")]
    d_law: Option<String>,
    /// Marking probability for partial permutations.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, conflicts_with = "n_grid")]
    n: Option<usize>,
    /// Comma-separated lengths.
    #[arg(long, value_name = "N,N,...")]
    n_grid: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

/// Sweep entries spell names exactly as the flags do.
fn parsed<'de, D, T>(de: D) -> Result<Option<T>, D::Error>
where
    D: serde::Deserializer<'de>,
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    Option::<String>::deserialize(de)?
        .map(|s| s.parse().map_err(serde::de::Error::custom))
        .transpose()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    #[serde(default)]
    experiment: Vec<ExperimentSpec>,
}

/// Exit code plus message for anything that stops a command.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<smoothlab::Error> for Failure {
    fn from(e: smoothlab::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

impl ExperimentSpec {
    fn into_config(self, default_seed: u64) -> Result<ExperimentConfig, Failure> {
        let generator = self.experiment.ok_or_else(|| Failure::usage("--experiment is required"))?;
        let d_law = match (self.d, self.d_law.as_deref()) {
            (Some(_), Some(_)) => return Err(Failure::usage("--d and --d-law are mutually exclusive")),
            (Some(d), None) => Some(DLaw::constant(d)),
            (None, Some(s)) => Some(parse_d_law(s)?),
            (None, None) => None,
        };
        let kind = match self.model {
            Some(k) => k,
            None if d_law.is_some() => ModelKind::Additive,
            None if self.p.is_some() => ModelKind::Partial,
            None => ModelKind::None,
        };
        let model = match kind {
            ModelKind::Additive => {
                if self.p.is_some() {
                    return Err(Failure::usage("--p does not apply to the additive model"));
                }
                PerturbationModel::Additive {
                    d: d_law.ok_or_else(|| Failure::usage("--model additive needs --d or --d-law"))?,
                }
            }
            ModelKind::Partial => {
                if d_law.is_some() {
                    return Err(Failure::usage("--d does not apply to the partial model"));
                }
                PerturbationModel::Partial {
                    p: self.p.ok_or_else(|| Failure::usage("--model partial needs --p"))?,
                }
            }
            ModelKind::None => {
                if d_law.is_some() || self.p.is_some() {
                    return Err(Failure::usage("--model none takes neither --d nor --p"));
                }
                PerturbationModel::None
            }
        };
        let n_grid = match (self.n, self.n_grid.as_deref()) {
            (Some(_), Some(_)) => return Err(Failure::usage("--n and --n-grid are mutually exclusive")),
            (Some(n), None) => vec![n],
            (None, Some(s)) => parse_grid(s)?,
            (None, None) => return Err(Failure::usage("one of --n or --n-grid is required")),
        };
        let config = ExperimentConfig {
            generator,
            model,
            algorithm: self.algorithm.unwrap_or(Algorithm::HoareFind),
            rule: self.rule.unwrap_or(PivotRule::Classic),
            target: self.target.unwrap_or(Target::Maximum),
            n_grid,
            trials: self.trials.unwrap_or(DEFAULT_TRIALS),
            master_seed: self.seed.unwrap_or(default_seed),
        };
        config.validate()?;
        Ok(config)
    }
}

fn parse_d_law(s: &str) -> Result<DLaw, Failure> {
    let bad = || Failure::usage(format!("--d-law: expected C,ALPHA, got {s:?}"));
    let (c, alpha) = s.split_once(',').ok_or_else(bad)?;
    Ok(DLaw {
        c: c.trim().parse().map_err(|_| bad())?,
        alpha: alpha.trim().parse().map_err(|_| bad())?,
    })
}

fn parse_grid(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Failure::usage(format!("--n-grid: {t:?} is not a length")))
        })
        .collect()
}

fn open_output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(results: &[ExperimentResult], output: &OutputArgs) -> Result<(), Failure> {
    let mut out = open_output(output.out.as_deref())?;
    match output.format {
        Format::Csv => write_csv(results, &mut out)?,
        Format::Json => write_json(results, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn run_all(configs: &[ExperimentConfig], output: &OutputArgs) -> Result<(), Failure> {
    let results = configs
        .iter()
        .map(|c| run_trials(c, output.jobs))
        .collect::<Result<Vec<_>, _>>()?;
    emit(&results, output)
}

fn sweep(path: &Path, seed: Option<u64>, output: &OutputArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let file: SweepFile =
        toml::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    if file.experiment.is_empty() {
        return Err(Failure::usage(format!("{}: no [[experiment]] entries", path.display())));
    }
    let configs = file
        .experiment
        .into_iter()
        .enumerate()
        .map(|(i, spec)| {
            spec.into_config(seed.unwrap_or(DEFAULT_SEED)).map_err(|f| Failure {
                message: format!("experiment #{}: {}", i + 1, f.message),
                ..f
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    run_all(&configs, output)
}

fn verify_suite(suite: Suite, seed: u64) -> Result<(), Failure> {
    let reports = verify::run_suite(suite, seed);
    print!("{}", verify::format_table(&reports));
    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure { code: 1, message: "verification failed".into() })
    }
}

type GroupKey = (String, String, String, String, String, u64);

fn fit(path: &Path) -> Result<(), Failure> {
    let file = File::open(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let rows = read_csv(file)?;
    if rows.is_empty() {
        return Err(Failure::usage(format!("{}: no rows", path.display())));
    }
    // key -> n -> (sum, count)
    let mut groups: BTreeMap<GroupKey, BTreeMap<usize, (f64, usize)>> = BTreeMap::new();
    for row in &rows {
        let key = (
            row.experiment.clone(),
            row.algorithm.clone(),
            row.rule.clone(),
            row.target.clone(),
            row.model.clone(),
            row.seed,
        );
        let cell = groups.entry(key).or_default().entry(row.n).or_default();
        cell.0 += observable(row);
        cell.1 += 1;
    }
    let mut out = io::stdout().lock();
    writeln!(out, "experiment,algorithm,rule,target,model,seed,points,slope,intercept,r_squared")?;
    for ((experiment, algorithm, rule, target, model, seed), cells) in groups {
        let points: Vec<(f64, f64)> =
            cells.iter().map(|(&n, &(sum, count))| (n as f64, sum / count as f64)).collect();
        let f = fit_exponent(&points).map_err(|e| {
            Failure::usage(format!("{experiment}/{algorithm}/{rule}/{target}/{model}: {e}"))
        })?;
        writeln!(
            out,
            "{experiment},{algorithm},{rule},{target},{model},{seed},{},{:.6},{:.6},{:.6}",
            points.len(),
            f.slope,
            f.intercept,
            f.r_squared
        )?;
    }
    Ok(())
}

/// Same observable as the experiment summaries: maxima count for scan
/// maxima, comparisons otherwise.
fn observable(row: &CsvRow) -> f64 {
    if row.algorithm == Algorithm::ScanMaxima.to_string() {
        row.pivots as f64
    } else {
        row.comparisons as f64
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { spec, output } => {
            spec.into_config(DEFAULT_SEED).and_then(|c| run_all(&[c], &output))
        }
        Command::Sweep { config, seed, output } => sweep(&config, seed, &output),
        Command::Verify { suite, seed } => verify_suite(suite, seed),
        Command::Fit { input } => fit(&input),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
