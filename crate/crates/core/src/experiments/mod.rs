//! Monte Carlo sweeps over generator, perturbation model, algorithm and
//! input length, with the summary statistics and exponent fits that turn
//! asymptotic bounds into checkable numbers.

mod output;
mod stats;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use output::{read_csv, write_csv, write_json, CsvRow, CSV_HEADER};
pub use stats::{fit_exponent, summarize, FitResult, Summary, Z95};

use crate::algorithms::{hoare_find, quicksort_count, scan_maxima_run, RunResult};
use crate::error::{Error, Result};
use crate::generators::{GeneratorFamily, GeneratorSpec};
use crate::oracles::{rsearch_max, Algorithm};
use crate::perturbation::{derive_stream, PerturbationModel};
use crate::pivot::PivotRule;
use crate::sequence::Sequence;

/// Which rank Hoare's find looks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Target {
    Rank(usize),
    /// Rank `ceil(n/2)`.
    Median,
    /// Rank `n`.
    Maximum,
    /// The worst rank, found by trying every `k`.
    MaxOverK,
}

impl Target {
    /// Concrete rank at length `n`; `None` for [`Target::MaxOverK`].
    pub fn rank(self, n: usize) -> Option<usize> {
        match self {
            Target::Rank(k) => Some(k),
            Target::Median => Some(n.div_ceil(2)),
            Target::Maximum => Some(n),
            Target::MaxOverK => None,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Rank(k) => write!(f, "k={k}"),
            Target::Median => f.write_str("median"),
            Target::Maximum => f.write_str("max"),
            Target::MaxOverK => f.write_str("max-over-k"),
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "median" => Ok(Target::Median),
            "max" => Ok(Target::Maximum),
            "max-over-k" => Ok(Target::MaxOverK),
            _ => s
                .strip_prefix("k=")
                .and_then(|k| k.parse().ok())
                .filter(|&k| k > 0)
                .map(Target::Rank)
                .ok_or_else(|| Error::param("target", s, "expected k=INT, median, max or max-over-k")),
        }
    }
}

impl From<Target> for String {
    fn from(t: Target) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for Target {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub generator: GeneratorFamily,
    pub model: PerturbationModel,
    pub algorithm: Algorithm,
    pub rule: PivotRule,
    pub target: Target,
    pub n_grid: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() {
            return Err(Error::Config("n grid is empty".into()));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("n grid must be strictly increasing".into()));
        }
        if self.n_grid[0] == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if *self.n_grid.last().unwrap() > u32::MAX as usize || self.trials > u32::MAX as usize {
            return Err(Error::Config("n and trials must fit in 32 bits".into()));
        }
        match (self.generator, &self.model) {
            (GeneratorFamily::PpLower, PerturbationModel::Partial { .. }) => {}
            (GeneratorFamily::PpLower, m) => {
                return Err(Error::Config(format!(
                    "pp-lower is a permutation input and needs the partial model, not {}",
                    m.name()
                )))
            }
            (GeneratorFamily::MedianLowerSmallD, PerturbationModel::Additive { .. }) => {}
            (GeneratorFamily::MedianLowerSmallD, m) => {
                return Err(Error::Config(format!(
                    "median-lower-small-d is parameterised by d and needs the additive model, not {}",
                    m.name()
                )))
            }
            _ => {}
        }
        self.model.validate(&self.n_grid).map_err(|e| Error::Config(e.to_string()))?;
        for &n in &self.n_grid {
            if let Some(k) = self.target.rank(n) {
                if self.algorithm == Algorithm::HoareFind && k > n {
                    return Err(Error::Config(format!("target rank {k} exceeds n = {n}")));
                }
            }
            // Surface generator preconditions (parity, minimum n) up front.
            if self.generator != GeneratorFamily::UniformRandom {
                self.generator_spec(n)
                    .generate::<f64, _>(&mut derive_stream(0, 0))
                    .map_err(|e| Error::Config(format!("{} at n = {n}: {e}", self.generator)))?;
            }
        }
        Ok(())
    }

    fn generator_spec(&self, n: usize) -> GeneratorSpec {
        let mut spec = GeneratorSpec::new(self.generator, n);
        match self.model {
            PerturbationModel::Additive { d } => spec.d = Some(d.eval(n)),
            PerturbationModel::Partial { p } => spec.p = Some(p),
            PerturbationModel::None => {}
        }
        spec
    }

    /// Short SHA-256 digest of the canonical JSON form.
    pub fn config_hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(&Sha256::digest(&json)[..8])
    }

    /// The per-trial quantity being summarized: scan maxima count for
    /// `scan-maxima`, comparisons otherwise.
    pub fn observable(&self, rec: &TrialRecord) -> u64 {
        match self.algorithm {
            Algorithm::ScanMaxima => rec.pivots,
            _ => rec.comparisons,
        }
    }
}

/// Stream index for trial `t` at length `n`: `n` in the high 32 bits, `t`
/// in the low 32. Injective for every validated config.
pub fn stream_index(n: usize, trial: usize) -> u64 {
    ((n as u64) << 32) | trial as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n: usize,
    pub trial: usize,
    pub param: f64,
    pub comparisons: u64,
    pub pivots: u64,
    pub depth: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointStats {
    pub n: usize,
    pub param: f64,
    pub summary: Summary,
}

/// Every trial record in `(n, trial)` order plus per-`n` summaries.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub records: Vec<TrialRecord>,
    pub points: Vec<PointStats>,
}

impl ExperimentResult {
    /// Exponent of mean observable against `n`.
    pub fn fit(&self) -> Result<FitResult> {
        let pts: Vec<(f64, f64)> = self
            .points
            .iter()
            .map(|p| (p.n as f64, p.summary.mean))
            .collect();
        fit_exponent(&pts)
    }

    pub fn mean_at(&self, n: usize) -> Option<f64> {
        self.points.iter().find(|p| p.n == n).map(|p| p.summary.mean)
    }

    /// `mean / (n ln n)` at every grid point.
    pub fn n_log_n_ratios(&self) -> Vec<(usize, f64)> {
        self.points
            .iter()
            .map(|p| (p.n, p.summary.mean / (p.n as f64 * (p.n as f64).ln())))
            .collect()
    }

    /// Grid points whose mean dropped below the previous one.
    pub fn monotonicity_flags(&self) -> Vec<usize> {
        self.points
            .windows(2)
            .filter(|w| w[1].summary.mean < w[0].summary.mean)
            .map(|w| w[1].n)
            .collect()
    }
}

fn run_one(config: &ExperimentConfig, base: Option<&Sequence<f64>>, n: usize, trial: usize) -> Result<TrialRecord> {
    let mut rng = derive_stream(config.master_seed, stream_index(n, trial));
    let generated;
    let base = match base {
        Some(b) => b,
        None => {
            generated = config.generator_spec(n).generate::<f64, _>(&mut rng)?;
            &generated
        }
    };
    let seq = config.model.apply(base, &mut rng)?;
    let run: RunResult<f64> = match config.algorithm {
        Algorithm::Quicksort => quicksort_count(&seq, config.rule),
        Algorithm::ScanMaxima => scan_maxima_run(&seq, config.rule),
        Algorithm::HoareFind => {
            let k = match config.target.rank(n) {
                Some(k) => k,
                None => rsearch_max(&seq, config.rule)?.0,
            };
            hoare_find(&seq, k, config.rule)?
        }
    };
    Ok(TrialRecord {
        n,
        trial,
        param: config.model.param(n),
        comparisons: run.comparisons,
        pivots: run.pivots,
        depth: run.depth,
    })
}

/// Run every `(n, trial)` pair of `config`.
///
/// Each pair draws from its own stream `derive_stream(seed, stream_index(n, t))`
/// and results are collected in `(n, trial)` order, so the output does not
/// depend on `jobs`. `jobs = 0` uses rayon's global pool.
pub fn run_trials(config: &ExperimentConfig, jobs: usize) -> Result<ExperimentResult> {
    config.validate()?;
    let bases: Vec<Option<Sequence<f64>>> = config
        .n_grid
        .iter()
        .map(|&n| match config.generator {
            GeneratorFamily::UniformRandom => Ok(None),
            _ => config
                .generator_spec(n)
                .generate::<f64, _>(&mut derive_stream(config.master_seed, 0))
                .map(Some),
        })
        .collect::<Result<_>>()?;
    let tasks: Vec<(usize, usize)> = (0..config.n_grid.len())
        .flat_map(|i| (0..config.trials).map(move |t| (i, t)))
        .collect();
    let work = || {
        tasks
            .par_iter()
            .map(|&(i, t)| run_one(config, bases[i].as_ref(), config.n_grid[i], t))
            .collect::<Result<Vec<_>>>()
    };
    let records = if jobs == 0 {
        work()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(work)?
    };
    let points = records
        .chunks(config.trials)
        .map(|chunk| {
            let samples: Vec<f64> = chunk.iter().map(|r| config.observable(r) as f64).collect();
            Ok(PointStats {
                n: chunk[0].n,
                param: chunk[0].param,
                summary: summarize(&samples)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ExperimentResult {
        config: config.clone(),
        records,
        points,
    })
}

/// Half-width `c * sqrt(ln n / n)` of the slack around `[d/2, 1 + d/2]`.
pub fn median_location_xi(n: usize, c: f64) -> f64 {
    let nf = n as f64;
    c * (nf.ln() / nf).sqrt()
}

/// Fraction of trials in which the median of some perturbed candidate input
/// falls outside `[d/2 - xi, 1 + d/2 + xi]`, `xi = c sqrt(ln n / n)`.
///
/// Each trial perturbs the all-zeros, all-ones and ramp `i/n` inputs (the
/// extremes and the midpoint of possible medians) and one uniformly random
/// input from `[0,1]^n`.
pub fn median_location_check(n: usize, d: f64, trials: usize, master_seed: u64, c: f64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::param("trials", 0, "need at least one trial"));
    }
    if n == 0 {
        return Err(Error::param("n", 0, "need n >= 1"));
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::param("d", d, "noise magnitude must be positive"));
    }
    let xi = median_location_xi(n, c);
    let (lo, hi) = (d / 2.0 - xi, 1.0 + d / 2.0 + xi);
    let k = n.div_ceil(2) - 1;
    let outliers: usize = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = derive_stream(master_seed, t as u64);
            let random: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
            let candidates: [Box<dyn Fn(usize) -> f64>; 4] = [
                Box::new(|_| 0.0),
                Box::new(|_| 1.0),
                Box::new(|i| (i + 1) as f64 / n as f64),
                Box::new(|i| random[i]),
            ];
            let outside = candidates.iter().any(|base| {
                let mut v: Vec<f64> = (0..n).map(|i| base(i) + rng.uniform() * d).collect();
                let (_, m, _) = v.select_nth_unstable_by(k, f64::total_cmp);
                *m < lo || *m > hi
            });
            usize::from(outside)
        })
        .sum();
    Ok(outliers as f64 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perturbation::DLaw;

    fn config() -> ExperimentConfig {
        ExperimentConfig {
            generator: GeneratorFamily::Sorted,
            model: PerturbationModel::Additive { d: DLaw::constant(1e-12) },
            algorithm: Algorithm::Quicksort,
            rule: PivotRule::Classic,
            target: Target::Median,
            n_grid: vec![100],
            trials: 5,
            master_seed: 1,
        }
    }

    #[test]
    fn target_parsing() {
        assert_eq!("k=3".parse::<Target>(), Ok(Target::Rank(3)));
        assert_eq!("median".parse::<Target>(), Ok(Target::Median));
        assert_eq!("max".parse::<Target>(), Ok(Target::Maximum));
        assert_eq!("max-over-k".parse::<Target>(), Ok(Target::MaxOverK));
        assert!("k=0".parse::<Target>().is_err());
        assert!("k=x".parse::<Target>().is_err());
        assert_eq!(Target::Median.rank(7), Some(4));
        assert_eq!(Target::Maximum.rank(7), Some(7));
    }

    #[test]
    fn vanishing_noise_keeps_sorted_worst_case() {
        let r = run_trials(&config(), 0).unwrap();
        assert!(r.records.iter().all(|rec| rec.comparisons == 4950));
        assert_eq!(r.points[0].summary.mean, 4950.0);
    }

    #[test]
    fn same_seed_same_result() {
        let mut c = config();
        c.model = PerturbationModel::Partial { p: 0.5 };
        c.trials = 1;
        assert_eq!(run_trials(&c, 1).unwrap(), run_trials(&c, 0).unwrap());
    }

    #[test]
    fn invalid_configs() {
        let mut c = config();
        c.generator = GeneratorFamily::PpLower;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = config();
        c.n_grid = vec![8, 8];
        assert!(c.validate().is_err());
        let mut c = config();
        c.trials = 0;
        assert!(c.validate().is_err());
        let mut c = config();
        c.generator = GeneratorFamily::ScanLower;
        c.n_grid = vec![9];
        assert!(c.validate().is_err());
        let mut c = config();
        c.algorithm = Algorithm::HoareFind;
        c.target = Target::Rank(101);
        assert!(c.validate().is_err());
    }

    #[test]
    fn median_location_limits() {
        // With c scaled to 2d the slack grows with the noise and swamps the
        // median's O(d / sqrt(n)) spread.
        assert_eq!(median_location_check(1000, 1e6, 20, 3, 2e6), Ok(0.0));
        // A fixed c leaves a width-(1 + 2 xi) window that huge noise misses.
        assert_eq!(median_location_check(1000, 1e6, 20, 3, 4.0), Ok(1.0));
        assert!(median_location_check(1000, 1.0, 0, 3, 4.0).is_err());
    }
}
