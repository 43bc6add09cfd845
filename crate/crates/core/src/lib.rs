//! A laboratory for smoothed analysis of comparison-based selection and
//! sorting.
//!
//! Quicksort, Hoare's find (quickselect) and scan maxima are implemented with
//! exact comparison counting under four pivot rules. Inputs come from the
//! adversarial families of the known lower-bound constructions and are
//! perturbed by additive uniform noise or partial permutations. The
//! [`experiments`] module turns Monte Carlo runs into exponent fits, and
//! [`verify`] bundles the acceptance checks.
//!
//! All algorithms are generic over the scalar type (see [`Scalar`]); the
//! aliases below cover the common instantiations.

pub mod algorithms;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod oracles;
pub mod perturbation;
pub mod pivot;
pub mod scalar;
pub mod sequence;
pub mod verify;

pub use algorithms::{
    hoare_find, hoare_find_observed, partition_count, quicksort_count, scan_maxima,
    scan_maxima_run, Outcome, RunResult,
};
pub use error::{Error, Result};
pub use experiments::{
    fit_exponent, median_location_check, run_trials, summarize, ExperimentConfig,
    ExperimentResult, FitResult, Summary, Target, TrialRecord,
};
pub use generators::{GeneratorFamily, GeneratorSpec};
pub use oracles::{Algorithm, CoveringInstance};
pub use perturbation::{derive_stream, DLaw, PerturbationModel, RngStream};
pub use pivot::{select_pivot, PivotRule};
pub use scalar::{Field, Real, Scalar};
pub use sequence::Sequence;

/// Double-precision sequence, what the experiments run on.
pub type Seq = Sequence<f64>;
/// Single-precision sequence.
pub type Seq32 = Sequence<f32>;
/// Exact rational sequence; generators emit `i/n` without rounding.
pub type RationalSeq = Sequence<Rational>;
/// Exact rational scalar.
pub type Rational = num_rational::Ratio<i64>;
/// Exact rational used for exhaustive averages.
pub type ExactAverage = num_rational::Ratio<u64>;
