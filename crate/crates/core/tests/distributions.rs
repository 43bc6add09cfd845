use std::collections::HashMap;

use smoothlab::generators::gen_uniform_random;
use smoothlab::oracles::exhaustive_average_comparisons;
use smoothlab::perturbation::{additive_noise, apply_marked_permutation, mark_positions};
use smoothlab::{
    derive_stream, run_trials, Algorithm, DLaw, ExperimentConfig, GeneratorFamily,
    PerturbationModel, PivotRule, Seq, Target,
};

const SEED: u64 = 20_110_601;

/// Two-sided Kolmogorov-Smirnov statistic against `cdf`.
fn ks_statistic(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

#[test]
fn uniform_stream_mean() {
    let mut rng = derive_stream(SEED, 1);
    let n = 1_000_000;
    let mean = (0..n).map(|_| rng.uniform()).sum::<f64>() / n as f64;
    assert!((mean - 0.5).abs() < 0.01, "{mean}");
}

#[test]
fn additive_noise_is_uniform_on_zero_d() {
    let d = 2.5;
    let noise = additive_noise(100_000, d, &mut derive_stream(SEED, 2)).unwrap();
    assert!(noise.iter().all(|&x| (0.0..=d).contains(&x)));
    let ks = ks_statistic(noise, |x| x / d);
    // 1% critical value.
    assert!(ks < 1.63 / (100_000f64).sqrt(), "{ks}");
}

#[test]
fn marking_frequency() {
    let trials = 100_000;
    for p in [0.05, 0.3, 0.5, 0.9] {
        let marked = mark_positions(trials, p, &mut derive_stream(SEED, 3)).unwrap();
        assert!(marked.windows(2).all(|w| w[0] < w[1]));
        let freq = marked.len() as f64 / trials as f64;
        let tol = 3.0 * (p * (1.0 - p) / trials as f64).sqrt();
        assert!((freq - p).abs() <= tol, "p={p}: {freq}");
    }
}

#[test]
fn full_marking_gives_uniform_permutations() {
    let seq = Seq::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
    let trials = 1_000_000;
    let mut rng = derive_stream(SEED, 4);
    let mut counts: HashMap<Vec<u64>, usize> = HashMap::new();
    for _ in 0..trials {
        let out = smoothlab::perturbation::perturb_partial(&seq, 1.0, &mut rng).unwrap();
        *counts.entry(out.values().iter().map(|&v| v as u64).collect()).or_default() += 1;
    }
    assert_eq!(counts.len(), 24);
    for (perm, c) in counts {
        let f = c as f64 / trials as f64;
        assert!((f - 1.0 / 24.0).abs() < 0.005, "{perm:?}: {f}");
    }
}

#[test]
fn marked_permutation_touches_only_marked_slots() {
    let seq = Seq::new(vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
    let out = apply_marked_permutation(&seq, &[1, 3, 5], &[2, 0, 1]).unwrap();
    assert_eq!(out.values(), &[5.0, 2.0, 1.0, 4.0, 3.0]);
}

#[test]
fn uniform_random_generator_mean() {
    let s: Seq = gen_uniform_random(100_000, &mut derive_stream(SEED, 5)).unwrap();
    let mean = s.values().iter().sum::<f64>() / s.len() as f64;
    assert!((mean - 0.5).abs() < 0.01, "{mean}");
}

#[test]
fn exhaustive_quicksort_average_increases() {
    let avgs: Vec<_> = (1..=8)
        .map(|n| exhaustive_average_comparisons(n, Algorithm::Quicksort, PivotRule::Classic, None).unwrap())
        .collect();
    assert!(avgs.windows(2).all(|w| w[0] < w[1]), "{avgs:?}");
}

fn config(generator: GeneratorFamily, model: PerturbationModel, n_grid: Vec<usize>, trials: usize) -> ExperimentConfig {
    ExperimentConfig {
        generator,
        model,
        algorithm: Algorithm::Quicksort,
        rule: PivotRule::Classic,
        target: Target::Maximum,
        n_grid,
        trials,
        master_seed: SEED,
    }
}

#[test]
fn quicksort_on_nearly_sorted_input_is_quadratic() {
    let cfg = config(
        GeneratorFamily::Sorted,
        PerturbationModel::Additive { d: DLaw::constant(1e-9) },
        vec![256, 512, 1024, 2048],
        5,
    );
    let fit = run_trials(&cfg, 0).unwrap().fit().unwrap();
    assert!((fit.slope - 2.0).abs() < 0.05, "{fit:?}");
}

#[test]
fn quicksort_on_random_input_matches_expected_cost() {
    let cfg = config(
        GeneratorFamily::UniformRandom,
        PerturbationModel::Partial { p: 1.0 },
        vec![10_000, 20_000],
        40,
    );
    let result = run_trials(&cfg, 0).unwrap();
    for &n in &cfg.n_grid {
        // 2(n+1)H_n - 4n for a uniformly random permutation.
        let h: f64 = (1..=n).map(|i| 1.0 / i as f64).sum();
        let expected = 2.0 * (n as f64 + 1.0) * h - 4.0 * n as f64;
        let mean = result.mean_at(n).unwrap();
        assert!((mean / expected - 1.0).abs() < 0.02, "n={n}: {mean} vs {expected}");
    }
    // Ratio to n ln n creeps up towards 2 from below.
    let ratios = result.n_log_n_ratios();
    assert!(ratios[0].1 < ratios[1].1 && ratios[1].1 < 2.0, "{ratios:?}");
}
