use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// z-value of the two-sided 95% normal interval.
pub const Z95: f64 = 1.96;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// Unbiased sample variance; 0 for a single sample.
    pub variance: f64,
    pub ci_half_width: f64,
    /// Set when there are too few samples for a meaningful interval.
    pub low_confidence: bool,
}

pub fn summarize(samples: &[f64]) -> Result<Summary> {
    let count = samples.len();
    if count == 0 {
        return Err(Error::param("samples", 0, "need at least one sample"));
    }
    let mean = samples.iter().sum::<f64>() / count as f64;
    let variance = if count > 1 {
        samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64
    } else {
        0.0
    };
    Ok(Summary {
        count,
        mean,
        variance,
        ci_half_width: Z95 * (variance / count as f64).sqrt(),
        low_confidence: count < 2,
    })
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl FitResult {
    pub fn predict(&self, x: f64) -> f64 {
        (self.intercept + self.slope * x.ln()).exp()
    }
}

pub fn fit_exponent(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 2 {
        return Err(Error::param("points", points.len(), "need at least two points"));
    }
    if let Some(&(x, y)) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(Error::param("points", format!("({x}, {y})"), "values must be positive"));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::param("points", "identical n", "need two distinct n values"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    // A constant series is fit perfectly by a flat line.
    let r_squared = if syy <= f64::EPSILON * m {
        1.0
    } else {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summarize_examples() {
        let s = summarize(&[4.0, 4.0, 4.0]).unwrap();
        assert_eq!((s.mean, s.variance, s.ci_half_width), (4.0, 0.0, 0.0));
        let s = summarize(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((s.mean, s.variance), (2.0, 1.0));
        assert!((s.ci_half_width - 1.96 / 3f64.sqrt()).abs() < 1e-12);
        let s = summarize(&[7.0]).unwrap();
        assert_eq!((s.variance, s.ci_half_width, s.low_confidence), (0.0, 0.0, true));
        assert!(summarize(&[]).is_err());
    }

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = [16.0, 64.0, 256.0, 1024.0]
            .iter()
            .map(|&n: &f64| (n, 7.0 * n.powf(1.5)))
            .collect();
        let f = fit_exponent(&pts).unwrap();
        assert!((f.slope - 1.5).abs() < 1e-12);
        assert!((f.intercept - 7f64.ln()).abs() < 1e-9);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_fits() {
        let f = fit_exponent(&[(2.0, 4.0), (4.0, 16.0), (8.0, 64.0)]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12);
        let f = fit_exponent(&[(2.0, 5.0), (4.0, 5.0), (8.0, 5.0)]).unwrap();
        assert!(f.slope.abs() < 1e-12);
        assert_eq!(f.r_squared, 1.0);
    }

    #[test]
    fn fit_rejects_bad_input() {
        assert!(fit_exponent(&[(2.0, 4.0)]).is_err());
        assert!(fit_exponent(&[(2.0, 4.0), (0.0, 1.0)]).is_err());
        assert!(fit_exponent(&[(2.0, 4.0), (4.0, -1.0)]).is_err());
        assert!(fit_exponent(&[(2.0, 4.0), (2.0, 5.0)]).is_err());
    }
}
