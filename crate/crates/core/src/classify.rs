//! Growth classification of norm sequences sampled at geometric degrees.
//!
//! A sequence is `Converged` when its last two relative increments are
//! below `tol_conv`. Otherwise the increments `Δ_i = v_i - v_{i-1}` over the
//! last half of the samples are rescaled to a log-derivative
//! `Δ_i / ln(N_i / N_{i-1})` and regressed against `ln sqrt(N_i N_{i-1})`.
//! For `v ≈ c_0 + c_1 N^β` that slope is `β` regardless of the offset
//! `c_0`. The exponent is then refined against the exact increment model
//! `Δ_i ∝ (N_i^β - N_{i-1}^β)/β`, which removes the bias of unevenly spaced
//! degrees. An exponent near zero with a good `v ~ ln N` fit is
//! `LogDivergent`. The R² gate for `PowerDivergent` applies to the log-log
//! increment fit, which unlike a fit of `ln v` is not bent by `c_0`.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Classification {
    Converged,
    PowerDivergent { exponent: f64, stderr: f64 },
    LogDivergent,
    Undetermined,
}

impl Classification {
    pub fn is_divergent(&self) -> bool {
        matches!(
            self,
            Classification::PowerDivergent { .. } | Classification::LogDivergent
        )
    }

    pub fn label(&self) -> &'static str {
        match self {
            Classification::Converged => "Converged",
            Classification::PowerDivergent { .. } => "PowerDivergent",
            Classification::LogDivergent => "LogDivergent",
            Classification::Undetermined => "Undetermined",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassifierConfig {
    pub tol_conv: f64,
    pub min_r2: f64,
    /// Increment slopes at or below this count as logarithmic growth.
    pub log_slope_max: f64,
    pub min_points: usize,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            tol_conv: 1e-2,
            min_r2: 0.99,
            log_slope_max: 0.05,
            min_points: 4,
        }
    }
}

/// Norm values of a sequence of truncations with their classification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormScan {
    pub degrees: Vec<usize>,
    pub values: Vec<f64>,
    pub classification: Classification,
}

impl NormScan {
    pub fn new(degrees: Vec<usize>, values: Vec<f64>, config: &ClassifierConfig) -> Self {
        let classification = classify(&degrees, &values, config);
        Self {
            degrees,
            values,
            classification,
        }
    }

    pub fn last_value(&self) -> Option<f64> {
        self.values.last().copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub slope_stderr: f64,
}

/// Ordinary least squares `y = intercept + slope x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> LinearFit {
    let n = x.len().min(y.len()) as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    let slope_stderr = if n > 2.0 {
        (sse / (n - 2.0) / sxx).sqrt()
    } else {
        f64::INFINITY
    };
    LinearFit {
        slope,
        intercept,
        r2,
        slope_stderr,
    }
}

pub fn classify(degrees: &[usize], values: &[f64], config: &ClassifierConfig) -> Classification {
    let n = degrees.len().min(values.len());
    if n < config.min_points.max(3) || values[..n].iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Classification::Undetermined;
    }
    if degrees.windows(2).take(n - 1).any(|w| w[1] <= w[0] || w[0] == 0) {
        return Classification::Undetermined;
    }

    let rel_inc = |i: usize| {
        let (a, b) = (values[i - 1], values[i]);
        if a == b {
            0.0
        } else {
            (b - a).abs() / b.abs().max(a.abs())
        }
    };
    if rel_inc(n - 1) < config.tol_conv && rel_inc(n - 2) < config.tol_conv {
        return Classification::Converged;
    }

    let start = (n / 2).min(n - 3);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in (start + 1)..n {
        let delta = values[i] - values[i - 1];
        if delta <= 0.0 {
            return Classification::Undetermined;
        }
        let (lo, hi) = (degrees[i - 1] as f64, degrees[i] as f64);
        xs.push(0.5 * (lo.ln() + hi.ln()));
        ys.push((delta / (hi / lo).ln()).ln());
    }
    let increments = linear_fit(&xs, &ys);
    let bounds: Vec<(f64, f64)> = ((start + 1)..n)
        .map(|i| ((degrees[i - 1] as f64).ln(), (degrees[i] as f64).ln()))
        .collect();
    let ln_delta: Vec<f64> = ys
        .iter()
        .zip(&bounds)
        .map(|(y, &(a, b))| y + (b - a).ln())
        .collect();
    let exponent = refine_exponent(&bounds, &ln_delta, increments.slope);

    let log_n: Vec<f64> = degrees[start..n].iter().map(|&d| (d as f64).ln()).collect();
    let tail = &values[start..n];
    let log_growth = linear_fit(&log_n, tail);

    if exponent > config.log_slope_max {
        if increments.r2 >= config.min_r2 {
            Classification::PowerDivergent {
                exponent,
                stderr: increments.slope_stderr,
            }
        } else {
            Classification::Undetermined
        }
    } else if log_growth.slope > 0.0 && log_growth.r2 >= config.min_r2 {
        Classification::LogDivergent
    } else {
        Classification::Undetermined
    }
}

/// `ln((e^{β b} - e^{β a}) / β)`, continuous at `β = 0`.
fn ln_increment(beta: f64, a: f64, b: f64) -> f64 {
    let width = b - a;
    if beta.abs() * width < 1e-12 {
        width.ln()
    } else {
        beta * a + ((beta * width).exp_m1() / beta).ln()
    }
}

/// Least-squares `β` for `ln Δ_i = c + ln_increment(β, ln N_{i-1}, ln N_i)`
/// by golden-section search around the linearised estimate.
fn refine_exponent(bounds: &[(f64, f64)], ln_delta: &[f64], guess: f64) -> f64 {
    if !guess.is_finite() {
        return guess;
    }
    let sse = |beta: f64| {
        let r: Vec<f64> = bounds
            .iter()
            .zip(ln_delta)
            .map(|(&(a, b), &y)| y - ln_increment(beta, a, b))
            .collect();
        let mean = r.iter().sum::<f64>() / r.len() as f64;
        r.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
    };
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (guess - 1.0, guess + 1.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (sse(x1), sse(x2));
    for _ in 0..80 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = sse(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = sse(x2);
        }
    }
    0.5 * (lo + hi)
}
