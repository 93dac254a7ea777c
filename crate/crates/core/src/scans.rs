//! Numerical scans: truncation norms of eigenfunctions and counterexample
//! functions, Grothendieck–Pietsch ratio sums and partial-sum tails.
//!
//! Norms at `p = 2` come from prefix sums of the Parseval series, so a whole
//! scan costs one pass over the coefficients. Other exponents evaluate the
//! quadrature at each scan degree; a failed evaluation is recorded as `NaN`
//! and the classifier turns it into `Undetermined`.

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{linear_fit, ClassifierConfig, NormScan};
use crate::error::ScanError;
use crate::norms::{monomial_norm, parseval_weights, SpaceKind, SpaceSpec};
use crate::quadrature::{norm_quadrature, QuadratureConfig};
use crate::series::{
    binomial_series_coeffs, cesaro_inverse_apply, eigen_residual, eigenfunction, BinomialSign,
    TaylorTruncation,
};
use crate::spectra::{integer_boundary, spectral_ratio};

/// Degree at which the eigenfunction residual is checked before a scan.
pub const EIGEN_CHECK_DEGREE: usize = 500;
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanConfig {
    pub n_max: usize,
    pub quadrature: QuadratureConfig,
    pub classifier: ClassifierConfig,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            n_max: 1 << 14,
            quadrature: QuadratureConfig {
                panel_nodes: 8,
                angular_oversampling: 2.0,
                rel_tol: 1e-4,
                max_refinements: 4,
            },
            classifier: ClassifierConfig::default(),
        }
    }
}

/// `1, 2, 4, ...` up to `n_max`, with `n_max` itself appended when it is not
/// a power of two.
pub fn scan_degrees(n_max: usize) -> Vec<usize> {
    let mut d: Vec<usize> = std::iter::successors(Some(1usize), |&k| k.checked_mul(2))
        .take_while(|&k| k <= n_max)
        .collect();
    if d.last() != Some(&n_max) && n_max > 0 {
        d.push(n_max);
    }
    d
}

/// `‖S_N f‖_{p,α}` for each `N` in `degrees`.
pub fn truncation_norms(
    f: &TaylorTruncation,
    p: f64,
    alpha: f64,
    degrees: &[usize],
    quadrature: &QuadratureConfig,
) -> Vec<f64> {
    if p == 2.0 {
        let top = degrees.iter().copied().max().unwrap_or(0);
        let w = parseval_weights(alpha, top);
        let mut acc = 0.0;
        let mut prefix = Vec::with_capacity(top + 1);
        for (k, wk) in w.iter().enumerate() {
            acc += f.coeff(k).norm_sqr() * wk;
            prefix.push(acc);
        }
        degrees.iter().map(|&n| prefix[n].sqrt()).collect()
    } else {
        degrees
            .iter()
            .map(|&n| {
                norm_quadrature(&f.with_degree(n), p, alpha, quadrature)
                    .map(|q| q.value)
                    .unwrap_or(f64::NAN)
            })
            .collect()
    }
}

fn norm_scan(f: &TaylorTruncation, p: f64, alpha: f64, config: &ScanConfig) -> NormScan {
    let degrees = scan_degrees(config.n_max);
    let values = truncation_norms(f, p, alpha, &degrees, &config.quadrature);
    NormScan::new(degrees, values, &config.classifier)
}

fn check_scan_config(config: &ScanConfig) -> Result<(), ScanError> {
    if config.n_max < 8 {
        return Err(ScanError::InvalidParameters(format!(
            "n_max must be at least 8, got {}",
            config.n_max
        )));
    }
    Ok(())
}

fn check_banach(p: f64, alpha: f64) -> Result<(), ScanError> {
    if !(p.is_finite() && p >= 1.0 && alpha.is_finite() && alpha >= 0.0) {
        return Err(ScanError::InvalidParameters(format!(
            "need p >= 1 and alpha >= 0, got p = {p}, alpha = {alpha}"
        )));
    }
    Ok(())
}

/// `Some(m < (2 + α)/p)`, or `None` on the boundary `m = (2 + α)/p`.
pub fn expected_eigen_membership(m: u32, p: f64, alpha: f64) -> Option<bool> {
    let r = spectral_ratio(p, alpha);
    if integer_boundary(r) == Some(m) {
        None
    } else {
        Some((m as f64) < r)
    }
}

/// Norms of truncations of `f_m = z^{m-1}(1 - z)^{-m}` in `A^p_α`.
pub fn eigen_membership_scan(m: u32, p: f64, alpha: f64, config: &ScanConfig) -> Result<NormScan, ScanError> {
    check_banach(p, alpha)?;
    check_scan_config(config)?;
    let check = eigenfunction(m, EIGEN_CHECK_DEGREE.min(config.n_max))?;
    let residual = eigen_residual(&check, m);
    if residual.is_nan() || residual >= EIGEN_RESIDUAL_TOL {
        return Err(ScanError::EigenResidual { m, residual });
    }
    let f = eigenfunction(m, config.n_max)?;
    Ok(norm_scan(&f, p, alpha, config))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdCase {
    pub p: f64,
    pub alpha: f64,
    pub m: u32,
    /// `None` on the boundary `m = (2 + α)/p`.
    pub expected_member: Option<bool>,
    pub scan: NormScan,
}

impl ThresholdCase {
    /// Agreement of the classification with `m < (2 + α)/p`; `None` on the
    /// boundary.
    pub fn agrees(&self) -> Option<bool> {
        self.expected_member.map(|member| {
            if member {
                self.scan.classification == crate::classify::Classification::Converged
            } else {
                self.scan.classification.is_divergent()
            }
        })
    }
}

fn with_jobs<T: Send>(jobs: Option<usize>, work: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        },
        None => work(),
    }
}

/// Eigen membership scans over a `(p, α, m)` grid, run in parallel with at
/// most `jobs` threads (rayon's default when `None`).
pub fn eigen_threshold_grid(
    ps: &[f64],
    alphas: &[f64],
    ms: &[u32],
    config: &ScanConfig,
    jobs: Option<usize>,
) -> Result<Vec<ThresholdCase>, ScanError> {
    let cases: Vec<(f64, f64, u32)> = ps
        .iter()
        .flat_map(|&p| {
            alphas
                .iter()
                .flat_map(move |&a| ms.iter().map(move |&m| (p, a, m)))
        })
        .collect();
    with_jobs(jobs, || {
        cases
            .par_iter()
            .map(|&(p, alpha, m)| {
                Ok(ThresholdCase {
                    p,
                    alpha,
                    m,
                    expected_member: expected_eigen_membership(m, p, alpha),
                    scan: eigen_membership_scan(m, p, alpha, config)?,
                })
            })
            .collect()
    })
}

/// A norm scan at one step `α ± 1/n` of a Fréchet or (LB) space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepScan {
    pub n: u32,
    pub alpha: f64,
    pub scan: NormScan,
}

/// Step-level and limit-level evidence for the boundary case
/// `m = (2 + α)/p`, where only an inclusion is known.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryEvidence {
    pub m: u32,
    pub p: f64,
    pub alpha: f64,
    /// The scan in `A^p_α` itself.
    pub banach: NormScan,
    /// Steps `α + 1/n`, `n = 1..=steps`.
    pub frechet_steps: Vec<StepScan>,
    /// Steps `α - 1/n` for the admissible `n <= steps`.
    pub lb_steps: Vec<StepScan>,
}

impl BoundaryEvidence {
    /// Fréchet steps classified convergent, which is what membership of `f_m`
    /// in the intersection would require at every step.
    pub fn frechet_converged_steps(&self) -> Vec<u32> {
        self.frechet_steps
            .iter()
            .filter(|s| s.scan.classification == crate::classify::Classification::Converged)
            .map(|s| s.n)
            .collect()
    }
}

pub fn boundary_evidence(
    m: u32,
    p: f64,
    alpha: f64,
    steps: u32,
    config: &ScanConfig,
) -> Result<BoundaryEvidence, ScanError> {
    let banach = eigen_membership_scan(m, p, alpha, config)?;
    let f = eigenfunction(m, config.n_max)?;
    let step_scans = |spec: SpaceSpec| -> Result<Vec<StepScan>, ScanError> {
        (spec.first_step()..=steps)
            .map(|n| {
                let a = spec.step_alpha(n)?;
                Ok(StepScan {
                    n,
                    alpha: a,
                    scan: norm_scan(&f, p, a, config),
                })
            })
            .collect()
    };
    Ok(BoundaryEvidence {
        m,
        p,
        alpha,
        banach,
        frechet_steps: step_scans(SpaceSpec::frechet(p, alpha)?)?,
        lb_steps: step_scans(SpaceSpec::lb(p, alpha)?)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CounterexampleKind {
    /// `f_ε = (1 + z)^{-(α+1-ε)/p}` against the steps `α + 1/n`.
    Frechet,
    /// `g_ε = (1 + z)^{-(α+1-2ε)/p}` against the steps `α - 1/n`.
    Lb,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub kind: CounterexampleKind,
    pub p: f64,
    pub alpha: f64,
    pub epsilon: f64,
    /// `s` in `(1 + z)^{-s}`.
    pub exponent: f64,
    /// Least step `n` with `1/n < ε` (and `n > 1/α` for (LB)).
    pub base_step: u32,
    /// Norms of the function itself at the base step.
    pub function_scan: StepScan,
    /// Norms of its inverse Cesàro image at each tested step.
    pub inverse_scans: Vec<StepScan>,
}

impl CounterexampleReport {
    /// The function scan and the inverse scan at the base step.
    pub fn pair(&self) -> (&NormScan, Option<&NormScan>) {
        (
            &self.function_scan.scan,
            self.inverse_scans
                .iter()
                .find(|s| s.n == self.base_step)
                .map(|s| &s.scan),
        )
    }

    pub fn divergent_steps(&self) -> Vec<u32> {
        self.inverse_scans
            .iter()
            .filter(|s| s.scan.classification.is_divergent())
            .map(|s| s.n)
            .collect()
    }
}

fn counterexample_parts(
    p: f64,
    alpha: f64,
    epsilon: f64,
    kind: CounterexampleKind,
) -> Result<(SpaceSpec, f64), ScanError> {
    if !(epsilon > 0.0 && epsilon < 1.0 && p >= 1.0 + 2.0 * epsilon) {
        return Err(ScanError::InvalidEpsilon { epsilon, p });
    }
    Ok(match kind {
        CounterexampleKind::Frechet => (SpaceSpec::frechet(p, alpha)?, (alpha + 1.0 - epsilon) / p),
        CounterexampleKind::Lb => (SpaceSpec::lb(p, alpha)?, (alpha + 1.0 - 2.0 * epsilon) / p),
    })
}

/// Truncation of `f_ε` or `g_ε` at `degree`.
pub fn counterexample_function(
    p: f64,
    alpha: f64,
    epsilon: f64,
    kind: CounterexampleKind,
    degree: usize,
) -> Result<TaylorTruncation, ScanError> {
    let (_, exponent) = counterexample_parts(p, alpha, epsilon, kind)?;
    Ok(binomial_series_coeffs(exponent, BinomialSign::PlusZ, degree)?)
}

/// Norm growth of the counterexample function and of its inverse Cesàro
/// image at the steps up to `last_step`.
pub fn counterexample_blowup(
    p: f64,
    alpha: f64,
    epsilon: f64,
    kind: CounterexampleKind,
    last_step: u32,
    config: &ScanConfig,
) -> Result<CounterexampleReport, ScanError> {
    let (spec, exponent) = counterexample_parts(p, alpha, epsilon, kind)?;
    check_scan_config(config)?;
    let base_step = ((1.0 / epsilon).floor() as u32 + 1).max(spec.first_step());
    if last_step < base_step {
        return Err(ScanError::InvalidParameters(format!(
            "last step {last_step} is below the base step {base_step}"
        )));
    }

    let f = binomial_series_coeffs(exponent, BinomialSign::PlusZ, config.n_max)?;
    let inverse = cesaro_inverse_apply(&f);

    let base_alpha = spec.step_alpha(base_step)?;
    let function_scan = StepScan {
        n: base_step,
        alpha: base_alpha,
        scan: norm_scan(&f, p, base_alpha, config),
    };
    let inverse_scans = (spec.first_step()..=last_step)
        .map(|n| {
            let a = spec.step_alpha(n)?;
            Ok(StepScan {
                n,
                alpha: a,
                scan: norm_scan(&inverse, p, a, config),
            })
        })
        .collect::<Result<Vec<_>, ScanError>>()?;

    Ok(CounterexampleReport {
        kind,
        p,
        alpha,
        epsilon,
        exponent,
        base_step,
        function_scan,
        inverse_scans,
    })
}

/// `‖z^j‖_{p,α+1} / ‖z^j‖_{p,α+1/m}`.
pub fn gp_ratio(j: usize, p: f64, alpha: f64, m: u32) -> f64 {
    monomial_norm(j, p, alpha + 1.0) / monomial_norm(j, p, alpha + 1.0 / m as f64)
}

/// Growth exponent `1 - (1 - 1/m)/p` expected for the partial sums.
pub fn gp_expected_exponent(p: f64, m: u32) -> f64 {
    1.0 - (1.0 - 1.0 / m as f64) / p
}

/// Partial sums `Σ_{j <= J} gp_ratio(j)` at the scan degrees up to `j_max`.
pub fn gp_nuclearity_sum(
    p: f64,
    alpha: f64,
    m: u32,
    j_max: usize,
    classifier: &ClassifierConfig,
) -> Result<NormScan, ScanError> {
    if m < 2 {
        return Err(ScanError::InvalidParameters(format!(
            "m must be at least 2, got {m}"
        )));
    }
    check_banach(p, alpha)?;
    if j_max < 8 {
        return Err(ScanError::InvalidParameters(format!(
            "j_max must be at least 8, got {j_max}"
        )));
    }
    let degrees = scan_degrees(j_max);
    let mut values = Vec::with_capacity(degrees.len());
    let mut acc = 0.0;
    let mut next = degrees.iter().peekable();
    for j in 0..=j_max {
        acc += gp_ratio(j, p, alpha, m);
        if next.peek() == Some(&&j) {
            values.push(acc);
            next.next();
        }
    }
    Ok(NormScan::new(degrees, values, classifier))
}

/// Tails `‖f - S_N f‖` in one step seminorm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailScan {
    /// Step index, or 0 for the Banach norm itself.
    pub n: u32,
    pub alpha: f64,
    pub degrees: Vec<usize>,
    pub tails: Vec<f64>,
    pub nonincreasing: bool,
    /// Log-log slope of the nonzero tails over the last half of the degrees.
    pub decay_exponent: Option<f64>,
    pub converged_to_zero: bool,
}

impl TailScan {
    pub fn last_tail(&self) -> f64 {
        self.tails.last().copied().unwrap_or(f64::NAN)
    }
}

fn tail_norms(
    f: &TaylorTruncation,
    p: f64,
    alpha: f64,
    degrees: &[usize],
    quadrature: &QuadratureConfig,
) -> Vec<f64> {
    let top = f.degree();
    if p == 2.0 {
        let w = parseval_weights(alpha, top);
        let mut suffix = vec![0.0; top + 2];
        for k in (0..=top).rev() {
            suffix[k] = suffix[k + 1] + f.coeff(k).norm_sqr() * w[k];
        }
        degrees.iter().map(|&n| suffix[n + 1].sqrt()).collect()
    } else {
        degrees
            .iter()
            .map(|&n| {
                let mut c = f.coeffs().to_vec();
                c[..=n]
                    .iter_mut()
                    .for_each(|a| *a = num_complex::Complex64::new(0.0, 0.0));
                norm_quadrature(&TaylorTruncation::new(c), p, alpha, quadrature)
                    .map(|q| q.value)
                    .unwrap_or(f64::NAN)
            })
            .collect()
    }
}

fn tail_scan(n: u32, alpha: f64, degrees: Vec<usize>, tails: Vec<f64>) -> TailScan {
    let finite = tails.iter().all(|t| t.is_finite());
    let nonincreasing = finite && tails.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    let half = tails.len() / 2;
    let (xs, ys): (Vec<f64>, Vec<f64>) = degrees[half..]
        .iter()
        .zip(&tails[half..])
        .filter(|(_, &t)| t > 0.0)
        .map(|(&d, &t)| ((d as f64).ln(), t.ln()))
        .unzip();
    let decay_exponent = (xs.len() >= 3).then(|| linear_fit(&xs, &ys).slope);
    let last = tails.last().copied().unwrap_or(f64::NAN);
    let converged_to_zero = nonincreasing && (last == 0.0 || decay_exponent.is_some_and(|s| s < 0.0));
    TailScan {
        n,
        alpha,
        degrees,
        tails,
        nonincreasing,
        decay_exponent,
        converged_to_zero,
    }
}

/// Partial-sum tails of `f` against its own (longer) truncation, in each
/// admissible step seminorm `n <= steps` of `spec`, at the scan degrees up
/// to `config.n_max`. A Banach `spec` yields a single scan with `n = 0`.
pub fn schauder_partial_sum_check(
    f: &TaylorTruncation,
    spec: &SpaceSpec,
    steps: u32,
    config: &ScanConfig,
) -> Result<Vec<TailScan>, ScanError> {
    check_scan_config(config)?;
    if f.degree() <= config.n_max {
        return Err(ScanError::InvalidParameters(format!(
            "reference truncation degree {} must exceed n_max = {}",
            f.degree(),
            config.n_max
        )));
    }
    let degrees = scan_degrees(config.n_max);
    let levels: Vec<(u32, f64)> = match spec.kind {
        SpaceKind::Banach => vec![(0, spec.alpha)],
        _ => (spec.first_step()..=steps)
            .map(|n| Ok((n, spec.step_alpha(n)?)))
            .collect::<Result<_, ScanError>>()?,
    };
    Ok(levels
        .into_iter()
        .map(|(n, a)| {
            let tails = tail_norms(f, spec.p, a, &degrees, &config.quadrature);
            tail_scan(n, a, degrees.clone(), tails)
        })
        .collect())
}
