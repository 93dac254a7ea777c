//! Invariant suite behind `cesaro selftest`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::{classify, Classification, ClassifierConfig};
use crate::norms::norm_parseval_with;
use crate::quadrature::{norm_quadrature, QuadratureConfig};
use crate::scans::{eigen_threshold_grid, ScanConfig};
use crate::series::{
    cesaro_apply, cesaro_inverse_apply, eigen_residual, eigenfunction, recover_from_cesaro, TaylorTruncation,
};
use crate::special::{LnBeta, StirlingBeta};
use crate::spectra::{banach_spectrum, frechet_spectrum, sample_grid, step_union_crosscheck, LimitKind};

const SEED: u64 = 0x5eed_cafe;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub quick: bool,
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> TaylorTruncation {
    TaylorTruncation::new(
        (0..=degree)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )
}

fn check(name: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult { name, passed, detail }
}

pub fn run_selftest(quick: bool) -> SelftestReport {
    run_selftest_with(quick, &StirlingBeta)
}

/// Runs the suite with `beta` as the Beta kernel of the Parseval path; the
/// quadrature path does not use it, so a faulty kernel shows up as a
/// Parseval disagreement.
pub fn run_selftest_with(quick: bool, beta: &dyn LnBeta) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checks = Vec::new();

    let polys: Vec<TaylorTruncation> = (0..if quick { 20 } else { 100 })
        .map(|_| random_poly(&mut rng, 200))
        .collect();
    let roundtrip = polys
        .iter()
        .map(|f| cesaro_inverse_apply(&cesaro_apply(f)).max_abs_diff(f, 200))
        .fold(0.0, f64::max);
    checks.push(check(
        "cesaro roundtrip",
        roundtrip < 1e-12,
        format!("max error {roundtrip:.3e}"),
    ));

    let recovery = polys
        .iter()
        .map(|f| recover_from_cesaro(&cesaro_apply(f)).max_abs_diff(f, 199))
        .fold(0.0, f64::max);
    checks.push(check(
        "recover from cesaro",
        recovery < 1e-12,
        format!("max error {recovery:.3e}"),
    ));

    let residual = (1..=10)
        .map(|m| eigen_residual(&eigenfunction(m, 500).expect("m >= 1"), m))
        .fold(0.0, f64::max);
    checks.push(check(
        "eigen residual",
        residual < 1e-12,
        format!("max residual {residual:.3e}"),
    ));

    let qcfg = QuadratureConfig::default();
    let mut parseval_worst = 0.0f64;
    for f in polys.iter().take(3) {
        let f = f.with_degree(40);
        for alpha in [0.5, 1.0, 2.0] {
            let quad = norm_quadrature(&f, 2.0, alpha, &qcfg)
                .map(|q| q.value)
                .unwrap_or(f64::NAN);
            let pars = norm_parseval_with(&f, alpha, beta);
            let rel = (pars / quad - 1.0).abs();
            parseval_worst = if rel.is_nan() {
                f64::INFINITY
            } else {
                parseval_worst.max(rel)
            };
        }
    }
    checks.push(check(
        "parseval agreement",
        parseval_worst < 1e-10,
        format!("max relative difference {parseval_worst:.3e}"),
    ));

    let samples = if quick { 10_000 } else { 100_000 };
    let mut mismatches = 0usize;
    for &(p, alpha) in &[(2.0, 2.0), (1.5, 1.0), (3.0, 0.5), (2.0, 3.5)] {
        let specs = [banach_spectrum(p, alpha), frechet_spectrum(p, alpha)];
        for spec in specs.iter().flatten() {
            for _ in 0..samples / 8 {
                let l = Complex64::new(rng.random_range(-1.0..2.0), rng.random_range(-1.0..1.0));
                if spec.in_disk(l) != spec.in_disk_reciprocal(l) {
                    mismatches += 1;
                }
            }
        }
    }
    checks.push(check(
        "predicate equivalence",
        mismatches == 0,
        format!("{mismatches} mismatches over {samples} samples"),
    ));

    let ccfg = ClassifierConfig::default();
    let degrees: Vec<usize> = (0..=14).map(|k| 1usize << k).collect();
    let mut classifier_ok = classify(&degrees, &vec![2.0; degrees.len()], &ccfg) == Classification::Converged;
    let logs: Vec<f64> = degrees.iter().map(|&n| (n as f64).ln() + 1.0).collect();
    classifier_ok &= classify(&degrees, &logs, &ccfg) == Classification::LogDivergent;
    for tenth in 1..=10 {
        let b = tenth as f64 / 10.0;
        let v: Vec<f64> = degrees.iter().map(|&n| (n as f64).powf(b)).collect();
        classifier_ok &= matches!(
            classify(&degrees, &v, &ccfg),
            Classification::PowerDivergent { exponent, .. } if (exponent / b - 1.0).abs() < 0.05
        );
    }
    checks.push(check(
        "classifier soundness",
        classifier_ok,
        "constant, log and power laws".into(),
    ));

    let scfg = ScanConfig {
        n_max: if quick { 1 << 10 } else { 1 << 14 },
        ..ScanConfig::default()
    };
    let detail;
    let passed = match eigen_threshold_grid(&[2.0], &[0.5, 1.0, 2.0, 3.5], &[1, 2, 3, 4, 5], &scfg, None) {
        Ok(cases) => {
            let decided: Vec<bool> = cases.iter().filter_map(|c| c.agrees()).collect();
            let agree = decided.iter().filter(|&&a| a).count();
            detail = format!(
                "{agree}/{} non-boundary cases at N_max = {}",
                decided.len(),
                scfg.n_max
            );
            agree == decided.len()
        }
        Err(e) => {
            detail = e.to_string();
            false
        }
    };
    checks.push(check("threshold fidelity (p = 2)", passed, detail));

    let side = if quick { 20 } else { 100 };
    let mut disagreements = 0usize;
    let mut points = 0usize;
    let mut failure = None;
    for &(p, alpha) in &[(2.0, 2.0), (1.5, 1.0)] {
        let (grid, _) = sample_grid(p, alpha, side, side, (-1.0, 2.0), (-1.0, 1.0));
        for kind in [LimitKind::Frechet, LimitKind::Lb] {
            match step_union_crosscheck(kind, p, alpha, 100, &grid) {
                Ok(r) => {
                    disagreements += r.disagreements.len();
                    points += r.samples;
                }
                Err(e) => failure = Some(e.to_string()),
            }
        }
    }
    checks.push(check(
        "spectral cross-check",
        disagreements == 0 && failure.is_none(),
        failure.unwrap_or_else(|| format!("{disagreements} disagreements over {points} points")),
    ));

    SelftestReport { quick, checks }
}
