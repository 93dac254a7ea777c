use std::fs;
use std::path::Path;

use bergman_cesaro::classify::{Classification, NormScan};
use bergman_cesaro::norms::{
    inclusion_ratio_scan, monomial_norm, norm_parseval, seminorm_family, InclusionScan, SeminormEntry,
};
use bergman_cesaro::quadrature::{norm_quadrature, QuadratureConfig, QuadratureNorm};
use bergman_cesaro::scans::{
    boundary_evidence, counterexample_blowup, counterexample_function, eigen_membership_scan,
    eigen_threshold_grid, expected_eigen_membership, gp_expected_exponent, gp_nuclearity_sum,
    schauder_partial_sum_check, BoundaryEvidence, CounterexampleKind, CounterexampleReport, ScanConfig,
    TailScan, ThresholdCase,
};
use bergman_cesaro::selftest::{run_selftest, SelftestReport};
use bergman_cesaro::series::eigenfunction;
use bergman_cesaro::special::ln_gamma;
use bergman_cesaro::spectra::{
    banach_spectrum, frechet_spectrum, lb_spectrum, sample_grid, spectral_ratio, step_union_crosscheck,
    waelbroeck, CrosscheckReport, LimitKind, Membership, SpectralDescription,
};
use bergman_cesaro::{NormError, ScanError, SpaceKind, SpaceSpec, SpectraError, TaylorTruncation};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::output::{emit, fmt_f64, to_csv, to_json, Format};
use crate::{CaseArg, Cli, Command, FunctionArg, KindArg, NormArgs, ScanArgs, ScanCommand, SpectrumArgs};

/// Relative agreement required between the Parseval and quadrature paths.
const PARSEVAL_CROSS_TOL: f64 = 1e-8;
const ASYMPTOTIC_TOL: f64 = 0.02;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    NonConverged(String),
    #[error("{0}")]
    Disagreement(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) | CliError::Io(_) => 2,
            CliError::NonConverged(_) => 3,
            CliError::Disagreement(_) => 4,
        }
    }
}

impl From<NormError> for CliError {
    fn from(e: NormError) -> Self {
        match e {
            NormError::NonConvergedQuadrature { .. } => CliError::NonConverged(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<ScanError> for CliError {
    fn from(e: ScanError) -> Self {
        match e {
            ScanError::Norm(n) => n.into(),
            ScanError::EigenResidual { .. } => CliError::Disagreement(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<SpectraError> for CliError {
    fn from(e: SpectraError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

/// Formatted report plus the status to exit with once it has been written.
struct Outcome {
    text: String,
    status: Result<(), CliError>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, status: Ok(()) }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let outcome = match &cli.command {
        Command::Norm(a) => cmd_norm(a, cli.format)?,
        Command::Spectrum(a) => cmd_spectrum(a, cli.format)?,
        Command::Scan(a) => cmd_scan(a, cli.format, cli.jobs)?,
        Command::Selftest(a) => cmd_selftest(a.quick, cli.format),
    };
    emit(&outcome.text, cli.out.as_deref())?;
    outcome.status
}

fn render<T: Serialize>(
    format: Format,
    command: &str,
    report: &T,
    header: &[&str],
    rows: impl FnOnce() -> Vec<Vec<String>>,
) -> String {
    match format {
        Format::Json => to_json(command, report),
        Format::Csv => to_csv(header, &rows()),
    }
}

fn finite(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Invalid(format!("{name} must be finite, got {v}")))
    }
}

fn banach_params(p: f64, alpha: f64) -> Result<(), CliError> {
    if finite("p", p)? < 1.0 {
        return Err(CliError::Invalid(format!("p must be >= 1, got {p}")));
    }
    if finite("alpha", alpha)? < 0.0 {
        return Err(CliError::Invalid(format!("alpha must be >= 0, got {alpha}")));
    }
    Ok(())
}

fn read_coeffs(path: Option<&Path>) -> Result<TaylorTruncation, CliError> {
    let path = path.ok_or_else(|| CliError::Invalid("--coeffs-file is required".into()))?;
    let text = fs::read_to_string(path)?;
    let pairs: Vec<[f64; 2]> = serde_json::from_str(&text).map_err(|e| {
        CliError::Invalid(format!(
            "{}: expected a JSON array of [re, im] pairs ({e})",
            path.display()
        ))
    })?;
    if pairs.is_empty() {
        return Err(CliError::Invalid(format!("{}: no coefficients", path.display())));
    }
    if pairs.iter().flatten().any(|v| !v.is_finite()) {
        return Err(CliError::Invalid(format!(
            "{}: coefficients must be finite",
            path.display()
        )));
    }
    Ok(TaylorTruncation::new(
        pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
    ))
}

fn quadrature_config(rel_tol: Option<f64>) -> Result<QuadratureConfig, CliError> {
    let mut cfg = QuadratureConfig::default();
    if let Some(t) = rel_tol {
        if !(t > 0.0 && t < 1.0) {
            return Err(CliError::Invalid(format!(
                "--rel-tol must lie in (0, 1), got {t}"
            )));
        }
        cfg.rel_tol = t;
    }
    Ok(cfg)
}

#[derive(Serialize)]
struct Asymptotic {
    /// `‖z^j‖^p j^(α+1)`.
    scaled: f64,
    limit: f64,
    ratio: f64,
    within_tolerance: bool,
}

#[derive(Serialize)]
struct MonomialReport {
    j: usize,
    p: f64,
    alpha: f64,
    value: f64,
    asymptotic: Option<Asymptotic>,
}

#[derive(Serialize)]
struct ParsevalReport {
    degree: usize,
    p: f64,
    alpha: f64,
    value: f64,
    quadrature: QuadratureNorm,
    rel_difference: f64,
}

#[derive(Serialize)]
struct QuadratureReport {
    degree: usize,
    p: f64,
    alpha: f64,
    value: f64,
    details: QuadratureNorm,
}

#[derive(Serialize)]
struct FamilyReport {
    degree: usize,
    p: f64,
    alpha: f64,
    kind: SpaceKind,
    entries: Vec<SeminormEntry>,
}

fn cmd_norm(a: &NormArgs, format: Format) -> Result<Outcome, CliError> {
    banach_params(a.p, a.alpha)?;
    if a.monomial {
        let value = monomial_norm(a.j, a.p, a.alpha);
        let asymptotic = a.check_asymptotic.then(|| {
            let scaled = value.powf(a.p) * (a.j as f64).powf(a.alpha + 1.0);
            let limit = (2f64.ln() + ln_gamma(a.alpha + 1.0) - (a.alpha + 1.0) * a.p.ln()).exp();
            let ratio = scaled / limit;
            Asymptotic {
                scaled,
                limit,
                ratio,
                within_tolerance: (ratio - 1.0).abs() < ASYMPTOTIC_TOL,
            }
        });
        let report = MonomialReport {
            j: a.j,
            p: a.p,
            alpha: a.alpha,
            value,
            asymptotic,
        };
        let text = render(
            format,
            "norm",
            &report,
            &["j", "p", "alpha", "value", "asymptotic_ratio"],
            || {
                vec![vec![
                    a.j.to_string(),
                    fmt_f64(a.p),
                    fmt_f64(a.alpha),
                    fmt_f64(value),
                    report
                        .asymptotic
                        .as_ref()
                        .map(|s| fmt_f64(s.ratio))
                        .unwrap_or_default(),
                ]]
            },
        );
        return Ok(Outcome::ok(text));
    }

    let f = read_coeffs(a.coeffs_file.as_deref())?;
    let cfg = quadrature_config(a.rel_tol)?;
    let row = |value: f64| {
        vec![vec![
            f.degree().to_string(),
            fmt_f64(a.p),
            fmt_f64(a.alpha),
            fmt_f64(value),
        ]]
    };
    let header = ["degree", "p", "alpha", "value"];

    if a.parseval {
        if a.p != 2.0 {
            return Err(CliError::Invalid(format!("--parseval needs p = 2, got {}", a.p)));
        }
        let value = norm_parseval(&f, a.alpha);
        let quadrature = norm_quadrature(&f, 2.0, a.alpha, &cfg)?;
        let rel_difference = if value == quadrature.value {
            0.0
        } else {
            (value - quadrature.value).abs() / value.abs().max(quadrature.value.abs())
        };
        let report = ParsevalReport {
            degree: f.degree(),
            p: 2.0,
            alpha: a.alpha,
            value,
            quadrature,
            rel_difference,
        };
        let text = render(format, "norm", &report, &header, || row(value));
        let status = if rel_difference <= PARSEVAL_CROSS_TOL {
            Ok(())
        } else {
            Err(CliError::Disagreement(format!(
                "Parseval and quadrature differ by {rel_difference:e} (tolerance {PARSEVAL_CROSS_TOL:e})"
            )))
        };
        Ok(Outcome { text, status })
    } else if a.quadrature {
        let details = norm_quadrature(&f, a.p, a.alpha, &cfg)?;
        let report = QuadratureReport {
            degree: f.degree(),
            p: a.p,
            alpha: a.alpha,
            value: details.value,
            details,
        };
        Ok(Outcome::ok(render(format, "norm", &report, &header, || {
            row(details.value)
        })))
    } else if a.family {
        let spec = SpaceSpec::new(a.p, a.alpha, space_kind(a.kind))?;
        let entries = seminorm_family(&f, &spec, a.steps, &cfg)?;
        let report = FamilyReport {
            degree: f.degree(),
            p: a.p,
            alpha: a.alpha,
            kind: spec.kind,
            entries,
        };
        let text = render(
            format,
            "norm",
            &report,
            &["n", "alpha", "value", "status"],
            || {
                report
                    .entries
                    .iter()
                    .map(|e| {
                        vec![
                            e.n.to_string(),
                            fmt_f64(e.alpha),
                            e.value.map(fmt_f64).unwrap_or_default(),
                            format!("{:?}", e.status),
                        ]
                    })
                    .collect()
            },
        );
        Ok(Outcome::ok(text))
    } else {
        Err(CliError::Invalid(
            "choose one of --monomial, --parseval, --quadrature, --family".into(),
        ))
    }
}

fn space_kind(k: KindArg) -> SpaceKind {
    match k {
        KindArg::Banach => SpaceKind::Banach,
        KindArg::Frechet => SpaceKind::FrechetIntersection,
        KindArg::Lb => SpaceKind::LbUnion,
    }
}

fn parse_lambda(s: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Invalid(format!("cannot parse lambda {s:?}; use `re` or `re,im`"));
    let mut parts = s.split(',').map(|t| t.trim().parse::<f64>());
    let re = parts.next().ok_or_else(bad)?.map_err(|_| bad())?;
    let im = match parts.next() {
        Some(v) => v.map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

fn parse_grid(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Invalid(format!("cannot parse grid {s:?}; use e.g. 100x100"));
    let (x, y) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let nx: usize = x.trim().parse().map_err(|_| bad())?;
    let ny: usize = y.trim().parse().map_err(|_| bad())?;
    if nx == 0 || ny == 0 {
        return Err(bad());
    }
    Ok((nx, ny))
}

#[derive(Serialize)]
struct Verdict {
    lambda: Complex64,
    membership: Membership,
}

#[derive(Serialize)]
struct SpectrumReport {
    kind: SpaceKind,
    p: f64,
    alpha: f64,
    ratio: f64,
    waelbroeck: bool,
    spectrum: SpectralDescription,
    verdicts: Vec<Verdict>,
}

#[derive(Serialize)]
struct CrosscheckOutput {
    p: f64,
    alpha: f64,
    grid: [usize; 2],
    excluded: usize,
    reports: Vec<CrosscheckReport>,
}

fn cmd_spectrum(a: &SpectrumArgs, format: Format) -> Result<Outcome, CliError> {
    finite("p", a.p)?;
    finite("alpha", a.alpha)?;
    if a.crosscheck {
        let (nx, ny) = parse_grid(&a.grid)?;
        if a.nmax == 0 {
            return Err(CliError::Invalid("--nmax must be at least 1".into()));
        }
        let kinds = match a.kind {
            None => vec![LimitKind::Frechet, LimitKind::Lb],
            Some(KindArg::Frechet) => vec![LimitKind::Frechet],
            Some(KindArg::Lb) => vec![LimitKind::Lb],
            Some(KindArg::Banach) => {
                return Err(CliError::Invalid(
                    "the cross-check needs --kind frechet or lb".into(),
                ))
            }
        };
        // validates (p, α) before the grid is built
        frechet_spectrum(a.p, a.alpha)?;
        let (grid, excluded) = sample_grid(a.p, a.alpha, nx, ny, (-1.0, 2.0), (-1.0, 1.0));
        let reports = kinds
            .into_iter()
            .map(|k| step_union_crosscheck(k, a.p, a.alpha, a.nmax, &grid))
            .collect::<Result<Vec<_>, _>>()?;
        let total: usize = reports.iter().map(|r| r.disagreements.len()).sum();
        let out = CrosscheckOutput {
            p: a.p,
            alpha: a.alpha,
            grid: [nx, ny],
            excluded,
            reports,
        };
        let text = render(
            format,
            "spectrum",
            &out,
            &["kind", "samples", "members", "disagreements"],
            || {
                out.reports
                    .iter()
                    .map(|r| {
                        vec![
                            format!("{:?}", r.kind),
                            r.samples.to_string(),
                            r.members.to_string(),
                            r.disagreements.len().to_string(),
                        ]
                    })
                    .collect()
            },
        );
        let status = if total == 0 {
            Ok(())
        } else {
            Err(CliError::Disagreement(format!(
                "{total} grid points disagree with the closed form"
            )))
        };
        return Ok(Outcome { text, status });
    }

    let kind = a
        .kind
        .ok_or_else(|| CliError::Invalid("--kind is required".into()))?;
    let mut spectrum = match kind {
        KindArg::Banach => banach_spectrum(a.p, a.alpha)?,
        KindArg::Frechet => frechet_spectrum(a.p, a.alpha)?,
        KindArg::Lb => lb_spectrum(a.p, a.alpha)?,
    };
    if a.waelbroeck {
        spectrum = waelbroeck(&spectrum);
    }
    let verdicts = a
        .lambda
        .iter()
        .map(|s| {
            let lambda = parse_lambda(s)?;
            Ok(Verdict {
                lambda,
                membership: spectrum.membership(lambda),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let report = SpectrumReport {
        kind: space_kind(kind),
        p: a.p,
        alpha: a.alpha,
        ratio: spectral_ratio(a.p, a.alpha),
        waelbroeck: a.waelbroeck,
        spectrum,
        verdicts,
    };
    let text = render(format, "spectrum", &report, &["re", "im", "membership"], || {
        report
            .verdicts
            .iter()
            .map(|v| {
                vec![
                    fmt_f64(v.lambda.re),
                    fmt_f64(v.lambda.im),
                    format!("{:?}", v.membership),
                ]
            })
            .collect()
    });
    Ok(Outcome::ok(text))
}

fn scan_rows(series: &str, scan: &NormScan, rows: &mut Vec<Vec<String>>) {
    for (d, v) in scan.degrees.iter().zip(&scan.values) {
        rows.push(vec![series.to_string(), d.to_string(), fmt_f64(*v)]);
    }
}

const SCAN_HEADER: [&str; 3] = ["series", "degree", "value"];

#[derive(Serialize)]
struct EigenReport {
    m: u32,
    p: f64,
    alpha: f64,
    expected_member: Option<bool>,
    scan: NormScan,
    boundary: Option<BoundaryEvidence>,
}

#[derive(Serialize)]
struct GridReport {
    cases: Vec<ThresholdCase>,
    decided: usize,
    agreeing: usize,
}

#[derive(Serialize)]
struct GpReport {
    p: f64,
    alpha: f64,
    m: u32,
    j_max: usize,
    expected_exponent: f64,
    scan: NormScan,
}

#[derive(Serialize)]
struct SchauderReport {
    function: String,
    p: f64,
    alpha: f64,
    kind: SpaceKind,
    reference_degree: usize,
    steps: Vec<TailScan>,
}

fn strict_status(strict: bool, scans: &[&NormScan]) -> Result<(), CliError> {
    if strict
        && scans
            .iter()
            .any(|s| s.classification == Classification::Undetermined)
    {
        Err(CliError::NonConverged("a scan classified as Undetermined".into()))
    } else {
        Ok(())
    }
}

fn scan_config(a: &ScanArgs) -> Result<ScanConfig, CliError> {
    let mut cfg = ScanConfig {
        n_max: a.nmax,
        ..ScanConfig::default()
    };
    if let Some(t) = a.rel_tol {
        if !(t > 0.0 && t < 1.0) {
            return Err(CliError::Invalid(format!(
                "--rel-tol must lie in (0, 1), got {t}"
            )));
        }
        cfg.quadrature.rel_tol = t;
    }
    if let Some(t) = a.tol_conv {
        if !(t > 0.0 && t < 1.0) {
            return Err(CliError::Invalid(format!(
                "--tol-conv must lie in (0, 1), got {t}"
            )));
        }
        cfg.classifier.tol_conv = t;
    }
    Ok(cfg)
}

fn cmd_scan(a: &ScanArgs, format: Format, jobs: Option<usize>) -> Result<Outcome, CliError> {
    let cfg = scan_config(a)?;
    match &a.scan {
        ScanCommand::Eigen {
            m,
            p,
            alpha,
            boundary_steps,
        } => {
            banach_params(*p, *alpha)?;
            let scan = eigen_membership_scan(*m, *p, *alpha, &cfg)?;
            let expected_member = expected_eigen_membership(*m, *p, *alpha);
            let boundary = if expected_member.is_none() && *alpha > 0.0 && *p > 1.0 {
                Some(boundary_evidence(*m, *p, *alpha, *boundary_steps, &cfg)?)
            } else {
                None
            };
            let report = EigenReport {
                m: *m,
                p: *p,
                alpha: *alpha,
                expected_member,
                scan,
                boundary,
            };
            let mut scans = vec![&report.scan];
            if let Some(b) = &report.boundary {
                scans.push(&b.banach);
                scans.extend(b.frechet_steps.iter().chain(&b.lb_steps).map(|s| &s.scan));
            }
            let status = strict_status(a.strict, &scans);
            let text = render(format, "scan", &report, &SCAN_HEADER, || {
                let mut rows = Vec::new();
                scan_rows("banach", &report.scan, &mut rows);
                if let Some(b) = &report.boundary {
                    for s in &b.frechet_steps {
                        scan_rows(&format!("frechet_step_{}", s.n), &s.scan, &mut rows);
                    }
                    for s in &b.lb_steps {
                        scan_rows(&format!("lb_step_{}", s.n), &s.scan, &mut rows);
                    }
                }
                rows
            });
            Ok(Outcome { text, status })
        }
        ScanCommand::Grid { ps, alphas, ms } => {
            for &p in ps {
                for &alpha in alphas {
                    banach_params(p, alpha)?;
                }
            }
            let cases = eigen_threshold_grid(ps, alphas, ms, &cfg, jobs)?;
            let decided = cases.iter().filter(|c| c.agrees().is_some()).count();
            let agreeing = cases.iter().filter(|c| c.agrees() == Some(true)).count();
            let report = GridReport {
                cases,
                decided,
                agreeing,
            };
            let scans: Vec<&NormScan> = report.cases.iter().map(|c| &c.scan).collect();
            let status = if agreeing < decided {
                Err(CliError::Disagreement(format!(
                    "{} of {decided} cases disagree with m < (2 + alpha)/p",
                    decided - agreeing
                )))
            } else {
                strict_status(a.strict, &scans)
            };
            let text = render(
                format,
                "scan",
                &report,
                &["p", "alpha", "m", "expected_member", "classification"],
                || {
                    report
                        .cases
                        .iter()
                        .map(|c| {
                            vec![
                                fmt_f64(c.p),
                                fmt_f64(c.alpha),
                                c.m.to_string(),
                                c.expected_member
                                    .map(|b| b.to_string())
                                    .unwrap_or_else(|| "boundary".into()),
                                c.scan.classification.label().to_string(),
                            ]
                        })
                        .collect()
                },
            );
            Ok(Outcome { text, status })
        }
        ScanCommand::Counterexample {
            p,
            alpha,
            epsilon,
            case,
            last_step,
        } => {
            finite("p", *p)?;
            finite("alpha", *alpha)?;
            let kind = match case {
                CaseArg::Frechet => CounterexampleKind::Frechet,
                CaseArg::Lb => CounterexampleKind::Lb,
            };
            let report: CounterexampleReport =
                counterexample_blowup(*p, *alpha, *epsilon, kind, *last_step, &cfg)?;
            let mut scans = vec![&report.function_scan.scan];
            scans.extend(report.inverse_scans.iter().map(|s| &s.scan));
            let status = strict_status(a.strict, &scans);
            let text = render(format, "scan", &report, &SCAN_HEADER, || {
                let mut rows = Vec::new();
                scan_rows(
                    &format!("function_step_{}", report.function_scan.n),
                    &report.function_scan.scan,
                    &mut rows,
                );
                for s in &report.inverse_scans {
                    scan_rows(&format!("inverse_step_{}", s.n), &s.scan, &mut rows);
                }
                rows
            });
            Ok(Outcome { text, status })
        }
        ScanCommand::Gp { p, alpha, m, jmax } => {
            banach_params(*p, *alpha)?;
            let scan = gp_nuclearity_sum(*p, *alpha, *m, *jmax, &cfg.classifier)?;
            let report = GpReport {
                p: *p,
                alpha: *alpha,
                m: *m,
                j_max: *jmax,
                expected_exponent: gp_expected_exponent(*p, *m),
                scan,
            };
            let status = strict_status(a.strict, &[&report.scan]);
            let text = render(format, "scan", &report, &["degree", "value"], || {
                report
                    .scan
                    .degrees
                    .iter()
                    .zip(&report.scan.values)
                    .map(|(d, v)| vec![d.to_string(), fmt_f64(*v)])
                    .collect()
            });
            Ok(Outcome { text, status })
        }
        ScanCommand::Schauder {
            function,
            p,
            alpha,
            kind,
            steps,
            epsilon,
            m,
            reference,
        } => {
            let spec = SpaceSpec::new(*p, *alpha, space_kind(*kind))?;
            let reference_degree =
                reference.unwrap_or(if *p == 2.0 { 16 * cfg.n_max } else { 2 * cfg.n_max });
            let (name, f) = match function {
                FunctionArg::F1 => (
                    "f1".to_string(),
                    eigenfunction(1, reference_degree).map_err(ScanError::from)?,
                ),
                FunctionArg::Eigen => (
                    format!("eigen_{m}"),
                    eigenfunction(*m, reference_degree).map_err(ScanError::from)?,
                ),
                FunctionArg::Feps => (
                    format!("feps_{epsilon}"),
                    counterexample_function(
                        *p,
                        *alpha,
                        *epsilon,
                        CounterexampleKind::Frechet,
                        reference_degree,
                    )?,
                ),
            };
            let tails = schauder_partial_sum_check(&f, &spec, *steps, &cfg)?;
            let report = SchauderReport {
                function: name,
                p: *p,
                alpha: *alpha,
                kind: spec.kind,
                reference_degree,
                steps: tails,
            };
            let status = if a.strict && report.steps.iter().any(|t| !t.converged_to_zero) {
                Err(CliError::NonConverged(
                    "a tail sequence did not decrease to zero".into(),
                ))
            } else {
                Ok(())
            };
            let text = render(format, "scan", &report, &SCAN_HEADER, || {
                let mut rows = Vec::new();
                for t in &report.steps {
                    for (d, v) in t.degrees.iter().zip(&t.tails) {
                        rows.push(vec![format!("step_{}", t.n), d.to_string(), fmt_f64(*v)]);
                    }
                }
                rows
            });
            Ok(Outcome { text, status })
        }
        ScanCommand::Inclusion { p, mu, gamma, jmax } => {
            finite("p", *p)?;
            let report: InclusionScan = inclusion_ratio_scan(*p, *mu, *gamma, *jmax)?;
            let text = render(format, "scan", &report, &["j", "ratio"], || {
                report
                    .ratios
                    .iter()
                    .enumerate()
                    .map(|(j, r)| vec![j.to_string(), fmt_f64(*r)])
                    .collect()
            });
            Ok(Outcome::ok(text))
        }
    }
}

fn cmd_selftest(quick: bool, format: Format) -> Outcome {
    let report: SelftestReport = run_selftest(quick);
    for c in &report.checks {
        eprintln!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    let status = if report.all_passed() {
        Ok(())
    } else {
        let failed = report.checks.iter().filter(|c| !c.passed).count();
        Err(CliError::Disagreement(format!(
            "{failed} self-test check(s) failed"
        )))
    };
    let text = render(format, "selftest", &report, &["name", "passed", "detail"], || {
        report
            .checks
            .iter()
            .map(|c| vec![c.name.to_string(), c.passed.to_string(), c.detail.clone()])
            .collect()
    });
    Outcome { text, status }
}
