//! Acceptance criteria, one PASS/FAIL line each. Exits with status 1 when
//! any criterion fails.

use std::process::ExitCode;

use bergman_cesaro::classify::Classification;
use bergman_cesaro::norms::{inclusion_ratio_scan, monomial_norm, SpaceSpec};
use bergman_cesaro::quadrature::{norm_quadrature, QuadratureConfig};
use bergman_cesaro::scans::{
    counterexample_blowup, counterexample_function, eigen_threshold_grid, gp_nuclearity_sum, gp_ratio,
    schauder_partial_sum_check, CounterexampleKind, ScanConfig,
};
use bergman_cesaro::series::{
    cesaro_apply, cesaro_inverse_apply, eigenfunction, recover_from_cesaro, TaylorTruncation,
};
use bergman_cesaro::spectra::{
    frechet_spectrum, lb_spectrum, sample_grid, step_union_crosscheck, waelbroeck, Boundary, LimitKind,
    Membership,
};
use bergman_cesaro::ClassifierConfig;
use cesaro_acceptance::{outcome, Criterion, Outcome};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exact `C(k, r)` in 128-bit integers.
fn binomial_u128(k: u64, r: u64) -> u128 {
    if r > k {
        return 0;
    }
    (0..r).fold(1u128, |acc, i| acc * (k - i) as u128 / (i + 1) as u128)
}

fn operator_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut roundtrip = 0.0f64;
    let mut recovery = 0.0f64;
    let mut mean_oracle = 0.0f64;
    for _ in 0..100 {
        let f = TaylorTruncation::new(
            (0..=200)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        );
        let g = cesaro_apply(&f);
        // direct means, summed from scratch for each k
        for k in [0usize, 1, 57, 200] {
            let mean: Complex64 = f.coeffs()[..=k].iter().sum::<Complex64>() / (k as f64 + 1.0);
            mean_oracle = mean_oracle.max((mean - g.coeff(k)).norm());
        }
        roundtrip = roundtrip.max(cesaro_inverse_apply(&g).max_abs_diff(&f, 200));
        let r = recover_from_cesaro(&g);
        recovery = recovery.max(if r.degree() == 199 {
            r.max_abs_diff(&f, 199)
        } else {
            f64::INFINITY
        });
    }
    outcome(
        roundtrip < 1e-12 && recovery < 1e-12 && mean_oracle < 1e-14,
        format!("inverse∘C {roundtrip:.2e}, recovery on degree N-1 {recovery:.2e}, direct means {mean_oracle:.2e} (tol 1e-12)"),
    )
}

fn eigen_residual_exact() -> Outcome {
    // Oracle: f_m has coefficients C(k, m-1) and, by the hockey-stick
    // identity, (C f_m)_k = C(k+1, m)/(k+1) = C(k, m-1)/m exactly.
    let mut worst = 0.0f64;
    for m in 1..=10u32 {
        let f = eigenfunction(m, 500).unwrap();
        let cf = cesaro_apply(&f);
        for k in 0..=500u64 {
            let exact = binomial_u128(k, m as u64 - 1) as f64;
            let coeff_err = (f.coeff(k as usize).re - exact).abs() / exact.max(1.0);
            let residual = (cf.coeff(k as usize) - f.coeff(k as usize) / m as f64).norm() / exact.max(1.0);
            worst = worst.max(coeff_err).max(residual);
        }
    }
    outcome(
        worst < 1e-12,
        format!("max per-coefficient residual {worst:.2e} relative to max(1, |f_k|) (tol 1e-12)"),
    )
}

fn monomial_vs_quadrature() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut worst = 0.0f64;
    let mut failures = 0;
    for &p in &[1.5, 2.0, 3.0] {
        for &alpha in &[0.5, 1.0, 2.0] {
            for j in 0..=50 {
                match norm_quadrature(&TaylorTruncation::monomial(j), p, alpha, &cfg) {
                    Ok(q) => worst = worst.max((q.value / monomial_norm(j, p, alpha) - 1.0).abs()),
                    Err(_) => failures += 1,
                }
            }
        }
    }
    outcome(
        worst < 1e-8 && failures == 0,
        format!("max relative error {worst:.2e} over 459 cases, {failures} quadrature failures (tol 1e-8)"),
    )
}

fn asymptotic_law() -> Outcome {
    let j = 10_000f64;
    let scaled = monomial_norm(10_000, 2.0, 1.0).powi(2) * j * j;
    // exact: 2 B(2j+2, 2) = 2 / ((2j+2)(2j+3))
    let exact = 2.0 / ((2.0 * j + 2.0) * (2.0 * j + 3.0)) * j * j;
    let ratio = scaled / 0.5;
    outcome(
        (ratio - 1.0).abs() < 0.02 && (scaled / exact - 1.0).abs() < 1e-12,
        format!("‖z^j‖²j² = {scaled:.6} at j = 1e4, ratio to 0.5 = {ratio:.6} (tol 2%); exact rational agrees to {:.1e}", (scaled / exact - 1.0).abs()),
    )
}

fn threshold_fidelity() -> Outcome {
    let cfg = ScanConfig::default();
    let cases = match eigen_threshold_grid(
        &[1.5, 2.0, 3.0],
        &[0.5, 1.0, 2.0, 3.5],
        &[1, 2, 3, 4, 5],
        &cfg,
        None,
    ) {
        Ok(c) => c,
        Err(e) => return outcome(false, e.to_string()),
    };
    let decided: Vec<_> = cases.iter().filter(|c| c.agrees().is_some()).collect();
    let wrong: Vec<String> = decided
        .iter()
        .filter(|c| c.agrees() == Some(false))
        .map(|c| {
            format!(
                "(p={}, α={}, m={}: {})",
                c.p,
                c.alpha,
                c.m,
                c.scan.classification.label()
            )
        })
        .collect();
    let boundary: Vec<String> = cases
        .iter()
        .filter(|c| c.agrees().is_none())
        .map(|c| {
            format!(
                "(p={}, α={}, m={}: {})",
                c.p,
                c.alpha,
                c.m,
                c.scan.classification.label()
            )
        })
        .collect();
    outcome(
        wrong.is_empty(),
        format!(
            "{}/{} non-boundary cases agree at N_max = 2^14 {}; boundary evidence {}",
            decided.len() - wrong.len(),
            decided.len(),
            wrong.join(" "),
            boundary.join(" ")
        ),
    )
}

/// Independent coefficients of `(1 - z)(f + z f')` for `f = (1+z)^{-s}`,
/// with `a_k = (-1)^k Γ(s+k) / (Γ(s) k!)` from log-Gamma.
fn inverse_oracle(s: f64, k: usize) -> f64 {
    let a = |k: usize| {
        let mag = (bergman_cesaro::special::ln_gamma(s + k as f64)
            - bergman_cesaro::special::ln_gamma(s)
            - bergman_cesaro::special::ln_gamma(k as f64 + 1.0))
        .exp();
        if k.is_multiple_of(2) {
            mag
        } else {
            -mag
        }
    };
    let h = |k: usize| (k as f64 + 1.0) * a(k);
    if k == 0 {
        h(0)
    } else {
        h(k) - h(k - 1)
    }
}

fn non_invertibility() -> Outcome {
    let cfg = ScanConfig::default();
    let (p, alpha, eps) = (2.0, 1.0, 0.4);
    let mut lines = Vec::new();
    let mut passed = true;

    // the inverse image coefficients against the closed form
    let f = counterexample_function(p, alpha, eps, CounterexampleKind::Frechet, 4096).unwrap();
    let inv = cesaro_inverse_apply(&f);
    let s = (alpha + 1.0 - eps) / p;
    let coeff_err = [1usize, 10, 100, 1000, 4096]
        .iter()
        .map(|&k| (inv.coeff(k).re / inverse_oracle(s, k) - 1.0).abs())
        .fold(0.0, f64::max);
    passed &= coeff_err < 1e-10;
    lines.push(format!("inverse coefficients vs closed form {coeff_err:.1e}"));

    for kind in [CounterexampleKind::Frechet, CounterexampleKind::Lb] {
        match counterexample_blowup(p, alpha, eps, kind, 8, &cfg) {
            Ok(r) => {
                let fn_ok = r.function_scan.scan.classification == Classification::Converged;
                let tested: Vec<_> = r.inverse_scans.iter().filter(|s| s.n >= 3).collect();
                let div_ok = tested.iter().all(|s| s.scan.classification.is_divergent());
                passed &= fn_ok && div_ok && !tested.is_empty();
                let steps: Vec<String> = r
                    .inverse_scans
                    .iter()
                    .map(|s| format!("n={}:{}", s.n, s.scan.classification.label()))
                    .collect();
                lines.push(format!(
                    "{kind:?}: function at step {} {}, inverse {}",
                    r.base_step,
                    r.function_scan.scan.classification.label(),
                    steps.join(" ")
                ));
            }
            Err(e) => {
                passed = false;
                lines.push(format!("{kind:?}: {e}"));
            }
        }
    }
    outcome(passed, lines.join("; "))
}

fn compact_inclusion() -> Outcome {
    let scan = inclusion_ratio_scan(2.0, 1.0, 2.0, 10_000).unwrap();
    // oracle: d_j = (j + 2)^{-1/2} exactly for p = 2, μ = 1, γ = 2
    let closed = scan
        .ratios
        .iter()
        .enumerate()
        .map(|(j, d)| (d * (j as f64 + 2.0).sqrt() - 1.0).abs())
        .fold(0.0, f64::max);
    let last = *scan.ratios.last().unwrap();
    let rel = (scan.decay_exponent / -0.5 - 1.0).abs();
    outcome(
        rel < 0.02 && scan.monotone && last < 0.011 && closed < 1e-12,
        format!(
            "decay exponent {:.5} ± {:.1e} ({:.2}% from -0.5, tol 2%), monotone {}, d_1e4 = {last:.3e}, closed form {closed:.1e}",
            scan.decay_exponent,
            scan.decay_stderr,
            100.0 * rel,
            scan.monotone
        ),
    )
}

fn non_nuclearity() -> Outcome {
    // j = 1 term from Γ(n + 1/2) = (2n)! √π / (4^n n!):
    // B(4,3) = 1/60, B(4,5/2) = Γ(4)Γ(5/2)/Γ(13/2) = 6 / (5.5·4.5·3.5·2.5)
    let b43 = 1.0f64 / 60.0;
    let b425 = 6.0 / (5.5 * 4.5 * 3.5 * 2.5);
    let first = (b43 / b425).sqrt();
    let first_err = (gp_ratio(1, 2.0, 1.0, 2) / first - 1.0).abs();
    let scan = gp_nuclearity_sum(2.0, 1.0, 2, 100_000, &ClassifierConfig::default()).unwrap();
    match scan.classification {
        Classification::PowerDivergent { exponent, stderr } => {
            let rel = (exponent / 0.75 - 1.0).abs();
            outcome(
                rel < 0.05 && first_err < 1e-12,
                format!("PowerDivergent exponent {exponent:.5} ± {stderr:.1e} ({:.2}% from 0.75, tol 5%); j=1 term {first_err:.1e}", 100.0 * rel),
            )
        }
        other => outcome(false, format!("classified {other:?}")),
    }
}

fn spectral_crosscheck() -> Outcome {
    let mut passed = true;
    let mut lines = Vec::new();
    for &(p, alpha) in &[(2.0, 2.0), (2.0, 1.0), (1.5, 1.0), (3.0, 3.5)] {
        let (grid, excluded) = sample_grid(p, alpha, 100, 100, (-1.0, 2.0), (-1.0, 1.0));
        for kind in [LimitKind::Frechet, LimitKind::Lb] {
            match step_union_crosscheck(kind, p, alpha, 100, &grid) {
                Ok(r) => {
                    passed &= r.disagreements.is_empty();
                    lines.push(format!(
                        "(p={p}, α={alpha}) {kind:?}: {} disagreements over {} points ({excluded} in band)",
                        r.disagreements.len(),
                        r.samples
                    ));
                }
                Err(e) => {
                    passed = false;
                    lines.push(e.to_string());
                }
            }
        }

        // σ* = closure(σ) for the Fréchet space: compare with the closure
        // built directly as {0} ∪ closed disk ∪ points, including points on
        // the circle itself.
        let fr = frechet_spectrum(p, alpha).unwrap();
        let w = waelbroeck(&fr);
        let c = fr.disk_center();
        // circle points that are exact in floating point, plus a ring just
        // outside that must stay out
        let cc = Complex64::new(c, 0.0);
        let on_circle = [
            Complex64::new(0.0, 0.0),
            cc * 2.0,
            cc + Complex64::new(0.0, c),
            cc - Complex64::new(0.0, c),
        ];
        let outside = (0..64)
            .map(|i| cc + Complex64::from_polar(c * (1.0 + 1e-9), i as f64 * std::f64::consts::TAU / 64.0));
        let closure_ok = grid.iter().copied().all(|l| {
            let in_closure = fr.membership(l) == Membership::In || (l - cc).norm() <= c;
            (w.membership(l) == Membership::In) == in_closure
        }) && on_circle.iter().all(|&l| w.membership(l) == Membership::In)
            && outside
                .filter(|&l| (1..=50).all(|m| (l - 1.0 / m as f64).norm() > 1e-6))
                .all(|l| w.membership(l) == Membership::Out);
        let lb = lb_spectrum(p, alpha).unwrap();
        let lb_ok = waelbroeck(&lb) == lb && lb.disk_boundary == Boundary::Closed;
        passed &= closure_ok && lb_ok && w.undetermined.is_empty() && waelbroeck(&w) == w;
        lines.push(format!(
            "(p={p}, α={alpha}) σ*=closure(σ) Fréchet {closure_ok}, σ*=σ (LB) {lb_ok}"
        ));
    }
    outcome(passed, lines.join("; "))
}

fn schauder_tails() -> Outcome {
    let cfg = ScanConfig::default();
    let reference = 1usize << 18;
    let spec = SpaceSpec::frechet(2.0, 1.0).unwrap();
    let mut passed = true;
    let mut lines = Vec::new();
    let functions = [
        ("f_1", eigenfunction(1, reference).unwrap()),
        (
            "f_eps",
            counterexample_function(2.0, 1.0, 0.4, CounterexampleKind::Frechet, reference).unwrap(),
        ),
    ];
    for (name, f) in &functions {
        let tails = schauder_partial_sum_check(f, &spec, 5, &cfg).unwrap();
        // oracle for n = 1: direct tail sum Σ_{N<k<=N_big} |a_k|² 2B(2k+2, 3)
        // with 2B(2k+2, 3) = 4 / ((2k+2)(2k+3)(2k+4))
        let direct: f64 = (cfg.n_max + 1..=reference)
            .map(|k| {
                let kf = k as f64;
                f.coeff(k).norm_sqr() * 4.0 / ((2.0 * kf + 2.0) * (2.0 * kf + 3.0) * (2.0 * kf + 4.0))
            })
            .sum::<f64>()
            .sqrt();
        let oracle_err = (tails[0].last_tail() / direct - 1.0).abs();
        for t in &tails {
            let ok = t.converged_to_zero && t.last_tail() < 1e-6;
            passed &= ok;
            lines.push(format!(
                "{name} step {}: tail {:.3e} at 2^14, decreasing {}, slope {:.3}",
                t.n,
                t.last_tail(),
                t.converged_to_zero,
                t.decay_exponent.unwrap_or(f64::NAN)
            ));
        }
        passed &= oracle_err < 1e-9;
        lines.push(format!("{name} direct tail oracle {oracle_err:.1e}"));
    }
    outcome(passed, format!("tol 1e-6: {}", lines.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("operator exactness", operator_exactness),
        ("eigen residual", eigen_residual_exact),
        ("monomial closed form vs quadrature", monomial_vs_quadrature),
        ("asymptotic monomial law", asymptotic_law),
        ("point-spectrum threshold fidelity", threshold_fidelity),
        ("non-invertibility reproduction", non_invertibility),
        ("compact inclusion", compact_inclusion),
        ("non-nuclearity", non_nuclearity),
        ("spectral cross-check", spectral_crosscheck),
        ("Schauder basis tails", schauder_tails),
    ];
    cesaro_acceptance::run(&criteria)
}
