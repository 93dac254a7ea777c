use bergman_cesaro::classify::{classify, Classification};
use bergman_cesaro::norms::{monomial_norm, SpaceSpec};
use bergman_cesaro::scans::{
    boundary_evidence, counterexample_blowup, counterexample_function, eigen_membership_scan,
    expected_eigen_membership, gp_expected_exponent, gp_nuclearity_sum, gp_ratio, scan_degrees,
    schauder_partial_sum_check, truncation_norms, CounterexampleKind, ScanConfig,
};
use bergman_cesaro::series::{eigenfunction, TaylorTruncation};
use bergman_cesaro::{ClassifierConfig, ScanError};

fn small() -> ScanConfig {
    ScanConfig {
        n_max: 1 << 12,
        ..ScanConfig::default()
    }
}

#[test]
fn eigen_examples() {
    let cfg = ScanConfig::default();
    assert_eq!(
        eigen_membership_scan(1, 2.0, 2.0, &cfg).unwrap().classification,
        Classification::Converged
    );
    assert!(matches!(
        eigen_membership_scan(3, 2.0, 2.0, &cfg).unwrap().classification,
        Classification::PowerDivergent { .. }
    ));
    assert_eq!(expected_eigen_membership(1, 2.0, 2.0), Some(true));
    assert_eq!(expected_eigen_membership(2, 2.0, 2.0), None);
    assert_eq!(expected_eigen_membership(3, 2.0, 2.0), Some(false));
}

#[test]
fn eigen_scan_at_p_other_than_two() {
    let cfg = small();
    assert_eq!(
        eigen_membership_scan(1, 3.0, 2.0, &cfg).unwrap().classification,
        Classification::Converged
    );
    assert!(eigen_membership_scan(2, 1.5, 0.5, &cfg)
        .unwrap()
        .classification
        .is_divergent());
}

#[test]
fn truncation_norms_match_direct_partial_sums() {
    // ‖S_N f_2‖² = Σ_{k<=N} k² 2B(2k+2, 3) at α = 2
    let f = eigenfunction(2, 4096).unwrap();
    let degrees = scan_degrees(4096);
    let norms = truncation_norms(&f, 2.0, 2.0, &degrees, &ScanConfig::default().quadrature);
    for (&n, &v) in degrees.iter().zip(&norms) {
        let direct: f64 = (0..=n)
            .map(|k| (k as f64).powi(2) * monomial_norm(k, 2.0, 2.0).powi(2))
            .sum();
        assert!((v / direct.sqrt() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn boundary_case_is_reported_as_evidence() {
    let ev = boundary_evidence(2, 2.0, 2.0, 5, &ScanConfig::default()).unwrap();
    assert!(ev.banach.classification.is_divergent());
    assert_eq!(ev.lb_steps.first().map(|s| s.n), Some(1));
    assert!(ev.lb_steps.iter().all(|s| s.scan.classification.is_divergent()));
    // At step n the squared norm sums like k^(-1-1/n), so the last
    // doubling at 2^14 still adds more than tol_conv for n >= 3. Those
    // steps must stay undecided rather than be called divergent.
    assert_eq!(ev.frechet_converged_steps(), vec![1, 2]);
    for s in &ev.frechet_steps {
        assert!(!s.scan.classification.is_divergent(), "step {}", s.n);
        let w = |k: usize| (k as f64).powi(2) * monomial_norm(k, 2.0, s.alpha).powi(2);
        let total: f64 = (0..=1 << 14).map(w).sum();
        let last: f64 = ((1 << 13) + 1..=1 << 14).map(w).sum();
        let rel = total.sqrt() / (total - last).sqrt() - 1.0;
        assert_eq!(
            rel < ClassifierConfig::default().tol_conv,
            s.n <= 2,
            "step {}: {rel}",
            s.n
        );
    }
    let deep = ScanConfig {
        n_max: 1 << 20,
        ..ScanConfig::default()
    };
    let ev = boundary_evidence(2, 2.0, 2.0, 5, &deep).unwrap();
    assert_eq!(ev.frechet_converged_steps(), vec![1, 2, 3, 4, 5]);
}

#[test]
fn counterexample_examples() {
    let cfg = ScanConfig::default();
    let fr = counterexample_blowup(2.0, 1.0, 0.4, CounterexampleKind::Frechet, 5, &cfg).unwrap();
    assert_eq!(fr.base_step, 3);
    let (function, inverse) = fr.pair();
    assert_eq!(function.classification, Classification::Converged);
    assert!(inverse.unwrap().classification.is_divergent());
    assert!([3, 4, 5].iter().all(|n| fr.divergent_steps().contains(n)));

    let lb = counterexample_blowup(2.0, 1.0, 0.4, CounterexampleKind::Lb, 5, &cfg).unwrap();
    assert_eq!(lb.function_scan.scan.classification, Classification::Converged);
    assert!(lb
        .inverse_scans
        .iter()
        .filter(|s| s.n > lb.base_step)
        .all(|s| s.scan.classification.is_divergent()));

    assert!(matches!(
        counterexample_blowup(2.0, 1.0, 0.6, CounterexampleKind::Frechet, 5, &cfg),
        Err(ScanError::InvalidEpsilon { .. })
    ));
    assert!(counterexample_function(1.5, 1.0, 0.4, CounterexampleKind::Lb, 10).is_err());
}

#[test]
fn gp_examples() {
    let ratio = monomial_norm(1, 2.0, 2.0) / monomial_norm(1, 2.0, 1.5);
    assert!((gp_ratio(1, 2.0, 1.0, 2) / ratio - 1.0).abs() < 1e-14);
    assert!((gp_expected_exponent(2.0, 2) - 0.75).abs() < 1e-15);
    let scan = gp_nuclearity_sum(2.0, 1.0, 2, 100_000, &ClassifierConfig::default()).unwrap();
    match scan.classification {
        Classification::PowerDivergent { exponent, .. } => assert!((exponent / 0.75 - 1.0).abs() < 0.05),
        other => panic!("{other:?}"),
    }
    assert!(gp_nuclearity_sum(2.0, 1.0, 1, 100, &ClassifierConfig::default()).is_err());

    // a summable control sequence
    let degrees = scan_degrees(1 << 14);
    let sums: Vec<f64> = degrees
        .iter()
        .map(|&n| (1..=n).map(|j| (j as f64).powi(-2)).sum())
        .collect();
    assert_eq!(
        classify(&degrees, &sums, &ClassifierConfig::default()),
        Classification::Converged
    );
}

#[test]
fn schauder_constant_has_zero_tails() {
    let one = TaylorTruncation::monomial(0).with_degree(small().n_max + 1);
    let spec = SpaceSpec::frechet(2.0, 1.0).unwrap();
    let tails = schauder_partial_sum_check(&one, &spec, 3, &small()).unwrap();
    assert_eq!(tails.len(), 3);
    assert!(tails
        .iter()
        .all(|t| t.tails.iter().all(|&x| x == 0.0) && t.converged_to_zero));
}

#[test]
fn schauder_tails_decrease() {
    let cfg = small();
    let reference = 16 * cfg.n_max;
    let spec = SpaceSpec::frechet(2.0, 1.0).unwrap();
    for f in [
        eigenfunction(1, reference).unwrap(),
        counterexample_function(2.0, 1.0, 0.4, CounterexampleKind::Frechet, reference).unwrap(),
    ] {
        for t in schauder_partial_sum_check(&f, &spec, 3, &cfg).unwrap() {
            assert!(
                t.nonincreasing && t.converged_to_zero,
                "step {}: {:?}",
                t.n,
                t.tails
            );
        }
    }
    let banach = SpaceSpec::banach(2.0, 1.0).unwrap();
    let f = eigenfunction(1, reference).unwrap();
    let tails = schauder_partial_sum_check(&f, &banach, 3, &cfg).unwrap();
    assert_eq!(tails.iter().map(|t| t.n).collect::<Vec<_>>(), vec![0]);
    assert!(schauder_partial_sum_check(&f.with_degree(cfg.n_max), &spec, 3, &cfg).is_err());
}
