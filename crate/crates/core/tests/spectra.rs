use bergman_cesaro::spectra::{
    banach_spectrum, boundary_distance, frechet_spectrum, integer_boundary, lb_spectrum, sample_grid,
    spectral_ratio, step_union_crosscheck, waelbroeck, Boundary, LimitKind, Membership, BOUNDARY_BAND,
};
use bergman_cesaro::SpectraError;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn banach_example() {
    let s = banach_spectrum(2.0, 2.0).unwrap();
    assert_eq!(s.points, vec![1]);
    assert_eq!(s.disk_boundary, Boundary::Closed);
    assert!((s.disk_center() - 0.25).abs() < 1e-16 && (s.disk_radius() - 0.25).abs() < 1e-16);
    assert!(s.contains(c(0.3, 0.0)));
    assert!(!s.contains(c(0.5, 0.5)));
    assert!(s.contains(c(0.0, 0.0)) && s.contains(c(1.0, 0.0)));
    // 1/2 is on the closed boundary
    assert!(s.contains(c(0.5, 0.0)));
}

#[test]
fn frechet_example() {
    let s = frechet_spectrum(2.0, 2.0).unwrap();
    assert_eq!(s.disk_boundary, Boundary::Open);
    assert_eq!(s.points, vec![1]);
    assert_eq!(s.undetermined, vec![2]);
    assert_eq!(s.membership(c(0.5, 0.0)), Membership::Undetermined);
    assert_eq!(s.membership(c(0.0, 0.0)), Membership::In);
    assert_eq!(s.membership(c(1.0, 0.0)), Membership::In);
    assert_eq!(s.membership(c(0.25, 0.25)), Membership::Out);
    assert_eq!(s.membership(c(0.25, 0.2)), Membership::In);
    // non-integer ratio leaves nothing undetermined
    assert!(frechet_spectrum(2.0, 1.0).unwrap().undetermined.is_empty());
}

#[test]
fn lb_example() {
    let s = lb_spectrum(2.0, 2.0).unwrap();
    assert_eq!(s.membership(c(0.5, 0.0)), Membership::In);
    assert_eq!(s.membership(c(2.0, 0.0)), Membership::Out);
    assert_eq!(s.membership(c(1.0, 0.0)), Membership::In);
    assert!(s.undetermined.is_empty());
}

#[test]
fn point_sets_follow_the_ratio() {
    // r = 3.5/1.5 = 7/3: m < 7/3 gives {1, 2}
    assert_eq!(banach_spectrum(1.5, 1.5).unwrap().points, vec![1, 2]);
    // r = 3: the boundary point 1/3 is certain in the Banach space but not
    // in the Fréchet one
    assert_eq!(banach_spectrum(1.5, 2.5).unwrap().points, vec![1, 2]);
    let f = frechet_spectrum(1.5, 2.5).unwrap();
    assert_eq!((f.points.clone(), f.undetermined.clone()), (vec![1, 2], vec![3]));
    assert_eq!(integer_boundary(spectral_ratio(1.5, 2.5)), Some(3));
    assert_eq!(integer_boundary(spectral_ratio(2.0, 1.0)), None);
}

#[test]
fn invalid_parameters() {
    assert!(matches!(
        frechet_spectrum(1.0, 1.0),
        Err(SpectraError::InvalidParameters(_))
    ));
    assert!(lb_spectrum(2.0, 0.0).is_err());
    assert!(banach_spectrum(0.9, 1.0).is_err());
    assert!(banach_spectrum(1.0, 0.0).is_ok());
}

#[test]
fn predicates_agree_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for &(p, alpha) in &[(2.0, 2.0), (1.5, 0.5), (3.0, 3.5)] {
        let s = frechet_spectrum(p, alpha).unwrap();
        for _ in 0..100_000 {
            let l = c(rng.random_range(-1.0..2.0), rng.random_range(-1.0..1.0));
            assert_eq!(s.in_disk(l), s.in_disk_reciprocal(l), "{l}");
        }
    }
}

#[test]
fn disks_shrink_as_ratio_grows() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let ratios = [(2.0, 0.5), (2.0, 1.0), (2.0, 2.0), (2.0, 3.5), (1.5, 3.5)];
    let specs: Vec<_> = ratios
        .iter()
        .map(|&(p, a)| banach_spectrum(p, a).unwrap())
        .collect();
    for _ in 0..20_000 {
        let l = c(rng.random_range(-0.1..0.6), rng.random_range(-0.4..0.4));
        for w in specs.windows(2) {
            assert!(w[0].disk_r < w[1].disk_r);
            if w[1].in_disk(l) {
                assert!(w[0].in_disk(l));
            }
        }
    }
}

#[test]
fn frechet_spectrum_is_not_closed() {
    let s = frechet_spectrum(2.0, 1.0).unwrap();
    let (center, radius) = (s.disk_center(), s.disk_radius());
    let limit = c(center, radius);
    assert_eq!(s.membership(limit), Membership::Out);
    for k in 1..=40 {
        let l = c(center, radius * (1.0 - 2f64.powi(-k)));
        assert_eq!(s.membership(l), Membership::In);
    }
    assert!(waelbroeck(&s).contains(limit));
}

#[test]
fn waelbroeck_examples() {
    let f = frechet_spectrum(2.0, 2.0).unwrap();
    let w = waelbroeck(&f);
    assert_eq!(w.disk_boundary, Boundary::Closed);
    assert!(w.undetermined.is_empty());
    assert_eq!(w.points, vec![1]);
    assert!(w.contains(c(0.5, 0.0)) && w.contains(c(0.0, 0.0)));
    assert_eq!(waelbroeck(&w), w);
    let lb = lb_spectrum(2.0, 2.0).unwrap();
    assert_eq!(waelbroeck(&lb), lb);
}

#[test]
fn crosscheck_example_grid() {
    let (grid, dropped) = sample_grid(2.0, 2.0, 100, 100, (-1.0, 2.0), (-1.0, 1.0));
    assert_eq!(grid.len() + dropped, 10_000);
    for kind in [LimitKind::Frechet, LimitKind::Lb] {
        let r = step_union_crosscheck(kind, 2.0, 2.0, 100, &grid).unwrap();
        assert!(r.disagreements.is_empty(), "{kind:?}: {:?}", r.disagreements);
        assert_eq!(r.samples, grid.len());
    }
}

#[test]
fn crosscheck_far_point_is_out() {
    for kind in [LimitKind::Frechet, LimitKind::Lb] {
        let r = step_union_crosscheck(kind, 2.0, 2.0, 100, &[c(5.0, 0.0)]).unwrap();
        assert_eq!(r.members, 0);
        assert!(r.disagreements.is_empty());
    }
}

#[test]
fn crosscheck_rejects_band_points() {
    let err = step_union_crosscheck(LimitKind::Frechet, 2.0, 2.0, 100, &[c(0.5, 0.0)]).unwrap_err();
    assert!(matches!(err, SpectraError::BoundaryTooClose { .. }));
    let near = c(0.5 + 0.5 * BOUNDARY_BAND, 0.0);
    assert!(boundary_distance(2.0, 2.0, near) < BOUNDARY_BAND);
    assert!(step_union_crosscheck(LimitKind::Lb, 2.0, 2.0, 100, &[near]).is_err());
}
