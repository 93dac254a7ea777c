//! Spectral sets of the Cesàro operator as exact membership predicates.
//!
//! All sets are built from three pieces: isolated points `1/m`, the disk
//! `D_r = {λ : |λ - 1/(2r)| < 1/(2r)}` (open or closed) with
//! `r = (2 + α)/p`, and possibly the origin. For `λ ≠ 0`,
//! `λ ∈ D_r ⟺ Re(1/λ) > r`, which is used as an independent second
//! predicate.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::SpectraError;

/// An `r` within this relative distance of an integer `m` is the boundary
/// case `m = (2 + α)/p`.
const INTEGER_TOL: f64 = 1e-12;
/// Tolerance for matching `λ` to an isolated point `1/m`.
const POINT_TOL: f64 = 1e-12;
/// Exclusion band used by the grid cross-check.
pub const BOUNDARY_BAND: f64 = 1e-9;
/// Dyadic tail steps `n_max · 2^i` appended after the explicit steps.
const TAIL_DOUBLINGS: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Boundary {
    Open,
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Membership {
    In,
    Out,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralDescription {
    /// Indices `m` of the isolated points `1/m` known to belong.
    pub points: Vec<u32>,
    /// Indices whose membership is not decided (point-spectrum sandwich).
    pub undetermined: Vec<u32>,
    pub disk_r: f64,
    pub disk_boundary: Boundary,
    pub includes_origin: bool,
}

/// `(2 + α)/p`.
pub fn spectral_ratio(p: f64, alpha: f64) -> f64 {
    (2.0 + alpha) / p
}

/// `Some(m)` when `r` is the integer `m >= 1`.
pub fn integer_boundary(r: f64) -> Option<u32> {
    let m = r.round();
    if m >= 1.0 && (r - m).abs() <= INTEGER_TOL * r.max(1.0) {
        Some(m as u32)
    } else {
        None
    }
}

/// `{m ∈ ℕ : m < r}`.
fn indices_below(r: f64) -> Vec<u32> {
    let boundary = integer_boundary(r);
    (1..)
        .take_while(|&m| (m as f64) < r + 1.0)
        .filter(|&m| (m as f64) < r && Some(m) != boundary)
        .collect()
}

impl SpectralDescription {
    pub fn disk_center(&self) -> f64 {
        0.5 / self.disk_r
    }

    pub fn disk_radius(&self) -> f64 {
        0.5 / self.disk_r
    }

    /// Disk membership through `|λ - 1/(2r)|` against `1/(2r)`.
    pub fn in_disk(&self, lambda: Complex64) -> bool {
        let d = (lambda - Complex64::new(self.disk_center(), 0.0)).norm();
        match self.disk_boundary {
            Boundary::Open => d < self.disk_radius(),
            Boundary::Closed => d <= self.disk_radius(),
        }
    }

    /// Disk membership through `Re(1/λ)` against `r`.
    pub fn in_disk_reciprocal(&self, lambda: Complex64) -> bool {
        if lambda == Complex64::new(0.0, 0.0) {
            return self.disk_boundary == Boundary::Closed;
        }
        let re_inv = lambda.re / lambda.norm_sqr();
        match self.disk_boundary {
            Boundary::Open => re_inv > self.disk_r,
            Boundary::Closed => re_inv >= self.disk_r,
        }
    }

    fn near_point(lambda: Complex64, m: u32) -> bool {
        (lambda - Complex64::new(1.0 / m as f64, 0.0)).norm() <= POINT_TOL
    }

    pub fn membership(&self, lambda: Complex64) -> Membership {
        if self.points.iter().any(|&m| Self::near_point(lambda, m))
            || self.in_disk(lambda)
            || (self.includes_origin && lambda == Complex64::new(0.0, 0.0))
        {
            Membership::In
        } else if self.undetermined.iter().any(|&m| Self::near_point(lambda, m)) {
            Membership::Undetermined
        } else {
            Membership::Out
        }
    }

    pub fn contains(&self, lambda: Complex64) -> bool {
        self.membership(lambda) == Membership::In
    }
}

fn check_params(p: f64, alpha: f64, strict: bool) -> Result<(), SpectraError> {
    let ok = if strict {
        p.is_finite() && p > 1.0 && alpha.is_finite() && alpha > 0.0
    } else {
        p.is_finite() && p >= 1.0 && alpha.is_finite() && alpha >= 0.0
    };
    if ok {
        Ok(())
    } else {
        Err(SpectraError::InvalidParameters(format!(
            "p = {p}, alpha = {alpha}"
        )))
    }
}

/// Spectrum on the Banach space `A^p_α`: `{1/m : m < r}` together with the
/// closed disk.
pub fn banach_spectrum(p: f64, alpha: f64) -> Result<SpectralDescription, SpectraError> {
    check_params(p, alpha, false)?;
    let r = spectral_ratio(p, alpha);
    Ok(SpectralDescription {
        points: indices_below(r),
        undetermined: Vec::new(),
        disk_r: r,
        disk_boundary: Boundary::Closed,
        includes_origin: true,
    })
}

/// Spectrum on `A^p_{α+}`: `{0}`, the open disk and the point spectrum, with
/// `1/m_0` undecided when `m_0 = r` is an integer.
pub fn frechet_spectrum(p: f64, alpha: f64) -> Result<SpectralDescription, SpectraError> {
    check_params(p, alpha, true)?;
    let r = spectral_ratio(p, alpha);
    Ok(SpectralDescription {
        points: indices_below(r),
        undetermined: integer_boundary(r).into_iter().collect(),
        disk_r: r,
        disk_boundary: Boundary::Open,
        includes_origin: true,
    })
}

/// Spectrum on `A^p_{α-}`: point spectrum and the closed disk.
pub fn lb_spectrum(p: f64, alpha: f64) -> Result<SpectralDescription, SpectraError> {
    check_params(p, alpha, true)?;
    let r = spectral_ratio(p, alpha);
    Ok(SpectralDescription {
        points: indices_below(r),
        undetermined: Vec::new(),
        disk_r: r,
        disk_boundary: Boundary::Closed,
        includes_origin: true,
    })
}

/// Topological closure of a spectral set, which is the Waelbroeck spectrum
/// for both limit spaces. Undecided points on the circle are absorbed.
pub fn waelbroeck(spec: &SpectralDescription) -> SpectralDescription {
    let mut closed = SpectralDescription {
        disk_boundary: Boundary::Closed,
        ..spec.clone()
    };
    closed.undetermined = spec
        .undetermined
        .iter()
        .copied()
        .filter(|&m| !closed.in_disk(Complex64::new(1.0 / m as f64, 0.0)))
        .collect();
    closed
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LimitKind {
    Frechet,
    Lb,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Disagreement {
    pub lambda: Complex64,
    pub closed_form: Membership,
    pub step_assembly: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrosscheckReport {
    pub kind: LimitKind,
    pub p: f64,
    pub alpha: f64,
    pub n_max: u32,
    /// Largest step index reached through the dyadic tail.
    pub last_step: u64,
    pub samples: usize,
    pub members: usize,
    pub disagreements: Vec<Disagreement>,
}

/// Distance from `λ` to the nearest boundary feature of the limit spectrum:
/// the circle, the origin and the points `1/m` with `m <= ceil(r)`.
pub fn boundary_distance(p: f64, alpha: f64, lambda: Complex64) -> f64 {
    let r = spectral_ratio(p, alpha);
    let c = 0.5 / r;
    let circle = ((lambda - Complex64::new(c, 0.0)).norm() - c).abs();
    let points = (1..=r.ceil() as u32)
        .map(|m| (lambda - Complex64::new(1.0 / m as f64, 0.0)).norm())
        .fold(f64::INFINITY, f64::min);
    circle.min(points).min(lambda.norm())
}

/// Cell-centred `nx × ny` grid over `[re_lo, re_hi] × [im_lo, im_hi]`,
/// dropping points inside the exclusion band. Returns the kept points and
/// the number dropped.
pub fn sample_grid(
    p: f64,
    alpha: f64,
    nx: usize,
    ny: usize,
    re: (f64, f64),
    im: (f64, f64),
) -> (Vec<Complex64>, usize) {
    let mut kept = Vec::with_capacity(nx * ny);
    let mut dropped = 0;
    for i in 0..nx {
        let x = re.0 + (re.1 - re.0) * (i as f64 + 0.5) / nx as f64;
        for j in 0..ny {
            let y = im.0 + (im.1 - im.0) * (j as f64 + 0.5) / ny as f64;
            let lambda = Complex64::new(x, y);
            if boundary_distance(p, alpha, lambda) < BOUNDARY_BAND {
                dropped += 1;
            } else {
                kept.push(lambda);
            }
        }
    }
    (kept, dropped)
}

/// `⋂_m ⋃_{n >= m} b_n` over a finite sequence.
fn limsup(bits: &[bool]) -> bool {
    let mut tail = false;
    let mut all = true;
    for &b in bits.iter().rev() {
        tail |= b;
        all &= tail;
    }
    all && !bits.is_empty()
}

/// Compares the closed-form limit spectrum against the Banach spectra of the
/// steps `α ± 1/n`: their union plus `{0}` for the Fréchet space, and the
/// intersection of tail unions for the (LB) space.
///
/// Steps `1..=n_max` are taken explicitly, followed by `n_max · 2^i` for
/// `i = 1..=40`; the step spectra are nested in `n`, so the dyadic tail
/// resolves points close to the limit circle.
pub fn step_union_crosscheck(
    kind: LimitKind,
    p: f64,
    alpha: f64,
    n_max: u32,
    grid: &[Complex64],
) -> Result<CrosscheckReport, SpectraError> {
    check_params(p, alpha, true)?;
    if n_max == 0 {
        return Err(SpectraError::InvalidParameters("n_max must be >= 1".into()));
    }
    if let Some(bad) = grid
        .iter()
        .find(|&&l| boundary_distance(p, alpha, l) < BOUNDARY_BAND)
    {
        return Err(SpectraError::BoundaryTooClose {
            re: bad.re,
            im: bad.im,
            band: BOUNDARY_BAND,
        });
    }

    let first = match kind {
        LimitKind::Frechet => 1u64,
        LimitKind::Lb => (1.0 / alpha).floor() as u64 + 1,
    };
    let mut steps: Vec<u64> = (first..=(n_max as u64).max(first)).collect();
    let last_explicit = *steps.last().expect("non-empty");
    steps.extend((1..=TAIL_DOUBLINGS).map(|i| last_explicit << i));

    let step_spectra: Vec<SpectralDescription> = steps
        .iter()
        .map(|&n| {
            let inv = 1.0 / n as f64;
            let a = match kind {
                LimitKind::Frechet => alpha + inv,
                LimitKind::Lb => alpha - inv,
            };
            banach_spectrum(p, a)
        })
        .collect::<Result<_, _>>()?;

    let limit = match kind {
        LimitKind::Frechet => frechet_spectrum(p, alpha)?,
        LimitKind::Lb => lb_spectrum(p, alpha)?,
    };

    let mut members = 0;
    let mut disagreements = Vec::new();
    let mut bits = vec![false; step_spectra.len()];
    for &lambda in grid {
        for (b, s) in bits.iter_mut().zip(&step_spectra) {
            *b = s.contains(lambda);
        }
        let assembled = match kind {
            LimitKind::Frechet => lambda == Complex64::new(0.0, 0.0) || bits.iter().any(|&b| b),
            LimitKind::Lb => limsup(&bits),
        };
        let closed = limit.membership(lambda);
        if closed == Membership::In {
            members += 1;
        }
        let agree = match closed {
            Membership::In => assembled,
            Membership::Out => !assembled,
            Membership::Undetermined => false,
        };
        if !agree {
            disagreements.push(Disagreement {
                lambda,
                closed_form: closed,
                step_assembly: assembled,
            });
        }
    }

    Ok(CrosscheckReport {
        kind,
        p,
        alpha,
        n_max,
        last_step: *steps.last().expect("non-empty"),
        samples: grid.len(),
        members,
        disagreements,
    })
}
