//! Weighted Bergman norms `‖f‖_{p,α} = (∫_D |f|^p (1 - |z|)^α dA)^{1/p}`.
//!
//! Monomials have the closed form `‖z^j‖_{p,α}^p = 2 B(jp + 2, α + 1)`. At
//! `p = 2` the monomials are orthogonal for the radial weight, which gives
//! the Parseval sum; other exponents go through [`norm_quadrature`].

use serde::{Deserialize, Serialize};

use crate::error::NormError;
use crate::quadrature::{norm_quadrature, QuadratureConfig};
use crate::series::TaylorTruncation;
use crate::special::{LnBeta, StirlingBeta};

/// Which space the `(p, α)` pair describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceKind {
    /// The Banach space `A^p_α`.
    Banach,
    /// `A^p_{α+}`: intersection over the steps `α + 1/n`.
    FrechetIntersection,
    /// `A^p_{α-}`: union over the steps `α - 1/n`, `n > 1/α`.
    LbUnion,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub p: f64,
    pub alpha: f64,
    pub kind: SpaceKind,
}

impl SpaceSpec {
    pub fn new(p: f64, alpha: f64, kind: SpaceKind) -> Result<Self, NormError> {
        // the Banach space also admits the classical endpoints p = 1, α = 0
        let closed = kind == SpaceKind::Banach;
        if !(p.is_finite() && (p > 1.0 || closed && p == 1.0)) {
            return Err(NormError::InvalidSpace(format!(
                "p must lie in (1, inf), got {p}"
            )));
        }
        if !(alpha.is_finite() && (alpha > 0.0 || closed && alpha == 0.0)) {
            return Err(NormError::InvalidSpace(format!(
                "alpha must lie in (0, inf), got {alpha}"
            )));
        }
        Ok(Self { p, alpha, kind })
    }

    pub fn banach(p: f64, alpha: f64) -> Result<Self, NormError> {
        Self::new(p, alpha, SpaceKind::Banach)
    }

    pub fn frechet(p: f64, alpha: f64) -> Result<Self, NormError> {
        Self::new(p, alpha, SpaceKind::FrechetIntersection)
    }

    pub fn lb(p: f64, alpha: f64) -> Result<Self, NormError> {
        Self::new(p, alpha, SpaceKind::LbUnion)
    }

    /// Smallest admissible step index: 1, or the least `n > 1/α` for (LB).
    pub fn first_step(&self) -> u32 {
        match self.kind {
            SpaceKind::LbUnion => (1.0 / self.alpha).floor() as u32 + 1,
            _ => 1,
        }
    }

    /// Weight exponent of step `n`.
    pub fn step_alpha(&self, n: u32) -> Result<f64, NormError> {
        if n == 0 {
            return Err(NormError::InvalidSpace("step index must be >= 1".into()));
        }
        let inv = 1.0 / n as f64;
        match self.kind {
            SpaceKind::Banach => Ok(self.alpha),
            SpaceKind::FrechetIntersection => Ok(self.alpha + inv),
            SpaceKind::LbUnion => {
                let a = self.alpha - inv;
                if a > 0.0 {
                    Ok(a)
                } else {
                    Err(NormError::InvalidSpace(format!(
                        "step n = {n} needs n > 1/alpha = {}",
                        1.0 / self.alpha
                    )))
                }
            }
        }
    }
}

/// `‖z^j‖_{p,α} = (2 B(jp + 2, α + 1))^{1/p}`.
pub fn monomial_norm(j: usize, p: f64, alpha: f64) -> f64 {
    monomial_norm_with(j, p, alpha, &StirlingBeta)
}

pub fn monomial_norm_with(j: usize, p: f64, alpha: f64, beta: &dyn LnBeta) -> f64 {
    ((std::f64::consts::LN_2 + beta.ln_beta(j as f64 * p + 2.0, alpha + 1.0)) / p).exp()
}

/// `‖z^j‖_{2,α}^2` for `j = 0..=n`.
pub fn parseval_weights(alpha: f64, n: usize) -> Vec<f64> {
    parseval_weights_with(alpha, n, &StirlingBeta)
}

pub fn parseval_weights_with(alpha: f64, n: usize, beta: &dyn LnBeta) -> Vec<f64> {
    (0..=n)
        .map(|j| (std::f64::consts::LN_2 + beta.ln_beta(2.0 * j as f64 + 2.0, alpha + 1.0)).exp())
        .collect()
}

/// `‖f‖_{2,α}` from `Σ |a_j|^2 ‖z^j‖_{2,α}^2`.
pub fn norm_parseval(f: &TaylorTruncation, alpha: f64) -> f64 {
    norm_parseval_with(f, alpha, &StirlingBeta)
}

pub fn norm_parseval_with(f: &TaylorTruncation, alpha: f64, beta: &dyn LnBeta) -> f64 {
    let weights = parseval_weights_with(alpha, f.degree(), beta);
    f.coeffs()
        .iter()
        .zip(&weights)
        .map(|(a, w)| a.norm_sqr() * w)
        .sum::<f64>()
        .sqrt()
}

/// Parseval at `p = 2`, quadrature otherwise.
pub fn norm(f: &TaylorTruncation, p: f64, alpha: f64, config: &QuadratureConfig) -> Result<f64, NormError> {
    if p == 2.0 {
        Ok(norm_parseval(f, alpha))
    } else {
        norm_quadrature(f, p, alpha, config).map(|q| q.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntryStatus {
    Ok,
    /// Quadrature did not settle; the function may be too singular at the
    /// boundary for its truncation degree.
    DivergentSuspect,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeminormEntry {
    pub n: u32,
    pub alpha: f64,
    pub value: Option<f64>,
    pub status: EntryStatus,
}

/// Step norms at `α + 1/n` (Fréchet) or `α - 1/n` ((LB)) for the admissible
/// `n <= n_max`.
pub fn seminorm_family(
    f: &TaylorTruncation,
    spec: &SpaceSpec,
    n_max: u32,
    config: &QuadratureConfig,
) -> Result<Vec<SeminormEntry>, NormError> {
    if spec.kind == SpaceKind::Banach {
        return Err(NormError::InvalidSpace(
            "seminorm families need a Frechet or (LB) space".into(),
        ));
    }
    (spec.first_step()..=n_max)
        .map(|n| {
            let alpha = spec.step_alpha(n)?;
            Ok(match norm(f, spec.p, alpha, config) {
                Ok(v) => SeminormEntry {
                    n,
                    alpha,
                    value: Some(v),
                    status: EntryStatus::Ok,
                },
                Err(NormError::NonConvergedQuadrature { .. }) => SeminormEntry {
                    n,
                    alpha,
                    value: None,
                    status: EntryStatus::DivergentSuspect,
                },
                Err(e) => return Err(e),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionScan {
    pub p: f64,
    pub mu: f64,
    pub gamma: f64,
    /// `d_j = ‖z^j‖_{p,γ} / ‖z^j‖_{p,μ}` for `j = 0..=j_max`.
    pub ratios: Vec<f64>,
    /// Log-log slope of `d_j` over `j` in `[sqrt(j_max), j_max]`.
    pub decay_exponent: f64,
    pub decay_stderr: f64,
    pub monotone: bool,
}

/// Diagonal entries of the inclusion `A^p_μ -> A^p_γ` in the monomial basis
/// (exactly diagonal at `p = 2`) and their fitted decay rate.
pub fn inclusion_ratio_scan(p: f64, mu: f64, gamma: f64, j_max: usize) -> Result<InclusionScan, NormError> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(NormError::InvalidSpace(format!("p must be >= 1, got {p}")));
    }
    if !(mu > 0.0 && mu < gamma && gamma.is_finite()) {
        return Err(NormError::InvalidSpace(format!(
            "need 0 < mu < gamma, got mu = {mu}, gamma = {gamma}"
        )));
    }
    if j_max < 4 {
        return Err(NormError::InvalidSpace("j_max must be at least 4".into()));
    }
    let ratios: Vec<f64> = (0..=j_max)
        .map(|j| monomial_norm(j, p, gamma) / monomial_norm(j, p, mu))
        .collect();
    let monotone = ratios.windows(2).all(|w| w[1] < w[0]);

    let lo = (j_max as f64).sqrt().ceil() as usize;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut j = lo.max(1) as f64;
    while (j as usize) <= j_max {
        let jj = j as usize;
        xs.push((jj as f64).ln());
        ys.push(ratios[jj].ln());
        j *= 1.25;
    }
    let fit = crate::classify::linear_fit(&xs, &ys);
    Ok(InclusionScan {
        p,
        mu,
        gamma,
        ratios,
        decay_exponent: fit.slope,
        decay_stderr: fit.slope_stderr,
        monotone,
    })
}
