//! Tensor-product quadrature for `∫_D |f|^p (1 - |z|)^α dA` with
//! `dA = dx dy / π`.
//!
//! In polar form the integral is `2 ∫_0^1 r (1 - r)^α M_p(r) dr`, where
//! `M_p(r)` is the angular mean of `|f(r e^{it})|^p`. The radial factor is
//! split into dyadic panels in `s = 1 - r` (Gauss–Legendre on each) plus a
//! last panel `[0, 2^{-K-1}]` carrying a Gauss–Jacobi rule for `s^α`. The
//! angular mean uses a uniform grid whose size follows the effective degree
//! of `f` at each radius; values on the grid come from one inverse FFT.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::NormError;
use crate::series::TaylorTruncation;
use crate::special::ln_gamma;

/// Smallest angular grid used at any radius.
const MIN_ANGULAR: usize = 8;
/// Terms below `e^{-40}` of the largest term at a radius are dropped.
const NEGLIGIBLE_LOG: f64 = 40.0;
/// Dyadic panels beyond `log2(degree + 1)`.
const EXTRA_PANELS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig {
    /// Gauss nodes per radial panel at the first pass.
    pub panel_nodes: usize,
    /// Angular grid is the next power of two above `oversampling * p * d`.
    pub angular_oversampling: f64,
    /// Relative error estimate required in both directions.
    pub rel_tol: f64,
    /// Number of refinement rounds before giving up.
    pub max_refinements: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            panel_nodes: 16,
            angular_oversampling: 1.0,
            rel_tol: 1e-10,
            max_refinements: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialNode {
    pub r: f64,
    /// Includes the factor `2 r (1 - r)^α`.
    pub weight: f64,
}

/// Radial nodes and weights for the measure `(1 - |z|)^α dA`, sized for
/// polynomials up to a given degree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiskQuadrature {
    alpha: f64,
    degree: usize,
    panel_nodes: usize,
    angular_oversampling: f64,
    nodes: Vec<RadialNode>,
}

impl DiskQuadrature {
    pub fn new(
        alpha: f64,
        degree: usize,
        panel_nodes: usize,
        angular_oversampling: f64,
    ) -> Result<Self, NormError> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(NormError::InvalidQuadrature(format!(
                "alpha must be >= 0, got {alpha}"
            )));
        }
        if panel_nodes < 2 {
            return Err(NormError::InvalidQuadrature(
                "need at least 2 nodes per panel".into(),
            ));
        }
        if !(angular_oversampling.is_finite() && angular_oversampling >= 1.0) {
            return Err(NormError::InvalidQuadrature(format!(
                "angular oversampling must be >= 1, got {angular_oversampling}"
            )));
        }

        let panels = (usize::BITS - (degree + 1).leading_zeros()) as usize + EXTRA_PANELS;
        let legendre = GaussLegendre::new(NonZeroUsize::new(panel_nodes).expect("checked above"));
        let mut nodes = Vec::with_capacity((panels + 2) * panel_nodes);

        for k in 0..=panels {
            let hi = 0.5f64.powi(k as i32);
            let lo = 0.5 * hi;
            let (mid, half) = (0.5 * (hi + lo), 0.5 * (hi - lo));
            for &(x, w) in legendre.as_node_weight_pairs() {
                let s = mid + half * x;
                let r = 1.0 - s;
                nodes.push(RadialNode {
                    r,
                    weight: 2.0 * half * w * r * s.powf(alpha),
                });
            }
        }

        let h = 0.5f64.powi(panels as i32 + 1);
        let scale = (0.5 * h).powf(alpha + 1.0);
        for (x, w) in gauss_jacobi_right(panel_nodes, alpha) {
            let s = 0.5 * h * (1.0 + x);
            let r = 1.0 - s;
            nodes.push(RadialNode {
                r,
                weight: 2.0 * scale * w * r,
            });
        }

        Ok(Self {
            alpha,
            degree,
            panel_nodes,
            angular_oversampling,
            nodes,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn panel_nodes(&self) -> usize {
        self.panel_nodes
    }

    pub fn radial_nodes(&self) -> &[RadialNode] {
        &self.nodes
    }

    /// `∫_D dμ_α`, which equals `2 B(2, α + 1)`.
    pub fn mass(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }

    pub fn angular_nodes(&self, p: f64, effective_degree: usize) -> usize {
        let target = (self.angular_oversampling * p * effective_degree as f64).ceil() as usize + 1;
        target.max(MIN_ANGULAR).next_power_of_two()
    }

    /// Largest angular grid this rule uses for `f` at exponent `p`.
    pub fn max_angular_nodes(&self, f: &TaylorTruncation, p: f64) -> usize {
        let logs = log_moduli(f);
        self.nodes
            .iter()
            .map(|n| self.angular_nodes(p, effective_degree(&logs, n.r.ln())))
            .max()
            .unwrap_or(MIN_ANGULAR)
    }

    /// `∫_D |f|^p dμ_α`.
    pub fn integrate_power(&self, f: &TaylorTruncation, p: f64) -> f64 {
        if f.is_zero() {
            return 0.0;
        }
        let coeffs = f.coeffs();
        let logs = log_moduli(f);
        let mut planner = FftPlanner::<f64>::new();
        let mut buf: Vec<Complex64> = Vec::new();
        let mut total = 0.0;

        for node in &self.nodes {
            let d = effective_degree(&logs, node.r.ln());
            let t = self.angular_nodes(p, d);
            buf.clear();
            buf.resize(t, Complex64::new(0.0, 0.0));
            let mut rj = 1.0;
            for (j, &a) in coeffs.iter().take(d + 1).enumerate() {
                buf[j % t] += a * rj;
                rj *= node.r;
            }
            planner.plan_fft_inverse(t).process(&mut buf);
            let sum: f64 = if p == 2.0 {
                buf.iter().map(|v| v.norm_sqr()).sum()
            } else if (2.0 * p).fract() == 0.0 && p < 64.0 {
                // |v|^p as |v|^floor(p) |v|^(p - floor(p)), avoiding powf
                let whole = p.floor() as i32;
                let has_half = p.fract() != 0.0;
                buf.iter()
                    .map(|v| {
                        let n = v.norm_sqr().sqrt();
                        let w = n.powi(whole);
                        if has_half {
                            w * n.sqrt()
                        } else {
                            w
                        }
                    })
                    .sum()
            } else {
                let half = 0.5 * p;
                buf.iter().map(|v| v.norm_sqr().powf(half)).sum()
            };
            total += node.weight * sum / t as f64;
        }
        total
    }
}

fn log_moduli(f: &TaylorTruncation) -> Vec<f64> {
    f.coeffs().iter().map(|c| c.norm().ln()).collect()
}

/// Highest index whose term `|a_j| r^j` is within `e^{-40}` of the largest.
fn effective_degree(logs: &[f64], ln_r: f64) -> usize {
    let peak = logs
        .iter()
        .enumerate()
        .map(|(j, &l)| l + j as f64 * ln_r)
        .fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return 0;
    }
    logs.iter()
        .enumerate()
        .rposition(|(j, &l)| l + j as f64 * ln_r >= peak - NEGLIGIBLE_LOG)
        .unwrap_or(0)
}

/// Golub–Welsch nodes and weights on `[-1, 1]` for the weight `(1 + x)^b`.
fn gauss_jacobi_right(q: usize, b: f64) -> Vec<(f64, f64)> {
    let a = 0.0;
    let ab = a + b;
    let mut jacobi = DMatrix::<f64>::zeros(q, q);
    for n in 0..q {
        let nf = n as f64;
        jacobi[(n, n)] = if n == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * nf + ab) * (2.0 * nf + ab + 2.0))
        };
        if n >= 1 {
            let t = 2.0 * nf + ab;
            let off = (4.0 * nf * (nf + a) * (nf + b) * (nf + ab) / (t * t * (t + 1.0) * (t - 1.0))).sqrt();
            jacobi[(n, n - 1)] = off;
            jacobi[(n - 1, n)] = off;
        }
    }
    let mu0 = ((ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
        - ln_gamma(ab + 2.0))
    .exp();
    let eig = SymmetricEigen::new(jacobi);
    let mut rule: Vec<(f64, f64)> = (0..q)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    rule.sort_by(|x, y| x.0.total_cmp(&y.0));
    rule
}

/// Outcome of an adaptive quadrature norm evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureNorm {
    pub value: f64,
    /// Relative change of the norm across the last refinement.
    pub estimated_rel_error: f64,
    pub radial_nodes: usize,
    pub max_angular_nodes: usize,
    pub refinements: u32,
}

/// `‖f‖_{p,α}` by quadrature.
///
/// Radial and angular resolution are refined separately: the radial error
/// is estimated against the rule with half the panel nodes, the angular
/// error against the doubled grid, and only a direction whose estimate
/// exceeds `config.rel_tol` is doubled. The returned value is the one on the
/// finer angular grid.
pub fn norm_quadrature(
    f: &TaylorTruncation,
    p: f64,
    alpha: f64,
    config: &QuadratureConfig,
) -> Result<QuadratureNorm, NormError> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(NormError::InvalidSpace(format!("p must be >= 1, got {p}")));
    }
    if config.panel_nodes < 4 {
        return Err(NormError::InvalidQuadrature(
            "need at least 4 nodes per panel".into(),
        ));
    }
    let base_rule = DiskQuadrature::new(alpha, f.degree(), config.panel_nodes, config.angular_oversampling)?;
    if f.is_zero() {
        return Ok(QuadratureNorm {
            value: 0.0,
            estimated_rel_error: 0.0,
            radial_nodes: base_rule.radial_nodes().len(),
            max_angular_nodes: MIN_ANGULAR,
            refinements: 0,
        });
    }

    let mut cache: Vec<((usize, u64), f64)> = Vec::new();
    let mut eval = |nodes: usize, os: f64| -> Result<f64, NormError> {
        let key = (nodes, os.to_bits());
        if let Some(&(_, v)) = cache.iter().find(|(k, _)| *k == key) {
            return Ok(v);
        }
        let v = DiskQuadrature::new(alpha, f.degree(), nodes, os)?
            .integrate_power(f, p)
            .powf(1.0 / p);
        cache.push((key, v));
        Ok(v)
    };
    let rel = |a: f64, b: f64| {
        if a == b {
            0.0
        } else {
            (a - b).abs() / a.abs().max(b.abs())
        }
    };

    let (mut nodes, mut os) = (config.panel_nodes, config.angular_oversampling);
    let mut last = f64::NAN;
    let mut rel_change = f64::INFINITY;
    for refinement in 0..=config.max_refinements {
        let base = eval(nodes, os)?;
        let radial = rel(base, eval(nodes / 2, os)?);
        let fine = eval(nodes, 2.0 * os)?;
        let angular = rel(fine, base);
        last = fine;
        rel_change = radial.max(angular);
        if rel_change <= config.rel_tol {
            let rule = DiskQuadrature::new(alpha, f.degree(), nodes, 2.0 * os)?;
            return Ok(QuadratureNorm {
                value: fine,
                estimated_rel_error: rel_change,
                radial_nodes: rule.radial_nodes().len(),
                max_angular_nodes: rule.max_angular_nodes(f, p),
                refinements: refinement,
            });
        }
        if radial > config.rel_tol {
            nodes *= 2;
        }
        if angular > config.rel_tol {
            os *= 2.0;
        }
    }
    Err(NormError::NonConvergedQuadrature {
        last,
        rel_change,
        refinements: config.max_refinements,
    })
}
