//! Truncated Taylor series and the coefficient-space realizations of the
//! Cesàro operator, its inverse, differentiation and the polynomial
//! multipliers `z` and `1 - z`.
//!
//! A [`TaylorTruncation`] of degree `N` stores the Taylor coefficients
//! `a_0, ..., a_N` of an analytic function on the unit disk. The Cesàro
//! operator is lower triangular in the monomial basis, so truncating before
//! or after applying it gives the same first `N + 1` coefficients.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::SeriesError;

/// Degree-`N` Taylor polynomial with complex coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorTruncation {
    coeffs: Vec<Complex64>,
}

impl TaylorTruncation {
    /// Builds a truncation from its coefficients. An empty vector is read as
    /// the zero polynomial of degree 0.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); degree + 1],
        }
    }

    /// `z^j` as a truncation of degree `j`.
    pub fn monomial(j: usize) -> Self {
        let mut f = Self::zero(j);
        f.coeffs[j] = Complex64::new(1.0, 0.0);
        f
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient `k`, zero above the degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Truncates to, or zero-pads up to, the given degree.
    pub fn with_degree(&self, degree: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(degree + 1, Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    /// Horner evaluation of the polynomial at `z`.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    /// Sum of two truncations; the shorter one is zero-padded.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.degree().max(other.degree());
        Self {
            coeffs: (0..=n).map(|k| self.coeff(k) + other.coeff(k)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Largest coefficient-wise modulus difference over degrees `0..=upto`.
    pub fn max_abs_diff(&self, other: &Self, upto: usize) -> f64 {
        (0..=upto)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }
}

/// Coefficient-space operators acting on truncations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoeffOperator {
    Cesaro,
    CesaroInverse,
    Differentiate,
    MultiplyByZ,
    MultiplyByOneMinusZ,
}

impl CoeffOperator {
    pub fn apply(self, f: &TaylorTruncation) -> TaylorTruncation {
        match self {
            CoeffOperator::Cesaro => cesaro_apply(f),
            CoeffOperator::CesaroInverse => cesaro_inverse_apply(f),
            CoeffOperator::Differentiate => differentiate(f),
            CoeffOperator::MultiplyByZ => multiply_by_z(f),
            CoeffOperator::MultiplyByOneMinusZ => multiply_by_one_minus_z(f),
        }
    }
}

/// Cesàro means: output coefficient `k` is the mean of `a_0, ..., a_k`.
pub fn cesaro_apply(f: &TaylorTruncation) -> TaylorTruncation {
    let mut prefix = Complex64::new(0.0, 0.0);
    let coeffs = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, &a)| {
            prefix += a;
            prefix / (k as f64 + 1.0)
        })
        .collect();
    TaylorTruncation { coeffs }
}

/// Inverse Cesàro operator `(1 - z)(h + z h')`:
/// `c_0 = b_0` and `c_k = (k + 1) b_k - k b_{k-1}`.
pub fn cesaro_inverse_apply(h: &TaylorTruncation) -> TaylorTruncation {
    let b = &h.coeffs;
    let coeffs = (0..b.len())
        .map(|k| {
            if k == 0 {
                b[0]
            } else {
                b[k] * (k as f64 + 1.0) - b[k - 1] * k as f64
            }
        })
        .collect();
    TaylorTruncation { coeffs }
}

/// Recovers `f` from `g = C f` through `(1 - z)(z g)'`, composed from the
/// multiplier and differentiation blocks.
///
/// The result has degree `N - 1` for an input of degree `N >= 1`; a
/// degree-0 input yields a degree-0 output.
pub fn recover_from_cesaro(g: &TaylorTruncation) -> TaylorTruncation {
    let full = multiply_by_one_minus_z(&differentiate(&multiply_by_z(g)));
    full.with_degree(g.degree().saturating_sub(1))
}

/// `f'`, of degree `N - 1` (degree 0 stays degree 0).
pub fn differentiate(f: &TaylorTruncation) -> TaylorTruncation {
    if f.degree() == 0 {
        return TaylorTruncation::zero(0);
    }
    let coeffs = f.coeffs[1..]
        .iter()
        .enumerate()
        .map(|(k, &a)| a * (k as f64 + 1.0))
        .collect();
    TaylorTruncation { coeffs }
}

/// `z f`, of degree `N + 1`.
pub fn multiply_by_z(f: &TaylorTruncation) -> TaylorTruncation {
    let mut coeffs = Vec::with_capacity(f.coeffs.len() + 1);
    coeffs.push(Complex64::new(0.0, 0.0));
    coeffs.extend_from_slice(&f.coeffs);
    TaylorTruncation { coeffs }
}

/// `(1 - z) f`, of degree `N + 1`.
pub fn multiply_by_one_minus_z(f: &TaylorTruncation) -> TaylorTruncation {
    let n = f.degree();
    let coeffs = (0..=n + 1)
        .map(|k| {
            f.coeff(k)
                - if k == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    f.coeff(k - 1)
                }
        })
        .collect();
    TaylorTruncation { coeffs }
}

/// Which binomial `(1 ± z)^{-s}` to expand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BinomialSign {
    PlusZ,
    MinusZ,
}

/// Taylor coefficients of `(1 ± z)^{-s}` up to degree `n`, through the
/// recurrence `c_{k+1} = c_k (s + k) / (k + 1)`; `PlusZ` alternates signs.
pub fn binomial_series_coeffs(
    exponent: f64,
    sign: BinomialSign,
    n: usize,
) -> Result<TaylorTruncation, SeriesError> {
    if !exponent.is_finite() {
        return Err(SeriesError::NonFiniteExponent(exponent));
    }
    let flip = match sign {
        BinomialSign::PlusZ => -1.0,
        BinomialSign::MinusZ => 1.0,
    };
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut c = 1.0_f64;
    for k in 0..=n {
        coeffs.push(Complex64::new(c, 0.0));
        c *= flip * (exponent + k as f64) / (k as f64 + 1.0);
    }
    Ok(TaylorTruncation { coeffs })
}

/// Truncation of `z^{m-1} (1 - z)^{-m}`, which satisfies `C f = f / m`.
pub fn eigenfunction(m: u32, n: usize) -> Result<TaylorTruncation, SeriesError> {
    if m == 0 {
        return Err(SeriesError::InvalidEigenIndex);
    }
    let shift = (m - 1) as usize;
    if n < shift {
        return Ok(TaylorTruncation::zero(n));
    }
    let base = binomial_series_coeffs(m as f64, BinomialSign::MinusZ, n - shift)?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); shift];
    coeffs.extend(base.into_coeffs());
    Ok(TaylorTruncation { coeffs })
}

/// Largest coefficient residual of `C f - f / m`, each term divided by
/// `max(1, |f_k|)`.
pub fn eigen_residual(f: &TaylorTruncation, m: u32) -> f64 {
    let cf = cesaro_apply(f);
    let inv_m = 1.0 / m as f64;
    f.coeffs
        .iter()
        .zip(cf.coeffs.iter())
        .map(|(&a, &c)| (c - a * inv_m).norm() / a.norm().max(1.0))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn re(v: &TaylorTruncation) -> Vec<f64> {
        v.coeffs().iter().map(|c| c.re).collect()
    }

    #[test]
    fn cesaro_of_constant_and_monomial() {
        let f = TaylorTruncation::from_real(&[1.0]).with_degree(3);
        assert_eq!(re(&cesaro_apply(&f)), vec![1.0, 0.5, 1.0 / 3.0, 0.25]);
        let z2 = TaylorTruncation::monomial(2).with_degree(4);
        assert_eq!(re(&cesaro_apply(&z2)), vec![0.0, 0.0, 1.0 / 3.0, 0.25, 0.2]);
    }

    #[test]
    fn geometric_series_is_fixed() {
        let f = TaylorTruncation::from_real(&[1.0; 101]);
        // direct summation oracle: (1/(k+1)) * sum_{j<=k} 1
        let oracle: Vec<f64> = (0..=100)
            .map(|k| (0..=k).map(|_| 1.0).sum::<f64>() / (k as f64 + 1.0))
            .collect();
        assert_eq!(re(&cesaro_apply(&f)), oracle);
        assert_eq!(cesaro_apply(&f), f);
    }

    #[test]
    fn inverse_examples() {
        let h = TaylorTruncation::from_real(&[1.0, 0.5, 1.0 / 3.0, 0.25]);
        let out = cesaro_inverse_apply(&h);
        assert!(out.max_abs_diff(&TaylorTruncation::from_real(&[1.0, 0.0, 0.0, 0.0]), 3) < 1e-15);
        let c = TaylorTruncation::from_real(&[2.5]).with_degree(4);
        assert_eq!(re(&cesaro_inverse_apply(&c)), vec![2.5, -2.5, 0.0, 0.0, 0.0]);
        assert_eq!(
            cesaro_inverse_apply(&TaylorTruncation::from_real(&[3.0])).degree(),
            0
        );
    }

    #[test]
    fn recover_examples() {
        let g = TaylorTruncation::from_real(&[1.0, 0.5, 1.0 / 3.0]);
        let f = recover_from_cesaro(&g);
        assert_eq!(f.degree(), 1);
        assert!(f.max_abs_diff(&TaylorTruncation::from_real(&[1.0, 0.0]), 1) < 1e-15);
        assert!(recover_from_cesaro(&TaylorTruncation::zero(5)).is_zero());
    }

    #[test]
    fn shift_operators() {
        assert_eq!(
            re(&differentiate(&TaylorTruncation::from_real(&[0.0, 0.0, 1.0]))),
            vec![0.0, 2.0]
        );
        assert_eq!(
            re(&differentiate(&TaylorTruncation::from_real(&[7.0]))),
            vec![0.0]
        );
        assert_eq!(
            re(&multiply_by_z(&TaylorTruncation::from_real(&[1.0, 1.0]))),
            vec![0.0, 1.0, 1.0]
        );
        assert_eq!(
            re(&multiply_by_one_minus_z(&TaylorTruncation::from_real(&[
                1.0, 1.0, 1.0
            ]))),
            vec![1.0, 0.0, 0.0, -1.0]
        );
    }

    #[test]
    fn binomial_examples() {
        let geo = binomial_series_coeffs(1.0, BinomialSign::MinusZ, 3).unwrap();
        assert_eq!(re(&geo), vec![1.0; 4]);
        let alt = binomial_series_coeffs(1.0, BinomialSign::PlusZ, 3).unwrap();
        assert_eq!(re(&alt), vec![1.0, -1.0, 1.0, -1.0]);
        // (1-z)^{-2} is the term-by-term derivative of the geometric series
        let sq = binomial_series_coeffs(2.0, BinomialSign::MinusZ, 4).unwrap();
        let oracle = differentiate(&TaylorTruncation::from_real(&[1.0; 6]));
        assert_eq!(sq, oracle);
        assert!(binomial_series_coeffs(f64::NAN, BinomialSign::PlusZ, 3).is_err());
        assert!(binomial_series_coeffs(f64::INFINITY, BinomialSign::MinusZ, 3).is_err());
    }

    #[test]
    fn eigenfunctions_have_zero_residual() {
        for m in 1..=10 {
            let f = eigenfunction(m, 500).unwrap();
            assert_eq!(f.degree(), 500);
            assert!(eigen_residual(&f, m) < 1e-12, "m = {m}");
        }
        assert!(eigenfunction(0, 10).is_err());
    }

    #[test]
    fn evaluation_matches_closed_form() {
        let f = binomial_series_coeffs(1.0, BinomialSign::MinusZ, 200).unwrap();
        let z = Complex64::new(0.3, -0.2);
        let exact = Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - z);
        assert!((f.evaluate(z) - exact).norm() < 1e-14);
    }

    fn poly(max_deg: usize) -> impl Strategy<Value = TaylorTruncation> {
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..=max_deg + 1)
            .prop_map(|v| TaylorTruncation::new(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn cesaro_is_triangular(f in poly(60), cut in 0usize..60) {
            let cut = cut.min(f.degree());
            let full = cesaro_apply(&f);
            let short = cesaro_apply(&f.with_degree(cut));
            prop_assert_eq!(&full.coeffs()[..=cut], short.coeffs());
        }

        #[test]
        fn inverse_undoes_cesaro(f in poly(200)) {
            let back = cesaro_inverse_apply(&cesaro_apply(&f));
            for k in 0..=f.degree() {
                let scale = f.coeff(k).norm().max(1.0);
                prop_assert!((back.coeff(k) - f.coeff(k)).norm() <= 1e-12 * scale);
            }
        }

        #[test]
        fn operators_are_linear(f in poly(40), g in poly(40), s in -2.0..2.0f64) {
            let n = f.degree().max(g.degree());
            let (f, g) = (f.with_degree(n), g.with_degree(n));
            let c = Complex64::new(s, 0.5);
            for op in [CoeffOperator::Cesaro, CoeffOperator::CesaroInverse, CoeffOperator::Differentiate,
                       CoeffOperator::MultiplyByZ, CoeffOperator::MultiplyByOneMinusZ] {
                let lhs = op.apply(&f.scale(c).add(&g));
                let rhs = op.apply(&f).scale(c).add(&op.apply(&g));
                let scale = (n as f64 + 1.0) * 4.0;
                prop_assert!(lhs.max_abs_diff(&rhs, lhs.degree()) <= 1e-13 * scale);
            }
        }
    }
}
