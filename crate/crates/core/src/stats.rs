//! Sample statistics and least-squares fits.

use crate::linalg::{CMat, C64};

/// Mean and standard error of the mean.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self { mean: f64::NAN, stderr: f64::NAN, n };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Self { mean, stderr, n }
    }

    /// `|mean - exact| <= k · stderr`, with exact equality accepted when the
    /// spread vanishes.
    pub fn agrees_with(&self, exact: f64, k: f64) -> bool {
        (self.mean - exact).abs() <= k * self.stderr + 1e-12
    }
}

/// Complex scalar estimate; the standard error is that of the complex mean
/// (`√(E|z - z̄|² / N)`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexEstimate {
    pub mean: C64,
    pub stderr: f64,
    pub n: usize,
}

impl ComplexEstimate {
    pub fn from_samples(zs: &[C64]) -> Self {
        let n = zs.len();
        let mean = zs.iter().sum::<C64>() / n as f64;
        let stderr = if n > 1 {
            let var = zs.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Self { mean, stderr, n }
    }

    pub fn agrees_with(&self, exact: C64, k: f64) -> bool {
        (self.mean - exact).norm() <= k * self.stderr + 1e-12
    }
}

/// Running entrywise mean and complex-modulus standard error of matrices.
#[derive(Clone, Debug)]
pub struct MatrixAccumulator {
    sum: CMat,
    sum_sq: nalgebra::DMatrix<f64>,
    n: usize,
}

impl MatrixAccumulator {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { sum: CMat::zeros(rows, cols), sum_sq: nalgebra::DMatrix::zeros(rows, cols), n: 0 }
    }

    pub fn push(&mut self, m: &CMat) {
        self.sum += m;
        self.sum_sq += m.map(|z| z.norm_sqr());
        self.n += 1;
    }

    pub fn merge(&mut self, other: &Self) {
        self.sum += &other.sum;
        self.sum_sq += &other.sum_sq;
        self.n += other.n;
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> CMat {
        &self.sum / C64::new(self.n as f64, 0.0)
    }

    /// Entrywise standard error of the mean.
    pub fn stderr(&self) -> nalgebra::DMatrix<f64> {
        let n = self.n as f64;
        let mean = self.mean();
        nalgebra::DMatrix::from_fn(self.sum.nrows(), self.sum.ncols(), |i, j| {
            if self.n < 2 {
                return 0.0;
            }
            let var = (self.sum_sq[(i, j)] / n - mean[(i, j)].norm_sqr()).max(0.0) * n / (n - 1.0);
            (var / n).sqrt()
        })
    }

    /// Largest ratio `|mean_ij - exact_ij| / stderr_ij` (entries with zero
    /// spread must match exactly up to `1e-12`).
    pub fn worst_z(&self, exact: &CMat) -> f64 {
        let mean = self.mean();
        let se = self.stderr();
        let mut worst = 0f64;
        for i in 0..exact.nrows() {
            for j in 0..exact.ncols() {
                let dev = (mean[(i, j)] - exact[(i, j)]).norm();
                if se[(i, j)] > 0.0 {
                    worst = worst.max(dev / se[(i, j)]);
                } else if dev > 1e-12 {
                    worst = f64::INFINITY;
                }
            }
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Weighted least squares `y ≈ intercept + slope·x`; `R²` is the weighted
/// coefficient of determination.
pub fn linear_fit(x: &[f64], y: &[f64], weights: Option<&[f64]>) -> LinearFit {
    assert_eq!(x.len(), y.len());
    let ones = vec![1.0; x.len()];
    let w = weights.unwrap_or(&ones);
    let sw: f64 = w.iter().sum();
    let mx = x.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let my = y.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let sxx: f64 = x.iter().zip(w).map(|(a, b)| b * (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).zip(w).map(|((a, c), b)| b * (a - mx) * (c - my)).sum();
    let syy: f64 = y.iter().zip(w).map(|(c, b)| b * (c - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(y).zip(w).map(|((a, c), b)| b * (c - intercept - slope * a).powi(2)).sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    LinearFit { slope, intercept, r2 }
}

/// Fit of `log y` against `log x`.
pub fn power_law_fit(x: &[f64], y: &[f64], weights: Option<&[f64]>) -> LinearFit {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly, weights)
}
