//! Adaptive Chebyshev interpolation of the smooth numerators `g_i`.

use rustfft::{num_complex::Complex64, FftPlanner};

use crate::error::{Error, Result};

/// Relative size below which trailing coefficients are considered noise.
pub const CHOP_TOL: f64 = 1e-15;
/// Largest degree tried before giving up.
pub const MAX_DEGREE: usize = 1 << 16;

/// `g(x) ≈ Σ_k c_k T_k(x)` on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevApproximant {
    pub coefficients: Vec<f64>,
    /// Sum of the magnitudes of the discarded coefficients.
    pub tail_bound: f64,
}

impl ChebyshevApproximant {
    pub fn from_coefficients(coefficients: Vec<f64>) -> Self {
        assert!(!coefficients.is_empty());
        Self {
            coefficients,
            tail_bound: 0.0,
        }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coefficients.iter().skip(1).rev() {
            let b0 = c + 2.0 * x * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coefficients[0] + x * b1 - b2
    }

    /// `(g'(-1), g'(1))` from `T_k'(±1) = (±1)^{k+1} k²`.
    pub fn endpoint_derivatives(&self) -> (f64, f64) {
        let mut left = 0.0;
        let mut right = 0.0;
        for (k, &c) in self.coefficients.iter().enumerate() {
            let k2 = (k * k) as f64;
            right += c * k2;
            left += if k % 2 == 1 { c * k2 } else { -c * k2 };
        }
        (left, right)
    }

    pub fn max_coefficient(&self) -> f64 {
        self.coefficients.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Chebyshev coefficients of the interpolant through `n+1` Chebyshev
/// extreme points, via an FFT of the even extension.
fn interpolate(g: &dyn Fn(f64) -> f64, n: usize, planner: &mut FftPlanner<f64>) -> Result<Vec<f64>> {
    let mut buf = vec![Complex64::new(0.0, 0.0); 2 * n];
    for j in 0..=n {
        let x = (std::f64::consts::PI * j as f64 / n as f64).cos();
        let v = g(x);
        if !v.is_finite() {
            return Err(Error::FitNotConverged { max_degree: n });
        }
        buf[j].re = v;
        if j > 0 && j < n {
            buf[2 * n - j].re = v;
        }
    }
    planner.plan_fft_forward(2 * n).process(&mut buf);
    let scale = 1.0 / n as f64;
    let mut c: Vec<f64> = buf[..=n].iter().map(|z| z.re * scale).collect();
    c[0] *= 0.5;
    c[n] *= 0.5;
    Ok(c)
}

/// Interpolates `g` at 9, 17, 33, ... Chebyshev points until the upper half
/// of the coefficients is negligible, then chops the tail.
pub fn chebyshev_fit(g: &dyn Fn(f64) -> f64) -> Result<ChebyshevApproximant> {
    let mut planner = FftPlanner::new();
    let mut n = 8;
    while n <= MAX_DEGREE {
        let c = interpolate(g, n, &mut planner)?;
        let scale = c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return Ok(ChebyshevApproximant::from_coefficients(vec![0.0]));
        }
        let tol = CHOP_TOL * scale;
        if c[n / 2 + 1..].iter().all(|v| v.abs() <= tol) {
            let keep = c.iter().rposition(|v| v.abs() > tol).map_or(1, |i| i + 1);
            let tail_bound = c[keep..].iter().map(|v| v.abs()).sum();
            let mut coefficients = c;
            coefficients.truncate(keep);
            return Ok(ChebyshevApproximant {
                coefficients,
                tail_bound,
            });
        }
        n *= 2;
    }
    Err(Error::FitNotConverged { max_degree: MAX_DEGREE })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant() {
        let f = chebyshev_fit(&|_| 1.0).unwrap();
        assert_eq!(f.degree(), 0);
        assert!((f.coefficients[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quadratic() {
        let f = chebyshev_fit(&|x| x * x).unwrap();
        assert_eq!(f.degree(), 2);
        assert!((f.coefficients[0] - 0.5).abs() < 1e-15);
        assert!(f.coefficients[1].abs() < 1e-15);
        assert!((f.coefficients[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn exponential_numerator() {
        let g = |x: f64| 10.0 * (1.0 - x).exp();
        let f = chebyshev_fit(&g).unwrap();
        let norm = 10.0 * 2f64.exp();
        let worst = (0..1000)
            .map(|i| -1.0 + 2.0 * i as f64 / 999.0)
            .map(|x| (g(x) - f.eval(x)).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-13 * norm, "{worst:e}");
        let (dl, dr) = f.endpoint_derivatives();
        assert!((dl + 10.0 * 2f64.exp()).abs() < 1e-11);
        assert!((dr + 10.0).abs() < 1e-11);
    }

    #[test]
    fn non_analytic_input_fails() {
        assert!(matches!(
            chebyshev_fit(&|x: f64| x.abs()),
            Err(Error::FitNotConverged { .. })
        ));
        assert!(chebyshev_fit(&|x: f64| 1.0 / x).is_err());
    }
}
