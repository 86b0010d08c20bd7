//! Gauss-Jacobi quadrature used as an independent oracle for the
//! recurrence-based moments and Galerkin entries.
//!
//! Nodes come from the Golub-Welsch eigenvalue problem, solved with
//! nalgebra, then polished by Newton steps on `P_n^{(a,b)}`; weights use the
//! derivative formula, scaled by the weight mass from statrs' Gamma. Neither
//! shares code with the main assembly path.

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::gamma;

/// Nodes and weights for `∫ f(x) (1-x)^a (1+x)^b dx`, exact for degree `2n-1`.
#[derive(Debug, Clone)]
pub struct GaussJacobi {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussJacobi {
    /// `a, b > -1`.
    pub fn new(n: usize, a: f64, b: f64) -> Self {
        assert!(n > 0, "need at least one node");
        assert!(a > -1.0 && b > -1.0, "Jacobi exponents must exceed -1");
        let ab = a + b;
        let mut j = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            let kf = k as f64;
            j[(k, k)] = if k == 0 {
                (b - a) / (ab + 2.0)
            } else {
                (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
            };
            if k + 1 < n {
                let k1 = kf + 1.0;
                let beta = if k == 0 {
                    4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
                } else {
                    let s = 2.0 * k1 + ab;
                    4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + ab) / (s * s * (s + 1.0) * (s - 1.0))
                };
                let off = beta.sqrt();
                j[(k, k + 1)] = off;
                j[(k + 1, k)] = off;
            }
        }
        let eig = SymmetricEigen::new(j);
        let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        nodes.sort_by(f64::total_cmp);
        let mu0 = 2f64.powf(ab + 1.0) * gamma(a + 1.0) * gamma(b + 1.0) / gamma(ab + 2.0);
        let mut weights = Vec::with_capacity(n);
        for x in nodes.iter_mut() {
            // the eigenvalue solver leaves ~1e-15 absolute error, which
            // the steep weight near a singular endpoint amplifies
            for _ in 0..3 {
                let (p, dp) = jacobi_with_derivative(n, a, b, *x);
                *x -= p / dp;
            }
            let (_, dp) = jacobi_with_derivative(n, a, b, *x);
            weights.push(1.0 / ((1.0 - *x * *x) * dp * dp));
        }
        // w_i ∝ 1/((1-x_i²) P_n'(x_i)²); the constant is fixed by Σw = μ₀
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w *= mu0 / total);
        Self { nodes, weights }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `P_n^{(a,b)}(x)` and its derivative by the three-term recurrence.
fn jacobi_with_derivative(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let ab = a + b;
    let (mut p0, mut d0) = (1.0, 0.0);
    let (mut p1, mut d1) = (0.5 * (a - b) + 0.5 * (ab + 2.0) * x, 0.5 * (ab + 2.0));
    for k in 2..=n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let c0 = 2.0 * kf * (kf + ab) * (s - 2.0);
        let lin = (s - 1.0) * s * (s - 2.0);
        let cst = (s - 1.0) * (a * a - b * b);
        let c2 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * s;
        let p2 = ((lin * x + cst) * p1 - c2 * p0) / c0;
        let d2 = ((lin * x + cst) * d1 + lin * p1 - c2 * d0) / c0;
        (p0, p1, d0, d1) = (p1, p2, d1, d2);
    }
    if n == 0 {
        (p0, d0)
    } else {
        (p1, d1)
    }
}

/// Integrates `f(x) (1-x)^a (1+x)^b` over [-1, 1], doubling the node count
/// until two successive rules agree to `tol` (relative to `1 + |I|`).
pub fn integrate_adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, start: usize, tol: f64) -> f64 {
    let mut n = start.max(4);
    let mut prev = GaussJacobi::new(n, a, b).integrate(&f);
    while n < 1024 {
        n *= 2;
        let next = GaussJacobi::new(n, a, b).integrate(&f);
        if (next - prev).abs() <= tol * (1.0 + next.abs()) {
            return next;
        }
        prev = next;
    }
    prev
}
