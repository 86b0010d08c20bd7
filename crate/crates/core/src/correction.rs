//! Convergence-order prediction and the a-posteriori eigenvalue correction.
//!
//! Each singular term contributes coefficients `⟨R_n, q y⟩` that decay like
//! a power of `n` set by the effective exponents at the two endpoints. The
//! tail sum over `n ≥ N` of those products is estimated in closed form,
//! with the unknown endpoint data of the exact eigenfunction replaced by
//! that of the discrete one, and subtracted from `λ^(N)`.

use serde::{Deserialize, Serialize};

use crate::assembly::GalerkinSystem;
use crate::basis::{Basis, EndpointFlags};
use crate::eigen::EigenPair;
use crate::error::{Error, Result};
use crate::potential::{is_nonneg_integer, PotentialTerm};
use crate::special::{gamma, rgamma};

/// `p(δ) = 6 − 4δ`
pub fn order_exponent(delta: f64) -> f64 {
    6.0 - 4.0 * delta
}

/// `ω̂(δ₀, δ₁) = 2^{1−δ₀−δ₁} Γ(1−δ₀) / Γ(δ₀)`; exactly zero at the poles of `Γ(δ₀)`.
pub fn omega_hat(d0: f64, d1: f64) -> f64 {
    let r = rgamma(d0);
    if r == 0.0 {
        return 0.0;
    }
    2f64.powf(1.0 - d0 - d1) * gamma(1.0 - d0) * r
}

/// `ω(±1, δ₀, δ₁) = 2(2 − δ₀ − κ_±) ω̂(δ₀, δ₁)`
pub fn omega(kappa: u8, d0: f64, d1: f64) -> f64 {
    2.0 * (2.0 - d0 - kappa as f64) * omega_hat(d0, d1)
}

/// Endpoint data of one term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TermEndpointData {
    /// `β − r − κ₊`
    pub hat_beta: f64,
    /// `γ − ℓ − κ₋`
    pub hat_gamma: f64,
    pub ghat_left: f64,
    pub ghat_right: f64,
    pub sigma_left: f64,
    pub sigma_right: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointData {
    pub kappa: EndpointFlags,
    pub terms: Vec<TermEndpointData>,
}

/// Smooth factor of `g = (1−x)^r (1+x)^ℓ ĝ` at the endpoints. Sides with
/// multiplicity above one are reported as zero (no correction there).
fn ghat(term: &PotentialTerm) -> (f64, f64) {
    let g = term.endpoint_samples();
    let left = match term.l {
        0 => g.g_left / 2f64.powi(term.r as i32),
        1 => g.dg_left / 2f64.powi(term.r as i32),
        _ => 0.0,
    };
    let right = match term.r {
        0 => g.g_right / 2f64.powi(term.l as i32),
        1 => -g.dg_right / 2f64.powi(term.l as i32),
        _ => 0.0,
    };
    (left, right)
}

pub fn endpoint_data(terms: &[PotentialTerm], kappa: EndpointFlags) -> EndpointData {
    let terms = terms
        .iter()
        .map(|t| {
            let hat_beta = t.exponents.beta - t.r as f64 - kappa.kappa_plus as f64;
            let hat_gamma = t.exponents.gamma - t.l as f64 - kappa.kappa_minus as f64;
            let (ghat_left, ghat_right) = ghat(t);
            let sigma_left = if t.l > 1 || !t.singular_left() {
                0.0
            } else {
                ghat_left * omega(kappa.kappa_minus, hat_gamma, hat_beta)
            };
            let sigma_right = if t.r > 1 || !t.singular_right() {
                0.0
            } else {
                ghat_right * omega(kappa.kappa_plus, hat_beta, hat_gamma)
            };
            TermEndpointData {
                hat_beta,
                hat_gamma,
                ghat_left,
                ghat_right,
                sigma_left,
                sigma_right,
            }
        })
        .collect();
    EndpointData { kappa, terms }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderPrediction {
    /// `min(p_left, p_right)`; infinite for a bounded potential.
    pub p: f64,
    pub p_left: f64,
    pub p_right: f64,
    /// Terms singular at −1 (`−γ ∉ ℕ₀`).
    pub left: Vec<usize>,
    /// Terms singular at +1 (`−β ∉ ℕ₀`).
    pub right: Vec<usize>,
}

pub fn predicted_order(terms: &[PotentialTerm], kappa: EndpointFlags) -> OrderPrediction {
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut p_left = f64::INFINITY;
    let mut p_right = f64::INFINITY;
    for (i, t) in terms.iter().enumerate() {
        if !is_nonneg_integer(-t.exponents.gamma) {
            left.push(i);
            let g = t.exponents.gamma - t.l as f64 - kappa.kappa_minus as f64;
            p_left = p_left.min(order_exponent(g));
        }
        if !is_nonneg_integer(-t.exponents.beta) {
            right.push(i);
            let b = t.exponents.beta - t.r as f64 - kappa.kappa_plus as f64;
            p_right = p_right.min(order_exponent(b));
        }
    }
    OrderPrediction {
        p: p_left.min(p_right),
        p_left,
        p_right,
        left,
        right,
    }
}

/// `(ẑ(−1), ẑ(1))` where `z = (1−x)^{κ₊}(1+x)^{κ₋} ẑ`.
pub fn hat_endpoint_values(zeta: &[f64], basis: &Basis, kappa: EndpointFlags) -> (f64, f64) {
    let ev = basis.expansion_endpoint_values(zeta);
    let left = if kappa.kappa_minus == 0 { ev.left } else { ev.d_left } / 2f64.powi(kappa.kappa_plus as i32);
    let right = if kappa.kappa_plus == 0 { ev.right } else { -ev.d_right } / 2f64.powi(kappa.kappa_minus as i32);
    (left, right)
}

/// `Δ̂_ij` for basis size `n` with endpoint values `zhat = (ẑ(−1), ẑ(1))`.
pub fn delta_hat(i: usize, j: usize, n: usize, data: &EndpointData, zhat: (f64, f64)) -> f64 {
    let (ti, tj) = (&data.terms[i], &data.terms[j]);
    let (zl, zr) = zhat;
    let n1 = (n + 1) as f64;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let pg = |t: &TermEndpointData| order_exponent(t.hat_gamma);
    let pb = |t: &TermEndpointData| order_exponent(t.hat_beta);

    let mut total = 0.0;
    let ll = ti.sigma_left * tj.sigma_left;
    if ll != 0.0 {
        let s = pg(ti) + pg(tj);
        total += 2.0 * ll * zl * zl / (s * n1.powf(s / 2.0));
    }
    let rr = ti.sigma_right * tj.sigma_right;
    if rr != 0.0 {
        let s = pb(ti) + pb(tj);
        total += 2.0 * rr * zr * zr / (s * n1.powf(s / 2.0));
    }
    let lr = ti.sigma_left * tj.sigma_right;
    if lr != 0.0 {
        total += sign * lr * zl * zr / (2.0 * n1.powf(1.0 + (pg(ti) + pb(tj)) / 2.0));
    }
    let rl = ti.sigma_right * tj.sigma_left;
    if rl != 0.0 {
        total += sign * rl * zr * zl / (2.0 * n1.powf(1.0 + (pb(ti) + pg(tj)) / 2.0));
    }
    total
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectionReport {
    pub index: usize,
    pub lambda: f64,
    pub mu: f64,
    /// `Δ̂_ij`, row-major over terms.
    pub delta_terms: Vec<Vec<f64>>,
    pub p_predicted: f64,
    pub zhat_left: f64,
    pub zhat_right: f64,
}

/// `μ = λ − Σ_ij Δ̂_ij` for a normalized pair.
pub fn corrected_eigenvalue(pair: &EigenPair, sys: &GalerkinSystem, terms: &[PotentialTerm]) -> Result<CorrectionReport> {
    if !terms.iter().any(|t| t.singular_left() || t.singular_right()) {
        return Err(Error::BoundedPotential);
    }
    let kappa = sys.basis.flags();
    let data = endpoint_data(terms, kappa);
    let order = predicted_order(terms, kappa);
    let zhat = hat_endpoint_values(&pair.zeta, &sys.basis, kappa);
    let s = terms.len();
    let delta_terms: Vec<Vec<f64>> = (0..s)
        .map(|i| (0..s).map(|j| delta_hat(i, j, sys.n, &data, zhat)).collect())
        .collect();
    let total: f64 = delta_terms.iter().flatten().sum();
    Ok(CorrectionReport {
        index: pair.index,
        lambda: pair.lambda,
        mu: pair.lambda - total,
        delta_terms,
        p_predicted: order.p,
        zhat_left: zhat.0,
        zhat_right: zhat.1,
    })
}
