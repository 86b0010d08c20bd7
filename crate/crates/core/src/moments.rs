//! Singular Legendre moments `q_m = ∫ P_m(x) (1-x)^{-β} (1+x)^{-γ} dx`.
//!
//! The main path never integrates numerically: the four exponent cases are
//! handled by ratio recurrences, and the general unequal case by a
//! Toeplitz∘Hankel matrix-vector product assembled from the connection
//! coefficients between Legendre and Jacobi(0, -γ) polynomials.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GaussJacobi;
use crate::special::{ln_gamma, rgamma};

/// Exponents of the weight `(1-x)^{-beta} (1+x)^{-gamma}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub beta: f64,
    pub gamma: f64,
}

impl ExponentPair {
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        let e = Self { beta, gamma };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta < 1.0) {
            return Err(Error::InvalidExponent { name: "beta", value: self.beta });
        }
        if !(self.gamma < 1.0) {
            return Err(Error::InvalidExponent { name: "gamma", value: self.gamma });
        }
        Ok(())
    }

    pub fn is_regular(&self) -> bool {
        self.beta == 0.0 && self.gamma == 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    pub exponents: ExponentPair,
    pub values: Vec<f64>,
}

/// `∫ (1-x)^{-β} (1+x)^{-γ} dx = 2^{1-β-γ} Γ(1-β) Γ(1-γ) / Γ(2-β-γ)`.
pub fn weight_mass(e: ExponentPair) -> f64 {
    let (b, g) = (e.beta, e.gamma);
    let log = (1.0 - b - g) * std::f64::consts::LN_2 + ln_gamma(1.0 - b).0 + ln_gamma(1.0 - g).0
        - ln_gamma(2.0 - b - g).0;
    log.exp()
}

/// Moments `q_0 ..= q_m_max`, dispatched on the exponent case.
pub fn moments(e: ExponentPair, m_max: usize) -> Result<MomentSequence> {
    e.validate()?;
    let (b, g) = (e.beta, e.gamma);
    let len = m_max + 1;
    let mut q = vec![0.0; len];
    if b == 0.0 && g == 0.0 {
        q[0] = 2.0;
    } else if b == 0.0 {
        q[0] = 2f64.powf(1.0 - g) / (1.0 - g);
        for m in 0..m_max {
            let mf = m as f64;
            q[m + 1] = -q[m] * (g + mf) / (mf + 2.0 - g);
        }
    } else if g == 0.0 {
        q[0] = 2f64.powf(1.0 - b) / (1.0 - b);
        for m in 0..m_max {
            let mf = m as f64;
            q[m + 1] = q[m] * (mf + b) / (mf + 2.0 - b);
        }
    } else if b == g {
        q[0] = weight_mass(e);
        let mut m = 0;
        while m + 2 < len {
            let mf = m as f64;
            q[m + 2] = q[m] * (mf + 2.0 * g) * (mf + 1.0) / ((mf + 3.0 - 2.0 * g) * (mf + 2.0));
            m += 2;
        }
    } else {
        return moments_general(e, m_max);
    }
    Ok(MomentSequence { exponents: e, values: q })
}

/// The Toeplitz∘Hankel route, valid for every admissible exponent pair.
///
/// `moments` only uses it when `β ≠ γ` and `βγ ≠ 0`; it is public so the
/// special cases can be cross-checked against it.
pub fn moments_general(e: ExponentPair, m_max: usize) -> Result<MomentSequence> {
    e.validate()?;
    let (t, u, nu) = sequence_generators(e, m_max);
    let values = toeplitz_hankel_product(weight_mass(e), &t, &u, &nu, m_max)?;
    Ok(MomentSequence { exponents: e, values })
}

/// `q_m = α Σ_{ℓ=0}^{m} t_{m-ℓ} u_{m+ℓ} ν_ℓ` for `m = 0..=m_max`, computed directly.
pub fn toeplitz_hankel_product(
    alpha: f64,
    t: &[f64],
    u: &[f64],
    nu: &[f64],
    m_max: usize,
) -> Result<Vec<f64>> {
    let check = |what, got: usize, expected| {
        if got == expected {
            Ok(())
        } else {
            Err(Error::LengthMismatch { what, got, expected })
        }
    };
    check("t", t.len(), m_max + 1)?;
    check("u", u.len(), 2 * m_max + 1)?;
    check("nu", nu.len(), m_max + 1)?;
    Ok((0..=m_max)
        .map(|m| {
            let s: f64 = (0..=m).map(|l| t[m - l] * u[m + l] * nu[l]).sum();
            alpha * s
        })
        .collect())
}

/// The sequences `t` (length `M+1`), `u` (length `2M+1`) and `ν` (length `M+1`):
///
/// * `t_r = 1 / (Γ(1+r) Γ(1-γ-r))`
/// * `u_r = Γ(r+1) / Γ(r+2-γ)`
/// * `ν_ℓ = (2ℓ+1-γ) (Γ(ℓ+1-γ)/Γ(ℓ+1))² (β)_ℓ / (2-β-γ)_ℓ`
///
/// each generated by its Γ(z+1) = zΓ(z) ratio recurrence.
pub fn sequence_generators(e: ExponentPair, m_max: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let (b, g) = (e.beta, e.gamma);
    let mut t = Vec::with_capacity(m_max + 1);
    t.push(rgamma(1.0 - g));
    for r in 0..m_max {
        let rf = r as f64;
        t.push(-t[r] * (g + rf) / (rf + 1.0));
    }
    let mut u = Vec::with_capacity(2 * m_max + 1);
    u.push(rgamma(2.0 - g));
    for r in 0..2 * m_max {
        let rf = r as f64;
        u.push(u[r] * (rf + 1.0) / (rf + 2.0 - g));
    }
    let mut nu = Vec::with_capacity(m_max + 1);
    let lg = ln_gamma(1.0 - g).0;
    nu.push((1.0 - g) * (2.0 * lg).exp());
    for l in 0..m_max {
        let lf = l as f64;
        let ratio = (lf + 1.0 - g) / (lf + 1.0);
        nu.push(
            nu[l] * (2.0 * lf + 3.0 - g) / (2.0 * lf + 1.0 - g) * ratio * ratio * (b + lf)
                / (2.0 - b - g + lf),
        );
    }
    (t, u, nu)
}

/// Gauss-Jacobi evaluation of `⟨P_m, 1⟩_(β,γ)`, exact up to rounding.
pub fn moment_oracle(e: ExponentPair, m: usize) -> f64 {
    let nodes = m / 2 + 2;
    GaussJacobi::new(nodes, -e.beta, -e.gamma).integrate(|x| legendre_p(m, x))
}

/// Legendre polynomial `P_m(x)` by upward recurrence.
pub fn legendre_p(m: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if m == 0 {
        return p0;
    }
    for k in 1..m {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}
