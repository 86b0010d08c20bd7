//! Boundary-adapted Legendre basis.
//!
//! Every basis function is a three-term combination
//! `R_n = ξ_n P_n + η_n P_{n+1} + θ_n P_{n+2}` whose coefficients are the
//! normalized null vector of the two boundary functionals applied to
//! `P_n, P_{n+1}, P_{n+2}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Robin coefficients of `α_L y(-1) + β_L y'(-1) = 0` and `α_R y(1) + β_R y'(1) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryConditions {
    #[serde(rename = "alpha_L")]
    pub alpha_l: f64,
    #[serde(rename = "beta_L")]
    pub beta_l: f64,
    #[serde(rename = "alpha_R")]
    pub alpha_r: f64,
    #[serde(rename = "beta_R")]
    pub beta_r: f64,
}

impl BoundaryConditions {
    pub fn new(alpha_l: f64, beta_l: f64, alpha_r: f64, beta_r: f64) -> Result<Self> {
        let bc = Self {
            alpha_l,
            beta_l,
            alpha_r,
            beta_r,
        };
        bc.validate()?;
        Ok(bc)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.alpha_l, self.beta_l, self.alpha_r, self.beta_r];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidBoundary("non-finite coefficient".into()));
        }
        if self.alpha_l == 0.0 && self.beta_l == 0.0 {
            return Err(Error::InvalidBoundary("left functional is identically zero".into()));
        }
        if self.alpha_r == 0.0 && self.beta_r == 0.0 {
            return Err(Error::InvalidBoundary("right functional is identically zero".into()));
        }
        Ok(())
    }

    /// `y(±1) = 0`
    pub const fn dirichlet() -> Self {
        Self { alpha_l: 1.0, beta_l: 0.0, alpha_r: 1.0, beta_r: 0.0 }
    }

    /// `y'(±1) = 0`
    pub const fn neumann() -> Self {
        Self { alpha_l: 0.0, beta_l: 1.0, alpha_r: 0.0, beta_r: 1.0 }
    }

    /// `y(-1) = y'(1) = 0`
    pub const fn dirichlet_neumann() -> Self {
        Self { alpha_l: 1.0, beta_l: 0.0, alpha_r: 0.0, beta_r: 1.0 }
    }

    /// `y'(-1) = y(1) = 0`
    pub const fn neumann_dirichlet() -> Self {
        Self { alpha_l: 0.0, beta_l: 1.0, alpha_r: 1.0, beta_r: 0.0 }
    }

    /// `y'(±1) = y(±1)`
    pub const fn robin() -> Self {
        Self { alpha_l: -1.0, beta_l: 1.0, alpha_r: -1.0, beta_r: 1.0 }
    }

    /// `y(-1) - y'(-1) = y'(1) = 0`
    pub const fn robin_neumann() -> Self {
        Self { alpha_l: 1.0, beta_l: -1.0, alpha_r: 0.0, beta_r: 1.0 }
    }

    /// Looks up one of the named conditions above.
    pub fn by_name(name: &str) -> Option<Self> {
        Some(match name {
            "dirichlet" | "dd" => Self::dirichlet(),
            "neumann" | "nn" => Self::neumann(),
            "dirichlet-neumann" | "dn" => Self::dirichlet_neumann(),
            "neumann-dirichlet" | "nd" => Self::neumann_dirichlet(),
            "robin" | "rr" => Self::robin(),
            "robin-neumann" | "rn" => Self::robin_neumann(),
            _ => return None,
        })
    }

    /// Exact test of `α_L β_R + α_R β_L == 0`; nearly symmetric input takes
    /// the general path.
    pub fn is_symmetric(&self) -> bool {
        self.alpha_l * self.beta_r + self.alpha_r * self.beta_l == 0.0
    }

    pub fn kappa_flags(&self) -> EndpointFlags {
        kappa_flags(self)
    }
}

/// `R_n = xi P_n + eta P_{n+1} + theta P_{n+2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisCoefficients {
    pub n: usize,
    pub xi: f64,
    pub eta: f64,
    pub theta: f64,
}

/// `R_n(-1)`, `R_n(1)`, `R_n'(-1)`, `R_n'(1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointValues {
    pub left: f64,
    pub right: f64,
    pub d_left: f64,
    pub d_right: f64,
}

/// Marks endpoints where every basis function vanishes (pure Dirichlet).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EndpointFlags {
    pub kappa_minus: u8,
    pub kappa_plus: u8,
}

#[inline]
fn tri(j: usize) -> f64 {
    // P_j'(1) = j(j+1)/2, exact in f64 for any realistic degree
    (j as f64) * (j as f64 + 1.0) / 2.0
}

fn normalize(n: usize, v: [f64; 3]) -> Result<BasisCoefficients> {
    let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::DegenerateBoundary { n });
    }
    let mut w = v.map(|x| x / scale);
    let lead = w.iter().copied().find(|x| *x != 0.0).unwrap_or(1.0);
    if lead < 0.0 {
        w = w.map(|x| -x);
    }
    // avoid -0.0 leaking into comparisons and output
    let w = w.map(|x| if x == 0.0 { 0.0 } else { x });
    Ok(BasisCoefficients {
        n,
        xi: w[0],
        eta: w[1],
        theta: w[2],
    })
}

/// Coefficients of `R_n` for the given boundary conditions.
pub fn basis_coefficients(bc: &BoundaryConditions, n: usize) -> Result<BasisCoefficients> {
    let (a0, a1, a2) = (tri(n), tri(n + 1), tri(n + 2));
    if bc.is_symmetric() {
        // η = 0; the right functional alone fixes (ξ, θ). It cannot vanish
        // identically because a0 != a2 whenever β_R != 0.
        let c0 = bc.alpha_r + bc.beta_r * a0;
        let c2 = bc.alpha_r + bc.beta_r * a2;
        return normalize(n, [c2, 0.0, -c0]);
    }
    // Left row scaled by (-1)^n, using P_j(-1) = (-1)^j, P_j'(-1) = (-1)^{j-1} j(j+1)/2.
    let left = [
        bc.alpha_l - bc.beta_l * a0,
        -(bc.alpha_l - bc.beta_l * a1),
        bc.alpha_l - bc.beta_l * a2,
    ];
    let right = [
        bc.alpha_r + bc.beta_r * a0,
        bc.alpha_r + bc.beta_r * a1,
        bc.alpha_r + bc.beta_r * a2,
    ];
    let cross = [
        left[1] * right[2] - left[2] * right[1],
        left[2] * right[0] - left[0] * right[2],
        left[0] * right[1] - left[1] * right[0],
    ];
    normalize(n, cross)
}

/// Values and first derivatives of `R_n` at both endpoints.
pub fn basis_endpoint_values(c: &BasisCoefficients) -> EndpointValues {
    let n = c.n;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let (a0, a1, a2) = (tri(n), tri(n + 1), tri(n + 2));
    EndpointValues {
        left: sign * (c.xi - c.eta + c.theta),
        right: c.xi + c.eta + c.theta,
        d_left: -sign * (c.xi * a0 - c.eta * a1 + c.theta * a2),
        d_right: c.xi * a0 + c.eta * a1 + c.theta * a2,
    }
}

/// κ = 1 exactly at the pure-Dirichlet endpoints.
pub fn kappa_flags(bc: &BoundaryConditions) -> EndpointFlags {
    EndpointFlags {
        kappa_minus: u8::from(bc.beta_l == 0.0),
        kappa_plus: u8::from(bc.beta_r == 0.0),
    }
}

/// The first `len` basis functions for one set of boundary conditions.
///
/// Immutable after construction, so it can be shared across threads.
#[derive(Debug, Clone)]
pub struct Basis {
    bc: BoundaryConditions,
    coeffs: Vec<BasisCoefficients>,
}

impl Basis {
    pub fn new(bc: BoundaryConditions, len: usize) -> Result<Self> {
        bc.validate()?;
        let coeffs = (0..len)
            .map(|n| basis_coefficients(&bc, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { bc, coeffs })
    }

    pub fn bc(&self) -> &BoundaryConditions {
        &self.bc
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficients(&self) -> &[BasisCoefficients] {
        &self.coeffs
    }

    pub fn get(&self, n: usize) -> &BasisCoefficients {
        &self.coeffs[n]
    }

    pub fn flags(&self) -> EndpointFlags {
        kappa_flags(&self.bc)
    }

    /// Endpoint values of `z(x) = Σ ζ_n R_n(x)`.
    pub fn expansion_endpoint_values(&self, zeta: &[f64]) -> EndpointValues {
        let mut out = EndpointValues {
            left: 0.0,
            right: 0.0,
            d_left: 0.0,
            d_right: 0.0,
        };
        for (c, &z) in self.coeffs.iter().zip(zeta) {
            let v = basis_endpoint_values(c);
            out.left += z * v.left;
            out.right += z * v.right;
            out.d_left += z * v.d_left;
            out.d_right += z * v.d_right;
        }
        out
    }
}

/// Evaluates `Σ c_j P_j(x)` by the three-term recurrence.
pub fn legendre_series(c: &[f64], x: f64) -> f64 {
    let mut sum = 0.0;
    let (mut p_prev, mut p) = (0.0, 1.0);
    for (j, &cj) in c.iter().enumerate() {
        sum += cj * p;
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0) * x * p - jf * p_prev) / (jf + 1.0);
        p_prev = p;
        p = next;
    }
    sum
}

/// Evaluates the expansion `Σ ζ_n R_n(x)` at an arbitrary point.
pub fn evaluate_expansion(basis: &Basis, zeta: &[f64], x: f64) -> f64 {
    let mut legendre = vec![0.0; zeta.len() + 2];
    for (c, &z) in basis.coefficients().iter().zip(zeta) {
        legendre[c.n] += z * c.xi;
        legendre[c.n + 1] += z * c.eta;
        legendre[c.n + 2] += z * c.theta;
    }
    legendre_series(&legendre, x)
}
