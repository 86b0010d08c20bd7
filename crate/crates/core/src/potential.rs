//! Potentials of the form `q(x) = Σ_i g_i(x) / ((1-x)^{β_i} (1+x)^{γ_i})`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::basis::BoundaryConditions;
use crate::chebyshev::{chebyshev_fit, ChebyshevApproximant};
use crate::error::{Error, Result};
use crate::moments::ExponentPair;

/// Relative threshold for calling an endpoint value of `g` a zero.
pub const ZERO_THRESHOLD: f64 = 1e-10;

/// Named closed forms for the smooth numerator `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expr {
    /// `value`
    Const { value: f64 },
    /// `Σ_k coeffs[k] x^k`
    Poly { coeffs: Vec<f64> },
    /// `scale · exp(rate·x + shift)`
    Exp { scale: f64, rate: f64, shift: f64 },
    /// `scale · cos(freq·x + phase)`
    Cos { scale: f64, freq: f64, phase: f64 },
    /// `scale · sin(freq·x + phase)`
    Sin { scale: f64, freq: f64, phase: f64 },
    /// `scale · cosh(freq·x + phase)`
    Cosh { scale: f64, freq: f64, phase: f64 },
    /// `scale · ln(x + offset)`, requires `offset > 1`
    Log { scale: f64, offset: f64 },
    /// `scale / (a - x²)`, requires `a > 1`
    InvQuadratic { scale: f64, a: f64 },
}

impl Expr {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Expr::Const { value } => value,
            Expr::Poly { ref coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c),
            Expr::Exp { scale, rate, shift } => scale * (rate * x + shift).exp(),
            Expr::Cos { scale, freq, phase } => scale * (freq * x + phase).cos(),
            Expr::Sin { scale, freq, phase } => scale * (freq * x + phase).sin(),
            Expr::Cosh { scale, freq, phase } => scale * (freq * x + phase).cosh(),
            Expr::Log { scale, offset } => scale * (x + offset).ln(),
            Expr::InvQuadratic { scale, a } => scale / (a - x * x),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            Expr::Const { .. } => 0.0,
            Expr::Poly { ref coeffs } => coeffs
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, c)| acc * x + k as f64 * c),
            Expr::Exp { scale, rate, shift } => scale * rate * (rate * x + shift).exp(),
            Expr::Cos { scale, freq, phase } => -scale * freq * (freq * x + phase).sin(),
            Expr::Sin { scale, freq, phase } => scale * freq * (freq * x + phase).cos(),
            Expr::Cosh { scale, freq, phase } => scale * freq * (freq * x + phase).sinh(),
            Expr::Log { scale, offset } => scale / (x + offset),
            Expr::InvQuadratic { scale, a } => 2.0 * scale * x / (a - x * x).powi(2),
        }
    }

    fn check_domain(&self) -> Result<()> {
        match *self {
            Expr::Log { offset, .. } if !(offset > 1.0) => {
                Err(Error::InvalidTerm(format!("log offset {offset} must exceed 1")))
            }
            Expr::InvQuadratic { a, .. } if !(a > 1.0) => {
                Err(Error::InvalidTerm(format!("pole parameter {a} must exceed 1")))
            }
            _ => Ok(()),
        }
    }
}

/// Where the numerator comes from: an inline closed form or a registered name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Expr(Expr),
    Builtin(String),
}

pub type BuiltinFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

fn registry() -> &'static RwLock<HashMap<String, BuiltinFn>> {
    static REGISTRY: OnceLock<RwLock<HashMap<String, BuiltinFn>>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let mut m: HashMap<String, BuiltinFn> = HashMap::new();
        m.insert("one".into(), Arc::new(|_| 1.0));
        m.insert("exp_decay".into(), Arc::new(|x: f64| 10.0 * (1.0 - x).exp()));
        m.insert("cos4".into(), Arc::new(|x: f64| 10.0 * (4.0 * (1.0 + x)).cos()));
        m.insert("sin4".into(), Arc::new(|x: f64| 5.0 * (4.0 * (1.0 + x)).sin()));
        m.insert("inv_two_minus_x2".into(), Arc::new(|x: f64| 10.0 / (2.0 - x * x)));
        RwLock::new(m)
    })
}

/// Makes a numerator available to config files under `name`.
pub fn register_builtin(name: &str, f: BuiltinFn) {
    registry()
        .write()
        .expect("builtin registry poisoned")
        .insert(name.to_string(), f);
}

pub fn lookup_builtin(name: &str) -> Result<BuiltinFn> {
    registry()
        .read()
        .expect("builtin registry poisoned")
        .get(name)
        .cloned()
        .ok_or_else(|| Error::UnknownBuiltin(name.to_string()))
}

/// `g(±1)` and `g'(±1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointSamples {
    pub g_left: f64,
    pub g_right: f64,
    pub dg_left: f64,
    pub dg_right: f64,
}

/// One summand `g(x) / ((1-x)^β (1+x)^γ)`.
///
/// `r` and `l` are the multiplicities of `x = 1` and `x = -1` as zeros of `g`.
#[derive(Clone)]
pub struct PotentialTerm {
    pub source: Source,
    pub exponents: ExponentPair,
    pub r: u32,
    pub l: u32,
    fit: ChebyshevApproximant,
    g_at: EndpointSamples,
    norm: f64,
    func: BuiltinFn,
}

impl fmt::Debug for PotentialTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialTerm")
            .field("source", &self.source)
            .field("exponents", &self.exponents)
            .field("r", &self.r)
            .field("l", &self.l)
            .field("degree", &self.fit.degree())
            .finish()
    }
}

impl PotentialTerm {
    pub fn new(source: Source, exponents: ExponentPair, r: u32, l: u32) -> Result<Self> {
        exponents.validate()?;
        let func: BuiltinFn = match &source {
            Source::Expr(e) => {
                e.check_domain()?;
                let e = e.clone();
                Arc::new(move |x| e.eval(x))
            }
            Source::Builtin(name) => lookup_builtin(name)?,
        };
        let fit = chebyshev_fit(&*func)?;
        let g_at = match &source {
            Source::Expr(e) => EndpointSamples {
                g_left: e.eval(-1.0),
                g_right: e.eval(1.0),
                dg_left: e.derivative(-1.0),
                dg_right: e.derivative(1.0),
            },
            Source::Builtin(_) => {
                let (dl, dr) = fit.endpoint_derivatives();
                EndpointSamples {
                    g_left: func(-1.0),
                    g_right: func(1.0),
                    dg_left: dl,
                    dg_right: dr,
                }
            }
        };
        let norm = (0..=256)
            .map(|j| func((std::f64::consts::PI * j as f64 / 256.0).cos()).abs())
            .fold(0.0, f64::max);
        let term = Self {
            source,
            exponents,
            r,
            l,
            fit,
            g_at,
            norm,
            func,
        };
        term.check_multiplicities()?;
        Ok(term)
    }

    /// Shorthand for an inline closed form.
    pub fn expr(expr: Expr, beta: f64, gamma: f64, r: u32, l: u32) -> Result<Self> {
        Self::new(Source::Expr(expr), ExponentPair::new(beta, gamma)?, r, l)
    }

    fn check_multiplicities(&self) -> Result<()> {
        let thr = ZERO_THRESHOLD * self.norm.max(f64::MIN_POSITIVE);
        let check = |declared: u32, value: f64, side: &str| {
            let zero = value.abs() <= thr;
            match (declared, zero) {
                (0, true) => Err(Error::InvalidTerm(format!(
                    "g vanishes at x = {side} but multiplicity 0 was declared"
                ))),
                (d, false) if d > 0 => Err(Error::InvalidTerm(format!(
                    "g({side}) = {value:e} is not zero but multiplicity {d} was declared"
                ))),
                _ => Ok(()),
            }
        };
        check(self.r, self.g_at.g_right, "1")?;
        check(self.l, self.g_at.g_left, "-1")
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.func)(x)
    }

    /// Value of the full summand, singular factor included.
    pub fn eval_weighted(&self, x: f64) -> f64 {
        self.eval(x) / ((1.0 - x).powf(self.exponents.beta) * (1.0 + x).powf(self.exponents.gamma))
    }

    pub fn fit(&self) -> &ChebyshevApproximant {
        &self.fit
    }

    pub fn endpoint_samples(&self) -> EndpointSamples {
        self.g_at
    }

    /// Max of `|g|` over Chebyshev points.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Bounded at `x = -1` when `-γ` is a non-negative integer.
    pub fn singular_left(&self) -> bool {
        !is_nonneg_integer(-self.exponents.gamma)
    }

    pub fn singular_right(&self) -> bool {
        !is_nonneg_integer(-self.exponents.beta)
    }
}

pub(crate) fn is_nonneg_integer(x: f64) -> bool {
    x >= 0.0 && x == x.floor()
}

/// Counts the leading zeros of `g` at an endpoint from its value and slope
/// (result is 0, 1 or 2, where 2 means "at least 2").
pub fn detect_multiplicity(value: f64, slope: f64, norm: f64) -> u32 {
    let thr = ZERO_THRESHOLD * norm;
    if value.abs() > thr {
        0
    } else if slope.abs() > thr {
        1
    } else {
        2
    }
}

/// Potential plus boundary conditions: everything needed to assemble.
#[derive(Debug, Clone)]
pub struct Problem {
    pub terms: Vec<PotentialTerm>,
    pub bc: BoundaryConditions,
}

impl Problem {
    pub fn new(terms: Vec<PotentialTerm>, bc: BoundaryConditions) -> Result<Self> {
        bc.validate()?;
        Ok(Self { terms, bc })
    }

    pub fn potential(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.eval_weighted(x)).sum()
    }

    /// True when some term blows up at an endpoint.
    pub fn is_singular(&self) -> bool {
        self.terms.iter().any(|t| t.singular_left() || t.singular_right())
    }
}
