//! TOML problem descriptions.
//!
//! ```toml
//! name = "q1"
//!
//! [bc]
//! alpha_L = 0.0
//! beta_L = 1.0
//! alpha_R = 1.0
//! beta_R = 0.0
//!
//! [[terms]]
//! builtin = "exp_decay"
//! beta = 0.75
//! gamma = 0.25
//!
//! [[terms]]
//! expr = { kind = "cosh", scale = 5.0, freq = 1.0, phase = 0.0 }
//! beta = 0.4
//! gamma = 0.2
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::basis::BoundaryConditions;
use crate::error::{Error, Result};
use crate::moments::ExponentPair;
use crate::potential::{Expr, PotentialTerm, Problem, Source};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<Expr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub r: u32,
    #[serde(default)]
    pub l: u32,
}

impl TermSpec {
    pub fn builtin(name: &str, beta: f64, gamma: f64, r: u32, l: u32) -> Self {
        Self {
            expr: None,
            builtin: Some(name.to_string()),
            beta,
            gamma,
            r,
            l,
        }
    }

    pub fn expr(expr: Expr, beta: f64, gamma: f64, r: u32, l: u32) -> Self {
        Self {
            expr: Some(expr),
            builtin: None,
            beta,
            gamma,
            r,
            l,
        }
    }

    pub fn source(&self) -> Result<Source> {
        match (&self.expr, &self.builtin) {
            (Some(e), None) => Ok(Source::Expr(e.clone())),
            (None, Some(b)) => Ok(Source::Builtin(b.clone())),
            _ => Err(Error::Config("each term needs exactly one of `expr` or `builtin`".into())),
        }
    }

    pub fn build(&self) -> Result<PotentialTerm> {
        PotentialTerm::new(self.source()?, ExponentPair::new(self.beta, self.gamma)?, self.r, self.l)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
    /// The potential is even, so symmetric boundary conditions allow the
    /// even/odd split.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub even: bool,
    pub bc: BoundaryConditions,
    #[serde(default)]
    pub terms: Vec<TermSpec>,
}

impl ProblemSpec {
    pub fn problem(&self) -> Result<Problem> {
        let terms = self.terms.iter().map(TermSpec::build).collect::<Result<Vec<_>>>()?;
        Problem::new(terms, self.bc)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        spec.bc.validate()?;
        for t in &spec.terms {
            t.source()?;
            ExponentPair::new(t.beta, t.gamma)?;
        }
        Ok(spec)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    /// Same potential under different boundary conditions.
    pub fn with_bc(&self, bc: BoundaryConditions, suffix: &str) -> Self {
        Self {
            name: format!("{}-{}", self.name, suffix),
            bc,
            ..self.clone()
        }
    }
}
