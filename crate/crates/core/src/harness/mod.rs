//! Convergence experiments: sweeps over `N`, empirical orders, Richardson
//! extrapolation and self-referenced relative errors.

pub mod config;
pub mod expected;
pub mod output;
pub mod suite;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assembly::assemble;
use crate::correction::{corrected_eigenvalue, predicted_order, CorrectionReport};
use crate::eigen::{solve_pencil, EigenPair};
use crate::error::{Error, Result};
use crate::potential::Problem;

pub use config::{ProblemSpec, TermSpec};
pub use suite::{builtin_suite, TABLE_BCS};

/// Default self-reference size.
pub const DEFAULT_NT: usize = 1601;

/// `log₂(|λ_N − λ_{2N+1}| / |λ_{2N+1} − λ_{4N+3}|)`, or `None` once the
/// differences have reached round-off.
pub fn empirical_order(l_n: f64, l_2n1: f64, l_4n3: f64) -> Option<f64> {
    let num = (l_n - l_2n1).abs();
    let den = (l_2n1 - l_4n3).abs();
    if den == 0.0 || num == 0.0 {
        return None;
    }
    Some((num / den).log2())
}

/// `ρ = (2^p λ_N − λ_{(N−1)/2}) / (2^p − 1)`
pub fn richardson(lam_n: f64, lam_half: f64, p: f64) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("Richardson order must be positive, got {p}")));
    }
    let w = 2f64.powf(p);
    Ok((w * lam_n - lam_half) / (w - 1.0))
}

/// Least-squares slope `p` of `err ≈ C (N+1)^{-p}`.
pub fn fit_order(points: &[(usize, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| ((n + 1) as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, e)| e.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(-sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Use the even/odd split when the problem allows it.
    pub split: bool,
    pub correction: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            split: true,
            correction: true,
        }
    }
}

/// Eigenpairs at one `N`, with corrections when the potential is singular.
#[derive(Debug, Clone)]
pub struct Solution {
    pub n: usize,
    pub pairs: Vec<EigenPair>,
    pub corrections: Option<Vec<CorrectionReport>>,
}

impl Solution {
    pub fn lambda(&self, k: usize) -> Option<f64> {
        self.pairs.get(k.checked_sub(1)?).map(|p| p.lambda)
    }

    pub fn mu(&self, k: usize) -> Option<f64> {
        self.corrections.as_ref()?.get(k.checked_sub(1)?).map(|c| c.mu)
    }
}

pub fn solve(problem: &Problem, even: bool, n: usize, k_max: usize, opts: SolveOptions) -> Result<Solution> {
    let mut sys = assemble(problem, n)?;
    if opts.split && even && problem.bc.is_symmetric() {
        sys = sys.with_split(true)?;
    }
    let pairs = solve_pencil(&sys, k_max.min(n))?;
    let corrections = if opts.correction && problem.is_singular() {
        Some(
            pairs
                .iter()
                .map(|p| corrected_eigenvalue(p, &sys, &problem.terms))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    Ok(Solution { n, pairs, corrections })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub k: Vec<usize>,
    pub grid: Vec<usize>,
    /// Size of the self-reference solve; `None` skips relative errors.
    pub n_t: Option<usize>,
    pub solve: SolveOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub k: usize,
    pub n: usize,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub rho: Option<f64>,
    /// `|λ_N − λ_{2N+1}|`
    pub delta_lambda: Option<f64>,
    pub rel_err_lambda: Option<f64>,
    pub rel_err_mu: Option<f64>,
    pub rel_err_rho: Option<f64>,
    pub order_emp: Option<f64>,
    pub order_pred: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub k: usize,
    pub lambda_bar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderFit {
    pub k: usize,
    pub p_mu: Option<f64>,
    pub p_lambda: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub problem: String,
    pub k: Vec<usize>,
    pub grid: Vec<usize>,
    pub n_t: Option<usize>,
    pub order_pred: f64,
    pub reference: Vec<Reference>,
    pub points: Vec<SweepPoint>,
    pub fits: Vec<OrderFit>,
}

impl SweepResult {
    pub fn point(&self, k: usize, n: usize) -> Option<&SweepPoint> {
        self.points.iter().find(|p| p.k == k && p.n == n)
    }

    pub fn reference(&self, k: usize) -> Option<f64> {
        self.reference.iter().find(|r| r.k == k).map(|r| r.lambda_bar)
    }
}

/// Sizes that have to be solved: the grid, `2N+1` for `δλ`, and `(N−1)/2`
/// for Richardson. The empirical order at `N` is reported when `4N+3` also
/// happens to be in this set, as it is for grids doubling like `2N+1`.
fn required_sizes(grid: &[usize]) -> BTreeSet<usize> {
    let mut s = BTreeSet::new();
    for &n in grid {
        s.insert(n);
        s.insert(2 * n + 1);
        if n % 2 == 1 && (n - 1) / 2 >= 4 {
            s.insert((n - 1) / 2);
        }
    }
    s
}

/// Relative errors below this multiple of `ε|λ̄|` are treated as noise in
/// the order fits.
pub const NOISE_FLOOR: f64 = 1e3 * f64::EPSILON;

pub fn run_sweep(spec: &ProblemSpec, opts: &SweepOptions) -> Result<SweepResult> {
    if opts.grid.is_empty() || opts.k.is_empty() {
        return Err(Error::InvalidArgument("empty N grid or k set".into()));
    }
    let mut grid = opts.grid.clone();
    grid.sort_unstable();
    grid.dedup();
    if grid[0] < 4 {
        return Err(Error::SizeTooSmall(grid[0]));
    }
    if opts.k.contains(&0) {
        return Err(Error::InvalidArgument("eigenvalue indices are 1-based".into()));
    }
    let n_max = *grid.last().unwrap();
    if let Some(nt) = opts.n_t {
        if nt < 2 * n_max + 1 {
            return Err(Error::InvalidArgument(format!(
                "reference size {nt} must be at least 2·max(N)+1 = {}",
                2 * n_max + 1
            )));
        }
    }
    let problem = spec.problem()?;
    let k_max = *opts.k.iter().max().unwrap();
    let order_pred = predicted_order(&problem.terms, problem.bc.kappa_flags()).p;

    let mut sizes = required_sizes(&grid);
    if let Some(nt) = opts.n_t {
        sizes.insert(nt);
    }
    let sizes: Vec<usize> = sizes.into_iter().collect();
    let solved: BTreeMap<usize, std::result::Result<Solution, String>> = sizes
        .par_iter()
        .map(|&n| (n, solve(&problem, spec.even, n, k_max, opts.solve).map_err(|e| e.to_string())))
        .collect();
    let get = |n: usize| solved.get(&n).and_then(|r| r.as_ref().ok());

    let mut reference = Vec::new();
    if let Some(nt) = opts.n_t {
        match &solved[&nt] {
            Ok(sol) => {
                for &k in &opts.k {
                    if let Some(v) = sol.mu(k).or_else(|| sol.lambda(k)) {
                        reference.push(Reference { k, lambda_bar: v });
                    }
                }
            }
            Err(e) => return Err(Error::Eigensolver(format!("reference solve at N = {nt} failed: {e}"))),
        }
    }
    let lambda_bar = |k: usize| reference.iter().find(|r| r.k == k).map(|r| r.lambda_bar);
    let rel = |v: Option<f64>, k: usize| match (v, lambda_bar(k)) {
        (Some(v), Some(b)) => Some((v - b).abs() / b.abs()),
        _ => None,
    };

    let mut points = Vec::new();
    let mut ks = opts.k.clone();
    ks.sort_unstable();
    ks.dedup();
    for &k in &ks {
        for &n in &grid {
            let sol = &solved[&n];
            let error = sol.as_ref().err().cloned();
            let lam_at = |m: usize| get(m).and_then(|s| s.lambda(k));
            let lambda = lam_at(n);
            let mu = get(n).and_then(|s| s.mu(k));
            let rho = if n % 2 == 1 && order_pred.is_finite() {
                match (lambda, lam_at((n - 1) / 2)) {
                    (Some(a), Some(b)) => richardson(a, b, order_pred).ok(),
                    _ => None,
                }
            } else {
                None
            };
            let delta_lambda = match (lambda, lam_at(2 * n + 1)) {
                (Some(a), Some(b)) => Some((a - b).abs()),
                _ => None,
            };
            let order_emp = match (lambda, lam_at(2 * n + 1), lam_at(4 * n + 3)) {
                (Some(a), Some(b), Some(c)) => empirical_order(a, b, c),
                _ => None,
            };
            points.push(SweepPoint {
                k,
                n,
                lambda,
                mu,
                rho,
                delta_lambda,
                rel_err_lambda: rel(lambda, k),
                rel_err_mu: rel(mu, k),
                rel_err_rho: rel(rho, k),
                order_emp,
                order_pred,
                error,
            });
        }
    }

    let fits = ks
        .iter()
        .map(|&k| {
            let select = |f: fn(&SweepPoint) -> Option<f64>| -> Vec<(usize, f64)> {
                points
                    .iter()
                    .filter(|p| p.k == k && p.n >= 4 * k + 1)
                    .filter_map(|p| f(p).map(|e| (p.n, e)))
                    .filter(|&(_, e)| e > NOISE_FLOOR)
                    .collect()
            };
            OrderFit {
                k,
                p_mu: fit_order(&select(|p| p.rel_err_mu)),
                p_lambda: fit_order(&select(|p| p.rel_err_lambda)),
            }
        })
        .collect();

    Ok(SweepResult {
        problem: spec.name.clone(),
        k: ks,
        grid,
        n_t: opts.n_t,
        order_pred,
        reference,
        points,
        fits,
    })
}
