//! Dense solver for the pencil `(A + Q) ζ = λ B ζ`.
//!
//! The default route Cholesky-factors the shifted stiffness `K + sB` and
//! diagonalizes `L⁻¹ B L⁻ᵀ`, whose largest eigenvalues `1/(λ+s)` are the
//! wanted ones. Reducing with the Cholesky factor of `B` instead (kept as
//! [`Method::MassCholesky`]) spreads rounding errors of size `ε·λ_max ~ ε N⁴`
//! over every eigenvalue, which is visible already at a few hundred modes.

use faer::linalg::triangular_solve::{solve_lower_triangular_in_place, solve_upper_triangular_in_place};
use faer::{Mat, MatRef, Par, Side};
use serde::{Deserialize, Serialize};

use crate::assembly::{GalerkinSystem, SplitBlock, SplitSystem};
use crate::basis::{Basis, EndpointFlags};
use crate::error::{Error, Result};

/// Acceptance gate on the relative residual of every returned pair.
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    /// 1-based position in the spectrum.
    pub index: usize,
    pub lambda: f64,
    pub zeta: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    ShiftInvert,
    MassCholesky,
}

fn lower_cholesky(m: &Mat<f64>) -> Option<Mat<f64>> {
    m.llt(Side::Lower).ok().map(|f| f.L().to_owned())
}

fn symmetrize(m: &mut Mat<f64>) {
    let n = m.nrows();
    for j in 0..n {
        for i in (j + 1)..n {
            let s = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = s;
            m[(j, i)] = s;
        }
    }
}

/// `L⁻¹ X L⁻ᵀ` for symmetric `X`.
fn congruence_inverse(l: MatRef<'_, f64>, x: &Mat<f64>) -> Mat<f64> {
    let mut y = x.clone();
    solve_lower_triangular_in_place(l, y.as_mut(), Par::Seq);
    let mut z = y.transpose().to_owned();
    solve_lower_triangular_in_place(l, z.as_mut(), Par::Seq);
    symmetrize(&mut z);
    z
}

fn eigen_sym(m: &Mat<f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let e = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let s = e.S();
    let vals = (0..m.nrows()).map(|i| s[i]).collect();
    Ok((vals, e.U().to_owned()))
}

fn quad_form(m: &Mat<f64>, x: &[f64]) -> f64 {
    let n = x.len();
    let mut acc = 0.0;
    for j in 0..n {
        let mut col = 0.0;
        for i in 0..n {
            col += m[(i, j)] * x[i];
        }
        acc += col * x[j];
    }
    acc
}

fn mat_vec(m: &Mat<f64>, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut y = vec![0.0; m.nrows()];
    for j in 0..n {
        let xj = x[j];
        if xj == 0.0 {
            continue;
        }
        for (i, yi) in y.iter_mut().enumerate() {
            *yi += m[(i, j)] * xj;
        }
    }
    y
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Smallest `count` eigenpairs of the dense pencil `(k, b)`, unnormalized.
fn dense_pencil(k: &Mat<f64>, b: &Mat<f64>, count: usize, method: Method) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = k.nrows();
    let count = count.min(n);
    if count == 0 {
        return Ok(Vec::new());
    }
    let vectors: Vec<Vec<f64>> = match method {
        Method::MassCholesky => {
            let l = lower_cholesky(b).ok_or(Error::NotPositiveDefinite)?;
            let c = congruence_inverse(l.as_ref(), k);
            let (_, u) = eigen_sym(&c)?;
            let mut w = u.get(.., 0..count).to_owned();
            solve_upper_triangular_in_place(l.transpose(), w.as_mut(), Par::Seq);
            (0..count).map(|j| (0..n).map(|i| w[(i, j)]).collect()).collect()
        }
        Method::ShiftInvert => {
            let scale = (0..n).map(|i| k[(i, i)].abs()).fold(0.0, f64::max)
                / (0..n).map(|i| b[(i, i)]).fold(f64::INFINITY, f64::min).max(f64::MIN_POSITIVE);
            let mut shift = 1.0;
            let l = loop {
                let mut ks = k.clone();
                for j in 0..n {
                    for i in 0..n {
                        ks[(i, j)] += shift * b[(i, j)];
                    }
                }
                if let Some(l) = lower_cholesky(&ks) {
                    break l;
                }
                shift *= 10.0;
                if shift > 1e6 * scale.max(1.0) {
                    return Err(Error::NotPositiveDefinite);
                }
            };
            let m = congruence_inverse(l.as_ref(), b);
            let (_, u) = eigen_sym(&m)?;
            // eigenvalues come back ascending; the wanted ones are at the end
            let mut w = Mat::<f64>::from_fn(n, count, |i, j| u[(i, n - 1 - j)]);
            solve_upper_triangular_in_place(l.transpose(), w.as_mut(), Par::Seq);
            (0..count).map(|j| (0..n).map(|i| w[(i, j)]).collect()).collect()
        }
    };
    let mut pairs: Vec<(f64, Vec<f64>)> = vectors
        .into_iter()
        .map(|z| {
            let lam = quad_form(k, &z) / quad_form(b, &z);
            (lam, z)
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Ok(pairs)
}

/// `‖K ζ − λ B ζ‖ / max(‖K ζ‖, max(1,|λ|)‖B ζ‖)`; the second term keeps the
/// measure meaningful when `λ ≈ 0` (Neumann-type ground states).
pub fn relative_residual(sys: &GalerkinSystem, lambda: f64, zeta: &[f64]) -> f64 {
    let kz = mat_vec(&sys.stiffness(), zeta);
    let bz = sys.b.mul_vec(zeta);
    let r: Vec<f64> = kz.iter().zip(&bz).map(|(a, b)| a - lambda * b).collect();
    let denom = norm2(&kz).max(lambda.abs().max(1.0) * norm2(&bz));
    norm2(&r) / denom
}

fn block_pairs(block: &SplitBlock, count: usize, method: Method) -> Result<Vec<(f64, Vec<f64>)>> {
    let mut k = block.q.clone();
    for (i, &a) in block.a.iter().enumerate() {
        k[(i, i)] += a;
    }
    dense_pencil(&k, &block.b, count, method)
}

/// The `k_max` algebraically smallest eigenpairs, normalized and gated on
/// the residual.
pub fn solve_pencil(sys: &GalerkinSystem, k_max: usize) -> Result<Vec<EigenPair>> {
    solve_pencil_with(sys, k_max, Method::default())
}

pub fn solve_pencil_with(sys: &GalerkinSystem, k_max: usize, method: Method) -> Result<Vec<EigenPair>> {
    let n = sys.n;
    if k_max > n {
        return Err(Error::TooManyEigenpairs {
            requested: k_max,
            size: n,
        });
    }
    let raw = match &sys.split {
        Some(split) => {
            let mut all: Vec<(f64, Vec<f64>)> = Vec::with_capacity(2 * k_max);
            for block in [&split.even, &split.odd] {
                for (lam, v) in block_pairs(block, k_max, method)? {
                    all.push((lam, SplitSystem::scatter(block, &v, n)));
                }
            }
            all.sort_by(|p, q| p.0.total_cmp(&q.0));
            all.truncate(k_max);
            all
        }
        None => dense_pencil(&sys.stiffness(), &sys.b.to_dense(), k_max, method)?,
    };
    let flags = sys.basis.flags();
    let mut out = Vec::with_capacity(raw.len());
    for (i, (lambda, zeta)) in raw.into_iter().enumerate() {
        let residual = relative_residual(sys, lambda, &zeta);
        let pair = EigenPair {
            index: i + 1,
            lambda,
            zeta,
            residual,
        };
        let pair = normalize(pair, sys, flags)?;
        if !(pair.residual <= RESIDUAL_TOL) {
            return Err(Error::Residual {
                k: pair.index,
                residual: pair.residual,
            });
        }
        out.push(pair);
    }
    Ok(out)
}

/// The quantity whose sign is fixed: `z(−1)` when the eigenfunction does
/// not vanish at −1, `z′(−1)` otherwise. Positive factors are irrelevant.
fn left_sign_value(basis: &Basis, zeta: &[f64], flags: EndpointFlags) -> f64 {
    let ev = basis.expansion_endpoint_values(zeta);
    if flags.kappa_minus == 0 {
        ev.left
    } else {
        ev.d_left
    }
}

/// Scales to `ζᵀBζ = 1` and fixes the sign so that `ẑ(−1) > 0`.
pub fn normalize(mut pair: EigenPair, sys: &GalerkinSystem, flags: EndpointFlags) -> Result<EigenPair> {
    let bnorm = crate::assembly::b_inner(&sys.b, &pair.zeta, &pair.zeta).sqrt();
    if !(bnorm > 0.0) {
        return Err(Error::InvalidArgument("zero eigenvector".into()));
    }
    pair.zeta.iter_mut().for_each(|x| *x /= bnorm);
    let s = left_sign_value(&sys.basis, &pair.zeta, flags);
    let scale = pair.zeta.iter().map(|x| x.abs()).sum::<f64>();
    if s.abs() <= 1e-12 * scale.max(1.0) {
        return Err(Error::VanishingEndpoint { k: pair.index });
    }
    if s < 0.0 {
        pair.zeta.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(pair)
}
