//! Galerkin matrices `A_N` (diagonal), `B_N` (pentadiagonal) and `Q_N` (dense).
//!
//! `B_N = R^T B̂ R` and `Q_N = R^T Q̂ R`, where `R` holds the basis triples
//! and the hatted matrices are Gram matrices in the Legendre basis. `Q̂` is
//! generated column by column from its first column by the three-term
//! Legendre recurrence; the first column itself is `g(H) q^(1)`, with `H`
//! the multiplication-by-x operator in Legendre coefficients and `q^(1)`
//! the singular moment sequence.

use faer::Mat;

use crate::basis::{Basis, BasisCoefficients};
use crate::chebyshev::ChebyshevApproximant;
use crate::error::{Error, Result};
use crate::moments::moments;
use crate::potential::{PotentialTerm, Problem};

/// `h_{m,m-1} = m/(2m+1)`
#[inline]
fn h_lower(m: usize) -> f64 {
    m as f64 / (2 * m + 1) as f64
}

/// `h_{m,m+1} = (m+1)/(2m+1)`
#[inline]
fn h_upper(m: usize) -> f64 {
    (m + 1) as f64 / (2 * m + 1) as f64
}

/// `out = H w` on the finite section whose first row has global index `offset`.
/// Entries outside the slice are treated as zero.
fn apply_h(w: &[f64], offset: usize, out: &mut [f64]) {
    let len = w.len();
    for i in 0..len {
        let m = offset + i;
        let below = if i > 0 { h_lower(m) * w[i - 1] } else { 0.0 };
        let above = if i + 1 < len { h_upper(m) * w[i + 1] } else { 0.0 };
        out[i] = below + above;
    }
}

/// Clenshaw evaluation of `Σ c_k T_k(H) v` on a window starting at `offset`.
fn clenshaw_h(coeffs: &[f64], v: &[f64], offset: usize) -> Vec<f64> {
    let len = v.len();
    let d = coeffs.len() - 1;
    if d == 0 {
        return v.iter().map(|x| coeffs[0] * x).collect();
    }
    let mut b1 = vec![0.0; len];
    let mut b2 = vec![0.0; len];
    let mut hb = vec![0.0; len];
    for k in (1..=d).rev() {
        apply_h(&b1, offset, &mut hb);
        for i in 0..len {
            let b0 = coeffs[k] * v[i] + 2.0 * hb[i] - b2[i];
            b2[i] = b1[i];
            b1[i] = b0;
        }
    }
    apply_h(&b1, offset, &mut hb);
    (0..len).map(|i| coeffs[0] * v[i] + hb[i] - b2[i]).collect()
}

/// First `l` entries of `g(H) v`, where `g` is given in Chebyshev form.
///
/// Each application of the truncated `H` corrupts one more trailing entry,
/// so `v` must have at least `l + degree + 2` entries.
pub fn apply_g_of_h(fit: &ChebyshevApproximant, v: &[f64], l: usize) -> Result<Vec<f64>> {
    let need = l + fit.degree() + 2;
    if v.len() < need {
        return Err(Error::LengthMismatch {
            what: "moment vector",
            got: v.len(),
            expected: need,
        });
    }
    let mut out = clenshaw_h(&fit.coefficients, v, 0);
    out.truncate(l);
    Ok(out)
}

/// `Q̂` of size `(n+2)×(n+2)` from its first column `q0` (length `>= 2n+3`).
pub fn qhat_matrix(q0: &[f64], n: usize) -> Result<Mat<f64>> {
    let size = n + 2;
    let len0 = 2 * n + 3;
    if q0.len() < len0 {
        return Err(Error::LengthMismatch {
            what: "first column",
            got: q0.len(),
            expected: len0,
        });
    }
    let mut qhat = Mat::<f64>::zeros(size, size);
    let mut prev = vec![0.0; len0];
    let mut cur = q0[..len0].to_vec();
    let mut hcur = vec![0.0; len0];
    for (m, &v) in cur.iter().take(size).enumerate() {
        qhat[(m, 0)] = v;
    }
    for j in 0..size - 1 {
        let jf = j as f64;
        let (c1, c2) = ((2.0 * jf + 1.0) / (jf + 1.0), jf / (jf + 1.0));
        apply_h(&cur, 0, &mut hcur[..cur.len()]);
        // the last entry of H·cur is wrong, so the working length shrinks by one
        let next_len = cur.len() - 1;
        let next: Vec<f64> = (0..next_len).map(|m| c1 * hcur[m] - c2 * prev[m]).collect();
        for (m, &v) in next.iter().take(size).enumerate() {
            qhat[(m, j + 1)] = v;
        }
        prev = cur;
        cur = next;
    }
    Ok(qhat)
}

/// `⟨P_m, g P_n⟩` for `m, n < size` with no singular weight: `g(H) B̂` is
/// banded with half-bandwidth `deg g`, so each column is computed exactly on
/// a short window.
fn regular_gram(fit: &ChebyshevApproximant, size: usize) -> Mat<f64> {
    let d = fit.degree();
    let mut out = Mat::<f64>::zeros(size, size);
    for n in 0..size {
        let lo = n.saturating_sub(d + 1);
        let hi = (n + d + 2).min(size + d + 2);
        let mut v = vec![0.0; hi - lo];
        v[n - lo] = 2.0 / (2 * n + 1) as f64;
        let col = clenshaw_h(&fit.coefficients, &v, lo);
        for (i, &x) in col.iter().enumerate() {
            let m = lo + i;
            if m < size {
                out[(m, n)] = x;
            }
        }
    }
    out
}

/// `Q̂` contribution of one potential term, size `(n+2)×(n+2)`.
pub fn term_qhat(term: &PotentialTerm, n: usize) -> Result<Mat<f64>> {
    let fit = term.fit();
    if term.exponents.is_regular() {
        return Ok(regular_gram(fit, n + 2));
    }
    let first = 2 * n + 3;
    let lt = first + fit.degree() + 2;
    let mom = moments(term.exponents, lt - 1)?;
    let q0 = apply_g_of_h(fit, &mom.values, first)?;
    qhat_matrix(&q0, n)
}

/// Symmetric pentadiagonal matrix stored by diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct Pentadiagonal {
    pub diag: Vec<f64>,
    pub off1: Vec<f64>,
    pub off2: Vec<f64>,
}

impl Pentadiagonal {
    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        match hi - lo {
            0 => self.diag[lo],
            1 => self.off1[lo],
            2 => self.off2[lo],
            _ => 0.0,
        }
    }

    pub fn to_dense(&self) -> Mat<f64> {
        let n = self.size();
        Mat::from_fn(n, n, |i, j| self.get(i, j))
    }

    /// `y = B x`
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.size();
        (0..n)
            .map(|i| {
                let lo = i.saturating_sub(2);
                let hi = (i + 3).min(n);
                (lo..hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }
}

/// `xᵀ B y`
pub fn b_inner(b: &Pentadiagonal, x: &[f64], y: &[f64]) -> f64 {
    b.mul_vec(y).iter().zip(x).map(|(u, v)| u * v).sum()
}

/// `B = R^T B̂ R` with `B̂ = diag(2/(2k+1))`.
pub fn mass_matrix(coeffs: &[BasisCoefficients]) -> Pentadiagonal {
    let n = coeffs.len();
    let bh = |k: usize| 2.0 / (2 * k + 1) as f64;
    let mut diag = vec![0.0; n];
    let mut off1 = vec![0.0; n.saturating_sub(1)];
    let mut off2 = vec![0.0; n.saturating_sub(2)];
    for m in 0..n {
        let c = &coeffs[m];
        diag[m] = c.xi * c.xi * bh(m) + c.eta * c.eta * bh(m + 1) + c.theta * c.theta * bh(m + 2);
        if m + 1 < n {
            let d = &coeffs[m + 1];
            off1[m] = c.eta * d.xi * bh(m + 1) + c.theta * d.eta * bh(m + 2);
        }
        if m + 2 < n {
            off2[m] = c.theta * coeffs[m + 2].xi * bh(m + 2);
        }
    }
    Pentadiagonal { diag, off1, off2 }
}

/// `a_nn = -2(2n+3) ξ_n θ_n`
pub fn stiffness_diagonal(coeffs: &[BasisCoefficients]) -> Vec<f64> {
    coeffs
        .iter()
        .map(|c| -2.0 * (2 * c.n + 3) as f64 * c.xi * c.theta)
        .collect()
}

/// `R^T Q̂ R`, exploiting the three nonzeros per column of `R`.
pub fn congruence(qhat: &Mat<f64>, coeffs: &[BasisCoefficients]) -> Mat<f64> {
    let n = coeffs.len();
    let rows = qhat.nrows();
    // (Q̂ R)(:, j)
    let mut qr = Mat::<f64>::zeros(rows, n);
    for (j, c) in coeffs.iter().enumerate() {
        for i in 0..rows {
            qr[(i, j)] = c.xi * qhat[(i, j)] + c.eta * qhat[(i, j + 1)] + c.theta * qhat[(i, j + 2)];
        }
    }
    Mat::from_fn(n, n, |i, j| {
        let c = &coeffs[i];
        c.xi * qr[(i, j)] + c.eta * qr[(i + 1, j)] + c.theta * qr[(i + 2, j)]
    })
}

/// One decoupled parity block of a symmetric problem.
#[derive(Debug, Clone)]
pub struct SplitBlock {
    /// Positions of this block's unknowns in the full coefficient vector.
    pub indices: Vec<usize>,
    pub a: Vec<f64>,
    pub b: Mat<f64>,
    pub q: Mat<f64>,
}

#[derive(Debug, Clone)]
pub struct SplitSystem {
    pub even: SplitBlock,
    pub odd: SplitBlock,
}

impl SplitSystem {
    /// Scatters a block eigenvector back into the full ordering.
    pub fn scatter(block: &SplitBlock, v: &[f64], n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (&i, &x) in block.indices.iter().zip(v) {
            out[i] = x;
        }
        out
    }
}

/// The discretized pencil `(A + Q) ζ = λ B ζ`.
#[derive(Debug, Clone)]
pub struct GalerkinSystem {
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Pentadiagonal,
    pub q: Mat<f64>,
    pub basis: Basis,
    /// `max|Q - Q^T| / max|Q|` before the explicit symmetrization.
    pub asymmetry: f64,
    pub split: Option<SplitSystem>,
}

impl GalerkinSystem {
    /// Dense `A + Q`.
    pub fn stiffness(&self) -> Mat<f64> {
        let mut k = self.q.clone();
        for i in 0..self.n {
            k[(i, i)] += self.a[i];
        }
        k
    }

    /// Attaches the even/odd splitting; see [`symmetric_split`].
    pub fn with_split(mut self, q_even: bool) -> Result<Self> {
        self.split = Some(symmetric_split(&self, q_even)?);
        Ok(self)
    }
}

/// Builds the Galerkin system for basis size `n`.
pub fn assemble(problem: &Problem, n: usize) -> Result<GalerkinSystem> {
    if n < 4 {
        return Err(Error::SizeTooSmall(n));
    }
    let basis = Basis::new(problem.bc, n)?;
    let coeffs = basis.coefficients();
    let a = stiffness_diagonal(coeffs);
    let b = mass_matrix(coeffs);

    let mut qhat = Mat::<f64>::zeros(n + 2, n + 2);
    for term in &problem.terms {
        qhat += term_qhat(term, n)?;
    }
    let mut q = congruence(&qhat, coeffs);

    let mut max_entry = 0.0_f64;
    let mut max_skew = 0.0_f64;
    for j in 0..n {
        for i in 0..n {
            max_entry = max_entry.max(q[(i, j)].abs());
            max_skew = max_skew.max((q[(i, j)] - q[(j, i)]).abs());
        }
    }
    let asymmetry = if max_entry > 0.0 { max_skew / max_entry } else { 0.0 };
    for j in 0..n {
        for i in (j + 1)..n {
            let s = 0.5 * (q[(i, j)] + q[(j, i)]);
            q[(i, j)] = s;
            q[(j, i)] = s;
        }
    }
    Ok(GalerkinSystem {
        n,
        a,
        b,
        q,
        basis,
        asymmetry,
        split: None,
    })
}

/// Relative size of parity-mixing entries tolerated in a symmetric split.
const PARITY_TOL: f64 = 1e-11;

/// Decouples a symmetric problem (even potential, symmetric boundary
/// conditions) into its even- and odd-index blocks.
pub fn symmetric_split(sys: &GalerkinSystem, q_even: bool) -> Result<SplitSystem> {
    if !q_even {
        return Err(Error::NotSymmetric("potential is not declared even".into()));
    }
    if !sys.basis.bc().is_symmetric() {
        return Err(Error::NotSymmetric("boundary conditions are not symmetric".into()));
    }
    let n = sys.n;
    let mut max_entry = 0.0_f64;
    let mut max_mixed = 0.0_f64;
    for j in 0..n {
        for i in 0..n {
            let v = sys.q[(i, j)].abs();
            max_entry = max_entry.max(v);
            if (i + j) % 2 == 1 {
                max_mixed = max_mixed.max(v);
            }
        }
    }
    if max_mixed > PARITY_TOL * max_entry.max(f64::MIN_POSITIVE) {
        return Err(Error::NotSymmetric(format!(
            "potential couples even and odd modes (relative {:e})",
            max_mixed / max_entry
        )));
    }
    let block = |parity: usize| {
        let indices: Vec<usize> = (parity..n).step_by(2).collect();
        let m = indices.len();
        SplitBlock {
            a: indices.iter().map(|&i| sys.a[i]).collect(),
            b: Mat::from_fn(m, m, |i, j| sys.b.get(indices[i], indices[j])),
            q: Mat::from_fn(m, m, |i, j| sys.q[(indices[i], indices[j])]),
            indices,
        }
    };
    Ok(SplitSystem {
        even: block(0),
        odd: block(1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BoundaryConditions;
    use crate::chebyshev::chebyshev_fit;
    use crate::potential::Expr;

    #[test]
    fn constant_fit_scales_vector() {
        let fit = ChebyshevApproximant::from_coefficients(vec![3.0]);
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(apply_g_of_h(&fit, &v, 2).unwrap(), vec![3.0, 6.0]);
    }

    #[test]
    fn identity_fit_applies_h() {
        let fit = ChebyshevApproximant::from_coefficients(vec![0.0, 1.0]);
        let mut v = vec![0.0; 8];
        v[0] = 1.0;
        let out = apply_g_of_h(&fit, &v, 5).unwrap();
        assert_eq!(out[0], 0.0);
        assert!((out[1] - 1.0 / 3.0).abs() < 1e-16);
        assert!(out[2..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn short_moment_vector_is_rejected() {
        let fit = chebyshev_fit(&|x| x * x).unwrap();
        assert!(apply_g_of_h(&fit, &[1.0; 5], 2).is_err());
        assert!(apply_g_of_h(&fit, &[1.0; 6], 2).is_ok());
    }

    #[test]
    fn unit_potential_gives_legendre_gram() {
        let n = 10;
        let mut q0 = vec![0.0; 2 * n + 3];
        q0[0] = 2.0;
        let qh = qhat_matrix(&q0, n).unwrap();
        for i in 0..n + 2 {
            for j in 0..n + 2 {
                let expect = if i == j { 2.0 / (2 * i + 1) as f64 } else { 0.0 };
                assert!((qh[(i, j)] - expect).abs() < 1e-15, "({i},{j})");
            }
        }
        assert!(qhat_matrix(&q0[..2 * n + 2], n).is_err());
    }

    #[test]
    fn free_dirichlet_diagonal() {
        let p = Problem::new(vec![], BoundaryConditions::dirichlet()).unwrap();
        let sys = assemble(&p, 5).unwrap();
        assert_eq!(sys.a, vec![6.0, 10.0, 14.0, 18.0, 22.0]);
        for k in 0..5 {
            let expect = 2.0 / (2 * k + 1) as f64 + 2.0 / (2 * k + 5) as f64;
            assert!((sys.b.diag[k] - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn neumann_first_stiffness_entry_vanishes() {
        let p = Problem::new(vec![], BoundaryConditions::neumann()).unwrap();
        assert_eq!(assemble(&p, 6).unwrap().a[0], 0.0);
    }

    #[test]
    fn rejects_tiny_basis() {
        let p = Problem::new(vec![], BoundaryConditions::dirichlet()).unwrap();
        assert!(matches!(assemble(&p, 3), Err(Error::SizeTooSmall(3))));
    }

    #[test]
    fn regular_gram_matches_general_route() {
        let term = PotentialTerm::expr(Expr::Poly { coeffs: vec![0.5, -1.0, 2.0, 0.25] }, 0.0, 0.0, 0, 0)
            .unwrap();
        let n = 12;
        let banded = term_qhat(&term, n).unwrap();
        let mut mom = vec![0.0; 2 * n + 3 + term.fit().degree() + 2];
        mom[0] = 2.0;
        let q0 = apply_g_of_h(term.fit(), &mom, 2 * n + 3).unwrap();
        let general = qhat_matrix(&q0, n).unwrap();
        for i in 0..n + 2 {
            for j in 0..n + 2 {
                assert!((banded[(i, j)] - general[(i, j)]).abs() < 1e-13, "({i},{j})");
            }
        }
    }

    #[test]
    fn split_refuses_asymmetric_input() {
        let p = Problem::new(vec![], BoundaryConditions::robin()).unwrap();
        let sys = assemble(&p, 8).unwrap();
        assert!(symmetric_split(&sys, true).is_err());
        let p = Problem::new(vec![], BoundaryConditions::dirichlet()).unwrap();
        let sys = assemble(&p, 8).unwrap();
        assert!(symmetric_split(&sys, false).is_err());
        let odd = PotentialTerm::expr(Expr::Poly { coeffs: vec![0.0, 1.0] }, 0.0, 0.0, 0, 0).unwrap();
        let p = Problem::new(vec![odd], BoundaryConditions::dirichlet()).unwrap();
        let sys = assemble(&p, 8).unwrap();
        assert!(symmetric_split(&sys, true).is_err());
    }
}
