//! Angular fibers of the Aharonov–Bohm operator and the constant-field
//! spectral bottom.
//!
//! The weighted fiber problem `Q_m(u) = mu int |u|^2 / r^2` is solved on a
//! [`Grid2D`]. All vertical operators in the discrete form are polynomials
//! in the Hermitian matrix `S = -i D_z`, so the generalized eigenproblem
//! splits exactly into one radial tridiagonal pencil per eigenvalue of `S`;
//! each pencil is solved by Sturm bisection and inverse iteration. A sparse
//! inverse iteration on the assembled two-dimensional pair is also provided.

pub mod form;
pub mod grid;

use crate::error::{contract, Error, Result};
use crate::heisenberg::{radius_jet, Point, ScalarField, VectorField, VolumeRule};
use crate::jet::Jet;
use num_complex::Complex64 as C;
use rayon::prelude::*;
use serde::Serialize;

pub use crate::spectral1d::uniform_bottom;
pub use form::{assemble_qm, symmetrize, FiberForm};
pub use grid::Grid2D;

/// `max(-1, min(1, alpha - m))^2`.
pub fn clamped_bound(alpha: f64, m: i64) -> f64 {
    (alpha - m as f64).clamp(-1.0, 1.0).powi(2)
}

/// Distance from `alpha` to the nearest integer.
pub fn dist_to_integers(alpha: f64) -> f64 {
    (alpha - alpha.round()).abs()
}

/// Integer nearest to `alpha` (ties towards the smaller integer).
pub fn nearest_mode(alpha: f64) -> i64 {
    let f = alpha.floor();
    if alpha - f <= 0.5 {
        f as i64
    } else {
        f as i64 + 1
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberHardyResult {
    pub alpha: f64,
    pub m: i64,
    pub mu: f64,
    pub bound: f64,
    pub gap: f64,
    /// Eigenvalue of `S = -i D_z` attaining the minimum.
    pub z_frequency: f64,
    /// 1-based index of that eigenvalue.
    pub z_index: usize,
    /// Residual of the radial eigenpair in the symmetrized metric.
    pub residual: f64,
}

/// Smallest generalized eigenvalue of `(Q_m, |u|^2/r^2)` on `grid`.
pub fn fiber_hardy_constant(alpha: f64, m: i64, grid: Grid2D) -> Result<FiberHardyResult> {
    let form = assemble_qm(grid, alpha, m)?;
    let freqs = form.z_frequencies();
    let (l, mu) = freqs
        .par_iter()
        .enumerate()
        .map(|(i, &s)| {
            let (k, mass) = form.radial_block(s);
            (i + 1, symmetrize(&k, &mass).eigenvalue(0))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .ok_or_else(|| Error::Contract("empty grid".into()))?;
    let (k, mass) = form.radial_block(freqs[l - 1]);
    let (_, q, residual) = symmetrize(&k, &mass).inverse_iteration(mu)?;
    if (q - mu).abs() > 1e-9 * mu.abs().max(1.0) {
        return Err(Error::Convergence(format!(
            "Ritz values disagree: bisection {mu}, inverse iteration {q}"
        )));
    }
    let bound = clamped_bound(alpha, m);
    Ok(FiberHardyResult {
        alpha,
        m,
        mu,
        bound,
        gap: mu - bound,
        z_frequency: freqs[l - 1],
        z_index: l,
        residual,
    })
}

/// Radial eigenvector of the minimising pencil, as a full grid vector.
pub fn fiber_ground_state(res: &FiberHardyResult, grid: Grid2D) -> Result<Vec<C>> {
    let form = assemble_qm(grid, res.alpha, res.m)?;
    let (k, mass) = form.radial_block(res.z_frequency);
    let (v, _, _) = symmetrize(&k, &mass).inverse_iteration(res.mu)?;
    let radial: Vec<f64> = v.iter().zip(&mass).map(|(x, m)| x / m.sqrt()).collect();
    Ok(form.tensor_vector(&radial, res.z_index))
}

fn csr_apply(a: &sprs::CsMat<C>, x: &[C]) -> Vec<C> {
    let mut y = vec![C::new(0.0, 0.0); x.len()];
    for (i, row) in a.outer_iterator().enumerate() {
        let mut s = C::new(0.0, 0.0);
        for (j, v) in row.iter() {
            s += v * x[j];
        }
        y[i] = s;
    }
    y
}

fn cdot(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Conjugate gradients for a Hermitian positive definite matrix.
fn conjugate_gradient(a: &sprs::CsMat<C>, b: &[C], tol: f64, max_iter: usize) -> Result<Vec<C>> {
    let mut x = vec![C::new(0.0, 0.0); b.len()];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let bnorm = cdot(b, b).re.sqrt();
    let mut rr = cdot(&r, &r).re;
    for _ in 0..max_iter {
        if rr.sqrt() <= tol * bnorm {
            return Ok(x);
        }
        let ap = csr_apply(a, &p);
        let alpha = rr / cdot(&p, &ap).re;
        for i in 0..x.len() {
            x[i] += p[i] * alpha;
            r[i] -= ap[i] * alpha;
        }
        let rr_new = cdot(&r, &r).re;
        let beta = rr_new / rr;
        for i in 0..p.len() {
            p[i] = r[i] + p[i] * beta;
        }
        rr = rr_new;
    }
    Err(Error::Convergence(
        "conjugate gradients did not converge".into(),
    ))
}

/// Lowest generalized eigenvalue of the assembled pair by inverse iteration
/// with the weight form as metric; stops when successive Ritz values differ
/// by less than `1e-9` (relative). Intended for small grids.
pub fn fiber_hardy_constant_sparse(form: &FiberForm, max_iter: usize) -> Result<f64> {
    let k = form.matrix();
    let mass = form.mass();
    let n = mass.len();
    let mut y: Vec<C> = (0..n)
        .map(|i| {
            C::new(
                1.0 + ((i * 37) % 11) as f64 * 0.05,
                ((i * 13) % 7) as f64 * 0.01,
            )
        })
        .collect();
    let mut prev = f64::INFINITY;
    for _ in 0..max_iter {
        let rhs: Vec<C> = y.iter().zip(&mass).map(|(v, m)| v * *m).collect();
        let x = conjugate_gradient(&k, &rhs, 1e-13, 20 * n)?;
        let kx = csr_apply(&k, &x);
        let num = cdot(&x, &kx).re;
        let den: f64 = x.iter().zip(&mass).map(|(v, m)| m * v.norm_sqr()).sum();
        let ritz = num / den;
        let s = den.sqrt();
        y = x.iter().map(|v| v / s).collect();
        if (ritz - prev).abs() < 1e-9 * ritz.abs() {
            return Ok(ritz);
        }
        prev = ritz;
    }
    Err(Error::Convergence(
        "sparse inverse iteration did not converge".into(),
    ))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DecompositionReport {
    /// `Q_alpha(u) = int |Ru|^2 + |Phi u + i alpha u / r|^2`.
    pub lhs: f64,
    /// `<L_alpha u, u>` with `L_alpha = -Delta - i alpha d/dz` (complex; the
    /// imaginary part vanishes up to quadrature error).
    pub l_alpha: C,
    /// `alpha^2 int |u|^2 / r^2`.
    pub hardy_term: f64,
    /// `2 alpha <-i d/dphi u, u / r^2>` (complex).
    pub cross_term: C,
    pub discrepancy: f64,
}

/// Compares the two sides of
/// `Q_alpha(u) = <L_alpha u, u> + alpha^2 int |u|^2/r^2 + 2 alpha <-i d_phi u, r^-2 u>`,
/// where `<L_alpha u, u>` is computed from second derivatives of `u`.
pub fn quadform_decomposition_check(
    alpha: f64,
    u: &ScalarField,
    rule: &VolumeRule,
) -> Result<DecompositionReport> {
    use VectorField::*;
    let i = C::new(0.0, 1.0);
    let mut lhs = 0.0;
    let mut l_alpha = C::new(0.0, 0.0);
    let mut hardy = 0.0;
    let mut cross = C::new(0.0, 0.0);
    for (p, w) in &rule.nodes {
        let r = p.r();
        contract(r > 0.0, || "quadrature node on the center line".into())?;
        let j = u.jet(p, 2)?;
        let j1 = j.truncate(1);
        let ru = R.apply(p, &j1)?.v;
        let phiu = Phi.apply(p, &j1)?.v;
        let a = phiu + i * alpha * j.v / r;
        lhs += w * (ru.norm_sqr() + a.norm_sqr());
        let lap = crate::heisenberg::sub_laplacian(p, &j)?.v;
        let l = -lap - i * alpha * j.g[2];
        l_alpha += l * j.v.conj() * *w;
        hardy += w * alpha * alpha * j.v.norm_sqr() / (r * r);
        let dphi = p.x * j.g[1] - p.y * j.g[0];
        cross += (-i * dphi) * j.v.conj() * (2.0 * alpha / (r * r)) * *w;
    }
    let rhs = l_alpha + hardy + cross;
    Ok(DecompositionReport {
        lhs,
        l_alpha,
        hardy_term: hardy,
        cross_term: cross,
        discrepancy: (rhs - lhs).norm() / lhs.abs().max(f64::MIN_POSITIVE),
    })
}

/// `Phi_k u = (r/2) du/dz + (i k / r) u` for a function of `(r, z)`, given as
/// a field read on the half-plane `phi = 0`.
pub fn phi_k_fiber(k: i64, u: &ScalarField, r: f64, z: f64) -> Result<C> {
    contract(r > 0.0, || "Phi_k needs r > 0".into())?;
    let p = Point::new(r, 0.0, z);
    let j = u.jet(&p, 1)?;
    let rj: Jet = radius_jet(&p, 0)?;
    Ok(j.g[2] * (0.5 * rj.v.re) + C::new(0.0, k as f64 / r) * j.v)
}
