//! The discrete fiber form
//! `Q_m(u) = sum |D_r u|^2 r + |(-i r/2) D_z u + (beta/r) u|^2 r`,
//! `beta = alpha - m`, and its weight `sum |u|^2 / r^2 r`.
//!
//! `D_r` is the forward difference between staggered radial nodes (its face
//! at the center line has zero weight, the outermost face couples to a zero
//! ghost node), `D_z` the central difference with zero end rows.

use super::grid::Grid2D;
use crate::error::{contract, Result};
use crate::spectral1d::SymTridiag;
use num_complex::Complex64 as C;
use sprs::{CsMat, TriMat};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberForm {
    pub grid: Grid2D,
    pub alpha: f64,
    pub m: i64,
}

/// Assembles the fiber form of `(alpha, m)` on `grid`.
pub fn assemble_qm(grid: Grid2D, alpha: f64, m: i64) -> Result<FiberForm> {
    contract(alpha.is_finite(), || format!("invalid flux {alpha}"))?;
    Ok(FiberForm { grid, alpha, m })
}

impl FiberForm {
    pub fn beta(&self) -> f64 {
        self.alpha - self.m as f64
    }

    /// Weight of the radial face between nodes `j` and `j + 1`.
    fn face(&self, j: usize) -> f64 {
        let g = &self.grid;
        (j as f64 + 1.0) * g.hr() * g.hz() / g.hr()
    }

    fn node_weight(&self, j: usize) -> f64 {
        let g = &self.grid;
        g.r(j) * g.hr() * g.hz()
    }

    /// Diagonal of the weight form `|u|^2 / r^2`.
    pub fn mass(&self) -> Vec<f64> {
        let g = &self.grid;
        let mut out = Vec::with_capacity(g.unknowns());
        for j in 0..g.nr {
            let w = self.node_weight(j) / (g.r(j) * g.r(j));
            out.extend(std::iter::repeat_n(w, g.nz_interior()));
        }
        out
    }

    fn value(&self, u: &[C], j: usize, k: usize) -> C {
        let g = &self.grid;
        if j >= g.nr || k == 0 || k >= g.nz {
            C::new(0.0, 0.0)
        } else {
            u[g.index(j, k)]
        }
    }

    /// `Q_m(u)` evaluated as a sum of squares.
    pub fn energy(&self, u: &[C]) -> f64 {
        let g = &self.grid;
        let beta = self.beta();
        let i = C::new(0.0, 1.0);
        let mut e = 0.0;
        for j in 0..g.nr {
            let r = g.r(j);
            let w = self.node_weight(j);
            for k in 1..g.nz {
                let u0 = self.value(u, j, k);
                e += self.face(j) * (self.value(u, j + 1, k) - u0).norm_sqr();
                let dz = (self.value(u, j, k + 1) - self.value(u, j, k - 1)) / (2.0 * g.hz());
                let phi = -i * (0.5 * r) * dz + u0 * (beta / r);
                e += w * phi.norm_sqr();
            }
        }
        e
    }

    pub fn denominator(&self, u: &[C]) -> f64 {
        self.mass()
            .iter()
            .zip(u)
            .map(|(m, x)| m * x.norm_sqr())
            .sum()
    }

    /// Hermitian matrix of the form on the interior unknowns.
    pub fn matrix(&self) -> CsMat<C> {
        let g = &self.grid;
        let n = g.unknowns();
        let beta = self.beta();
        let mut t = TriMat::new((n, n));
        let re = |x: f64| C::new(x, 0.0);
        for j in 0..g.nr {
            let r = g.r(j);
            let w = self.node_weight(j);
            let f = self.face(j);
            for k in 1..g.nz {
                let p = g.index(j, k);
                t.add_triplet(p, p, re(f));
                if j + 1 < g.nr {
                    let q = g.index(j + 1, k);
                    t.add_triplet(q, q, re(f));
                    t.add_triplet(p, q, re(-f));
                    t.add_triplet(q, p, re(-f));
                }
                // Row of the operator (-i r/2) D_z + beta/r at node (j, k).
                let c = r / (4.0 * g.hz());
                let mut row: Vec<(usize, C)> = vec![(p, re(beta / r))];
                if k + 1 < g.nz {
                    row.push((g.index(j, k + 1), C::new(0.0, -c)));
                }
                if k > 1 {
                    row.push((g.index(j, k - 1), C::new(0.0, c)));
                }
                for &(a, ca) in &row {
                    for &(b, cb) in &row {
                        t.add_triplet(a, b, ca.conj() * cb * w);
                    }
                }
            }
        }
        t.to_csr()
    }

    /// Eigenvalues of `S = -i D_z`; every vertical operator in the form is a
    /// polynomial in `S`.
    pub fn z_frequencies(&self) -> Vec<f64> {
        let g = &self.grid;
        (1..g.nz)
            .map(|l| (l as f64 * PI / g.nz as f64).cos() / g.hz())
            .collect()
    }

    /// Eigenvector of `S` for frequency index `l` (1-based), unit norm.
    pub fn z_mode(&self, l: usize) -> Vec<C> {
        let g = &self.grid;
        let th = l as f64 * PI / g.nz as f64;
        let mut v: Vec<C> = (1..g.nz)
            .map(|k| C::new(0.0, 1.0).powu(k as u32) * (k as f64 * th).sin())
            .collect();
        let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= n);
        v
    }

    /// Radial pencil `(K_s, M)` of the form restricted to the `S = s`
    /// eigenspace; `K_s` is real symmetric tridiagonal and `M` diagonal.
    pub fn radial_block(&self, s: f64) -> (SymTridiag, Vec<f64>) {
        let g = &self.grid;
        let beta = self.beta();
        let mut diag = Vec::with_capacity(g.nr);
        let mut mass = Vec::with_capacity(g.nr);
        for j in 0..g.nr {
            let r = g.r(j);
            let w = self.node_weight(j);
            let left = if j > 0 { self.face(j - 1) } else { 0.0 };
            let pot = 0.5 * r * s + beta / r;
            diag.push(left + self.face(j) + w * pot * pot);
            mass.push(w / (r * r));
        }
        let off = (0..g.nr - 1).map(|j| -self.face(j)).collect();
        (SymTridiag::new(diag, off), mass)
    }

    /// Full grid vector `c_j v_l(k)` from a radial profile and a z-mode.
    pub fn tensor_vector(&self, radial: &[f64], l: usize) -> Vec<C> {
        let zm = self.z_mode(l);
        radial
            .iter()
            .flat_map(|&c| zm.iter().map(move |v| v * c))
            .collect()
    }
}

/// `M^{-1/2} K M^{-1/2}` for a diagonal `M`.
pub fn symmetrize(k: &SymTridiag, mass: &[f64]) -> SymTridiag {
    let s: Vec<f64> = mass.iter().map(|m| 1.0 / m.sqrt()).collect();
    let diag = k.diag.iter().zip(&s).map(|(d, si)| d * si * si).collect();
    let off = k
        .off
        .iter()
        .enumerate()
        .map(|(i, e)| e * s[i] * s[i + 1])
        .collect();
    SymTridiag::new(diag, off)
}
