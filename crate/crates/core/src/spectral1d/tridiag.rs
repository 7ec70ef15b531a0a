//! Real symmetric tridiagonal eigenvalue tools: Sturm-count bisection and
//! inverse iteration.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len());
        SymTridiag { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x` (LDL^T inertia).
    pub fn sturm_count(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.len() {
            if i > 0 {
                let e = self.off[i - 1];
                q = self.diag[i] - x - e * e / q;
            }
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut rad = 0.0;
            if i > 0 {
                rad += self.off[i - 1].abs();
            }
            if i + 1 < n {
                rad += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - rad);
            hi = hi.max(self.diag[i] + rad);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection to full precision.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    /// Solves `(T - shift) x = b` by Gaussian elimination with partial pivoting.
    pub fn solve_shifted(&self, shift: f64, b: &[f64]) -> Vec<f64> {
        let n = self.len();
        let scale = self
            .gershgorin()
            .1
            .abs()
            .max(self.gershgorin().0.abs())
            .max(1.0);
        let floor = f64::EPSILON * scale;
        // Band storage after pivoting: u0 diagonal, u1 and u2 superdiagonals.
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut mult = vec![0.0; n];
        let mut swapped = vec![false; n];
        let mut rhs = b.to_vec();
        let mut d = self.diag[0] - shift;
        let mut s1 = if n > 1 { self.off[0] } else { 0.0 };
        for i in 0..n {
            if i + 1 == n {
                u0[i] = if d.abs() < floor { floor } else { d };
                break;
            }
            let sub = self.off[i];
            let dn = self.diag[i + 1] - shift;
            let sn = if i + 2 < n { self.off[i + 1] } else { 0.0 };
            if d.abs() >= sub.abs() {
                let piv = if d.abs() < floor { floor } else { d };
                let m = sub / piv;
                u0[i] = piv;
                u1[i] = s1;
                u2[i] = 0.0;
                mult[i] = m;
                d = dn - m * s1;
                s1 = sn;
            } else {
                let m = d / sub;
                u0[i] = sub;
                u1[i] = dn;
                u2[i] = sn;
                mult[i] = m;
                swapped[i] = true;
                rhs.swap(i, i + 1);
                d = s1 - m * dn;
                s1 = -m * sn;
            }
            rhs[i + 1] -= mult[i] * rhs[i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = rhs[i];
            if i + 1 < n {
                s -= u1[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= u2[i] * x[i + 2];
            }
            x[i] = s / u0[i];
        }
        x
    }

    /// Eigenvector for an eigenvalue estimate by inverse iteration. Returns
    /// the unit vector (Euclidean), its Rayleigh quotient and the residual
    /// `||T v - q v||`.
    pub fn inverse_iteration(&self, lambda: f64) -> Result<(Vec<f64>, f64, f64)> {
        let n = self.len();
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.1 * ((i * 7919 % 13) as f64))
            .collect();
        normalize(&mut v);
        let mut q = lambda;
        let mut res = f64::INFINITY;
        for _ in 0..8 {
            let mut w = self.solve_shifted(lambda, &v);
            if w.iter().any(|x| !x.is_finite()) {
                return Err(Error::Convergence(
                    "inverse iteration produced non-finite values".into(),
                ));
            }
            normalize(&mut w);
            // Fix the sign so that iterates are comparable.
            let s = w
                .iter()
                .copied()
                .fold(0.0, |a: f64, b| if b.abs() > a.abs() { b } else { a });
            if s < 0.0 {
                w.iter_mut().for_each(|x| *x = -*x);
            }
            let tw = self.matvec(&w);
            q = dot(&w, &tw);
            res = tw
                .iter()
                .zip(&w)
                .map(|(a, b)| (a - q * b).powi(2))
                .sum::<f64>()
                .sqrt();
            let change: f64 = w
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            v = w;
            if change < 1e-13 {
                break;
            }
        }
        Ok((v, q, res))
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}
