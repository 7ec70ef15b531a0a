//! Tensor-product volume quadrature for the Haar measure `dx dy dz`.

use super::point::Point;
use crate::error::Result;
use crate::quadrature::GaussRule;
use num_complex::Complex64 as C;
use std::f64::consts::PI;

/// A list of nodes with weights for `dx dy dz = r dr dphi dz`.
#[derive(Clone, Debug)]
pub struct VolumeRule {
    pub nodes: Vec<(Point, f64)>,
}

/// Angles `-pi + 2 pi (i + 1/2) / n`: trapezoidal, never on the slit.
fn angles(n_phi: usize) -> Vec<(f64, f64)> {
    let w = 2.0 * PI / n_phi as f64;
    (0..n_phi)
        .map(|i| (-PI + (i as f64 + 0.5) * w, w))
        .collect()
}

impl VolumeRule {
    /// Gauss–Legendre in `r` and `z`, trapezoidal in `phi` over the
    /// cylindrical box `r in [r0, r1]`, `z in [z0, z1]`. With `n_phi = 1`
    /// the single node sits at `phi = 0` with weight `2 pi`, which is exact
    /// for rotation-invariant integrands.
    pub fn cylinder(r: [f64; 2], z: [f64; 2], n_r: usize, n_phi: usize, n_z: usize) -> Self {
        let gr = GaussRule::new(n_r);
        let gz = GaussRule::new(n_z);
        let phis = if n_phi == 1 {
            vec![(0.0, 2.0 * PI)]
        } else {
            angles(n_phi)
        };
        let mut nodes = Vec::with_capacity(n_r * n_z * phis.len());
        for (rv, wr) in gr.on(r[0], r[1]) {
            for (zv, wz) in gz.on(z[0], z[1]) {
                for &(ph, wp) in &phis {
                    nodes.push((Point::from_cylindrical(rv, ph, zv), wr * wz * wp * rv));
                }
            }
        }
        VolumeRule { nodes }
    }

    /// Koranyi polar coordinates `r = rho sqrt(cos t)`, `z = rho^2 sin(t) / 4`,
    /// `t in (-pi/2, pi/2)`, integrated in `s = ln rho` over consecutive
    /// breakpoints. The measure is `rho^4 / 4 ds dt dphi`.
    pub fn koranyi_shell(log_rho_breaks: &[f64], n_s: usize, n_t: usize, n_phi: usize) -> Self {
        let gs = GaussRule::new(n_s);
        let gt = GaussRule::new(n_t);
        let phis = if n_phi == 1 {
            vec![(0.0, 2.0 * PI)]
        } else {
            angles(n_phi)
        };
        let mut nodes = Vec::new();
        for (s, ws) in gs.composite(log_rho_breaks) {
            let rho = s.exp();
            for (t, wt) in gt.on(-0.5 * PI, 0.5 * PI) {
                let r = rho * t.cos().sqrt();
                let z = 0.25 * rho * rho * t.sin();
                for &(ph, wp) in &phis {
                    nodes.push((
                        Point::from_cylindrical(r, ph, z),
                        ws * wt * wp * 0.25 * rho.powi(4),
                    ));
                }
            }
        }
        VolumeRule { nodes }
    }

    pub fn integrate(&self, mut f: impl FnMut(&Point) -> Result<f64>) -> Result<f64> {
        let mut s = 0.0;
        for (p, w) in &self.nodes {
            s += w * f(p)?;
        }
        Ok(s)
    }

    pub fn integrate_complex(&self, mut f: impl FnMut(&Point) -> Result<C>) -> Result<C> {
        let mut s = C::new(0.0, 0.0);
        for (p, w) in &self.nodes {
            s += f(p)? * *w;
        }
        Ok(s)
    }
}
