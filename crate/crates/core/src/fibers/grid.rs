use crate::error::{contract, Result};
use serde::{Deserialize, Serialize};

/// Half-plane grid for the `(r, z)` fibers.
///
/// Radial nodes are staggered, `r_j = (j + 1/2) h_r` for `j = 0..nr`, so no
/// node sits on the center line; the vertical nodes are `z_k = -Z + k h_z`,
/// `k = 0..=nz`, with the two end rows held at zero. Weights discretise
/// `r dr dz` (midpoint in `r`, trapezoidal in `z`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub nr: usize,
    pub nz: usize,
    pub r_max: f64,
    pub z_max: f64,
}

impl Default for Grid2D {
    fn default() -> Self {
        Grid2D {
            nr: 400,
            nz: 400,
            r_max: 40.0,
            z_max: 40.0,
        }
    }
}

impl Grid2D {
    pub fn new(nr: usize, nz: usize, r_max: f64, z_max: f64) -> Result<Self> {
        contract(nr >= 2 && nz >= 2, || {
            format!("grid too small: nr = {nr}, nz = {nz}")
        })?;
        contract(r_max > 0.0 && z_max > 0.0, || {
            "box extents must be positive".into()
        })?;
        Ok(Grid2D {
            nr,
            nz,
            r_max,
            z_max,
        })
    }

    pub fn hr(&self) -> f64 {
        self.r_max / self.nr as f64
    }

    pub fn hz(&self) -> f64 {
        2.0 * self.z_max / self.nz as f64
    }

    pub fn r(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.hr()
    }

    pub fn z(&self, k: usize) -> f64 {
        -self.z_max + k as f64 * self.hz()
    }

    /// Quadrature weight of node `(j, k)`, `k = 0..=nz`.
    pub fn weight(&self, j: usize, k: usize) -> f64 {
        let end = if k == 0 || k == self.nz { 0.5 } else { 1.0 };
        self.r(j) * self.hr() * self.hz() * end
    }

    pub fn total_measure(&self) -> f64 {
        let mut s = 0.0;
        for j in 0..self.nr {
            for k in 0..=self.nz {
                s += self.weight(j, k);
            }
        }
        s
    }

    /// Number of interior vertical nodes (unknowns per radial node).
    pub fn nz_interior(&self) -> usize {
        self.nz - 1
    }

    pub fn unknowns(&self) -> usize {
        self.nr * self.nz_interior()
    }

    /// Index of unknown `(j, k)` with `k` in `1..nz`.
    pub fn index(&self, j: usize, k: usize) -> usize {
        j * self.nz_interior() + (k - 1)
    }

    /// Both extents and both node counts doubled; the step sizes are kept,
    /// so the old grid embeds in the new one.
    pub fn doubled(&self) -> Grid2D {
        Grid2D {
            nr: 2 * self.nr,
            nz: 2 * self.nz,
            r_max: 2.0 * self.r_max,
            z_max: 2.0 * self.z_max,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_integrate_the_box() {
        let g = Grid2D::new(37, 24, 3.0, 2.5).unwrap();
        let exact = 0.5 * 9.0 * 5.0;
        assert!((g.total_measure() - exact).abs() < 1e-10);
        assert!(g.r(0) > 0.0);
    }
}
