//! Ground states of one-dimensional Schrödinger operators on a truncated
//! interval, the quartic family `-d^2/dt^2 + (b t^2/2 + g)^2` and the
//! constant `c = min_g lambda_1(g)`.
//!
//! Operators are discretised by the three-point stencil with Dirichlet ends.
//! The discrete ground energy on `N` and `2N` intervals is combined by
//! Richardson extrapolation, which removes the `O(h^2)` stencil error.

pub mod tridiag;

use crate::error::{contract, Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;
pub use tridiag::SymTridiag;

/// Frozen value of `c = min_g lambda_1(g)` from `universal_constant` with
/// default settings (scan of `[-10, 2]`, `|dg| <= 1e-4`).
pub const UNIVERSAL_CONSTANT: f64 = 0.569820317476721;
/// Frozen minimiser `g*` matching [`UNIVERSAL_CONSTANT`].
pub const UNIVERSAL_CONSTANT_G: f64 = -0.346764577281073;

/// Symmetric interval `[-T, T]` split into `n` equal cells; the `n - 1`
/// interior nodes carry the unknowns.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid1D {
    pub half_width: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        contract(n >= 16, || {
            format!("Grid1D needs at least 16 cells, got {n}")
        })?;
        contract(half_width > 0.0 && half_width.is_finite(), || {
            format!("invalid half width {half_width}")
        })?;
        Ok(Grid1D { half_width, n })
    }

    pub fn h(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.h();
        (1..self.n)
            .map(|i| -self.half_width + i as f64 * h)
            .collect()
    }

    pub fn refined(&self) -> Grid1D {
        Grid1D {
            half_width: self.half_width,
            n: 2 * self.n,
        }
    }
}

pub type Potential = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `-d^2/dt^2 + V` on a [`Grid1D`] with Dirichlet boundary conditions.
#[derive(Clone)]
pub struct SchrodingerOperator1D {
    pub grid: Grid1D,
    pub potential: Potential,
}

impl SchrodingerOperator1D {
    pub fn new(grid: Grid1D, potential: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        SchrodingerOperator1D {
            grid,
            potential: Arc::new(potential),
        }
    }

    pub fn with_grid(&self, grid: Grid1D) -> Self {
        SchrodingerOperator1D {
            grid,
            potential: self.potential.clone(),
        }
    }

    pub fn matrix(&self) -> SymTridiag {
        let h = self.grid.h();
        let nodes = self.grid.nodes();
        let diag = nodes
            .iter()
            .map(|&t| 2.0 / (h * h) + (self.potential)(t))
            .collect();
        let off = vec![-1.0 / (h * h); nodes.len() - 1];
        SymTridiag::new(diag, off)
    }

    /// Smallest eigenvalue of the discrete operator by bisection.
    pub fn discrete_ground_energy(&self) -> f64 {
        self.matrix().eigenvalue(0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenResult {
    /// Richardson-extrapolated ground energy from the grid and its refinement.
    pub value: f64,
    /// Smallest eigenvalue of the tridiagonal matrix on the base grid.
    pub discrete_value: f64,
    /// Same eigenvalue on the refined grid.
    pub refined_value: f64,
    /// Rayleigh quotient of the inverse-iteration eigenvector (base grid).
    pub rayleigh_value: f64,
    /// Interior nodes of the base grid.
    pub nodes: Vec<f64>,
    /// Eigenvector with `h * sum v_i^2 = 1`, positive maximum.
    pub vector: Vec<f64>,
    /// `||(H - lambda) v|| / ||v||` on the base grid.
    pub residual: f64,
}

/// Fraction of the discrete `L^2` mass lying within 1% of the interval
/// length from either end.
pub fn boundary_mass(grid: &Grid1D, vector: &[f64]) -> f64 {
    let layer = 0.02 * grid.half_width;
    let nodes = grid.nodes();
    let total: f64 = vector.iter().map(|v| v * v).sum();
    let edge: f64 = nodes
        .iter()
        .zip(vector)
        .filter(|(t, _)| grid.half_width - t.abs() <= layer)
        .map(|(_, v)| v * v)
        .sum();
    edge / total
}

/// Ground state with truncation guard: fails if more than `1e-8` of the
/// eigenfunction mass sits in the boundary layer.
pub fn ground_state(op: &SchrodingerOperator1D) -> Result<EigenResult> {
    let t = op.matrix();
    let lambda = t.eigenvalue(0);
    let (mut v, q, residual) = t.inverse_iteration(lambda)?;
    let mass = boundary_mass(&op.grid, &v);
    if mass > 1e-8 {
        return Err(Error::Truncation(format!(
            "ground state has mass fraction {mass:.3e} near the boundary of [-{T}, {T}]",
            T = op.grid.half_width
        )));
    }
    let h = op.grid.h();
    let s = (1.0 / h).sqrt();
    v.iter_mut().for_each(|x| *x *= s);
    let refined = op.with_grid(op.grid.refined()).discrete_ground_energy();
    Ok(EigenResult {
        value: (4.0 * refined - lambda) / 3.0,
        discrete_value: lambda,
        refined_value: refined,
        rayleigh_value: q,
        nodes: op.grid.nodes(),
        vector: v,
        residual,
    })
}

/// `V(t) = (b t^2 / 2 + g)^2`.
pub fn quartic_potential(g: f64, b: f64) -> impl Fn(f64) -> f64 + Send + Sync + Clone {
    move |t| {
        let w = 0.5 * b * t * t + g;
        w * w
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Discretization {
    /// Grow the interval until `V(T) >= 100 lambda` and refine, starting from
    /// cell size `step * b^(-1/3)`, until two successive extrapolated values
    /// agree to `rel_tol`.
    Auto { rel_tol: f64, step: f64 },
    /// Use the given grid as is.
    Fixed { half_width: f64, n: usize },
}

impl Default for Discretization {
    fn default() -> Self {
        Discretization::Auto {
            rel_tol: 1e-9,
            step: 0.02,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuarticResult {
    pub lambda: f64,
    pub g: f64,
    pub b: f64,
    pub half_width: f64,
    pub n: usize,
    /// Relative change between the last two refinements (0 for fixed grids).
    pub refinement_change: f64,
}

/// Initial half width: beyond the outer turning point of the potential.
fn initial_half_width(g: f64, b: f64) -> f64 {
    let scale = b.powf(-1.0 / 3.0);
    let well = if g < 0.0 {
        (2.0 * g.abs() / b).sqrt()
    } else {
        0.0
    };
    well + 6.0 * scale
}

/// Ground energy of the quartic operator `L_b^g`.
pub fn quartic_lambda(g: f64, b: f64, disc: Discretization) -> Result<QuarticResult> {
    contract(b > 0.0 && b.is_finite() && g.is_finite(), || {
        format!("invalid (g, b) = ({g}, {b})")
    })?;
    let v = quartic_potential(g, b);
    match disc {
        Discretization::Fixed { half_width, n } => {
            let op = SchrodingerOperator1D::new(Grid1D::new(half_width, n)?, v);
            let r = ground_state(&op)?;
            Ok(QuarticResult {
                lambda: r.value,
                g,
                b,
                half_width,
                n,
                refinement_change: 0.0,
            })
        }
        Discretization::Auto { rel_tol, step } => {
            let mut t = initial_half_width(g, b);
            let scale = b.powf(-1.0 / 3.0);
            for _ in 0..30 {
                let mut n = ((2.0 * t / (step * scale)).ceil() as usize).max(400);
                n += n % 2;
                let op = SchrodingerOperator1D::new(Grid1D::new(t, n)?, v.clone());
                let first = match ground_state(&op) {
                    Ok(r) => r,
                    Err(Error::Truncation(_)) => {
                        t *= 1.5;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                if v(t) < 100.0 * first.value {
                    t *= 1.5;
                    continue;
                }
                let mut prev = first.value;
                let mut fine = first.refined_value;
                for _ in 0..8 {
                    n *= 2;
                    let finer = op
                        .with_grid(Grid1D::new(t, 2 * n)?)
                        .discrete_ground_energy();
                    let next = (4.0 * finer - fine) / 3.0;
                    let change = ((next - prev) / next).abs();
                    if change <= rel_tol {
                        return Ok(QuarticResult {
                            lambda: next,
                            g,
                            b,
                            half_width: t,
                            n,
                            refinement_change: change,
                        });
                    }
                    prev = next;
                    fine = finer;
                }
                return Err(Error::Convergence(format!(
                    "quartic ground energy for g = {g}, b = {b} did not settle to {rel_tol:e}"
                )));
            }
            Err(Error::Truncation(format!(
                "no adequate interval found for g = {g}, b = {b}"
            )))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantConfig {
    pub g_min: f64,
    pub g_max: f64,
    pub scan_points: usize,
    pub g_tol: f64,
    pub discretization: Discretization,
}

impl Default for ConstantConfig {
    fn default() -> Self {
        ConstantConfig {
            g_min: -10.0,
            g_max: 2.0,
            scan_points: 61,
            g_tol: 1e-4,
            discretization: Discretization::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UniversalConstant {
    pub c: f64,
    pub g_star: f64,
    /// `(g, lambda(g))` on the coarse scan.
    pub scan: Vec<(f64, f64)>,
    /// Value of `c` recomputed on the next finer discretization.
    pub c_refined: f64,
    pub refinement_change: f64,
}

fn refine(d: Discretization) -> Discretization {
    match d {
        Discretization::Auto { rel_tol, step } => Discretization::Auto {
            rel_tol,
            step: step / 2.0,
        },
        Discretization::Fixed { half_width, n } => Discretization::Fixed {
            half_width,
            n: 2 * n,
        },
    }
}

/// Coarse scan of `lambda_1(g)` followed by golden-section refinement.
pub fn universal_constant(cfg: &ConstantConfig) -> Result<UniversalConstant> {
    contract(cfg.g_min < cfg.g_max && cfg.scan_points >= 5, || {
        "invalid scan range".into()
    })?;
    let step = (cfg.g_max - cfg.g_min) / (cfg.scan_points - 1) as f64;
    let scan: Vec<(f64, f64)> = (0..cfg.scan_points)
        .into_par_iter()
        .map(|i| {
            let g = cfg.g_min + i as f64 * step;
            quartic_lambda(g, 1.0, cfg.discretization).map(|r| (g, r.lambda))
        })
        .collect::<Result<_>>()?;
    let (imin, _) = scan
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .unwrap();
    if imin == 0 || imin + 1 == scan.len() {
        return Err(Error::ScanRange { g: scan[imin].0 });
    }
    let minimise = |d: Discretization| -> Result<(f64, f64)> {
        let f = |g: f64| quartic_lambda(g, 1.0, d).map(|r| r.lambda);
        golden_section(f, scan[imin - 1].0, scan[imin + 1].0, cfg.g_tol)
    };
    let (g_star, c) = minimise(cfg.discretization)?;
    let (_, c_refined) = minimise(refine(cfg.discretization))?;
    Ok(UniversalConstant {
        c,
        g_star,
        scan,
        c_refined,
        refinement_change: ((c - c_refined) / c_refined).abs(),
    })
}

/// Minimises a unimodal function on `[a, b]` until the bracket is shorter
/// than `tol`; returns `(argmin, min)`.
pub fn golden_section(
    f: impl Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a, b);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x)?;
    Ok((x, fx))
}

/// Bottom of the spectrum of the constant-field operator, `c |B|^(2/3)`.
pub fn uniform_bottom(b: f64) -> Result<f64> {
    contract(b > 0.0 && b.is_finite(), || {
        format!("field strength must be positive, got {b}")
    })?;
    Ok(UNIVERSAL_CONSTANT * b.powf(2.0 / 3.0))
}
