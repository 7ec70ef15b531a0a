//! One-dimensional adaptive Gauss–Kronrod (7/15) integration and fixed
//! Gauss–Legendre rules for tensor-product quadrature.
//!
//! Integrands may be vector-like (complex numbers, [`Jet`]s), which lets
//! differentiation pass under the integral sign.

use crate::error::{Error, Result};
use crate::jet::Jet;
use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64 as C;
use std::num::NonZeroUsize;
use std::ops::{Add, Mul};

pub const DEFAULT_ABS_TOL: f64 = 1e-10;
const MAX_SEGMENTS: usize = 4000;

/// Values a quadrature rule can accumulate.
pub trait Quadrable: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn norm(&self) -> f64;
}

impl Quadrable for f64 {
    fn zero() -> Self {
        0.0
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
}

impl Quadrable for C {
    fn zero() -> Self {
        C::new(0.0, 0.0)
    }
    fn norm(&self) -> f64 {
        C::norm(*self)
    }
}

impl Quadrable for Jet {
    fn zero() -> Self {
        Jet::real(0.0, crate::jet::MAX_ORDER)
    }
    fn norm(&self) -> f64 {
        self.max_abs()
    }
}

// 15-point Kronrod nodes and weights as tabulated in QUADPACK.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Gauss weights on the odd Kronrod nodes (indices 1, 3, 5 and the centre).
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<T: Quadrable>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron = kron + s * WGK[i];
        if i % 2 == 1 {
            gauss = gauss + s * WG[i / 2];
        }
    }
    let kron = kron * h;
    let gauss = gauss * h;
    let err = (kron + gauss * -1.0).norm();
    (kron, err)
}

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: DEFAULT_ABS_TOL,
            rel_tol: 1e-12,
        }
    }
}

/// Adaptive integral over `[a, b]` with the default tolerances.
pub fn integrate<T: Quadrable>(f: impl FnMut(f64) -> T, a: f64, b: f64) -> Result<T> {
    integrate_with(f, a, b, QuadOptions::default())
}

/// Adaptive bisection driven by the Kronrod–Gauss error estimate; the segment
/// with the largest estimate is split until the total meets the tolerance.
pub fn integrate_with<T: Quadrable>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    opts: QuadOptions,
) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    let (v0, e0) = gk15(&mut f, a, b);
    let mut segs = vec![(a, b, v0, e0)];
    loop {
        let mut total = T::zero();
        let mut err = 0.0;
        for s in &segs {
            total = total + s.2;
            err += s.3;
        }
        let tol = opts.abs_tol.max(opts.rel_tol * total.norm());
        if err <= tol {
            return Ok(total);
        }
        if segs.len() >= MAX_SEGMENTS {
            return Err(Error::Integration {
                estimate: total.norm(),
                error: err,
            });
        }
        let (idx, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (sa, sb, _, _) = segs.swap_remove(idx);
        let m = 0.5 * (sa + sb);
        if m <= sa || m >= sb {
            return Err(Error::Integration {
                estimate: total.norm(),
                error: err,
            });
        }
        let (vl, el) = gk15(&mut f, sa, m);
        let (vr, er) = gk15(&mut f, m, sb);
        segs.push((sa, m, vl, el));
        segs.push((m, sb, vr, er));
    }
}

/// Adaptive integral split at the given interior breakpoints.
pub fn integrate_pieces<T: Quadrable>(
    mut f: impl FnMut(f64) -> T,
    breaks: &[f64],
    opts: QuadOptions,
) -> Result<T> {
    let mut acc = T::zero();
    for w in breaks.windows(2) {
        acc = acc + integrate_with(&mut f, w[0], w[1], opts)?;
    }
    Ok(acc)
}

/// [`integrate_pieces`] for a fallible integrand; the first error aborts.
pub fn try_integrate_pieces<T: Quadrable>(
    mut f: impl FnMut(f64) -> Result<T>,
    breaks: &[f64],
    opts: QuadOptions,
) -> Result<T> {
    let mut failure = None;
    let value = integrate_pieces(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                T::zero()
            }
        },
        breaks,
        opts,
    );
    match failure {
        Some(e) => Err(e),
        None => value,
    }
}

/// A fixed Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        let gl = GaussLegendre::new(NonZeroUsize::new(n.max(1)).unwrap());
        let (nodes, weights) = gl.as_node_weight_pairs().iter().copied().unzip();
        GaussRule { nodes, weights }
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (c + h * x, h * w))
    }

    /// Composite rule over consecutive breakpoints.
    pub fn composite(&self, breaks: &[f64]) -> Vec<(f64, f64)> {
        breaks
            .windows(2)
            .flat_map(|w| self.on(w[0], w[1]).collect::<Vec<_>>())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_smooth_and_peaked_functions() {
        let v = integrate(|x: f64| x.sin(), 0.0, std::f64::consts::PI).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        let v = integrate(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0).unwrap();
        let exact = 2.0 / 1e-2 * (1.0f64 / 1e-2).atan();
        assert!((v - exact).abs() < 1e-8 * exact);
    }

    #[test]
    fn complex_integrand() {
        let v = integrate(|x: f64| C::new(0.0, x).exp(), 0.0, 1.0).unwrap();
        let exact = (C::new(0.0, 1.0).exp() - 1.0) / C::new(0.0, 1.0);
        assert!((v - exact).norm() < 1e-13);
    }

    #[test]
    fn jets_differentiate_under_the_integral() {
        // F(x) = int_0^1 exp(s x) ds, F'(x) = int_0^1 s exp(s x) ds.
        let x0 = 0.7;
        let f = integrate(
            |s| {
                let [x, _, _] = Jet::coords([x0, 0.0, 0.0], 2);
                (x * s).exp()
            },
            0.0,
            1.0,
        )
        .unwrap();
        let d = integrate(|s: f64| s * (s * x0).exp(), 0.0, 1.0).unwrap();
        assert!((f.g[0].re - d).abs() < 1e-12);
    }

    #[test]
    fn gauss_rule_is_exact_for_polynomials() {
        let r = GaussRule::new(5);
        let s: f64 = r.on(0.0, 2.0).map(|(x, w)| w * x.powi(9)).sum();
        assert!((s - 102.4).abs() < 1e-11);
    }
}
