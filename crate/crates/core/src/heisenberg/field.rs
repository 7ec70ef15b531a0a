//! Complex scalar fields on the Heisenberg group.

use super::expr::FieldExpr;
use super::point::Point;
use crate::error::{Error, Result};
use crate::jet::Jet;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// How a field's derivatives are obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference { h: f64 },
}

type JetFn = dyn Fn(&Point, u8) -> Result<Jet> + Send + Sync;
type ValueFn = dyn Fn(&Point) -> Result<C> + Send + Sync;

#[derive(Clone)]
enum Kind {
    Expr(FieldExpr),
    Jet(Arc<JetFn>),
    Sampled(Arc<ValueFn>, f64),
    Tabulated(Arc<TabulatedField>, f64),
}

#[derive(Clone)]
pub struct ScalarField {
    kind: Kind,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Expr(e) => write!(f, "ScalarField({e:?})"),
            Kind::Jet(_) => write!(f, "ScalarField(<analytic closure>)"),
            Kind::Sampled(_, h) => write!(f, "ScalarField(<sampled>, h={h})"),
            Kind::Tabulated(t, h) => write!(f, "ScalarField(<tabulated {:?}>, h={h})", t.shape()),
        }
    }
}

impl From<FieldExpr> for ScalarField {
    fn from(e: FieldExpr) -> Self {
        ScalarField::expr(e)
    }
}

impl ScalarField {
    pub fn expr(e: FieldExpr) -> Self {
        ScalarField {
            kind: Kind::Expr(e),
        }
    }

    pub fn zero() -> Self {
        Self::expr(FieldExpr::constant(0.0))
    }

    /// Analytic field given by a jet-valued closure.
    pub fn from_jet_fn(f: impl Fn(&Point, u8) -> Result<Jet> + Send + Sync + 'static) -> Self {
        ScalarField {
            kind: Kind::Jet(Arc::new(f)),
        }
    }

    /// Field known only through its values; derivatives by central differences.
    pub fn sampled(f: impl Fn(&Point) -> Result<C> + Send + Sync + 'static, h: f64) -> Self {
        ScalarField {
            kind: Kind::Sampled(Arc::new(f), h),
        }
    }

    pub fn tabulated(t: TabulatedField) -> Self {
        ScalarField {
            kind: Kind::Tabulated(Arc::new(t), DEFAULT_FD_STEP),
        }
    }

    pub fn mode(&self) -> DerivativeMode {
        match &self.kind {
            Kind::Expr(_) | Kind::Jet(_) => DerivativeMode::Analytic,
            Kind::Sampled(_, h) | Kind::Tabulated(_, h) => {
                DerivativeMode::FiniteDifference { h: *h }
            }
        }
    }

    pub fn as_expr(&self) -> Option<&FieldExpr> {
        match &self.kind {
            Kind::Expr(e) => Some(e),
            _ => None,
        }
    }

    pub fn as_tabulated(&self) -> Option<&TabulatedField> {
        match &self.kind {
            Kind::Tabulated(t, _) => Some(t),
            _ => None,
        }
    }

    pub fn eval(&self, p: &Point) -> Result<C> {
        match &self.kind {
            Kind::Expr(e) => Ok(e.jet(p, 0)?.v),
            Kind::Jet(f) => Ok(f(p, 0)?.v),
            Kind::Sampled(f, _) => f(p),
            Kind::Tabulated(t, _) => t.eval(p),
        }
    }

    /// Value and Cartesian partial derivatives up to `order`.
    pub fn jet(&self, p: &Point, order: u8) -> Result<Jet> {
        match &self.kind {
            Kind::Expr(e) => e.jet(p, order),
            Kind::Jet(f) => f(p, order),
            Kind::Sampled(_, h) | Kind::Tabulated(_, h) => {
                fd_jet(&|q: &Point| self.eval(q), p, order, *h)
            }
        }
    }
}

/// Central-difference jet. Second derivatives use the widened step
/// `max(h, sqrt(h) / 10)` to balance truncation against cancellation.
pub fn fd_jet(f: &dyn Fn(&Point) -> Result<C>, p: &Point, order: u8, h: f64) -> Result<Jet> {
    if order > 2 {
        return Err(Error::Contract(
            "finite-difference fields provide derivatives up to order 2".into(),
        ));
    }
    let base = p.to_array();
    let at = |d: [f64; 3]| f(&Point::new(base[0] + d[0], base[1] + d[1], base[2] + d[2]));
    let v = f(p)?;
    let mut j = Jet::constant(v, order);
    if order >= 1 {
        for i in 0..3 {
            let mut e = [0.0; 3];
            e[i] = h;
            let fp = at(e)?;
            e[i] = -h;
            let fm = at(e)?;
            j.g[i] = (fp - fm) / (2.0 * h);
        }
    }
    if order >= 2 {
        let k = h.max(h.sqrt() * 0.1);
        for i in 0..3 {
            let mut e = [0.0; 3];
            e[i] = k;
            let fp = at(e)?;
            e[i] = -k;
            let fm = at(e)?;
            j.h[i][i] = (fp - 2.0 * v + fm) / (k * k);
            for l in (i + 1)..3 {
                let mut d = [0.0; 3];
                let mut s = C::new(0.0, 0.0);
                for (si, sl, sign) in [
                    (1.0, 1.0, 1.0),
                    (1.0, -1.0, -1.0),
                    (-1.0, 1.0, -1.0),
                    (-1.0, -1.0, 1.0),
                ] {
                    d[i] = si * k;
                    d[l] = sl * k;
                    s += at(d)? * sign;
                }
                j.h[i][l] = s / (4.0 * k * k);
                j.h[l][i] = j.h[i][l];
            }
        }
    }
    Ok(j)
}

/// Uniform axis `min + i (max - min) / (n - 1)`, `i = 0..n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Axis {
    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.n as f64 - 1.0)
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.max
        } else {
            self.min + i as f64 * self.step()
        }
    }

    fn locate(&self, x: f64) -> Option<(usize, f64)> {
        if !(x >= self.min && x <= self.max) {
            return None;
        }
        let s = (x - self.min) / self.step();
        let i = (s.floor() as usize).min(self.n - 2);
        Some((i, s - i as f64))
    }
}

/// Field values on a Cartesian grid with trilinear interpolation; outside the
/// grid the field is zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TabulatedField {
    pub x: Axis,
    pub y: Axis,
    pub z: Axis,
    /// Row-major `[ix][iy][iz]` real parts.
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl TabulatedField {
    pub fn sample(field: &ScalarField, x: Axis, y: Axis, z: Axis) -> Result<Self> {
        let mut re = Vec::with_capacity(x.n * y.n * z.n);
        let mut im = Vec::with_capacity(x.n * y.n * z.n);
        for i in 0..x.n {
            for j in 0..y.n {
                for k in 0..z.n {
                    let v = field.eval(&Point::new(x.node(i), y.node(j), z.node(k)))?;
                    re.push(v.re);
                    im.push(v.im);
                }
            }
        }
        Ok(TabulatedField { x, y, z, re, im })
    }

    pub fn shape(&self) -> [usize; 3] {
        [self.x.n, self.y.n, self.z.n]
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.x.n * self.y.n * self.z.n;
        let ok = [&self.x, &self.y, &self.z]
            .iter()
            .all(|a| a.n >= 2 && a.max > a.min)
            && self.re.len() == n
            && self.im.len() == n;
        if ok {
            Ok(())
        } else {
            Err(Error::Contract("malformed tabulated field".into()))
        }
    }

    fn at(&self, i: usize, j: usize, k: usize) -> C {
        let idx = (i * self.y.n + j) * self.z.n + k;
        C::new(self.re[idx], self.im[idx])
    }

    pub fn eval(&self, p: &Point) -> Result<C> {
        let (Some((i, fx)), Some((j, fy)), Some((k, fz))) =
            (self.x.locate(p.x), self.y.locate(p.y), self.z.locate(p.z))
        else {
            return Ok(C::new(0.0, 0.0));
        };
        let mut acc = C::new(0.0, 0.0);
        for (di, wx) in [(0, 1.0 - fx), (1, fx)] {
            for (dj, wy) in [(0, 1.0 - fy), (1, fy)] {
                for (dk, wz) in [(0, 1.0 - fz), (1, fz)] {
                    let w = wx * wy * wz;
                    if w != 0.0 {
                        acc += self.at(i + di, j + dj, k + dk) * w;
                    }
                }
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::expr::Monomial;

    fn poly() -> ScalarField {
        FieldExpr::Polynomial {
            terms: vec![
                Monomial {
                    coef: 1.0,
                    powers: [2, 1, 0],
                },
                Monomial {
                    coef: -0.5,
                    powers: [0, 1, 2],
                },
                Monomial {
                    coef: 0.25,
                    powers: [1, 0, 1],
                },
            ],
        }
        .into()
    }

    #[test]
    fn sampled_derivatives_match_analytic() {
        let a = poly();
        let b = {
            let a = a.clone();
            ScalarField::sampled(move |p| a.eval(p), DEFAULT_FD_STEP)
        };
        let p = Point::new(0.4, -1.2, 0.9);
        let ja = a.jet(&p, 2).unwrap();
        let jb = b.jet(&p, 2).unwrap();
        for i in 0..3 {
            assert!((ja.g[i] - jb.g[i]).norm() < 1e-8);
            for k in 0..3 {
                assert!((ja.h[i][k] - jb.h[i][k]).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn tabulated_reproduces_nodes() {
        let ax = Axis {
            min: -1.0,
            max: 1.0,
            n: 5,
        };
        let t = TabulatedField::sample(&poly(), ax.clone(), ax.clone(), ax.clone()).unwrap();
        let p = Point::new(ax.node(1), ax.node(3), ax.node(4));
        assert_eq!(t.eval(&p).unwrap(), poly().eval(&p).unwrap());
    }
}
