//! Closed-form coefficient expressions with a serializable representation.
//!
//! Each expression evaluates to a [`Jet`], so derivatives are exact. The
//! catalog is deliberately small: coordinates, the Koranyi norm, the
//! slit-domain angle, polynomial bumps and a few elementary combinators.

use super::point::Point;
use crate::error::{Error, Result};
use crate::jet::Jet;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldExpr {
    Constant {
        re: f64,
        #[serde(default)]
        im: f64,
    },
    X,
    Y,
    Z,
    /// Cylindrical radius `r`; not differentiable on the center line.
    Radius,
    /// Angle `phi` on the plane slit along the negative x-axis.
    Angle,
    /// Koranyi norm `rho`.
    Koranyi,
    /// `sum_k c_k x^a y^b z^c` with `powers = [a, b, c]`.
    Polynomial {
        terms: Vec<Monomial>,
    },
    /// `(1 - u^2)^power * sum_k coeffs[k] u^(2k)` with `u = r / radius`,
    /// zero for `r >= radius`. Smooth across the center line.
    RadialBump {
        radius: f64,
        power: u32,
        coeffs: Vec<f64>,
    },
    /// `(1 - ((r - center) / halfwidth)^2)^power` inside the annulus, zero outside.
    AnnularBump {
        center: f64,
        halfwidth: f64,
        power: u32,
    },
    /// `(1 - ((z - center) / halfwidth)^2)^power` inside the slab, zero outside.
    AxialBump {
        center: f64,
        halfwidth: f64,
        power: u32,
    },
    Sum {
        terms: Vec<FieldExpr>,
    },
    Product {
        factors: Vec<FieldExpr>,
    },
    Scale {
        re: f64,
        #[serde(default)]
        im: f64,
        expr: Box<FieldExpr>,
    },
    /// Real power of a positive real-valued expression.
    Pow {
        base: Box<FieldExpr>,
        exponent: f64,
    },
    Exp {
        arg: Box<FieldExpr>,
    },
    Cos {
        arg: Box<FieldExpr>,
    },
    Sin {
        arg: Box<FieldExpr>,
    },
    Atan {
        arg: Box<FieldExpr>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coef: f64,
    pub powers: [u32; 3],
}

fn singular(what: &str, p: &Point) -> Error {
    Error::SingularPoint(format!("{what} at ({}, {}, {})", p.x, p.y, p.z))
}

/// Jet of the cylindrical radius.
pub fn radius_jet(p: &Point, order: u8) -> Result<Jet> {
    let r = p.r();
    if r == 0.0 && order > 0 {
        return Err(singular("radius derivative", p));
    }
    let [x, y, _] = Jet::coords(p.to_array(), order);
    if order == 0 {
        return Ok(Jet::real(r, 0));
    }
    Ok((x * x + y * y).sqrt())
}

/// Jet of `r^2 = x^2 + y^2`.
pub fn radius_sq_jet(p: &Point, order: u8) -> Jet {
    let [x, y, _] = Jet::coords(p.to_array(), order);
    x * x + y * y
}

/// Jet of the slit-domain angle. Derivatives are those of `Im log(x + iy)`.
pub fn angle_jet(p: &Point, order: u8) -> Result<Jet> {
    if p.r() == 0.0 {
        return Err(singular("angle", p));
    }
    let [x, y, _] = Jet::coords(p.to_array(), order);
    let w = x + y.mul_i();
    let wi = w.v.inv();
    let log = w.chain([C::new(0.0, 0.0), wi, -wi * wi, 2.0 * wi * wi * wi]);
    let mut out = Jet::real(p.phi(), order);
    let im = |c: C| C::new(c.im, 0.0);
    for a in 0..3 {
        out.g[a] = im(log.g[a]);
        for b in 0..3 {
            out.h[a][b] = im(log.h[a][b]);
            for c in 0..3 {
                out.t[a][b][c] = im(log.t[a][b][c]);
            }
        }
    }
    Ok(out.truncate(order))
}

/// Jet of the Koranyi norm `((x^2+y^2)^2 + 16 z^2)^(1/4)`.
pub fn koranyi_jet(p: &Point, order: u8) -> Result<Jet> {
    if p.is_origin() {
        if order == 0 {
            return Ok(Jet::real(0.0, 0));
        }
        return Err(singular("Koranyi norm derivative", p));
    }
    let [x, y, z] = Jet::coords(p.to_array(), order);
    let r2 = x * x + y * y;
    Ok((r2 * r2 + z * z * 16.0).powf(0.25))
}

fn bump(u: Jet, power: u32) -> Jet {
    // (1 - u^2)^power
    let one_minus = (u * u) * -1.0 + 1.0;
    let mut acc = Jet::real(1.0, u.order);
    for _ in 0..power {
        acc = acc * one_minus;
    }
    acc
}

fn ipow(j: Jet, n: u32) -> Jet {
    let mut acc = Jet::real(1.0, j.order);
    for _ in 0..n {
        acc = acc * j;
    }
    acc
}

impl FieldExpr {
    pub fn constant(v: f64) -> Self {
        FieldExpr::Constant { re: v, im: 0.0 }
    }

    pub fn scaled(self, s: f64) -> Self {
        FieldExpr::Scale {
            re: s,
            im: 0.0,
            expr: Box::new(self),
        }
    }

    pub fn times(self, other: FieldExpr) -> Self {
        FieldExpr::Product {
            factors: vec![self, other],
        }
    }

    pub fn plus(self, other: FieldExpr) -> Self {
        FieldExpr::Sum {
            terms: vec![self, other],
        }
    }

    pub fn jet(&self, p: &Point, order: u8) -> Result<Jet> {
        use FieldExpr::*;
        let coords = || Jet::coords(p.to_array(), order);
        Ok(match self {
            Constant { re, im } => Jet::constant(C::new(*re, *im), order),
            X => coords()[0],
            Y => coords()[1],
            Z => coords()[2],
            Radius => radius_jet(p, order)?,
            Angle => angle_jet(p, order)?,
            Koranyi => koranyi_jet(p, order)?,
            Polynomial { terms } => {
                let [x, y, z] = coords();
                let mut acc = Jet::real(0.0, order);
                for m in terms {
                    let t = ipow(x, m.powers[0]) * ipow(y, m.powers[1]) * ipow(z, m.powers[2]);
                    acc = acc + t * m.coef;
                }
                acc
            }
            RadialBump {
                radius,
                power,
                coeffs,
            } => {
                if p.r() >= *radius {
                    Jet::real(0.0, order)
                } else {
                    let u2 = radius_sq_jet(p, order) * (1.0 / (radius * radius));
                    let one_minus = u2 * -1.0 + 1.0;
                    let mut b = Jet::real(1.0, order);
                    for _ in 0..*power {
                        b = b * one_minus;
                    }
                    let mut poly = Jet::real(0.0, order);
                    let mut u2k = Jet::real(1.0, order);
                    for c in coeffs {
                        poly = poly + u2k * *c;
                        u2k = u2k * u2;
                    }
                    b * poly
                }
            }
            AnnularBump {
                center,
                halfwidth,
                power,
            } => {
                let r = p.r();
                if (r - center).abs() >= *halfwidth {
                    Jet::real(0.0, order)
                } else {
                    let u = (radius_jet(p, order)? + (-center)) * (1.0 / halfwidth);
                    bump(u, *power)
                }
            }
            AxialBump {
                center,
                halfwidth,
                power,
            } => {
                if (p.z - center).abs() >= *halfwidth {
                    Jet::real(0.0, order)
                } else {
                    let u = (coords()[2] + (-center)) * (1.0 / halfwidth);
                    bump(u, *power)
                }
            }
            Sum { terms } => {
                let mut acc = Jet::real(0.0, order);
                for t in terms {
                    acc = acc + t.jet(p, order)?;
                }
                acc
            }
            Product { factors } => {
                let mut acc = Jet::real(1.0, order);
                for f in factors {
                    acc = acc * f.jet(p, order)?;
                }
                acc
            }
            Scale { re, im, expr } => expr.jet(p, order)?.scale(C::new(*re, *im)),
            Pow { base, exponent } => {
                let b = base.jet(p, order)?;
                if !(b.v.re > 0.0) || b.v.im != 0.0 {
                    return Err(singular("non-positive base of a real power", p));
                }
                b.powf(*exponent)
            }
            Exp { arg } => arg.jet(p, order)?.exp(),
            Cos { arg } => arg.jet(p, order)?.cos(),
            Sin { arg } => arg.jet(p, order)?.sin(),
            Atan { arg } => arg.jet(p, order)?.atan(),
        })
    }
}
