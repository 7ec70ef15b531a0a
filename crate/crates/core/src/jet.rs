//! Truncated third-order Taylor jets in the Cartesian coordinates (x, y, z).
//!
//! A [`Jet`] carries the value of a complex scalar together with all partial
//! derivatives up to its `order` (at most 3). Arithmetic propagates them by the
//! Leibniz and chain rules, so a closed-form expression built from jets yields
//! exact derivatives without symbolic manipulation. Entries above `order` are
//! kept at zero and must not be read.

use num_complex::Complex64 as C;
use std::ops::{Add, Mul, Neg, Sub};

pub const MAX_ORDER: u8 = 3;

const Z: C = C { re: 0.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub order: u8,
    pub v: C,
    /// First partials `[d/dx, d/dy, d/dz]`.
    pub g: [C; 3],
    /// Hessian, symmetric.
    pub h: [[C; 3]; 3],
    /// Third partials, fully symmetric.
    pub t: [[[C; 3]; 3]; 3],
}

impl Jet {
    pub fn constant(v: C, order: u8) -> Self {
        Jet {
            order,
            v,
            g: [Z; 3],
            h: [[Z; 3]; 3],
            t: [[[Z; 3]; 3]; 3],
        }
    }

    pub fn real(v: f64, order: u8) -> Self {
        Self::constant(C::new(v, 0.0), order)
    }

    /// The coordinate function `x_i` evaluated at `value`.
    pub fn coord(i: usize, value: f64, order: u8) -> Self {
        let mut j = Self::real(value, order);
        if order >= 1 {
            j.g[i] = C::new(1.0, 0.0);
        }
        j
    }

    /// Jets of `(x, y, z)` at a point.
    pub fn coords(p: [f64; 3], order: u8) -> [Jet; 3] {
        [
            Self::coord(0, p[0], order),
            Self::coord(1, p[1], order),
            Self::coord(2, p[2], order),
        ]
    }

    pub fn truncate(mut self, order: u8) -> Self {
        if order >= self.order {
            return self;
        }
        self.order = order;
        if order < 3 {
            self.t = [[[Z; 3]; 3]; 3];
        }
        if order < 2 {
            self.h = [[Z; 3]; 3];
        }
        if order < 1 {
            self.g = [Z; 3];
        }
        self
    }

    /// Partial derivative along coordinate `i`; the order drops by one.
    pub fn deriv(&self, i: usize) -> Jet {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let mut out = Jet::constant(self.g[i], self.order - 1);
        if out.order >= 1 {
            out.g = self.h[i];
        }
        if out.order >= 2 {
            out.h = self.t[i];
        }
        out
    }

    pub fn conj(&self) -> Jet {
        let mut out = *self;
        out.v = out.v.conj();
        for a in 0..3 {
            out.g[a] = out.g[a].conj();
            for b in 0..3 {
                out.h[a][b] = out.h[a][b].conj();
                for c in 0..3 {
                    out.t[a][b][c] = out.t[a][b][c].conj();
                }
            }
        }
        out
    }

    pub fn scale(&self, s: C) -> Jet {
        let mut out = *self;
        out.v *= s;
        for a in 0..3 {
            out.g[a] *= s;
            for b in 0..3 {
                out.h[a][b] *= s;
                for c in 0..3 {
                    out.t[a][b][c] *= s;
                }
            }
        }
        out
    }

    /// Applies a univariate function given its value and first three
    /// derivatives at `self.v`.
    pub fn chain(&self, f: [C; 4]) -> Jet {
        let u = self;
        let mut out = Jet::constant(f[0], u.order);
        if u.order >= 1 {
            for a in 0..3 {
                out.g[a] = f[1] * u.g[a];
            }
        }
        if u.order >= 2 {
            for a in 0..3 {
                for b in 0..3 {
                    out.h[a][b] = f[2] * u.g[a] * u.g[b] + f[1] * u.h[a][b];
                }
            }
        }
        if u.order >= 3 {
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        out.t[a][b][c] = f[3] * u.g[a] * u.g[b] * u.g[c]
                            + f[2] * (u.h[a][b] * u.g[c] + u.h[a][c] * u.g[b] + u.h[b][c] * u.g[a])
                            + f[1] * u.t[a][b][c];
                    }
                }
            }
        }
        out
    }

    /// Same as [`Jet::chain`] for a real function of a real-valued jet.
    pub fn chain_real(&self, f: [f64; 4]) -> Jet {
        self.chain(f.map(|x| C::new(x, 0.0)))
    }

    pub fn exp(&self) -> Jet {
        let e = self.v.exp();
        self.chain([e, e, e, e])
    }

    /// `self^p` for a real-valued jet with positive value.
    pub fn powf(&self, p: f64) -> Jet {
        let x = self.v.re;
        self.chain_real([
            x.powf(p),
            p * x.powf(p - 1.0),
            p * (p - 1.0) * x.powf(p - 2.0),
            p * (p - 1.0) * (p - 2.0) * x.powf(p - 3.0),
        ])
    }

    pub fn sqrt(&self) -> Jet {
        self.powf(0.5)
    }

    pub fn recip(&self) -> Jet {
        let x = self.v;
        let r = x.inv();
        self.chain([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn ln(&self) -> Jet {
        let x = self.v.re;
        self.chain_real([x.ln(), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x)])
    }

    pub fn atan(&self) -> Jet {
        let x = self.v.re;
        let d = 1.0 + x * x;
        self.chain_real([
            x.atan(),
            1.0 / d,
            -2.0 * x / (d * d),
            (6.0 * x * x - 2.0) / (d * d * d),
        ])
    }

    pub fn sin(&self) -> Jet {
        let x = self.v.re;
        self.chain_real([x.sin(), x.cos(), -x.sin(), -x.cos()])
    }

    pub fn cos(&self) -> Jet {
        let x = self.v.re;
        self.chain_real([x.cos(), -x.sin(), -x.cos(), x.sin()])
    }

    /// `i * self`.
    pub fn mul_i(&self) -> Jet {
        self.scale(C::new(0.0, 1.0))
    }

    /// Jet of `p -> outer(inner_0(p), inner_1(p), inner_2(p))`, where `outer`
    /// is the jet of the outer map at the inner value point.
    pub fn compose(outer: &Jet, inner: &[Jet; 3]) -> Jet {
        let order = inner
            .iter()
            .map(|j| j.order)
            .min()
            .unwrap()
            .min(outer.order);
        let k = outer;
        let q = inner;
        let mut out = Jet::constant(k.v, order);
        if order >= 1 {
            for a in 0..3 {
                let mut s = Z;
                for i in 0..3 {
                    s += k.g[i] * q[i].g[a];
                }
                out.g[a] = s;
            }
        }
        if order >= 2 {
            for a in 0..3 {
                for b in a..3 {
                    let mut s = Z;
                    for i in 0..3 {
                        s += k.g[i] * q[i].h[a][b];
                        for j in 0..3 {
                            s += k.h[i][j] * q[i].g[a] * q[j].g[b];
                        }
                    }
                    out.h[a][b] = s;
                    out.h[b][a] = s;
                }
            }
        }
        if order >= 3 {
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        let mut s = Z;
                        for i in 0..3 {
                            s += k.g[i] * q[i].t[a][b][c];
                            for j in 0..3 {
                                s += k.h[i][j]
                                    * (q[i].h[a][b] * q[j].g[c]
                                        + q[i].h[a][c] * q[j].g[b]
                                        + q[i].h[b][c] * q[j].g[a]);
                                for l in 0..3 {
                                    s += k.t[i][j][l] * q[i].g[a] * q[j].g[b] * q[l].g[c];
                                }
                            }
                        }
                        out.t[a][b][c] = s;
                    }
                }
            }
        }
        out
    }

    /// Jet of `p -> f(s_0 x, s_1 y, s_2 z)` given the jet of `f` at the
    /// scaled point.
    pub fn scale_coords(&self, s: [f64; 3]) -> Jet {
        let mut out = *self;
        for a in 0..3 {
            out.g[a] *= s[a];
            for b in 0..3 {
                out.h[a][b] *= s[a] * s[b];
                for c in 0..3 {
                    out.t[a][b][c] *= s[a] * s[b] * s[c];
                }
            }
        }
        out
    }

    /// Largest modulus over all stored entries.
    pub fn max_abs(&self) -> f64 {
        let mut m = self.v.norm();
        if self.order >= 1 {
            for a in 0..3 {
                m = m.max(self.g[a].norm());
            }
        }
        if self.order >= 2 {
            for a in 0..3 {
                for b in 0..3 {
                    m = m.max(self.h[a][b].norm());
                }
            }
        }
        if self.order >= 3 {
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        m = m.max(self.t[a][b][c].norm());
                    }
                }
            }
        }
        m
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let order = self.order.min(o.order);
        let mut out = Jet::constant(self.v + o.v, order);
        if order >= 1 {
            for a in 0..3 {
                out.g[a] = self.g[a] + o.g[a];
            }
        }
        if order >= 2 {
            for a in 0..3 {
                for b in 0..3 {
                    out.h[a][b] = self.h[a][b] + o.h[a][b];
                }
            }
        }
        if order >= 3 {
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        out.t[a][b][c] = self.t[a][b][c] + o.t[a][b][c];
                    }
                }
            }
        }
        out
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(C::new(-1.0, 0.0))
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let (f, g) = (&self, &o);
        let order = f.order.min(g.order);
        let mut out = Jet::constant(f.v * g.v, order);
        if order >= 1 {
            for a in 0..3 {
                out.g[a] = f.g[a] * g.v + f.v * g.g[a];
            }
        }
        if order >= 2 {
            for a in 0..3 {
                for b in 0..3 {
                    out.h[a][b] =
                        f.h[a][b] * g.v + f.g[a] * g.g[b] + f.g[b] * g.g[a] + f.v * g.h[a][b];
                }
            }
        }
        if order >= 3 {
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        out.t[a][b][c] = f.t[a][b][c] * g.v
                            + f.h[a][b] * g.g[c]
                            + f.h[a][c] * g.g[b]
                            + f.h[b][c] * g.g[a]
                            + f.g[a] * g.h[b][c]
                            + f.g[b] * g.h[a][c]
                            + f.g[c] * g.h[a][b]
                            + f.v * g.t[a][b][c];
                    }
                }
            }
        }
        out
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, s: f64) -> Jet {
        self.scale(C::new(s, 0.0))
    }
}

impl Mul<C> for Jet {
    type Output = Jet;
    fn mul(self, s: C) -> Jet {
        self.scale(s)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, s: f64) -> Jet {
        self.v += s;
        self
    }
}
