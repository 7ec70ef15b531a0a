//! The potential `A = -(Y rho / rho) dx + (X rho / rho) dy` is exact off the
//! origin: `A = -d_H g` with the branch-wise gauge function `g` below.

use crate::error::{contract, Result};
use crate::forms::{gauge_shift, GaugeFunction, Horizontal1Form, Representation};
use crate::heisenberg::{koranyi_jet, radius_sq_jet, Point, ScalarField, VectorField};
use crate::jet::Jet;
use serde::Serialize;
use std::f64::consts::FRAC_PI_4;

/// `g = atan(r^2 / 4z) / 2` for `z > 0`, `pi/4` at `z = 0`, and
/// `atan(r^2 / 4z) / 2 + pi/2` for `z < 0`. At `z = 0` the jet is taken from
/// the equivalent form `pi/4 - atan(4z / r^2) / 2`.
pub fn xiao_gauge_jet(p: &Point, order: u8) -> Result<Jet> {
    contract(!p.is_origin(), || {
        "the gauge function is undefined at the origin".into()
    })?;
    let z = Jet::coord(2, p.z, order);
    if p.z == 0.0 {
        contract(p.r() > 0.0, || "unreachable: origin excluded".into())?;
        let t = (z * 4.0 * radius_sq_jet(p, order).recip()).atan();
        return Ok(t * -0.5 + FRAC_PI_4);
    }
    let base = (radius_sq_jet(p, order) * (z * 4.0).recip()).atan() * 0.5;
    Ok(if p.z > 0.0 {
        base
    } else {
        base + 2.0 * FRAC_PI_4
    })
}

pub fn xiao_gauge(p: &Point) -> Result<f64> {
    Ok(xiao_gauge_jet(p, 0)?.v.re)
}

/// The potential `A` as a horizontal 1-form.
pub fn xiao_potential() -> Horizontal1Form {
    let coef = |i: usize| {
        ScalarField::from_jet_fn(move |p, order| {
            let rho = koranyi_jet(p, order + 1)?;
            let field = if i == 0 {
                VectorField::Y
            } else {
                VectorField::X
            };
            let d = field.apply(p, &rho)?;
            let c = d * rho.truncate(order).recip();
            Ok(if i == 0 { -c } else { c })
        })
    };
    Horizontal1Form::cartesian(coef(0), coef(1))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct XiaoReport {
    /// `|Xg - Y rho / rho|`.
    pub x_residual: f64,
    /// `|Yg + X rho / rho|`.
    pub y_residual: f64,
    /// `|A + d_H g|` through the forms module.
    pub gauge_residual: f64,
}

impl XiaoReport {
    pub fn max(&self) -> f64 {
        self.x_residual
            .max(self.y_residual)
            .max(self.gauge_residual)
    }
}

pub fn xiao_gauge_check(p: &Point) -> Result<XiaoReport> {
    let g = xiao_gauge_jet(p, 1)?;
    let rho = koranyi_jet(p, 1)?;
    let xg = VectorField::X.apply(p, &g)?.v;
    let yg = VectorField::Y.apply(p, &g)?.v;
    let xr = VectorField::X.apply(p, &rho)?.v / rho.v;
    let yr = VectorField::Y.apply(p, &rho)?.v / rho.v;
    let shifted = gauge_shift(
        &xiao_potential(),
        &GaugeFunction::new(ScalarField::from_jet_fn(xiao_gauge_jet)),
    );
    let [a, b] = shifted.eval(p, Representation::Cartesian)?;
    Ok(XiaoReport {
        x_residual: (xg - yr).norm(),
        y_residual: (yg + xr).norm(),
        gauge_residual: (a.norm_sqr() + b.norm_sqr()).sqrt(),
    })
}

/// One-sided values `g(x, y, +-delta)` and the branch value at `z = 0`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ContinuityReport {
    pub above: f64,
    pub at: f64,
    pub below: f64,
    pub gap: f64,
}

pub fn xiao_continuity(x: f64, y: f64, delta: f64) -> Result<ContinuityReport> {
    let above = xiao_gauge(&Point::new(x, y, delta))?;
    let at = xiao_gauge(&Point::new(x, y, 0.0))?;
    let below = xiao_gauge(&Point::new(x, y, -delta))?;
    Ok(ContinuityReport {
        above,
        at,
        below,
        gap: (above - at).abs().max((below - at).abs()),
    })
}
