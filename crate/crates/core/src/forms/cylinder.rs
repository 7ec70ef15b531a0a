//! Radial constructions for magnetic fields: the angular coefficient of a
//! closed field, the radial primitive, cylinder support, flux and the two
//! explicit gauges.
//!
//! Integrals along the ray through a point are written on `[0, 1]` (radius
//! `s r`, or `s r0`) and evaluated on jets, so the results carry exact
//! derivatives with respect to the point. Double integrals of the form
//! `int_0^r t int_t^{r0} f` are reduced to single ones by exchanging the
//! order of integration.

use super::{order_check, Horizontal1Form, Horizontal2Form, Representation};
use crate::error::{contract, Error, Result};
use crate::heisenberg::{radius_jet, radius_sq_jet, Point, ScalarField, VectorField};
use crate::jet::Jet;
use crate::quadrature::{try_integrate_pieces, QuadOptions};
use serde::Serialize;
use std::f64::consts::PI;

const CYL: Representation = Representation::Cylindrical;
/// Absolute tolerance for support and flux-independence verdicts.
pub const SUPPORT_TOL: f64 = 1e-8;

fn opts() -> QuadOptions {
    QuadOptions::default()
}

/// Breakpoints on `[0, 1]` for a ray through radius `r`, split where the ray
/// leaves the support cylinder.
fn ray_breaks(r: f64, r0: Option<f64>) -> Vec<f64> {
    match r0 {
        Some(r0) if r > r0 && r0 > 0.0 => vec![0.0, r0 / r, 1.0],
        _ => vec![0.0, 1.0],
    }
}

fn radial_b1(b: &Horizontal2Form, q: &Point, order: u8) -> Result<Jet> {
    b.component(q, order, CYL, 0)
}

/// Jet at `p` of `q -> field(map(q))`.
fn pullback(outer: impl FnOnce(&Point) -> Result<Jet>, map: [Jet; 3]) -> Result<Jet> {
    let q = Point::new(map[0].v.re, map[1].v.re, map[2].v.re);
    Ok(Jet::compose(&outer(&q)?, &map))
}

/// `d/dphi = x d/dy - y d/dx` applied to a jet at `q` (order drops by one).
fn dphi(q: &Point, j: &Jet) -> Jet {
    let [x, y, _] = Jet::coords(q.to_array(), j.order - 1);
    x * j.deriv(1) - y * j.deriv(0)
}

/// Angular coefficient of the closed field with radial coefficient `b1`:
/// `b_2(r, phi, z) = (1/r) int_0^r (Phi b_1)(t, phi, z) t dt`.
pub fn b2_from_b1(b1: &ScalarField, support_radius: Option<f64>) -> ScalarField {
    let b1 = b1.clone();
    ScalarField::from_jet_fn(move |p, k| {
        let r = p.r();
        if r == 0.0 {
            return if k == 0 {
                Ok(Jet::real(0.0, 0))
            } else {
                Err(Error::SingularFrame)
            };
        }
        order_check(k, 1, "b_2 reconstructed from b_1")?;
        let integral = try_integrate_pieces(
            |s| {
                let q = p.scale_radius(s);
                let j = b1.jet(&q, k + 1)?;
                Ok(VectorField::Phi.apply(&q, &j)?.scale_coords([s, s, 1.0]) * s)
            },
            &ray_breaks(r, support_radius),
            opts(),
        )?;
        Ok(radius_jet(p, k)? * integral)
    })
}

/// Radial primitive `b(r, phi, z) = -int_r^{r0} b_1(t, phi, z) dt`, zero for
/// `r >= r0`. Needs the declared support radius.
pub fn primitive(b: &Horizontal2Form) -> Result<ScalarField> {
    let r0 = b
        .support_radius
        .ok_or_else(|| Error::Contract("the primitive needs a declared support radius".into()))?;
    let b = b.clone();
    Ok(ScalarField::from_jet_fn(move |p, k| {
        let r = p.r();
        if r >= r0 {
            return Ok(Jet::real(0.0, k));
        }
        if r == 0.0 {
            return Err(Error::SingularFrame);
        }
        let [x, y, z] = Jet::coords(p.to_array(), k);
        let rj = radius_jet(p, k)?;
        let ir = rj.recip();
        let len = rj * -1.0 + r0;
        let integral = try_integrate_pieces(
            |s| {
                let t = rj * (1.0 - s) + r0 * s;
                let scale = t * ir;
                pullback(|q| radial_b1(&b, q, k), [x * scale, y * scale, z])
            },
            &[0.0, 1.0],
            opts(),
        )?;
        Ok(-(len * integral))
    }))
}

/// Angular and vertical sample positions for support and flux checks.
#[derive(Clone, Debug, Serialize)]
pub struct SupportSamples {
    pub phis: Vec<f64>,
    pub zs: Vec<f64>,
}

impl Default for SupportSamples {
    fn default() -> Self {
        SupportSamples {
            phis: (0..8)
                .map(|i| -PI + 2.0 * PI * (i as f64 + 0.37) / 8.0)
                .collect(),
            zs: vec![-1.5, -0.4, 0.0, 0.3, 1.1],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportReport {
    pub r0: f64,
    /// Largest `|b_1|` sampled outside the cylinder (the primitive vanishes
    /// there iff this does).
    pub primitive_outside_max: f64,
    /// Largest `|int_0^{r0} Z b(t) t dt|`.
    pub moment_max: f64,
    /// Largest `|b_2|` sampled outside the cylinder (diagnostic).
    pub b2_outside_max: f64,
    /// Largest `|d/dphi int_0^{r0} b_1 dt|`: the primitive's angular
    /// variation on the center line (diagnostic).
    pub axis_variation_max: f64,
    pub tolerance: f64,
    pub supported: bool,
}

/// Tests cylinder support through the primitive: it must vanish for
/// `r > r0` and satisfy `int_0^{r0} Z b(t, phi, z) t dt = 0` at the sampled
/// `(phi, z)`. The moment is evaluated as `-int_0^{r0} Z b_1(s) s^2/2 ds`.
pub fn support_check(
    b: &Horizontal2Form,
    r0: f64,
    samples: &SupportSamples,
) -> Result<SupportReport> {
    contract(r0 > 0.0, || {
        format!("support radius must be positive, got {r0}")
    })?;
    let mut outside: f64 = 0.0;
    let mut b2_out: f64 = 0.0;
    let mut moment: f64 = 0.0;
    let mut axis: f64 = 0.0;
    for &phi in &samples.phis {
        for &z in &samples.zs {
            for f in [1.001, 1.05, 1.3, 2.0, 4.0] {
                let v = b.eval(&Point::from_cylindrical(f * r0, phi, z), CYL)?;
                outside = outside.max(v[0].norm());
                b2_out = b2_out.max(v[1].norm());
            }
            let at = |s: f64| Point::from_cylindrical(s, phi, z);
            let m = try_integrate_pieces(
                |s| Ok(radial_b1(b, &at(s), 1)?.g[2] * (-0.5 * s * s)),
                &[0.0, r0],
                opts(),
            )?;
            moment = moment.max(m.norm());
            let a = try_integrate_pieces(
                |s| {
                    let q = at(s);
                    Ok(dphi(&q, &radial_b1(b, &q, 1)?).v)
                },
                &[0.0, r0],
                opts(),
            )?;
            axis = axis.max(a.norm());
        }
    }
    Ok(SupportReport {
        r0,
        primitive_outside_max: outside,
        moment_max: moment,
        b2_outside_max: b2_out,
        axis_variation_max: axis,
        tolerance: SUPPORT_TOL,
        supported: outside <= SUPPORT_TOL && moment <= SUPPORT_TOL,
    })
}

/// Mean over the circle by the trapezoidal rule, doubling the node count
/// until two successive values agree.
fn circle_mean(mut f: impl FnMut(f64) -> Result<f64>) -> Result<(f64, usize)> {
    let mean = |n: usize, f: &mut dyn FnMut(f64) -> Result<f64>| -> Result<f64> {
        let mut s = 0.0;
        for i in 0..n {
            s += f(-PI + 2.0 * PI * (i as f64 + 0.5) / n as f64)?;
        }
        Ok(s / n as f64)
    };
    let mut n = 16;
    let mut prev = mean(n, &mut f)?;
    while n < 4096 {
        n *= 2;
        let next = mean(n, &mut f)?;
        if (next - prev).abs() <= 1e-11 * next.abs().max(1.0) {
            return Ok((next, n));
        }
        prev = next;
    }
    Err(Error::Integration {
        estimate: prev,
        error: f64::NAN,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FluxSample {
    pub z: f64,
    /// `-(1/2pi) int int b_1 s^2/2 ds dphi`.
    pub direct: f64,
    /// `(1/2pi) int int b(t) t dt dphi` with the primitive evaluated by quadrature.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nested: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FluxReport {
    /// Flux at `z = 0`.
    pub value: f64,
    pub samples: Vec<FluxSample>,
    /// Largest difference between sampled heights.
    pub spread: f64,
    /// Difference between the two evaluation routes at `z = 0`.
    pub route_discrepancy: f64,
}

fn flux_at(b: &Horizontal2Form, r0: f64, z: f64) -> Result<(f64, usize)> {
    let (m, n) = circle_mean(|phi| {
        let v = try_integrate_pieces(
            |s| Ok(radial_b1(b, &Point::from_cylindrical(s, phi, z), 0)?.v.re * (0.5 * s * s)),
            &[0.0, r0],
            opts(),
        )?;
        Ok(v)
    })?;
    Ok((-m, n))
}

fn flux_nested(prim: &ScalarField, r0: f64, z: f64, n_phi: usize) -> Result<f64> {
    let mut s = 0.0;
    for i in 0..n_phi {
        let phi = -PI + 2.0 * PI * (i as f64 + 0.5) / n_phi as f64;
        s += try_integrate_pieces(
            |t| Ok(prim.eval(&Point::from_cylindrical(t, phi, z))?.re * t),
            &[0.0, r0],
            QuadOptions {
                abs_tol: 1e-9,
                rel_tol: 1e-9,
            },
        )?;
    }
    Ok(s / n_phi as f64)
}

/// Flux of a cylinder-supported field, verified to be independent of the
/// sampled heights. The field must carry a support radius and pass
/// [`support_check`]. The nested route through the primitive is evaluated
/// at `z = 0` only, as a cross-check.
pub fn flux(b: &Horizontal2Form, z_samples: &[f64]) -> Result<FluxReport> {
    flux_with(b, z_samples, true)
}

pub(crate) fn flux_with(
    b: &Horizontal2Form,
    z_samples: &[f64],
    cross_check: bool,
) -> Result<FluxReport> {
    let r0 = b
        .support_radius
        .ok_or_else(|| Error::Contract("flux needs a declared support radius".into()))?;
    let sc = support_check(b, r0, &SupportSamples::default())?;
    contract(sc.supported, || {
        format!(
            "field is not supported in the cylinder r <= {r0} (outside {:e}, moment {:e})",
            sc.primitive_outside_max, sc.moment_max
        )
    })?;
    let mut zs = vec![0.0];
    zs.extend(z_samples.iter().copied().filter(|z| *z != 0.0));
    let mut samples = Vec::with_capacity(zs.len());
    let mut route_discrepancy = 0.0;
    for &z in &zs {
        let (direct, n) = flux_at(b, r0, z)?;
        let nested = if cross_check && z == 0.0 {
            let v = flux_nested(&primitive(b)?, r0, z, n)?;
            route_discrepancy = (v - direct).abs();
            Some(v)
        } else {
            None
        };
        samples.push(FluxSample { z, direct, nested });
    }
    let value = samples[0].direct;
    let spread = samples
        .iter()
        .map(|s| (s.direct - value).abs())
        .fold(0.0, f64::max);
    contract(spread <= SUPPORT_TOL, || {
        format!("flux depends on z (spread {spread:e})")
    })?;
    Ok(FluxReport {
        value,
        samples,
        spread,
        route_discrepancy,
    })
}

/// Poincaré gauge `A = alpha dphi` with
/// `alpha = int_0^r int_0^t b_1(s) ds t dt = r^3 int_0^1 (1 - s^2)/2 b_1(s r) ds`,
/// returned as `alpha_1 = 0`, `alpha_2 = alpha / r`.
pub fn poincare_gauge(b: &Horizontal2Form) -> Horizontal1Form {
    let b = b.clone();
    let r0 = b.support_radius;
    Horizontal1Form::derived(CYL, b.mode(), move |p, k| {
        let r = p.r();
        if r == 0.0 {
            return Err(Error::SingularFrame);
        }
        let integral = try_integrate_pieces(
            |s| {
                Ok(
                    radial_b1(&b, &p.scale_radius(s), k)?.scale_coords([s, s, 1.0])
                        * (0.5 * (1.0 - s * s)),
                )
            },
            &ray_breaks(r, r0),
            opts(),
        )?;
        Ok([Jet::real(0.0, k), radius_sq_jet(p, k) * integral])
    })
}

/// Potential `A = a dphi` of a cylinder-supported field that equals
/// `F_B dphi` outside the cylinder. `a` is the Poincaré potential shifted by
/// `d_H` of `-int_0^z b_inf` and by the angular gauge that removes its
/// exterior value `a_inf(phi)`:
///
/// `a = -int_0^r b_1 s^2/2 ds + (r^2/2) b(r) - int_0^z int_0^{r0} d_phi b_1 ds dz'
///      - a_inf(phi) + F_B`, with `a_inf(phi) = -int_0^{r0} b_1(s, phi, 0) s^2/2 ds`.
pub fn exterior_ab_gauge(b: &Horizontal2Form, r0: f64) -> Result<Horizontal1Form> {
    let b = b.clone().with_support_radius(r0);
    let sc = support_check(&b, r0, &SupportSamples::default())?;
    contract(sc.supported, || {
        format!(
            "exterior gauge needs a field supported in r <= {r0} (outside {:e}, moment {:e})",
            sc.primitive_outside_max, sc.moment_max
        )
    })?;
    let fb = flux_with(&b, &[], false)?.value;
    let prim = primitive(&b)?;
    Ok(Horizontal1Form::derived(CYL, b.mode(), move |p, k| {
        order_check(k, 1, "the exterior gauge")?;
        let r = p.r();
        if r == 0.0 {
            return Err(Error::SingularFrame);
        }
        let [x, y, z] = Jet::coords(p.to_array(), k);
        let rj = radius_jet(p, k)?;
        let ir = rj.recip();
        let r2 = radius_sq_jet(p, k);
        let t1 = try_integrate_pieces(
            |s| Ok(radial_b1(&b, &p.scale_radius(s), k)?.scale_coords([s, s, 1.0]) * (0.5 * s * s)),
            &ray_breaks(r, Some(r0)),
            opts(),
        )?;
        let t1 = -(r2 * rj * t1);
        let t2 = r2 * prim.jet(p, k)? * 0.5;
        let on_ray = |s: f64, zmap: Jet| [x * ir * (s * r0), y * ir * (s * r0), zmap];
        let t3 = if p.z == 0.0 && k == 0 {
            Jet::real(0.0, 0)
        } else {
            let inner = try_integrate_pieces(
                |tau| {
                    try_integrate_pieces(
                        |s| {
                            pullback(
                                |q| Ok(dphi(q, &radial_b1(&b, q, k + 1)?)),
                                on_ray(s, z * tau),
                            )
                        },
                        &[0.0, 1.0],
                        opts(),
                    )
                },
                &[0.0, 1.0],
                opts(),
            )?;
            -(z * inner * r0)
        };
        let a_inf = try_integrate_pieces(
            |s| {
                Ok(
                    pullback(|q| radial_b1(&b, q, k), on_ray(s, Jet::real(0.0, k)))?
                        * (0.5 * s * s),
                )
            },
            &[0.0, 1.0],
            opts(),
        )?;
        let a_inf = a_inf * (-r0.powi(3));
        let a = t1 + t2 + t3 - a_inf + fb;
        Ok([Jet::real(0.0, k), a * ir])
    }))
}

/// Both sides of `b_2 = Phi b - (1/r) int_0^r Z b(t) t dt` at `p`, the
/// right side computed from the primitive.
pub fn b2_primitive_identity(b: &Horizontal2Form, p: &Point) -> Result<(f64, f64)> {
    let r0 = b
        .support_radius
        .ok_or_else(|| Error::Contract("the primitive needs a declared support radius".into()))?;
    let (r, phi, z) = p.cylindrical();
    let b2 = b.eval(p, CYL)?[1].re;
    let prim = primitive(b)?;
    let phi_prim = VectorField::Phi.apply(p, &prim.jet(p, 1)?)?.v.re;
    let m = try_integrate_pieces(
        |s| {
            let w = s.min(r);
            Ok(radial_b1(b, &Point::from_cylindrical(s, phi, z), 1)?.g[2].re * (0.5 * w * w))
        },
        &[0.0, r.min(r0), r0],
        opts(),
    )?;
    Ok((b2, phi_prim + m / r))
}
