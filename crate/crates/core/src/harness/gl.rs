//! Folland–Stein and Garofalo–Lanconelli quotients, the completed-square
//! identity and the improved inequality under symmetry.

use super::cutoff::CutoffProfile;
use crate::error::{contract, Error, Result};
use crate::fibers::dist_to_integers;
use crate::heisenberg::{koranyi_jet, radius_sq_jet, Point, ScalarField, VectorField, VolumeRule};
use crate::jet::Jet;
use num_complex::Complex64 as C;
use serde::Serialize;

fn require_off_axis(p: &Point) -> Result<()> {
    contract(p.r() > 0.0, || {
        format!("point ({}, {}, {}) lies on the center line", p.x, p.y, p.z)
    })
}

/// `atan(4z / r^2)` as a jet.
fn phase_angle(p: &Point, order: u8) -> Result<Jet> {
    require_off_axis(p)?;
    let z = Jet::coord(2, p.z, order);
    Ok((z * 4.0 * radius_sq_jet(p, order).recip()).atan())
}

/// `f_alpha = -(alpha/2) atan(4z / r^2)`.
pub fn f_alpha_jet(alpha: f64, p: &Point, order: u8) -> Result<Jet> {
    Ok(phase_angle(p, order)? * (-0.5 * alpha))
}

/// `w_alpha = exp(i (alpha/2) atan(4z / r^2))`.
pub fn w_alpha_jet(alpha: f64, p: &Point, order: u8) -> Result<Jet> {
    Ok((phase_angle(p, order)? * C::new(0.0, 0.5 * alpha)).exp())
}

fn horizontal(p: &Point, j: &Jet) -> Result<[C; 2]> {
    Ok([VectorField::X.apply(p, j)?.v, VectorField::Y.apply(p, j)?.v])
}

/// `| |grad f|^2 + alpha Z f + alpha^2 r^2 / rho^4 |`.
pub fn f_alpha_identity(alpha: f64, p: &Point) -> Result<f64> {
    let f = f_alpha_jet(alpha, p, 1)?;
    let [xf, yf] = horizontal(p, &f)?;
    let lhs = xf.norm_sqr() + yf.norm_sqr() + alpha * f.g[2].re;
    let r2 = p.x * p.x + p.y * p.y;
    let rho4 = r2 * r2 + 16.0 * p.z * p.z;
    Ok((lhs + alpha * alpha * r2 / rho4).abs())
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RhoAlphaReport {
    /// `|grad rho_alpha - w_alpha (grad rho + i alpha grad^perp rho)|`.
    pub gradient: f64,
    /// `|d_z rho_alpha - w_alpha (d_z rho + 2 i alpha |grad rho|^2 / rho)|`.
    pub vertical: f64,
    /// `| |grad rho_alpha|^2 - (1 + alpha^2) |grad rho|^2 |`.
    pub modulus: f64,
    /// `| |w_alpha| - 1 |`.
    pub unimodular: f64,
}

impl RhoAlphaReport {
    pub fn max(&self) -> f64 {
        self.gradient
            .max(self.vertical)
            .max(self.modulus)
            .max(self.unimodular)
    }
}

/// Checks the derivatives of `rho_alpha = rho w_alpha` at `p`.
pub fn rho_alpha_gradient_check(alpha: f64, p: &Point) -> Result<RhoAlphaReport> {
    let rho = koranyi_jet(p, 1)?;
    let w = w_alpha_jet(alpha, p, 1)?;
    let ra = rho * w;
    let [xr, yr] = horizontal(p, &rho)?;
    let [xa, ya] = horizontal(p, &ra)?;
    let i = C::new(0.0, 1.0);
    // grad^perp rho = (-Y rho) X + (X rho) Y.
    let ex = w.v * (xr - i * alpha * yr);
    let ey = w.v * (yr + i * alpha * xr);
    let grad2 = xr.norm_sqr() + yr.norm_sqr();
    let ez = w.v * (rho.g[2] + 2.0 * i * alpha * grad2 / rho.v);
    Ok(RhoAlphaReport {
        gradient: ((xa - ex).norm_sqr() + (ya - ey).norm_sqr()).sqrt(),
        vertical: (ra.g[2] - ez).norm(),
        modulus: (xa.norm_sqr() + ya.norm_sqr() - (1.0 + alpha * alpha) * grad2).abs(),
        unimodular: (w.v.norm() - 1.0).abs(),
    })
}

/// `v_k = g(ln rho) / rho` with `g = 1` on `[-ln k, ln k]` and smooth ramps
/// `xi` over `[-(1 + ramp) ln k, -ln k]` and `[ln k, (1 + ramp) ln k]`; it
/// equals `rho^-1` on `1/k <= rho <= k`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FollandSteinSequence {
    pub k: u64,
    /// Ramp length in units of `ln k`.
    pub ramp: f64,
    pub xi: CutoffProfile,
}

pub const DEFAULT_RAMP: f64 = 2.0;

impl FollandSteinSequence {
    pub fn new(k: u64, xi: CutoffProfile) -> Result<Self> {
        Self::with_ramp(k, DEFAULT_RAMP, xi)
    }

    pub fn with_ramp(k: u64, ramp: f64, xi: CutoffProfile) -> Result<Self> {
        contract(k >= 2, || {
            format!("k = {k} leaves no plateau for the smoothing (need k >= 2)")
        })?;
        contract(ramp > 0.0 && ramp.is_finite(), || {
            format!("invalid ramp length {ramp}")
        })?;
        Ok(FollandSteinSequence { k, ramp, xi })
    }

    fn ln_k(&self) -> f64 {
        (self.k as f64).ln()
    }

    /// `[g, g', g'', g''']` at `s = ln rho`.
    pub fn profile(&self, s: f64) -> [f64; 4] {
        let l = self.ln_k();
        let w = self.ramp * l;
        if s.abs() <= l {
            [1.0, 0.0, 0.0, 0.0]
        } else if s < 0.0 {
            let d = self.xi.derivatives((s + l + w) / w);
            [d[0], d[1] / w, d[2] / (w * w), d[3] / (w * w * w)]
        } else {
            let d = self.xi.derivatives((l + w - s) / w);
            [d[0], -d[1] / w, d[2] / (w * w), -d[3] / (w * w * w)]
        }
    }

    /// Breakpoints in `s = ln rho` of the piecewise profile.
    pub fn log_breaks(&self) -> Vec<f64> {
        let l = self.ln_k();
        let w = self.ramp * l;
        let inner: Vec<f64> = self.xi.breaks().iter().map(|t| -l - w + t * w).collect();
        let mut b = inner.clone();
        b.extend(inner.iter().rev().map(|s| -s));
        b.dedup();
        b
    }

    pub fn v_jet(&self, p: &Point, order: u8) -> Result<Jet> {
        let rho = koranyi_jet(p, order)?;
        let g = rho.ln().chain_real(self.profile(rho.v.re.ln()));
        Ok(g * rho.recip())
    }

    pub fn v(&self) -> ScalarField {
        let s = *self;
        ScalarField::from_jet_fn(move |p, order| s.v_jet(p, order))
    }

    /// `u_k = v_k exp(i f_alpha)`.
    pub fn u(&self, alpha: f64) -> ScalarField {
        let s = *self;
        ScalarField::from_jet_fn(move |p, order| {
            let phase = (f_alpha_jet(alpha, p, order)? * C::new(0.0, 1.0)).exp();
            Ok(s.v_jet(p, order)? * phase)
        })
    }

    /// Koranyi-shell rule adapted to the profile (exact in `rho` for this
    /// family up to the Gauss order; `phi` integrated by symmetry).
    pub fn rule(&self) -> VolumeRule {
        VolumeRule::koranyi_shell(&self.log_breaks(), 16, 32, 1)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct QuotientReport {
    pub alpha: f64,
    pub k: u64,
    /// `int |grad v|^2`.
    pub kinetic: f64,
    /// `int v^2 (|grad f|^2 + alpha Z f)`, zero when no phase is applied.
    pub phase_term: f64,
    /// `int v^2 r^2 / rho^4`.
    pub denominator: f64,
    pub quotient: f64,
    pub target: f64,
}

/// Shared evaluation of `(int |grad v|^2 + int v^2 (|grad f|^2 + alpha Z f)) /
/// int v^2 r^2/rho^4`; `phase = None` gives the Garofalo–Lanconelli quotient.
fn quotient_pipeline(
    v: &ScalarField,
    phase: Option<f64>,
    rule: &VolumeRule,
) -> Result<(f64, f64, f64)> {
    let mut kinetic = 0.0;
    let mut phase_term = 0.0;
    let mut den = 0.0;
    for (p, w) in &rule.nodes {
        let j = v.jet(p, 1)?;
        let [xv, yv] = horizontal(p, &j)?;
        kinetic += w * (xv.norm_sqr() + yv.norm_sqr());
        let v2 = j.v.norm_sqr();
        if let Some(alpha) = phase {
            let f = f_alpha_jet(alpha, p, 1)?;
            let [xf, yf] = horizontal(p, &f)?;
            phase_term += w * v2 * (xf.norm_sqr() + yf.norm_sqr() + alpha * f.g[2].re);
        }
        let r2 = p.x * p.x + p.y * p.y;
        den += w * v2 * r2 / (r2 * r2 + 16.0 * p.z * p.z);
    }
    Ok((kinetic, phase_term, den))
}

/// Garofalo–Lanconelli quotient `int |grad v|^2 / int v^2 r^2 / rho^4`.
pub fn gl_quotient(v: &ScalarField, rule: &VolumeRule) -> Result<f64> {
    let (kinetic, _, den) = quotient_pipeline(v, None, rule)?;
    Ok(kinetic / den)
}

/// `<L_alpha u_k, u_k> / int |u_k|^2 r^2/rho^4` through the reduction
/// `<L_alpha u_k, u_k> = int |grad v_k|^2 + v_k^2 (|grad f_alpha|^2 + alpha Z f_alpha)`.
pub fn folland_stein_quotient(alpha: f64, seq: &FollandSteinSequence) -> Result<QuotientReport> {
    contract(alpha.abs() < 1.0, || {
        format!("|alpha| = {} must be < 1", alpha.abs())
    })?;
    let rule = seq.rule();
    // At alpha = 0 the phase jets vanish identically, so the phase term is an
    // exact 0.0 and the quotient is bitwise the Garofalo–Lanconelli one.
    let (kinetic, phase_term, denominator) = quotient_pipeline(&seq.v(), Some(alpha), &rule)?;
    Ok(QuotientReport {
        alpha,
        k: seq.k,
        kinetic,
        phase_term,
        denominator,
        quotient: (kinetic + phase_term) / denominator,
        target: 1.0 - alpha * alpha,
    })
}

/// `<L_alpha u, u>` straight from the jets of `u`:
/// `int |Xu|^2 + |Yu|^2 - i alpha conj(u) Zu` (real part).
pub fn folland_stein_form(alpha: f64, u: &ScalarField, rule: &VolumeRule) -> Result<f64> {
    let i = C::new(0.0, 1.0);
    let mut acc = 0.0;
    for (p, w) in &rule.nodes {
        let j = u.jet(p, 1)?;
        let [xu, yu] = horizontal(p, &j)?;
        acc += w * (xu.norm_sqr() + yu.norm_sqr() + (-i * alpha * j.v.conj() * j.g[2]).re);
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GlSquareReport {
    /// `p_0(u) = int |grad u|^2 - r^2/rho^4 |u|^2`.
    pub form: f64,
    /// `int |Ru + r^3/rho^4 u|^2 + |Phi u + 4rz/rho^4 u|^2`.
    pub squares: f64,
    /// `int |grad u|^2`, the scale of the discrepancy.
    pub kinetic: f64,
    /// `|form - squares| / kinetic`.
    pub discrepancy: f64,
}

/// Compares the Garofalo–Lanconelli form with its completed-square version.
pub fn gl_square_identity(u: &ScalarField, rule: &VolumeRule) -> Result<GlSquareReport> {
    let mut form = 0.0;
    let mut squares = 0.0;
    let mut kinetic = 0.0;
    for (p, w) in &rule.nodes {
        let (r, _, z) = p.cylindrical();
        contract(r > 0.0, || "quadrature node on the center line".into())?;
        let j = u.jet(p, 1)?;
        let [xu, yu] = horizontal(p, &j)?;
        let ru = VectorField::R.apply(p, &j)?.v;
        let phiu = VectorField::Phi.apply(p, &j)?.v;
        let rho4 = r.powi(4) + 16.0 * z * z;
        let g2 = xu.norm_sqr() + yu.norm_sqr();
        kinetic += w * g2;
        form += w * (g2 - r * r / rho4 * j.v.norm_sqr());
        squares += w
            * ((ru + j.v * (r.powi(3) / rho4)).norm_sqr()
                + (phiu + j.v * (4.0 * r * z / rho4)).norm_sqr());
    }
    Ok(GlSquareReport {
        form,
        squares,
        kinetic,
        discrepancy: (form - squares).abs() / kinetic.max(f64::MIN_POSITIVE),
    })
}

/// Symmetry under which the improved inequality is asserted.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    /// `u(x, y, z) = u(x, y, -z)`.
    EvenInZ,
    /// `-i d_phi u = n u`.
    AngularMode(i64),
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ImprovedGlReport {
    pub alpha: f64,
    pub symmetry: Symmetry,
    /// `Q_alpha(u) = int |Ru|^2 + |Phi u + i alpha u / r|^2`.
    pub q_alpha: f64,
    /// `int r^2/rho^4 |u|^2`.
    pub hardy_term: f64,
    /// `d(alpha, Z)^2 int |u|^2 / r^2 (1 - |grad rho|^4)`.
    pub improvement: f64,
    /// `q_alpha - hardy_term - improvement`, expected `>= 0`.
    pub value: f64,
    /// `value / q_alpha`.
    pub relative: f64,
}

fn detect_symmetry(alpha: f64, u: &ScalarField, rule: &VolumeRule) -> Result<Symmetry> {
    let tol = 1e-10;
    let mut even = true;
    let mut scale: f64 = 0.0;
    for (p, _) in &rule.nodes {
        let a = u.eval(p)?;
        let b = u.eval(&Point::new(p.x, p.y, -p.z))?;
        scale = scale.max(a.norm());
        if (a - b).norm() > tol * a.norm().max(1.0) {
            even = false;
        }
    }
    if even {
        return Ok(Symmetry::EvenInZ);
    }
    // Admissible modes: the integers n with alpha - n = +-d(alpha, Z).
    let d = dist_to_integers(alpha);
    let mut candidates = vec![(alpha - d).round() as i64, (alpha + d).round() as i64];
    candidates.dedup();
    for n in candidates {
        let mut ok = true;
        for (p, _) in &rule.nodes {
            let j = u.jet(p, 1)?;
            let dphi = p.x * j.g[1] - p.y * j.g[0];
            if (C::new(0.0, -1.0) * dphi - j.v * n as f64).norm() > tol * scale.max(1.0) {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Symmetry::AngularMode(n));
        }
    }
    Err(Error::Contract(
        "u is neither even in z nor a single angular mode compatible with alpha".into(),
    ))
}

/// `Q_alpha(u) - int r^2/rho^4 |u|^2 - d(alpha, Z)^2 int |u|^2/r^2 (1 - |grad rho|^4)`.
pub fn improved_gl_check(
    alpha: f64,
    u: &ScalarField,
    rule: &VolumeRule,
) -> Result<ImprovedGlReport> {
    let symmetry = detect_symmetry(alpha, u, rule)?;
    let i = C::new(0.0, 1.0);
    let d2 = dist_to_integers(alpha).powi(2);
    let mut q = 0.0;
    let mut hardy = 0.0;
    let mut improvement = 0.0;
    for (p, w) in &rule.nodes {
        let (r, _, z) = p.cylindrical();
        contract(r > 0.0, || "quadrature node on the center line".into())?;
        let j = u.jet(p, 1)?;
        let ru = VectorField::R.apply(p, &j)?.v;
        let phiu = VectorField::Phi.apply(p, &j)?.v;
        q += w * (ru.norm_sqr() + (phiu + i * alpha * j.v / r).norm_sqr());
        let rho4 = r.powi(4) + 16.0 * z * z;
        let u2 = j.v.norm_sqr();
        hardy += w * r * r / rho4 * u2;
        // |grad rho|^4 = r^4 / rho^4.
        improvement += w * d2 * u2 / (r * r) * (1.0 - r.powi(4) / rho4);
    }
    let value = q - hardy - improvement;
    Ok(ImprovedGlReport {
        alpha,
        symmetry,
        q_alpha: q,
        hardy_term: hardy,
        improvement,
        value,
        relative: value / q.max(f64::MIN_POSITIVE),
    })
}
