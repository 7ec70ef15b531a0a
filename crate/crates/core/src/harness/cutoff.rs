//! Smooth steps, the logarithmic cutoffs `eta_n`, `chi_n`, and the Rayleigh
//! quotient of `psi_n = eta_n(r) chi_n(|z|)` for the fiber `Q_{m*}`.
//!
//! Every integral factorises into radial and vertical parts. Plateaus are
//! integrated in closed form; each transition is mapped to the unit interval
//! of the step variable and integrated adaptively.

use crate::error::{contract, Result};
use crate::fibers::{dist_to_integers, nearest_mode};
use crate::quadrature::{try_integrate_pieces, QuadOptions};
use serde::Serialize;

/// `S(x) = 35x^4 - 84x^5 + 70x^6 - 20x^7`, the normalised integral of
/// `140 x^3 (1 - x)^3`, with derivatives up to order 3.
fn septic(x: f64) -> [f64; 4] {
    if x <= 0.0 {
        return [0.0; 4];
    }
    if x >= 1.0 {
        return [1.0, 0.0, 0.0, 0.0];
    }
    let y = 1.0 - x;
    [
        x.powi(4) * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x.powi(3)),
        140.0 * x.powi(3) * y.powi(3),
        420.0 * x * x * y * y * (y - x),
        840.0 * x * y * (y * y - 3.0 * x * y + x * x),
    ]
}

/// A smooth non-decreasing step `xi` on `[0, 1]`, zero on `[0, a]` and one
/// on `[1 - a, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CutoffProfile {
    pub a: f64,
}

impl Default for CutoffProfile {
    fn default() -> Self {
        CutoffProfile { a: 0.1 }
    }
}

impl CutoffProfile {
    pub fn new(a: f64) -> Result<Self> {
        contract((0.0..0.5).contains(&a), || {
            format!("plateau width {a} outside [0, 1/2)")
        })?;
        Ok(CutoffProfile { a })
    }

    fn width(&self) -> f64 {
        1.0 - 2.0 * self.a
    }

    /// `[xi, xi', xi'', xi''']` at `t` (constant outside `[0, 1]`).
    pub fn derivatives(&self, t: f64) -> [f64; 4] {
        let w = self.width();
        let s = septic((t - self.a) / w);
        [s[0], s[1] / w, s[2] / (w * w), s[3] / (w * w * w)]
    }

    pub fn value(&self, t: f64) -> f64 {
        self.derivatives(t)[0]
    }

    pub fn deriv(&self, t: f64) -> f64 {
        self.derivatives(t)[1]
    }

    /// `||xi'||_inf = S'(1/2) / (1 - 2a) = (140/64) / (1 - 2a)`.
    pub fn sup_deriv(&self) -> f64 {
        140.0 / 64.0 / self.width()
    }

    /// Breakpoints of the piecewise polynomial inside `[0, 1]`.
    pub fn breaks(&self) -> [f64; 4] {
        [0.0, self.a, 1.0 - self.a, 1.0]
    }
}

/// `eta_n(r)`: zero below `n^-2`, rising as `xi(log_n(n^2 r))` to one at
/// `1/n`, one up to `n`, falling as `xi(log_n(n^2 / r))` to zero at `n^2`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EtaN {
    pub n: u64,
    pub xi: CutoffProfile,
}

/// `chi_n(s)`: one below `n^4`, then `xi(2 - s/n^4)` down to zero at `2 n^4`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ChiN {
    pub n: u64,
    pub xi: CutoffProfile,
}

pub fn eta_n(n: u64, xi: CutoffProfile) -> Result<EtaN> {
    contract(n >= 2, || format!("eta_n needs n >= 2, got {n}"))?;
    Ok(EtaN { n, xi })
}

pub fn chi_n(n: u64, xi: CutoffProfile) -> Result<ChiN> {
    contract(n >= 2, || format!("chi_n needs n >= 2, got {n}"))?;
    Ok(ChiN { n, xi })
}

impl EtaN {
    fn ln_n(&self) -> f64 {
        (self.n as f64).ln()
    }

    /// `(eta_n(r), eta_n'(r))`.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        let n = self.n as f64;
        let l = self.ln_n();
        if r < 1.0 / (n * n) || r > n * n {
            (0.0, 0.0)
        } else if r <= 1.0 / n {
            let d = self.xi.derivatives((n * n * r).ln() / l);
            (d[0], d[1] / (r * l))
        } else if r < n {
            (1.0, 0.0)
        } else {
            let d = self.xi.derivatives((n * n / r).ln() / l);
            (d[0], -d[1] / (r * l))
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        self.eval(r).0
    }

    pub fn deriv(&self, r: f64) -> f64 {
        self.eval(r).1
    }

    /// `int_0^inf F(r, eta, eta') dr` where `plateau` is the exact integral
    /// of `F(r, 1, 0)` over `(1/n, n)`.
    fn integral(&self, f: impl Fn(f64, f64, f64) -> f64, plateau: f64) -> Result<f64> {
        let l = self.ln_n();
        let n = self.n as f64;
        let opts = QuadOptions {
            abs_tol: 0.0,
            rel_tol: 1e-13,
        };
        let breaks = self.xi.breaks();
        // r = n^(t - 2) on the inner ramp, r = n^(2 - t) on the outer ramp;
        // in both cases |dr| = r ln n dt.
        let inner = try_integrate_pieces(
            |t| {
                let r = n.powf(t - 2.0);
                let (e, de) = self.eval(r);
                Ok(f(r, e, de) * r * l)
            },
            &breaks,
            opts,
        )?;
        let outer = try_integrate_pieces(
            |t| {
                let r = n.powf(2.0 - t);
                let (e, de) = self.eval(r);
                Ok(f(r, e, de) * r * l)
            },
            &breaks,
            opts,
        )?;
        Ok(inner + plateau + outer)
    }
}

impl ChiN {
    fn n4(&self) -> f64 {
        (self.n as f64).powi(4)
    }

    /// `(chi_n(s), chi_n'(s))` for `s >= 0`.
    pub fn eval(&self, s: f64) -> (f64, f64) {
        let n4 = self.n4();
        if s < n4 {
            (1.0, 0.0)
        } else if s > 2.0 * n4 {
            (0.0, 0.0)
        } else {
            let d = self.xi.derivatives(2.0 - s / n4);
            (d[0], -d[1] / n4)
        }
    }

    pub fn value(&self, s: f64) -> f64 {
        self.eval(s).0
    }

    pub fn deriv(&self, s: f64) -> f64 {
        self.eval(s).1
    }

    /// `int_R F(chi(|s|), chi'(|s|)) ds` with `plateau = F(1, 0) * 2 n^4`.
    fn integral(&self, f: impl Fn(f64, f64) -> f64, plateau: f64) -> Result<f64> {
        let n4 = self.n4();
        let opts = QuadOptions {
            abs_tol: 0.0,
            rel_tol: 1e-13,
        };
        // s = n^4 (2 - u), ds = n^4 du, on each side of the origin.
        let ramp = try_integrate_pieces(
            |u| {
                let (c, dc) = self.eval(n4 * (2.0 - u));
                Ok(f(c, dc) * n4)
            },
            &self.xi.breaks(),
            opts,
        )?;
        Ok(plateau + 2.0 * ramp)
    }
}

/// The four one-dimensional integrals of the cutoff bounds and whether each
/// meets its bound.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CutoffIntegrals {
    pub n: u64,
    /// `int eta_n^2 / r dr`, bounded below by `2 log n`.
    pub eta_mass: f64,
    /// `int eta_n'^2 r dr`, bounded above by `2 ||xi'||^2 / log n`.
    pub eta_energy: f64,
    /// `int chi_n(|s|)^2 ds`, bounded below by `2 n^4`.
    pub chi_mass: f64,
    /// `int chi_n'(|s|)^2 ds`, bounded above by `2 ||xi'||^2 / n^4`.
    pub chi_energy: f64,
    pub eta_holds: bool,
    pub chi_holds: bool,
}

pub fn cutoff_integrals(n: u64, xi: CutoffProfile) -> Result<CutoffIntegrals> {
    let eta = eta_n(n, xi)?;
    let chi = chi_n(n, xi)?;
    let l = (n as f64).ln();
    let n4 = (n as f64).powi(4);
    let s2 = xi.sup_deriv().powi(2);
    let eta_mass = eta.integral(|r, e, _| e * e / r, 2.0 * l)?;
    let eta_energy = eta.integral(|r, _, de| de * de * r, 0.0)?;
    let chi_mass = chi.integral(|c, _| c * c, 2.0 * n4)?;
    let chi_energy = chi.integral(|_, dc| dc * dc, 0.0)?;
    Ok(CutoffIntegrals {
        n,
        eta_mass,
        eta_energy,
        chi_mass,
        chi_energy,
        eta_holds: eta_mass >= 2.0 * l && eta_energy <= 2.0 * s2 / l,
        chi_holds: chi_mass >= 2.0 * n4 && chi_energy <= 2.0 * s2 / n4,
    })
}

/// Decomposed Rayleigh quotient of a test function.
#[derive(Clone, Debug, Serialize)]
pub struct RayleighReport {
    pub n: u64,
    pub alpha: f64,
    pub m_star: i64,
    /// `I_1` (radial kinetic), `I_2` (flux), `I_3` (vertical) terms.
    pub terms: [f64; 3],
    /// `||psi_n / r||^2`.
    pub denominator: f64,
    pub quotient: f64,
    /// `d(alpha, Z)^2`.
    pub target: f64,
    /// `||xi'||^2 / log^2 n`, the bound on `I_1 / den`.
    pub i1_bound: f64,
    /// `||xi'||^2 / (32 log n)`, the bound on `I_3 / den`.
    pub i3_bound: f64,
    pub bounds_hold: bool,
}

/// Rayleigh quotient `Q_{m*}(psi_n) / ||psi_n / r||^2` for
/// `psi_n = eta_n(r) chi_n(|z|)`, `m*` the integer nearest to `alpha`.
pub fn sharpness_quotient_lw(alpha: f64, n: u64, xi: CutoffProfile) -> Result<RayleighReport> {
    contract(alpha.is_finite() && alpha.fract() != 0.0, || {
        format!("alpha = {alpha} must not be an integer")
    })?;
    let eta = eta_n(n, xi)?;
    let chi = chi_n(n, xi)?;
    let l = (n as f64).ln();
    let n_f = n as f64;
    let m_star = nearest_mode(alpha);
    let beta = alpha - m_star as f64;
    // Radial factors: int eta^2/r, int eta'^2 r, int eta^2 r^3.
    let a = eta.integral(|r, e, _| e * e / r, 2.0 * l)?;
    let b = eta.integral(|r, _, de| de * de * r, 0.0)?;
    let c = eta.integral(
        |r, e, _| e * e * r.powi(3),
        0.25 * (n_f.powi(4) - n_f.powi(-4)),
    )?;
    // Vertical factors.
    let z0 = chi.integral(|c, _| c * c, 2.0 * n_f.powi(4))?;
    let z1 = chi.integral(|_, dc| dc * dc, 0.0)?;
    let terms = [b * z0, beta * beta * a * z0, 0.25 * c * z1];
    let denominator = a * z0;
    let quotient = (terms[0] + terms[1] + terms[2]) / denominator;
    let s2 = xi.sup_deriv().powi(2);
    let i1_bound = s2 / (l * l);
    let i3_bound = s2 / (32.0 * l);
    Ok(RayleighReport {
        n,
        alpha,
        m_star,
        terms,
        denominator,
        quotient,
        target: dist_to_integers(alpha).powi(2),
        i1_bound,
        i3_bound,
        bounds_hold: terms[0] / denominator <= i1_bound && terms[2] / denominator <= i3_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_endpoints_and_slope() {
        let xi = CutoffProfile::default();
        assert_eq!(xi.value(0.0), 0.0);
        assert_eq!(xi.value(0.05), 0.0);
        assert_eq!(xi.value(1.0), 1.0);
        assert_eq!(xi.value(0.95), 1.0);
        assert!((xi.deriv(0.5) - xi.sup_deriv()).abs() < 1e-12);
        let h = 1e-6;
        for t in [0.2, 0.37, 0.5, 0.81] {
            let fd = (xi.value(t + h) - xi.value(t - h)) / (2.0 * h);
            assert!((fd - xi.deriv(t)).abs() < 1e-8);
        }
    }

    #[test]
    fn eta_plateau_and_support() {
        let e = eta_n(4, CutoffProfile::default()).unwrap();
        assert_eq!(e.value(1.0), 1.0);
        assert_eq!(e.value(1.0 / 17.0), 0.0);
        assert_eq!(e.value(17.0), 0.0);
        assert!(eta_n(1, CutoffProfile::default()).is_err());
    }
}
