//! Ingredients of the logarithmic Hardy inequality: the one-dimensional
//! log-Hardy inequality and the eigenvalue-interval data for the fiber weights
//! `lambda_m^-(s) = (m - s^2/2 + F_B)^2`.

use crate::error::{contract, Result};
use crate::quadrature::{integrate_pieces, QuadOptions};
use serde::Serialize;
use std::sync::Arc;

/// A real radial profile `f(r)` with its derivative, supported in `support`.
#[derive(Clone)]
pub struct RadialFunction {
    pub support: [f64; 2],
    eval: Arc<dyn Fn(f64) -> (f64, f64) + Send + Sync>,
}

impl RadialFunction {
    /// `eval(r)` returns `(f(r), f'(r))`; it is only sampled inside `support`.
    pub fn new(
        support: [f64; 2],
        eval: impl Fn(f64) -> (f64, f64) + Send + Sync + 'static,
    ) -> Result<Self> {
        contract(0.0 < support[0] && support[0] <= support[1], || {
            format!(
                "support [{}, {}] must be a nonempty subset of (0, inf)",
                support[0], support[1]
            )
        })?;
        Ok(RadialFunction {
            support,
            eval: Arc::new(eval),
        })
    }

    /// `exp(-1 / ((r - a)(b - r)))` on `(a, b)`.
    pub fn bump(a: f64, b: f64) -> Result<Self> {
        contract(0.0 < a && a < b, || {
            format!("bump needs 0 < a < b, got [{a}, {b}]")
        })?;
        Self::new([a, b], move |r| {
            if r <= a || r >= b {
                return (0.0, 0.0);
            }
            let q = (r - a) * (b - r);
            let f = (-1.0 / q).exp();
            let dq = (b - r) - (r - a);
            (f, f * dq / (q * q))
        })
    }

    /// The zero function with a nominal support.
    pub fn zero(support: [f64; 2]) -> Result<Self> {
        Self::new(support, |_| (0.0, 0.0))
    }

    pub fn eval(&self, r: f64) -> (f64, f64) {
        (self.eval)(r)
    }
}

impl std::fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialFunction")
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LogHardyReport {
    pub r1: f64,
    /// `int |f|^2 / (r^2 ln^2(r / r1)) r dr`.
    pub lhs: f64,
    /// `4 int |f'|^2 r dr`.
    pub rhs: f64,
    pub holds: bool,
}

/// Evaluates both sides of the radial log-Hardy inequality. The right side
/// carries the square on `|f'|`.
pub fn radial_log_hardy_check(f: &RadialFunction, r1: f64) -> Result<LogHardyReport> {
    let [a, b] = f.support;
    contract(r1 > 0.0, || format!("r1 = {r1} must be positive"))?;
    contract(r1 < a || r1 > b, || {
        format!("support [{a}, {b}] touches r1 = {r1}")
    })?;
    let opts = QuadOptions {
        abs_tol: 1e-300,
        rel_tol: 1e-12,
    };
    let breaks = [a, 0.5 * (a + b), b];
    let lhs = integrate_pieces(
        |r| {
            let (v, _) = f.eval(r);
            let l = (r / r1).ln();
            v * v / (r * l * l)
        },
        &breaks,
        opts,
    )?;
    let rhs = 4.0
        * integrate_pieces(
            |r| {
                let (_, d) = f.eval(r);
                d * d * r
            },
            &breaks,
            opts,
        )?;
    Ok(LogHardyReport {
        r1,
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct IntervalRow {
    pub l: u32,
    /// `sqrt(2(l + gamma) - eps)`.
    pub alpha: f64,
    /// `sqrt(2(l + gamma) + eps)`.
    pub beta: f64,
    pub width: f64,
    pub beta_over_alpha: f64,
    pub width_over_alpha: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ModeSampling {
    pub m: i64,
    pub samples: usize,
    pub s_max: f64,
    /// Samples where `lambda_m^-(s) < eps^2/4` disagrees with `s in I_{m+m0}`.
    pub mismatches: usize,
    /// Smallest `lambda_m^-` seen outside the predicted interval.
    pub min_outside: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LaptevData {
    pub flux: f64,
    pub m0: i64,
    pub gamma: f64,
    pub eps: f64,
    pub rows: Vec<IntervalRow>,
    /// `max_l max(beta_l / alpha_l, |I_l| / alpha_l)`.
    pub lambda: f64,
    pub sampling: Vec<ModeSampling>,
}

impl LaptevData {
    pub fn characterization_holds(&self) -> bool {
        self.sampling.iter().all(|s| s.mismatches == 0)
    }

    /// The interval `I_l`, or `None` when it is empty.
    pub fn interval(&self, l: i64) -> Option<(f64, f64)> {
        interval(self.gamma, self.eps, l)
    }
}

/// `F_B = m0 + gamma` with `gamma` in `(-1/2, 1/2]`.
pub fn split_flux(flux: f64) -> (i64, f64) {
    let m0 = (flux - 0.5).ceil();
    (m0 as i64, flux - m0)
}

fn interval(gamma: f64, eps: f64, l: i64) -> Option<(f64, f64)> {
    if l < 0 || (l == 0 && gamma < 0.0) {
        return None;
    }
    let c = 2.0 * (l as f64 + gamma);
    Some(((c - eps).sqrt(), (c + eps).sqrt()))
}

/// `lambda_m^-(s) = (m - s^2/2 + F_B)^2`.
pub fn lambda_minus(m: i64, s: f64, flux: f64) -> f64 {
    let v = m as f64 - 0.5 * s * s + flux;
    v * v
}

/// Samples per mode used by [`laptev_interval_data`].
pub const LAPTEV_SAMPLES: usize = 10_000;
/// Modes `|m| <= LAPTEV_MODES` are sampled.
pub const LAPTEV_MODES: i64 = 5;

/// Tabulates `I_l` for `l <= l_max`, the constant `Lambda`, and checks
/// `lambda_m^-(s) < eps^2/4 <=> s in I_{m+m0}` on a uniform grid for each
/// sampled mode.
pub fn laptev_interval_data(flux: f64, eps: f64, l_max: u32) -> Result<LaptevData> {
    contract(flux.is_finite() && flux.fract() != 0.0, || {
        format!("flux {flux} must not be an integer")
    })?;
    let (m0, gamma) = split_flux(flux);
    contract(eps > 0.0 && eps < 0.5 * gamma.abs(), || {
        format!("eps = {eps} must lie in (0, |gamma|/2) with gamma = {gamma}")
    })?;
    let rows: Vec<IntervalRow> = (0..=l_max)
        .filter_map(|l| {
            let (alpha, beta) = interval(gamma, eps, l as i64)?;
            Some(IntervalRow {
                l,
                alpha,
                beta,
                width: beta - alpha,
                beta_over_alpha: beta / alpha,
                width_over_alpha: (beta - alpha) / alpha,
            })
        })
        .collect();
    let lambda = rows
        .iter()
        .map(|r| r.beta_over_alpha.max(r.width_over_alpha))
        .fold(0.0, f64::max);
    let threshold = 0.25 * eps * eps;
    let sampling = (-LAPTEV_MODES..=LAPTEV_MODES)
        .map(|m| {
            let l = m + m0;
            // Reach well past I_l and the next interval.
            let s_max = (2.0 * (l.max(0) as f64 + 2.0)).sqrt() + 1.0;
            let iv = interval(gamma, eps, l);
            let mut mismatches = 0;
            let mut min_outside = f64::INFINITY;
            for j in 0..LAPTEV_SAMPLES {
                let s = s_max * (j as f64 + 0.5) / LAPTEV_SAMPLES as f64;
                let lam = lambda_minus(m, s, flux);
                let inside = iv.is_some_and(|(a, b)| a < s && s < b);
                if (lam < threshold) != inside {
                    mismatches += 1;
                }
                if !inside {
                    min_outside = min_outside.min(lam);
                }
            }
            ModeSampling {
                m,
                samples: LAPTEV_SAMPLES,
                s_max,
                mismatches,
                min_outside,
            }
        })
        .collect();
    Ok(LaptevData {
        flux,
        m0,
        gamma,
        eps,
        rows,
        lambda,
        sampling,
    })
}
