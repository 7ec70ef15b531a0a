//! Seeded identity battery: pointwise identities at random points off the
//! center line, plus the completed-square identity on random bump fields.

use super::gl::{f_alpha_identity, gl_square_identity, rho_alpha_gradient_check};
use super::xiao::xiao_gauge_check;
use crate::error::Result;
use crate::heisenberg::{
    apply_frame, fundamental_harmonicity_check, koranyi_jet, koranyi_norm, FieldExpr, Frame,
    Monomial, Point, ScalarField, VectorField, VolumeRule,
};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

/// Tolerance for identities evaluated with analytic derivatives.
pub const ANALYTIC_TOL: f64 = 1e-8;
/// Tolerance for identities that go through quadrature.
pub const QUADRATURE_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BatteryConfig {
    pub seed: u64,
    pub points: usize,
    pub bump_fields: usize,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig {
            seed: 7,
            points: 200,
            bump_fields: 5,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityRow {
    pub name: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BatteryReport {
    pub config: BatteryConfig,
    pub rows: Vec<IdentityRow>,
}

impl BatteryReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

struct Acc {
    name: &'static str,
    tol: f64,
    samples: usize,
    max: f64,
}

impl Acc {
    fn new(name: &'static str, tol: f64) -> Self {
        Acc {
            name,
            tol,
            samples: 0,
            max: 0.0,
        }
    }

    fn push(&mut self, v: f64) {
        self.samples += 1;
        // NaN must fail the row.
        self.max = if v.is_nan() || self.max.is_nan() {
            f64::NAN
        } else {
            self.max.max(v)
        };
    }

    fn row(self) -> IdentityRow {
        IdentityRow {
            name: self.name.into(),
            samples: self.samples,
            max_residual: self.max,
            tolerance: self.tol,
            pass: self.max <= self.tol,
        }
    }
}

/// Random point with `r in [0.2, 3]`, `z in [-2, 2]`.
fn random_point(rng: &mut ChaCha8Rng) -> Point {
    let r = rng.random_range(0.2..3.0);
    let phi = rng.random_range(0.0..2.0 * PI);
    let z = rng.random_range(-2.0..2.0);
    Point::from_cylindrical(r, phi, z)
}

/// A complex polynomial times an annular and an axial bump, with the
/// cylinder box covering its support.
fn random_bump(rng: &mut ChaCha8Rng) -> (ScalarField, VolumeRule) {
    let rc = rng.random_range(1.0..2.0);
    let rw = rng.random_range(0.3..0.8);
    let zc = rng.random_range(-1.0..1.0);
    let zw = rng.random_range(0.3..1.0);
    let mut terms = vec![Monomial {
        coef: 1.0,
        powers: [0, 0, 0],
    }];
    for powers in [[1, 0, 0], [0, 1, 1], [1, 1, 0]] {
        terms.push(Monomial {
            coef: rng.random_range(-0.5..0.5),
            powers,
        });
    }
    let poly = FieldExpr::Polynomial { terms };
    // 1 + i c y makes the field genuinely complex.
    let phase = FieldExpr::Constant { re: 1.0, im: 0.0 }.plus(FieldExpr::Scale {
        re: 0.0,
        im: rng.random_range(-1.0..1.0),
        expr: Box::new(FieldExpr::Y),
    });
    let expr = FieldExpr::AnnularBump {
        center: rc,
        halfwidth: rw,
        power: 4,
    }
    .times(FieldExpr::AxialBump {
        center: zc,
        halfwidth: zw,
        power: 4,
    })
    .times(poly)
    .times(phase);
    let rule = VolumeRule::cylinder([rc - rw, rc + rw], [zc - zw, zc + zw], 28, 32, 28);
    (ScalarField::expr(expr), rule)
}

fn grad_norm(p: &Point, j: &crate::jet::Jet) -> Result<f64> {
    let x = VectorField::X.apply(p, j)?.v;
    let y = VectorField::Y.apply(p, j)?.v;
    Ok((x.norm_sqr() + y.norm_sqr()).sqrt())
}

/// Runs the battery. Every sample is drawn from one ChaCha8 stream seeded
/// with `config.seed`, so the report depends only on the configuration.
pub fn identity_battery(config: &BatteryConfig) -> Result<BatteryReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut grad = Acc::new("grad_rho_norm", ANALYTIC_TOL);
    let mut dilation = Acc::new("dilation_homogeneity", ANALYTIC_TOL);
    let mut decomposition = Acc::new("inverse_square_decomposition", ANALYTIC_TOL);
    let mut f_alpha = Acc::new("f_alpha_identity", ANALYTIC_TOL);
    let mut ra_grad = Acc::new("rho_alpha_gradient", ANALYTIC_TOL);
    let mut ra_vert = Acc::new("rho_alpha_vertical", ANALYTIC_TOL);
    let mut ra_mod = Acc::new("rho_alpha_modulus", ANALYTIC_TOL);
    let mut harmonic = Acc::new("fundamental_harmonicity", ANALYTIC_TOL);
    let mut xiao = Acc::new("xiao_gauge", ANALYTIC_TOL);
    let mut frames = Acc::new("frame_invariance", ANALYTIC_TOL);
    let mut square = Acc::new("gl_square_identity", QUADRATURE_TOL);

    let probe = ScalarField::expr(
        FieldExpr::Koranyi
            .times(FieldExpr::Sin {
                arg: Box::new(FieldExpr::X.plus(FieldExpr::Z.scaled(0.5))),
            })
            .plus(FieldExpr::Y.times(FieldExpr::Z)),
    );

    for _ in 0..config.points {
        let p = random_point(&mut rng);
        let alpha = rng.random_range(-2.0..2.0);
        let lambda = rng.random_range(0.1..10.0);
        let (r, _, z) = p.cylindrical();
        let rho = koranyi_jet(&p, 1)?;
        let g = grad_norm(&p, &rho)?;

        grad.push((g - r / rho.v.re).abs());
        let rho_p = koranyi_norm(&p);
        dilation.push((koranyi_norm(&p.dilate(lambda)) - lambda * rho_p).abs() / (lambda * rho_p));
        let rho4 = rho_p.powi(4);
        // 1/r^2 - r^2/rho^4 = (1 - |grad rho|^4) / r^2, scaled by r^2.
        decomposition.push((1.0 - r.powi(4) / rho4 - (1.0 - g.powi(4))).abs());
        f_alpha.push(f_alpha_identity(alpha, &p)?);
        let ra = rho_alpha_gradient_check(alpha, &p)?;
        ra_grad.push(ra.gradient);
        ra_vert.push(ra.vertical);
        ra_mod.push(ra.modulus.max(ra.unimodular));
        // Delta(rho^-2) has the scale of rho^-4.
        harmonic.push(fundamental_harmonicity_check(&p)? * rho4);
        if z != 0.0 {
            xiao.push(xiao_gauge_check(&p)?.max());
        }
        let cart = apply_frame(&probe, &p, Frame::Cartesian)?;
        let cyl = apply_frame(&probe, &p, Frame::Cylindrical)?;
        // |Xu|^2 + |Yu|^2 = |Ru|^2 + |Phi u|^2.
        let (ru, phiu) = (cyl.ru.unwrap_or_default(), cyl.phiu.unwrap_or_default());
        let polar = (ru.norm_sqr() + phiu.norm_sqr()).sqrt();
        frames.push((cart.grad_norm - polar).abs() / cart.grad_norm.max(1.0));
    }
    for _ in 0..config.bump_fields {
        let (u, rule) = random_bump(&mut rng);
        square.push(gl_square_identity(&u, &rule)?.discrepancy);
    }

    let rows = [
        grad,
        dilation,
        decomposition,
        f_alpha,
        ra_grad,
        ra_vert,
        ra_mod,
        harmonic,
        xiao,
        frames,
        square,
    ]
    .into_iter()
    .map(Acc::row)
    .collect();
    Ok(BatteryReport {
        config: *config,
        rows,
    })
}
