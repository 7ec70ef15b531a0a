//! Named magnetic fields and potentials used by the checks and the CLI.

use super::{Horizontal1Form, Horizontal2Form};
use crate::error::{Error, Result};
use crate::heisenberg::{FieldExpr, Monomial, ScalarField};

fn poly(terms: &[(f64, [u32; 3])]) -> FieldExpr {
    FieldExpr::Polynomial {
        terms: terms
            .iter()
            .map(|&(coef, powers)| Monomial { coef, powers })
            .collect(),
    }
}

/// `|B| dx ^ w`.
pub fn uniform_field(bmag: f64) -> Horizontal2Form {
    Horizontal2Form::cartesian(FieldExpr::constant(bmag).into(), ScalarField::zero())
}

/// `|B| x^2/2 dy`, a potential of [`uniform_field`].
pub fn uniform_potential(bmag: f64) -> Horizontal1Form {
    Horizontal1Form::cartesian(ScalarField::zero(), poly(&[(0.5 * bmag, [2, 0, 0])]).into())
}

/// `chi(s) = c (1 - (s/r0)^2)^3` with `c = 315 / (8 r0^3)`, normalised so that
/// `int_0^{r0} chi(s) s^2/2 ds = 1`.
pub fn unit_moment_profile(r0: f64) -> FieldExpr {
    FieldExpr::RadialBump {
        radius: r0,
        power: 3,
        coeffs: vec![315.0 / (8.0 * r0.powi(3))],
    }
}

/// `(1 - u^2)^3 (3/11 - u^2)`, `u = r/r0`: vanishing second moment.
pub fn zero_moment_profile(r0: f64) -> FieldExpr {
    FieldExpr::RadialBump {
        radius: r0,
        power: 3,
        coeffs: vec![3.0 / 11.0, -1.0],
    }
}

/// Difference of two equal annular bumps: vanishing integral, non-zero
/// second moment, zero near the center line.
pub fn annular_dipole_profile(r0: f64) -> FieldExpr {
    let bump = |c: f64| FieldExpr::AnnularBump {
        center: c * r0,
        halfwidth: 0.3 * r0,
        power: 4,
    };
    bump(0.4).plus(bump(0.65).scaled(-1.0))
}

/// `b_1 = chi(r)` with flux `-1`.
pub fn radial_field(r0: f64) -> Horizontal2Form {
    Horizontal2Form::closed_from_b1(unit_moment_profile(r0).into(), Some(r0))
}

/// `b_1 = chi_0(r) exp(-z^2)`; depends on `z`, still cylinder-supported.
pub fn zero_moment_field(r0: f64) -> Horizontal2Form {
    let beta = FieldExpr::Exp {
        arg: Box::new(poly(&[(-1.0, [0, 0, 2])])),
    };
    Horizontal2Form::closed_from_b1(zero_moment_profile(r0).times(beta).into(), Some(r0))
}

/// `b_1 = chi(r) (1 + cos(phi)/2)` with an annular dipole profile.
pub fn angular_field(r0: f64) -> Horizontal2Form {
    let cos_phi = FieldExpr::X.times(FieldExpr::Pow {
        base: Box::new(FieldExpr::Radius),
        exponent: -1.0,
    });
    let beta = FieldExpr::constant(1.0).plus(cos_phi.scaled(0.5));
    Horizontal2Form::closed_from_b1(annular_dipole_profile(r0).times(beta).into(), Some(r0))
}

/// Zero-moment profile times a vertical bump: supported in
/// `{r <= r0, |z| <= z0}`.
pub fn compact_field(r0: f64, z0: f64) -> Horizontal2Form {
    let beta = FieldExpr::AxialBump {
        center: 0.0,
        halfwidth: z0,
        power: 4,
    };
    Horizontal2Form::closed_from_b1(zero_moment_profile(r0).times(beta).into(), Some(r0))
}

/// `b_1 = chi(r) z`, which is not cylinder-supported.
pub fn tilted_field(r0: f64) -> Horizontal2Form {
    Horizontal2Form::closed_from_b1(unit_moment_profile(r0).times(FieldExpr::Z).into(), Some(r0))
}

/// The three cylinder-supported fields of the round-trip battery.
pub fn cylinder_fields(r0: f64) -> Vec<(&'static str, Horizontal2Form)> {
    vec![
        ("radial", radial_field(r0)),
        ("zero_moment", zero_moment_field(r0)),
        ("angular", angular_field(r0)),
    ]
}

pub const FIELD_NAMES: [&str; 6] = [
    "uniform",
    "radial",
    "zero_moment",
    "angular",
    "compact",
    "tilted",
];

pub fn named_field(name: &str, r0: f64) -> Result<Horizontal2Form> {
    Ok(match name {
        "uniform" => uniform_field(1.0),
        "radial" => radial_field(r0),
        "zero_moment" => zero_moment_field(r0),
        "angular" => angular_field(r0),
        "compact" => compact_field(r0, r0),
        "tilted" => tilted_field(r0),
        other => {
            return Err(Error::Contract(format!(
                "unknown field {other:?}; expected one of {FIELD_NAMES:?}"
            )))
        }
    })
}
