//! JSON descriptors for horizontal forms (schema in `docs/forms-descriptor.md`).

use super::{Horizontal1Form, Horizontal2Form, Representation};
use crate::error::{contract, Error, Result};
use crate::heisenberg::{FieldExpr, ScalarField, TabulatedField};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientDescriptor {
    /// A closed-form expression from the built-in catalog.
    Expr(FieldExpr),
    /// Values on a Cartesian grid; derivatives by finite differences.
    Tabulated(TabulatedField),
    /// Second coefficient of a cylindrical 2-form, reconstructed from the
    /// first so that the form is closed.
    FromFirst,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormDescriptor {
    /// 1 or 2.
    pub degree: u8,
    pub representation: Representation,
    pub coefficients: [CoefficientDescriptor; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support_radius: Option<f64>,
}

fn describe(f: &ScalarField) -> Result<CoefficientDescriptor> {
    if let Some(e) = f.as_expr() {
        Ok(CoefficientDescriptor::Expr(e.clone()))
    } else if let Some(t) = f.as_tabulated() {
        Ok(CoefficientDescriptor::Tabulated(t.clone()))
    } else {
        Err(Error::Contract(
            "only expression or tabulated coefficients have a descriptor".into(),
        ))
    }
}

fn build(c: &CoefficientDescriptor) -> Result<ScalarField> {
    match c {
        CoefficientDescriptor::Expr(e) => Ok(ScalarField::expr(e.clone())),
        CoefficientDescriptor::Tabulated(t) => {
            t.validate()?;
            Ok(ScalarField::tabulated(t.clone()))
        }
        CoefficientDescriptor::FromFirst => Err(Error::Contract(
            "from_first is only valid as the second coefficient of a cylindrical 2-form".into(),
        )),
    }
}

impl FormDescriptor {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn one_form(&self) -> Result<Horizontal1Form> {
        contract(self.degree == 1, || {
            format!("descriptor has degree {}, expected 1", self.degree)
        })?;
        let a = build(&self.coefficients[0])?;
        let b = build(&self.coefficients[1])?;
        Ok(match self.representation {
            Representation::Cartesian => Horizontal1Form::cartesian(a, b),
            Representation::Cylindrical => Horizontal1Form::cylindrical(a, b),
        })
    }

    pub fn two_form(&self) -> Result<Horizontal2Form> {
        contract(self.degree == 2, || {
            format!("descriptor has degree {}, expected 2", self.degree)
        })?;
        let first = build(&self.coefficients[0])?;
        let mut form = match (&self.coefficients[1], self.representation) {
            (CoefficientDescriptor::FromFirst, Representation::Cylindrical) => {
                Horizontal2Form::closed_from_b1(first, self.support_radius)
            }
            (c, Representation::Cartesian) => Horizontal2Form::cartesian(first, build(c)?),
            (c, Representation::Cylindrical) => Horizontal2Form::cylindrical(first, build(c)?),
        };
        form.support_radius = self.support_radius;
        Ok(form)
    }

    pub fn of_one_form(a: &Horizontal1Form) -> Result<Self> {
        let [c0, c1] = a
            .coefficient_fields()
            .ok_or_else(|| Error::Contract("derived forms have no descriptor".into()))?;
        Ok(FormDescriptor {
            degree: 1,
            representation: a.representation(),
            coefficients: [describe(c0)?, describe(c1)?],
            support_radius: None,
        })
    }

    pub fn of_two_form(b: &Horizontal2Form) -> Result<Self> {
        let [c0, c1] = b
            .coefficient_fields()
            .ok_or_else(|| Error::Contract("derived forms have no descriptor".into()))?;
        let second = if b.second_from_first() {
            CoefficientDescriptor::FromFirst
        } else {
            describe(c1)?
        };
        Ok(FormDescriptor {
            degree: 2,
            representation: b.representation(),
            coefficients: [describe(c0)?, second],
            support_radius: b.support_radius,
        })
    }
}
