//! Left-invariant and cylindrical frames acting on jets, and pointwise
//! geometric quantities built from them.

use super::expr::{koranyi_jet, radius_jet, FieldExpr, Monomial};
use super::field::ScalarField;
use super::point::Point;
use crate::error::{Error, Result};
use crate::jet::Jet;
use num_complex::Complex64 as C;
use serde::Serialize;

/// First-order differential operators on the Heisenberg group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VectorField {
    /// `d/dx - (y/2) d/dz`
    X,
    /// `d/dy + (x/2) d/dz`
    Y,
    /// `d/dz`
    Z,
    /// `d/dr`
    R,
    /// `(1/r) d/dphi + (r/2) d/dz`
    Phi,
    /// `r d/dr + 2z d/dz`
    Euler,
}

impl VectorField {
    /// Cartesian coefficient jets of the field at `p`.
    pub fn coefficients(&self, p: &Point, order: u8) -> Result<[Jet; 3]> {
        let [x, y, z] = Jet::coords(p.to_array(), order);
        let zero = Jet::real(0.0, order);
        let one = Jet::real(1.0, order);
        Ok(match self {
            VectorField::X => [one, zero, y * -0.5],
            VectorField::Y => [zero, one, x * 0.5],
            VectorField::Z => [zero, zero, one],
            VectorField::R | VectorField::Phi => {
                if p.r() == 0.0 {
                    return Err(Error::SingularFrame);
                }
                let r = radius_jet(p, order)?;
                let ir = r.recip();
                if *self == VectorField::R {
                    [x * ir, y * ir, zero]
                } else {
                    [-(y * ir), x * ir, r * 0.5]
                }
            }
            VectorField::Euler => [x, y, z * 2.0],
        })
    }

    /// Applies the field to a jet; the result has one order less.
    pub fn apply(&self, p: &Point, u: &Jet) -> Result<Jet> {
        if u.order == 0 {
            return Err(Error::Contract(
                "vector field applied to an order-0 jet".into(),
            ));
        }
        let c = self.coefficients(p, u.order - 1)?;
        let mut acc = Jet::real(0.0, u.order - 1);
        for (i, ci) in c.iter().enumerate() {
            acc = acc + *ci * u.deriv(i);
        }
        Ok(acc)
    }

    /// Applies `fields[0] fields[1] ... fields[n-1]` (rightmost first).
    pub fn compose(fields: &[VectorField], p: &Point, u: &Jet) -> Result<Jet> {
        let mut j = *u;
        for f in fields.iter().rev() {
            j = f.apply(p, &j)?;
        }
        Ok(j)
    }
}

/// Sub-Laplacian `X^2 + Y^2` of a jet of order >= 2.
pub fn sub_laplacian(p: &Point, u: &Jet) -> Result<Jet> {
    use VectorField::{X, Y};
    Ok(VectorField::compose(&[X, X], p, u)? + VectorField::compose(&[Y, Y], p, u)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    Cartesian,
    Cylindrical,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrameDerivatives {
    pub xu: C,
    pub yu: C,
    pub zu: C,
    /// Present for the cylindrical frame.
    pub ru: Option<C>,
    pub phiu: Option<C>,
    /// Horizontal gradient norm `sqrt(|Xu|^2 + |Yu|^2)`.
    pub grad_norm: f64,
}

pub fn apply_frame(u: &ScalarField, p: &Point, frame: Frame) -> Result<FrameDerivatives> {
    if frame == Frame::Cylindrical && p.r() == 0.0 {
        return Err(Error::SingularFrame);
    }
    let j = u.jet(p, 1)?;
    let xu = VectorField::X.apply(p, &j)?.v;
    let yu = VectorField::Y.apply(p, &j)?.v;
    let zu = j.g[2];
    let (ru, phiu) = match frame {
        Frame::Cartesian => (None, None),
        Frame::Cylindrical => (
            Some(VectorField::R.apply(p, &j)?.v),
            Some(VectorField::Phi.apply(p, &j)?.v),
        ),
    };
    Ok(FrameDerivatives {
        xu,
        yu,
        zu,
        ru,
        phiu,
        grad_norm: (xu.norm_sqr() + yu.norm_sqr()).sqrt(),
    })
}

pub fn koranyi_norm(p: &Point) -> f64 {
    let r2 = p.x * p.x + p.y * p.y;
    (r2 * r2 + 16.0 * p.z * p.z).sqrt().sqrt()
}

/// The weight `r^2 / rho^4 = |grad rho|^2 / rho^2`.
pub fn hardy_weight(p: &Point) -> Result<f64> {
    if p.is_origin() {
        return Err(Error::SingularPoint("Hardy weight at the origin".into()));
    }
    let r2 = p.x * p.x + p.y * p.y;
    Ok(r2 / (r2 * r2 + 16.0 * p.z * p.z))
}

/// `(r d/dr + 2z d/dz) u` at `p`.
pub fn euler_field(u: &ScalarField, p: &Point) -> Result<C> {
    let j = u.jet(p, 1)?;
    Ok(VectorField::Euler.apply(p, &j)?.v)
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutatorReport {
    pub entries: Vec<(String, f64)>,
    pub max_discrepancy: f64,
}

fn test_fields() -> Vec<FieldExpr> {
    let m = |coef, powers| Monomial { coef, powers };
    vec![
        FieldExpr::Polynomial {
            terms: vec![m(1.0, [1, 1, 1])],
        },
        FieldExpr::Polynomial {
            terms: vec![
                m(0.7, [3, 0, 1]),
                m(-1.1, [0, 2, 2]),
                m(0.3, [1, 2, 0]),
                m(2.0, [0, 0, 1]),
            ],
        },
        FieldExpr::Exp {
            arg: Box::new(FieldExpr::Polynomial {
                terms: vec![m(0.4, [1, 0, 0]), m(-0.3, [0, 1, 1]), m(0.2, [0, 0, 2])],
            }),
        }
        .times(FieldExpr::Cos {
            arg: Box::new(FieldExpr::Polynomial {
                terms: vec![m(0.5, [1, 1, 0]), m(1.0, [0, 0, 1])],
            }),
        }),
    ]
}

/// Checks the bracket relations of the frames on a battery of fields:
/// `[X,Y] = Z`, `[X,Z] = [Y,Z] = 0`, `[Phi,R] = Phi/r - Z` (off the center
/// line) and the magnetic double commutators `[[P,Q],P] = -i b1`,
/// `[[P,Q],Q] = -i b2` for `P = X + i A_x`, `Q = Y + i A_y` with the
/// potentials `A = |B| x^2/2 dy` and a generic polynomial potential.
pub fn commutator_check(p: &Point) -> Result<CommutatorReport> {
    use VectorField::*;
    let mut entries = Vec::new();
    for (idx, f) in test_fields().iter().enumerate() {
        let u2 = f.jet(p, 2)?;
        let comm = |a: VectorField, b: VectorField| -> Result<Jet> {
            Ok(VectorField::compose(&[a, b], p, &u2)? - VectorField::compose(&[b, a], p, &u2)?)
        };
        let zu = Z.apply(p, &u2)?.v;
        entries.push((format!("[X,Y]-Z field{idx}"), (comm(X, Y)?.v - zu).norm()));
        entries.push((format!("[X,Z] field{idx}"), comm(X, Z)?.v.norm()));
        entries.push((format!("[Y,Z] field{idx}"), comm(Y, Z)?.v.norm()));
        if p.r() > 0.0 {
            let rhs = Phi.apply(p, &u2)?.v / p.r() - zu;
            entries.push((
                format!("[Phi,R] field{idx}"),
                (comm(Phi, R)?.v - rhs).norm(),
            ));
        }
        let u3 = f.jet(p, 3)?;
        let b = 1.3;
        let uniform = move |q: &Point, o: u8| -> Result<[Jet; 2]> {
            let [x, _, _] = Jet::coords(q.to_array(), o);
            Ok([Jet::real(0.0, o), x * x * (0.5 * b)])
        };
        let (d1, d2) = double_commutator_defect(p, &u3, &uniform)?;
        entries.push((format!("uniform [[P,Q],P] field{idx}"), d1));
        entries.push((format!("uniform [[P,Q],Q] field{idx}"), d2));
        let generic = |q: &Point, o: u8| -> Result<[Jet; 2]> {
            let [x, y, z] = Jet::coords(q.to_array(), o);
            Ok([
                x * y * 0.4 + z * z * 0.3 - y,
                x * x * z * 0.2 + y * y * 0.5 + x,
            ])
        };
        let (d1, d2) = double_commutator_defect(p, &u3, &generic)?;
        entries.push((format!("generic [[P,Q],P] field{idx}"), d1));
        entries.push((format!("generic [[P,Q],Q] field{idx}"), d2));
    }
    let max_discrepancy = entries.iter().map(|e| e.1).fold(0.0, f64::max);
    Ok(CommutatorReport {
        entries,
        max_discrepancy,
    })
}

type PotentialJets<'a> = dyn Fn(&Point, u8) -> Result<[Jet; 2]> + 'a;

/// Defects `|[[P,Q],P]u + i b1 u|` and `|[[P,Q],Q]u + i b2 u|` for an
/// order-3 jet `u`, with `b1 = X F - Z A_x`, `b2 = Y F - Z A_y`,
/// `F = X A_y - Y A_x`.
fn double_commutator_defect(p: &Point, u: &Jet, a: &PotentialJets) -> Result<(f64, f64)> {
    use VectorField::*;
    let ops = |w: &Jet, which: usize| -> Result<Jet> {
        let o = w.order - 1;
        let [ax, ay] = a(p, o)?;
        let (field, pot) = if which == 0 { (X, ax) } else { (Y, ay) };
        Ok(field.apply(p, w)? + (pot * w.truncate(o)).mul_i())
    };
    let bracket = |w: &Jet| -> Result<Jet> { Ok(ops(&ops(w, 1)?, 0)? - ops(&ops(w, 0)?, 1)?) };
    let pq_p = bracket(&ops(u, 0)?)?.v - ops(&bracket(u)?, 0)?.v;
    let pq_q = bracket(&ops(u, 1)?)?.v - ops(&bracket(u)?, 1)?.v;
    let [ax, ay] = a(p, 2)?;
    let f = X.apply(p, &ay)? - Y.apply(p, &ax)?;
    let b1 = X.apply(p, &f)?.v - Z.apply(p, &ax)?.v;
    let b2 = Y.apply(p, &f)?.v - Z.apply(p, &ay)?.v;
    let i = C::new(0.0, 1.0);
    Ok(((pq_p + i * b1 * u.v).norm(), (pq_q + i * b2 * u.v).norm()))
}

/// `|Delta(rho^-2)|` at `p`, which vanishes away from the origin.
pub fn fundamental_harmonicity_check(p: &Point) -> Result<f64> {
    if p.is_origin() {
        return Err(Error::SingularPoint(
            "fundamental solution at the origin".into(),
        ));
    }
    let rho = koranyi_jet(p, 2)?;
    let g = rho.powf(-2.0);
    Ok(sub_laplacian(p, &g)?.v.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xyz_commutator_example() {
        let u: ScalarField = FieldExpr::Polynomial {
            terms: vec![Monomial {
                coef: 1.0,
                powers: [1, 1, 1],
            }],
        }
        .into();
        let p = Point::new(1.0, 2.0, 3.0);
        let j = u.jet(&p, 2).unwrap();
        let xy = VectorField::compose(&[VectorField::X, VectorField::Y], &p, &j).unwrap();
        let yx = VectorField::compose(&[VectorField::Y, VectorField::X], &p, &j).unwrap();
        assert!(((xy - yx).v - C::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn commutators_hold_at_generic_points() {
        for p in [Point::new(0.3, -0.8, 1.1), Point::new(-1.5, 0.2, -0.4)] {
            let rep = commutator_check(&p).unwrap();
            assert!(rep.max_discrepancy < 1e-9, "{:?}", rep.entries);
        }
    }

    #[test]
    fn cylindrical_frame_is_singular_on_axis() {
        let u = ScalarField::expr(FieldExpr::X);
        assert!(matches!(
            apply_frame(&u, &Point::new(0.0, 0.0, 1.0), Frame::Cylindrical),
            Err(Error::SingularFrame)
        ));
        assert!(hardy_weight(&Point::new(0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn fundamental_solution_on_axis() {
        assert!(fundamental_harmonicity_check(&Point::new(0.0, 0.0, 1.0)).unwrap() < 1e-12);
    }
}
