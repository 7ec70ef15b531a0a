//! Horizontal 1- and 2-forms of the Rumin complex on the Heisenberg group.
//!
//! A form is a pair of coefficient fields in either the Cartesian coframe
//! (`dx`, `dy` modulo the contact form, and `dx ^ w`, `dy ^ w`) or the
//! cylindrical one (`dr`, `r dphi`, and `dr ^ w`, `r dphi ^ w`). Derived forms
//! (representation changes, `d_H`, `D`, gauges) are evaluated lazily from
//! their inputs, so their derivatives are exact whenever the inputs are
//! analytic. A jet of order `k` of `D A` consumes order `k + 2` of `A`; with
//! third-order jets, `D A` is available up to first order.

pub mod catalog;
pub mod cylinder;
pub mod descriptor;

use crate::error::{contract, Error, Result};
use crate::heisenberg::{radius_jet, DerivativeMode, Point, ScalarField, VectorField};
use crate::jet::{Jet, MAX_ORDER};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

pub use cylinder::{
    b2_from_b1, b2_primitive_identity, exterior_ab_gauge, flux, poincare_gauge, primitive,
    support_check, FluxReport, FluxSample, SupportReport, SupportSamples,
};
pub use descriptor::{CoefficientDescriptor, FormDescriptor};

/// Tolerance for identities evaluated with analytic derivatives.
pub const ANALYTIC_TOL: f64 = 1e-6;
/// Relaxed tolerance once finite differences enter a second-order operator.
pub const FINITE_DIFFERENCE_TOL: f64 = 1e-4;

pub fn tolerance_for(mode: DerivativeMode) -> f64 {
    match mode {
        DerivativeMode::Analytic => ANALYTIC_TOL,
        DerivativeMode::FiniteDifference { .. } => FINITE_DIFFERENCE_TOL,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    Cartesian,
    Cylindrical,
}

type JointFn = dyn Fn(&Point, u8) -> Result<[Jet; 2]> + Send + Sync;

#[derive(Clone)]
enum Coeffs {
    Fields([ScalarField; 2]),
    /// Both coefficients from one evaluation (derived forms).
    Joint(Arc<JointFn>),
}

/// Coefficient pair shared by both degrees.
#[derive(Clone)]
struct Pair {
    repr: Representation,
    coeffs: Coeffs,
    mode: DerivativeMode,
}

fn combined_mode(a: DerivativeMode, b: DerivativeMode) -> DerivativeMode {
    match (a, b) {
        (DerivativeMode::FiniteDifference { h }, _)
        | (_, DerivativeMode::FiniteDifference { h }) => DerivativeMode::FiniteDifference { h },
        _ => DerivativeMode::Analytic,
    }
}

/// Rotates a coefficient pair between the Cartesian and cylindrical coframes.
fn rotate(p: &Point, c: [Jet; 2], to: Representation) -> Result<[Jet; 2]> {
    if p.r() == 0.0 {
        return Err(Error::SingularFrame);
    }
    let order = c[0].order.min(c[1].order);
    let [x, y, _] = Jet::coords(p.to_array(), order);
    let ir = radius_jet(p, order)?.recip();
    let (cos, sin) = (x * ir, y * ir);
    Ok(match to {
        Representation::Cylindrical => [cos * c[0] + sin * c[1], cos * c[1] - sin * c[0]],
        Representation::Cartesian => [cos * c[0] - sin * c[1], sin * c[0] + cos * c[1]],
    })
}

impl Pair {
    fn fields(repr: Representation, c: [ScalarField; 2]) -> Self {
        let mode = combined_mode(c[0].mode(), c[1].mode());
        Pair {
            repr,
            coeffs: Coeffs::Fields(c),
            mode,
        }
    }

    fn joint(
        repr: Representation,
        mode: DerivativeMode,
        f: impl Fn(&Point, u8) -> Result<[Jet; 2]> + Send + Sync + 'static,
    ) -> Self {
        Pair {
            repr,
            coeffs: Coeffs::Joint(Arc::new(f)),
            mode,
        }
    }

    fn own_jets(&self, p: &Point, order: u8) -> Result<[Jet; 2]> {
        match &self.coeffs {
            Coeffs::Fields([a, b]) => Ok([a.jet(p, order)?, b.jet(p, order)?]),
            Coeffs::Joint(f) => f(p, order),
        }
    }

    fn jets(&self, p: &Point, order: u8, want: Representation) -> Result<[Jet; 2]> {
        let c = self.own_jets(p, order)?;
        if want == self.repr {
            Ok(c)
        } else {
            rotate(p, c, want)
        }
    }

    /// Only coefficient `i`, avoiding the other one when possible.
    fn component(&self, p: &Point, order: u8, want: Representation, i: usize) -> Result<Jet> {
        match &self.coeffs {
            Coeffs::Fields(c) if want == self.repr => c[i].jet(p, order),
            _ => Ok(self.jets(p, order, want)?[i]),
        }
    }

    fn coefficient(&self, i: usize) -> ScalarField {
        match &self.coeffs {
            Coeffs::Fields(c) => c[i].clone(),
            Coeffs::Joint(f) => {
                let f = f.clone();
                ScalarField::from_jet_fn(move |p, o| Ok(f(p, o)?[i]))
            }
        }
    }

    fn converted(&self, want: Representation) -> Pair {
        if want == self.repr {
            return self.clone();
        }
        let me = self.clone();
        Pair::joint(want, self.mode, move |p, o| me.jets(p, o, want))
    }

    fn add(&self, other: &Pair) -> Pair {
        let (a, b) = (self.clone(), other.clone());
        let repr = self.repr;
        Pair::joint(repr, combined_mode(a.mode, b.mode), move |p, o| {
            let x = a.jets(p, o, repr)?;
            let y = b.jets(p, o, repr)?;
            Ok([x[0] + y[0], x[1] + y[1]])
        })
    }

    fn scaled(&self, s: f64) -> Pair {
        let a = self.clone();
        Pair::joint(self.repr, self.mode, move |p, o| {
            let x = a.own_jets(p, o)?;
            Ok([x[0] * s, x[1] * s])
        })
    }
}

impl fmt::Debug for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.coeffs {
            Coeffs::Fields(c) => write!(f, "{:?}{:?}", self.repr, c),
            Coeffs::Joint(_) => write!(f, "{:?}(<derived>)", self.repr),
        }
    }
}

/// A horizontal 1-form (vector potential) modulo the contact form.
#[derive(Clone, Debug)]
pub struct Horizontal1Form {
    pair: Pair,
}

impl Horizontal1Form {
    /// `A = a_x dx + a_y dy`.
    pub fn cartesian(ax: ScalarField, ay: ScalarField) -> Self {
        Horizontal1Form {
            pair: Pair::fields(Representation::Cartesian, [ax, ay]),
        }
    }

    /// `A = alpha_1 dr + alpha_2 r dphi`.
    pub fn cylindrical(alpha1: ScalarField, alpha2: ScalarField) -> Self {
        Horizontal1Form {
            pair: Pair::fields(Representation::Cylindrical, [alpha1, alpha2]),
        }
    }

    pub fn zero() -> Self {
        Self::cartesian(ScalarField::zero(), ScalarField::zero())
    }

    pub(crate) fn derived(
        repr: Representation,
        mode: DerivativeMode,
        f: impl Fn(&Point, u8) -> Result<[Jet; 2]> + Send + Sync + 'static,
    ) -> Self {
        Horizontal1Form {
            pair: Pair::joint(repr, mode, f),
        }
    }

    pub fn representation(&self) -> Representation {
        self.pair.repr
    }

    pub fn mode(&self) -> DerivativeMode {
        self.pair.mode
    }

    /// Coefficient field `i` in the form's own representation.
    pub fn coefficient(&self, i: usize) -> ScalarField {
        self.pair.coefficient(i)
    }

    pub fn coefficient_fields(&self) -> Option<[&ScalarField; 2]> {
        match &self.pair.coeffs {
            Coeffs::Fields([a, b]) => Some([a, b]),
            Coeffs::Joint(_) => None,
        }
    }

    pub fn jets(&self, p: &Point, order: u8, want: Representation) -> Result<[Jet; 2]> {
        self.pair.jets(p, order, want)
    }

    pub fn eval(&self, p: &Point, want: Representation) -> Result<[C; 2]> {
        let [a, b] = self.jets(p, 0, want)?;
        Ok([a.v, b.v])
    }

    pub fn to_representation(&self, want: Representation) -> Self {
        Horizontal1Form {
            pair: self.pair.converted(want),
        }
    }

    pub fn plus(&self, other: &Horizontal1Form) -> Self {
        Horizontal1Form {
            pair: self.pair.add(&other.pair),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Horizontal1Form {
            pair: self.pair.scaled(s),
        }
    }
}

/// A horizontal 2-form (magnetic field), optionally with a declared support
/// radius `r0` (support in the cylinder `r <= r0`).
#[derive(Clone, Debug)]
pub struct Horizontal2Form {
    pair: Pair,
    pub support_radius: Option<f64>,
    second_from_first: bool,
}

impl Horizontal2Form {
    /// `B = b_1 dx ^ w + b_2 dy ^ w`.
    pub fn cartesian(b1: ScalarField, b2: ScalarField) -> Self {
        Horizontal2Form {
            pair: Pair::fields(Representation::Cartesian, [b1, b2]),
            support_radius: None,
            second_from_first: false,
        }
    }

    /// `B = b_1 dr ^ w + b_2 r dphi ^ w`.
    pub fn cylindrical(b1: ScalarField, b2: ScalarField) -> Self {
        Horizontal2Form {
            pair: Pair::fields(Representation::Cylindrical, [b1, b2]),
            support_radius: None,
            second_from_first: false,
        }
    }

    /// The closed cylindrical form whose radial coefficient is `b1`; the
    /// angular coefficient is reconstructed by [`b2_from_b1`].
    pub fn closed_from_b1(b1: ScalarField, support_radius: Option<f64>) -> Self {
        let b2 = b2_from_b1(&b1, support_radius);
        Horizontal2Form {
            pair: Pair::fields(Representation::Cylindrical, [b1, b2]),
            support_radius,
            second_from_first: true,
        }
    }

    pub fn zero() -> Self {
        Self::cartesian(ScalarField::zero(), ScalarField::zero())
    }

    pub fn with_support_radius(mut self, r0: f64) -> Self {
        self.support_radius = Some(r0);
        self
    }

    pub(crate) fn derived(
        repr: Representation,
        mode: DerivativeMode,
        f: impl Fn(&Point, u8) -> Result<[Jet; 2]> + Send + Sync + 'static,
    ) -> Self {
        Horizontal2Form {
            pair: Pair::joint(repr, mode, f),
            support_radius: None,
            second_from_first: false,
        }
    }

    pub fn representation(&self) -> Representation {
        self.pair.repr
    }

    pub fn mode(&self) -> DerivativeMode {
        self.pair.mode
    }

    /// True when the second coefficient was reconstructed from the first.
    pub fn second_from_first(&self) -> bool {
        self.second_from_first
    }

    pub fn coefficient(&self, i: usize) -> ScalarField {
        self.pair.coefficient(i)
    }

    pub fn coefficient_fields(&self) -> Option<[&ScalarField; 2]> {
        match &self.pair.coeffs {
            Coeffs::Fields([a, b]) => Some([a, b]),
            Coeffs::Joint(_) => None,
        }
    }

    pub fn jets(&self, p: &Point, order: u8, want: Representation) -> Result<[Jet; 2]> {
        self.pair.jets(p, order, want)
    }

    /// Coefficient `i` only, in the requested representation.
    pub fn component(&self, p: &Point, order: u8, want: Representation, i: usize) -> Result<Jet> {
        self.pair.component(p, order, want, i)
    }

    pub fn eval(&self, p: &Point, want: Representation) -> Result<[C; 2]> {
        let [a, b] = self.jets(p, 0, want)?;
        Ok([a.v, b.v])
    }

    pub fn to_representation(&self, want: Representation) -> Self {
        Horizontal2Form {
            pair: self.pair.converted(want),
            support_radius: self.support_radius,
            second_from_first: false,
        }
    }

    pub fn plus(&self, other: &Horizontal2Form) -> Self {
        let support_radius = match (self.support_radius, other.support_radius) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        Horizontal2Form {
            pair: self.pair.add(&other.pair),
            support_radius,
            second_from_first: false,
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Horizontal2Form {
            pair: self.pair.scaled(s),
            support_radius: self.support_radius,
            second_from_first: false,
        }
    }

    /// Largest coefficient difference to `other` over `points`.
    pub fn max_difference(&self, other: &Horizontal2Form, points: &[Point]) -> Result<f64> {
        let repr = self.representation();
        let mut m: f64 = 0.0;
        for p in points {
            let a = self.eval(p, repr)?;
            let b = other.eval(p, repr)?;
            m = m.max((a[0] - b[0]).norm()).max((a[1] - b[1]).norm());
        }
        Ok(m)
    }
}

/// A real gauge function `f`; `A` and `A + d_H f` describe the same field.
#[derive(Clone, Debug)]
pub struct GaugeFunction {
    pub f: ScalarField,
}

impl GaugeFunction {
    pub fn new(f: impl Into<ScalarField>) -> Self {
        GaugeFunction { f: f.into() }
    }
}

fn order_check(order: u8, consumed: u8, what: &str) -> Result<()> {
    contract(order + consumed <= MAX_ORDER, || {
        format!(
            "{what} is available up to derivative order {}",
            MAX_ORDER - consumed
        )
    })
}

/// Horizontal differential `d_H f = (Xf) dx + (Yf) dy`.
pub fn d_h(f: &GaugeFunction) -> Horizontal1Form {
    let field = f.f.clone();
    Horizontal1Form::derived(Representation::Cartesian, f.f.mode(), move |p, k| {
        order_check(k, 1, "d_H f")?;
        let j = field.jet(p, k + 1)?;
        Ok([VectorField::X.apply(p, &j)?, VectorField::Y.apply(p, &j)?])
    })
}

/// `A + d_H f`, in the representation of `A`.
pub fn gauge_shift(a: &Horizontal1Form, f: &GaugeFunction) -> Horizontal1Form {
    a.plus(&d_h(f))
}

/// The Aharonov–Bohm potential `alpha dphi`, i.e. `alpha_1 = 0`,
/// `alpha_2 = alpha / r`.
pub fn ab_potential(alpha: f64) -> Horizontal1Form {
    let a2 = ScalarField::from_jet_fn(move |p, k| {
        if p.r() == 0.0 {
            return Err(Error::SingularPoint(
                "the Aharonov-Bohm potential is undefined at r = 0".into(),
            ));
        }
        Ok(radius_jet(p, k)?.recip() * alpha)
    });
    Horizontal1Form::cylindrical(ScalarField::zero(), a2)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RuminOptions {
    /// Permit coefficients whose derivatives come from finite differences.
    pub allow_finite_difference: bool,
}

/// The Rumin differential `D` on horizontal 1-forms (second order).
pub fn rumin_d(a: &Horizontal1Form) -> Result<Horizontal2Form> {
    rumin_d_with(a, RuminOptions::default())
}

pub fn rumin_d_with(a: &Horizontal1Form, opts: RuminOptions) -> Result<Horizontal2Form> {
    if let DerivativeMode::FiniteDifference { .. } = a.mode() {
        contract(opts.allow_finite_difference, || {
            "D needs second derivatives; finite-difference coefficients require an explicit opt-in"
                .into()
        })?;
    }
    let a = a.clone();
    let repr = a.representation();
    use VectorField::*;
    Ok(Horizontal2Form::derived(repr, a.mode(), move |p, k| {
        order_check(k, 2, "D A")?;
        match repr {
            Representation::Cartesian => {
                let [ax, ay] = a.jets(p, k + 2, repr)?;
                let f = X.apply(p, &ay)? - Y.apply(p, &ax)?;
                let b1 = X.apply(p, &f)? - ax.deriv(2).truncate(k);
                let b2 = Y.apply(p, &f)? - ay.deriv(2).truncate(k);
                Ok([b1, b2])
            }
            Representation::Cylindrical => {
                if p.r() == 0.0 {
                    return Err(Error::SingularFrame);
                }
                let [a1, a2] = a.jets(p, k + 2, repr)?;
                let ir = radius_jet(p, k + 1)?.recip();
                let gamma = R.apply(p, &a2)? + a2.truncate(k + 1) * ir - Phi.apply(p, &a1)?;
                let b1 = R.apply(p, &gamma)? - a1.deriv(2).truncate(k);
                let b2 = Phi.apply(p, &gamma)? - a2.deriv(2).truncate(k);
                Ok([b1, b2])
            }
        }
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosednessReport {
    /// Largest `|(1/r) R(r b_2) - Phi b_1|` over the sample.
    pub max_residual: f64,
    pub worst_point: Option<Point>,
    pub points: usize,
    pub tolerance: f64,
    pub closed: bool,
}

/// Closedness residual `(1/r) R(r b_2) - Phi b_1` (cylindrical coefficients).
pub fn closedness_residual(b: &Horizontal2Form, p: &Point) -> Result<C> {
    let [b1, b2] = b.jets(p, 1, Representation::Cylindrical)?;
    let ir = radius_jet(p, 0)?.recip();
    Ok((VectorField::R.apply(p, &b2)? + b2.truncate(0) * ir - VectorField::Phi.apply(p, &b1)?).v)
}

pub fn is_closed(b: &Horizontal2Form, sample: &[Point]) -> Result<ClosednessReport> {
    let tolerance = tolerance_for(b.mode());
    let mut max_residual: f64 = 0.0;
    let mut worst_point = None;
    for p in sample {
        let res = closedness_residual(b, p)?.norm();
        if res >= max_residual {
            max_residual = res;
            worst_point = Some(*p);
        }
    }
    Ok(ClosednessReport {
        max_residual,
        worst_point,
        points: sample.len(),
        tolerance,
        closed: max_residual <= tolerance,
    })
}

/// Deterministic sample of points in `r in [r_min, r_max]`, `|z| <= z_max`,
/// on `n_r x n_phi x n_z` nodes, avoiding the center line and the angular slit.
pub fn cylinder_sample(
    r: [f64; 2],
    z_max: f64,
    n_r: usize,
    n_phi: usize,
    n_z: usize,
) -> Vec<Point> {
    let mut out = Vec::with_capacity(n_r * n_phi * n_z);
    for i in 0..n_r {
        let rr = r[0] + (r[1] - r[0]) * (i as f64 + 0.5) / n_r as f64;
        for j in 0..n_phi {
            let ph = -std::f64::consts::PI
                + 2.0 * std::f64::consts::PI * (j as f64 + 0.37) / n_phi as f64;
            for l in 0..n_z {
                let z = if n_z == 1 {
                    0.0
                } else {
                    -z_max + 2.0 * z_max * l as f64 / (n_z - 1) as f64
                };
                out.push(Point::from_cylindrical(rr, ph, z));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::{FieldExpr, Monomial};

    fn poly(terms: &[(f64, [u32; 3])]) -> FieldExpr {
        FieldExpr::Polynomial {
            terms: terms
                .iter()
                .map(|&(coef, powers)| Monomial { coef, powers })
                .collect(),
        }
    }

    #[test]
    fn uniform_gauge() {
        let a = Horizontal1Form::cartesian(ScalarField::zero(), poly(&[(1.5, [2, 0, 0])]).into());
        let b = rumin_d(&a).unwrap();
        let p = Point::new(0.3, -1.2, 0.7);
        let v = b.eval(&p, Representation::Cartesian).unwrap();
        assert!((v[0] - C::new(3.0, 0.0)).norm() < 1e-14);
        assert!(v[1].norm() < 1e-14);
    }

    #[test]
    fn cartesian_and_cylindrical_d_agree() {
        let a = Horizontal1Form::cartesian(
            poly(&[(0.4, [1, 1, 1]), (-0.2, [0, 2, 0])]).into(),
            poly(&[(0.7, [3, 0, 0]), (0.1, [0, 1, 2])]).into(),
        );
        let cyl = a.to_representation(Representation::Cylindrical);
        let b1 = rumin_d(&a).unwrap();
        let b2 = rumin_d(&cyl)
            .unwrap()
            .to_representation(Representation::Cartesian);
        let pts = cylinder_sample([0.2, 2.0], 1.0, 3, 4, 3);
        assert!(b1.max_difference(&b2, &pts).unwrap() < 1e-10);
        assert!(is_closed(&b1, &pts).unwrap().max_residual < 1e-10);
    }

    #[test]
    fn ab_potential_is_flat() {
        let b = rumin_d(&ab_potential(0.37)).unwrap();
        let pts = cylinder_sample([0.1, 3.0], 2.0, 3, 3, 2);
        let zero = Horizontal2Form::zero();
        assert!(b.max_difference(&zero, &pts).unwrap() < 1e-13);
    }
}
