use heisenmag::forms::catalog::*;
use heisenmag::forms::*;
use heisenmag::heisenberg::{FieldExpr, Monomial, Point, ScalarField, VectorField};
use heisenmag::Complex64 as C;
use proptest::prelude::*;

const CART: Representation = Representation::Cartesian;
const CYL: Representation = Representation::Cylindrical;

fn poly(terms: &[(f64, [u32; 3])]) -> FieldExpr {
    FieldExpr::Polynomial {
        terms: terms
            .iter()
            .map(|&(coef, powers)| Monomial { coef, powers })
            .collect(),
    }
}

fn cubic(c: &[f64]) -> FieldExpr {
    let mut terms = Vec::new();
    let mut k = 0;
    for a in 0..=3u32 {
        for b in 0..=(3 - a) {
            for d in 0..=(3 - a - b) {
                if a + b + d > 0 {
                    terms.push((c[k % c.len()], [a, b, d]));
                    k += 1;
                }
            }
        }
    }
    poly(&terms)
}

fn sample() -> Vec<Point> {
    cylinder_sample([0.2, 2.0], 1.0, 3, 4, 3)
}

fn close(a: C, b: f64, tol: f64) -> bool {
    (a - C::new(b, 0.0)).norm() <= tol
}

#[test]
fn d_h_examples() {
    let p = Point::new(0.7, -0.4, 0.9);
    let v = d_h(&GaugeFunction::new(FieldExpr::X))
        .eval(&p, CART)
        .unwrap();
    assert!(close(v[0], 1.0, 1e-15) && close(v[1], 0.0, 1e-15));

    let v = d_h(&GaugeFunction::new(FieldExpr::Angle))
        .eval(&p, CYL)
        .unwrap();
    assert!(close(v[0], 0.0, 1e-14), "{v:?}");
    assert!(close(v[1], 1.0 / p.r(), 1e-14));

    let v = d_h(&GaugeFunction::new(FieldExpr::Z))
        .eval(&p, CART)
        .unwrap();
    assert!(close(v[0], 0.2, 1e-15) && close(v[1], 0.35, 1e-15));
}

#[test]
fn rumin_d_examples() {
    let p = Point::new(-1.1, 0.3, 2.0);
    let b = rumin_d(&uniform_potential(3.0))
        .unwrap()
        .eval(&p, CART)
        .unwrap();
    assert!(close(b[0], 3.0, 1e-13) && close(b[1], 0.0, 1e-13));

    for alpha in [0.0, 0.3, -2.5] {
        let b = rumin_d(&ab_potential(alpha)).unwrap();
        assert!(
            b.max_difference(&Horizontal2Form::zero(), &sample())
                .unwrap()
                < 1e-12
        );
    }
    assert!(rumin_d(&ab_potential(1.0))
        .unwrap()
        .eval(&Point::new(0.0, 0.0, 1.0), CYL)
        .is_err());
}

#[test]
fn closedness_examples() {
    assert!(
        is_closed(&uniform_field(3.0), &sample())
            .unwrap()
            .max_residual
            < 1e-14
    );

    let a = Horizontal1Form::cartesian(
        cubic(&[0.3, -0.2, 0.5, 0.1, 0.7]).into(),
        cubic(&[-0.4, 0.6, 0.2, -0.1]).into(),
    );
    let rep = is_closed(&rumin_d(&a).unwrap(), &sample()).unwrap();
    assert!(rep.closed && rep.max_residual <= 1e-6, "{rep:?}");

    let tilted = Horizontal2Form::cylindrical(
        unit_moment_profile(1.0).times(FieldExpr::Z).into(),
        ScalarField::zero(),
    );
    let rep = is_closed(&tilted, &sample()).unwrap();
    assert!(!rep.closed && rep.max_residual > 1e-2, "{rep:?}");
}

#[test]
fn b2_from_b1_examples() {
    let p = Point::from_cylindrical(0.6, 1.1, -0.3);
    let b2 = b2_from_b1(&unit_moment_profile(1.0).into(), Some(1.0));
    assert!(b2.eval(&p).unwrap().norm() < 1e-15);

    // chi(r) exp(-z^2): b_2 = (beta'(z) / r) int_0^r c t^2 (1 - t^2)^3 / 2 dt.
    let beta = FieldExpr::Exp {
        arg: Box::new(poly(&[(-1.0, [0, 0, 2])])),
    };
    let b1: ScalarField = unit_moment_profile(1.0).times(beta).into();
    let b2 = b2_from_b1(&b1, Some(1.0));
    let c = 315.0 / 8.0;
    for (r, z) in [(0.3f64, 0.4f64), (0.8, -1.2), (1.5, 0.7)] {
        let t = r.min(1.0);
        let m = t.powi(3) / 3.0 - 3.0 * t.powi(5) / 5.0 + 3.0 * t.powi(7) / 7.0 - t.powi(9) / 9.0;
        let expected = -2.0 * z * (-z * z).exp() / r * c * m / 2.0;
        let got = b2.eval(&Point::from_cylindrical(r, 0.4, z)).unwrap();
        assert!(close(got, expected, 1e-10), "r={r}: {got} vs {expected}");
    }
    let form = Horizontal2Form::closed_from_b1(b1, Some(1.0));
    assert!(is_closed(&form, &sample()).unwrap().max_residual <= 1e-8);
}

#[test]
fn primitive_examples() {
    let b = radial_field(1.0);
    let prim = primitive(&b).unwrap();
    let c = 315.0 / 8.0;
    let anti = |t: f64| t - t.powi(3) + 3.0 * t.powi(5) / 5.0 - t.powi(7) / 7.0;
    for r in [0.1, 0.45, 0.9] {
        let got = prim.eval(&Point::from_cylindrical(r, -2.0, 0.5)).unwrap();
        assert!(close(got, -c * (anti(1.0) - anti(r)), 1e-10));
    }
    assert_eq!(
        prim.eval(&Point::from_cylindrical(1.3, 0.0, 0.0)).unwrap(),
        C::new(0.0, 0.0)
    );
    for (name, b) in cylinder_fields(1.0) {
        let prim = primitive(&b).unwrap();
        for p in cylinder_sample([0.1, 0.95], 0.8, 3, 3, 3) {
            let rb = VectorField::R
                .apply(&p, &prim.jet(&p, 1).unwrap())
                .unwrap()
                .v;
            let b1 = b.eval(&p, CYL).unwrap()[0];
            assert!((rb - b1).norm() < 1e-8, "{name} at {p:?}");
        }
    }
    assert!(primitive(&uniform_field(1.0)).is_err());
}

#[test]
fn support_examples() {
    let s = SupportSamples::default();
    let angular = support_check(&angular_field(1.0), 1.0, &s).unwrap();
    assert!(angular.supported, "{angular:?}");
    assert!(angular.b2_outside_max < 1e-9);
    assert!(
        !support_check(&tilted_field(1.0), 1.0, &s)
            .unwrap()
            .supported
    );
    assert!(
        support_check(&zero_moment_field(1.0), 1.0, &s)
            .unwrap()
            .supported
    );
}

#[test]
fn poincare_examples() {
    let a = poincare_gauge(&Horizontal2Form::zero());
    let v = a.eval(&Point::new(0.5, 0.2, -0.1), CYL).unwrap();
    assert!(v[0].norm() == 0.0 && v[1].norm() == 0.0);

    let b = uniform_field(3.0);
    let d = rumin_d(&poincare_gauge(&b)).unwrap();
    assert!(
        d.max_difference(&b.to_representation(CYL), &sample())
            .unwrap()
            <= 1e-6
    );

    let compact = compact_field(1.0, 0.5);
    let a = poincare_gauge(&compact);
    for z in [-0.8, 0.51, 1.5] {
        let v = a.eval(&Point::from_cylindrical(0.6, 0.3, z), CYL).unwrap();
        assert!(v[1].norm() == 0.0, "z={z}: {v:?}");
    }
    let v = a
        .eval(&Point::from_cylindrical(0.6, 0.3, 0.2), CYL)
        .unwrap();
    assert!(v[1].norm() > 1e-4);
}

#[test]
fn flux_examples() {
    let f = flux(&radial_field(1.0), &[-1.0, 0.5, 2.0]).unwrap();
    assert!((f.value + 1.0).abs() < 1e-10, "{f:?}");
    assert!(f.route_discrepancy < 1e-8);
    let f = flux(&radial_field(2.5), &[0.3]).unwrap();
    assert!((f.value + 1.0).abs() < 1e-10);

    let f = flux(&compact_field(1.0, 0.5), &[-0.2, 0.3]).unwrap();
    assert!(f.value.abs() < 1e-12);

    let b = zero_moment_field(1.0).plus(&radial_field(1.0));
    let base = flux(&b, &[0.7]).unwrap().value;
    let scaled = flux(&b.scaled(-2.5), &[0.7]).unwrap().value;
    assert!((scaled + 2.5 * base).abs() < 1e-10);

    assert!(flux(&tilted_field(1.0), &[0.5]).is_err());
}

#[test]
fn exterior_gauge_examples() {
    let zero = Horizontal2Form::zero().with_support_radius(1.0);
    let a = exterior_ab_gauge(&zero, 1.0).unwrap();
    for p in sample() {
        let v = a.eval(&p, CYL).unwrap();
        assert!(v[0].norm() == 0.0 && v[1].norm() == 0.0);
    }

    let b = radial_field(1.0);
    let fb = flux(&b, &[]).unwrap().value;
    let a = exterior_ab_gauge(&b, 1.0).unwrap();
    for phi in [-2.0, 0.0, 1.3, 3.0] {
        for z in [-0.5, 0.0, 1.0] {
            let v = a.eval(&Point::from_cylindrical(2.0, phi, z), CYL).unwrap();
            assert!(close(v[1] * 2.0, fb, 1e-10), "phi={phi} z={z}: {v:?}");
            assert!(v[0].norm() == 0.0);
        }
    }

    assert!(exterior_ab_gauge(&tilted_field(1.0), 1.0).is_err());
}

#[test]
fn gauge_round_trips() {
    let pts = cylinder_sample([0.15, 1.8], 1.0, 3, 3, 3);
    for (name, b) in cylinder_fields(1.0) {
        let a0 = poincare_gauge(&b);
        let a1 = exterior_ab_gauge(&b, 1.0).unwrap();
        let e0 = rumin_d(&a0).unwrap().max_difference(&b, &pts).unwrap();
        let e1 = rumin_d(&a1).unwrap().max_difference(&b, &pts).unwrap();
        assert!(e0 <= 1e-6 && e1 <= 1e-6, "{name}: {e0:e} {e1:e}");
        let diff = rumin_d(&a0.plus(&a1.scaled(-1.0))).unwrap();
        assert!(diff.max_difference(&Horizontal2Form::zero(), &pts).unwrap() <= 1e-6);
        for p in &pts {
            let (lhs, rhs) = b2_primitive_identity(&b, p).unwrap();
            assert!((lhs - rhs).abs() <= 1e-6, "{name} at {p:?}: {lhs} vs {rhs}");
        }
    }
}

// A gauge change leaves D A unchanged, hence also the flux integrand. Only
// order-0 values of D(A + d_H f) are available for a polynomial f, so the
// check is pointwise on the integration disk.
#[test]
fn flux_is_gauge_invariant() {
    let b = radial_field(1.0);
    let f = GaugeFunction::new(cubic(&[0.2, -0.3, 0.1]));
    let shifted = rumin_d(&gauge_shift(&poincare_gauge(&b), &f)).unwrap();
    let pts = cylinder_sample([0.05, 1.3], 0.8, 6, 7, 3);
    assert!(b.max_difference(&shifted, &pts).unwrap() < 1e-9);
    assert!((flux(&b, &[0.4]).unwrap().value + 1.0).abs() < 1e-10);
}

#[test]
fn ab_potential_examples() {
    let p = Point::from_cylindrical(2.0, 0.9, -0.4);
    let v = ab_potential(0.0).eval(&p, CYL).unwrap();
    assert!(v[0].norm() == 0.0 && v[1].norm() == 0.0);
    assert!(close(
        ab_potential(0.5).eval(&p, CYL).unwrap()[1],
        0.25,
        1e-15
    ));
    for n in [-2i32, 1, 3] {
        let shift = GaugeFunction::new(FieldExpr::Angle.scaled(-n as f64));
        let a = gauge_shift(&ab_potential(n as f64), &shift);
        for q in sample() {
            let v = a.eval(&q, CYL).unwrap();
            assert!(v[0].norm() < 1e-13 && v[1].norm() < 1e-13, "n={n}: {v:?}");
        }
    }
    assert!(ab_potential(0.5)
        .eval(&Point::new(0.0, 0.0, 1.0), CYL)
        .is_err());
}

#[test]
fn representations_agree() {
    let a =
        Horizontal1Form::cylindrical(cubic(&[0.1, 0.4]).into(), cubic(&[-0.3, 0.2, 0.6]).into());
    let back = a.to_representation(CART).to_representation(CYL);
    for p in sample() {
        let (u, v) = (a.eval(&p, CYL).unwrap(), back.eval(&p, CYL).unwrap());
        assert!((u[0] - v[0]).norm() < 1e-9 && (u[1] - v[1]).norm() < 1e-9);
    }
    assert!(a.eval(&Point::new(0.0, 0.0, 0.5), CART).is_err());
}

#[test]
fn finite_difference_coefficients_need_opt_in() {
    let exact = poly(&[(0.5, [1, 1, 0]), (0.25, [0, 0, 2])]);
    let e2 = exact.clone();
    let sampled = ScalarField::sampled(move |p| Ok(e2.jet(p, 0)?.v), 1e-5);
    let a_fd = Horizontal1Form::cartesian(ScalarField::zero(), sampled);
    assert!(rumin_d(&a_fd).is_err());
    let d_fd = rumin_d_with(
        &a_fd,
        RuminOptions {
            allow_finite_difference: true,
        },
    )
    .unwrap();
    let d = rumin_d(&Horizontal1Form::cartesian(
        ScalarField::zero(),
        exact.into(),
    ))
    .unwrap();
    assert!(d.max_difference(&d_fd, &sample()).unwrap() <= FINITE_DIFFERENCE_TOL);
}

#[test]
fn descriptors_round_trip() {
    use heisenmag::heisenberg::{Axis, TabulatedField};
    let ax = |n| Axis {
        min: -1.0,
        max: 1.0,
        n,
    };
    let table = TabulatedField::sample(&FieldExpr::Koranyi.into(), ax(5), ax(4), ax(6)).unwrap();
    let forms = vec![
        FormDescriptor::of_two_form(&angular_field(1.3)).unwrap(),
        FormDescriptor::of_two_form(&uniform_field(0.7)).unwrap(),
        FormDescriptor::of_one_form(&Horizontal1Form::cartesian(
            ScalarField::tabulated(table),
            FieldExpr::Angle.into(),
        ))
        .unwrap(),
    ];
    let pts = cylinder_sample([0.2, 1.2], 0.9, 3, 3, 3);
    for d in forms {
        let json = d.to_json().unwrap();
        let back = FormDescriptor::from_json(&json).unwrap();
        assert_eq!(back, d);
        if d.degree == 2 {
            let (x, y) = (d.two_form().unwrap(), back.two_form().unwrap());
            for p in &pts {
                assert_eq!(x.eval(p, CYL).unwrap(), y.eval(p, CYL).unwrap());
            }
        } else {
            let (x, y) = (d.one_form().unwrap(), back.one_form().unwrap());
            for p in &pts {
                assert_eq!(x.eval(p, CART).unwrap(), y.eval(p, CART).unwrap());
            }
        }
    }
    assert!(FormDescriptor::of_one_form(&poincare_gauge(&uniform_field(1.0))).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn d_of_d_h_vanishes(c in prop::collection::vec(-1.0f64..1.0, 19)) {
        let b = rumin_d(&d_h(&GaugeFunction::new(cubic(&c)))).unwrap();
        prop_assert!(b.max_difference(&Horizontal2Form::zero(), &sample()).unwrap() <= 1e-10);
    }

    #[test]
    fn d_is_gauge_invariant_and_closed(
        ca in prop::collection::vec(-1.0f64..1.0, 7),
        cb in prop::collection::vec(-1.0f64..1.0, 5),
        cf in prop::collection::vec(-1.0f64..1.0, 11),
    ) {
        let a = Horizontal1Form::cartesian(cubic(&ca).into(), cubic(&cb).into());
        let b = rumin_d(&a).unwrap();
        let b2 = rumin_d(&gauge_shift(&a, &GaugeFunction::new(cubic(&cf)))).unwrap();
        prop_assert!(b.max_difference(&b2, &sample()).unwrap() <= 1e-9);
        prop_assert!(is_closed(&b, &sample()).unwrap().max_residual <= 1e-9);
        let cyl = rumin_d(&a.to_representation(CYL)).unwrap().to_representation(CART);
        prop_assert!(b.max_difference(&cyl, &sample()).unwrap() <= 1e-9);
    }
}

#[test]
fn documented_descriptors_parse() {
    let doc = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../docs/forms-descriptor.md"
    ))
    .unwrap();
    let blocks: Vec<&str> = doc
        .split("```json")
        .skip(1)
        .map(|b| b.split("```").next().unwrap())
        .collect();
    assert_eq!(blocks.len(), 2);
    let b = FormDescriptor::from_json(blocks[0])
        .unwrap()
        .two_form()
        .unwrap();
    let f = flux(&b, &[0.5]).unwrap();
    assert!((f.value.abs() - 1.0).abs() < 1e-8, "{}", f.value);
    let a = FormDescriptor::from_json(blocks[1])
        .unwrap()
        .one_form()
        .unwrap();
    let pts = sample();
    assert!(
        rumin_d(&a)
            .unwrap()
            .max_difference(&uniform_field(2.0), &pts)
            .unwrap()
            <= 1e-12
    );
}
