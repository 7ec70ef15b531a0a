//! The full acceptance battery with pinned parameters. Every row is tagged
//! with the criterion it belongs to; a timing section per criterion is
//! recorded as `criterion N`.

use crate::commands::{self, timed, ConstantArgs, FiberArgs, Outcome};
use crate::error::CliError;
use crate::report::{Row, Table, Timing};
use clap::Args;
use heisenmag::forms::catalog::{cylinder_fields, uniform_field, uniform_potential};
use heisenmag::forms::{
    cylinder_sample, d_h, exterior_ab_gauge, flux, poincare_gauge, rumin_d, GaugeFunction,
    Horizontal2Form,
};
use heisenmag::heisenberg::{FieldExpr, Monomial};
use heisenmag::spectral1d::{
    ground_state, quartic_lambda, Discretization, Grid1D, SchrodingerOperator1D,
};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Args, Clone, Debug, Default, Serialize)]
pub struct VerifyArgs {
    /// Perturbs the computed constant before the regression verdict.
    #[arg(
        long,
        default_value_t = 0.0,
        hide = true,
        allow_negative_numbers = true
    )]
    #[serde(skip_serializing_if = "crate::commands::is_zero")]
    pub c_offset: f64,
}

/// Per-criterion runtime budgets in seconds.
pub const BUDGETS: [(u8, f64); 10] = [
    (1, 5.0),
    (2, 30.0),
    (3, 60.0),
    (4, 600.0),
    (5, 120.0),
    (6, 120.0),
    (7, 60.0),
    (8, 120.0),
    (9, 30.0),
    (10, 1200.0),
];

fn eigensolver() -> Result<Vec<Row>, CliError> {
    let op = SchrodingerOperator1D::new(Grid1D::new(12.0, 4800)?, |t| t * t);
    let mut rows = vec![Row::within(
        "eigen.harmonic",
        ground_state(&op)?.value,
        1.0,
        1e-6,
    )];
    for g in [-2.0f64, -8.0, -32.0] {
        // (a s - |g|)^2 is an oscillator of frequency a centred at |g|/a.
        let a = (g.abs() / 2.0).sqrt();
        let t = g.abs() / a + 12.0 / a.sqrt();
        let op =
            SchrodingerOperator1D::new(Grid1D::new(t, 4800)?, move |s| (a * s - g.abs()).powi(2));
        rows.push(Row::within_rel(
            format!("eigen.shifted[g={g}]"),
            ground_state(&op)?.value,
            a,
            1e-5,
        ));
    }
    Ok(rows)
}

fn scaling() -> Result<Vec<Row>, CliError> {
    let d = Discretization::default();
    let mut rows = Vec::new();
    for b in [0.5f64, 2.0, 8.0] {
        for g in [-3.0f64, 0.0, 3.0] {
            let lb = quartic_lambda(g, b, d)?.lambda;
            let l1 = quartic_lambda(g * b.powf(-1.0 / 3.0), 1.0, d)?.lambda;
            rows.push(Row::within_rel(
                format!("scaling[b={b},g={g}]"),
                b.powf(2.0 / 3.0) * l1,
                lb,
                1e-5,
            ));
        }
    }
    Ok(rows)
}

/// Cubic polynomial gauge function with coefficients in `[-1, 1]`.
fn random_cubic(rng: &mut ChaCha8Rng) -> FieldExpr {
    let mut terms = Vec::new();
    for a in 0..=3u32 {
        for b in 0..=(3 - a) {
            for c in 0..=(3 - a - b) {
                if a + b + c > 0 {
                    terms.push(Monomial {
                        coef: rng.random_range(-1.0..1.0),
                        powers: [a, b, c],
                    });
                }
            }
        }
    }
    FieldExpr::Polynomial { terms }
}

fn forms(seed: u64) -> Result<Vec<Row>, CliError> {
    let pts = cylinder_sample([0.15, 1.8], 1.0, 3, 3, 3);
    let mut rows = Vec::new();
    for (name, b) in cylinder_fields(1.0) {
        let e0 = rumin_d(&poincare_gauge(&b))?.max_difference(&b, &pts)?;
        let e1 = rumin_d(&exterior_ab_gauge(&b, 1.0)?)?.max_difference(&b, &pts)?;
        rows.push(Row::at_most(
            format!("forms.poincare[{name}]"),
            e0,
            0.0,
            1e-6,
        ));
        rows.push(Row::at_most(
            format!("forms.exterior_ab[{name}]"),
            e1,
            0.0,
            1e-6,
        ));
        let f = flux(&b, &[-1.0, 0.5, 2.0])?;
        rows.push(Row::at_most(
            format!("forms.flux_spread[{name}]"),
            f.spread,
            0.0,
            1e-8,
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let db = rumin_d(&d_h(&GaugeFunction::new(random_cubic(&mut rng))))?;
        worst = worst.max(db.max_difference(&Horizontal2Form::zero(), &pts)?);
    }
    rows.push(Row::at_most("forms.d_of_d_h", worst, 0.0, 1e-10));
    for bmag in [1.0, 2.5] {
        let e = rumin_d(&uniform_potential(bmag))?.max_difference(&uniform_field(bmag), &pts)?;
        rows.push(Row::at_most(
            format!("forms.uniform_gauge[b={bmag}]"),
            e,
            0.0,
            1e-8,
        ));
    }
    Ok(rows)
}

fn tag(rows: Vec<Row>, criterion: &str) -> Vec<Row> {
    rows.into_iter().map(|r| r.tagged(criterion)).collect()
}

/// Runs criteria 1 to 9.
pub fn verify(args: &VerifyArgs, seed: u64) -> Result<Outcome, CliError> {
    let mut timings: Vec<Timing> = Vec::new();
    let mut rows = Vec::new();
    let mut data = Map::new();

    rows.extend(tag(timed(&mut timings, "criterion 1", eigensolver)?, "1"));
    rows.extend(tag(timed(&mut timings, "criterion 2", scaling)?, "2"));

    let constant_args = ConstantArgs {
        c_offset: args.c_offset,
        ..ConstantArgs::default()
    };
    let c = timed(&mut timings, "criterion 3", || {
        commands::constant(&constant_args)
    })?;
    rows.extend(tag(c.rows, "3"));
    data.insert(
        "constant".into(),
        json!({ "c": c.data["c"], "g_star": c.data["g_star"] }),
    );

    let fiber_args = FiberArgs {
        doubling: true,
        ..FiberArgs::default()
    };
    let f = timed(&mut timings, "criterion 4", || {
        commands::fiber_hardy(&fiber_args)
    })?;
    rows.extend(tag(f.rows, "4"));

    let s = timed(&mut timings, "criterion 5", || {
        commands::sharpness(&Default::default())
    })?;
    rows.extend(tag(s.rows, "5"));

    let fs = timed(&mut timings, "criterion 6", || {
        commands::folland_stein(&Default::default())
    })?;
    rows.extend(tag(fs.rows, "6"));

    let id = timed(&mut timings, "criterion 7", || {
        commands::identities(&Default::default(), seed)
    })?;
    rows.extend(tag(id.rows, "7"));

    rows.extend(tag(
        timed(&mut timings, "criterion 8", || forms(seed))?,
        "8",
    ));

    let lh = timed(&mut timings, "criterion 9", || {
        commands::log_hardy(&Default::default())
    })?;
    // The radial log-Hardy rows are reported but belong to no criterion.
    for r in lh.rows {
        rows.push(if r.id.starts_with("laptev.") {
            r.tagged("9")
        } else {
            r
        });
    }

    let table = Table::of_rows(&rows);
    Ok(Outcome {
        rows,
        data: Value::Object(data),
        table: Some(table),
        timings,
    })
}
