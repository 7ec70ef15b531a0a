use heisenmag::fibers::*;
use heisenmag::heisenberg::{apply_frame, FieldExpr, Frame, Point, ScalarField, VolumeRule};
use heisenmag::quadrature::GaussRule;
use heisenmag::Complex64 as C;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<C> {
    (0..n)
        .map(|_| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

fn quadratic(k: &sprs::CsMat<C>, u: &[C]) -> C {
    let mut s = C::new(0.0, 0.0);
    for (i, row) in k.outer_iterator().enumerate() {
        for (j, v) in row.iter() {
            s += u[i].conj() * v * u[j];
        }
    }
    s
}

#[test]
fn form_is_hermitian_and_nonnegative() {
    let grid = Grid2D::new(12, 10, 3.0, 2.0).unwrap();
    let form = assemble_qm(grid, 0.37, 1).unwrap();
    let k = form.matrix();
    for (i, row) in k.outer_iterator().enumerate() {
        for (j, v) in row.iter() {
            let t = k.get(j, i).copied().unwrap_or_default();
            assert!(
                (t.conj() - v).norm() < 1e-14,
                "K[{i},{j}] = {v}, K[{j},{i}] = {t}"
            );
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let u = random_vector(&mut rng, grid.unknowns());
        let e = form.energy(&u);
        let q = quadratic(&k, &u);
        assert!(e >= 0.0);
        assert!((q.re - e).abs() <= 1e-12 * e && q.im.abs() <= 1e-12 * e);
    }
}

// With beta = 0 and a real vector the cross term of |(-i r/2) D_z u + beta u/r|^2
// vanishes; what remains is the radial difference energy plus the vertical one.
#[test]
fn real_vector_without_flux_splits_into_radial_and_vertical_energy() {
    let grid = Grid2D::new(30, 20, 3.0, 2.0).unwrap();
    let form = assemble_qm(grid, 2.0, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u: Vec<C> = (0..grid.unknowns())
        .map(|_| C::new(rng.random_range(-1.0..1.0), 0.0))
        .collect();
    let at = |j: usize, k: usize| {
        if j >= grid.nr || k == 0 || k >= grid.nz {
            0.0
        } else {
            u[grid.index(j, k)].re
        }
    };
    let (hr, hz) = (grid.hr(), grid.hz());
    let mut radial = 0.0;
    let mut vertical = 0.0;
    for j in 0..grid.nr {
        let r = grid.r(j);
        let face_r = (j as f64 + 1.0) * hr;
        for k in 1..grid.nz {
            radial += (at(j + 1, k) - at(j, k)).powi(2) / (hr * hr) * face_r * hr * hz;
            let dz = (at(j, k + 1) - at(j, k - 1)) / (2.0 * hz);
            vertical += (0.5 * r * dz).powi(2) * r * hr * hz;
        }
    }
    let e = form.energy(&u);
    assert!((e - radial - vertical).abs() <= 1e-12 * e);

    // On the kernel of S = -i D_z (present for even nz) with beta = 0 only the
    // radial difference energy remains.
    let s = form.z_frequencies();
    let l0 = s
        .iter()
        .position(|f| f.abs() < 1e-12)
        .expect("zero frequency for even nz");
    let radial_profile: Vec<f64> = (0..grid.nr)
        .map(|j| (-(grid.r(j) - 1.5).powi(2)).exp())
        .collect();
    let v = form.tensor_vector(&radial_profile, l0 + 1);
    let mut pure = 0.0;
    for j in 0..grid.nr - 1 {
        let face_r = (j as f64 + 1.0) * hr;
        pure += (radial_profile[j + 1] - radial_profile[j]).powi(2) / hr * face_r * hz;
    }
    pure += radial_profile[grid.nr - 1].powi(2) / hr * grid.r_max * hz;
    assert!((form.energy(&v) - pure).abs() <= 1e-12 * pure);
}

// u = g(r, z) e^{iz} with g a polynomial bump: the integrand of Q_m reduces to
// |g_r|^2 r + ((r/2 + beta/r) g)^2 r + (r g_z / 2)^2 r.
#[test]
fn form_matches_continuous_quadrature() {
    let (rc, zc, a) = (2.0, 0.1, 0.9);
    let g = |r: f64, z: f64| -> [f64; 3] {
        let q = ((r - rc).powi(2) + (z - zc).powi(2)) / (a * a);
        if q >= 1.0 {
            return [0.0; 3];
        }
        let v = (1.0 - q).powi(4);
        let d = -4.0 * (1.0 - q).powi(3) * 2.0 / (a * a);
        [v, d * (r - rc), d * (z - zc)]
    };
    let beta = 0.35;
    // Polar coordinates about the bump center keep the oracle integrand smooth.
    let rule = GaussRule::new(40);
    let n_theta = 256;
    let mut exact = 0.0;
    for (rho, wrho) in rule.on(0.0, a) {
        for i in 0..n_theta {
            let th = 2.0 * std::f64::consts::PI * i as f64 / n_theta as f64;
            let (r, z) = (rc + rho * th.cos(), zc + rho * th.sin());
            let [v, gr, gz] = g(r, z);
            let e = gr * gr + ((0.5 * r + beta / r) * v).powi(2) + (0.5 * r * gz).powi(2);
            exact += wrho * rho * 2.0 * std::f64::consts::PI / n_theta as f64 * e * r;
        }
    }
    let grid = Grid2D::new(1600, 1600, 4.0, 2.0).unwrap();
    let form = assemble_qm(grid, 1.0 + beta, 1).unwrap();
    let mut u = vec![C::new(0.0, 0.0); grid.unknowns()];
    for j in 0..grid.nr {
        for k in 1..grid.nz {
            let z = grid.z(k);
            u[grid.index(j, k)] = C::from_polar(g(grid.r(j), z)[0], z);
        }
    }
    let e = form.energy(&u);
    assert!(
        (e - exact).abs() <= 1e-4 * exact,
        "discrete {e}, quadrature {exact}"
    );
}

fn dense_lowest(form: &FiberForm) -> f64 {
    let k = form.matrix();
    let mass = form.mass();
    let n = mass.len();
    let mut big = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for (i, row) in k.outer_iterator().enumerate() {
        for (j, v) in row.iter() {
            let s = 1.0 / (mass[i] * mass[j]).sqrt();
            big[(i, j)] = v.re * s;
            big[(i + n, j + n)] = v.re * s;
            big[(i, j + n)] = -v.im * s;
            big[(i + n, j)] = v.im * s;
        }
    }
    SymmetricEigen::new(big).eigenvalues.min()
}

#[test]
fn block_solver_matches_dense_oracle() {
    let grid = Grid2D::new(6, 8, 2.0, 1.5).unwrap();
    for (alpha, m) in [(0.3, 0), (0.8, 1), (2.7, 0), (0.0, 0)] {
        let form = assemble_qm(grid, alpha, m).unwrap();
        let mu = fiber_hardy_constant(alpha, m, grid).unwrap().mu;
        let oracle = dense_lowest(&form);
        assert!(
            (mu - oracle).abs() <= 1e-10 * oracle.abs().max(1.0),
            "({alpha}, {m}): {mu} vs {oracle}"
        );
    }
}

#[test]
fn clamped_flux_gives_at_least_one() {
    let res = fiber_hardy_constant(2.7, 0, Grid2D::default()).unwrap();
    assert_eq!(res.bound, 1.0);
    assert!(res.mu >= 1.0 - 0.02, "mu = {}", res.mu);
}

#[test]
fn zero_flux_has_no_improvement() {
    let g = Grid2D::default();
    let mu = fiber_hardy_constant(0.0, 0, g).unwrap().mu;
    let mu2 = fiber_hardy_constant(0.0, 0, g.doubled()).unwrap().mu;
    assert!(mu >= 0.0);
    assert!(mu2 <= mu);
    assert!(mu < 0.05, "mu = {mu}");
}

#[test]
fn half_flux_approaches_quarter() {
    let g = Grid2D::default();
    let mu = fiber_hardy_constant(0.5, 0, g).unwrap().mu;
    let mu2 = fiber_hardy_constant(0.5, 0, g.doubled()).unwrap().mu;
    assert!(mu >= 0.25 - 1e-9);
    assert!(mu2 <= mu && mu2 >= 0.25 - 1e-9);
}

#[test]
fn growing_box_is_monotone() {
    let g = Grid2D::new(60, 60, 6.0, 6.0).unwrap();
    for (alpha, m) in [(0.25, 0), (0.8, 1), (0.1, -1)] {
        let a = fiber_hardy_constant(alpha, m, g).unwrap().mu;
        let b = fiber_hardy_constant(alpha, m, g.doubled()).unwrap().mu;
        let c = fiber_hardy_constant(alpha, m, g.doubled().doubled())
            .unwrap()
            .mu;
        assert!(
            b <= a * (1.0 + 1e-12) && c <= b * (1.0 + 1e-12),
            "({alpha}, {m}): {a} {b} {c}"
        );
    }
}

#[test]
fn gauge_periodicity() {
    let g = Grid2D::new(80, 80, 8.0, 8.0).unwrap();
    // alpha - m is computed exactly for dyadic fluxes, so the forms coincide.
    for alpha in [0.25, 0.5, -0.75] {
        for m in -1..=1 {
            let a = fiber_hardy_constant(alpha, m, g).unwrap().mu;
            let b = fiber_hardy_constant(alpha + 1.0, m + 1, g).unwrap().mu;
            assert_eq!(a, b);
        }
    }
    for alpha in [0.1, 0.3, 0.8] {
        let a = fiber_hardy_constant(alpha, 0, g).unwrap().mu;
        let b = fiber_hardy_constant(alpha + 1.0, 1, g).unwrap().mu;
        assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }
}

fn bump() -> FieldExpr {
    FieldExpr::AnnularBump {
        center: 2.0,
        halfwidth: 0.8,
        power: 4,
    }
    .times(FieldExpr::AxialBump {
        center: 0.2,
        halfwidth: 1.0,
        power: 4,
    })
}

fn angular_mode(k: i64) -> FieldExpr {
    FieldExpr::Exp {
        arg: Box::new(FieldExpr::Scale {
            re: 0.0,
            im: k as f64,
            expr: Box::new(FieldExpr::Angle),
        }),
    }
}

fn rule() -> VolumeRule {
    VolumeRule::cylinder([1.2, 2.8], [-0.8, 1.2], 24, 32, 24)
}

#[test]
fn decomposition_with_angular_mode() {
    let u = ScalarField::expr(angular_mode(2).times(bump()));
    let rep = quadform_decomposition_check(0.3, &u, &rule()).unwrap();
    assert!(rep.discrepancy <= 1e-6, "{rep:?}");
    assert!(rep.cross_term.norm() > 1e-3);
}

#[test]
fn decomposition_special_cases() {
    let u = ScalarField::expr(bump());
    let rep = quadform_decomposition_check(0.7, &u, &rule()).unwrap();
    assert!(rep.cross_term.norm() <= 1e-12 * rep.lhs);
    assert!(rep.discrepancy <= 1e-6);
    let v = ScalarField::expr(angular_mode(-1).times(bump()));
    let rep0 = quadform_decomposition_check(0.0, &v, &rule()).unwrap();
    assert_eq!(rep0.hardy_term, 0.0);
    assert_eq!(rep0.cross_term, C::new(0.0, 0.0));
    assert!((rep0.l_alpha.re - rep0.lhs).abs() <= 1e-6 * rep0.lhs);
}

#[test]
fn phi_k_examples() {
    let zfree = ScalarField::expr(FieldExpr::Radius.plus(FieldExpr::constant(1.0)));
    assert_eq!(phi_k_fiber(0, &zfree, 1.3, 0.4).unwrap(), C::new(0.0, 0.0));
    let one = ScalarField::expr(FieldExpr::constant(1.0));
    let v = phi_k_fiber(1, &one, 2.0, 0.0).unwrap();
    assert!((v - C::new(0.0, 0.5)).norm() < 1e-15);
    assert!(phi_k_fiber(1, &one, 0.0, 0.0).is_err());
}

#[test]
fn phi_k_matches_frame_on_angular_modes() {
    let g = FieldExpr::Radius.times(FieldExpr::Z).plus(FieldExpr::Exp {
        arg: Box::new(FieldExpr::Z.scaled(0.3)),
    });
    let gf = ScalarField::expr(g.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in -3..=3 {
        let full = ScalarField::expr(angular_mode(k).times(g.clone()));
        for _ in 0..10 {
            let (r, ph, z) = (
                rng.random_range(0.2..3.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(-2.0..2.0),
            );
            let p = Point::from_cylindrical(r, ph, z);
            let direct = apply_frame(&full, &p, Frame::Cylindrical)
                .unwrap()
                .phiu
                .unwrap();
            let fiber = C::from_polar(1.0, k as f64 * ph) * phi_k_fiber(k, &gf, r, z).unwrap();
            assert!(
                (direct - fiber).norm() <= 1e-10 * (1.0 + fiber.norm()),
                "k = {k}"
            );
        }
    }
}
