use heisenmag::quadrature::GaussRule;
use heisenmag::spectral1d::*;
use nalgebra::{DMatrix, SymmetricEigen};

/// Ground energy of `-d^2/dt^2 + V` on `[-t, t]` in a basis of `k` Dirichlet
/// sine modes, with potential matrix elements by composite Gauss quadrature.
fn sine_galerkin(v: impl Fn(f64) -> f64, t: f64, k: usize) -> f64 {
    let breaks: Vec<f64> = (0..=400).map(|i| -t + 2.0 * t * i as f64 / 400.0).collect();
    let nodes = GaussRule::new(12).composite(&breaks);
    let len = 2.0 * t;
    let basis =
        |n: usize, x: f64| (n as f64 * std::f64::consts::PI * (x + t) / len).sin() / t.sqrt();
    let values: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&(x, _)| (1..=k).map(|n| basis(n, x)).collect())
        .collect();
    let mut h = DMatrix::<f64>::zeros(k, k);
    for (q, &(x, w)) in nodes.iter().enumerate() {
        let vw = v(x) * w;
        for a in 0..k {
            for b in a..k {
                h[(a, b)] += vw * values[q][a] * values[q][b];
            }
        }
    }
    for a in 0..k {
        for b in 0..a {
            h[(a, b)] = h[(b, a)];
        }
        h[(a, a)] += ((a + 1) as f64 * std::f64::consts::PI / len).powi(2);
    }
    SymmetricEigen::new(h).eigenvalues.min()
}

#[test]
fn harmonic_oscillator() {
    let op = SchrodingerOperator1D::new(Grid1D::new(12.0, 4800).unwrap(), |t| t * t);
    let r = ground_state(&op).unwrap();
    assert!((r.value - 1.0).abs() <= 1e-6, "{}", r.value);
    assert!(r.residual < 1e-8);
}

// (a s - |g|)^2 with a = sqrt(|g|/2) is a shifted oscillator with ground
// energy a.
#[test]
fn shifted_harmonic_oscillator() {
    for g in [-2.0f64, -8.0, -32.0] {
        let a = (g.abs() / 2.0).sqrt();
        let center = g.abs() / a;
        let t = center + 12.0 / a.sqrt();
        let op = SchrodingerOperator1D::new(Grid1D::new(t, 4800).unwrap(), move |s| {
            (a * s - g.abs()).powi(2)
        });
        let r = ground_state(&op).unwrap();
        assert!(
            (r.value - a).abs() <= 1e-5 * a,
            "g = {g}: {} vs {a}",
            r.value
        );
    }
}

#[test]
fn quartic_matches_sine_galerkin() {
    for (g, t) in [(-2.0, 8.0), (UNIVERSAL_CONSTANT_G, 7.0), (1.5, 6.0)] {
        let fd = quartic_lambda(g, 1.0, Discretization::default())
            .unwrap()
            .lambda;
        let oracle = sine_galerkin(quartic_potential(g, 1.0), t, 160);
        assert!(
            (fd - oracle).abs() <= 1e-8 * oracle,
            "g = {g}: {fd} vs {oracle}"
        );
    }
}

#[test]
fn scaling_law() {
    for b in [0.5f64, 2.0, 8.0] {
        for g in [-3.0f64, 0.0, 3.0] {
            let lb = quartic_lambda(g, b, Discretization::default())
                .unwrap()
                .lambda;
            let l1 = quartic_lambda(g * b.powf(-1.0 / 3.0), 1.0, Discretization::default())
                .unwrap()
                .lambda;
            let scaled = b.powf(2.0 / 3.0) * l1;
            assert!(
                (lb - scaled).abs() <= 1e-5 * lb,
                "b = {b}, g = {g}: {lb} vs {scaled}"
            );
        }
    }
}

#[test]
fn universal_constant_converges_and_is_pinned() {
    let cfg = ConstantConfig::default();
    let c = universal_constant(&cfg).unwrap();
    assert!(c.refinement_change <= 1e-5);
    assert!(c.g_star > cfg.g_min && c.g_star < cfg.g_max);
    assert!((c.c - UNIVERSAL_CONSTANT).abs() <= 1e-9 * UNIVERSAL_CONSTANT);
    assert!((c.g_star - UNIVERSAL_CONSTANT_G).abs() <= 1e-3);
    // The constant is a minimum over g.
    for (_, lambda) in &c.scan {
        assert!(*lambda >= c.c - 1e-9);
    }
}

#[test]
fn uniform_bottom_examples() {
    assert_eq!(uniform_bottom(1.0).unwrap(), UNIVERSAL_CONSTANT);
    assert!((uniform_bottom(8.0).unwrap() - 4.0 * UNIVERSAL_CONSTANT).abs() <= 1e-14);
    let mut prev = 0.0;
    for b in [0.1, 0.5, 1.0, 3.0, 10.0] {
        let v = uniform_bottom(b).unwrap();
        assert!(v > prev);
        prev = v;
    }
    assert!(uniform_bottom(0.0).is_err());
}
