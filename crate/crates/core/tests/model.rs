use fiv_core::model::{
    dimensional_restoring_force, nondimensionalize, stribeck_friction, taylor_coefficients,
    DimensionalParams, FrictionValue, Geometry, StribeckCoefficients,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn rig() -> DimensionalParams {
    DimensionalParams {
        m: 0.5,
        k: 200.0,
        c: 0.4,
        l0: 0.1,
        le: 2.0,
        a: 0.03,
        b: 0.07,
        mu_s: 1.5,
        mu_m: 1.0,
        v_m: 1.0,
        v0: 0.2,
        inductance: 0.01,
        capacitance: 1e-3,
        resistance: 10.0,
        flux_density: 0.5,
        f0: 1.0,
        omega0: 15.0,
    }
}

/// Odd central differences around zero, refined by two Richardson steps.
fn odd_derivatives(f: impl Fn(f64) -> f64, h: f64) -> [f64; 3] {
    let stencil = |h: f64| {
        let d = |k: f64| f(k * h) - f(-k * h);
        let d1 = (45.0 * d(1.0) - 9.0 * d(2.0) + d(3.0)) / (60.0 * h);
        let d3 = (-13.0 * d(1.0) + 8.0 * d(2.0) - d(3.0)) / (8.0 * h.powi(3));
        let d5 = (5.0 * d(1.0) - 4.0 * d(2.0) + d(3.0)) / (2.0 * h.powi(5));
        [d1, d3, d5]
    };
    let levels = [stencil(h), stencil(0.5 * h), stencil(0.25 * h)];
    // leading error orders of each stencil
    let orders = [(6, 8), (4, 6), (2, 4)];
    let mut out = [0.0; 3];
    for (k, (p, q)) in orders.into_iter().enumerate() {
        let extrapolate = |coarse: f64, fine: f64, order: i32| {
            let r = 2f64.powi(order);
            fine + (fine - coarse) / (r - 1.0)
        };
        let r1 = extrapolate(levels[0][k], levels[1][k], p);
        let r2 = extrapolate(levels[1][k], levels[2][k], p);
        out[k] = extrapolate(r1, r2, q);
    }
    out
}

#[test]
fn taylor_coefficients_match_finite_differences() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..100 {
        let alpha: f64 = rng.gen_range(0.0..1.5);
        let beta: f64 = rng.gen_range(0.2..2.0);
        let g = Geometry::new(alpha, beta).unwrap();
        let tc = g.taylor();
        let r = alpha.hypot(beta);
        let [d1, d3, d5] = odd_derivatives(|x| g.restoring_force(x), 0.05 * r);
        let fd = [d1, d3 / 6.0, d5 / 120.0];
        let exact = [tc.a1, tc.a3, tc.a5];
        for (k, (got, want)) in fd.iter().zip(exact).enumerate() {
            // scale of the k-th coefficient for this geometry
            let scale = r.powi(-(2 * k as i32 + 1)).max(1.0);
            assert!(
                (got - want).abs() <= 1e-4 * want.abs().max(1e-3 * scale),
                "A{} at ({alpha}, {beta}): fd {got} vs {want}",
                2 * k + 1
            );
        }
    }
}

#[test]
fn potential_derivative_is_restoring_force() {
    let mut rng = StdRng::seed_from_u64(11);
    let h = 1e-5;
    for _ in 0..1000 {
        let x: f64 = rng.gen_range(-3.0..3.0);
        let g = Geometry::new(rng.gen_range(0.0..2.0), rng.gen_range(0.01..2.0)).unwrap();
        let fd = (g.potential_energy(x + h) - g.potential_energy(x - h)) / (2.0 * h);
        let f = g.restoring_force(x);
        assert!((fd - f).abs() / (1.0 + f.abs()) < 1e-6, "x = {x}, {g:?}");
    }
}

#[test]
fn dimensionless_force_rescales_to_dimensional() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..100 {
        let p = DimensionalParams {
            k: rng.gen_range(10.0..1000.0),
            l0: rng.gen_range(0.01..1.0),
            a: rng.gen_range(0.0..0.5),
            b: rng.gen_range(0.01..0.5),
            ..rig()
        };
        let x = rng.gen_range(-0.5..0.5);
        let g = Geometry::new(p.a / p.l0, p.b / p.l0).unwrap();
        let scaled = p.k * p.l0 * g.restoring_force(x / p.l0);
        let direct = dimensional_restoring_force(&p, x);
        assert!(
            (scaled - direct).abs() <= 1e-12 * direct.abs().max(p.k * p.l0 * 1e-3),
            "{scaled} vs {direct}"
        );
    }
}

#[test]
fn friction_curve_minimum() {
    let s = StribeckCoefficients::new(1.5, 1.0, 1.0);
    assert_eq!((s.d1, s.d3), (0.75, 0.25));
    let (v, f) = s.minimum().unwrap();
    assert!((v - 1.0).abs() < 1e-12);
    assert!((f - 1.0).abs() < 1e-12);
    assert_eq!(s.slip_force(f64::MIN_POSITIVE), 1.5);
    // dense sampling never dips below the minimum
    for k in 1..2000 {
        assert!(s.slip_force(k as f64 * 1e-3) >= f - 1e-15);
    }
}

#[test]
fn stick_branch_is_set_valued() {
    assert_eq!(
        stribeck_friction(0.0, 0.1, 0.1, 1.0),
        FrictionValue::SetValued { lo: -0.1, hi: 0.1 }
    );
    match stribeck_friction(1e-300, 0.1, 0.1, 1.0) {
        FrictionValue::Determinate(f) => assert_eq!(f, 0.1),
        other => panic!("{other:?}"),
    }
}

#[test]
fn scaled_parameters() {
    let p = nondimensionalize(&DimensionalParams {
        a: 0.0,
        b: 0.1,
        ..rig()
    })
    .unwrap();
    assert_eq!((p.alpha, p.beta), (0.0, 1.0));
    let tc = taylor_coefficients(p.alpha, p.beta).unwrap();
    assert_eq!((tc.a1, tc.a3, tc.a5), (0.0, 1.0, -0.75));
}
