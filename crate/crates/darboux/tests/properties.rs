//! Randomized invariant suites: jets against finite differences, frame
//! identities at random parameters, and axis-fit equivariance.  All
//! generators are seeded, so failures reproduce.

use darboux::associated::cumulative_integral;
use darboux::classify::fit_axis;
use darboux::expr::{eval_jet, eval_scalar, parse};
use darboux::fixtures;
use darboux::frames::{darboux_at, frenet_at};
use darboux::geometry::{Grid, Vec3};
use darboux::testing::{
    apply_rotation, random_expression, random_rotation, random_unit, SplitMix64,
};

use proptest::prelude::*;

fn fd_derivs(f: impl Fn(f64) -> f64, s: f64, h: f64) -> (f64, f64, f64) {
    let (m2, m1, p0, p1, p2) = (f(s - 2.0 * h), f(s - h), f(s), f(s + h), f(s + 2.0 * h));
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let d2 = (-m2 + 16.0 * m1 - 30.0 * p0 + 16.0 * p1 - p2) / (12.0 * h * h);
    let d3 = (-m2 + 2.0 * m1 - 2.0 * p1 + p2) / (2.0 * h * h * h);
    (d1, d2, d3)
}

#[test]
fn jets_match_finite_differences() {
    let mut rng = SplitMix64::new(0xDA12B0);
    let h = 1e-4;
    for case in 0..200 {
        let text = random_expression(&mut rng, 3);
        let e = parse(&text).unwrap();
        let s = rng.range(-1.8, 1.8);
        let jet = eval_jet(&e, s).unwrap();
        let (d1, d2, d3) = fd_derivs(|x| eval_scalar(&e, &[x]).unwrap(), s, h);
        assert!(
            (jet.v1() - d1).abs() <= 1e-6 * (1.0 + jet.v1().abs()),
            "case {case} {text:?} at {s}: v1 {} vs {d1}",
            jet.v1()
        );
        assert!(
            (jet.v2() - d2).abs() <= 1e-4 * (1.0 + jet.v2().abs()),
            "case {case} {text:?} at {s}: v2 {} vs {d2}",
            jet.v2()
        );
        assert!(
            (jet.v3() - d3).abs() <= 1e-2 * (1.0 + jet.v3().abs()),
            "case {case} {text:?} at {s}: v3 {} vs {d3}",
            jet.v3()
        );
    }
}

#[test]
fn pythagorean_identity_on_random_subexpressions() {
    let mut rng = SplitMix64::new(0x51C0FE);
    for _ in 0..200 {
        let g = random_expression(&mut rng, 2);
        let e = parse(&format!("sin({g})^2 + cos({g})^2")).unwrap();
        let s = rng.range(-1.8, 1.8);
        let jet = eval_jet(&e, s).unwrap();
        assert!((jet.v0() - 1.0).abs() < 1e-12, "{g:?}: v0 = {}", jet.v0());
        for k in 1..4 {
            assert!(jet.dk(k).abs() < 1e-12, "{g:?}: slot {k} = {}", jet.dk(k));
        }
    }
}

#[test]
fn parse_print_parse_fixpoint() {
    let mut rng = SplitMix64::new(0xF1A9);
    for _ in 0..200 {
        let text = random_expression(&mut rng, 4);
        let e1 = parse(&text).unwrap();
        let printed = e1.to_string();
        let e2 = parse(&printed).expect("canonical printout must reparse");
        assert_eq!(e1, e2, "fixpoint failed for {text:?} -> {printed:?}");
    }
}

#[test]
fn darboux_residuals_at_random_parameters() {
    // |T' - (k_g V + k_n U)| etc. at 200 random points across the
    // unit-speed fixtures, with T', V', U' recomputed by finite differences
    // of the frame fields (independent of the jet pipeline).
    let mut rng = SplitMix64::new(0xDEAF01);
    let fixtures = [
        fixtures::example_4_1(),
        fixtures::example_4_2(),
        fixtures::plane_circle(),
        fixtures::sphere_cap(),
        fixtures::cylinder_wobble(),
    ];
    let h = 1e-5;
    for case in 0..200 {
        let fx = &fixtures[rng.below(fixtures.len())];
        let s = rng.range(fx.grid.s0() + 2.0 * h, fx.grid.s1() - 2.0 * h);
        let d = darboux_at(&fx.curve, s).unwrap();
        let fd_vec = |pick: &dyn Fn(&darboux::frames::DarbouxSample) -> Vec3| -> Vec3 {
            let at = |x: f64| pick(&darboux_at(&fx.curve, x).unwrap());
            (at(s - 2.0 * h) - at(s - h) * 8.0 + at(s + h) * 8.0 - at(s + 2.0 * h)) / (12.0 * h)
        };
        let tp = fd_vec(&|d| d.t);
        let vp = fd_vec(&|d| d.v);
        let up = fd_vec(&|d| d.u);
        let r1 = (tp - (d.v * d.k_g + d.u * d.k_n)).norm();
        let r2 = (vp - (d.u * d.tau_g - d.t * d.k_g)).norm();
        let r3 = (up - (-d.t * d.k_n - d.v * d.tau_g)).norm();
        for (label, r) in [("T'", r1), ("V'", r2), ("U'", r3)] {
            assert!(
                r <= 1e-8,
                "case {case} {} at s={s}: {label} residual {r}",
                fx.name
            );
        }
    }
}

#[test]
fn kappa_squared_identity_at_random_parameters() {
    let mut rng = SplitMix64::new(0xCAFE02);
    let fixtures = [
        fixtures::example_4_1(),
        fixtures::example_4_2(),
        fixtures::plane_circle(),
        fixtures::sphere_cap(),
        fixtures::cylinder_wobble(),
    ];
    for _ in 0..200 {
        let fx = &fixtures[rng.below(fixtures.len())];
        let s = rng.range(fx.grid.s0(), fx.grid.s1());
        let d = darboux_at(&fx.curve, s).unwrap();
        let f = frenet_at(&fx.curve.alpha, s).unwrap();
        let lhs = f.kappa * f.kappa;
        let rhs = d.k_g * d.k_g + d.k_n * d.k_n;
        assert!(
            (lhs - rhs).abs() <= 1e-9 * rhs,
            "{} at s={s}: {lhs} vs {rhs}",
            fx.name
        );
    }
}

#[test]
fn geodesic_torsion_relation_at_random_grid_points() {
    // tau_g = tau + phi' with phi unwrapped along the grid; random interior
    // samples on the fixture with genuinely varying phi.
    let fx = fixtures::cylinder_wobble();
    let fr = darboux::frames::surface_frenet_samples(&fx.curve, &fx.grid).unwrap();
    let h = fx.grid.spacing();
    let mut rng = SplitMix64::new(0xB0CA);
    for _ in 0..200 {
        let k = 2 + rng.below(fx.grid.len() - 4);
        let dphi = (fr[k - 2].phi.unwrap() - 8.0 * fr[k - 1].phi.unwrap()
            + 8.0 * fr[k + 1].phi.unwrap()
            - fr[k + 2].phi.unwrap())
            / (12.0 * h);
        let d = darboux_at(&fx.curve, fx.grid.at(k)).unwrap();
        assert!(
            (d.tau_g - (fr[k].tau + dphi)).abs() <= 1e-6,
            "k={k}: tau_g {} vs tau + phi' {}",
            d.tau_g,
            fr[k].tau + dphi
        );
    }
}

#[test]
fn fit_axis_rotation_equivariance() {
    let mut rng = SplitMix64::new(0xA11CE);
    for case in 0..200 {
        // Directions near a cone: well-separated covariance spectrum.
        let axis = random_unit(&mut rng);
        let half = rng.range(0.2, 1.2);
        let count = 8 + rng.below(40);
        let seed_u = if axis.x.abs() < 0.8 {
            Vec3::new(1.0, 0.0, 0.0)
        } else {
            Vec3::new(0.0, 1.0, 0.0)
        };
        let e1 = axis.cross(seed_u).normalize();
        let e2 = axis.cross(e1);
        let dirs: Vec<Vec3> = (0..count)
            .map(|_| {
                let az = rng.range(0.0, std::f64::consts::TAU);
                let jitter = rng.range(-0.02, 0.02);
                let polar = half + jitter;
                (axis * polar.cos() + (e1 * az.cos() + e2 * az.sin()) * polar.sin()).normalize()
            })
            .collect();
        let rot = random_rotation(&mut rng);
        let rotated: Vec<Vec3> = dirs.iter().map(|d| apply_rotation(&rot, *d)).collect();

        let base = fit_axis(&dirs).unwrap();
        let turned = fit_axis(&rotated).unwrap();
        let expect = apply_rotation(&rot, base.zeta);
        assert!(
            (turned.zeta - expect).norm() <= 1e-9,
            "case {case}: axis moved by {}",
            (turned.zeta - expect).norm()
        );
        assert!(
            (turned.angle_std - base.angle_std).abs() <= 1e-12,
            "case {case}: angle spread changed by {}",
            (turned.angle_std - base.angle_std).abs()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Product rule consistency: the jet of a product is the product of jets.
    #[test]
    fn prop_jet_product_rule(seed in any::<u64>(), s in -1.5f64..1.5) {
        let mut rng = SplitMix64::new(seed);
        let a = random_expression(&mut rng, 2);
        let b = random_expression(&mut rng, 2);
        let ja = eval_jet(&parse(&a).unwrap(), s).unwrap();
        let jb = eval_jet(&parse(&b).unwrap(), s).unwrap();
        let jab = eval_jet(&parse(&format!("({a})*({b})")).unwrap(), s).unwrap();
        let prod = ja * jb;
        for k in 0..4 {
            let scale = 1.0 + prod.dk(k).abs();
            prop_assert!((jab.dk(k) - prod.dk(k)).abs() <= 1e-10 * scale);
        }
    }

    /// Quadrature exactness: every point for quadratics, full panels
    /// (even indices) additionally for cubics.
    #[test]
    fn prop_simpson_polynomial_exactness(
        a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0, d in -2.0f64..2.0,
    ) {
        let grid = Grid::new(-1.0, 3.0, 41).unwrap();
        let quad: Vec<f64> = grid.points().map(|s| a + b * s + c * s * s).collect();
        let acc = cumulative_integral(&quad, &grid).unwrap();
        let anti = |s: f64| a * s + b * s * s / 2.0 + c * s * s * s / 3.0;
        for (k, v) in acc.iter().enumerate() {
            let expect = anti(grid.at(k)) - anti(grid.s0());
            prop_assert!((v - expect).abs() <= 1e-11 * (1.0 + expect.abs()));
        }
        let cubic: Vec<f64> = grid.points().map(|s| d * s * s * s).collect();
        let acc = cumulative_integral(&cubic, &grid).unwrap();
        for k in (0..grid.len()).step_by(2) {
            let expect = d * (grid.at(k).powi(4) - grid.s0().powi(4)) / 4.0;
            prop_assert!((acc[k] - expect).abs() <= 1e-11 * (1.0 + expect.abs()));
        }
    }

    /// Tokenizing then gluing token texts reproduces the input without spaces.
    #[test]
    fn prop_tokenize_glues_back(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let text = random_expression(&mut rng, 3);
        let toks = darboux::expr::tokenize(&text).unwrap();
        let glued: String = toks.iter().map(|t| t.text.as_str()).collect();
        let stripped: String = text.chars().filter(|ch| !ch.is_whitespace()).collect();
        prop_assert_eq!(glued, stripped);
    }
}
