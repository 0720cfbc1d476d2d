//! Built-in curves: the two production scenes, simple classical curves, and
//! two negative controls.  Each fixture carries a grid and a constants map
//! tuned so the nonvanishing clauses of the admissible families hold over
//! the whole grid.

use crate::expr::parse;
use crate::geometry::{
    FamilyConstants, Grid, NormalSpec, OrientedSurfaceCurve, SpaceCurve, SurfacePatch,
    DEFAULT_GRID_SAMPLES,
};

const PI: f64 = std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub curve: OrientedSurfaceCurve,
    pub grid: Grid,
    pub constants: FamilyConstants,
}

fn constants(pairs: &[(&str, f64)]) -> FamilyConstants {
    let mut c = FamilyConstants::with_defaults();
    for (name, value) in pairs {
        c.set(name, *value);
    }
    c
}

/// Geodesic helix on the unit cylinder with the patch-derived normal:
/// (k_g, k_n, tau_g) = (0, 1/2, -1/2).
pub fn example_4_1() -> Fixture {
    Fixture {
        name: "cylinder-geodesic",
        description: "geodesic helix on a cylinder (k_g = 0, k_n = 1/2, tau_g = -1/2)",
        curve: OrientedSurfaceCurve {
            alpha: SpaceCurve::parse("sin(s/sqrt(2))", "cos(s/sqrt(2))", "s/sqrt(2)").unwrap(),
            normal: NormalSpec::SurfaceDerived {
                surface: SurfacePatch::parse("sin(u)", "cos(u)", "v").unwrap(),
                u: parse("s/sqrt(2)").unwrap(),
                v: parse("s/sqrt(2)").unwrap(),
            },
        },
        grid: Grid::new(0.0, 8.0 * PI, DEFAULT_GRID_SAMPLES).unwrap(),
        // Keep the designated derivative components away from zero on
        // [0, 8*pi]: the icc constructions carry factors like (c - s).
        constants: constants(&[("c8_icc1", -1.0), ("c9", -1.0), ("c10", -1.0)]),
    }
}

/// Same curve and orientation with the normal written out analytically.
pub fn example_4_1_analytic() -> Fixture {
    let base = example_4_1();
    Fixture {
        name: "cylinder-geodesic",
        curve: OrientedSurfaceCurve {
            alpha: base.curve.alpha.clone(),
            normal: NormalSpec::Analytic(
                SpaceCurve::parse("-sin(s/sqrt(2))", "-cos(s/sqrt(2))", "0").unwrap(),
            ),
        },
        ..base
    }
}

/// Asymptotic helix on the helicoid: (k_g, k_n, tau_g) = (-1/2, 0, 1/2).
pub fn example_4_2() -> Fixture {
    Fixture {
        name: "helicoid-asymptotic",
        description: "asymptotic helix on a helicoid (k_g = -1/2, k_n = 0, tau_g = 1/2)",
        curve: OrientedSurfaceCurve {
            alpha: SpaceCurve::parse("cos(s/sqrt(2))", "sin(s/sqrt(2))", "s/sqrt(2)").unwrap(),
            normal: NormalSpec::SurfaceDerived {
                surface: SurfacePatch::parse("v*cos(u)", "v*sin(u)", "u").unwrap(),
                u: parse("s/sqrt(2)").unwrap(),
                v: parse("1").unwrap(),
            },
        },
        grid: Grid::new(0.0, 8.0 * PI, DEFAULT_GRID_SAMPLES).unwrap(),
        constants: constants(&[("c4", -1.0), ("c5", -1.0), ("c8_rns3", -1.0), ("c12", -1.0)]),
    }
}

/// Unit circle in the plane z = 0: (k_g, k_n, tau_g) = (1, 0, 0).
pub fn plane_circle() -> Fixture {
    Fixture {
        name: "plane-circle",
        description: "unit circle in the plane z = 0 (principal asymptotic line)",
        curve: OrientedSurfaceCurve {
            alpha: SpaceCurve::parse("cos(s)", "sin(s)", "0").unwrap(),
            normal: NormalSpec::Analytic(SpaceCurve::parse("0", "0", "1").unwrap()),
        },
        grid: Grid::new(0.0, 2.0 * PI, DEFAULT_GRID_SAMPLES).unwrap(),
        constants: constants(&[("c4", -1.0)]),
    }
}

/// Great circle on the unit sphere with the radial normal:
/// (k_g, k_n, tau_g) = (0, -1, 0).
pub fn sphere_equator() -> Fixture {
    Fixture {
        name: "sphere-equator",
        description: "great circle on the unit sphere (geodesic principal line)",
        curve: OrientedSurfaceCurve {
            alpha: SpaceCurve::parse("cos(s)", "sin(s)", "0").unwrap(),
            normal: NormalSpec::Analytic(SpaceCurve::parse("cos(s)", "sin(s)", "0").unwrap()),
        },
        grid: Grid::new(0.0, 2.0 * PI, DEFAULT_GRID_SAMPLES).unwrap(),
        constants: constants(&[("c10", -1.0)]),
    }
}

/// Small circle (latitude) on the unit sphere, radius 0.8 at height 0.6:
/// constant (k_g, k_n, tau_g) = (3/4, -1, 0).  The span stays below pi so
/// the sinusoidal coefficients of the general branches keep their sign.
pub fn sphere_cap() -> Fixture {
    Fixture {
        name: "sphere-cap",
        description: "latitude circle on the unit sphere (principal line, k_g = 3/4)",
        curve: OrientedSurfaceCurve {
            alpha: SpaceCurve::parse("0.8*cos(s/0.8)", "0.8*sin(s/0.8)", "0.6").unwrap(),
            normal: NormalSpec::Analytic(
                SpaceCurve::parse("0.8*cos(s/0.8)", "0.8*sin(s/0.8)", "0.6").unwrap(),
            ),
        },
        grid: Grid::new(0.0, 2.4, DEFAULT_GRID_SAMPLES).unwrap(),
        constants: constants(&[("c10", -1.0)]),
    }
}

/// Unit-speed but non-helical curve on the unit cylinder (its development is
/// a circle): (k_g, k_n, tau_g) = (1, -sin^2 s, -sin s cos s).  An isophote
/// (the radial normal stays horizontal) but neither helical nor a
/// relatively normal-slant helix.
pub fn cylinder_wobble() -> Fixture {
    Fixture {
        name: "cylinder-wobble",
        description: "non-helical unit-speed cylinder curve (isophote; negative helical control)",
        curve: OrientedSurfaceCurve {
            alpha: SpaceCurve::parse("sin(1 - cos(s))", "cos(1 - cos(s))", "sin(s)").unwrap(),
            normal: NormalSpec::Analytic(
                SpaceCurve::parse("sin(1 - cos(s))", "cos(1 - cos(s))", "0").unwrap(),
            ),
        },
        // Stay inside (0, pi/2) so k_n and tau_g keep a fixed sign.
        grid: Grid::new(0.3, 1.4, DEFAULT_GRID_SAMPLES).unwrap(),
        constants: constants(&[("c8_icc1", -2.0), ("c9", -2.0), ("c10", -2.0)]),
    }
}

/// The twisted cubic with the normal of its enclosing parabolic cylinder.
/// Deliberately not unit speed: validation fails, and the sweep samples it
/// in the curve parameter instead.
pub fn twisted_cubic() -> Fixture {
    Fixture {
        name: "twisted-cubic-control",
        description:
            "twisted cubic with parabolic-cylinder normal (not unit speed; negative control)",
        curve: OrientedSurfaceCurve {
            alpha: SpaceCurve::parse("s", "s^2", "s^3").unwrap(),
            normal: NormalSpec::SurfaceDerived {
                surface: SurfacePatch::parse("u", "u^2", "v").unwrap(),
                u: parse("s").unwrap(),
                v: parse("s^3").unwrap(),
            },
        },
        grid: Grid::new(0.5, 2.0, DEFAULT_GRID_SAMPLES).unwrap(),
        constants: FamilyConstants::with_defaults(),
    }
}

/// The fixture suite used by the classification/certification sweep.
pub fn standard_fixtures() -> Vec<Fixture> {
    vec![
        example_4_1(),
        example_4_2(),
        plane_circle(),
        sphere_equator(),
        sphere_cap(),
        cylinder_wobble(),
        twisted_cubic(),
    ]
}
