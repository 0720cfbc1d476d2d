//! Scene configs: built-in scenes and the TOML schema for user files.

use std::path::Path;

use serde::Deserialize;

use darboux::associated::HelixFamily;
use darboux::fixtures;
use darboux::geometry::{
    FamilyConstants, Grid, NormalSpec, OrientedSurfaceCurve, SpaceCurve, SurfacePatch,
    DEFAULT_GRID_SAMPLES,
};

use crate::CliError;

/// A scene ready to run: curve, grid, constants and the family list.
pub struct ResolvedScene {
    pub name: String,
    pub curve: OrientedSurfaceCurve,
    pub grid: Grid,
    pub constants: FamilyConstants,
    pub families: Vec<HelixFamily>,
}

/// Built-in scene names with one-line descriptions, lexicographic.
pub fn list_builtins() -> Vec<(&'static str, &'static str)> {
    let mut out: Vec<(&'static str, &'static str)> = fixtures::standard_fixtures()
        .into_iter()
        .map(|f| (f.name, f.description))
        .collect();
    out.sort_by_key(|(name, _)| *name);
    out
}

fn builtin_families(name: &str) -> Vec<HelixFamily> {
    match name {
        "cylinder-geodesic" => vec![HelixFamily::Hcc1, HelixFamily::Rns2, HelixFamily::Icc1],
        "helicoid-asymptotic" => vec![HelixFamily::Hcc1, HelixFamily::Rns1, HelixFamily::Icc3],
        "plane-circle" => vec![HelixFamily::Hcc1],
        "sphere-equator" => vec![HelixFamily::Hcc1],
        "sphere-cap" => vec![HelixFamily::Hcc3],
        "cylinder-wobble" => vec![HelixFamily::Icc1],
        "twisted-cubic-control" => vec![HelixFamily::Hcc1],
        _ => vec![HelixFamily::Hcc1],
    }
}

fn load_builtin(name: &str) -> Option<ResolvedScene> {
    fixtures::standard_fixtures()
        .into_iter()
        .find(|f| f.name == name)
        .map(|f| ResolvedScene {
            name: f.name.to_string(),
            curve: f.curve,
            grid: f.grid,
            constants: f.constants,
            families: builtin_families(name),
        })
}

// --- TOML schema ---------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    name: Option<String>,
    #[allow(dead_code)]
    description: Option<String>,
    curve: CurveSection,
    grid: GridSection,
    #[serde(default)]
    families: Vec<String>,
    #[serde(default)]
    constants: std::collections::BTreeMap<String, f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveSection {
    x: String,
    y: String,
    z: String,
    normal: Option<NormalSection>,
    surface: Option<SurfaceSection>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NormalSection {
    x: String,
    y: String,
    z: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceSection {
    x: String,
    y: String,
    z: String,
    u: String,
    v: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSection {
    s0: f64,
    s1: f64,
    n: Option<usize>,
}

fn scene_from_file(path: &Path) -> Result<ResolvedScene, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let file: SceneFile =
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;

    let alpha = SpaceCurve::parse(&file.curve.x, &file.curve.y, &file.curve.z)
        .map_err(|e| CliError::Config(format!("curve expression: {e}")))?;
    let normal = match (&file.curve.normal, &file.curve.surface) {
        (Some(n), None) => NormalSpec::Analytic(
            SpaceCurve::parse(&n.x, &n.y, &n.z)
                .map_err(|e| CliError::Config(format!("normal expression: {e}")))?,
        ),
        (None, Some(s)) => NormalSpec::SurfaceDerived {
            surface: SurfacePatch::parse(&s.x, &s.y, &s.z)
                .map_err(|e| CliError::Config(format!("surface expression: {e}")))?,
            u: darboux::expr::parse(&s.u)
                .map_err(|e| CliError::Config(format!("u(s) expression: {e}")))?,
            v: darboux::expr::parse(&s.v)
                .map_err(|e| CliError::Config(format!("v(s) expression: {e}")))?,
        },
        (Some(_), Some(_)) => {
            return Err(CliError::Config(
                "give either [curve.normal] or [curve.surface], not both".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::Config(
                "missing normal: add [curve.normal] or [curve.surface]".into(),
            ))
        }
    };
    let grid = Grid::new(
        file.grid.s0,
        file.grid.s1,
        file.grid.n.unwrap_or(DEFAULT_GRID_SAMPLES),
    )
    .map_err(|e| CliError::Config(e.to_string()))?;

    let mut constants = FamilyConstants::with_defaults();
    for (k, v) in &file.constants {
        constants.set(k, *v);
    }

    let families = parse_families(&file.families)?;
    let name = file.name.unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "scene".into())
    });
    Ok(ResolvedScene {
        name,
        curve: OrientedSurfaceCurve { alpha, normal },
        grid,
        constants,
        families,
    })
}

pub fn parse_families(tags: &[String]) -> Result<Vec<HelixFamily>, CliError> {
    tags.iter()
        .map(|t| {
            HelixFamily::from_tag(t.trim())
                .ok_or_else(|| CliError::Config(format!("unknown family tag {t:?}")))
        })
        .collect()
}

/// Resolve `--scene`: a built-in name first, otherwise a file path.
pub fn load_scene(scene: &str) -> Result<ResolvedScene, CliError> {
    if let Some(s) = load_builtin(scene) {
        return Ok(s);
    }
    let path = Path::new(scene);
    if path.exists() {
        scene_from_file(path)
    } else {
        Err(CliError::Config(format!(
            "no built-in scene or file named {scene:?} (try list-builtins)"
        )))
    }
}

/// Apply `--family`, `--const` and `--grid` overrides.
pub fn apply_overrides(
    scene: &mut ResolvedScene,
    families: &[String],
    constants: &[String],
    grid: &Option<String>,
) -> Result<(), CliError> {
    if !families.is_empty() {
        scene.families = parse_families(families)?;
    }
    for spec in constants {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--const wants NAME=VALUE, got {spec:?}")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("bad constant value in {spec:?}")))?;
        scene.constants.set(name.trim(), value);
    }
    if let Some(g) = grid {
        let parts: Vec<&str> = g.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Config(format!("--grid wants s0:s1:n, got {g:?}")));
        }
        let s0: f64 = parts[0]
            .parse()
            .map_err(|_| CliError::Config(format!("bad s0 in {g:?}")))?;
        let s1: f64 = parts[1]
            .parse()
            .map_err(|_| CliError::Config(format!("bad s1 in {g:?}")))?;
        let n: usize = parts[2]
            .parse()
            .map_err(|_| CliError::Config(format!("bad n in {g:?}")))?;
        scene.grid = Grid::new(s0, s1, n).map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(())
}
