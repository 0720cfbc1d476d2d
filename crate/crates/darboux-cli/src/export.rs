//! Deterministic CSV / OBJ / JSON writers.  Floats print in Rust's shortest
//! round-trip form with a fixed decimal point, and payloads carry no
//! timestamps, so identical runs produce identical bytes.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use darboux::associated::AssociatedCurve;
use darboux::frames::DarbouxSample;
use darboux::geometry::{ValidationReport, Vec3};

use crate::CliError;

pub fn ensure_dir(dir: &str) -> Result<PathBuf, CliError> {
    let p = PathBuf::from(dir);
    fs::create_dir_all(&p).map_err(|e| CliError::Config(format!("cannot create {dir}: {e}")))?;
    Ok(p)
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

fn push_vec(line: &mut String, v: Vec3) {
    line.push_str(&format!(",{},{},{}", v.x, v.y, v.z));
}

/// Frame samples: s, alpha, T, V, U, curvatures.
pub fn write_frames_csv(
    path: &Path,
    alphas: &[Vec3],
    samples: &[DarbouxSample],
) -> Result<(), CliError> {
    let mut out = String::from(
        "s,alpha_x,alpha_y,alpha_z,t_x,t_y,t_z,v_x,v_y,v_z,u_x,u_y,u_z,k_g,k_n,tau_g\n",
    );
    for (a, d) in alphas.iter().zip(samples) {
        let mut line = format!("{}", d.s);
        push_vec(&mut line, *a);
        push_vec(&mut line, d.t);
        push_vec(&mut line, d.v);
        push_vec(&mut line, d.u);
        line.push_str(&format!(",{},{},{}\n", d.k_g, d.k_n, d.tau_g));
        out.push_str(&line);
    }
    write(path, &out)
}

/// Associated curve: s, gamma, coefficients.
pub fn write_curve_csv(path: &Path, a: &AssociatedCurve) -> Result<(), CliError> {
    let mut out = String::from("s,gamma_x,gamma_y,gamma_z,y1,y2,y3\n");
    for sm in &a.samples {
        let mut line = format!("{}", sm.s);
        push_vec(&mut line, sm.gamma);
        line.push_str(&format!(",{},{},{}\n", sm.y[0], sm.y[1], sm.y[2]));
        out.push_str(&line);
    }
    write(path, &out)
}

/// Polyline as OBJ: vertex lines plus a single `l` record.
pub fn write_obj(path: &Path, name: &str, points: &[Vec3]) -> Result<(), CliError> {
    let mut out = format!("o {name}\n");
    for p in points {
        out.push_str(&format!("v {} {} {}\n", p.x, p.y, p.z));
    }
    out.push('l');
    for i in 1..=points.len() {
        out.push_str(&format!(" {i}"));
    }
    out.push('\n');
    write(path, &out)
}

// --- JSON documents --------------------------------------------------------

#[derive(Serialize)]
pub struct GridDoc {
    pub s0: f64,
    pub s1: f64,
    pub n: usize,
}

#[derive(Serialize)]
pub struct ValidationDoc {
    pub max_speed_dev: f64,
    pub max_normality_dev: f64,
    pub max_normal_len_dev: f64,
    pub pass: bool,
}

impl From<&ValidationReport> for ValidationDoc {
    fn from(r: &ValidationReport) -> Self {
        ValidationDoc {
            max_speed_dev: r.max_speed_dev,
            max_normality_dev: r.max_normality_dev,
            max_normal_len_dev: r.max_normal_len_dev,
            pass: r.pass,
        }
    }
}

#[derive(Serialize)]
pub struct TestDoc {
    pub verdict: Option<bool>,
    pub mean: Option<f64>,
    pub stddev: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Serialize)]
pub struct AxisDoc {
    pub verdict: Option<bool>,
    pub zeta: Option<[f64; 3]>,
    pub cos_angle_mean: Option<f64>,
    pub angle_std: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Serialize)]
pub struct PredicatesDoc {
    pub geodesic: bool,
    pub asymptotic: bool,
    pub principal_line: bool,
}

#[derive(Serialize)]
pub struct ClassificationDoc {
    pub scene: String,
    pub grid: GridDoc,
    pub validation: ValidationDoc,
    pub predicates: PredicatesDoc,
    pub helical: TestDoc,
    pub relatively_normal_slant_helix: TestDoc,
    pub isophote: TestDoc,
    /// Constant-angle fits of the frame fields themselves: the fixed
    /// directions these fields keep a constant angle with, when they exist.
    pub tangent_axis: AxisDoc,
    pub tangent_normal_axis: AxisDoc,
    pub surface_normal_axis: AxisDoc,
    pub darboux_slant_osculating: AxisDoc,
    pub darboux_slant_normal: AxisDoc,
    pub darboux_slant_rectifying: AxisDoc,
}

#[derive(Serialize)]
pub struct FamilyVerdictDoc {
    pub family: String,
    pub case: Option<String>,
    pub verdict: Option<bool>,
    pub lancret_mean: Option<f64>,
    pub lancret_stddev: Option<f64>,
    pub alignment: Option<f64>,
    pub binormal_check: Option<f64>,
    pub axis: Option<[f64; 3]>,
    pub angle_std: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Serialize)]
pub struct VerificationDoc {
    pub scene: String,
    pub grid: GridDoc,
    pub families: Vec<FamilyVerdictDoc>,
}

pub fn write_json<T: Serialize>(path: &Path, doc: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(doc)
        .map_err(|e| CliError::Config(format!("json encoding failed: {e}")))?;
    text.push('\n');
    write(path, &text)
}
