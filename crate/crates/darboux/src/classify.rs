//! Special-curve predicates: geodesic/asymptotic/principal flags, the
//! Lancret test, the slant-helix and isophote invariants, Darboux vector
//! fields, and constant-angle axis fitting.

use crate::error::{KernelError, Result};
use crate::frames::{frenet_at, DarbouxSample};
use crate::geometry::{Grid, SpaceCurve, Vec3};
use crate::tol;

/// Verdict on whether a sampled function is constant.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstancyReport {
    pub values: Vec<f64>,
    pub mean: f64,
    pub stddev: f64,
    pub max_abs_dev: f64,
    pub rel_tol: f64,
    pub verdict: bool,
}

/// Constancy of a sampled function: the spread must stay below
/// `rel_tol * max(1, |mean|)` (and ten times that for the worst sample).
pub fn constancy(values: &[f64], rel_tol: f64) -> Result<ConstancyReport> {
    if values.len() < 5 {
        return Err(KernelError::InsufficientSamples {
            needed: 5,
            got: values.len(),
        });
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(KernelError::NonFiniteSample(format!("value {bad}")));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let stddev = var.sqrt();
    let max_abs_dev = values
        .iter()
        .map(|v| (v - mean).abs())
        .fold(0.0f64, f64::max);
    let scale = mean.abs().max(1.0);
    let verdict = stddev <= rel_tol * scale && max_abs_dev <= 10.0 * rel_tol * scale;
    Ok(ConstancyReport {
        values: values.to_vec(),
        mean,
        stddev,
        max_abs_dev,
        rel_tol,
        verdict,
    })
}

/// Pointwise zero-curvature flags over a sample sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointwisePredicates {
    pub is_geodesic: bool,
    pub is_asymptotic: bool,
    pub is_principal_line: bool,
}

pub fn pointwise_predicates(samples: &[DarbouxSample]) -> PointwisePredicates {
    let max_of =
        |f: fn(&DarbouxSample) -> f64| samples.iter().map(|d| f(d).abs()).fold(0.0f64, f64::max);
    PointwisePredicates {
        is_geodesic: max_of(|d| d.k_g) <= tol::ZERO_CURVATURE,
        is_asymptotic: max_of(|d| d.k_n) <= tol::ZERO_CURVATURE,
        is_principal_line: max_of(|d| d.tau_g) <= tol::ZERO_CURVATURE,
    }
}

/// Lancret test: constancy of tau/kappa along an expression-backed curve.
pub fn lancret_test(curve: &SpaceCurve, grid: &Grid, rel_tol: f64) -> Result<ConstancyReport> {
    let mut ratios = Vec::with_capacity(grid.len());
    for s in grid.points() {
        let f = frenet_at(curve, s).map_err(|e| match e {
            KernelError::UndefinedFrame { s, kappa } => KernelError::CurvatureVanishes { s, kappa },
            other => other,
        })?;
        if f.kappa <= tol::ZERO_CURVATURE {
            return Err(KernelError::CurvatureVanishes { s, kappa: f.kappa });
        }
        ratios.push(f.tau / f.kappa);
    }
    constancy(&ratios, rel_tol)
}

/// Invariant whose constancy characterizes relatively normal-slant helices:
/// (tau_g' k_g - k_g' tau_g - k_n (k_g^2 + tau_g^2)) / (k_g^2 + tau_g^2)^(3/2).
pub fn relatively_normal_slant_helix_test(
    samples: &[DarbouxSample],
    rel_tol: f64,
) -> Result<ConstancyReport> {
    let mut values = Vec::with_capacity(samples.len());
    for d in samples {
        let q = d.k_g * d.k_g + d.tau_g * d.tau_g;
        if q <= 1e-12 {
            return Err(KernelError::HypothesisViolation(format!(
                "(tau_g, k_g) vanishes at s = {}",
                d.s
            )));
        }
        values.push((d.dtau_g * d.k_g - d.dk_g * d.tau_g - d.k_n * q) / q.powf(1.5));
    }
    constancy(&values, rel_tol)
}

/// Invariant whose constancy characterizes isophote curves (cot of the
/// constant angle, + branch):
/// (k_n^2 / (k_n^2 + tau_g^2)^(3/2)) (tau_g/k_n)' + k_g / (k_n^2 + tau_g^2)^(1/2).
pub fn isophote_test(samples: &[DarbouxSample], rel_tol: f64) -> Result<ConstancyReport> {
    let mut values = Vec::with_capacity(samples.len());
    for d in samples {
        if d.k_n.abs() <= tol::ZERO_CURVATURE {
            return Err(KernelError::HypothesisViolation(format!(
                "k_n vanishes at s = {}",
                d.s
            )));
        }
        let q = d.k_n * d.k_n + d.tau_g * d.tau_g;
        // Quotient derivative from stored curvature derivatives; accurate
        // near small k_n, unlike differencing the quotient.
        let ratio_rate = (d.dtau_g * d.k_n - d.tau_g * d.dk_n) / (d.k_n * d.k_n);
        values.push(d.k_n * d.k_n / q.powf(1.5) * ratio_rate + d.k_g / q.sqrt());
    }
    constancy(&values, rel_tol)
}

/// The three Darboux vector fields of a surface curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DarbouxFieldKind {
    Osculating,
    Normal,
    Rectifying,
}

impl DarbouxFieldKind {
    pub fn label(self) -> &'static str {
        match self {
            DarbouxFieldKind::Osculating => "osculating",
            DarbouxFieldKind::Normal => "normal",
            DarbouxFieldKind::Rectifying => "rectifying",
        }
    }
}

#[derive(Debug, Clone)]
pub struct DarbouxField {
    pub kind: DarbouxFieldKind,
    pub raw: Vec<Vec3>,
    pub unit: Vec<Vec3>,
}

/// Evaluate D_o = tau_g T - k_n V, D_n = -k_n V + k_g U or
/// D_r = tau_g T + k_g U along the samples.
pub fn darboux_field(samples: &[DarbouxSample], kind: DarbouxFieldKind) -> Result<DarbouxField> {
    let mut raw = Vec::with_capacity(samples.len());
    let mut unit = Vec::with_capacity(samples.len());
    for d in samples {
        let w = match kind {
            DarbouxFieldKind::Osculating => d.t * d.tau_g - d.v * d.k_n,
            DarbouxFieldKind::Normal => d.u * d.k_g - d.v * d.k_n,
            DarbouxFieldKind::Rectifying => d.t * d.tau_g + d.u * d.k_g,
        };
        let len = w.norm();
        if len <= 1e-12 {
            return Err(KernelError::VanishingField {
                kind: kind.label(),
                s: d.s,
            });
        }
        raw.push(w);
        unit.push(w / len);
    }
    Ok(DarbouxField { kind, raw, unit })
}

/// Best constant-angle axis for a set of unit directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisFit {
    pub zeta: Vec3,
    pub cos_angle_mean: f64,
    /// Spread of the angles to `zeta`, radians.
    pub angle_std: f64,
    /// Set when the covariance spectrum cannot single out a direction.
    pub low_confidence: bool,
}

/// Fit the direction against which the input directions vary least: the
/// eigenvector of the covariance matrix with the smallest eigenvalue.  The
/// sign is chosen so the mean cosine is nonnegative.
pub fn fit_axis(dirs: &[Vec3]) -> Result<AxisFit> {
    if dirs.len() < 3 {
        return Err(KernelError::InsufficientSamples {
            needed: 3,
            got: dirs.len(),
        });
    }
    let n = dirs.len() as f64;
    let mut mean = Vec3::ZERO;
    for d in dirs {
        if !d.is_finite() {
            return Err(KernelError::NonFiniteSample("direction".into()));
        }
        mean = mean + *d;
    }
    mean = mean / n;

    let mut cov = [[0.0f64; 3]; 3];
    for d in dirs {
        let c = *d - mean;
        let arr = c.as_array();
        for i in 0..3 {
            for j in 0..3 {
                cov[i][j] += arr[i] * arr[j] / n;
            }
        }
    }
    let frob: f64 = cov.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();

    let (zeta, low_confidence) = if frob < 1e-18 {
        // All directions coincide: the common direction is the axis.
        (mean.normalize(), false)
    } else {
        let (evals, evecs) = jacobi_eigen3(cov);
        let mut idx = 0;
        for k in 1..3 {
            if evals[k] < evals[idx] {
                idx = k;
            }
        }
        let lam_min = evals.iter().cloned().fold(f64::INFINITY, f64::min);
        let lam_max = evals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let degenerate = (lam_max - lam_min) <= 1e-12 * lam_max.abs().max(1.0);
        let z = Vec3::new(evecs[0][idx], evecs[1][idx], evecs[2][idx]).normalize();
        (z, degenerate)
    };

    let mut zeta = zeta;
    let mean_cos = dirs.iter().map(|d| d.dot(zeta)).sum::<f64>() / n;
    if mean_cos < 0.0 {
        zeta = -zeta;
    }
    let cos_angle_mean = mean_cos.abs();
    let angles: Vec<f64> = dirs
        .iter()
        .map(|d| d.dot(zeta).clamp(-1.0, 1.0).acos())
        .collect();
    let angle_mean = angles.iter().sum::<f64>() / n;
    let angle_std = (angles
        .iter()
        .map(|a| (a - angle_mean) * (a - angle_mean))
        .sum::<f64>()
        / n)
        .sqrt();

    Ok(AxisFit {
        zeta,
        cos_angle_mean,
        angle_std,
        low_confidence,
    })
}

/// Constant-angle test for a unit Darboux field.
pub fn darboux_slant_helix_test(
    samples: &[DarbouxSample],
    kind: DarbouxFieldKind,
    angle_std_tol: f64,
) -> Result<(AxisFit, bool)> {
    let field = darboux_field(samples, kind)?;
    let fit = fit_axis(&field.unit)?;
    let verdict = fit.angle_std <= angle_std_tol && !fit.low_confidence;
    Ok((fit, verdict))
}

/// Cyclic Jacobi eigendecomposition of a symmetric 3x3 matrix.
/// Returns (eigenvalues, eigenvector columns).
fn jacobi_eigen3(mut a: [[f64; 3]; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _ in 0..64 {
        let off = (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]).sqrt();
        let scale = (a[0][0].abs() + a[1][1].abs() + a[2][2].abs()).max(1e-300);
        if off <= 1e-15 * scale {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            if a[p][q].abs() <= 1e-300 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            for k in 0..3 {
                let akp = a[k][p];
                let akq = a[k][q];
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a[p][k];
                let aqk = a[q][k];
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            for k in 0..3 {
                let vkp = v[k][p];
                let vkq = v[k][q];
                v[k][p] = c * vkp - s * vkq;
                v[k][q] = s * vkp + c * vkq;
            }
        }
    }
    ([a[0][0], a[1][1], a[2][2]], v)
}
