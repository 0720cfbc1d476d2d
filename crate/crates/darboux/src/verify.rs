//! Numerical certification that constructed associated curves are general
//! helices, plus the sweep checking that base-curve classification and
//! helix certification always agree across the fixture suite.

use crate::associated::{construct, AssociatedCurve, FamilyGroup, HelixFamily, ALL_FAMILIES};
use crate::classify::{
    constancy, darboux_field, fit_axis, isophote_test, lancret_test,
    relatively_normal_slant_helix_test, AxisFit, ConstancyReport, DarbouxFieldKind,
};
use crate::error::{KernelError, Result};
use crate::fixtures::Fixture;
use crate::frames::frenet_from_derivs;
use crate::tol::{self, Tolerances};

/// The verdict object for one constructed curve.
#[derive(Debug, Clone)]
pub struct HelixReport {
    pub family: HelixFamily,
    /// Constancy of tau/kappa along gamma.
    pub lancret: ConstancyReport,
    /// Fit of the Frenet axis direction (tau T + kappa B)/sqrt(kappa^2+tau^2),
    /// signed so that <T_gamma(s0), zeta> >= 0.
    pub axis: AxisFit,
    /// max over grid of 1 - |<T_gamma, X>| for the family's frame field X.
    pub alignment: f64,
    /// max over grid of 1 - |<B_gamma, unit Darboux field>|.
    pub binormal_check: f64,
    /// True when <T_gamma, X> never changes sign along the grid.
    pub sign_consistent: bool,
    pub verdict: bool,
}

fn field_kind(group: FamilyGroup) -> DarbouxFieldKind {
    match group {
        FamilyGroup::Hcc => DarbouxFieldKind::Normal,
        FamilyGroup::Rns => DarbouxFieldKind::Rectifying,
        FamilyGroup::Icc => DarbouxFieldKind::Osculating,
    }
}

/// Certify one constructed associated curve.
pub fn helix_report(a: &AssociatedCurve, tols: &Tolerances) -> Result<HelixReport> {
    let n = a.samples.len();
    let mut ratios = Vec::with_capacity(n);
    let mut tangents = Vec::with_capacity(n);
    let mut axis_dirs = Vec::with_capacity(n);
    let mut binormals = Vec::with_capacity(n);

    for sm in &a.samples {
        let f = frenet_from_derivs(sm.s, sm.gamma_d1, sm.gamma_d2, sm.gamma_d3).map_err(
            |e| match e {
                KernelError::UndefinedFrame { s, kappa } => {
                    KernelError::CurvatureVanishes { s, kappa }
                }
                other => other,
            },
        )?;
        if f.kappa < tol::ZERO_CURVATURE {
            return Err(KernelError::CurvatureVanishes {
                s: sm.s,
                kappa: f.kappa,
            });
        }
        ratios.push(f.tau / f.kappa);
        tangents.push(f.t);
        binormals.push(f.b);
        let denom = (f.kappa * f.kappa + f.tau * f.tau).sqrt();
        axis_dirs.push((f.t * f.tau + f.b * f.kappa) / denom);
    }

    let lancret = constancy(&ratios, tols.constancy_rel)?;

    let mut axis = fit_axis(&axis_dirs)?;
    if tangents[0].dot(axis.zeta) < 0.0 {
        axis.zeta = -axis.zeta;
    }

    let idx = a.family.group().designated_index();
    let mut alignment = 0.0f64;
    let mut first_sign = 0.0f64;
    let mut sign_consistent = true;
    for (t, sm) in tangents.iter().zip(&a.samples) {
        let frame = [sm.frame.t, sm.frame.v, sm.frame.u][idx];
        let c = t.dot(frame);
        alignment = alignment.max(1.0 - c.abs());
        if first_sign == 0.0 {
            first_sign = c.signum();
        } else if c.signum() != first_sign {
            sign_consistent = false;
        }
    }

    let frames: Vec<_> = a.samples.iter().map(|sm| sm.frame).collect();
    let dfield = darboux_field(&frames, field_kind(a.family.group()))?;
    let mut binormal_check = 0.0f64;
    for (b, w) in binormals.iter().zip(&dfield.unit) {
        binormal_check = binormal_check.max(1.0 - b.dot(*w).abs());
    }

    let verdict =
        lancret.verdict && alignment <= tols.alignment_max && binormal_check <= tols.binormal_max;

    Ok(HelixReport {
        family: a.family,
        lancret,
        axis,
        alignment,
        binormal_check,
        sign_consistent,
        verdict,
    })
}

/// Outcome of one (fixture, family) cell of the sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub fixture: String,
    pub family: HelixFamily,
    /// Base-curve classification for the family's group, when decidable.
    pub base: Option<bool>,
    /// Helix verdict of the constructed associated curve, when constructible.
    pub helix: Option<bool>,
    /// Agreement between the two, when both are defined.
    pub agree: Option<bool>,
    pub note: String,
}

/// Base-curve classification per group.  Falls back to the constant-angle
/// test on the group's Darboux field when the invariant's hypothesis fails
/// (the equivalences make them interchangeable).
fn base_classification(
    fixture: &Fixture,
    group: FamilyGroup,
    tols: &Tolerances,
) -> (Option<bool>, String) {
    let samples = match crate::frames::darboux_samples_unchecked(&fixture.curve, &fixture.grid) {
        Ok(s) => s,
        Err(e) => return (None, format!("frames failed: {e}")),
    };
    let primary: Result<bool> = match group {
        FamilyGroup::Hcc => {
            lancret_test(&fixture.curve.alpha, &fixture.grid, tols.constancy_rel).map(|r| r.verdict)
        }
        FamilyGroup::Rns => {
            relatively_normal_slant_helix_test(&samples, tols.constancy_rel).map(|r| r.verdict)
        }
        FamilyGroup::Icc => isophote_test(&samples, tols.constancy_rel).map(|r| r.verdict),
    };
    match primary {
        Ok(v) => (Some(v), String::new()),
        Err(e) => {
            let kind = field_kind(group);
            match crate::classify::darboux_slant_helix_test(&samples, kind, tols.axis_angle_std) {
                Ok((_, v)) => (Some(v), format!("via {} Darboux field ({e})", kind.label())),
                Err(e2) => (None, format!("{e}; {e2}")),
            }
        }
    }
}

/// Run every (fixture, family) pair: classify the base curve, construct the
/// associated curve, certify it, and record whether the verdicts agree.
/// Inadmissible combinations are recorded as skipped, never as
/// disagreements.
pub fn equivalence_sweep(fixtures: &[Fixture], tols: &Tolerances) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    for fx in fixtures {
        for family in ALL_FAMILIES {
            let (base, mut note) = base_classification(fx, family.group(), tols);
            let helix = match construct(family, &fx.curve, &fx.constants, &fx.grid) {
                Ok(a) => match helix_report(&a, tols) {
                    Ok(r) => Some(r.verdict),
                    Err(e) => {
                        if !note.is_empty() {
                            note.push_str("; ");
                        }
                        note.push_str(&format!("report failed: {e}"));
                        None
                    }
                },
                Err(e) => {
                    if !note.is_empty() {
                        note.push_str("; ");
                    }
                    note.push_str(&format!("skipped: {e}"));
                    None
                }
            };
            let agree = match (base, helix) {
                (Some(b), Some(h)) => Some(b == h),
                _ => None,
            };
            rows.push(SweepRow {
                fixture: fx.name.to_string(),
                family,
                base,
                helix,
                agree,
                note,
            });
        }
    }
    rows
}

/// Render the sweep as CSV (fixture, family, base, helix, agree, note).
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("fixture,family,base,helix,agree,note\n");
    let fmt = |o: Option<bool>| match o {
        Some(true) => "true",
        Some(false) => "false",
        None => "skipped",
    };
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.fixture,
            r.family.tag(),
            fmt(r.base),
            fmt(r.helix),
            fmt(r.agree),
            r.note.replace(',', ";")
        ));
    }
    out
}
