//! Orchestration of the validate -> frames -> classify -> associate ->
//! verify -> export pipeline shared by the subcommands.

use darboux::associated::{construct, AssociatedCurve};
use darboux::classify::{
    darboux_slant_helix_test, isophote_test, lancret_test, pointwise_predicates,
    relatively_normal_slant_helix_test, DarbouxFieldKind,
};
use darboux::frames::{darboux_at, DarbouxSample};
use darboux::geometry::{curve_point, validate_surface_curve, Vec3};
use darboux::tol::Tolerances;
use darboux::verify::helix_report;

use crate::config::{apply_overrides, load_scene, ResolvedScene};
use crate::export::{self, AxisDoc, TestDoc};
use crate::{CliError, SceneArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Validate,
    Frames,
    Classify,
    Associate,
    Verify,
    Export,
    Run,
}

impl Stage {
    fn wants_frames_export(self) -> bool {
        matches!(self, Stage::Frames | Stage::Export | Stage::Run)
    }
    fn wants_classify(self) -> bool {
        matches!(self, Stage::Classify | Stage::Run)
    }
    fn wants_associate(self) -> bool {
        matches!(
            self,
            Stage::Associate | Stage::Verify | Stage::Export | Stage::Run
        )
    }
    fn wants_curve_export(self) -> bool {
        matches!(self, Stage::Associate | Stage::Export | Stage::Run)
    }
    fn wants_verify(self) -> bool {
        matches!(self, Stage::Verify | Stage::Run)
    }
}

struct Formats {
    csv: bool,
    obj: bool,
    json: bool,
}

fn formats(args: &SceneArgs) -> Result<Formats, CliError> {
    if args.format.is_empty() {
        return Ok(Formats {
            csv: true,
            obj: true,
            json: true,
        });
    }
    let mut f = Formats {
        csv: false,
        obj: false,
        json: false,
    };
    for spec in &args.format {
        match spec.trim() {
            "csv" => f.csv = true,
            "obj" => f.obj = true,
            "json" => f.json = true,
            other => return Err(CliError::Config(format!("unknown format {other:?}"))),
        }
    }
    Ok(f)
}

pub fn run(args: &SceneArgs, stage: Stage) -> Result<(), CliError> {
    let mut scene = load_scene(&args.scene)?;
    apply_overrides(&mut scene, &args.family, &args.constants, &args.grid)?;
    let tols = match args.tol {
        Some(rel) => Tolerances::with_rel(rel),
        None => Tolerances::default(),
    };
    let fmts = formats(args)?;

    // validate
    let report = validate_surface_curve(&scene.curve, &scene.grid).map_err(CliError::from)?;
    println!("validate {}: {}", scene.name, report.summary());
    if stage == Stage::Validate {
        if !report.pass && !args.report_only {
            return Err(CliError::Verification(format!(
                "validation failed: {}",
                report.summary()
            )));
        }
        return Ok(());
    }
    if !report.pass && !args.report_only {
        return Err(CliError::Verification(format!(
            "validation failed: {}",
            report.summary()
        )));
    }

    // frames
    let mut samples: Vec<DarbouxSample> = Vec::with_capacity(scene.grid.len());
    let mut alphas: Vec<Vec3> = Vec::with_capacity(scene.grid.len());
    for s in scene.grid.points() {
        samples.push(darboux_at(&scene.curve, s).map_err(CliError::from)?);
        alphas.push(curve_point(&scene.curve.alpha, s, 0).map_err(CliError::from)?[0]);
    }

    let out_dir = export::ensure_dir(&args.out)?;
    if stage.wants_frames_export() && fmts.csv {
        let path = out_dir.join(format!("{}-frames.csv", scene.name));
        export::write_frames_csv(&path, &alphas, &samples)?;
        println!("frames: wrote {}", path.display());
    }

    // classify
    if stage.wants_classify() {
        let doc = classification_doc(&scene, &report, &samples, &tols);
        println!(
            "classify {}: geodesic={} asymptotic={} principal={}",
            scene.name,
            doc.predicates.geodesic,
            doc.predicates.asymptotic,
            doc.predicates.principal_line
        );
        if fmts.json {
            let path = out_dir.join(format!("{}-classification.json", scene.name));
            export::write_json(&path, &doc)?;
            println!("classify: wrote {}", path.display());
        }
    }

    if !stage.wants_associate() {
        return Ok(());
    }

    // associate + verify
    let mut verdicts: Vec<export::FamilyVerdictDoc> = Vec::new();
    let mut curves: Vec<AssociatedCurve> = Vec::new();
    let mut hard_error: Option<CliError> = None;
    let mut failed_verdict = false;

    for family in &scene.families {
        match construct(*family, &scene.curve, &scene.constants, &scene.grid) {
            Ok(a) => {
                let mut doc = export::FamilyVerdictDoc {
                    family: family.tag().to_string(),
                    case: Some(a.case_tag.label().to_string()),
                    verdict: None,
                    lancret_mean: None,
                    lancret_stddev: None,
                    alignment: None,
                    binormal_check: None,
                    axis: None,
                    angle_std: None,
                    note: None,
                };
                if stage.wants_verify() {
                    match helix_report(&a, &tols) {
                        Ok(r) => {
                            println!(
                                "verify {} {}: {} (lancret stddev {:.3e}, alignment {:.3e})",
                                scene.name,
                                family.tag(),
                                if r.verdict { "helix" } else { "NOT a helix" },
                                r.lancret.stddev,
                                r.alignment
                            );
                            if !r.verdict {
                                failed_verdict = true;
                            }
                            doc.verdict = Some(r.verdict);
                            doc.lancret_mean = Some(r.lancret.mean);
                            doc.lancret_stddev = Some(r.lancret.stddev);
                            doc.alignment = Some(r.alignment);
                            doc.binormal_check = Some(r.binormal_check);
                            doc.axis = Some(r.axis.zeta.as_array());
                            doc.angle_std = Some(r.axis.angle_std);
                        }
                        Err(e) => {
                            println!("verify {} {}: error: {e}", scene.name, family.tag());
                            doc.note = Some(e.to_string());
                            if hard_error.is_none() {
                                hard_error = Some(CliError::from(e));
                            }
                        }
                    }
                }
                verdicts.push(doc);
                curves.push(a);
            }
            Err(e) => {
                println!("associate {} {}: error: {e}", scene.name, family.tag());
                verdicts.push(export::FamilyVerdictDoc {
                    family: family.tag().to_string(),
                    case: None,
                    verdict: None,
                    lancret_mean: None,
                    lancret_stddev: None,
                    alignment: None,
                    binormal_check: None,
                    axis: None,
                    angle_std: None,
                    note: Some(e.to_string()),
                });
                if hard_error.is_none() {
                    hard_error = Some(CliError::from(e));
                }
            }
        }
    }

    if stage.wants_curve_export() {
        for a in &curves {
            if fmts.csv {
                let path = out_dir.join(format!("{}-{}.csv", scene.name, a.family.tag()));
                export::write_curve_csv(&path, a)?;
                println!("associate: wrote {}", path.display());
            }
            if fmts.obj {
                let path = out_dir.join(format!("{}-{}.obj", scene.name, a.family.tag()));
                let pts: Vec<Vec3> = a.samples.iter().map(|sm| sm.gamma).collect();
                export::write_obj(&path, &format!("{}-{}", scene.name, a.family.tag()), &pts)?;
                println!("associate: wrote {}", path.display());
            }
        }
    }

    if stage.wants_verify() && fmts.json {
        let doc = export::VerificationDoc {
            scene: scene.name.clone(),
            grid: grid_doc(&scene),
            families: verdicts,
        };
        let path = out_dir.join(format!("{}-verification.json", scene.name));
        export::write_json(&path, &doc)?;
        println!("verify: wrote {}", path.display());
    }

    if !args.report_only {
        if let Some(e) = hard_error {
            return Err(e);
        }
        if failed_verdict {
            return Err(CliError::Verification(
                "one or more constructed curves failed the helix verdict".into(),
            ));
        }
        if !report.pass {
            return Err(CliError::Verification(format!(
                "validation failed: {}",
                report.summary()
            )));
        }
    }
    Ok(())
}

fn grid_doc(scene: &ResolvedScene) -> export::GridDoc {
    export::GridDoc {
        s0: scene.grid.s0(),
        s1: scene.grid.s1(),
        n: scene.grid.len(),
    }
}

fn test_doc(result: darboux::Result<darboux::classify::ConstancyReport>) -> TestDoc {
    match result {
        Ok(r) => TestDoc {
            verdict: Some(r.verdict),
            mean: Some(r.mean),
            stddev: Some(r.stddev),
            note: None,
        },
        Err(e) => TestDoc {
            verdict: None,
            mean: None,
            stddev: None,
            note: Some(e.to_string()),
        },
    }
}

fn axis_doc(samples: &[DarbouxSample], kind: DarbouxFieldKind, tols: &Tolerances) -> AxisDoc {
    match darboux_slant_helix_test(samples, kind, tols.axis_angle_std) {
        Ok((fit, verdict)) => AxisDoc {
            verdict: Some(verdict),
            zeta: Some(fit.zeta.as_array()),
            cos_angle_mean: Some(fit.cos_angle_mean),
            angle_std: Some(fit.angle_std),
            note: None,
        },
        Err(e) => AxisDoc {
            verdict: None,
            zeta: None,
            cos_angle_mean: None,
            angle_std: None,
            note: Some(e.to_string()),
        },
    }
}

/// Fixed-direction fit for a raw frame field (the axis the field keeps a
/// constant angle with, when the fit is tight).
fn frame_axis_doc(dirs: &[Vec3], tols: &Tolerances) -> AxisDoc {
    match darboux::classify::fit_axis(dirs) {
        Ok(fit) => AxisDoc {
            verdict: Some(fit.angle_std <= tols.axis_angle_std && !fit.low_confidence),
            zeta: Some(fit.zeta.as_array()),
            cos_angle_mean: Some(fit.cos_angle_mean),
            angle_std: Some(fit.angle_std),
            note: if fit.low_confidence {
                Some("low confidence: covariance spectrum is degenerate".into())
            } else {
                None
            },
        },
        Err(e) => AxisDoc {
            verdict: None,
            zeta: None,
            cos_angle_mean: None,
            angle_std: None,
            note: Some(e.to_string()),
        },
    }
}

fn classification_doc(
    scene: &ResolvedScene,
    report: &darboux::geometry::ValidationReport,
    samples: &[DarbouxSample],
    tols: &Tolerances,
) -> export::ClassificationDoc {
    let predicates = pointwise_predicates(samples);
    export::ClassificationDoc {
        scene: scene.name.clone(),
        grid: grid_doc(scene),
        validation: report.into(),
        predicates: export::PredicatesDoc {
            geodesic: predicates.is_geodesic,
            asymptotic: predicates.is_asymptotic,
            principal_line: predicates.is_principal_line,
        },
        helical: test_doc(lancret_test(
            &scene.curve.alpha,
            &scene.grid,
            tols.constancy_rel,
        )),
        relatively_normal_slant_helix: test_doc(relatively_normal_slant_helix_test(
            samples,
            tols.constancy_rel,
        )),
        isophote: test_doc(isophote_test(samples, tols.constancy_rel)),
        tangent_axis: frame_axis_doc(&samples.iter().map(|d| d.t).collect::<Vec<_>>(), tols),
        tangent_normal_axis: frame_axis_doc(&samples.iter().map(|d| d.v).collect::<Vec<_>>(), tols),
        surface_normal_axis: frame_axis_doc(&samples.iter().map(|d| d.u).collect::<Vec<_>>(), tols),
        darboux_slant_osculating: axis_doc(samples, DarbouxFieldKind::Osculating, tols),
        darboux_slant_normal: axis_doc(samples, DarbouxFieldKind::Normal, tols),
        darboux_slant_rectifying: axis_doc(samples, DarbouxFieldKind::Rectifying, tols),
    }
}
