use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use spaceform_core::blaschke::{self, natural_frak_e, verify_with_tolerance};
use spaceform_core::{
    assemble, blowup_sweep, convergence_table, min_disk, min_disk_oracle, ConvexPolygon, CurvatureDefinition,
    GeomError, SpaceForm,
};

use crate::error::CliError;
use crate::input::{self, PolygonFile};
use crate::report::{digest, Check, RunReport};
use crate::{Command, Definition};

/// Oracle agreement for the enclosing disk.
pub const ORACLE_TOL: f64 = 1e-8;
pub const TANGENT_TOL: f64 = 1e-7;
pub const CURVATURE_JUMP_TOL: f64 = 1e-8;
pub const MIN_CURVATURE_TOL: f64 = 1e-8;

pub fn dispatch(command: Command, echo: Vec<String>, tol: f64) -> Result<RunReport, CliError> {
    let mut report = RunReport {
        command: echo,
        input_sha256: None,
        tolerance: tol,
        seed: None,
        results: Value::Null,
        checks: Vec::new(),
    };
    match command {
        Command::Analyze { file } => analyze(&mut report, &file)?,
        Command::Circumradius { file, oracle } => circumradius(&mut report, &file, oracle)?,
        Command::Verify { file, definition, frak_e } => verify(&mut report, &file, definition, frak_e)?,
        Command::Regular { lambda, radius, n, out } => {
            let sf = SpaceForm::new(lambda)?;
            let p = ConvexPolygon::regular_inscribed(sf, radius, n)?;
            emit_polygon(&mut report, &p, out.as_deref())?;
        }
        Command::Digon { lambda, kappa0, out } => {
            let sf = SpaceForm::new(lambda)?;
            let length = blaschke::equality_digon_length(sf.lambda(), kappa0)?;
            let p = ConvexPolygon::digon(sf, length)?;
            emit_polygon(&mut report, &p, out.as_deref())?;
        }
        Command::Convergence { lambda, radius, n_max } => convergence(&mut report, lambda, radius, n_max)?,
        Command::Smooth { file, kappa0, epsilon, samples, out } => {
            smooth(&mut report, &file, kappa0, epsilon, samples, &out)?
        }
        Command::Sweep { file, kappa0, epsilons } => sweep(&mut report, &file, kappa0, &epsilons)?,
        Command::Fuzz { lambda, count, seed, definition, r_max } => {
            report.seed = Some(seed);
            fuzz(&mut report, lambda, count, seed, definition, r_max)?
        }
    }
    Ok(report)
}

fn load(report: &mut RunReport, path: &Path) -> Result<ConvexPolygon, CliError> {
    let (p, bytes) = input::load(path)?;
    report.input_sha256 = Some(digest(&bytes));
    Ok(p)
}

fn analyze(report: &mut RunReport, file: &Path) -> Result<(), CliError> {
    let p = load(report, file)?;
    let curvature = p.curvature_report()?;
    let angles_ok = p.interior_angles().iter().all(|a| *a >= 0.0 && *a < std::f64::consts::PI);
    report.results = json!({
        "lambda": p.space_form().lambda().value(),
        "n": p.len(),
        "side_lengths": p.side_lengths(),
        "interior_angles": p.interior_angles(),
        "vertices": curvature.vertices,
        "kappa0": curvature.kappa0,
        "kappa0_flat": curvature.kappa0_flat,
        "total_turning": p.total_turning(),
        "convexity": {
            "ccw": true,
            "angles_below_pi": angles_ok,
            "digon": p.is_digon(),
            "numerical_digon": blaschke::is_numerical_digon(&p),
        },
    });
    report.checks.push(Check::flag("angles_below_pi", angles_ok));
    Ok(())
}

fn circumradius(report: &mut RunReport, file: &Path, oracle: bool) -> Result<(), CliError> {
    let p = load(report, file)?;
    let sf = p.space_form();
    let disk = min_disk(&sf, p.vertices())?;
    let mut results = json!({
        "center": sf.coords(&disk.center),
        "radius": disk.radius,
        "support": disk.support,
    });
    if oracle {
        let brute = min_disk_oracle(&sf, p.vertices())?;
        let diff = (disk.radius - brute.radius).abs();
        results["oracle"] = json!({
            "center": sf.coords(&brute.center),
            "radius": brute.radius,
            "support": brute.support,
            "difference": diff,
        });
        report.checks.push(Check::at_most("oracle_agreement", diff, ORACLE_TOL));
    }
    report.results = results;
    Ok(())
}

fn verify(report: &mut RunReport, file: &Path, definition: Definition, frak_e: Option<f64>) -> Result<(), CliError> {
    let p = load(report, file)?;
    let r = verify_with_tolerance(&p, CurvatureDefinition::from(definition), frak_e, report.tolerance)?;
    report.checks.push(Check::flag("bound_holds", r.holds));
    if r.degenerate {
        report.checks.push(Check::at_most("equality_margin", r.margin.abs(), report.tolerance));
    }
    report.results = serde_json::to_value(&r)?;
    Ok(())
}

fn emit_polygon(report: &mut RunReport, p: &ConvexPolygon, out: Option<&Path>) -> Result<(), CliError> {
    let file = PolygonFile::from_polygon(p);
    let curvature = p.curvature_report()?;
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&file)? + "\n";
        std::fs::write(path, &text).map_err(|source| CliError::Write { path: path.to_path_buf(), source })?;
    }
    report.results = json!({
        "polygon": file,
        "side_lengths": p.side_lengths(),
        "interior_angles": p.interior_angles(),
        "kappa0": curvature.kappa0,
        "kappa0_flat": curvature.kappa0_flat,
        "circumradius": p.circumradius()?,
        "out": out.map(|o| o.display().to_string()),
    });
    Ok(())
}

fn convergence(report: &mut RunReport, lambda: f64, radius: f64, n_max: usize) -> Result<(), CliError> {
    if n_max < 4 {
        return Err(CliError::Input(format!("--n-max must be at least 4, got {n_max}")));
    }
    let ns: Vec<usize> = std::iter::successors(Some(4usize), |n| n.checked_mul(2))
        .take_while(|n| *n <= n_max)
        .collect();
    let rows = convergence_table(SpaceForm::new(lambda)?.lambda(), radius, &ns)?;
    let max_gap = rows.iter().map(|r| r.path_gap).fold(0.0, f64::max);
    let monotone = rows.windows(2).all(|w| w[1].error < w[0].error);
    report.checks.push(Check::at_most("path_agreement", max_gap, report.tolerance));
    report.checks.push(Check::flag("error_decreasing", monotone));
    report.results = json!({ "lambda": lambda, "radius": radius, "rows": rows });
    Ok(())
}

#[derive(Serialize)]
struct SampleSummary<'a> {
    out: &'a str,
    rows: usize,
}

fn smooth(
    report: &mut RunReport,
    file: &Path,
    kappa0: Option<f64>,
    epsilon: f64,
    samples: usize,
    out: &Path,
) -> Result<(), CliError> {
    if samples < 2 {
        return Err(CliError::Input(format!("--samples must be at least 2, got {samples}")));
    }
    let p = load(report, file)?;
    let kappa0 = match kappa0 {
        Some(k) => k,
        None => p.curvature_report()?.kappa0,
    };
    let smoothed = assemble(&p, kappa0, epsilon)?;
    let sf = p.space_form();
    let points = smoothed.curve.sample(samples)?;

    let mut csv = String::from("piece_kind,piece_index,param,x0,x1,x2,curvature\n");
    for s in &points {
        let c = sf.coords(&s.point);
        let x2 = c.get(2).map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            s.piece_kind.as_str(),
            s.piece_index,
            s.param,
            c[0],
            c[1],
            x2,
            s.curvature
        )
        .expect("writing to a String cannot fail");
    }
    std::fs::write(out, csv).map_err(|source| CliError::Write { path: out.to_path_buf(), source })?;

    let d = &smoothed.diagnostics;
    report.checks.push(Check::at_most("junction_gap", d.max_gap, report.tolerance));
    report.checks.push(Check::at_most("tangent_mismatch", d.max_tangent_mismatch, TANGENT_TOL));
    report.checks.push(Check::at_most("curvature_jump", d.max_curvature_jump, CURVATURE_JUMP_TOL));
    report.checks.push(Check::at_most(
        "min_curvature_deficit",
        d.arc_curvature - d.min_curvature,
        MIN_CURVATURE_TOL,
    ));
    report.checks.push(Check::flag("encloses_vertices", d.encloses_vertices));
    let out_name = out.display().to_string();
    report.results = json!({
        "kappa0": kappa0,
        "support_radius": smoothed.support.radius,
        "diagnostics": d,
        "samples": SampleSummary { out: &out_name, rows: points.len() },
    });
    Ok(())
}

fn sweep(report: &mut RunReport, file: &Path, kappa0: Option<f64>, epsilons: &[f64]) -> Result<(), CliError> {
    let p = load(report, file)?;
    let kappa0 = match kappa0 {
        Some(k) => k,
        None => p.curvature_report()?.kappa0,
    };
    let table = blowup_sweep(&p, kappa0, epsilons)?;
    let vertex_ids: Vec<usize> = table
        .rows
        .first()
        .map(|r| r.vertices.iter().map(|v| v.vertex).collect())
        .unwrap_or_default();
    let ratios: Vec<Value> = vertex_ids
        .iter()
        .map(|&v| json!({ "vertex": v, "ratios": table.curvature_ratios(v) }))
        .collect();
    report.checks.push(Check::flag("circumradius_decreasing", table.circumradius_decreasing()));
    report
        .checks
        .push(Check::flag("smooth_bound_holds", table.rows.iter().all(|r| r.bound_holds)));
    report.results = json!({ "table": table, "curvature_ratios": ratios });
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
struct Violation {
    index: usize,
    seed: u64,
    n: usize,
    margin: Option<f64>,
    error: Option<String>,
}

enum Trial {
    Checked { margin: f64, holds: bool, n: usize },
    Skipped,
    NotGenerated,
    Failed { n: usize, error: GeomError },
}

fn default_r_max(lambda: f64, definition: Definition) -> f64 {
    let scale = if lambda == 0.0 { 1.0 } else { 1.0 / lambda.abs().sqrt() };
    match (lambda.partial_cmp(&0.0), definition) {
        (Some(std::cmp::Ordering::Greater), _) => 1.4 * scale,
        (Some(std::cmp::Ordering::Less), Definition::Flat) => 0.3 * scale,
        _ => 2.0 * scale,
    }
}

fn trial(sf: SpaceForm, seed: u64, r_max: f64, definition: Definition, tol: f64) -> Trial {
    let n = 3 + (seed % 10) as usize;
    let Ok(p) = ConvexPolygon::random_convex(sf, n, seed, r_max) else {
        return Trial::NotGenerated;
    };
    let def = CurvatureDefinition::from(definition);
    let frak_e = match def {
        CurvatureDefinition::Flat => natural_frak_e(&p),
        CurvatureDefinition::Ta => None,
    };
    match verify_with_tolerance(&p, def, frak_e, tol) {
        Ok(r) if def == CurvatureDefinition::Flat && !r.hypothesis => Trial::Skipped,
        Ok(r) => Trial::Checked { margin: r.margin, holds: r.holds, n },
        Err(error) => Trial::Failed { n, error },
    }
}

fn fuzz(
    report: &mut RunReport,
    lambda: f64,
    count: usize,
    seed: u64,
    definition: Definition,
    r_max: Option<f64>,
) -> Result<(), CliError> {
    let sf = SpaceForm::new(lambda)?;
    let r_max = r_max.unwrap_or_else(|| default_r_max(lambda, definition));
    let tol = report.tolerance;
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(count.max(1));
    let chunk = count.div_ceil(threads).max(1);
    let trials: Vec<Trial> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..count)
            .step_by(chunk)
            .map(|start| {
                let end = (start + chunk).min(count);
                scope.spawn(move || {
                    (start..end)
                        .map(|i| trial(sf, seed.wrapping_add(i as u64), r_max, definition, tol))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("fuzz worker panicked")).collect()
    });

    let mut checked = 0usize;
    let mut skipped = 0usize;
    let mut not_generated = 0usize;
    let mut min_margin = f64::INFINITY;
    let mut violations = Vec::new();
    for (i, t) in trials.into_iter().enumerate() {
        let s = seed.wrapping_add(i as u64);
        match t {
            Trial::Checked { margin, holds, n } => {
                checked += 1;
                min_margin = min_margin.min(margin);
                if !holds {
                    violations.push(Violation { index: i, seed: s, n, margin: Some(margin), error: None });
                }
            }
            Trial::Skipped => skipped += 1,
            Trial::NotGenerated => not_generated += 1,
            Trial::Failed { n, error } => violations.push(Violation {
                index: i,
                seed: s,
                n,
                margin: None,
                error: Some(error.to_string()),
            }),
        }
    }
    report.checks.push(Check::at_most("violations", violations.len() as f64, 0.0));
    report.results = json!({
        "lambda": lambda,
        "definition": CurvatureDefinition::from(definition),
        "r_max": r_max,
        "count": count,
        "checked": checked,
        "skipped_outside_hypothesis": skipped,
        "not_generated": not_generated,
        "min_margin": if checked > 0 { Some(min_margin) } else { None },
        "violations": violations,
    });
    Ok(())
}
