use pdm_core::oracle::{convergence_study, PdmProblem, VerificationReport};
use pdm_core::pct::{audit, Audit, AuditOptions};
use pdm_core::reference::Reference;
use pdm_core::{Interval, MassProfile, TargetProblem};
use rayon::prelude::*;
use serde_json::json;

use crate::args::Coordinate;
use crate::config::{FileConfig, Format, RunConfig, SWEEPABLE};
use crate::output::{num, opt, Table};
use crate::CliError;

/// Text to print and whether the command's checks passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

fn render(cfg: &RunConfig, command: &str, table: &Table, trailer: &[String], json: serde_json::Value) -> String {
    match cfg.format {
        Format::Json => {
            let mut doc = json;
            doc["command"] = json!(command);
            doc["config"] = serde_json::to_value(&cfg.effective).unwrap_or_default();
            serde_json::to_string_pretty(&doc).unwrap_or_default() + "\n"
        }
        Format::Csv | Format::Table => {
            let mut out = cfg.header(command);
            out.push_str(&if cfg.format == Format::Csv { table.to_csv() } else { table.to_text() });
            for line in trailer {
                out.push_str("# ");
                out.push_str(line);
                out.push('\n');
            }
            out
        }
    }
}

/// Highest requested n that exists at this ℓ, with a notice when capped.
fn capped_n_max(reference: &Reference, n_max: usize, notices: &mut Vec<String>) -> Option<usize> {
    match reference.bound_state_count() {
        Some(count) if reference.name() == "morse" && count <= n_max => {
            notices.push(format!(
                "notice: morse ℓ={} has {count} bound state(s); rows with n ≥ {count} omitted",
                reference.ell()
            ));
            count.checked_sub(1)
        }
        _ => Some(n_max),
    }
}

pub fn spectrum(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut table = Table::new(&["n", "ell", "E_analytic"]);
    let mut notices = Vec::new();
    let mut rows = Vec::new();
    for &ell in &cfg.ells {
        let r = cfg.reference.with_ell(ell);
        let Some(top) = capped_n_max(&r, cfg.n_max, &mut notices) else { continue };
        for n in 0..=top {
            let e = r.energy(n)?;
            table.push(vec![n.to_string(), ell.to_string(), num(e)]);
            rows.push(json!({"n": n, "ell": ell, "E_analytic": e}));
        }
    }
    let doc = json!({"rows": rows, "notices": notices});
    Ok(Outcome { text: render(cfg, "spectrum", &table, &notices, doc), passed: true })
}

fn target(cfg: &RunConfig, reference: Reference, profile: MassProfile) -> Result<TargetProblem, CliError> {
    Ok(TargetProblem::new(reference, profile)?.with_correction_sign(cfg.correction_sign))
}

pub fn wavefunction(
    cfg: &RunConfig,
    n: usize,
    coordinate: Coordinate,
    samples: usize,
    range: (Option<f64>, Option<f64>),
) -> Result<Outcome, CliError> {
    if samples < 2 {
        return Err(CliError::Config("--samples must be at least 2".into()));
    }
    let profile = if coordinate == Coordinate::Y { MassProfile::Uniform } else { cfg.profile };
    let tp = target(cfg, cfg.reference, profile)?;
    let state = tp.bound_state(n)?;
    let window = match (range, cfg.x_range) {
        ((Some(lo), Some(hi)), _) if lo < hi => Interval::new(lo, hi),
        ((None, None), Some((lo, hi))) => Interval::new(lo, hi),
        ((None, None), None) => tp.window(n, cfg.box_tol)?,
        _ => return Err(CliError::Config("--from and --to must be given together with from < to".into())),
    };
    let mut table = Table::new(&["coordinate", "amplitude"]);
    let mut points = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = if i + 1 == samples { window.hi } else { window.lo + window.width() * i as f64 / (samples - 1) as f64 };
        let v = state.eval(t);
        table.push(vec![num(t), num(v)]);
        points.push([t, v]);
    }
    let label = match coordinate {
        Coordinate::X => "x",
        Coordinate::Y => "y",
    };
    let trailer = vec![format!("coordinate = {label}, n = {n}, ell = {}, E = {}", state.ell, num(state.energy))];
    let doc = json!({"coordinate": label, "n": n, "ell": state.ell, "energy": state.energy, "samples": points});
    Ok(Outcome { text: render(cfg, "wavefunction", &table, &trailer, doc), passed: true })
}

fn verify_reports(cfg: &RunConfig, resolutions: &[usize], notices: &mut Vec<String>) -> Result<Vec<VerificationReport>, CliError> {
    let mut reports = Vec::new();
    for &ell in &cfg.ells {
        let r = cfg.reference.with_ell(ell);
        let Some(top) = capped_n_max(&r, cfg.n_max, notices) else { continue };
        let tp = target(cfg, r, cfg.profile)?;
        let problem = match cfg.x_range {
            Some((lo, hi)) => PdmProblem::with_window(tp, Interval::new(lo, hi))?,
            None => PdmProblem::new(tp, top, cfg.box_tol)?,
        };
        reports.push(convergence_study(&problem, resolutions, top + 1)?);
    }
    Ok(reports)
}

/// Failures of a report against the configured tolerances.
fn failures(cfg: &RunConfig, report: &VerificationReport) -> Vec<String> {
    let t = cfg.tolerances;
    let mut out = Vec::new();
    for r in &report.records {
        match r.rel_err_extrapolated {
            Some(e) if e <= t.energy => {}
            e => out.push(format!(
                "FAIL {} n={} ell={}: extrapolated relative error {} exceeds {}",
                report.label,
                r.n,
                r.ell,
                opt(e),
                num(t.energy)
            )),
        }
        if let Some(p) = r.order {
            if !(t.order_min..=t.order_max).contains(&p) {
                out.push(format!(
                    "FAIL {} n={} ell={}: observed order {} outside [{}, {}]",
                    report.label, r.n, r.ell, num(p), t.order_min, t.order_max
                ));
            }
        }
    }
    out
}

pub fn verify(cfg: &RunConfig, resolutions: Option<Vec<usize>>) -> Result<Outcome, CliError> {
    let resolutions = resolutions.unwrap_or_else(|| cfg.resolutions.clone());
    let mut notices = Vec::new();
    let reports = verify_reports(cfg, &resolutions, &mut notices)?;
    let mut table = Table::new(&["n", "ell", "E_analytic", "E_numeric", "abs_err", "rel_err", "residual", "order"]);
    let mut trailer = notices;
    let mut all_failures = Vec::new();
    for rep in &reports {
        for r in &rep.records {
            table.push(vec![
                r.n.to_string(),
                r.ell.to_string(),
                opt(r.e_analytic),
                num(r.e_numeric),
                opt(r.abs_err),
                opt(r.rel_err),
                opt(r.residual),
                opt(r.order),
            ]);
        }
        trailer.push(format!(
            "{}: window [{}, {}], resolutions {:?}, max extrapolated rel_err {}",
            rep.label,
            num(rep.window.lo),
            num(rep.window.hi),
            rep.resolutions,
            opt(rep.max_rel_err_extrapolated())
        ));
        all_failures.extend(failures(cfg, rep));
    }
    let passed = all_failures.is_empty();
    trailer.extend(all_failures.iter().cloned());
    trailer.push(format!("verdict: {}", if passed { "PASS" } else { "FAIL" }));
    let doc = json!({"reports": reports, "failures": all_failures, "passed": passed});
    Ok(Outcome { text: render(cfg, "verify", &table, &trailer, doc), passed })
}

pub fn audit_cmd(cfg: &RunConfig, stray_q: f64, samples: usize) -> Result<Outcome, CliError> {
    let options = AuditOptions { samples, stray_q, ..AuditOptions::default() };
    let mut audits: Vec<(u32, Audit)> = Vec::new();
    for &ell in &cfg.ells {
        let tp = target(cfg, cfg.reference.with_ell(ell), cfg.profile)?;
        audits.push((ell, audit(&tp, &options)?));
    }
    let mut table = Table::new(&["equation_id", "ell", "verdict", "max_abs_deviation", "argmax_x"]);
    let mut trailer = Vec::new();
    for (ell, a) in &audits {
        for r in &a.records {
            table.push(vec![
                r.equation_id.to_string(),
                ell.to_string(),
                r.verdict.to_string(),
                num(r.max_abs_deviation),
                num(r.argmax_x),
            ]);
        }
        for v in &a.index_variants {
            trailer.push(format!("laguerre {} ell={ell} n={}: residual {}", v.variant, v.n, num(v.residual)));
        }
    }
    if table.rows.is_empty() {
        trailer.push(format!("no printed closed form exists for {} × {}", cfg.reference.name(), cfg.profile));
    }
    let doc = json!({
        "audits": audits.iter().map(|(ell, a)| json!({"ell": ell, "records": a.records, "index_variants": a.index_variants})).collect::<Vec<_>>()
    });
    Ok(Outcome { text: render(cfg, "audit", &table, &trailer, doc), passed: true })
}

struct SweepRow {
    value: f64,
    n: usize,
    ell: u32,
    analytic: f64,
    numeric: Option<(f64, Option<f64>, bool)>,
}

pub fn sweep(cfg: &RunConfig, param: &str, values: &[String], with_verify: bool) -> Result<Outcome, CliError> {
    if !SWEEPABLE.contains(&param) {
        return Err(CliError::Config(format!("`{param}` is not sweepable; choose one of {}", SWEEPABLE.join(", "))));
    }
    let values = values
        .iter()
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| CliError::Config(format!("sweep value `{s}` is not a number"))))
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Ok(Outcome { text: String::new(), passed: true });
    }
    // resolve every configuration before computing anything
    let configs = values
        .iter()
        .map(|&v| {
            let mut file: FileConfig = cfg.effective.clone();
            file.set_parameter(param, v)?;
            Ok((v, RunConfig::resolve(file, cfg.correction_sign)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let chunks = configs
        .par_iter()
        .map(|(v, c)| sweep_one(c, *v, with_verify))
        .collect::<Result<Vec<_>, CliError>>()?;
    let rows: Vec<SweepRow> = chunks.into_iter().flatten().collect();

    let mut columns = vec!["param", "value", "n", "ell", "E_analytic"];
    if with_verify {
        columns.extend(["E_numeric", "rel_err", "pass"]);
    }
    let mut table = Table::new(&columns);
    let mut passed = true;
    for r in &rows {
        let mut cells = vec![param.to_string(), num(r.value), r.n.to_string(), r.ell.to_string(), num(r.analytic)];
        if let Some((e, rel, ok)) = r.numeric {
            passed &= ok;
            cells.extend([num(e), opt(rel), ok.to_string()]);
        }
        table.push(cells);
    }
    let doc = json!({
        "param": param,
        "rows": rows.iter().map(|r| {
            let mut row = json!({"value": r.value, "n": r.n, "ell": r.ell, "E_analytic": r.analytic});
            if let Some((e, rel, ok)) = r.numeric {
                row["E_numeric"] = json!(e);
                row["rel_err"] = json!(rel);
                row["pass"] = json!(ok);
            }
            row
        }).collect::<Vec<_>>(),
        "passed": passed,
    });
    let trailer = if with_verify { vec![format!("verdict: {}", if passed { "PASS" } else { "FAIL" })] } else { Vec::new() };
    Ok(Outcome { text: render(cfg, "sweep", &table, &trailer, doc), passed })
}

fn sweep_one(cfg: &RunConfig, value: f64, with_verify: bool) -> Result<Vec<SweepRow>, CliError> {
    let mut notices = Vec::new();
    let mut rows = Vec::new();
    if with_verify {
        for rep in verify_reports(cfg, &cfg.resolutions, &mut notices)? {
            let failed = failures(cfg, &rep);
            for r in &rep.records {
                let ok = !failed.iter().any(|f| f.contains(&format!(" n={} ell={}:", r.n, r.ell)));
                rows.push(SweepRow {
                    value,
                    n: r.n,
                    ell: r.ell,
                    analytic: r.e_analytic.unwrap_or(f64::NAN),
                    numeric: Some((r.e_numeric, r.rel_err_extrapolated, ok)),
                });
            }
        }
    } else {
        for &ell in &cfg.ells {
            let r = cfg.reference.with_ell(ell);
            let Some(top) = capped_n_max(&r, cfg.n_max, &mut notices) else { continue };
            for n in 0..=top {
                rows.push(SweepRow { value, n, ell, analytic: r.energy(n)?, numeric: None });
            }
        }
    }
    Ok(rows)
}
