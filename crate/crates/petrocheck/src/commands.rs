//! Command implementations. Each takes an [`ExperimentConfig`] and returns an
//! [`Outcome`]; writing the outputs is left to the caller.

use std::fs;
use std::path::Path;

use petrocheck_core::barriers::*;
use petrocheck_core::calculus::{p_laplacian_radial_fd, p_laplacian_radial_power, residual, Barenblatt, FdOptions, SpaceTimeFunction};
use petrocheck_core::domains::{family_gauge, DomainProfile};
use petrocheck_core::solver::*;
use petrocheck_core::verify::*;
use petrocheck_core::Params;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{BoundaryChoice, Command, ExperimentConfig, ParamSet};
use crate::{exit, json, tables, CliError};

/// Tolerance of `lemma-check`: `|closed - oracle| / (1 + |closed|)`.
pub const LEMMA_TOL: f64 = 1e-6;
/// Tolerance of `barenblatt-check` on `|B_t - Δ_p B|`.
pub const BARENBLATT_TOL: f64 = 1e-5;
/// Ladder length used by `verify` for the family checks: `C · 2^j`, `j = 0..=8`.
pub const FAMILY_LADDER: i32 = 8;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    /// Full report document (schema, config, result, hash, timestamp).
    pub report: Value,
    pub csv: Option<String>,
    /// One line for the terminal.
    pub summary: String,
}

struct Partial {
    code: i32,
    result: Value,
    csv: Option<String>,
    summary: String,
}

pub fn execute(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let params = &config.params;
    let partial = match &config.command {
        Command::LemmaCheck { samples } => lemma_check(params, *samples)?,
        Command::BarenblattCheck { samples } => barenblatt_check(params, *samples)?,
        Command::Verify { kind } => verify(config, *kind)?,
        Command::Classify { probe, ladder } => classify_cmd(config, *probe, *ladder)?,
        Command::Solve { data } => solve(config, *data)?,
        Command::Sweep { p_list, q_list, probe, ladder } => sweep(config, p_list, q_list, *probe, *ladder)?,
        Command::ScaleCheck { a, tol, data } => scale_check(config, *a, *tol, *data)?,
    };
    let report = json::report(config.command.name(), config, partial.result, partial.code)?;
    Ok(Outcome { code: partial.code, report, csv: partial.csv, summary: partial.summary })
}

fn csv_string(write: impl FnOnce(&mut Vec<u8>) -> Result<(), CliError>) -> Result<String, CliError> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV writer emits UTF-8"))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// The tabulated profile when given, otherwise `|x| < K(-t)^q` from `t0`.
pub fn profile_of(params: &ParamSet) -> Result<DomainProfile, CliError> {
    match &params.profile_csv {
        Some(path) => tables::read_profile(read_file(path)?.as_bytes()),
        None => Ok(DomainProfile::power(params.k, params.q()?, params.t0)?),
    }
}

fn boundary_function(choice: BoundaryChoice) -> SpaceTimeFunction {
    match choice {
        BoundaryChoice::Probe => default_probe(),
        BoundaryChoice::Constant { value } => SpaceTimeFunction::constant(value),
        BoundaryChoice::Quadratic => SpaceTimeFunction::new("1 + r^2 + t/2", |r, t| 1.0 + r * r + 0.5 * t),
    }
}

fn validated(params: &ParamSet) -> Result<(f64, u32), CliError> {
    let p = params.p()?;
    Params::new(p, params.n, params.t0)?;
    Ok((p, params.n))
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

fn lemma_check(params: &ParamSet, samples: usize) -> Result<Partial, CliError> {
    let (p, n) = validated(params)?;
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let mut rows = Vec::with_capacity(samples);
    for i in 0..samples {
        // Weyl sequences: deterministic and well spread
        let k = (i + 1) as f64;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * (0.2 + 1.8 * frac(k * 0.618_033_988_749_894_9));
        let alpha = 0.5 + 2.5 * frac(k * 0.414_213_562_373_095_03);
        let r = 0.2 + 1.3 * frac(k * 0.732_050_807_568_877_2);
        let closed = p_laplacian_radial_power(c, alpha, p, n, r)?;
        let u = SpaceTimeFunction::new("power", move |r, _| c * r.powf(alpha));
        let oracle = p_laplacian_radial_fd(&u, p, n, r, 0.0, FdOptions { h: 1e-4, eps: 0.0 })?;
        let dev = (closed - oracle).abs() / (1.0 + closed.abs());
        rows.push(vec![p, f64::from(n), c, alpha, r, closed, oracle, dev]);
    }
    let worst = rows.iter().max_by(|a, b| a[7].total_cmp(&b[7])).expect("samples >= 1").clone();
    let pass = worst[7] <= LEMMA_TOL;
    let header = ["p", "n", "C", "alpha", "r", "closed_form", "oracle", "deviation"];
    let worst_row: serde_json::Map<String, Value> = header.iter().map(|h| h.to_string()).zip(worst.iter().map(|v| json!(v))).collect();
    let csv = csv_string(|buf| tables::write_rows(&header, &rows, buf))?;
    let summary = if pass {
        format!("lemma-check: {samples} samples, max deviation {:.3e} (tol {LEMMA_TOL:e})", worst[7])
    } else {
        format!("lemma-check: FAIL, worst row {}", json::to_compact(&worst_row)?)
    };
    Ok(Partial {
        code: if pass { exit::PASS } else { exit::CERTIFICATE },
        result: json!({ "samples": samples, "tolerance": LEMMA_TOL, "max_deviation": worst[7], "worst_row": worst_row, "pass": pass }),
        csv: Some(csv),
        summary,
    })
}

fn barenblatt_check(params: &ParamSet, samples: usize) -> Result<Partial, CliError> {
    let (p, n) = validated(params)?;
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let b = Barenblatt::new(p, n, params.c.unwrap_or(1.0))?;
    let f = b.function();
    let radii = samples.div_ceil(10).max(2);
    let mut rows = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = 0.5 + 1.5 * (i % 10) as f64 / 9.0;
        // without a free boundary (p < 2) sample on the self-similar scale
        let reach = if p > 2.0 { b.support_radius(t) } else { 2.0 * t.powf(1.0 / b.lambda) };
        let r = reach * (0.05 + 0.75 * (i / 10) as f64 / (radii - 1) as f64);
        let res = residual(&f, p, n, r, t)?;
        rows.push(vec![t, r, b.value(r, t), res]);
    }
    let worst = rows.iter().map(|row| row[3].abs()).fold(0.0, f64::max);
    let pass = worst <= BARENBLATT_TOL;
    let csv = csv_string(|buf| tables::write_rows(&["t", "r", "B", "residual"], &rows, buf))?;
    Ok(Partial {
        code: if pass { exit::PASS } else { exit::CERTIFICATE },
        result: json!({ "samples": samples, "C": b.c, "lambda": b.lambda, "tolerance": BARENBLATT_TOL, "max_abs_residual": worst, "pass": pass }),
        csv: Some(csv),
        summary: format!("barenblatt-check: {samples} points, max |B_t - Δ_p B| {worst:.3e} (tol {BARENBLATT_TOL:e})"),
    })
}

fn spec_json(spec: &BarrierSpec, grid_hash: String) -> Result<Value, CliError> {
    let mut v = serde_json::to_value(spec)?;
    if let Value::Object(map) = &mut v {
        map.insert("grid_hash".into(), Value::from(grid_hash));
    }
    Ok(v)
}

fn required<T>(value: Option<T>, flag: &str, kind: BarrierKind) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("{flag} is required for {}", kind.as_str())))
}

fn verify(config: &ExperimentConfig, kind: BarrierKind) -> Result<Partial, CliError> {
    let params = &config.params;
    let (p, n) = validated(params)?;
    let grid = config.grid.sample_grid();
    let mut certificates = Vec::new();
    let mut extra = serde_json::Map::new();
    let (barrier, grid_hash) = match kind {
        BarrierKind::SingularIrregularity => (singular_irregularity_barrier(p, required(params.q, "--q", kind)?, n)?, json::content_hash(&grid)?),
        BarrierKind::SingularTraditional => (singular_traditional_barrier(p, required(params.q, "--q", kind)?, n)?, json::content_hash(&grid)?),
        BarrierKind::DegenerateIrregularity => {
            let c = match params.c {
                Some(c) => c,
                None => degenerate_irregularity_max_c(p, n)?,
            };
            (degenerate_irregularity_barrier(p, n, c)?, json::content_hash(&grid)?)
        }
        BarrierKind::DegenerateSmallData => {
            let q = required(params.q, "--q", kind)?;
            let beta = required(params.beta, "--beta", kind)?;
            (degenerate_small_data_barrier(p, q, n, beta)?, json::content_hash(&grid)?)
        }
        BarrierKind::DegenerateFamilyMember => {
            let profile = profile_of(params)?;
            let gauge = family_gauge(&profile, p, n)?;
            let c = match params.c {
                Some(c) => c,
                None => {
                    let search = find_c0(p, n, &gauge, &profile, &grid)?;
                    extra.insert("threshold".into(), serde_json::to_value(&search)?);
                    search.c0
                }
            };
            let members = (0..=FAMILY_LADDER)
                .map(|j| degenerate_family_member(p, n, &profile, &gauge, c * 2f64.powi(j)))
                .collect::<petrocheck_core::Result<Vec<_>>>()?;
            let family: Vec<(f64, SpaceTimeFunction)> = members.iter().map(|m| (m.c, m.function().clone())).collect();
            let fam_cfg = FamilyCheckConfig { grid, ..FamilyCheckConfig::default() };
            let report = check_barrier_family(&family, &profile, p, n, &fam_cfg)?;
            certificates.extend(report.conditions.iter().cloned());
            certificates.extend(check_family_bounds(&members, &profile, &grid)?);
            extra.insert("ladder_index".into(), serde_json::to_value(&report.ladder_index)?);
            extra.insert("family_verdict".into(), serde_json::to_value(report.verdict)?);
            let hash = json::content_hash(&fam_cfg)?;
            (members.into_iter().next().expect("ladder is nonempty").barrier, hash)
        }
    };
    let sign = check_sign(&barrier.function, &barrier.domain, p, n, &grid, Sense::NonNegative, 1e-10)?;
    let axis = check_axis_limit(&barrier.function, &barrier.domain, p, n, &grid, Sense::NonNegative, 1e-10)?;
    certificates.splice(0..0, [sign, axis]);
    let pass = certificates.iter().all(|c| c.pass);
    let csv = csv_string(|buf| tables::write_certificate_summary(&certificates, buf))?;
    let failed: Vec<&str> = certificates.iter().filter(|c| !c.pass).map(|c| c.condition.as_str()).collect();
    let summary = if pass {
        format!("verify {}: PASS, {} conditions", kind.as_str(), certificates.len())
    } else {
        format!("verify {}: FAIL on {}", kind.as_str(), failed.join(", "))
    };
    let mut result = serde_json::Map::new();
    result.insert("barrier".into(), spec_json(&barrier.spec, grid_hash)?);
    result.insert("domain".into(), Value::from(barrier.domain.describe()));
    result.insert("certificates".into(), serde_json::to_value(&certificates)?);
    result.insert("pass".into(), Value::from(pass));
    result.extend(extra);
    Ok(Partial { code: if pass { exit::PASS } else { exit::CERTIFICATE }, result: Value::Object(result), csv: Some(csv), summary })
}

fn ladder_of(len: usize) -> Result<Vec<ProbeLevel>, CliError> {
    let full = default_ladder();
    if len < 2 || len > full.len() {
        return Err(CliError::Usage(format!("--ladder must be between 2 and {}", full.len())));
    }
    Ok(full[..len].to_vec())
}

/// Table verdict plus, optionally, the probe; solver failures become a warning.
fn classify_cell(config: &ExperimentConfig, p: f64, q: f64, probe: bool, ladder: &[ProbeLevel]) -> Result<Value, CliError> {
    let mut verdict = RegularityVerdict::from_table(p, q)?;
    let mut out = serde_json::Map::new();
    out.insert("p".into(), json!(p));
    out.insert("q".into(), json!(q));
    if probe {
        let params = ParamSet { p: Some(p), q: Some(q), ..config.params.clone() };
        let profile = profile_of(&params)?;
        match probe_origin(&profile, p, params.n, &default_probe(), ladder, &config.grid.solver(), ProbeThresholds::default()) {
            Ok(outcome) => {
                verdict = verdict.with_probe(&outcome);
                let ends: Vec<f64> = outcome.runs.iter().map(|r| r.endpoint).collect();
                out.insert("probe_endpoints".into(), json!(ends));
            }
            Err(e @ petrocheck_core::Error::Solver { .. }) => {
                out.insert("warning".into(), Value::from(format!("probe abandoned: {e}")));
            }
            Err(e) => return Err(e.into()),
        }
    }
    out.insert("verdict".into(), serde_json::to_value(&verdict)?);
    Ok(Value::Object(out))
}

fn verdict_name(cell: &Value) -> String {
    cell["verdict"]["theorem_verdict"].as_str().unwrap_or("error").to_string()
}

fn classify_cmd(config: &ExperimentConfig, probe: bool, ladder: usize) -> Result<Partial, CliError> {
    let p = config.params.p()?;
    let q = config.params.q()?;
    let levels = if probe { ladder_of(ladder)? } else { Vec::new() };
    let cell = classify_cell(config, p, q, probe, &levels)?;
    let mut summary = format!("classify p={p} q={q}: {}", verdict_name(&cell));
    if let Some(trend) = cell["verdict"]["numeric_trend"].as_str() {
        summary.push_str(&format!(", probe trend {trend}"));
    }
    Ok(Partial { code: exit::PASS, result: cell, csv: None, summary })
}

fn sweep(config: &ExperimentConfig, p_list: &[f64], q_list: &[f64], probe: bool, ladder: usize) -> Result<Partial, CliError> {
    if p_list.is_empty() || q_list.is_empty() {
        return Err(CliError::Usage("sweep needs nonempty --p-list and --q-list".into()));
    }
    let levels = if probe { ladder_of(ladder)? } else { Vec::new() };
    if let Some(dir) = &config.outputs.dir {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
    }
    let indices: Vec<(usize, usize)> = (0..p_list.len()).flat_map(|i| (0..q_list.len()).map(move |j| (i, j))).collect();
    let cells: Vec<Result<Value, (i32, Value)>> = indices
        .par_iter()
        .map(|&(i, j)| {
            let (p, q) = (p_list[i], q_list[j]);
            let cell = classify_cell(config, p, q, probe, &levels)
                .map_err(|e| (e.exit_code(), json!({ "p": p, "q": q, "error": e.to_string() })));
            if let Some(dir) = &config.outputs.dir {
                let body = match &cell {
                    Ok(v) | Err((_, v)) => v,
                };
                let text = json::to_pretty(body).map_err(|e| (exit::USAGE, json!({ "p": p, "q": q, "error": e.to_string() })))?;
                write_file(&dir.join(format!("cell-{i:03}-{j:03}.json")), &(text + "\n"))
                    .map_err(|e| (e.exit_code(), json!({ "p": p, "q": q, "error": e.to_string() })))?;
            }
            cell
        })
        .collect();
    let failures: Vec<i32> = cells.iter().filter_map(|c| c.as_ref().err().map(|(code, _)| *code)).collect();
    let names: Vec<Vec<String>> = (0..p_list.len())
        .map(|i| {
            (0..q_list.len())
                .map(|j| match &cells[i * q_list.len() + j] {
                    Ok(v) => verdict_name(v),
                    Err(_) => "error".to_string(),
                })
                .collect()
        })
        .collect();
    let csv = csv_string(|buf| tables::write_matrix(p_list, q_list, &names, buf))?;
    let merged: Vec<Value> = cells.into_iter().map(|c| c.unwrap_or_else(|(_, v)| v)).collect();
    let code = if failures.len() == merged.len() { failures[0] } else { exit::PASS };
    Ok(Partial {
        code,
        result: json!({ "p_list": p_list, "q_list": q_list, "cells": merged, "failures": failures.len() }),
        csv: Some(csv),
        summary: format!("sweep: {} cells, {} failed", merged.len(), failures.len()),
    })
}

fn solve(config: &ExperimentConfig, data: BoundaryChoice) -> Result<Partial, CliError> {
    let (p, n) = validated(&config.params)?;
    let profile = profile_of(&config.params)?;
    let solver = config.grid.solver();
    let field = solve_dirichlet(&profile, p, n, &BoundaryData::new(boundary_function(data)), &solver)?;
    let (lo, hi) = field.min_max();
    let csv = csv_string(|buf| tables::write_grid_field(&field, buf))?;
    let axis = field.final_axis_value();
    let t_final = field.t_nodes.last().copied().unwrap_or(f64::NAN);
    Ok(Partial {
        code: exit::PASS,
        result: json!({
            "domain": profile.describe(),
            "stats": field.stats,
            "stored_steps": field.t_nodes.len(),
            "t_final": t_final,
            "final_axis_value": axis,
            "min": lo,
            "max": hi,
            "axis_trace": field.axis_trace(),
        }),
        csv: Some(csv),
        summary: format!("solve: {} steps to t = {t_final:.3e}, u(0, t) = {axis:.6e}", field.stats.steps),
    })
}

fn scale_check(config: &ExperimentConfig, a: f64, tol: f64, data: BoundaryChoice) -> Result<Partial, CliError> {
    let (p, n) = validated(&config.params)?;
    let profile = profile_of(&config.params)?;
    let report = check_scaling_equivariance(&profile, p, n, a, &boundary_function(data), &config.grid.solver(), tol)?;
    let csv = csv_string(|buf| tables::write_certificate_summary([&report], buf))?;
    let summary = format!(
        "scale-check a={a}: {}, relative mismatch {:.3e} (tol {tol:e})",
        if report.pass { "PASS" } else { "FAIL" },
        report.worst_violation
    );
    Ok(Partial {
        code: if report.pass { exit::PASS } else { exit::CERTIFICATE },
        result: json!({ "a": a, "certificate": report }),
        csv: Some(csv),
        summary,
    })
}
