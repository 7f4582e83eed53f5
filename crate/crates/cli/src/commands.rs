use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use softdeco::decoherence::{DecoherenceReport, Variant};
use softdeco::experiment::{
    gamma_dressed_2slit, gamma_hard_2slit, rayleigh_rate, slit_acceleration, surface_coupling,
    vdw_potential, VdwRegime,
};
use softdeco::validation::{check_ids, run_check, run_suite, CheckOutcome, Contraction, SuiteOptions};
use softdeco::whichpath::{summarize, WhichPathSummary};

use crate::config::{RunConfig, SlitConfig, SweepConfig};
use crate::error::CliError;

pub const CSV_HEADER: [&str; 13] = [
    "sweep_param",
    "value",
    "gamma_full",
    "gamma_dressed",
    "gamma_sub",
    "gamma_hard",
    "closed_dressed",
    "closed_sub",
    "closed_hard",
    "D",
    "V_max",
    "err_est",
    "status",
];

/// Twelve significant digits in scientific notation.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.11e}")
}

/// The functional the which-path summary is built from: the dressed one
/// when available, otherwise the first requested.
fn whichpath_source(report: &DecoherenceReport) -> Option<(Variant, f64)> {
    [Variant::Dressed, Variant::Full, Variant::Sub, Variant::Hard]
        .into_iter()
        .find_map(|v| report.get(v).map(|e| (v, e.value)))
}

pub struct GammaOutcome {
    pub document: Value,
    pub converged: bool,
}

pub fn gamma(config: &RunConfig) -> Result<GammaOutcome, CliError> {
    let g = config.interferometer()?;
    let report = DecoherenceReport::compute(&g, &config.cutoffs, &config.quadrature, &config.variants)?;
    let closed = &report.closed;

    let mut deviations = Map::new();
    for v in Variant::ALL {
        let closed_value = match v {
            Variant::Full => closed.gamma_full,
            Variant::Dressed => Some(closed.gamma_dressed),
            Variant::Sub => Some(closed.gamma_sub),
            Variant::Hard => Some(closed.gamma_hard),
        };
        if let (Some(est), Some(c)) = (report.get(v), closed_value) {
            let dev = if c == 0.0 { est.value.abs() } else { est.value / c - 1.0 };
            deviations.insert(v.name().into(), json!(dev));
        }
    }

    let hard = report.gamma_hard.map(|h| {
        json!({
            "over_2e2_form": h.value / closed.hard_asymptote,
            "over_e2_form": h.value / closed.hard_asymptote_alt,
        })
    });

    let whichpath = match whichpath_source(&report) {
        Some((variant, value)) => {
            let s = summarize(value)?;
            let mut v = serde_json::to_value(s).expect("summary serializes");
            v["source"] = json!(variant.name());
            v
        }
        None => Value::Null,
    };

    let converged = report.converged();
    let document = json!({
        "config": config,
        "report": report,
        "relative_deviation_from_closed_form": deviations,
        "hard_normalization": hard,
        "whichpath": whichpath,
        "converged": converged,
    });
    Ok(GammaOutcome { document, converged })
}

pub fn write_output(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io("stdout".into(), e))
        }
    }
}

pub struct SweepOutcome {
    pub csv: String,
    pub all_ok: bool,
}

fn sweep_row(config: &RunConfig, sweep: &SweepConfig, value: f64) -> (Vec<String>, bool) {
    let mut cells = vec![sweep.parameter.name().to_string(), fmt_num(value)];
    let point = config.with_parameter(sweep.parameter, value);
    let computed = point
        .validate()
        .map_err(|(key, msg)| format!("invalid {key}: {msg}"))
        .and_then(|_| {
            let g = point.interferometer().map_err(|e| e.to_string())?;
            DecoherenceReport::compute(&g, &point.cutoffs, &point.quadrature, &point.variants)
                .map_err(|e| e.to_string())
        })
        .and_then(|report| {
            let s = whichpath_source(&report)
                .map(|(_, v)| summarize(v))
                .transpose()
                .map_err(|e| e.to_string())?;
            Ok((report, s))
        });

    let (report, summary): (DecoherenceReport, Option<WhichPathSummary>) = match computed {
        Ok(pair) => pair,
        Err(msg) => {
            cells.extend(std::iter::repeat(String::new()).take(10));
            cells.push(format!("error: {}", sanitize(&msg)));
            return (cells, false);
        }
    };

    let mut numbers: Vec<Option<f64>> = Variant::ALL
        .iter()
        .map(|v| report.get(*v).map(|e| e.value))
        .collect();
    numbers.extend([
        Some(report.closed.gamma_dressed),
        Some(report.closed.gamma_sub),
        Some(report.closed.gamma_hard),
        summary.map(|s| s.distinguishability),
        summary.map(|s| s.visibility_bound),
        Some(report.max_error()),
    ]);
    if numbers.iter().flatten().any(|x| !x.is_finite()) {
        cells.extend(std::iter::repeat(String::new()).take(10));
        cells.push("non_finite".into());
        return (cells, false);
    }
    cells.extend(numbers.iter().map(|x| x.map(fmt_num).unwrap_or_default()));
    let ok = report.converged();
    cells.push(if ok { "ok".into() } else { "not_converged".into() });
    (cells, ok)
}

/// CSV cells must not contain separators or line breaks.
fn sanitize(msg: &str) -> String {
    msg.replace([',', '\n', '\r', '"'], ";")
}

pub fn sweep(config: &RunConfig) -> Result<SweepOutcome, CliError> {
    let sweep = config.sweep.ok_or_else(|| CliError::Config {
        key: "sweep".into(),
        line: None,
        message: "the sweep command needs a `sweep` block".into(),
    })?;
    let rows: Vec<(Vec<String>, bool)> = sweep
        .values()
        .par_iter()
        .map(|&v| sweep_row(config, &sweep, v))
        .collect();
    let mut csv = CSV_HEADER.join(",");
    csv.push('\n');
    let mut all_ok = true;
    for (cells, ok) in rows {
        all_ok &= ok;
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }
    Ok(SweepOutcome { csv, all_ok })
}

pub fn check(
    seed: Option<u64>,
    config: Option<&RunConfig>,
    only: &[String],
    metric_fault: bool,
) -> Result<Vec<CheckOutcome>, CliError> {
    let mut options = SuiteOptions::default();
    if let Some(c) = config {
        options.quadrature = c.quadrature;
        if let Some(s) = c.seed {
            options.seed = s;
        }
    }
    if let Some(s) = seed {
        options.seed = s;
    }
    if metric_fault {
        options.contraction = Contraction::EuclideanFault;
    }
    if only.is_empty() {
        return Ok(run_suite(&options));
    }
    only.iter()
        .map(|id| {
            run_check(id, &options).ok_or_else(|| CliError::Config {
                key: "--only".into(),
                line: None,
                message: format!("unknown check `{id}`; known: {}", check_ids().join(", ")),
            })
        })
        .collect()
}

pub fn estimate_slit(config: &SlitConfig) -> Result<Value, CliError> {
    let s = &config.slit;
    let mut doc = json!({
        "slit": s,
        "ratio_l_over_a": s.ratio(),
        "gamma_dressed": gamma_dressed_2slit(s),
        "gamma_hard": gamma_hard_2slit(s),
    });
    if let Some(acc) = &config.acceleration {
        doc["acceleration"] = json!({
            "z_f": acc.z_f,
            "ell_o": acc.ell_o,
            "path": acc.path,
            "value": slit_acceleration(s, acc.z_f, acc.path, acc.ell_o)?,
        });
    }
    if let Some(m) = &config.mirror {
        let q_mag = config.q_mag.unwrap_or(m.q);
        doc["mirror"] = json!({
            "parameters": m,
            "vdw_far": vdw_potential(m, VdwRegime::Far),
            "vdw_near": vdw_potential(m, VdwRegime::Near),
            "surface_coupling": surface_coupling(m)?,
            "rayleigh_rate": rayleigh_rate(m, q_mag)?,
            "q_mag": q_mag,
        });
    }
    Ok(doc)
}
