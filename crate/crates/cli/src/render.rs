//! Text and JSON renderings of command results.
//!
//! Both formats encode the same data: the JSON object carries exactly the
//! fields the text form prints, so tests can parse either and compare.
//! Quotient tuples print one per line as `n: (a1,…,am)` with `n` counting
//! from 0; negative quotients keep their sign.

use std::collections::BTreeSet;
use std::path::Path;

use mcf_core::json::{bigint_vec_to_value, forms_to_value};
use mcf_core::{
    slope_stats, Expansion, IntMatrix, Mcf, McfStep, QuotientStream, Rational, RunOutcome,
    TrialRow, VerifyOutcome,
};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::{Format, Mode};

/// Which engine produced a [`RunOutcome`]; decides how inputs are reported.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum RunShape {
    Mobius,
    Bilinear,
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("rendering JSON cannot fail");
    s.push('\n');
    s
}

fn quotient_lines(steps: &[McfStep]) -> String {
    let mut out = String::new();
    for (n, step) in steps.iter().enumerate() {
        out.push_str(&format!("{n}: {step}\n"));
    }
    out
}

fn steps_value(steps: &[McfStep]) -> Value {
    Value::Array(steps.iter().map(|s| bigint_vec_to_value(&s.0)).collect())
}

/// All steps of a finite expansion, in order.
fn collect_finite(mcf: &Mcf) -> Vec<McfStep> {
    let mut stream = mcf.stream();
    let mut steps = Vec::new();
    while let Ok(Some(step)) = stream.next_step() {
        steps.push(step);
    }
    steps
}

/// Render a Jacobi–Perron expansion. The JSON form is a valid `--input`
/// document (with an extra `terminated` flag, which readers ignore).
pub fn expansion(exp: &Expansion, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = quotient_lines(&collect_finite(&exp.mcf));
            out.push_str(&format!("terminated: {}\n", exp.terminated));
            out
        }
        Format::Json => {
            let mut obj = match exp.mcf.to_json() {
                Value::Object(obj) => obj,
                _ => unreachable!("expansions encode as objects"),
            };
            obj.insert("terminated".into(), Value::Bool(exp.terminated));
            pretty(&Value::Object(obj))
        }
    }
}

/// Render a transducer run: output tuples, stop reason, and step counts.
pub fn run_outcome(m: usize, outcome: &RunOutcome, shape: RunShape, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = quotient_lines(&outcome.outputs);
            out.push_str(&format!("stop: {}\n", outcome.stop));
            match shape {
                RunShape::Mobius => out.push_str(&format!("inputs: {}\n", outcome.inputs_total())),
                RunShape::Bilinear => {
                    out.push_str(&format!("inputs_x: {}\n", outcome.inputs_x));
                    out.push_str(&format!("inputs_y: {}\n", outcome.inputs_y));
                }
            }
            out.push_str(&format!("steps: {}\n", outcome.steps));
            out.push_str(&format!("partial_steps: {}\n", outcome.partial_steps));
            out.push_str(&format!("max_entry_bits: {}\n", outcome.max_entry_bits));
            out
        }
        Format::Json => {
            let mut obj = json!({
                "m": m,
                "outputs": steps_value(&outcome.outputs),
                "stop": outcome.stop.to_string(),
                "steps": outcome.steps,
                "partial_steps": outcome.partial_steps,
                "max_entry_bits": outcome.max_entry_bits,
            });
            match shape {
                RunShape::Mobius => obj["inputs"] = outcome.inputs_total().into(),
                RunShape::Bilinear => {
                    obj["inputs_x"] = outcome.inputs_x.into();
                    obj["inputs_y"] = outcome.inputs_y.into();
                }
            }
            pretty(&obj)
        }
    }
}

/// Render an oracle comparison report.
pub fn verify(report: &VerifyOutcome, format: Format) -> String {
    match format {
        Format::Text => match report {
            VerifyOutcome::Agreement { checked } => {
                format!("agreement: {checked} tuples checked\n")
            }
            VerifyOutcome::Mismatch { index, expected, actual } => {
                format!("mismatch at index {index}: oracle {expected}, engine {actual}\n")
            }
            VerifyOutcome::OracleShorter { oracle_len, engine_len } => format!(
                "oracle expansion terminates after {oracle_len} tuples; engine emitted {engine_len}\n"
            ),
        },
        Format::Json => pretty(&match report {
            VerifyOutcome::Agreement { checked } => {
                json!({ "outcome": "agreement", "checked": checked })
            }
            VerifyOutcome::Mismatch { index, expected, actual } => json!({
                "outcome": "mismatch",
                "index": index,
                "expected": bigint_vec_to_value(&expected.0),
                "actual": bigint_vec_to_value(&actual.0),
            }),
            VerifyOutcome::OracleShorter { oracle_len, engine_len } => json!({
                "outcome": "oracle-shorter",
                "oracle_len": oracle_len,
                "engine_len": engine_len,
            }),
        }),
    }
}

/// Render a bilinear coefficient family.
pub fn forms(family: &[IntMatrix], format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = String::new();
            for (i, c) in family.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                out.push_str(&format!("L({}):\n", i + 1));
                for r in 0..c.rows() {
                    let row: Vec<String> = (0..c.rows()).map(|j| c.get(r, j).to_string()).collect();
                    out.push_str(&format!("[{}]\n", row.join(" ")));
                }
            }
            out
        }
        Format::Json => pretty(&forms_to_value(family)),
    }
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Cubic => "cubic",
        Mode::RandomMcf => "random-mcf",
        Mode::RandomBilinear => "random-bilinear",
    }
}

fn slope_display(r: &Rational) -> f64 {
    let x = r.to_f64().unwrap_or(f64::NAN);
    (x * 10_000.0).round() / 10_000.0
}

/// Summarize a results table after it has been written to `out`.
pub fn experiment_summary(
    mode: Mode,
    rows: &[TrialRow],
    notes: &[String],
    verified: usize,
    out: &Path,
    format: Format,
) -> String {
    let trials: BTreeSet<u64> = rows.iter().map(|r| r.trial_id).collect();
    let stats = slope_stats(rows);
    let mean = slope_display(&stats.mean);
    let max = slope_display(&stats.max);
    match format {
        Format::Text => {
            let mut s = format!(
                "mode: {}\ntrials: {}\nrows: {}\nverified: {}\nmean_slope: {:.4}\nmax_slope: {:.4}\nwrote: {}\n",
                mode_name(mode),
                trials.len(),
                rows.len(),
                verified,
                mean,
                max,
                out.display()
            );
            for note in notes {
                s.push_str(&format!("note: {note}\n"));
            }
            s
        }
        Format::Json => pretty(&json!({
            "mode": mode_name(mode),
            "trials": trials.len(),
            "rows": rows.len(),
            "verified": verified,
            "mean_slope": mean,
            "max_slope": max,
            "wrote": out.display().to_string(),
            "notes": notes,
        })),
    }
}
