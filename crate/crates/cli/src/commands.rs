//! Subcommand implementations: argument validation, file I/O, engine
//! dispatch, and exit-code mapping.

use std::fs;
use std::path::{Path, PathBuf};

use mcf_core::json::{forms_from_value, matrix_from_value};
use mcf_core::{
    eval_bilinear, eval_mobius, jpa_expand, product_forms, run, run_bilinear,
    run_bilinear_with_partial, run_cubic_suite, run_random_bilinear_suite, run_random_mobius_suite,
    run_with_partial, sum_forms, verify_prefix, write_results_csv, BigInt, BilinearState,
    CbrtPairSource, CubicConfig, Error, IntMatrix, Mcf, McfSource, MobiusState, RandomConfig,
    Rational, RationalSource, RealSource, Result, RootSource, RunLimits, RunOutcome, StopReason,
    TrialRow, VerifyOutcome,
};

use crate::render::{self, RunShape};
use crate::{Command, Engine, Format, Mode, OpKind};

/// Run one parsed subcommand, returning the process exit code.
pub fn dispatch(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Expand {
            source,
            m,
            steps,
            budget_bits,
            format,
        } => cmd_expand(&source, m, steps, budget_bits, format),
        Command::Moebius {
            input,
            matrix,
            max_outputs,
            max_steps,
            partial_output,
            log,
            format,
        } => cmd_moebius(
            &input,
            &matrix,
            max_outputs,
            max_steps,
            partial_output,
            log,
            format,
        ),
        Command::Bilinear {
            x,
            y,
            forms,
            op,
            max_outputs,
            max_steps,
            partial_output,
            log,
            format,
        } => cmd_bilinear(
            &x,
            &y,
            forms,
            op,
            max_outputs,
            max_steps,
            partial_output,
            log,
            format,
        ),
        Command::Verify {
            against,
            input,
            matrix,
            x,
            y,
            forms,
            op,
            max_outputs,
            max_steps,
            budget_bits,
            format,
        } => cmd_verify(
            against,
            input,
            matrix,
            x,
            y,
            forms,
            op,
            max_outputs,
            max_steps,
            budget_bits,
            format,
        ),
        Command::Experiment {
            mode,
            m,
            trials,
            max_outputs,
            bound,
            seed,
            out,
            jobs,
            d_min,
            d_max,
            budget_bits,
            verify_sample,
            format,
        } => cmd_experiment(
            mode,
            m,
            trials,
            max_outputs,
            bound,
            seed,
            &out,
            jobs,
            d_min,
            d_max,
            budget_bits,
            verify_sample,
            format,
        ),
        Command::DumpForms { op, m, out, format } => cmd_dump_forms(op, m, out, format),
    }
}

/// Exit code for an error that aborted a subcommand.
pub fn exit_for_error(err: &Error) -> u8 {
    match err {
        Error::InputExhausted { .. } => 2,
        Error::PrecisionExhausted { .. } => 4,
        _ => 1,
    }
}

/// Exit code for a run that completed with the given stop reason.
fn exit_for_stop(stop: StopReason) -> u8 {
    match stop {
        StopReason::MaxOutputs => 0,
        StopReason::InputExhausted(_) => 2,
        StopReason::GuardHit => 3,
    }
}

fn exit_for_verify(report: &VerifyOutcome) -> u8 {
    if report.is_agreement() {
        0
    } else {
        5
    }
}

fn limits_for(max_outputs: usize, max_steps: Option<usize>) -> RunLimits {
    let mut limits = RunLimits::for_outputs(max_outputs);
    if let Some(cap) = max_steps {
        limits.max_steps = cap;
    }
    limits
}

fn read_json(path: &Path) -> Result<serde_json::Value> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn read_mcf(path: &Path) -> Result<Mcf> {
    Mcf::from_json(&read_json(path)?)
}

fn parse_bigint(s: &str) -> Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| Error::Invalid(format!("`{s}` is not an integer")))
}

fn parse_rational(s: &str) -> Result<Rational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_bigint(q)?;
            if q == BigInt::from(0) {
                return Err(Error::Invalid(format!("`{s}` has a zero denominator")));
            }
            Ok(Rational::new(parse_bigint(p)?, q))
        }
        None => Ok(Rational::from_integer(parse_bigint(s)?)),
    }
}

/// Build a real source from a `kind:args` spec.
fn parse_source(spec: &str, m: Option<usize>, budget_bits: u64) -> Result<Box<dyn RealSource>> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Invalid(format!("source `{spec}` is not of the form kind:args")))?;
    match kind {
        "cbrt" => {
            let d = parse_bigint(rest)?;
            match m.unwrap_or(2) {
                1 => Ok(Box::new(RootSource::new(d, 3, budget_bits)?)),
                2 => Ok(Box::new(CbrtPairSource::new(d, budget_bits)?)),
                other => Err(Error::Invalid(format!(
                    "cbrt sources have dimension 1 (the root) or 2 (root and its square), got m = {other}"
                ))),
            }
        }
        "sqrt" => {
            if m.is_some_and(|m| m != 1) {
                return Err(Error::Invalid("sqrt sources have dimension 1".into()));
            }
            Ok(Box::new(RootSource::new(
                parse_bigint(rest)?,
                2,
                budget_bits,
            )?))
        }
        "rat" => {
            let values: Vec<Rational> =
                rest.split(',').map(parse_rational).collect::<Result<_>>()?;
            if let Some(m) = m {
                if m != values.len() {
                    return Err(Error::Invalid(format!(
                        "rat source lists {} components but --m is {m}",
                        values.len()
                    )));
                }
            }
            Ok(Box::new(RationalSource::new(values)?))
        }
        other => Err(Error::Invalid(format!(
            "unknown source kind `{other}` (expected cbrt, sqrt, or rat)"
        ))),
    }
}

fn cmd_expand(
    source: &str,
    m: Option<usize>,
    steps: usize,
    budget_bits: u64,
    format: Format,
) -> Result<u8> {
    let mut src = parse_source(source, m, budget_bits)?;
    let expansion = jpa_expand(src.as_mut(), steps)?;
    print!("{}", render::expansion(&expansion, format));
    Ok(0)
}

fn write_log(path: &Path, outcome: &RunOutcome, partial: bool) -> Result<()> {
    outcome.log.write_csv(fs::File::create(path)?, partial)
}

#[allow(clippy::too_many_arguments)]
fn cmd_moebius(
    input: &Path,
    matrix: &Path,
    max_outputs: usize,
    max_steps: Option<usize>,
    partial_output: bool,
    log: Option<PathBuf>,
    format: Format,
) -> Result<u8> {
    let mcf = read_mcf(input)?;
    let c = matrix_from_value(&read_json(matrix)?)?;
    let mut state = MobiusState::new(c)?;
    let limits = limits_for(max_outputs, max_steps);
    let mut stream = mcf.stream();
    let outcome = if partial_output {
        run_with_partial(&mut state, &mut stream, limits)?
    } else {
        run(&mut state, &mut stream, limits)?
    };
    if let Some(path) = log {
        write_log(&path, &outcome, partial_output)?;
    }
    print!(
        "{}",
        render::run_outcome(state.m(), &outcome, RunShape::Mobius, format)
    );
    Ok(exit_for_stop(outcome.stop))
}

fn family_for(forms: Option<PathBuf>, op: Option<OpKind>, m: usize) -> Result<Vec<IntMatrix>> {
    match (forms, op) {
        (Some(path), None) => forms_from_value(&read_json(&path)?),
        (None, Some(OpKind::Sum)) => Ok(sum_forms(m)),
        (None, Some(OpKind::Product)) => Ok(product_forms(m)),
        _ => Err(Error::Invalid(
            "bilinear runs need exactly one of --forms or --op".into(),
        )),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_bilinear(
    x: &Path,
    y: &Path,
    forms: Option<PathBuf>,
    op: Option<OpKind>,
    max_outputs: usize,
    max_steps: Option<usize>,
    partial_output: bool,
    log: Option<PathBuf>,
    format: Format,
) -> Result<u8> {
    let x = read_mcf(x)?;
    let y = read_mcf(y)?;
    let family = family_for(forms, op, x.m())?;
    let mut state = BilinearState::new(family)?;
    let limits = limits_for(max_outputs, max_steps);
    let mut xs = x.stream();
    let mut ys = y.stream();
    let outcome = if partial_output {
        run_bilinear_with_partial(&mut state, &mut xs, &mut ys, limits)?
    } else {
        run_bilinear(&mut state, &mut xs, &mut ys, limits)?
    };
    if let Some(path) = log {
        write_log(&path, &outcome, partial_output)?;
    }
    print!(
        "{}",
        render::run_outcome(state.m(), &outcome, RunShape::Bilinear, format)
    );
    Ok(exit_for_stop(outcome.stop))
}

fn require<T>(value: Option<T>, flag: &str, engine: &str) -> Result<T> {
    value.ok_or_else(|| Error::Invalid(format!("verify --against {engine} requires {flag}")))
}

fn reject<T>(value: &Option<T>, flag: &str, engine: &str) -> Result<()> {
    if value.is_some() {
        return Err(Error::Invalid(format!(
            "verify --against {engine} does not take {flag}"
        )));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    against: Engine,
    input: Option<PathBuf>,
    matrix: Option<PathBuf>,
    x: Option<PathBuf>,
    y: Option<PathBuf>,
    forms: Option<PathBuf>,
    op: Option<OpKind>,
    max_outputs: usize,
    max_steps: Option<usize>,
    budget_bits: u64,
    format: Format,
) -> Result<u8> {
    let limits = limits_for(max_outputs, max_steps);
    let report = match against {
        Engine::Moebius => {
            reject(&x, "--x", "moebius")?;
            reject(&y, "--y", "moebius")?;
            reject(&forms, "--forms", "moebius")?;
            reject(&op, "--op", "moebius")?;
            let mcf = read_mcf(&require(input, "--input", "moebius")?)?;
            let c = matrix_from_value(&read_json(&require(matrix, "--matrix", "moebius")?)?)?;
            let mut state = MobiusState::new(c.clone())?;
            let mut stream = mcf.stream();
            let outcome = run(&mut state, &mut stream, limits)?;
            let mut oracle = eval_mobius(Box::new(McfSource::new(mcf.clone(), budget_bits)?), c)?;
            verify_prefix(&outcome.outputs, &mut oracle, outcome.outputs.len())?
        }
        Engine::Bilinear => {
            reject(&input, "--input", "bilinear")?;
            reject(&matrix, "--matrix", "bilinear")?;
            let x = read_mcf(&require(x, "--x", "bilinear")?)?;
            let y = read_mcf(&require(y, "--y", "bilinear")?)?;
            let family = family_for(forms, op, x.m())?;
            let mut state = BilinearState::new(family.clone())?;
            let mut xs = x.stream();
            let mut ys = y.stream();
            let outcome = run_bilinear(&mut state, &mut xs, &mut ys, limits)?;
            let mut oracle = eval_bilinear(
                Box::new(McfSource::new(x.clone(), budget_bits)?),
                Box::new(McfSource::new(y.clone(), budget_bits)?),
                family,
            )?;
            verify_prefix(&outcome.outputs, &mut oracle, outcome.outputs.len())?
        }
    };
    print!("{}", render::verify(&report, format));
    Ok(exit_for_verify(&report))
}

#[allow(clippy::too_many_arguments)]
fn cmd_experiment(
    mode: Mode,
    m: usize,
    trials: u64,
    max_outputs: usize,
    bound: u64,
    seed: u64,
    out: &Path,
    jobs: usize,
    d_min: u64,
    d_max: u64,
    budget_bits: u64,
    verify_sample: u64,
    format: Format,
) -> Result<u8> {
    let (rows, notes, verified): (Vec<TrialRow>, Vec<String>, usize) = match mode {
        Mode::Cubic => {
            let report = run_cubic_suite(&CubicConfig {
                d_min,
                d_max,
                max_outputs,
                budget_bits,
                verify_sample,
                jobs,
            })?;
            (report.rows, report.notes, report.verified)
        }
        Mode::RandomMcf => {
            let rows = run_random_mobius_suite(&RandomConfig {
                m,
                trials,
                bound,
                max_outputs,
                seed,
                jobs,
            })?;
            (rows, vec![], 0)
        }
        Mode::RandomBilinear => {
            let rows = run_random_bilinear_suite(&RandomConfig {
                m,
                trials,
                bound,
                max_outputs,
                seed,
                jobs,
            })?;
            (rows, vec![], 0)
        }
    };
    write_results_csv(&rows, fs::File::create(out)?)?;
    print!(
        "{}",
        render::experiment_summary(mode, &rows, &notes, verified, out, format)
    );
    Ok(0)
}

fn cmd_dump_forms(op: OpKind, m: usize, out: Option<PathBuf>, format: Format) -> Result<u8> {
    let family = match op {
        OpKind::Sum => sum_forms(m),
        OpKind::Product => product_forms(m),
    };
    let rendered = render::forms(&family, format);
    match out {
        Some(path) => fs::write(path, rendered)?,
        None => print!("{rendered}"),
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mcf_core::{McfStep, StreamSide};

    #[test]
    fn stop_reasons_map_to_documented_exit_codes() {
        assert_eq!(exit_for_stop(StopReason::MaxOutputs), 0);
        assert_eq!(exit_for_stop(StopReason::InputExhausted(StreamSide::X)), 2);
        assert_eq!(exit_for_stop(StopReason::GuardHit), 3);
    }

    #[test]
    fn errors_map_to_documented_exit_codes() {
        assert_eq!(
            exit_for_error(&Error::InputExhausted {
                side: StreamSide::Y
            }),
            2
        );
        assert_eq!(
            exit_for_error(&Error::PrecisionExhausted {
                spent: 9,
                budget: 8
            }),
            4
        );
        assert_eq!(exit_for_error(&Error::Invalid("bad".into())), 1);
    }

    #[test]
    fn oracle_disagreement_maps_to_exit_5() {
        let agree = VerifyOutcome::Agreement { checked: 4 };
        let differ = VerifyOutcome::Mismatch {
            index: 1,
            expected: McfStep::from_i64(&[2, 1]),
            actual: McfStep::from_i64(&[2, 0]),
        };
        let shorter = VerifyOutcome::OracleShorter {
            oracle_len: 2,
            engine_len: 5,
        };
        assert_eq!(exit_for_verify(&agree), 0);
        assert_eq!(exit_for_verify(&differ), 5);
        assert_eq!(exit_for_verify(&shorter), 5);
    }

    #[test]
    fn source_specs_parse_and_reject() {
        assert_eq!(parse_source("cbrt:2", None, 1 << 10).unwrap().dim(), 2);
        assert_eq!(parse_source("cbrt:5", Some(1), 1 << 10).unwrap().dim(), 1);
        assert_eq!(parse_source("sqrt:2", None, 1 << 10).unwrap().dim(), 1);
        assert_eq!(parse_source("rat:7/5,3", None, 1 << 10).unwrap().dim(), 2);
        assert!(parse_source("cbrt:2", Some(3), 1 << 10).is_err());
        assert!(parse_source("rat:1/0", None, 1 << 10).is_err());
        assert!(parse_source("tent:3", None, 1 << 10).is_err());
        assert!(parse_source("nocolon", None, 1 << 10).is_err());
    }
}
