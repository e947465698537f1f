//! Partial output: committing certified digits before the full guard fires.
//!
//! Between full outputs the state's entries can grow without bound while the
//! output floors stay undecided. The partial step shears off the part of the
//! output that is *already* certain: with the denominator row (or form)
//! normalized to a strict positive sign, the quantity
//!
//! ```text
//! b̃^(i) = min_j ⌊c^(i)_j / c^(m+1)_j⌋
//! ```
//!
//! is a certified lower bound of the eventual output component `i` for every
//! continuation of the input, so `C^(i) ← C^(i) − b̃^(i)·C^(m+1)` preserves
//! the represented value modulo the bookkeeping `pending += b̃`. When a full
//! output `b` later fires, the emitted tuple is `pending + b`. Shearing with
//! `b̃^(i) > 0` can only shrink the entries of row `i` (they land in
//! `[0, c^(i)_j)`), which is the entire point: state growth is tamed while
//! outputs are stalled.
//!
//! A shear moves every floor minimum to zero, so a second immediate shear is
//! always the zero tuple — the drivers fall through to an absorb instead,
//! and at most one partial step can separate two non-partial events.

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};

use crate::bilinear::BilinearState;
use crate::error::Result;
use crate::exactnum::{floor_div, strict_sign};
use crate::log::RunOutcome;
use crate::matrix::IntMatrix;
use crate::mcf::{McfStep, QuotientStream};
use crate::mobius::{MobiusState, RunLimits};

/// Try one Möbius partial step: if the (sign-normalized) state admits a
/// nonzero certified shear, apply it and return the sheared tuple.
///
/// Returns `None` — leaving the state untouched — when the denominator row
/// is not sign-definite or every component's bound is zero.
pub fn mobius_partial_step(state: &mut MobiusState) -> Option<McfStep> {
    let m = state.m();
    let c = state.matrix();
    let sign = strict_sign(c.row(m).iter())?;
    // Normalize to a positive denominator row; negating the whole matrix is
    // the same projective map.
    let mut cc = c.clone();
    if sign == Sign::Minus {
        cc.negate();
    }
    let mut shear = Vec::with_capacity(m);
    for i in 0..m {
        let mut min: Option<BigInt> = None;
        for j in 0..=m {
            let f = floor_div(cc.get(i, j), cc.get(m, j));
            if min.as_ref().map_or(true, |v| &f < v) {
                min = Some(f);
            }
        }
        shear.push(min.expect("m+1 columns"));
    }
    if shear.iter().all(Zero::is_zero) {
        return None;
    }
    let mut out = IntMatrix::zero(m + 1, m + 1);
    for (i, shear_i) in shear.iter().enumerate() {
        let before: BigInt = cc.row(i).iter().map(Signed::abs).max().unwrap();
        for j in 0..=m {
            out.set(i, j, cc.get(i, j) - shear_i * cc.get(m, j));
        }
        if shear_i.is_positive() {
            let after: BigInt = out.row(i).iter().map(Signed::abs).max().unwrap();
            debug_assert!(after <= before, "positive shear must not grow row {i}");
        }
    }
    for j in 0..=m {
        out.set(m, j, cc.get(m, j).clone());
    }
    state.replace_matrix(out);
    Some(McfStep(shear))
}

/// Try one bilinear partial step: the entrywise analogue of
/// [`mobius_partial_step`] over the form family.
pub fn bilinear_partial_step(state: &mut BilinearState) -> Option<McfStep> {
    let m = state.m();
    let den = &state.forms()[m];
    let sign = strict_sign(den.entries().iter())?;
    let mut family: Vec<IntMatrix> = state.forms().to_vec();
    if sign == Sign::Minus {
        for c in &mut family {
            c.negate();
        }
    }
    let den = family[m].clone();
    let mut shear = Vec::with_capacity(m);
    for num in &family[..m] {
        let mut min: Option<BigInt> = None;
        for (a, b) in num.entries().iter().zip(den.entries()) {
            let f = floor_div(a, b);
            if min.as_ref().map_or(true, |v| &f < v) {
                min = Some(f);
            }
        }
        shear.push(min.expect("forms are nonempty"));
    }
    if shear.iter().all(Zero::is_zero) {
        return None;
    }
    for (i, shear_i) in shear.iter().enumerate() {
        if shear_i.is_positive() {
            let before: BigInt = family[i].entries().iter().map(Signed::abs).max().unwrap();
            family[i] = family[i].sub_scaled(shear_i, &den);
            let after: BigInt = family[i].entries().iter().map(Signed::abs).max().unwrap();
            debug_assert!(after <= before, "positive shear must not grow form {i}");
        } else {
            family[i] = family[i].sub_scaled(shear_i, &den);
        }
    }
    state.replace_forms(family);
    Some(McfStep(shear))
}

/// [`crate::mobius::run`] with partial-output steps enabled: between full
/// outputs, certified digits are committed eagerly and folded into the next
/// full output tuple. Emits the same output sequence as the plain run.
pub fn run_with_partial(
    state: &mut MobiusState,
    stream: &mut dyn QuotientStream,
    limits: RunLimits,
) -> Result<RunOutcome> {
    crate::mobius::run_inner(state, stream, limits, true)
}

/// [`crate::bilinear::run_bilinear`] with partial-output steps enabled.
pub fn run_bilinear_with_partial(
    state: &mut BilinearState,
    xs: &mut dyn QuotientStream,
    ys: &mut dyn QuotientStream,
    limits: RunLimits,
) -> Result<RunOutcome> {
    crate::bilinear::run_bilinear_inner(state, xs, ys, limits, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilinear::sum_forms;
    use crate::log::{StepKind, StopReason};
    use crate::mcf::Mcf;
    use crate::mobius::run;

    fn step(v: &[i64]) -> McfStep {
        McfStep::from_i64(v)
    }

    fn cbrt2_mcf() -> Mcf {
        Mcf::new(2, vec![step(&[1, 1])], vec![step(&[1, 0]), step(&[2, 1])]).unwrap()
    }

    fn kinds_and_tuples(outcome: &RunOutcome) -> Vec<(StepKind, Vec<i64>)> {
        outcome
            .log
            .records()
            .iter()
            .map(|r| {
                (
                    r.kind,
                    r.tuple.iter().map(|v| i64::try_from(v).unwrap()).collect(),
                )
            })
            .collect()
    }

    #[test]
    fn worked_partial_trace_from_start() {
        // diag(3, −2, 6) on (∛2, ∛4) in partial mode, two full outputs.
        let c = IntMatrix::from_rows(&[vec![3, 0, 0], vec![0, -2, 0], vec![0, 0, 6]]);
        let mut state = MobiusState::new(c).unwrap();
        let mcf = cbrt2_mcf();
        let mut stream = mcf.stream();
        let outcome = run_with_partial(
            &mut state,
            &mut stream,
            RunLimits {
                max_outputs: 2,
                max_steps: 100,
            },
        )
        .unwrap();
        assert_eq!(
            kinds_and_tuples(&outcome),
            vec![
                (StepKind::Input, vec![1, 1]),
                (StepKind::Input, vec![1, 0]),
                (StepKind::Input, vec![2, 1]),
                (StepKind::Output, vec![0, -1]),
                (StepKind::Partial, vec![1, 0]),
                (StepKind::Input, vec![1, 0]),
                (StepKind::Partial, vec![1, 1]),
                (StepKind::Input, vec![2, 1]),
                (StepKind::Output, vec![2, 1]),
            ]
        );
        // Steps = inputs + outputs + partials.
        assert_eq!(outcome.steps, 9);
        assert_eq!(outcome.inputs_x, 5);
        assert_eq!(outcome.partial_steps, 2);
        // The partial run lands on exactly the plain run's state and outputs.
        assert_eq!(
            state.matrix(),
            &IntMatrix::from_rows(&[vec![34, 12, 8], vec![4, 0, 2], vec![11, 3, 4]])
        );
        let c = IntMatrix::from_rows(&[vec![3, 0, 0], vec![0, -2, 0], vec![0, 0, 6]]);
        let mut plain_state = MobiusState::new(c).unwrap();
        let mcf = cbrt2_mcf();
        let mut stream = mcf.stream();
        let plain = run(
            &mut plain_state,
            &mut stream,
            RunLimits {
                max_outputs: 2,
                max_steps: 100,
            },
        )
        .unwrap();
        assert_eq!(outcome.outputs, plain.outputs);
        assert_eq!(state.matrix(), plain_state.matrix());
    }

    #[test]
    fn no_two_consecutive_partial_steps() {
        let c = IntMatrix::from_rows(&[vec![3, 0, 0], vec![0, -2, 0], vec![0, 0, 6]]);
        let mut state = MobiusState::new(c).unwrap();
        let mcf = cbrt2_mcf();
        let mut stream = mcf.stream();
        let outcome = run_with_partial(
            &mut state,
            &mut stream,
            RunLimits {
                max_outputs: 10,
                max_steps: 400,
            },
        )
        .unwrap();
        let records = outcome.log.records();
        for pair in records.windows(2) {
            assert!(
                !(pair[0].kind == StepKind::Partial && pair[1].kind == StepKind::Partial),
                "consecutive partial steps at index {}",
                pair[1].index
            );
        }
        assert!(
            outcome.partial_steps > 0,
            "trace should exercise partial steps"
        );
    }

    #[test]
    fn partial_step_is_none_when_not_applicable() {
        // Fresh diagonal state: last row (0, 0, 6) is not sign-definite.
        let c = IntMatrix::from_rows(&[vec![3, 0, 0], vec![0, -2, 0], vec![0, 0, 6]]);
        let mut state = MobiusState::new(c.clone()).unwrap();
        assert!(mobius_partial_step(&mut state).is_none());
        assert_eq!(state.matrix(), &c);
    }

    #[test]
    fn negative_denominator_row_is_normalized() {
        // Row-negated variant of a shearable state: the step must negate and
        // then shear, leaving a positive last row.
        let c = IntMatrix::from_rows(&[vec![-18, -6, -6], vec![-12, -3, -3], vec![-8, -2, -4]]);
        let mut state = MobiusState::new_allow_singular(c).unwrap();
        let bt = mobius_partial_step(&mut state).unwrap();
        assert_eq!(
            bt.iter()
                .map(|v| i64::try_from(v).unwrap())
                .collect::<Vec<_>>(),
            vec![1, 0]
        );
        assert!(state.matrix().row(2).iter().all(|v| v.is_positive()));
    }

    #[test]
    fn mobius_partial_equivalence_m1() {
        let c = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]);
        let mcf = Mcf::new(1, vec![step(&[1])], vec![step(&[2])]).unwrap();
        let limits = RunLimits {
            max_outputs: 12,
            max_steps: 400,
        };

        let mut plain_state = MobiusState::new(c.clone()).unwrap();
        let mut stream = mcf.stream();
        let plain = run(&mut plain_state, &mut stream, limits).unwrap();

        let mut partial_state = MobiusState::new(c).unwrap();
        let mut stream = mcf.stream();
        let partial = run_with_partial(&mut partial_state, &mut stream, limits).unwrap();

        assert_eq!(plain.outputs, partial.outputs);
        assert_eq!(plain.stop, StopReason::MaxOutputs);
        assert_eq!(partial.stop, StopReason::MaxOutputs);
    }

    #[test]
    fn bilinear_partial_equivalence_m1() {
        let mcf = Mcf::new(1, vec![step(&[1])], vec![step(&[2])]).unwrap();
        let limits = RunLimits {
            max_outputs: 8,
            max_steps: 400,
        };

        let mut plain_state = BilinearState::new(sum_forms(1)).unwrap();
        let mut xs = mcf.stream();
        let mut ys = mcf.stream();
        let plain =
            crate::bilinear::run_bilinear(&mut plain_state, &mut xs, &mut ys, limits).unwrap();

        let mut partial_state = BilinearState::new(sum_forms(1)).unwrap();
        let mut xs = mcf.stream();
        let mut ys = mcf.stream();
        let partial =
            run_bilinear_with_partial(&mut partial_state, &mut xs, &mut ys, limits).unwrap();

        assert_eq!(plain.outputs, partial.outputs);
    }

    #[test]
    fn pending_is_folded_into_next_full_output() {
        // In the worked trace the second full output (2, 1) includes the
        // pending shears (1,0) + (1,1): the raw guard residue was (0, 0).
        let c = IntMatrix::from_rows(&[vec![3, 0, 0], vec![0, -2, 0], vec![0, 0, 6]]);
        let mut state = MobiusState::new(c).unwrap();
        let mcf = cbrt2_mcf();
        let mut stream = mcf.stream();
        let outcome = run_with_partial(
            &mut state,
            &mut stream,
            RunLimits {
                max_outputs: 2,
                max_steps: 100,
            },
        )
        .unwrap();
        let outs = &outcome.outputs;
        assert_eq!(outs[1], step(&[2, 1]));
        let partial_sum: Vec<i64> = outcome
            .log
            .records()
            .iter()
            .filter(|r| r.kind == StepKind::Partial)
            .fold(vec![0i64, 0], |acc, r| {
                acc.iter()
                    .zip(r.tuple.iter())
                    .map(|(a, v)| a + i64::try_from(v).unwrap())
                    .collect()
            });
        assert_eq!(partial_sum, vec![2, 1]); // the full output was entirely pre-committed
    }
}
