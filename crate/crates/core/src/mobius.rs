//! Möbius transduction of multidimensional continued fractions.
//!
//! The state is one integer matrix `C` of size `(m+1)×(m+1)` representing the
//! linear fractional map `z ↦ C·z` on homogeneous coordinates. Feeding the
//! expansion of `x` through the machine computes the expansion of `C(x)`
//! digit by digit, entirely in integer arithmetic:
//!
//! * **absorb** `a`: `C ← C·S(a)` — the input tuple narrows the domain; the
//!   new state represents the same value as a function of the next complete
//!   quotient `x' = (x − …)` of the input.
//! * **emit** `b`: `C ← T(b)·C` — peels the tuple `b` off the front of the
//!   output expansion; the state then represents the next complete quotient
//!   of the *output*.
//!
//! Both step matrices are unimodular, so `|det C|` is invariant — the machine
//! never loses information. An output may be emitted once the value's tuple
//! of floors is the same over the whole remaining input domain. The input
//! domain of a complete quotient is `x^(1) ≥ … ` — a cone spanned by the
//! `m+1` columns of `C` after at least one absorb — so the guard checks
//! column ratios:
//!
//! * `m ≥ 2`: every entry of the last row of `C` has one strict sign, and
//!   for each component `i` the floors `⌊c_{i,j}/c_{m+1,j}⌋` agree over all
//!   `m+1` columns `j`; the common floors are the output tuple.
//! * `m = 1`: the classical two-corner test on `x ∈ [1, ∞)`: the vectors
//!   `(c_{1,1}, c_{2,1})` (at `x = ∞`) and `(c_{1,1}+c_{1,2}, c_{2,1}+c_{2,2})`
//!   (at `x = 1`) must have same-sign denominators and equal floors.
//!
//! The [`run`] driver alternates: emit when the guard allows, absorb
//! otherwise (the first tuple is always absorbed), until an output or step
//! limit is reached or the input runs dry.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result, StreamSide};
use crate::exactnum::{floor_div, same_strict_sign};
use crate::log::{RunOutcome, StepKind, StepLog, StepRecord, StopReason};
use crate::matrix::IntMatrix;
use crate::mcf::{input_matrix, output_matrix, McfStep, QuotientStream};

/// Möbius transducer state: the matrix and its absorb/emit counters.
#[derive(Debug, Clone)]
pub struct MobiusState {
    c: IntMatrix,
    m: usize,
    inputs: usize,
    outputs: usize,
    det_abs: BigInt,
}

impl MobiusState {
    /// State for the map `z ↦ C·z`; `c` must be square of size at least 2
    /// and nonsingular.
    pub fn new(c: IntMatrix) -> Result<Self> {
        let state = Self::new_allow_singular(c)?;
        if state.det_abs.is_zero() {
            return Err(Error::Invalid(
                "möbius matrix is singular; use new_allow_singular to run it anyway".into(),
            ));
        }
        Ok(state)
    }

    /// State that admits a singular matrix (the map collapses ℝ^m onto a
    /// lower-dimensional image; the machine is still well-defined and
    /// `|det| = 0` is still invariant, but outputs may stall or the output
    /// expansion may terminate).
    pub fn new_allow_singular(c: IntMatrix) -> Result<Self> {
        if !c.is_square() || c.rows() < 2 {
            return Err(Error::Dimension(format!(
                "möbius matrix must be square of size ≥ 2, got {}x{}",
                c.rows(),
                c.cols()
            )));
        }
        let det_abs = c.det().abs();
        Ok(MobiusState {
            m: c.rows() - 1,
            c,
            inputs: 0,
            outputs: 0,
            det_abs,
        })
    }

    /// Dimension `m` of the transformed tuples.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Current state matrix.
    pub fn matrix(&self) -> &IntMatrix {
        &self.c
    }

    /// Tuples absorbed so far.
    pub fn inputs(&self) -> usize {
        self.inputs
    }

    /// Tuples emitted so far.
    pub fn outputs(&self) -> usize {
        self.outputs
    }

    /// `|det C|`, fixed at construction and invariant under absorb/emit.
    pub fn det_abs(&self) -> &BigInt {
        &self.det_abs
    }

    /// The output tuple the machine could emit now, if the floors of the
    /// value are already determined by the state alone.
    pub fn can_output(&self) -> Option<McfStep> {
        let m = self.m;
        let c = &self.c;
        if m == 1 {
            // Corner test at x = ∞ (column 1) and x = 1 (column sums).
            let dens = [c.get(1, 0).clone(), c.get(1, 0) + c.get(1, 1)];
            if !same_strict_sign(dens.iter()) {
                return None;
            }
            let f_inf = floor_div(c.get(0, 0), &dens[0]);
            let f_one = floor_div(&(c.get(0, 0) + c.get(0, 1)), &dens[1]);
            if f_inf != f_one {
                return None;
            }
            return Some(McfStep(vec![f_inf]));
        }
        if !same_strict_sign(c.row(m).iter()) {
            return None;
        }
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let first = floor_div(c.get(i, 0), c.get(m, 0));
            for j in 1..=m {
                if floor_div(c.get(i, j), c.get(m, j)) != first {
                    return None;
                }
            }
            out.push(first);
        }
        Some(McfStep(out))
    }

    /// Absorb one input tuple: `C ← C·S(a)`.
    pub fn absorb(&mut self, a: &McfStep) -> Result<()> {
        if a.m() != self.m {
            return Err(Error::Dimension(format!(
                "input tuple {a} has {} components, machine has m = {}",
                a.m(),
                self.m
            )));
        }
        self.c = self.c.mul(&input_matrix(a));
        self.inputs += 1;
        debug_assert_eq!(
            self.c.det().abs(),
            self.det_abs,
            "absorb broke |det| invariance"
        );
        Ok(())
    }

    /// Emit an output tuple if the guard allows: `C ← T(b)·C`, returning `b`.
    pub fn emit(&mut self) -> Option<McfStep> {
        let b = self.can_output()?;
        self.c = output_matrix(&b).mul(&self.c);
        self.outputs += 1;
        debug_assert_eq!(
            self.c.det().abs(),
            self.det_abs,
            "emit broke |det| invariance"
        );
        Some(b)
    }

    /// Replace the matrix with a sheared/normalized version whose map is
    /// projectively identical (used by partial-output steps; `|det|` must be
    /// preserved).
    pub(crate) fn replace_matrix(&mut self, c: IntMatrix) {
        debug_assert_eq!(
            c.det().abs(),
            self.det_abs,
            "replacement broke |det| invariance"
        );
        self.c = c;
    }
}

/// Limits for a transducer run.
#[derive(Debug, Clone, Copy)]
pub struct RunLimits {
    /// Stop after this many full outputs.
    pub max_outputs: usize,
    /// Stop after this many elementary steps (inputs + outputs + partials) —
    /// the safety valve for stalled guards.
    pub max_steps: usize,
}

impl RunLimits {
    /// Limits with a step cap proportional to the output goal.
    pub fn for_outputs(max_outputs: usize) -> Self {
        RunLimits {
            max_outputs,
            max_steps: max_outputs.saturating_mul(20).max(64),
        }
    }
}

/// Drive a Möbius run to completion: emit whenever possible, absorb
/// otherwise, until a limit is hit or the stream runs out.
pub fn run(
    state: &mut MobiusState,
    stream: &mut dyn QuotientStream,
    limits: RunLimits,
) -> Result<RunOutcome> {
    run_inner(state, stream, limits, false)
}

/// Absorb exactly one tuple from a stream into the state.
///
/// Unlike the batch drivers — which report an exhausted stream as a stop
/// reason — this single-step form fails with [`Error::InputExhausted`].
pub fn absorb_from(state: &mut MobiusState, stream: &mut dyn QuotientStream) -> Result<()> {
    match stream.next_step()? {
        Some(a) => state.absorb(&a),
        None => Err(Error::InputExhausted {
            side: StreamSide::X,
        }),
    }
}

pub(crate) fn run_inner(
    state: &mut MobiusState,
    stream: &mut dyn QuotientStream,
    limits: RunLimits,
    partial: bool,
) -> Result<RunOutcome> {
    if stream.m() != state.m() {
        return Err(Error::Dimension(format!(
            "stream dimension {} does not match machine dimension {}",
            stream.m(),
            state.m()
        )));
    }
    let m = state.m();
    let mut outputs = Vec::new();
    let mut log = StepLog::new();
    let mut pending = vec![BigInt::zero(); m];
    let mut emitted = 0usize;
    let mut absorbed = 0usize;
    let mut partial_steps = 0usize;
    let mut steps = 0usize;
    let mut peak_bits = state.matrix().max_entry_bits();
    let mut stop = None;

    while emitted < limits.max_outputs && steps < limits.max_steps {
        // Full output first: the guard needs at least one absorbed tuple
        // before the column cone means anything.
        if state.inputs() >= 1 {
            if let Some(b) = state.emit() {
                let full = McfStep(pending.iter().zip(b.iter()).map(|(p, v)| p + v).collect());
                pending = vec![BigInt::zero(); m];
                outputs.push(full.clone());
                emitted += 1;
                steps += 1;
                peak_bits = peak_bits.max(state.matrix().max_entry_bits());
                log.push(StepRecord {
                    index: steps,
                    kind: StepKind::Output,
                    tuple: full,
                    side: None,
                    inputs_so_far: state.inputs(),
                    outputs_so_far: state.outputs(),
                    max_entry_bits: state.matrix().max_entry_bits(),
                });
                continue;
            }
            // Partial output next: commit any digits already certain.
            if partial {
                if let Some(bt) = crate::partial::mobius_partial_step(state) {
                    for (p, v) in pending.iter_mut().zip(bt.iter()) {
                        *p += v;
                    }
                    partial_steps += 1;
                    steps += 1;
                    peak_bits = peak_bits.max(state.matrix().max_entry_bits());
                    log.push(StepRecord {
                        index: steps,
                        kind: StepKind::Partial,
                        tuple: bt,
                        side: None,
                        inputs_so_far: state.inputs(),
                        outputs_so_far: state.outputs(),
                        max_entry_bits: state.matrix().max_entry_bits(),
                    });
                    continue;
                }
            }
        }
        // Otherwise absorb.
        match stream.next_step()? {
            Some(a) => {
                state.absorb(&a)?;
                absorbed += 1;
                steps += 1;
                peak_bits = peak_bits.max(state.matrix().max_entry_bits());
                log.push(StepRecord {
                    index: steps,
                    kind: StepKind::Input,
                    tuple: a,
                    side: Some(StreamSide::X),
                    inputs_so_far: state.inputs(),
                    outputs_so_far: state.outputs(),
                    max_entry_bits: state.matrix().max_entry_bits(),
                });
            }
            None => {
                stop = Some(StopReason::InputExhausted(StreamSide::X));
                break;
            }
        }
    }

    let stop = stop.unwrap_or(if emitted >= limits.max_outputs {
        StopReason::MaxOutputs
    } else {
        StopReason::GuardHit
    });
    Ok(RunOutcome {
        outputs,
        stop,
        inputs_x: absorbed,
        inputs_y: 0,
        partial_steps,
        steps,
        log,
        max_entry_bits: peak_bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcf::Mcf;

    fn step(v: &[i64]) -> McfStep {
        McfStep::from_i64(v)
    }

    /// Input of the worked example: the Jacobi–Perron expansion of (∛2, ∛4).
    fn cbrt2_mcf() -> Mcf {
        Mcf::new(2, vec![step(&[1, 1])], vec![step(&[1, 0]), step(&[2, 1])]).unwrap()
    }

    fn outputs_i64(outcome: &RunOutcome) -> Vec<Vec<i64>> {
        outcome
            .outputs
            .iter()
            .map(|o| o.iter().map(|v| i64::try_from(v).unwrap()).collect())
            .collect()
    }

    #[test]
    fn constructor_checks() {
        assert!(MobiusState::new(IntMatrix::from_rows(&[vec![1, 0], vec![0, 1]])).is_ok());
        let singular = IntMatrix::from_rows(&[vec![1, -1, 0], vec![1, -1, 0], vec![0, 0, 1]]);
        assert!(matches!(
            MobiusState::new(singular.clone()),
            Err(Error::Invalid(_))
        ));
        assert!(MobiusState::new_allow_singular(singular).is_ok());
        let rect = IntMatrix::from_rows(&[vec![1, 0, 0], vec![0, 1, 0]]);
        assert!(MobiusState::new(rect).is_err());
    }

    #[test]
    fn diag_map_on_cbrt_pair_first_outputs() {
        // C = diag(3, −2, 6): z ↦ (z₁/2, −z₂/3) on (∛2, ∛4).
        let c = IntMatrix::from_rows(&[vec![3, 0, 0], vec![0, -2, 0], vec![0, 0, 6]]);
        let mut state = MobiusState::new(c).unwrap();
        let mcf = cbrt2_mcf();
        let mut stream = mcf.stream();
        let outcome = run(
            &mut state,
            &mut stream,
            RunLimits {
                max_outputs: 7,
                max_steps: 200,
            },
        )
        .unwrap();
        assert_eq!(outcome.stop, StopReason::MaxOutputs);
        assert_eq!(
            outputs_i64(&outcome),
            vec![
                vec![0, -1],
                vec![2, 1],
                vec![2, 0],
                vec![2, 2],
                vec![1, 1],
                vec![5, 3],
                vec![2, 1],
            ]
        );
        // Inputs consumed at each emit: 3, 5, 8, 8, 9, 11, 13.
        let mut at_output = Vec::new();
        for r in outcome.log.records() {
            if r.kind == StepKind::Output {
                at_output.push(r.inputs_so_far);
            }
        }
        assert_eq!(at_output, vec![3, 5, 8, 8, 9, 11, 13]);
        assert_eq!(outcome.inputs_x, 13);
        assert_eq!(outcome.steps, 20);
    }

    #[test]
    fn state_after_second_output_is_frozen_value() {
        let c = IntMatrix::from_rows(&[vec![3, 0, 0], vec![0, -2, 0], vec![0, 0, 6]]);
        let mut state = MobiusState::new(c).unwrap();
        let mcf = cbrt2_mcf();
        let mut stream = mcf.stream();
        run(
            &mut state,
            &mut stream,
            RunLimits {
                max_outputs: 2,
                max_steps: 100,
            },
        )
        .unwrap();
        assert_eq!(
            state.matrix(),
            &IntMatrix::from_rows(&[vec![34, 12, 8], vec![4, 0, 2], vec![11, 3, 4]])
        );
        assert_eq!(state.inputs(), 5);
        assert_eq!(state.outputs(), 2);
    }

    #[test]
    fn m1_doubling_sqrt2_needs_three_inputs() {
        // C = [[2,0],[0,1]]: x ↦ 2x on √2 = [1; 2, 2, …] gives √8 = [2; 1, 4, 1, 4, …].
        let c = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]);
        let mut state = MobiusState::new(c).unwrap();
        let mcf = Mcf::new(1, vec![step(&[1])], vec![step(&[2])]).unwrap();
        let mut stream = mcf.stream();
        let outcome = run(
            &mut state,
            &mut stream,
            RunLimits {
                max_outputs: 10,
                max_steps: 200,
            },
        )
        .unwrap();
        assert_eq!(
            outputs_i64(&outcome),
            vec![
                vec![2],
                vec![1],
                vec![4],
                vec![1],
                vec![4],
                vec![1],
                vec![4],
                vec![1],
                vec![4],
                vec![1]
            ]
        );
        let first_out = outcome
            .log
            .records()
            .iter()
            .find(|r| r.kind == StepKind::Output)
            .unwrap();
        assert_eq!(first_out.inputs_so_far, 3);
    }

    #[test]
    fn identity_map_replays_admissible_input() {
        let mut state = MobiusState::new(IntMatrix::identity(3)).unwrap();
        let mcf = cbrt2_mcf();
        let mut stream = mcf.stream();
        let outcome = run(
            &mut state,
            &mut stream,
            RunLimits {
                max_outputs: 6,
                max_steps: 200,
            },
        )
        .unwrap();
        let got = outputs_i64(&outcome);
        let expect: Vec<Vec<i64>> = vec![
            vec![1, 1],
            vec![1, 0],
            vec![2, 1],
            vec![1, 0],
            vec![2, 1],
            vec![1, 0],
        ];
        assert_eq!(got, expect);
    }

    #[test]
    fn exhausted_stream_reports_partial_outputs() {
        let c = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]);
        let mut state = MobiusState::new(c).unwrap();
        // Only 4 quotients of √2 available.
        let mcf = Mcf::finite_from_i64(1, &[&[1], &[2], &[2], &[2]]).unwrap();
        let mut stream = mcf.stream();
        let outcome = run(
            &mut state,
            &mut stream,
            RunLimits {
                max_outputs: 10,
                max_steps: 200,
            },
        )
        .unwrap();
        assert_eq!(outcome.stop, StopReason::InputExhausted(StreamSide::X));
        assert_eq!(outputs_i64(&outcome), vec![vec![2], vec![1]]);
        assert_eq!(outcome.inputs_x, 4);
    }

    #[test]
    fn zero_limits_do_nothing() {
        let c = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]);
        let mcf = Mcf::new(1, vec![step(&[1])], vec![step(&[2])]).unwrap();

        let mut state = MobiusState::new(c.clone()).unwrap();
        let mut stream = mcf.stream();
        let outcome = run(
            &mut state,
            &mut stream,
            RunLimits {
                max_outputs: 0,
                max_steps: 100,
            },
        )
        .unwrap();
        assert_eq!(outcome.stop, StopReason::MaxOutputs);
        assert!(outcome.outputs.is_empty());
        assert_eq!(outcome.steps, 0);

        let mut state = MobiusState::new(c).unwrap();
        let mut stream = mcf.stream();
        let outcome = run(
            &mut state,
            &mut stream,
            RunLimits {
                max_outputs: 5,
                max_steps: 0,
            },
        )
        .unwrap();
        assert_eq!(outcome.stop, StopReason::GuardHit);
        assert!(outcome.outputs.is_empty());
    }

    #[test]
    fn step_cap_reports_guard_hit() {
        // The singular collapse map stalls: its image is a single rational.
        let c = IntMatrix::from_rows(&[vec![1, -1, 0], vec![1, -1, 0], vec![0, 0, 1]]);
        let mut state = MobiusState::new_allow_singular(c).unwrap();
        let mcf = cbrt2_mcf();
        let mut stream = mcf.stream();
        let outcome = run(
            &mut state,
            &mut stream,
            RunLimits {
                max_outputs: 5,
                max_steps: 30,
            },
        )
        .unwrap();
        assert_eq!(outcome.stop, StopReason::GuardHit);
        assert_eq!(outcome.steps, 30);
    }

    #[test]
    fn absorb_from_errors_on_dry_stream() {
        let c = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]);
        let mut state = MobiusState::new(c).unwrap();
        let mcf = Mcf::finite_from_i64(1, &[&[1]]).unwrap();
        let mut stream = mcf.stream();
        absorb_from(&mut state, &mut stream).unwrap();
        assert!(matches!(
            absorb_from(&mut state, &mut stream),
            Err(Error::InputExhausted {
                side: StreamSide::X
            })
        ));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let c = IntMatrix::identity(3);
        let mut state = MobiusState::new(c).unwrap();
        let mcf = Mcf::new(1, vec![step(&[1])], vec![step(&[2])]).unwrap();
        let mut stream = mcf.stream();
        assert!(run(&mut state, &mut stream, RunLimits::for_outputs(1)).is_err());
        assert!(state.absorb(&step(&[1])).is_err());
    }

    #[test]
    fn det_abs_invariant_over_long_run() {
        let c = IntMatrix::from_rows(&[vec![3, 5, 0], vec![5, 3, 0], vec![1, 0, 2]]);
        let mut state = MobiusState::new(c).unwrap();
        let d0 = state.det_abs().clone();
        let mcf = cbrt2_mcf();
        let mut stream = mcf.stream();
        run(
            &mut state,
            &mut stream,
            RunLimits {
                max_outputs: 10,
                max_steps: 400,
            },
        )
        .unwrap();
        assert_eq!(state.matrix().det().abs(), d0);
    }
}
