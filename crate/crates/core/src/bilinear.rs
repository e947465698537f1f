//! Bilinear transduction: exact arithmetic on *pairs* of multidimensional
//! continued fractions.
//!
//! The state is a family of `m+1` integer matrices `C^(1), …, C^(m+1)`, each
//! `(m+1)×(m+1)`, representing the map
//!
//! ```text
//! z^(i) = (x, 1)ᵀ · C^(i) · (y, 1) / (x, 1)ᵀ · C^(m+1) · (y, 1),   1 ≤ i ≤ m,
//! ```
//!
//! which subsumes sums, products, and any integer bilinear combination of
//! two expansions (see [`sum_forms`] and [`product_forms`]). Tuples are
//! absorbed from the two operand streams in strict alternation, starting
//! with `x`: absorbing `a` on the active side replaces every `C^(i)` by
//! `(R(a)·C^(i))ᵀ` — the row-form step matrix acts on the active operand's
//! coordinates, and the transpose swaps which operand the rows of the state
//! refer to, so the *other* side becomes active. Emitting `d` rotates the
//! family: the new denominator form is `C^(i+1) − d^(i)·C^(m+1)` shifted
//! down, exactly the output step of the Möbius machine applied across forms.
//!
//! The output guard is the entrywise analogue of the Möbius column guard:
//! all `(m+1)²` entries of the denominator form `C^(m+1)` must share one
//! strict sign, and for each component `i` the floors
//! `⌊c^(i)_{j,l} / c^(m+1)_{j,l}⌋` must agree over all entry positions
//! `(j, l)`. Entries play the role of corners of the product domain
//! (both remaining operand cones), so agreement certifies the output floor
//! for every possible continuation of both inputs.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result, StreamSide};
use crate::exactnum::{floor_div, strict_sign};
use crate::log::{RunOutcome, StepKind, StepLog, StepRecord, StopReason};
use crate::matrix::IntMatrix;
use crate::mcf::{row_input_matrix, McfStep, QuotientStream};

/// Bilinear transducer state: the form family plus absorb/emit counters.
#[derive(Debug, Clone)]
pub struct BilinearState {
    forms: Vec<IntMatrix>,
    m: usize,
    active: StreamSide,
    inputs_x: usize,
    inputs_y: usize,
    outputs: usize,
}

impl BilinearState {
    /// State from a family of `m+1` coefficient matrices, each
    /// `(m+1)×(m+1)`; the denominator form `C^(m+1)` must not be the zero
    /// matrix (the represented value would be undefined).
    pub fn new(forms: Vec<IntMatrix>) -> Result<Self> {
        if forms.len() < 2 {
            return Err(Error::Dimension(format!(
                "bilinear family needs m+1 ≥ 2 matrices, got {}",
                forms.len()
            )));
        }
        let m = forms.len() - 1;
        for (k, c) in forms.iter().enumerate() {
            if c.rows() != m + 1 || c.cols() != m + 1 {
                return Err(Error::Dimension(format!(
                    "bilinear form {} must be {}x{}, got {}x{}",
                    k + 1,
                    m + 1,
                    m + 1,
                    c.rows(),
                    c.cols()
                )));
            }
        }
        if forms[m].is_zero() {
            return Err(Error::Invalid(
                "denominator form C^(m+1) is identically zero".into(),
            ));
        }
        Ok(BilinearState {
            forms,
            m,
            active: StreamSide::X,
            inputs_x: 0,
            inputs_y: 0,
            outputs: 0,
        })
    }

    /// Dimension `m` of the operand and output tuples.
    pub fn m(&self) -> usize {
        self.m
    }

    /// The current form family.
    pub fn forms(&self) -> &[IntMatrix] {
        &self.forms
    }

    /// Which operand stream the next absorb will read.
    pub fn active_side(&self) -> StreamSide {
        self.active
    }

    /// Tuples absorbed from the `x` stream.
    pub fn inputs_x(&self) -> usize {
        self.inputs_x
    }

    /// Tuples absorbed from the `y` stream.
    pub fn inputs_y(&self) -> usize {
        self.inputs_y
    }

    /// Tuples emitted.
    pub fn outputs(&self) -> usize {
        self.outputs
    }

    /// Largest entry over the whole family, in bits.
    pub fn max_entry_bits(&self) -> u64 {
        self.forms
            .iter()
            .map(IntMatrix::max_entry_bits)
            .max()
            .unwrap_or(0)
    }

    /// The output tuple the machine could emit now, if every component's
    /// floor is already determined by the state alone.
    pub fn can_output(&self) -> Option<McfStep> {
        let m = self.m;
        let den = &self.forms[m];
        strict_sign(den.entries().iter())?;
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let num = &self.forms[i];
            let mut first: Option<BigInt> = None;
            for (a, b) in num.entries().iter().zip(den.entries()) {
                let f = floor_div(a, b);
                match &first {
                    None => first = Some(f),
                    Some(prev) if *prev != f => return None,
                    Some(_) => {}
                }
            }
            out.push(first.expect("forms are nonempty"));
        }
        Some(McfStep(out))
    }

    /// Absorb one tuple on the active side: every `C^(i) ← (R(a)·C^(i))ᵀ`,
    /// then the other side becomes active.
    pub fn absorb(&mut self, a: &McfStep) -> Result<()> {
        if a.m() != self.m {
            return Err(Error::Dimension(format!(
                "input tuple {a} has {} components, machine has m = {}",
                a.m(),
                self.m
            )));
        }
        let r = row_input_matrix(a);
        for c in &mut self.forms {
            *c = r.mul(c).transpose();
        }
        match self.active {
            StreamSide::X => {
                self.inputs_x += 1;
                self.active = StreamSide::Y;
            }
            StreamSide::Y => {
                self.inputs_y += 1;
                self.active = StreamSide::X;
            }
        }
        Ok(())
    }

    /// Emit an output tuple if the guard allows, rotating the family:
    /// `C^(1) ← C^(m+1)`, `C^(i+1) ← C^(i) − d^(i)·C^(m+1)`.
    pub fn emit(&mut self) -> Option<McfStep> {
        let d = self.can_output()?;
        let den = self.forms[self.m].clone();
        let mut new_forms = Vec::with_capacity(self.m + 1);
        new_forms.push(den.clone());
        for i in 0..self.m {
            new_forms.push(self.forms[i].sub_scaled(&d[i], &den));
        }
        self.forms = new_forms;
        self.outputs += 1;
        Some(d)
    }

    /// Replace the family with a sheared/normalized one representing the
    /// same value (used by partial-output steps).
    pub(crate) fn replace_forms(&mut self, forms: Vec<IntMatrix>) {
        debug_assert_eq!(forms.len(), self.m + 1);
        self.forms = forms;
    }
}

/// Coefficient family for `z = x + y` (componentwise on tuples):
/// `C^(i)` has 1 at `(i, m+1)` and `(m+1, i)`; `C^(m+1)` has 1 at
/// `(m+1, m+1)`.
pub fn sum_forms(m: usize) -> Vec<IntMatrix> {
    let mut forms = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut c = IntMatrix::zero(m + 1, m + 1);
        c.set(i, m, BigInt::one());
        c.set(m, i, BigInt::one());
        forms.push(c);
    }
    let mut den = IntMatrix::zero(m + 1, m + 1);
    den.set(m, m, BigInt::one());
    forms.push(den);
    forms
}

/// Coefficient family for `z = x·y` (componentwise on tuples):
/// `C^(i)` has 1 at `(i, i)`; `C^(m+1)` has 1 at `(m+1, m+1)`.
pub fn product_forms(m: usize) -> Vec<IntMatrix> {
    let mut forms = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut c = IntMatrix::zero(m + 1, m + 1);
        c.set(i, i, BigInt::one());
        forms.push(c);
    }
    let mut den = IntMatrix::zero(m + 1, m + 1);
    den.set(m, m, BigInt::one());
    forms.push(den);
    forms
}

/// Drive a bilinear run: emit whenever the guard allows (once both sides
/// have contributed at least one tuple), absorb in strict `x`, `y`
/// alternation otherwise.
pub fn run_bilinear(
    state: &mut BilinearState,
    xs: &mut dyn QuotientStream,
    ys: &mut dyn QuotientStream,
    limits: crate::mobius::RunLimits,
) -> Result<RunOutcome> {
    run_bilinear_inner(state, xs, ys, limits, false)
}

pub(crate) fn run_bilinear_inner(
    state: &mut BilinearState,
    xs: &mut dyn QuotientStream,
    ys: &mut dyn QuotientStream,
    limits: crate::mobius::RunLimits,
    partial: bool,
) -> Result<RunOutcome> {
    if xs.m() != state.m() || ys.m() != state.m() {
        return Err(Error::Dimension(format!(
            "stream dimensions ({}, {}) do not match machine dimension {}",
            xs.m(),
            ys.m(),
            state.m()
        )));
    }
    let m = state.m();
    let mut outputs = Vec::new();
    let mut log = StepLog::new();
    let mut pending = vec![BigInt::zero(); m];
    let mut emitted = 0usize;
    let mut absorbed_x = 0usize;
    let mut absorbed_y = 0usize;
    let mut partial_steps = 0usize;
    let mut steps = 0usize;
    let mut peak_bits = state.max_entry_bits();
    let mut stop = None;

    while emitted < limits.max_outputs && steps < limits.max_steps {
        // The entry guard is meaningful only once both operand cones exist.
        if state.inputs_x() >= 1 && state.inputs_y() >= 1 {
            if let Some(d) = state.emit() {
                let full = McfStep(pending.iter().zip(d.iter()).map(|(p, v)| p + v).collect());
                pending = vec![BigInt::zero(); m];
                outputs.push(full.clone());
                emitted += 1;
                steps += 1;
                peak_bits = peak_bits.max(state.max_entry_bits());
                log.push(StepRecord {
                    index: steps,
                    kind: StepKind::Output,
                    tuple: full,
                    side: None,
                    inputs_so_far: state.inputs_x() + state.inputs_y(),
                    outputs_so_far: state.outputs(),
                    max_entry_bits: state.max_entry_bits(),
                });
                continue;
            }
            if partial {
                if let Some(dt) = crate::partial::bilinear_partial_step(state) {
                    for (p, v) in pending.iter_mut().zip(dt.iter()) {
                        *p += v;
                    }
                    partial_steps += 1;
                    steps += 1;
                    peak_bits = peak_bits.max(state.max_entry_bits());
                    log.push(StepRecord {
                        index: steps,
                        kind: StepKind::Partial,
                        tuple: dt,
                        side: None,
                        inputs_so_far: state.inputs_x() + state.inputs_y(),
                        outputs_so_far: state.outputs(),
                        max_entry_bits: state.max_entry_bits(),
                    });
                    continue;
                }
            }
        }
        let side = state.active_side();
        let next = match side {
            StreamSide::X => xs.next_step()?,
            StreamSide::Y => ys.next_step()?,
        };
        match next {
            Some(a) => {
                state.absorb(&a)?;
                match side {
                    StreamSide::X => absorbed_x += 1,
                    StreamSide::Y => absorbed_y += 1,
                }
                steps += 1;
                peak_bits = peak_bits.max(state.max_entry_bits());
                log.push(StepRecord {
                    index: steps,
                    kind: StepKind::Input,
                    tuple: a,
                    side: Some(side),
                    inputs_so_far: state.inputs_x() + state.inputs_y(),
                    outputs_so_far: state.outputs(),
                    max_entry_bits: state.max_entry_bits(),
                });
            }
            None => {
                stop = Some(StopReason::InputExhausted(side));
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
        inputs_x: absorbed_x,
        inputs_y: absorbed_y,
        partial_steps,
        steps,
        log,
        max_entry_bits: peak_bits,
    })
}
