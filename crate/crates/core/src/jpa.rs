//! Jacobi–Perron expansion of refinable real tuples.
//!
//! The expansion driver never manipulates complete quotients directly —
//! doing so would need exact arithmetic in the field generated by the input.
//! Instead it tracks the integer matrix `Q_n = T(a_{n−1})⋯T(a_0)` (the
//! product of output-form step matrices), so that the `n`-th complete
//! quotient is the linear fractional image
//!
//! ```text
//! x_n^(i) = (Q_n·(x, 1))_i / (Q_n·(x, 1))_{m+1}
//! ```
//!
//! of the original point. Each tuple `a_n = ⌊x_n⌋` is obtained by evaluating
//! these ratios over the source's interval enclosure and refining until every
//! floor is certain; the update `Q_{n+1} = T(a_n)·Q_n` is exact integer
//! arithmetic. Termination (`x_n^(m) = a_n^(m)`, i.e. a rational point whose
//! expansion is finite) shows up as the next denominator form being exactly
//! zero, which is decidable for point enclosures. For interval enclosures a
//! vanishing denominator can only straddle zero, so the refinement budget
//! runs out and the caller sees [`Error::PrecisionExhausted`] — never a
//! wrong tuple.

use num_bigint::BigInt;

use crate::error::Result;
use crate::exactnum::Interval;
use crate::matrix::IntMatrix;
use crate::mcf::{output_matrix, Mcf, McfStep, QuotientStream};
use crate::source::{with_enclosure, RealSource};

/// Result of [`jpa_expand`]: the extracted prefix, and whether the expansion
/// ended on its own (the represented point is rational with this exact
/// finite expansion) before the requested number of steps.
#[derive(Debug, Clone)]
pub struct Expansion {
    /// The extracted partial quotients, as a finite expansion.
    pub mcf: Mcf,
    /// Whether the expansion terminated exactly (rational point).
    pub terminated: bool,
}

/// Interval enclosures of the complete quotient `Q·(x, 1)` given an
/// enclosure of `x`, or `None` while the denominator form contains zero.
pub fn tail_intervals(q: &IntMatrix, base: &[Interval]) -> Option<Vec<Interval>> {
    let m = base.len();
    debug_assert_eq!(q.rows(), m + 1);
    let den = crate::exactnum::affine_form(q.row(m), base);
    if den.contains_zero() {
        return None;
    }
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let num = crate::exactnum::affine_form(q.row(i), base);
        out.push(num.div(&den).expect("sign-definite denominator"));
    }
    Some(out)
}

enum TupleOutcome {
    /// Denominator form exactly zero: previous tuple was the last.
    Terminated,
    Tuple(Vec<BigInt>),
}

/// Extract one tuple, updating `q`; `Ok(None)` when the expansion has ended.
fn next_tuple(src: &mut dyn RealSource, q: &mut IntMatrix) -> Result<Option<McfStep>> {
    let m = src.dim();
    let outcome = with_enclosure(src, |enc| {
        let den = crate::exactnum::affine_form(q.row(m), enc);
        if den.is_zero_point() {
            return Some(TupleOutcome::Terminated);
        }
        if den.contains_zero() {
            return None;
        }
        let mut floors = Vec::with_capacity(m);
        for i in 0..m {
            let num = crate::exactnum::affine_form(q.row(i), enc);
            let ratio = num.div(&den).expect("sign-definite denominator");
            floors.push(ratio.certain_floor()?);
        }
        Some(TupleOutcome::Tuple(floors))
    })?;
    match outcome {
        TupleOutcome::Terminated => Ok(None),
        TupleOutcome::Tuple(a) => {
            let step = McfStep(a);
            *q = output_matrix(&step).mul(q);
            Ok(Some(step))
        }
    }
}

/// Expand `src` to (at most) `steps` Jacobi–Perron tuples.
///
/// Stops early — with `terminated = true` — when the point is rational and
/// its expansion ends. `steps` must be at least 1; the first tuple always
/// exists (it is the componentwise floor of the point).
pub fn jpa_expand(src: &mut dyn RealSource, steps: usize) -> Result<Expansion> {
    if steps == 0 {
        return Err(crate::error::Error::Invalid(
            "jpa_expand needs steps ≥ 1".into(),
        ));
    }
    let m = src.dim();
    let mut q = IntMatrix::identity(m + 1);
    let mut tuples = Vec::with_capacity(steps);
    let mut terminated = false;
    for _ in 0..steps {
        match next_tuple(src, &mut q)? {
            Some(step) => tuples.push(step),
            None => {
                terminated = true;
                break;
            }
        }
    }
    Ok(Expansion {
        mcf: Mcf::new(m, tuples, vec![])?,
        terminated,
    })
}

/// Expansion-on-demand [`QuotientStream`]: each `next_step` extracts one
/// more Jacobi–Perron tuple from the underlying source.
///
/// The stream ends (`Ok(None)`) exactly when the expansion terminates; a
/// spent refinement budget surfaces as an error from `next_step`.
pub struct JpaStream {
    src: Box<dyn RealSource>,
    q: IntMatrix,
    m: usize,
    terminated: bool,
}

impl JpaStream {
    /// Stream of tuples of `src`'s expansion, from the beginning.
    pub fn new(src: Box<dyn RealSource>) -> Self {
        let m = src.dim();
        JpaStream {
            src,
            q: IntMatrix::identity(m + 1),
            m,
            terminated: false,
        }
    }

    /// Whether the expansion has ended.
    pub fn terminated(&self) -> bool {
        self.terminated
    }

    /// The transform carrying the original point to the current complete
    /// quotient (the product of output-form matrices of everything emitted).
    pub fn tail_transform(&self) -> &IntMatrix {
        &self.q
    }

    /// Refine the underlying source until `f` extracts an answer from the
    /// enclosure of the *current complete quotient* (the tail after all
    /// emitted tuples). Used by external certification passes.
    pub fn with_tail<T, F>(&mut self, mut f: F) -> Result<T>
    where
        F: FnMut(&[Interval]) -> Option<T>,
    {
        let q = &self.q;
        with_enclosure(self.src.as_mut(), |enc| {
            let tails = tail_intervals(q, enc)?;
            f(&tails)
        })
    }

    /// Enclosure of the current complete quotient at the source's present
    /// precision, without refining. `None` while indeterminate.
    pub fn tail_enclosure(&self) -> Option<Vec<Interval>> {
        let base = self.src.enclosure()?;
        tail_intervals(&self.q, &base)
    }

    /// Refine the underlying source by one batch. Lets callers that juggle
    /// several streams (e.g. both sides of a bilinear run) interleave
    /// refinement, which [`Self::with_tail`] cannot do alone.
    pub fn refine_source(&mut self) -> Result<()> {
        self.src.refine()
    }
}

impl QuotientStream for JpaStream {
    fn m(&self) -> usize {
        self.m
    }

    fn next_step(&mut self) -> Result<Option<McfStep>> {
        if self.terminated {
            return Ok(None);
        }
        let step = next_tuple(self.src.as_mut(), &mut self.q)?;
        if step.is_none() {
            self.terminated = true;
        }
        Ok(step)
    }
}
