//! Independent verification of transducer output.
//!
//! Everything here deliberately avoids the matrix state machines: values are
//! computed by direct interval evaluation of the defining formulas over
//! refinable sources, and expansions by the generic Jacobi–Perron driver.
//! Agreement between the two routes is therefore evidence, not tautology.
//!
//! Two kinds of checks are provided:
//!
//! * [`verify_prefix`] — re-expand the transformed value from scratch
//!   ([`MobiusImageSource`]/[`BilinearImageSource`] + [`jpa_expand`]) and
//!   compare tuples against what a transducer emitted.
//! * bracket certification — at any point of a run where the output guard's
//!   sign condition holds, the state's column (or entry) ratios bracket the
//!   represented value; [`mobius_bracket`]/[`bilinear_bracket`] extract the
//!   bracket and [`mobius_value_intervals`]/[`bilinear_value_intervals`]
//!   independently enclose the value from the *input tails*, so
//!   [`intervals_within`] can certify the mediant property step by step.

use num_bigint::BigInt;
use num_traits::One;

use crate::bilinear::BilinearState;
use crate::error::{Result, StreamSide};
use crate::exactnum::{affine_form, same_strict_sign, Interval, Rational};
use crate::jpa::jpa_expand;
use crate::matrix::IntMatrix;
use crate::mcf::McfStep;
use crate::source::{BilinearImageSource, MobiusImageSource, RealSource};

/// Oracle-side image of a source under a Möbius map (interval evaluation,
/// no state machine). Alias for [`MobiusImageSource::new`].
pub fn eval_mobius(base: Box<dyn RealSource>, c: IntMatrix) -> Result<MobiusImageSource> {
    MobiusImageSource::new(base, c)
}

/// Oracle-side image of two sources under a bilinear family. Alias for
/// [`BilinearImageSource::new`].
pub fn eval_bilinear(
    x: Box<dyn RealSource>,
    y: Box<dyn RealSource>,
    forms: Vec<IntMatrix>,
) -> Result<BilinearImageSource> {
    BilinearImageSource::new(x, y, forms)
}

/// Result of comparing transducer output against an oracle re-expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyOutcome {
    /// Every compared tuple agreed.
    Agreement {
        /// Number of tuples compared.
        checked: usize,
    },
    /// Tuples differ at `index` (0-based).
    Mismatch {
        /// First disagreeing position.
        index: usize,
        /// What the oracle expansion says.
        expected: McfStep,
        /// What the transducer emitted.
        actual: McfStep,
    },
    /// The oracle expansion terminated (rational value) before producing as
    /// many tuples as the transducer emitted.
    OracleShorter {
        /// Length of the oracle's full expansion.
        oracle_len: usize,
        /// Number of transducer tuples requested for comparison.
        engine_len: usize,
    },
}

impl VerifyOutcome {
    /// Whether the comparison found no discrepancy.
    pub fn is_agreement(&self) -> bool {
        matches!(self, VerifyOutcome::Agreement { .. })
    }
}

/// Compare the first `limit` transducer outputs against the expansion of the
/// oracle-computed value.
///
/// Fails with [`Error::PrecisionExhausted`](crate::error::Error) if the
/// oracle cannot certify enough tuples within its budget — never with a
/// silent pass.
pub fn verify_prefix(
    outputs: &[McfStep],
    oracle: &mut dyn RealSource,
    limit: usize,
) -> Result<VerifyOutcome> {
    let n = limit.min(outputs.len());
    if n == 0 {
        return Ok(VerifyOutcome::Agreement { checked: 0 });
    }
    let expansion = jpa_expand(oracle, n)?;
    let oracle_len = expansion
        .mcf
        .len()
        .expect("jpa_expand returns finite prefixes");
    if oracle_len < n {
        return Ok(VerifyOutcome::OracleShorter {
            oracle_len,
            engine_len: n,
        });
    }
    for (index, actual) in outputs.iter().take(n).enumerate() {
        let expected = expansion.mcf.step(index).expect("within expanded prefix");
        if expected != actual {
            return Ok(VerifyOutcome::Mismatch {
                index,
                expected: expected.clone(),
                actual: actual.clone(),
            });
        }
    }
    Ok(VerifyOutcome::Agreement { checked: n })
}

/// Column-ratio bracket of a Möbius state: once the last row of `C` is
/// sign-definite, component `i` of the represented value lies in
/// `[min_j, max_j] c_{i,j}/c_{m+1,j}` for every continuation of the input
/// (the value is a nonnegative combination of the columns). `None` while the
/// sign condition fails.
pub fn mobius_bracket(c: &IntMatrix) -> Option<Vec<Interval>> {
    let m = c.rows() - 1;
    if !same_strict_sign(c.row(m).iter()) {
        return None;
    }
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for j in 0..=m {
            let r = Rational::new(c.get(i, j).clone(), c.get(m, j).clone());
            if lo.as_ref().map_or(true, |v| &r < v) {
                lo = Some(r.clone());
            }
            if hi.as_ref().map_or(true, |v| &r > v) {
                hi = Some(r);
            }
        }
        out.push(Interval::new(lo.unwrap(), hi.unwrap()));
    }
    Some(out)
}

/// Entry-ratio bracket of a bilinear family: once every entry of `C^(m+1)`
/// is sign-definite, component `i` lies in the hull of
/// `c^(i)_{j,l}/c^(m+1)_{j,l}` over all entry positions. `None` while the
/// sign condition fails.
pub fn bilinear_bracket(forms: &[IntMatrix]) -> Option<Vec<Interval>> {
    let m = forms.len() - 1;
    let den = &forms[m];
    if !same_strict_sign(den.entries().iter()) {
        return None;
    }
    let mut out = Vec::with_capacity(m);
    for num in &forms[..m] {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for (a, b) in num.entries().iter().zip(den.entries()) {
            let r = Rational::new(a.clone(), b.clone());
            if lo.as_ref().map_or(true, |v| &r < v) {
                lo = Some(r.clone());
            }
            if hi.as_ref().map_or(true, |v| &r > v) {
                hi = Some(r);
            }
        }
        out.push(Interval::new(lo.unwrap(), hi.unwrap()));
    }
    Some(out)
}

/// Enclose the value represented by Möbius state `c` given an enclosure of
/// the input's current complete quotient (`tail`). `None` while the
/// denominator form straddles zero.
pub fn mobius_value_intervals(c: &IntMatrix, tail: &[Interval]) -> Option<Vec<Interval>> {
    let m = tail.len();
    let den = affine_form(c.row(m), tail);
    if den.contains_zero() {
        return None;
    }
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let num = affine_form(c.row(i), tail);
        out.push(num.div(&den).expect("sign-definite denominator"));
    }
    Some(out)
}

/// Enclose the value represented by a bilinear state given enclosures of the
/// two input tails.
///
/// Orientation: after each absorb the stored forms are transposed, so the
/// rows always refer to the side that will be consumed next
/// ([`BilinearState::active_side`]); the value is
/// `rowᵀ·C^(i)·col / rowᵀ·C^(m+1)·col` with `row` the active side's
/// homogeneous tail and `col` the other side's.
pub fn bilinear_value_intervals(
    state: &BilinearState,
    x_tail: &[Interval],
    y_tail: &[Interval],
) -> Option<Vec<Interval>> {
    let m = state.m();
    let one = Interval::point(Rational::one());
    let mut xw: Vec<Interval> = x_tail.to_vec();
    xw.push(one.clone());
    let mut yw: Vec<Interval> = y_tail.to_vec();
    yw.push(one);
    let (row, col) = match state.active_side() {
        StreamSide::X => (&xw, &yw),
        StreamSide::Y => (&yw, &xw),
    };
    let eval = |c: &IntMatrix| -> Interval {
        let mut acc = Interval::point(Rational::from_integer(BigInt::from(0)));
        for (j, row_j) in row.iter().enumerate() {
            let mut row_acc = Interval::point(Rational::from_integer(BigInt::from(0)));
            for (l, col_l) in col.iter().enumerate() {
                row_acc = row_acc.add(&col_l.scale_int(c.get(j, l)));
            }
            acc = acc.add(&row_acc.mul(row_j));
        }
        acc
    };
    let den = eval(&state.forms()[m]);
    if den.contains_zero() {
        return None;
    }
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        out.push(
            eval(&state.forms()[i])
                .div(&den)
                .expect("sign-definite denominator"),
        );
    }
    Some(out)
}

/// Decide containment of `value` in `bracket`, componentwise.
///
/// `Some(true)` if every component is certainly inside, `Some(false)` if
/// some component is certainly outside (disjoint), `None` if undecided at
/// this precision.
pub fn intervals_within(value: &[Interval], bracket: &[Interval]) -> Option<bool> {
    debug_assert_eq!(value.len(), bracket.len());
    let mut all_inside = true;
    for (v, b) in value.iter().zip(bracket) {
        if v.lo() > b.hi() || v.hi() < b.lo() {
            return Some(false); // certainly violates the bracket
        }
        if !(v.lo() >= b.lo() && v.hi() <= b.hi()) {
            all_inside = false;
        }
    }
    if all_inside {
        Some(true)
    } else {
        None
    }
}
