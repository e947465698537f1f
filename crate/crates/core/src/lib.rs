//! Exact arithmetic on multidimensional continued fractions.
//!
//! This crate works with Jacobi–Perron expansions: a tuple of reals
//! `(x⁽¹⁾, …, x⁽ᵐ⁾)` is encoded as a stream of integer tuples obtained by
//! repeatedly taking componentwise floors and inverting around the last
//! component. Each step corresponds to a unimodular `(m+1)×(m+1)` integer
//! matrix, which makes two things possible without ever leaving ℤ:
//!
//! * **transformation** — a Möbius map `(Ax + b)/(cᵀx + d)` (one matrix) or
//!   a bilinear family in two tuple arguments can be applied directly to
//!   expansions: absorb input tuples into the coefficient state, emit output
//!   tuples as soon as they are uniquely determined ([`mobius`],
//!   [`bilinear`], with the shear-based refinement of [`partial`]);
//! * **expansion** — tuples of computable reals, given as refinable interval
//!   enclosures ([`source`]), can be expanded on demand ([`jpa`]).
//!
//! Correctness is cross-checked by an independent interval-arithmetic oracle
//! ([`oracle`]) that never touches the matrix state machines, and the cost
//! model (inputs consumed per output emitted) is measured by reproducible
//! experiment suites ([`experiments`]).
//!
//! The building blocks are deliberately small: exact rationals and intervals
//! ([`exactnum`]), dense integer matrices ([`matrix`]), expansion containers
//! and step matrices ([`mcf`]), and run logging ([`log`]).
//!
//! # Example
//!
//! Divide the components of `(∛2, ∛4)` by 2 and −3 respectively, streaming
//! quotients in and certified image quotients out:
//!
//! ```
//! use mcf_core::{run, IntMatrix, Mcf, McfStep, MobiusState, RunLimits};
//!
//! # fn main() -> mcf_core::Result<()> {
//! // The expansion of (∛2, ∛4): preperiod (1,1), period (1,0), (2,1).
//! let input = Mcf::new(
//!     2,
//!     vec![McfStep::from_i64(&[1, 1])],
//!     vec![McfStep::from_i64(&[1, 0]), McfStep::from_i64(&[2, 1])],
//! )?;
//! // (z₁, z₂) ↦ (3z₁/6, −2z₂/6).
//! let c = IntMatrix::from_rows(&[vec![3, 0, 0], vec![0, -2, 0], vec![0, 0, 6]]);
//! let mut state = MobiusState::new(c)?;
//! let mut stream = input.stream();
//! let outcome = run(&mut state, &mut stream, RunLimits::for_outputs(7))?;
//!
//! assert_eq!(outcome.outputs[0], McfStep::from_i64(&[0, -1]));
//! assert_eq!(outcome.outputs[1], McfStep::from_i64(&[2, 1]));
//! assert_eq!(outcome.inputs_total(), 13);
//! # Ok(())
//! # }
//! ```

pub mod bilinear;
pub mod error;
pub mod exactnum;
pub mod experiments;
pub mod jpa;
pub mod json;
pub mod log;
pub mod matrix;
pub mod mcf;
pub mod mobius;
pub mod oracle;
pub mod partial;
pub mod source;

pub use bilinear::{product_forms, run_bilinear, sum_forms, BilinearState};
pub use error::{Error, Result, StreamSide};
pub use exactnum::{Interval, PrecisionBudget, Rational, DEFAULT_PRECISION_BITS};
pub use experiments::{
    fit_slope, run_cubic_suite, run_random_bilinear_suite, run_random_mobius_suite, slope_stats,
    write_results_csv, CubicConfig, CubicReport, RandomConfig, RandomMcfStream, SlopeStats,
    TrialRow,
};
pub use jpa::{jpa_expand, Expansion, JpaStream};
pub use log::{RunOutcome, StepKind, StepLog, StepRecord, StopReason};
pub use matrix::IntMatrix;
pub use mcf::{Mcf, McfStep, QuotientStream};
pub use mobius::{run, MobiusState, RunLimits};
pub use oracle::{
    bilinear_bracket, bilinear_value_intervals, eval_bilinear, eval_mobius, intervals_within,
    mobius_bracket, mobius_value_intervals, verify_prefix, VerifyOutcome,
};
pub use partial::{run_bilinear_with_partial, run_with_partial};
pub use source::{
    with_enclosure, BilinearImageSource, CbrtPairSource, McfSource, MobiusImageSource,
    RationalSource, RealSource, RootSource,
};

/// Arbitrary-precision integer used throughout (re-export of
/// [`num_bigint::BigInt`]).
pub use num_bigint::BigInt;
