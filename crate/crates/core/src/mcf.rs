//! Multidimensional continued fractions (MCFs) and their step matrices.
//!
//! An MCF of dimension `m` is a sequence of partial-quotient tuples
//! `a_n = (a_n^(1), …, a_n^(m)) ∈ ℤ^m` representing a tuple of reals
//! `x = (x^(1), …, x^(m))` through the Jacobi–Perron recurrence
//!
//! ```text
//! a_n = ⌊x_n⌋ (componentwise),
//! x_{n+1}^(1) = 1 / (x_n^(m) − a_n^(m)),
//! x_{n+1}^(i) = (x_n^(i−1) − a_n^(i−1)) / (x_n^(m) − a_n^(m)),   2 ≤ i ≤ m.
//! ```
//!
//! At `m = 1` this is the ordinary continued-fraction algorithm. Each step is
//! equivalently a unimodular change of homogeneous coordinates: absorbing
//! `a_n` multiplies a convergent product on the right by the *step matrix*
//! [`input_matrix`], whose first column is `(a^(1), …, a^(m), 1)ᵀ` and whose
//! remaining columns are the first `m` standard basis vectors. Its inverse
//! [`output_matrix`] peels one tuple off the front of an expansion, which is
//! how the transducers emit output digits. Both have determinant `±1`, so the
//! represented point is exact at every step.
//!
//! Expansions here are finite or eventually periodic: a `preperiod` followed
//! by an optional repeating `period`. Arbitrary (computable) expansions enter
//! the library as streams — see [`QuotientStream`] and the `source`/`jpa`
//! modules.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::json;
use crate::matrix::IntMatrix;

/// One partial-quotient tuple `(a^(1), …, a^(m))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct McfStep(pub Vec<BigInt>);

impl McfStep {
    /// Step from machine integers.
    pub fn from_i64(values: &[i64]) -> Self {
        McfStep(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// Dimension of the tuple.
    pub fn m(&self) -> usize {
        self.0.len()
    }
}

impl std::ops::Deref for McfStep {
    type Target = [BigInt];
    fn deref(&self) -> &[BigInt] {
        &self.0
    }
}

impl std::fmt::Display for McfStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A finite or eventually periodic multidimensional continued fraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mcf {
    m: usize,
    preperiod: Vec<McfStep>,
    period: Vec<McfStep>,
}

impl Mcf {
    /// Build an expansion; `period` empty means a finite expansion.
    ///
    /// Every step must have exactly `m` components and `m ≥ 1`.
    pub fn new(m: usize, preperiod: Vec<McfStep>, period: Vec<McfStep>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("mcf dimension m must be at least 1".into()));
        }
        for step in preperiod.iter().chain(&period) {
            if step.m() != m {
                return Err(Error::Dimension(format!(
                    "step {step} has {} components, expected {m}",
                    step.m()
                )));
            }
        }
        if preperiod.is_empty() && period.is_empty() {
            return Err(Error::Invalid("mcf must contain at least one step".into()));
        }
        Ok(Mcf {
            m,
            preperiod,
            period,
        })
    }

    /// Finite expansion from machine integers, one inner slice per step.
    pub fn finite_from_i64(m: usize, steps: &[&[i64]]) -> Result<Self> {
        Self::new(
            m,
            steps.iter().map(|s| McfStep::from_i64(s)).collect(),
            vec![],
        )
    }

    /// Dimension `m`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Non-repeating prefix.
    pub fn preperiod(&self) -> &[McfStep] {
        &self.preperiod
    }

    /// Repeating block (empty for finite expansions).
    pub fn period(&self) -> &[McfStep] {
        &self.period
    }

    /// Whether the expansion repeats forever.
    pub fn is_periodic(&self) -> bool {
        !self.period.is_empty()
    }

    /// Number of steps, if finite.
    pub fn len(&self) -> Option<usize> {
        if self.is_periodic() {
            None
        } else {
            Some(self.preperiod.len())
        }
    }

    /// Whether the expansion has no steps (never true for constructed values).
    pub fn is_empty(&self) -> bool {
        self.preperiod.is_empty() && self.period.is_empty()
    }

    /// Step at position `n` (0-based), unrolling the period; `None` past the
    /// end of a finite expansion.
    pub fn step(&self, n: usize) -> Option<&McfStep> {
        if n < self.preperiod.len() {
            Some(&self.preperiod[n])
        } else if self.period.is_empty() {
            None
        } else {
            Some(&self.period[(n - self.preperiod.len()) % self.period.len()])
        }
    }

    /// The first `n` steps, unrolled; fails on a finite expansion shorter
    /// than `n`.
    pub fn take_steps(&self, n: usize) -> Result<Vec<McfStep>> {
        (0..n)
            .map(|k| {
                self.step(k).cloned().ok_or(Error::InputExhausted {
                    side: crate::error::StreamSide::X,
                })
            })
            .collect()
    }

    /// Stream view over the steps.
    pub fn stream(&self) -> McfStream<'_> {
        McfStream { mcf: self, next: 0 }
    }

    /// Jacobi–Perron admissibility of every tuple past the first:
    /// `a_n^(1) ≥ 1` and `0 ≤ a_n^(i) ≤ a_n^(1)` for `2 ≤ i ≤ m`, which is
    /// what the recurrence produces for all `n ≥ 1` (complete quotients
    /// satisfy `x^(1) > 1` and `0 ≤ x^(i) < x^(1)`). The leading tuple is the
    /// componentwise floor of the represented point and is unconstrained.
    pub fn check_admissible(&self) -> bool {
        let tail_ok = |step: &McfStep| {
            let a1 = &step[0];
            a1 >= &BigInt::one() && step[1..].iter().all(|ai| !ai.is_negative() && ai <= a1)
        };
        let pre_ok = self.preperiod.iter().skip(1).all(tail_ok);
        // Periodic steps all recur at positions ≥ 1.
        pre_ok && self.period.iter().all(tail_ok)
    }

    /// Encode as JSON, component-major: `preperiod[i]` lists component `i+1`
    /// of every preperiod step, likewise `period`; `period` is omitted for a
    /// finite expansion.
    pub fn to_json(&self) -> Value {
        let component_major = |steps: &[McfStep]| -> Value {
            Value::Array(
                (0..self.m)
                    .map(|i| {
                        Value::Array(steps.iter().map(|s| json::bigint_to_value(&s[i])).collect())
                    })
                    .collect(),
            )
        };
        let mut obj = json!({
            "m": self.m,
            "preperiod": component_major(&self.preperiod),
        });
        if self.is_periodic() {
            obj["period"] = component_major(&self.period);
        }
        obj
    }

    /// Decode from the component-major JSON layout of [`Mcf::to_json`];
    /// `period` may be absent or `null`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Json("mcf must be a JSON object".into()))?;
        let m = obj
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("mcf: missing or invalid \"m\"".into()))?
            as usize;
        if m == 0 {
            return Err(Error::Json("mcf: m must be at least 1".into()));
        }
        let steps_of = |key: &str, v: &Value| -> Result<Vec<McfStep>> {
            let comps = v
                .as_array()
                .ok_or_else(|| Error::Json(format!("mcf: {key} must be an array")))?;
            if comps.len() != m {
                return Err(Error::Json(format!(
                    "mcf: {key} has {} component rows, expected m = {m}",
                    comps.len()
                )));
            }
            let parsed: Vec<Vec<BigInt>> = comps
                .iter()
                .map(json::bigint_vec_from_value)
                .collect::<Result<_>>()?;
            let n = parsed[0].len();
            if parsed.iter().any(|c| c.len() != n) {
                return Err(Error::Json(format!(
                    "mcf: {key} component rows must all have the same length"
                )));
            }
            Ok((0..n)
                .map(|k| McfStep(parsed.iter().map(|c| c[k].clone()).collect()))
                .collect())
        };
        let preperiod = match obj.get("preperiod") {
            Some(v) => steps_of("preperiod", v)?,
            None => vec![],
        };
        let period = match obj.get("period") {
            Some(Value::Null) | None => vec![],
            Some(v) => steps_of("period", v)?,
        };
        Mcf::new(m, preperiod, period)
    }

    /// Decode from JSON text.
    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str::<Value>(s)?)
    }
}

/// Stream of partial-quotient tuples. `Ok(None)` means a finite stream ran
/// out; errors mean the producer itself failed (for expansion-on-demand
/// sources, a precision budget ran dry).
pub trait QuotientStream {
    /// Dimension of the tuples.
    fn m(&self) -> usize;
    /// Produce the next tuple, or `Ok(None)` at the end of a finite stream.
    fn next_step(&mut self) -> Result<Option<McfStep>>;
}

/// [`QuotientStream`] over a stored [`Mcf`] (infinite when periodic).
pub struct McfStream<'a> {
    mcf: &'a Mcf,
    next: usize,
}

impl QuotientStream for McfStream<'_> {
    fn m(&self) -> usize {
        self.mcf.m()
    }

    fn next_step(&mut self) -> Result<Option<McfStep>> {
        let step = self.mcf.step(self.next).cloned();
        if step.is_some() {
            self.next += 1;
        }
        Ok(step)
    }
}

/// Column-form step matrix `S(a)`: first column `(a^(1), …, a^(m), 1)ᵀ`,
/// column `j+1` the `j`-th standard basis vector. Right-multiplying a state
/// by `S(a)` absorbs the tuple `a` from an input expansion. `|det S| = 1`.
pub fn input_matrix(step: &McfStep) -> IntMatrix {
    let m = step.m();
    let mut s = IntMatrix::zero(m + 1, m + 1);
    for i in 0..m {
        s.set(i, 0, step[i].clone());
        s.set(i, i + 1, BigInt::one());
    }
    s.set(m, 0, BigInt::one());
    s
}

/// Output-form step matrix `T(b) = S(b)⁻¹`: first row the last basis vector,
/// row `i+1` equal to `e_i − b^(i)·e_{m+1}`. Left-multiplying a state by
/// `T(b)` emits the tuple `b` into an output expansion. `|det T| = 1`.
pub fn output_matrix(step: &McfStep) -> IntMatrix {
    let m = step.m();
    let mut t = IntMatrix::zero(m + 1, m + 1);
    t.set(0, m, BigInt::one());
    for i in 0..m {
        t.set(i + 1, i, BigInt::one());
        t.set(i + 1, m, -step[i].clone());
    }
    t
}

/// Row-form step matrix `R(a) = S(a)ᵀ`, used to absorb a tuple on the
/// transposed (second-operand) side of a bilinear state.
pub fn row_input_matrix(step: &McfStep) -> IntMatrix {
    input_matrix(step).transpose()
}

/// Product of the first `n` step matrices, `S(a_0)·S(a_1)⋯S(a_{n−1})`.
///
/// Column ratios of the product converge to the represented point; `n = 0`
/// gives the identity. Fails if a finite expansion has fewer than `n` steps.
pub fn convergents(mcf: &Mcf, n: usize) -> Result<IntMatrix> {
    let mut prod = IntMatrix::identity(mcf.m() + 1);
    for k in 0..n {
        let step = mcf.step(k).ok_or(Error::InputExhausted {
            side: crate::error::StreamSide::X,
        })?;
        prod = prod.mul(&input_matrix(step));
    }
    Ok(prod)
}

/// The `n`-th convergent point: first-column ratios
/// `(c_{1,1}/c_{m+1,1}, …, c_{m,1}/c_{m+1,1})` of [`convergents`]`(mcf, n)`.
///
/// Fails if the corner entry `c_{m+1,1}` is zero (possible only for
/// inadmissible prefixes or `n = 0`).
pub fn eval_convergent(mcf: &Mcf, n: usize) -> Result<Vec<Rational>> {
    let c = convergents(mcf, n)?;
    let m = mcf.m();
    let den = c.get(m, 0);
    if den.is_zero() {
        return Err(Error::Invalid(format!(
            "convergent {n} has zero corner entry; ratios undefined"
        )));
    }
    Ok((0..m)
        .map(|i| Rational::new(c.get(i, 0).clone(), den.clone()))
        .collect())
}
