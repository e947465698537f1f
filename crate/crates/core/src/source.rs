//! Refinable enclosures of real tuples.
//!
//! A [`RealSource`] presents a point of ℝ^m through certified interval
//! enclosures that can be tightened on demand. Consumers never see an
//! approximation: they ask for the current enclosure, decide whether it
//! answers their question (a floor, a sign, a bound), and call
//! [`RealSource::refine`] until it does — the [`with_enclosure`] driver
//! packages that loop. Refinement is metered by a [`PrecisionBudget`], so a
//! question that the enclosure can never settle (e.g. the floor of an exact
//! integer known only as a shrinking interval around it) terminates with
//! [`Error::PrecisionExhausted`] instead of looping.
//!
//! Implementations:
//!
//! * [`RationalSource`] — an exact rational tuple (point enclosures).
//! * [`RootSource`] — `d^(1/k)` by dyadic bisection of `t^k − d`.
//! * [`CbrtPairSource`] — `(∛d, ∛d²)`, the classical cubic Jacobi–Perron
//!   input, squaring the cube-root bracket.
//! * [`McfSource`] — the point represented by a stored expansion, enclosed by
//!   the column-ratio hull of its step-matrix products.
//! * [`MobiusImageSource`] / [`BilinearImageSource`] — images of other
//!   sources under integer Möbius / bilinear maps, used as independent
//!   oracles for the transducers.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{
    affine_form, int_root, same_strict_sign, Interval, PrecisionBudget, Rational,
    DEFAULT_PRECISION_BITS,
};
use crate::matrix::IntMatrix;
use crate::mcf::{input_matrix, Mcf};

/// A point of ℝ^m exposed through refinable interval enclosures.
pub trait RealSource {
    /// Dimension `m` of the tuple.
    fn dim(&self) -> usize;

    /// Current enclosure, one interval per component, or `None` while the
    /// value is indeterminate at the current precision (e.g. an image whose
    /// denominator interval still contains zero).
    fn enclosure(&self) -> Option<Vec<Interval>>;

    /// Tighten the enclosure. Fails with [`Error::PrecisionExhausted`] when
    /// the budget is spent or the source is an exact point that cannot be
    /// tightened further.
    fn refine(&mut self) -> Result<()>;
}

/// Refine `src` until `f` extracts an answer from its enclosure.
///
/// `f` returns `None` to request more precision. Budget exhaustion inside
/// [`RealSource::refine`] propagates, so the loop always terminates.
pub fn with_enclosure<T, F>(src: &mut dyn RealSource, mut f: F) -> Result<T>
where
    F: FnMut(&[Interval]) -> Option<T>,
{
    loop {
        if let Some(enc) = src.enclosure() {
            if let Some(v) = f(&enc) {
                return Ok(v);
            }
        }
        src.refine()?;
    }
}

/// Componentwise floors of the source's value, certified by refinement.
pub fn certified_floors(src: &mut dyn RealSource) -> Result<Vec<BigInt>> {
    with_enclosure(src, |enc| {
        enc.iter()
            .map(Interval::certain_floor)
            .collect::<Option<Vec<_>>>()
    })
}

/// An exact rational tuple. Enclosures are points; refinement is impossible
/// and reports an exhausted (zero-bit) budget.
#[derive(Debug, Clone)]
pub struct RationalSource {
    values: Vec<Rational>,
}

impl RationalSource {
    /// Source at the given tuple.
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Invalid(
                "rational source needs at least one component".into(),
            ));
        }
        Ok(RationalSource { values })
    }

    /// The exact tuple.
    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

impl RealSource for RationalSource {
    fn dim(&self) -> usize {
        self.values.len()
    }

    fn enclosure(&self) -> Option<Vec<Interval>> {
        Some(self.values.iter().cloned().map(Interval::point).collect())
    }

    fn refine(&mut self) -> Result<()> {
        // A point has no width to shed; any caller that needs more than the
        // exact value is asking an unanswerable question.
        Err(Error::PrecisionExhausted {
            spent: 0,
            budget: 0,
        })
    }
}

/// `d^(1/k)` for integer `d ≥ 0`, `k ≥ 1`, bracketed by dyadic bisection.
///
/// The bracket starts at `[r, r+1]` with `r = ⌊d^(1/k)⌋` and halves once per
/// budget bit; each comparison `midᵏ ≟ d` is exact. If `d` is a perfect
/// `k`-th power the source degenerates to an exact point.
#[derive(Debug, Clone)]
pub struct RootSource {
    k: u32,
    d: BigInt,
    value: Interval,
    budget: PrecisionBudget,
}

impl RootSource {
    /// Source at `d^(1/k)` with the given refinement budget in bits.
    pub fn new(d: BigInt, k: u32, budget_bits: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Invalid("root index k must be at least 1".into()));
        }
        if d.is_negative() {
            return Err(Error::Invalid("radicand must be nonnegative".into()));
        }
        let r = int_root(&d, k);
        let value = if r.pow(k) == d {
            Interval::point(Rational::from_integer(r))
        } else {
            Interval::new(
                Rational::from_integer(r.clone()),
                Rational::from_integer(r + BigInt::one()),
            )
        };
        Ok(RootSource {
            k,
            d,
            value,
            budget: PrecisionBudget::new(budget_bits),
        })
    }

    /// Source with the default budget.
    pub fn with_default_budget(d: BigInt, k: u32) -> Result<Self> {
        Self::new(d, k, DEFAULT_PRECISION_BITS)
    }

    /// Current bracket around the root.
    pub fn value(&self) -> &Interval {
        &self.value
    }

    fn bisect(&mut self, times: u64) {
        let two = Rational::from_integer(BigInt::from(2));
        let target = Rational::from_integer(self.d.clone());
        for _ in 0..times {
            if self.value.is_point() {
                return;
            }
            let mid = (self.value.lo() + self.value.hi()) / &two;
            let mid_pow = mid.pow(self.k as i32);
            match mid_pow.cmp(&target) {
                std::cmp::Ordering::Less => {
                    self.value = Interval::new(mid, self.value.hi().clone());
                }
                std::cmp::Ordering::Greater => {
                    self.value = Interval::new(self.value.lo().clone(), mid);
                }
                std::cmp::Ordering::Equal => {
                    self.value = Interval::point(mid);
                }
            }
        }
    }
}

impl RealSource for RootSource {
    fn dim(&self) -> usize {
        1
    }

    fn enclosure(&self) -> Option<Vec<Interval>> {
        Some(vec![self.value.clone()])
    }

    fn refine(&mut self) -> Result<()> {
        if self.value.is_point() {
            return Err(Error::PrecisionExhausted {
                spent: self.budget.spent(),
                budget: self.budget.limit(),
            });
        }
        let batch = self.budget.batch()?;
        self.bisect(batch);
        Ok(())
    }
}

/// The pair `(∛d, ∛d²)` — the canonical cubic input of the Jacobi–Perron
/// algorithm — derived from one cube-root bracket so both components stay
/// consistent.
#[derive(Debug, Clone)]
pub struct CbrtPairSource {
    root: RootSource,
}

impl CbrtPairSource {
    /// Source at `(∛d, ∛d²)` for integer `d ≥ 2`.
    pub fn new(d: BigInt, budget_bits: u64) -> Result<Self> {
        if d < BigInt::from(2) {
            return Err(Error::Invalid("cube-root pair needs d ≥ 2".into()));
        }
        Ok(CbrtPairSource {
            root: RootSource::new(d, 3, budget_bits)?,
        })
    }

    /// Source with the default budget.
    pub fn with_default_budget(d: BigInt) -> Result<Self> {
        Self::new(d, DEFAULT_PRECISION_BITS)
    }
}

impl RealSource for CbrtPairSource {
    fn dim(&self) -> usize {
        2
    }

    fn enclosure(&self) -> Option<Vec<Interval>> {
        let t = self.root.value().clone();
        let t2 = t.square();
        Some(vec![t, t2])
    }

    fn refine(&mut self) -> Result<()> {
        self.root.refine()
    }
}

/// The point represented by a stored expansion, enclosed by the column-ratio
/// hull of its step-matrix products.
///
/// After absorbing `S(a_0)⋯S(a_{n−1})`, the represented point is
/// `P·(x_n, 1)` in homogeneous coordinates with the complete quotient
/// `x_n ≥ 0` componentwise (which is why the expansion must be admissible),
/// so it lies in the hull `[min_j, max_j]` of the column ratios
/// `p_{i,j}/p_{m+1,j}` once the last row of `P` has one strict sign. The
/// hulls are nested and shrink to the point. A finite expansion collapses to
/// its exact first-column ratio once exhausted.
#[derive(Debug, Clone)]
pub struct McfSource {
    mcf: Mcf,
    taken: usize,
    prod: IntMatrix,
    budget: PrecisionBudget,
}

impl McfSource {
    /// Source over an admissible expansion with a budget in absorbed steps.
    pub fn new(mcf: Mcf, budget_bits: u64) -> Result<Self> {
        if !mcf.check_admissible() {
            return Err(Error::Invalid(
                "mcf source requires an admissible expansion (hull enclosure is otherwise invalid)"
                    .into(),
            ));
        }
        let prod = IntMatrix::identity(mcf.m() + 1);
        Ok(McfSource {
            mcf,
            taken: 0,
            prod,
            budget: PrecisionBudget::new(budget_bits),
        })
    }

    /// Source with the default budget.
    pub fn with_default_budget(mcf: Mcf) -> Result<Self> {
        Self::new(mcf, DEFAULT_PRECISION_BITS)
    }

    fn exhausted(&self) -> bool {
        !self.mcf.is_periodic() && self.taken >= self.mcf.preperiod().len()
    }
}

impl RealSource for McfSource {
    fn dim(&self) -> usize {
        self.mcf.m()
    }

    fn enclosure(&self) -> Option<Vec<Interval>> {
        let m = self.mcf.m();
        if self.exhausted() {
            // Finite expansion: the value is exactly the first-column ratio.
            let den = self.prod.get(m, 0);
            if den.is_zero() {
                return None;
            }
            return Some(
                (0..m)
                    .map(|i| {
                        Interval::point(Rational::new(self.prod.get(i, 0).clone(), den.clone()))
                    })
                    .collect(),
            );
        }
        if !same_strict_sign(self.prod.row(m).iter()) {
            return None;
        }
        let mut hull = Vec::with_capacity(m);
        for i in 0..m {
            let mut lo: Option<Rational> = None;
            let mut hi: Option<Rational> = None;
            for j in 0..=m {
                let r = Rational::new(self.prod.get(i, j).clone(), self.prod.get(m, j).clone());
                if lo.as_ref().map_or(true, |v| &r < v) {
                    lo = Some(r.clone());
                }
                if hi.as_ref().map_or(true, |v| &r > v) {
                    hi = Some(r);
                }
            }
            hull.push(Interval::new(lo.unwrap(), hi.unwrap()));
        }
        Some(hull)
    }

    fn refine(&mut self) -> Result<()> {
        if self.exhausted() {
            return Err(Error::PrecisionExhausted {
                spent: self.budget.spent(),
                budget: self.budget.limit(),
            });
        }
        let batch = self.budget.batch()?;
        for _ in 0..batch {
            match self.mcf.step(self.taken) {
                Some(step) => {
                    self.prod = self.prod.mul(&input_matrix(step));
                    self.taken += 1;
                }
                None => break,
            }
        }
        Ok(())
    }
}

/// Linear fractional image `z ↦ C·z` of another source, where `C` is an
/// `(m+1)×(m+1)` integer matrix acting on homogeneous coordinates
/// `(z, 1)`: component `i` is `(Σ_j c_{i,j} z_j + c_{i,m+1}) / (Σ_j c_{m+1,j} z_j + c_{m+1,m+1})`.
///
/// Serves as the independent oracle for the Möbius transducer: the image is
/// computed by direct interval evaluation, never through the matrix state
/// machine.
pub struct MobiusImageSource {
    base: Box<dyn RealSource>,
    c: IntMatrix,
}

impl MobiusImageSource {
    /// Image of `base` under `c`; `c` must be `(m+1)×(m+1)` for the base's `m`.
    pub fn new(base: Box<dyn RealSource>, c: IntMatrix) -> Result<Self> {
        let m = base.dim();
        if c.rows() != m + 1 || c.cols() != m + 1 {
            return Err(Error::Dimension(format!(
                "möbius matrix must be {}x{} for an m = {m} source, got {}x{}",
                m + 1,
                m + 1,
                c.rows(),
                c.cols()
            )));
        }
        Ok(MobiusImageSource { base, c })
    }
}

impl RealSource for MobiusImageSource {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn enclosure(&self) -> Option<Vec<Interval>> {
        let enc = self.base.enclosure()?;
        let m = self.dim();
        let den = affine_form(self.c.row(m), &enc);
        if den.contains_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let num = affine_form(self.c.row(i), &enc);
            // Division cannot fail: the denominator is sign-definite.
            out.push(num.div(&den).expect("sign-definite denominator"));
        }
        Some(out)
    }

    fn refine(&mut self) -> Result<()> {
        self.base.refine()
    }
}

/// Evaluate the bilinear form with coefficient matrix `c` at homogeneous
/// interval vectors `xw`, `yw`: `Σ_{j,l} c_{j,l} · xw_j · yw_l`.
fn bilinear_form(c: &IntMatrix, xw: &[Interval], yw: &[Interval]) -> Interval {
    let mut acc = Interval::point(Rational::zero());
    for (j, xw_j) in xw.iter().enumerate() {
        // Row j contributes xw_j · (affine form of row j in yw).
        let row_val = affine_form_full(c.row(j), yw);
        acc = acc.add(&row_val.mul(xw_j));
    }
    acc
}

/// Affine form where the argument vector is already homogeneous
/// (`coeffs.len() == xs.len()`).
fn affine_form_full(coeffs: &[BigInt], xs: &[Interval]) -> Interval {
    assert_eq!(coeffs.len(), xs.len());
    let mut acc = Interval::point(Rational::zero());
    for (c, x) in coeffs.iter().zip(xs) {
        acc = acc.add(&x.scale_int(c));
    }
    acc
}

/// Bilinear image of two sources under a family of `m+1` coefficient
/// matrices `C^(1), …, C^(m+1)`: component `i` is
/// `B_i(x, y) / B_{m+1}(x, y)` with `B_k(x, y) = (x, 1)ᵀ · C^(k) · (y, 1)`.
///
/// The independent oracle for the bilinear transducer.
pub struct BilinearImageSource {
    x: Box<dyn RealSource>,
    y: Box<dyn RealSource>,
    forms: Vec<IntMatrix>,
}

impl BilinearImageSource {
    /// Image of `(x, y)` under `forms`; both sources must share a dimension
    /// `m` and the family must be `m+1` matrices of shape `(m+1)×(m+1)`.
    pub fn new(
        x: Box<dyn RealSource>,
        y: Box<dyn RealSource>,
        forms: Vec<IntMatrix>,
    ) -> Result<Self> {
        let m = x.dim();
        if y.dim() != m {
            return Err(Error::Dimension(format!(
                "operand dimensions differ: x has m = {m}, y has m = {}",
                y.dim()
            )));
        }
        if forms.len() != m + 1 {
            return Err(Error::Dimension(format!(
                "bilinear family must have m+1 = {} matrices, got {}",
                m + 1,
                forms.len()
            )));
        }
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
        Ok(BilinearImageSource { x, y, forms })
    }
}

impl RealSource for BilinearImageSource {
    fn dim(&self) -> usize {
        self.x.dim()
    }

    fn enclosure(&self) -> Option<Vec<Interval>> {
        let m = self.dim();
        let one = Interval::point(Rational::one());
        let mut xw = self.x.enclosure()?;
        xw.push(one.clone());
        let mut yw = self.y.enclosure()?;
        yw.push(one);
        let den = bilinear_form(&self.forms[m], &xw, &yw);
        if den.contains_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let num = bilinear_form(&self.forms[i], &xw, &yw);
            out.push(num.div(&den).expect("sign-definite denominator"));
        }
        Some(out)
    }

    fn refine(&mut self) -> Result<()> {
        // Tighten both operands; each carries its own budget.
        self.x.refine()?;
        self.y.refine()
    }
}
