//! Exact scalar arithmetic: big integers, rationals, and rational-endpoint
//! intervals.
//!
//! Everything downstream of this module is integer or rational arithmetic —
//! there is no floating point anywhere on a certified path. Real numbers
//! (cube roots, values of infinite expansions) are only ever handled through
//! [`Interval`] enclosures that are *refined on demand*: a query such as
//! "what is ⌊x⌋?" loops tightening the enclosure until the answer is certain
//! ([`interval_floor`]) and reports [`Error::PrecisionExhausted`] if a
//! [`PrecisionBudget`] runs out first. An answer is therefore always exact or
//! absent, never approximate.
//!
//! `BigInt` and `Rational` are the `num` family types; `Rational` values are
//! kept canonical (reduced, denominator positive) by construction.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational with canonical representation.
pub type Rational = num_rational::Ratio<BigInt>;

/// Default refinement budget, in bits of precision (halvings of interval
/// width), for operations that do not specify their own.
pub const DEFAULT_PRECISION_BITS: u64 = 4096;

/// Floor division rounding toward −∞, defined for any nonzero divisor.
///
/// `floor_div(7, 2) = 3`, `floor_div(-2, 3) = -1`, `floor_div(-6, -2) = 3`.
///
/// # Panics
///
/// Panics if `b` is zero; callers guard divisors (the engines' output guards
/// certify a strict sign before any division).
pub fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    assert!(!b.is_zero(), "floor_div: division by zero");
    a.div_floor(b)
}

/// Floor of a rational, as an integer.
pub fn rational_floor(q: &Rational) -> BigInt {
    q.numer().div_floor(q.denom())
}

/// Strict common sign of a sequence: `Some(Plus)` if every element is > 0,
/// `Some(Minus)` if every element is < 0, `None` otherwise (including any
/// zero and the empty sequence).
pub fn strict_sign<'a, I>(values: I) -> Option<Sign>
where
    I: IntoIterator<Item = &'a BigInt>,
{
    let mut sign = None;
    let mut any = false;
    for v in values {
        any = true;
        let s = v.sign();
        if s == Sign::NoSign {
            return None;
        }
        match sign {
            None => sign = Some(s),
            Some(prev) if prev != s => return None,
            Some(_) => {}
        }
    }
    if any {
        sign
    } else {
        None
    }
}

/// Whether every element of a sequence is nonzero and of one common sign.
pub fn same_strict_sign<'a, I>(values: I) -> bool
where
    I: IntoIterator<Item = &'a BigInt>,
{
    strict_sign(values).is_some()
}

/// Closed interval `[lo, hi]` with exact rational endpoints, `lo ≤ hi`.
///
/// A *point* interval (`lo == hi`) represents an exactly known rational.
/// Arithmetic is exact outward-free (no rounding happens at all), so
/// the image of interval operations is the exact hull of the pointwise image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    /// Interval from ordered endpoints.
    ///
    /// # Panics
    ///
    /// Panics if `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "Interval::new: lo > hi");
        Interval { lo, hi }
    }

    /// Degenerate interval `[q, q]`.
    pub fn point(q: Rational) -> Self {
        Interval {
            lo: q.clone(),
            hi: q,
        }
    }

    /// Point interval at an integer.
    pub fn from_int(n: BigInt) -> Self {
        Self::point(Rational::from_integer(n))
    }

    /// Lower endpoint.
    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    /// Upper endpoint.
    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    /// Exact width `hi − lo`.
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Whether the interval is a single rational.
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Whether the interval is exactly `[0, 0]`.
    pub fn is_zero_point(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    /// Whether `q ∈ [lo, hi]`.
    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    /// Whether the interval contains zero.
    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Whether every element is > 0.
    pub fn strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Whether every element is < 0.
    pub fn strictly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// `[−hi, −lo]`.
    pub fn neg(&self) -> Self {
        Interval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    /// Exact sum.
    pub fn add(&self, other: &Self) -> Self {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    /// Exact difference.
    pub fn sub(&self, other: &Self) -> Self {
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    /// Exact product (hull of the four endpoint products).
    pub fn mul(&self, other: &Self) -> Self {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = products[0].clone();
        let mut hi = products[0].clone();
        for p in &products[1..] {
            if p < &lo {
                lo = p.clone();
            }
            if p > &hi {
                hi = p.clone();
            }
        }
        Interval { lo, hi }
    }

    /// Scale by an exact rational.
    pub fn scale(&self, c: &Rational) -> Self {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// Scale by an exact integer.
    pub fn scale_int(&self, c: &BigInt) -> Self {
        self.scale(&Rational::from_integer(c.clone()))
    }

    /// Exact range of `x²` over the interval (tighter than `mul(self, self)`
    /// when the interval straddles zero).
    pub fn square(&self) -> Self {
        let lo2 = &self.lo * &self.lo;
        let hi2 = &self.hi * &self.hi;
        if self.contains_zero() {
            Interval {
                lo: Rational::zero(),
                hi: lo2.max(hi2),
            }
        } else {
            let (a, b) = if lo2 <= hi2 { (lo2, hi2) } else { (hi2, lo2) };
            Interval { lo: a, hi: b }
        }
    }

    /// Exact quotient. Fails with [`Error::Indeterminate`] whenever the
    /// divisor interval contains zero (callers refine and retry; an exact
    /// `[0, 0]` divisor is detected separately with
    /// [`Interval::is_zero_point`] where it means termination).
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.contains_zero() {
            return Err(Error::Indeterminate);
        }
        let quotients = [
            &self.lo / &other.lo,
            &self.lo / &other.hi,
            &self.hi / &other.lo,
            &self.hi / &other.hi,
        ];
        let mut lo = quotients[0].clone();
        let mut hi = quotients[0].clone();
        for q in &quotients[1..] {
            if q < &lo {
                lo = q.clone();
            }
            if q > &hi {
                hi = q.clone();
            }
        }
        Ok(Interval { lo, hi })
    }

    /// Floor of the interval, if it is the same at both endpoints
    /// (equivalently: if ⌊x⌋ has a single value over the whole interval).
    pub fn certain_floor(&self) -> Option<BigInt> {
        let flo = rational_floor(&self.lo);
        let fhi = rational_floor(&self.hi);
        if flo == fhi {
            Some(flo)
        } else {
            None
        }
    }
}

/// Evaluate the affine form `c₀·x₀ + … + c_{n−1}·x_{n−1} + c_n` exactly over
/// interval arguments. `coeffs.len()` must equal `xs.len() + 1`; the last
/// coefficient is the constant term (the homogeneous coordinate of the input
/// vector is 1).
pub fn affine_form(coeffs: &[BigInt], xs: &[Interval]) -> Interval {
    assert_eq!(coeffs.len(), xs.len() + 1, "affine_form: arity mismatch");
    let mut acc = Interval::from_int(coeffs[xs.len()].clone());
    for (c, x) in coeffs.iter().zip(xs) {
        acc = acc.add(&x.scale_int(c));
    }
    acc
}

/// Refinement budget measured in bits (one bit = one halving of enclosure
/// width, or one absorbed expansion step for discrete sources).
///
/// [`PrecisionBudget::batch`] hands out geometrically growing work quanta —
/// 8, 16, 32, … bits — so that refinement loops converge in O(log budget)
/// round trips; once the budget is exhausted it fails with
/// [`Error::PrecisionExhausted`] carrying the tally.
#[derive(Debug, Clone)]
pub struct PrecisionBudget {
    limit: u64,
    spent: u64,
    next: u64,
}

impl PrecisionBudget {
    /// Budget of `limit` bits.
    pub fn new(limit: u64) -> Self {
        PrecisionBudget {
            limit,
            spent: 0,
            next: 8,
        }
    }

    /// Bits spent so far.
    pub fn spent(&self) -> u64 {
        self.spent
    }

    /// Total budget.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Reserve the next work quantum: doubles on each call, is clipped to the
    /// remaining budget, and errs once nothing remains.
    pub fn batch(&mut self) -> Result<u64> {
        let remaining = self.limit.saturating_sub(self.spent);
        if remaining == 0 {
            return Err(Error::PrecisionExhausted {
                spent: self.spent,
                budget: self.limit,
            });
        }
        let take = self.next.min(remaining);
        self.spent += take;
        self.next = self.next.saturating_mul(2);
        Ok(take)
    }

    /// Reserve exactly `bits`, failing if they exceed the remainder.
    pub fn charge(&mut self, bits: u64) -> Result<()> {
        if self.limit.saturating_sub(self.spent) < bits {
            return Err(Error::PrecisionExhausted {
                spent: self.spent,
                budget: self.limit,
            });
        }
        self.spent += bits;
        Ok(())
    }
}

impl Default for PrecisionBudget {
    fn default() -> Self {
        Self::new(DEFAULT_PRECISION_BITS)
    }
}

/// Floor of a real number known only through a refinable enclosure.
///
/// Starts from `x` and calls `refine` for successively tighter enclosures
/// until the floor is the same at both endpoints. `refine` is responsible for
/// its own budget and fails with [`Error::PrecisionExhausted`] when it can no
/// longer tighten; that error propagates, so the returned floor is always
/// certified.
pub fn interval_floor<F>(x: Interval, mut refine: F) -> Result<BigInt>
where
    F: FnMut() -> Result<Interval>,
{
    let mut cur = x;
    loop {
        if let Some(f) = cur.certain_floor() {
            return Ok(f);
        }
        cur = refine()?;
    }
}

/// Largest integer `r ≥ 0` with `rᵏ ≤ n`, by Newton iteration on integers.
///
/// # Panics
///
/// Panics if `n < 0` or `k == 0`.
pub fn int_root(n: &BigInt, k: u32) -> BigInt {
    assert!(k > 0, "int_root: zeroth root");
    assert!(!n.is_negative(), "int_root: negative radicand");
    if n.is_zero() || n.is_one() {
        return n.clone();
    }
    let kb = BigInt::from(k);
    let km1 = BigInt::from(k - 1);
    // Initial overestimate: 2^{ceil(bits/k)} ≥ n^{1/k}.
    let bits = n.bits();
    let mut x = BigInt::one() << bits.div_ceil(u64::from(k)).max(1);
    loop {
        // Newton: x ← ((k−1)·x + n / x^{k−1}) / k, monotone decreasing from above.
        let next = (&km1 * &x + n / x.pow(k - 1)).div_floor(&kb);
        if next >= x {
            return x;
        }
        x = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn rat(p: i64, q: i64) -> Rational {
        Rational::new(int(p), int(q))
    }

    #[test]
    fn floor_div_rounds_toward_negative_infinity() {
        assert_eq!(floor_div(&int(7), &int(2)), int(3));
        assert_eq!(floor_div(&int(-2), &int(3)), int(-1));
        assert_eq!(floor_div(&int(-6), &int(-2)), int(3));
        assert_eq!(floor_div(&int(-7), &int(2)), int(-4));
        assert_eq!(floor_div(&int(0), &int(-5)), int(0));
    }

    #[test]
    #[should_panic(expected = "division by zero")]
    fn floor_div_rejects_zero_divisor() {
        floor_div(&int(1), &int(0));
    }

    #[test]
    fn rationals_are_canonical() {
        let q = rat(4, -6);
        assert_eq!(q.numer(), &int(-2));
        assert_eq!(q.denom(), &int(3));
        assert_eq!(rat(2, 4), rat(1, 2));
    }

    #[test]
    fn strict_sign_detects_common_signs() {
        assert_eq!(strict_sign([int(1), int(3)].iter()), Some(Sign::Plus));
        assert_eq!(strict_sign([int(-1), int(-9)].iter()), Some(Sign::Minus));
        assert_eq!(strict_sign([int(1), int(-1)].iter()), None);
        assert_eq!(strict_sign([int(1), int(0)].iter()), None);
        assert_eq!(strict_sign([].iter()), None);
        assert!(same_strict_sign([int(2), int(5), int(1)].iter()));
        assert!(!same_strict_sign([int(2), int(0)].iter()));
    }

    #[test]
    fn interval_arithmetic_is_exact_hull() {
        let a = Interval::new(rat(1, 2), rat(3, 2));
        let b = Interval::new(rat(-1, 3), rat(1, 3));
        let s = a.add(&b);
        assert_eq!(s.lo(), &rat(1, 6));
        assert_eq!(s.hi(), &rat(11, 6));
        let p = a.mul(&b);
        assert_eq!(p.lo(), &rat(-1, 2));
        assert_eq!(p.hi(), &rat(1, 2));
        let d = a.sub(&b);
        assert_eq!(d.lo(), &rat(1, 6));
        assert_eq!(d.hi(), &rat(11, 6));
    }

    #[test]
    fn interval_division_needs_sign_definite_divisor() {
        let num = Interval::new(rat(1, 1), rat(2, 1));
        let den = Interval::new(rat(-1, 4), rat(1, 4));
        assert!(matches!(num.div(&den), Err(Error::Indeterminate)));
        let den = Interval::new(rat(1, 4), rat(1, 2));
        let q = num.div(&den).unwrap();
        assert_eq!(q.lo(), &rat(2, 1));
        assert_eq!(q.hi(), &rat(8, 1));
        let den = Interval::new(rat(-1, 2), rat(-1, 4));
        let q = num.div(&den).unwrap();
        assert_eq!(q.lo(), &rat(-8, 1));
        assert_eq!(q.hi(), &rat(-2, 1));
    }

    #[test]
    fn square_is_tight_across_zero() {
        let x = Interval::new(rat(-1, 1), rat(2, 1));
        let s = x.square();
        assert_eq!(s.lo(), &rat(0, 1));
        assert_eq!(s.hi(), &rat(4, 1));
        let y = Interval::new(rat(-3, 1), rat(-2, 1));
        let s = y.square();
        assert_eq!(s.lo(), &rat(4, 1));
        assert_eq!(s.hi(), &rat(9, 1));
    }

    #[test]
    fn affine_form_matches_hand_evaluation() {
        // 2x − 3y + 5 over x ∈ [0,1], y ∈ [1,2]  ⇒  [2·0 − 3·2 + 5, 2·1 − 3·1 + 5] = [−1, 4].
        let coeffs = [int(2), int(-3), int(5)];
        let xs = [
            Interval::new(rat(0, 1), rat(1, 1)),
            Interval::new(rat(1, 1), rat(2, 1)),
        ];
        let v = affine_form(&coeffs, &xs);
        assert_eq!(v.lo(), &rat(-1, 1));
        assert_eq!(v.hi(), &rat(4, 1));
    }

    #[test]
    fn certain_floor_requires_agreement() {
        assert_eq!(
            Interval::new(rat(7, 3), rat(5, 2)).certain_floor(),
            Some(int(2))
        );
        assert_eq!(Interval::new(rat(5, 3), rat(7, 3)).certain_floor(), None);
        // Integer endpoints: [2, 2] is certain, [1.9, 2.1] is not.
        assert_eq!(Interval::point(rat(2, 1)).certain_floor(), Some(int(2)));
        assert_eq!(
            Interval::new(rat(19, 10), rat(21, 10)).certain_floor(),
            None
        );
        // Negative side rounds toward −∞.
        assert_eq!(
            Interval::new(rat(-5, 2), rat(-7, 3)).certain_floor(),
            Some(int(-3))
        );
    }

    #[test]
    fn interval_floor_refines_until_certain() {
        // Enclose 7/3 with width 1 (floor ambiguous), then refine by halving.
        let mut shrink = 1;
        let target = rat(7, 3);
        let encl = |k: i64| {
            let w = rat(1, k);
            Interval::new(&target - &w, &target + &w)
        };
        let f = interval_floor(encl(1), || {
            shrink *= 2;
            Ok(encl(shrink))
        })
        .unwrap();
        assert_eq!(f, int(2));
    }

    #[test]
    fn interval_floor_surfaces_budget_exhaustion() {
        let mut budget = PrecisionBudget::new(16);
        // The enclosure never tightens, so the budget must run out.
        let x = Interval::new(rat(0, 1), rat(1, 1));
        let err = interval_floor(x.clone(), || {
            budget.batch()?;
            Ok(x.clone())
        })
        .unwrap_err();
        assert!(matches!(err, Error::PrecisionExhausted { .. }));
    }

    #[test]
    fn budget_batches_double_and_cap() {
        let mut b = PrecisionBudget::new(30);
        assert_eq!(b.batch().unwrap(), 8);
        assert_eq!(b.batch().unwrap(), 16);
        assert_eq!(b.batch().unwrap(), 6); // clipped to the remainder
        assert!(b.batch().is_err());
        assert_eq!(b.spent(), 30);
    }

    #[test]
    fn int_root_exact_and_floor() {
        assert_eq!(int_root(&int(27), 3), int(3));
        assert_eq!(int_root(&int(26), 3), int(2));
        assert_eq!(int_root(&int(28), 3), int(3));
        assert_eq!(int_root(&int(1_000_000), 2), int(1000));
        assert_eq!(int_root(&int(999_999), 2), int(999));
        assert_eq!(int_root(&int(0), 5), int(0));
        assert_eq!(int_root(&int(1), 7), int(1));
        let big = BigInt::from(12345u32).pow(3);
        assert_eq!(int_root(&big, 3), int(12345));
        assert_eq!(int_root(&(big - 1), 3), int(12344));
    }
}
