//! Dense matrices over `BigInt`.
//!
//! The state of every transducer in this crate is a small square integer
//! matrix (or a family of them), so this module stays deliberately minimal:
//! row-major storage, exact multiplication, transpose, and a fraction-free
//! determinant (Bareiss elimination — every intermediate division is exact,
//! so the result is the exact integer determinant at any size).

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Row-major matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    /// Matrix from row-major data; `data.len()` must equal `rows·cols`.
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "matrix {}x{} needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// Matrix from nested rows of machine integers (test and builder helper).
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        assert!(r > 0, "from_rows: empty");
        let c = rows[0].len();
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "from_rows: ragged rows");
            data.extend(row.iter().map(|&v| BigInt::from(v)));
        }
        IntMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    /// The `n × n` identity.
    pub fn identity(n: usize) -> Self {
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigInt::from(1);
        }
        IntMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    /// The all-zero `rows × cols` matrix.
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Whether the matrix is square.
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at `(i, j)` (zero-based).
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    /// Overwrite entry at `(i, j)`.
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Column `j`, cloned.
    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// All entries in row-major order.
    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    /// Whether every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Exact product `self · other`.
    ///
    /// # Panics
    ///
    /// Panics on inner-dimension mismatch; all callers multiply shapes fixed
    /// at construction time.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "mul: inner dimension mismatch");
        let mut data = vec![BigInt::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        IntMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    /// Matrix–vector product `self · v`.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "mul_vec: dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Transpose.
    pub fn transpose(&self) -> IntMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// `self − k·other`, entrywise.
    pub fn sub_scaled(&self, k: &BigInt, other: &IntMatrix) -> IntMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "sub_scaled: shape mismatch"
        );
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - k * b)
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Negate every entry in place.
    pub fn negate(&mut self) {
        for e in &mut self.data {
            let v = std::mem::take(e);
            *e = -v;
        }
    }

    /// Exact determinant by fraction-free Bareiss elimination with row
    /// pivoting (each internal division is exact).
    ///
    /// # Panics
    ///
    /// Panics if the matrix is not square.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "det: non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let at = |a: &[BigInt], i: usize, j: usize| a[i * n + j].clone();
        let mut sign = BigInt::from(1);
        let mut prev = BigInt::from(1);
        for k in 0..n.saturating_sub(1) {
            if a[k * n + k].is_zero() {
                // Find a nonzero pivot below; none ⇒ singular.
                let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = at(&a, i, j) * at(&a, k, k) - at(&a, i, k) * at(&a, k, j);
                    a[i * n + j] = num / &prev; // exact by Bareiss invariant
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = at(&a, k, k);
        }
        sign * at(&a, n - 1, n - 1)
    }

    /// Bit length of the largest entry magnitude (0 for the zero matrix).
    pub fn max_entry_bits(&self) -> u64 {
        self.data.iter().map(|e| e.abs().bits()).max().unwrap_or(0)
    }
}

impl std::fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
