//! JSON wire helpers for arbitrary-precision values.
//!
//! Integers that fit in `i64` are written as JSON numbers; anything larger is
//! written as a decimal string so that no consumer ever sees a rounded
//! number. Readers accept both forms at any magnitude.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Encode a big integer as a JSON number when it fits in `i64`, else as a
/// decimal string.
pub fn bigint_to_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

/// Decode a big integer from a JSON number or decimal string.
pub fn bigint_from_value(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(Error::Json(format!(
                    "non-integer number {n} where integer expected"
                )))
            }
        }
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Json(format!("malformed integer string {s:?}"))),
        other => Err(Error::Json(format!("expected integer, got {other}"))),
    }
}

/// Encode a vector of big integers.
pub fn bigint_vec_to_value(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(bigint_to_value).collect())
}

/// Decode a vector of big integers.
pub fn bigint_vec_from_value(v: &Value) -> Result<Vec<BigInt>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Json(format!("expected array of integers, got {v}")))?;
    arr.iter().map(bigint_from_value).collect()
}

/// Encode a matrix as nested row-major arrays.
pub fn matrix_to_value(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| bigint_vec_to_value(m.row(i)))
            .collect(),
    )
}

/// Decode a matrix from nested row-major arrays (all rows of one length).
pub fn matrix_from_value(v: &Value) -> Result<IntMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Json(format!("expected matrix (array of rows), got {v}")))?;
    if rows.is_empty() {
        return Err(Error::Json("matrix must have at least one row".into()));
    }
    let parsed: Vec<Vec<BigInt>> = rows
        .iter()
        .map(bigint_vec_from_value)
        .collect::<Result<_>>()?;
    let cols = parsed[0].len();
    if cols == 0 || parsed.iter().any(|r| r.len() != cols) {
        return Err(Error::Json(
            "matrix rows must be nonempty and of equal length".into(),
        ));
    }
    let data = parsed.into_iter().flatten().collect();
    IntMatrix::new(rows.len(), cols, data)
}

/// Encode a family of matrices (bilinear coefficient forms) as an array of
/// row-major matrices.
pub fn forms_to_value(forms: &[IntMatrix]) -> Value {
    Value::Array(forms.iter().map(matrix_to_value).collect())
}

/// Decode a family of matrices.
pub fn forms_from_value(v: &Value) -> Result<Vec<IntMatrix>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Json(format!("expected array of matrices, got {v}")))?;
    arr.iter().map(matrix_from_value).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_integers_round_trip_as_numbers() {
        let n = BigInt::from(-42);
        let v = bigint_to_value(&n);
        assert_eq!(v, json!(-42));
        assert_eq!(bigint_from_value(&v).unwrap(), n);
    }

    #[test]
    fn huge_integers_round_trip_as_strings() {
        let n: BigInt = "123456789012345678901234567890".parse().unwrap();
        let v = bigint_to_value(&n);
        assert_eq!(v, json!("123456789012345678901234567890"));
        assert_eq!(bigint_from_value(&v).unwrap(), n);
        // Strings are accepted for small values too.
        assert_eq!(bigint_from_value(&json!("-7")).unwrap(), BigInt::from(-7));
    }

    #[test]
    fn rejects_non_integers() {
        assert!(bigint_from_value(&json!(1.5)).is_err());
        assert!(bigint_from_value(&json!("12x")).is_err());
        assert!(bigint_from_value(&json!(true)).is_err());
    }

    #[test]
    fn matrix_round_trip() {
        let m = IntMatrix::from_rows(&[vec![1, -2, 3], vec![0, 5, -6], vec![7, 0, 1]]);
        let v = matrix_to_value(&m);
        assert_eq!(matrix_from_value(&v).unwrap(), m);
    }

    #[test]
    fn matrix_shape_errors() {
        assert!(matrix_from_value(&json!([[1, 2], [3]])).is_err());
        assert!(matrix_from_value(&json!([])).is_err());
        assert!(matrix_from_value(&json!([[]])).is_err());
        assert!(matrix_from_value(&json!(3)).is_err());
    }
}
