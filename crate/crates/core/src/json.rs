//! JSON conventions for exact integers: a number when the value fits in an
//! `i64`, a decimal string otherwise. Parsing accepts either form.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

pub trait BigJson {
    fn to_json(&self) -> Value;
}

impl BigJson for BigInt {
    fn to_json(&self) -> Value {
        match self.to_i64() {
            Some(x) => Value::from(x),
            None => Value::String(self.to_string()),
        }
    }
}

impl<T: BigJson> BigJson for Vec<T> {
    fn to_json(&self) -> Value {
        self.as_slice().to_json()
    }
}

impl<T: BigJson> BigJson for [T] {
    fn to_json(&self) -> Value {
        Value::Array(self.iter().map(BigJson::to_json).collect())
    }
}

impl<T: BigJson, const N: usize> BigJson for [T; N] {
    fn to_json(&self) -> Value {
        self.as_slice().to_json()
    }
}

impl<A: BigJson, B: BigJson> BigJson for (A, B) {
    fn to_json(&self) -> Value {
        Value::Array(vec![self.0.to_json(), self.1.to_json()])
    }
}

impl<T: BigJson> BigJson for Option<T> {
    fn to_json(&self) -> Value {
        self.as_ref().map_or(Value::Null, BigJson::to_json)
    }
}

impl BigJson for IntMatrix {
    fn to_json(&self) -> Value {
        self.to_rows().to_json()
    }
}

/// For `#[serde(serialize_with = "...")]`.
pub fn ser<T: BigJson + ?Sized, S: Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    x.to_json().serialize(s)
}

pub fn parse_big(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        Value::String(s) => s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        other => Err(Error::Parse(format!("expected an integer, got {other}"))),
    }
}

pub fn parse_vector(v: &Value) -> Result<Vec<BigInt>> {
    match v {
        Value::Array(xs) => xs.iter().map(parse_big).collect(),
        other => Err(Error::Parse(format!("expected an integer array, got {other}"))),
    }
}

/// A matrix as an array of equal-length rows.
pub fn parse_matrix(v: &Value) -> Result<IntMatrix> {
    let Value::Array(rows) = v else {
        return Err(Error::Parse(format!("expected an array of rows, got {v}")));
    };
    let rows = rows.iter().map(parse_vector).collect::<Result<Vec<_>>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse("rows have different lengths".into()));
    }
    IntMatrix::from_rows(&rows, cols)
}

pub fn parse_vector_str(s: &str) -> Result<Vec<BigInt>> {
    parse_vector(&serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?)
}

pub fn parse_matrix_str(s: &str) -> Result<IntMatrix> {
    parse_matrix(&serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?)
}

/// For `#[serde(deserialize_with = "...")]`.
pub fn de_big<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
    parse_big(&Value::deserialize(d)?).map_err(serde::de::Error::custom)
}

pub fn de_vector<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
    parse_vector(&Value::deserialize(d)?).map_err(serde::de::Error::custom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_and_large() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let v = vec![BigInt::from(-3), big.clone()];
        let j = v.to_json();
        assert_eq!(j.to_string(), r#"[-3,"123456789012345678901234567890"]"#);
        assert_eq!(parse_vector(&j).unwrap(), v);
    }

    #[test]
    fn matrix_round_trip() {
        let m = IntMatrix::from_i64(&[&[1, 2], &[3, -4]]);
        assert_eq!(parse_matrix(&m.to_json()).unwrap(), m);
        assert!(parse_matrix_str("[[1,2],[3]]").is_err());
        assert!(parse_vector_str("[1.5]").is_err());
    }
}
