//! Small helpers over `serde_json::Value` for exact decimal I/O.

use std::str::FromStr;

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::num::Fixed;

pub(crate) fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string()))
}

pub(crate) fn as_object<'a>(v: &'a Value, ctx: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::parse(ctx, "expected an object"))
}

pub(crate) fn field<'a>(obj: &'a Map<String, Value>, key: &str, ctx: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::parse(format!("{ctx}.{key}"), "missing field"))
}

/// Accepts a JSON number or a decimal string; both are read exactly.
pub(crate) fn fixed(v: &Value, ctx: &str) -> Result<Fixed> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(Error::parse(ctx, "expected a number")),
    };
    Fixed::parse(&text).map_err(|source| Error::Number { context: ctx.to_string(), source })
}

/// Renders with exactly nine fractional digits.
pub(crate) fn number(v: Fixed) -> Value {
    Value::Number(Number::from_str(&v.to_string()).expect("fixed-point literal is valid JSON"))
}

pub(crate) fn object<const N: usize>(entries: [(&str, Value); N]) -> Value {
    Value::Object(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}
