//! Order-spec files: JSON with exact entries only.
//!
//! ```json
//! { "name": "da3", "algebra": { "a": -1, "b": -3 },
//!   "basis": [["1","0","0","0"], ["0","1","0","0"], ["1/2","0","1/2","0"], ["0","1/2","0","1/2"]] }
//! ```
//!
//! Basis entries are integers or `"p/q"` strings; JSON floats are refused so
//! that nothing inexact reaches the lattice code.

use std::path::Path;

use heis_mertens_core::{Algebra, Order, Quaternion, Q};
use serde_json::Value;

use crate::parse_rational;

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}: floating-point values are not accepted, write \"p/q\"")]
    Float(String),
    #[error("{0}: expected an integer or a \"p/q\" string")]
    NotExact(String),
    #[error("{0}")]
    Shape(String),
    #[error("rejected order: {0}")]
    Order(#[from] heis_mertens_core::Error),
}

fn exact(v: &Value, at: &str) -> Result<Q, SpecError> {
    match v {
        Value::Number(n) if n.is_i64() => Ok(Q::from_integer(n.as_i64().unwrap().into())),
        Value::Number(_) => Err(SpecError::Float(at.into())),
        Value::String(s) if !s.contains('.') => parse_rational(s).ok_or_else(|| SpecError::NotExact(at.into())),
        Value::String(_) => Err(SpecError::Float(at.into())),
        _ => Err(SpecError::NotExact(at.into())),
    }
}

fn integer(v: &Value, at: &str) -> Result<i64, SpecError> {
    let q = exact(v, at)?;
    if !q.is_integer() {
        return Err(SpecError::NotExact(at.into()));
    }
    num_traits::ToPrimitive::to_i64(q.numer()).ok_or_else(|| SpecError::NotExact(at.into()))
}

/// Parse and validate an order from JSON text.
pub fn parse_order_json(text: &str) -> Result<Order, SpecError> {
    let v: Value = serde_json::from_str(text)?;
    let name = v.get("name").and_then(Value::as_str).unwrap_or("custom");
    let alg = v.get("algebra").ok_or_else(|| SpecError::Shape("missing \"algebra\"".into()))?;
    let a = integer(alg.get("a").unwrap_or(&Value::Null), "algebra.a")?;
    let b = integer(alg.get("b").unwrap_or(&Value::Null), "algebra.b")?;
    let rows = v
        .get("basis")
        .and_then(Value::as_array)
        .filter(|r| r.len() == 4)
        .ok_or_else(|| SpecError::Shape("\"basis\" must be a list of 4 rows".into()))?;
    let mut basis = Vec::with_capacity(4);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == 4)
            .ok_or_else(|| SpecError::Shape(format!("basis[{i}] must have 4 entries")))?;
        let x: Vec<Q> =
            row.iter().enumerate().map(|(j, e)| exact(e, &format!("basis[{i}][{j}]"))).collect::<Result<_, _>>()?;
        basis.push(Quaternion::new(x[0].clone(), x[1].clone(), x[2].clone(), x[3].clone()));
    }
    let basis: [Quaternion<Q>; 4] = basis.try_into().expect("four rows");
    Ok(Order::new(name, Algebra::new(a, b)?, basis)?)
}

/// A builtin name (`hurwitz`, `da3`) or a path to an order-spec file.
pub fn load_order(spec: &str) -> Result<Order, SpecError> {
    if let Some(o) = Order::builtin(spec) {
        return Ok(o);
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io { path: spec.into(), source })?;
    parse_order_json(&text)
}

/// Stable text describing the order, for cache keys.
pub fn fingerprint_text(order: &Order) -> String {
    let mut s = format!("{};{};", order.algebra.a, order.algebra.b);
    for b in &order.basis {
        for x in &b.x {
            s.push_str(&crate::rational_string(x));
            s.push(',');
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const DA3: &str = include_str!("../../../orders/da3.json");

    #[test]
    fn shipped_file_matches_builtin() {
        let o = parse_order_json(DA3).unwrap();
        let b = Order::da3();
        assert_eq!(o.basis, b.basis);
        assert_eq!(o.units().len(), 12);
        assert_eq!(fingerprint_text(&o), fingerprint_text(&b));
    }

    #[test]
    fn floats_are_refused() {
        let t = DA3.replace("\"1/2\", \"0\", \"1/2\"", "0.5, \"0\", \"1/2\"");
        assert!(matches!(parse_order_json(&t), Err(SpecError::Float(_))));
        let t = DA3.replace("\"1/2\", \"0\", \"1/2\"", "\"0.5\", \"0\", \"1/2\"");
        assert!(matches!(parse_order_json(&t), Err(SpecError::Float(_))));
        let t = DA3.replace("-3", "-3.0");
        assert!(matches!(parse_order_json(&t), Err(SpecError::Float(_))));
    }

    #[test]
    fn bad_orders_are_refused() {
        let lipschitz = r#"{"algebra":{"a":-1,"b":-1},"basis":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#;
        assert!(matches!(parse_order_json(lipschitz), Err(SpecError::Order(_))));
        assert!(matches!(parse_order_json("{"), Err(SpecError::Json(_))));
        assert!(matches!(parse_order_json(r#"{"algebra":{"a":-1,"b":-1},"basis":[]}"#), Err(SpecError::Shape(_))));
        assert!(matches!(load_order("/nonexistent/order.json"), Err(SpecError::Io { .. })));
        assert_eq!(load_order("hurwitz").unwrap().name, "hurwitz");
    }
}
