//! Canonical JSON reports: object keys sorted, arrays in index order, only
//! integers, booleans and strings. Integers beyond `2^53 − 1` are written as
//! decimal strings.

use num_bigint::BigUint;
use serde_json::{json, Map, Value};

pub const MAX_SAFE_INTEGER: u64 = (1 << 53) - 1;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub name: String,
    pub config: Value,
    pub verdicts: Vec<(String, bool)>,
    pub data: Value,
    pub witnesses: Vec<Value>,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|(_, ok)| *ok)
    }

    pub fn to_value(&self) -> Value {
        let verdicts: Map<String, Value> = self.verdicts.iter().map(|(k, v)| (k.clone(), Value::Bool(*v))).collect();
        json!({
            "name": self.name,
            "config": self.config,
            "passed": self.passed(),
            "verdicts": verdicts,
            "data": self.data,
            "witnesses": self.witnesses,
        })
    }
}

pub fn int(v: u64) -> Value {
    if v <= MAX_SAFE_INTEGER {
        Value::from(v)
    } else {
        Value::String(v.to_string())
    }
}

pub fn signed(v: i64) -> Value {
    if v.unsigned_abs() <= MAX_SAFE_INTEGER {
        Value::from(v)
    } else {
        Value::String(v.to_string())
    }
}

pub fn big(v: &BigUint) -> Value {
    match u64::try_from(v) {
        Ok(small) => int(small),
        Err(_) => Value::String(v.to_string()),
    }
}

pub fn ints<T: Copy + Into<u64>>(vs: &[T]) -> Value {
    Value::Array(vs.iter().map(|&v| int(v.into())).collect())
}

pub fn usizes(vs: &[usize]) -> Value {
    Value::Array(vs.iter().map(|&v| int(v as u64)).collect())
}

/// `{"experiments":[…]}` as bytes; identical inputs give identical bytes.
pub fn emit_report(results: &[ExperimentReport]) -> Vec<u8> {
    let doc = json!({ "experiments": results.iter().map(ExperimentReport::to_value).collect::<Vec<_>>() });
    serde_json::to_vec(&doc).expect("JSON values always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report() {
        assert_eq!(emit_report(&[]), br#"{"experiments":[]}"#);
    }

    #[test]
    fn large_integers_become_strings() {
        assert_eq!(int(MAX_SAFE_INTEGER), json!(9007199254740991u64));
        assert_eq!(int(MAX_SAFE_INTEGER + 1), json!("9007199254740992"));
        assert_eq!(big(&(BigUint::from(1u32) << 129)), json!("680564733841876926926749214863536422912"));
        assert_eq!(signed(-5), json!(-5));
    }

    #[test]
    fn keys_are_sorted() {
        let r = ExperimentReport {
            name: "x".into(),
            config: json!({"zeta": 1, "alpha": 2}),
            verdicts: vec![("b".into(), true), ("a".into(), false)],
            data: json!({}),
            witnesses: vec![],
        };
        let text = String::from_utf8(emit_report(&[r])).unwrap();
        assert_eq!(
            text,
            r#"{"experiments":[{"config":{"alpha":2,"zeta":1},"data":{},"name":"x","passed":false,"verdicts":{"a":false,"b":true},"witnesses":[]}]}"#
        );
    }
}
