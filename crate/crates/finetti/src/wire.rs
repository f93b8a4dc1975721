//! File formats: the model JSON schema and the moments CSV.
//!
//! Model files are JSON objects tagged by `"type"`:
//!
//! ```json
//! {"type":"mixture","alphabet_size":2,
//!  "components":[{"weight":"1/2","probs":["1/5","4/5"]},
//!                {"weight":"1/2","probs":["4/5","1/5"]}]}
//! {"type":"polya","counts":[1,1]}
//! {"type":"joint_table","alphabet_size":2,"horizon":2,
//!  "probs":{"10":"2/5","01":"1/10","00":"1/4","11":"1/4"}}
//! ```
//!
//! Rationals travel as strings, either `"num/den"` or a decimal literal
//! (converted exactly). Joint-table keys are digit strings for alphabets of
//! size at most 10 and comma-joined integers otherwise. Events serialize as
//! sorted integer arrays. The moments CSV has header `order,value`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::measures::{Alphabet, Dist, Event};
use crate::models::{FiniteMixture, JointTable, Model, PolyaUrn};
use crate::rational::{self, Rational};

fn parse_err(message: impl Into<String>) -> Error {
    Error::Parse(message.into())
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| parse_err(format!("{what} must be a nonnegative integer")))
}

fn as_rational(v: &Value, what: &str) -> Result<Rational> {
    match v {
        Value::String(s) => rational::parse(s),
        Value::Number(n) if n.is_u64() || n.is_i64() => rational::parse(&n.to_string()),
        _ => Err(parse_err(format!("{what} must be a rational string"))),
    }
}

/// Parses a model from its JSON text.
pub fn model_from_str(text: &str) -> Result<Model> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| parse_err(format!("invalid JSON: {e}")))?;
    model_from_json(&value)
}

/// Reads a model file.
pub fn load_model(path: &std::path::Path) -> Result<Model> {
    model_from_str(&std::fs::read_to_string(path)?)
}

/// Parses a model from a JSON value.
pub fn model_from_json(value: &Value) -> Result<Model> {
    let obj = value
        .as_object()
        .ok_or_else(|| parse_err("model must be a JSON object"))?;
    let kind = field(obj, "type")?
        .as_str()
        .ok_or_else(|| parse_err("\"type\" must be a string"))?;
    match kind {
        "mixture" => {
            let size = as_usize(field(obj, "alphabet_size")?, "alphabet_size")?;
            let components = field(obj, "components")?
                .as_array()
                .ok_or_else(|| parse_err("\"components\" must be an array"))?;
            let mut parsed = Vec::with_capacity(components.len());
            for c in components {
                let c = c
                    .as_object()
                    .ok_or_else(|| parse_err("component must be an object"))?;
                let weight = as_rational(field(c, "weight")?, "weight")?;
                let probs = field(c, "probs")?
                    .as_array()
                    .ok_or_else(|| parse_err("\"probs\" must be an array"))?;
                if probs.len() != size {
                    return Err(parse_err(format!(
                        "component has {} probabilities, alphabet_size is {size}",
                        probs.len()
                    )));
                }
                let probs: Vec<Rational> = probs
                    .iter()
                    .map(|p| as_rational(p, "prob"))
                    .collect::<Result<_>>()?;
                parsed.push((weight, Dist::new(probs)?));
            }
            Ok(Model::Mixture(FiniteMixture::new(parsed)?))
        }
        "polya" => {
            let counts = field(obj, "counts")?
                .as_array()
                .ok_or_else(|| parse_err("\"counts\" must be an array"))?
                .iter()
                .map(|c| {
                    c.as_u64()
                        .ok_or_else(|| parse_err("counts must be positive integers"))
                })
                .collect::<Result<Vec<u64>>>()?;
            Ok(Model::Polya(PolyaUrn::new(counts)?))
        }
        "joint_table" => {
            let size = as_usize(field(obj, "alphabet_size")?, "alphabet_size")?;
            let horizon = as_usize(field(obj, "horizon")?, "horizon")?;
            let alphabet = Alphabet::new(size)?;
            let probs = field(obj, "probs")?
                .as_object()
                .ok_or_else(|| parse_err("\"probs\" must be an object"))?;
            let mut table = BTreeMap::new();
            for (key, v) in probs {
                let states = decode_state_key(key, size)?;
                table.insert(states, as_rational(v, "table probability")?);
            }
            Ok(Model::Table(JointTable::new(alphabet, horizon, table)?))
        }
        other => Err(parse_err(format!("unknown model type {other:?}"))),
    }
}

/// Serializes a model into its JSON schema.
pub fn model_to_json(model: &Model) -> Value {
    match model {
        Model::Mixture(m) => json!({
            "type": "mixture",
            "alphabet_size": m.components()[0].1.alphabet().size(),
            "components": m.components().iter().map(|(w, d)| json!({
                "weight": w.to_string(),
                "probs": d.probs().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }),
        Model::Polya(u) => json!({
            "type": "polya",
            "counts": u.counts(),
        }),
        Model::Table(t) => {
            let size = t.probs().keys().next().map_or(2, |_| {
                // alphabet size is carried by the model, not inferable here
                0
            });
            let _ = size;
            let alphabet_size = model.alphabet().size();
            let probs: Map<String, Value> = t
                .probs()
                .iter()
                .map(|(key, p)| (encode_state_key(key, alphabet_size), json!(p.to_string())))
                .collect();
            json!({
                "type": "joint_table",
                "alphabet_size": alphabet_size,
                "horizon": t.horizon(),
                "probs": probs,
            })
        }
    }
}

/// Encodes a state sequence as a table key: digit string for alphabets up to
/// size 10, comma-joined integers otherwise.
pub fn encode_state_key(states: &[usize], alphabet_size: usize) -> String {
    if alphabet_size <= 10 {
        states.iter().map(|s| s.to_string()).collect()
    } else {
        states
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Decodes a table key back into a state sequence.
pub fn decode_state_key(key: &str, alphabet_size: usize) -> Result<Vec<usize>> {
    if alphabet_size <= 10 {
        key.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| parse_err(format!("non-digit {c:?} in key {key:?}")))
            })
            .collect()
    } else {
        key.split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| parse_err(format!("bad state {part:?} in key {key:?}")))
            })
            .collect()
    }
}

/// An event as its wire form: the sorted member array.
pub fn event_to_json(event: &Event) -> Value {
    json!(event.members())
}

/// Writes a 1-D moment sequence as CSV with header `order,value`.
pub fn moments_to_csv(moments: &[Rational]) -> String {
    let mut out = String::from("order,value\n");
    for (k, m) in moments.iter().enumerate() {
        out.push_str(&format!("{k},{m}\n"));
    }
    out
}

/// Parses a moments CSV (header `order,value`, values rational or decimal).
pub fn moments_from_csv(text: &str) -> Result<Vec<Rational>> {
    let mut rows: Vec<(usize, Rational)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.eq_ignore_ascii_case("order,value")) {
            continue;
        }
        let (order, value) = line
            .split_once(',')
            .ok_or_else(|| parse_err(format!("line {} is not order,value", lineno + 1)))?;
        let order: usize = order
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("bad order {order:?}")))?;
        rows.push((order, rational::parse(value)?));
    }
    rows.sort_by_key(|(k, _)| *k);
    for (expected, (k, _)) in rows.iter().enumerate() {
        if *k != expected {
            return Err(parse_err(format!(
                "moment orders must be 0..D, missing {expected}"
            )));
        }
    }
    Ok(rows.into_iter().map(|(_, m)| m).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn mixture_round_trip() {
        let text = r#"{"type":"mixture","alphabet_size":2,
            "components":[{"weight":"1/2","probs":["1/5","4/5"]},
                          {"weight":"0.5","probs":["4/5","1/5"]}]}"#;
        let model = model_from_str(text).unwrap();
        let Model::Mixture(m) = &model else {
            panic!("expected mixture")
        };
        assert_eq!(m.components()[0].0, rat(1, 2));
        assert_eq!(*m.components()[0].1.state_prob(1), rat(4, 5));
        let round = model_from_json(&model_to_json(&model)).unwrap();
        assert_eq!(round, model);
    }

    #[test]
    fn polya_round_trip() {
        let model = model_from_str(r#"{"type":"polya","counts":[1,1]}"#).unwrap();
        assert!(matches!(&model, Model::Polya(u) if u.counts() == [1, 1]));
        assert_eq!(model_from_json(&model_to_json(&model)).unwrap(), model);
    }

    #[test]
    fn joint_table_round_trip() {
        let text = r#"{"type":"joint_table","alphabet_size":2,"horizon":2,
            "probs":{"10":"2/5","01":"1/10","00":"1/4","11":"1/4"}}"#;
        let model = model_from_str(text).unwrap();
        let Model::Table(t) = &model else {
            panic!("expected table")
        };
        assert_eq!(t.probs()[&vec![1, 0]], rat(2, 5));
        assert_eq!(model_from_json(&model_to_json(&model)).unwrap(), model);
    }

    #[test]
    fn wide_alphabet_keys_are_comma_joined() {
        assert_eq!(encode_state_key(&[11, 0, 3], 12), "11,0,3");
        assert_eq!(decode_state_key("11,0,3", 12).unwrap(), vec![11, 0, 3]);
        assert_eq!(encode_state_key(&[1, 0], 2), "10");
        assert_eq!(decode_state_key("10", 2).unwrap(), vec![1, 0]);
    }

    #[test]
    fn invalid_models_are_rejected() {
        assert!(model_from_str(r#"{"type":"polya","counts":[0,1]}"#).is_err());
        assert!(model_from_str(r#"{"type":"nope"}"#).is_err());
        assert!(model_from_str("not json").is_err());
        let bad_sum = r#"{"type":"mixture","alphabet_size":2,
            "components":[{"weight":"1/3","probs":["1/2","1/2"]}]}"#;
        assert!(model_from_str(bad_sum).is_err());
    }

    #[test]
    fn moments_csv_round_trip() {
        let moments = vec![rat(1, 1), rat(1, 2), rat(17, 50)];
        let csv = moments_to_csv(&moments);
        assert!(csv.starts_with("order,value\n0,1\n"));
        assert_eq!(moments_from_csv(&csv).unwrap(), moments);
        assert_eq!(
            moments_from_csv("order,value\n0,1\n1,0.5").unwrap(),
            vec![rat(1, 1), rat(1, 2)]
        );
        assert!(moments_from_csv("order,value\n1,1/2").is_err());
    }
}
