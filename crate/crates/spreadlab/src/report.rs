//! Versioned JSON envelopes and number tagging for machine-readable reports.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::prob::Prob;

pub const SCHEMA_VERSION: &str = "1.0.0";

pub fn report_schema_version() -> &'static str {
    SCHEMA_VERSION
}

/// Serializes a probability as `{value, exact?, method}`.
pub fn serialize_prob<S: Serializer>(p: &Prob, ser: S) -> Result<S::Ok, S::Error> {
    let mut m = ser.serialize_map(None)?;
    m.serialize_entry("value", &p.to_f64())?;
    if p.is_exact() {
        m.serialize_entry("exact", &p.display_exact())?;
    }
    m.serialize_entry("method", p.method())?;
    m.end()
}

pub fn serialize_opt_prob<S: Serializer>(p: &Option<Prob>, ser: S) -> Result<S::Ok, S::Error> {
    match p {
        Some(p) => serialize_prob(p, ser),
        None => ser.serialize_none(),
    }
}

pub fn serialize_probs<S: Serializer>(ps: &[Prob], ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(ps.iter().map(prob_json))
}

pub fn prob_json(p: &Prob) -> Value {
    let mut v = json!({ "value": p.to_f64(), "method": p.method() });
    if p.is_exact() {
        v["exact"] = Value::String(p.display_exact());
    }
    v
}

pub fn float_json(x: f64) -> Value {
    json!({ "value": x, "method": "exact-float" })
}

pub fn monte_carlo_json(x: f64, se: f64) -> Value {
    json!({ "value": x, "method": format!("monte-carlo(se={se:.6e})") })
}

/// Round-trippable form for inputs: exact values as `"p/q"` strings, floats
/// as numbers; reads either.
pub mod prob_text {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::arrays::Num;
    use crate::prob::Prob;

    pub fn serialize<S: Serializer>(p: &Prob, ser: S) -> Result<S::Ok, S::Error> {
        Num::from_prob(p).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Prob, D::Error> {
        Num::deserialize(de)?
            .to_prob()
            .map_err(serde::de::Error::custom)
    }
}

pub mod prob_text_vec {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::arrays::Num;
    use crate::prob::Prob;

    pub fn serialize<S: Serializer>(ps: &[Prob], ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(ps.iter().map(Num::from_prob))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Prob>, D::Error> {
        Vec::<Num>::deserialize(de)?
            .iter()
            .map(|n| n.to_prob().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// `{schema, command, ...body}` with keys in a fixed order.
pub fn envelope(command: &str, body: impl Serialize) -> Value {
    let mut out = serde_json::Map::new();
    out.insert("schema".into(), Value::String(SCHEMA_VERSION.into()));
    out.insert("command".into(), Value::String(command.into()));
    match serde_json::to_value(body).unwrap_or(Value::Null) {
        Value::Object(m) => out.extend(m),
        other => {
            out.insert("result".into(), other);
        }
    }
    Value::Object(out)
}

/// Accepts a report only if its schema major version is the current one and
/// it is not older than this build.
pub fn check_schema(v: &Value) -> Result<(), String> {
    let got = v
        .get("schema")
        .and_then(Value::as_str)
        .ok_or("report has no schema field")?;
    let parse = |s: &str| -> Option<(u64, u64, u64)> {
        let mut it = s.split('.').map(|p| p.parse::<u64>().ok());
        Some((it.next()??, it.next()??, it.next()??))
    };
    let (g, c) = (
        parse(got).ok_or("malformed schema version")?,
        parse(SCHEMA_VERSION).expect("valid constant"),
    );
    if g.0 != c.0 || g < c {
        return Err(format!("schema {got} is not readable by {SCHEMA_VERSION}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_checks() {
        assert_eq!(report_schema_version(), "1.0.0");
        let r = envelope("x", json!({"a": 1}));
        assert_eq!(r["schema"], "1.0.0");
        assert!(check_schema(&r).is_ok());
        assert!(check_schema(&json!({"schema": "0.9.0"})).is_err());
        assert!(check_schema(&json!({"schema": "2.0.0"})).is_err());
    }

    #[test]
    fn prob_tags() {
        let v = prob_json(&Prob::ratio(1, 32));
        assert_eq!(v["exact"], "1/32");
        assert_eq!(v["method"], "exact-rational");
        assert_eq!(prob_json(&Prob::Float(0.5))["method"], "exact-float");
    }
}
