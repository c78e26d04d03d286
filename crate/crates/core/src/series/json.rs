//! `{"grain": g, "precision": "p/q", "terms": [[k, coeff], …]}`, terms ascending in `k`.
//! An exact series carries `"precision": null`.

use num_rational::Rational64;
use serde_json::{json, Value};

use super::{PuiseuxSeries, QSeries};
use crate::error::{Error, Result};
use crate::ring::{parse_rational, Coefficient};

pub fn series_to_json<C: Coefficient>(s: &PuiseuxSeries<C>) -> Value {
    let terms: Vec<Value> = s.raw_terms().map(|(k, c)| json!([k, c.to_json()])).collect();
    json!({
        "grain": s.grain(),
        "precision": s.precision().map(|p| format!("{}/{}", p.numer(), p.denom())),
        "terms": terms,
    })
}

pub fn series_from_json(v: &Value) -> Result<QSeries> {
    let bad = |what: &str| Error::Parse(format!("series JSON: {what}"));
    let grain = v["grain"].as_i64().ok_or_else(|| bad("missing integer \"grain\""))?;
    let precision = match &v["precision"] {
        Value::Null => None,
        Value::String(s) => {
            let r = parse_rational(s)?;
            let to_i64 = |b: &num_bigint::BigInt| i64::try_from(b).map_err(|_| bad("precision out of range"));
            Some(Rational64::new(to_i64(r.numer())?, to_i64(r.denom())?))
        }
        _ => return Err(bad("\"precision\" must be a string or null")),
    };
    let terms = v["terms"].as_array().ok_or_else(|| bad("missing \"terms\" array"))?;
    let mut parsed = Vec::with_capacity(terms.len());
    for t in terms {
        let k = t[0].as_i64().ok_or_else(|| bad("term exponent must be an integer"))?;
        let c = t[1].as_str().ok_or_else(|| bad("rational coefficient must be a string"))?;
        parsed.push((Rational64::new(k, grain), parse_rational(c)?));
    }
    PuiseuxSeries::from_terms(&(), grain, parsed, precision)
}
