//! JSON encoding of truncated series.
//!
//! The format is self-describing so a series can be reloaded without outside
//! knowledge of its context:
//!
//! ```json
//! {
//!   "variables": [{"name": "s1", "axis": "x", "weight": 1}, ...],
//!   "order": 8,
//!   "terms": [{"exponents": [1, 1], "coeff": "1"}, ...]
//! }
//! ```
//!
//! Coefficients are exact `"num/den"` strings (bare numerator when the
//! denominator is 1) and terms are listed in lexicographic exponent order, so
//! the encoding of a given series is unique.

use super::{Axis, Monomial, SeriesContext, SeriesError, TruncatedSeries, VariableSpec};
use crate::numerics::{format_rat, parse_rat};
use serde_json::{json, Map, Value};

impl TruncatedSeries {
    pub fn to_json(&self) -> Value {
        let variables: Vec<Value> = self
            .context
            .vars()
            .iter()
            .map(|v| {
                json!({
                    "name": v.name,
                    "axis": match v.axis { Axis::X => "x", Axis::Y => "y" },
                    "weight": v.weight,
                })
            })
            .collect();
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(k, c)| {
                json!({
                    "exponents": self.context.unpack(*k),
                    "coeff": format_rat(c),
                })
            })
            .collect();
        json!({
            "variables": variables,
            "order": self.order,
            "terms": terms,
        })
    }
}

fn bad(msg: impl Into<String>) -> SeriesError {
    SeriesError::BadJson(msg.into())
}

fn obj(v: &Value) -> Result<&Map<String, Value>, SeriesError> {
    v.as_object().ok_or_else(|| bad("expected an object"))
}

/// Reconstruct a series (context included) from [`TruncatedSeries::to_json`]
/// output.
pub fn series_from_json(v: &Value) -> Result<TruncatedSeries, SeriesError> {
    let top = obj(v)?;
    let vars_json = top
        .get("variables")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing \"variables\" array"))?;
    let mut vars = Vec::with_capacity(vars_json.len());
    for vj in vars_json {
        let vo = obj(vj)?;
        let name = vo
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("variable missing \"name\""))?;
        let axis = match vo.get("axis").and_then(Value::as_str) {
            Some("x") => Axis::X,
            Some("y") => Axis::Y,
            _ => return Err(bad("variable \"axis\" must be \"x\" or \"y\"")),
        };
        let weight = vo
            .get("weight")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("variable missing \"weight\""))? as u32;
        vars.push(VariableSpec::new(name, axis, weight));
    }
    let context = SeriesContext::new(vars)?;
    let order = top
        .get("order")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing \"order\""))? as u32;
    let terms_json = top
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing \"terms\" array"))?;
    let mut terms = Vec::with_capacity(terms_json.len());
    for tj in terms_json {
        let to = obj(tj)?;
        let exps_json = to
            .get("exponents")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("term missing \"exponents\""))?;
        let mut exps = Vec::with_capacity(exps_json.len());
        for e in exps_json {
            exps.push(
                e.as_u64()
                    .ok_or_else(|| bad("exponent must be a nonnegative integer"))?
                    as u32,
            );
        }
        let coeff_text = to
            .get("coeff")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("term missing \"coeff\""))?;
        let coeff = parse_rat(coeff_text).map_err(|e| bad(e.to_string()))?;
        terms.push((Monomial::new(exps), coeff));
    }
    TruncatedSeries::from_terms(context, order, terms)
}
