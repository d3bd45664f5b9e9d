//! Machine-readable JSON forms.
//!
//! Series output schema: `{level, ramification, precOrder, terms}` where
//! `terms` is a list of `[exponent_num, exponent_den, coeff]` triples in
//! ascending exponent order, `coeff` recursively of the same shape, and a
//! level-0 coefficient is `[num, den]`. `precOrder` is `[num, den]` or
//! `null` for exact elements. Integers that fit in an `i64` are emitted as
//! JSON numbers, larger ones as decimal strings.
//!
//! Input files (extensions, algebra presentations) carry series and
//! polynomials as expression strings in the grammar of [`crate::text`].

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::tower::{Prec, Tower, TowerElement};
use crate::value::ValueVec;
use crate::weil::{ExtensionModel, FiniteFreeAlgebra, LPoly, LPresentation};

fn bigint_json(n: &BigInt) -> Value {
    match i64::try_from(n.clone()) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

pub fn rational_json(q: &Rational) -> Value {
    Value::Array(vec![bigint_json(q.numer()), bigint_json(q.denom())])
}

pub fn value_vec_json(v: &ValueVec) -> Value {
    match v {
        ValueVec::Infinity => json!({ "inf": true }),
        ValueVec::Finite(coords) => json!({
            "coords": coords.iter().map(rational_json).collect::<Vec<_>>()
        }),
    }
}

/// The series JSON document described in the module docs.
pub fn series_json(elem: &TowerElement, tower: &Tower) -> Value {
    match elem {
        TowerElement::Scalar(q) => rational_json(q),
        TowerElement::Series(s) => {
            let level = elem.level();
            let ram = if level <= tower.height() {
                tower.config(level).ramification
            } else {
                1
            };
            let prec = match &s.prec {
                Prec::Infinite => Value::Null,
                Prec::Finite(p) => rational_json(p),
            };
            let terms: Vec<Value> = s
                .terms
                .iter()
                .map(|(e, c)| {
                    Value::Array(vec![
                        bigint_json(e.numer()),
                        bigint_json(e.denom()),
                        series_json(c, tower),
                    ])
                })
                .collect();
            json!({
                "level": level,
                "ramification": ram,
                "precOrder": prec,
                "terms": terms,
            })
        }
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::UsageError(format!("missing field `{key}`")))
}

fn as_object(v: &Value, what: &str) -> Result<Map<String, Value>> {
    v.as_object()
        .cloned()
        .ok_or_else(|| Error::UsageError(format!("{what} must be a JSON object")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::UsageError(format!("{what} must be a JSON array")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| Error::UsageError(format!("{what} must be a string")))
}

fn series_from(v: &Value, what: &str, tower: &Tower) -> Result<TowerElement> {
    crate::text::parse_series(as_str(v, what)?, tower)
}

/// Parses a `γ` given either as a JSON array of rational strings or a
/// single comma-separated string.
pub fn gamma_from(v: &Value) -> Result<ValueVec> {
    let parts: Vec<String> = match v {
        Value::Array(items) => items
            .iter()
            .map(|x| as_str(x, "gamma entry").map(str::to_string))
            .collect::<Result<_>>()?,
        Value::String(s) => {
            if s.trim().is_empty() {
                Vec::new()
            } else {
                s.split(',').map(|p| p.trim().to_string()).collect()
            }
        }
        _ => return Err(Error::UsageError("gamma must be an array or string".into())),
    };
    let coords = parts
        .iter()
        .map(|p| {
            crate::rational::parse_rational(p)
                .ok_or_else(|| Error::UsageError(format!("bad rational `{p}` in gamma")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ValueVec::finite(coords))
}

/// Extension file: `{dim, basisLabels?, structureConstants, derivationMatrix,
/// unit, basisValuations, separated?, model}` with all series as expression
/// strings. `model` is `{"embedded": [series, …]}` or `{"trivial": true}`.
pub fn extension_from_json(doc: &Value, tower: &Tower) -> Result<FiniteFreeAlgebra> {
    let obj = as_object(doc, "extension file")?;
    let dim = field(&obj, "dim")?
        .as_u64()
        .ok_or_else(|| Error::UsageError("dim must be a positive integer".into()))?
        as usize;
    if dim == 0 {
        return Err(Error::UsageError("dim must be positive".into()));
    }

    let labels = match obj.get("basisLabels") {
        Some(v) => as_array(v, "basisLabels")?
            .iter()
            .map(|x| as_str(x, "basis label").map(str::to_string))
            .collect::<Result<Vec<_>>>()?,
        None => (1..=dim).map(|i| format!("b{i}")).collect(),
    };

    let sc = as_array(field(&obj, "structureConstants")?, "structureConstants")?;
    let mut structure = Vec::with_capacity(dim);
    for row in sc {
        let row = as_array(row, "structure row")?;
        let mut out_row = Vec::with_capacity(dim);
        for cell in row {
            let cell = as_array(cell, "structure cell")?;
            let coords = cell
                .iter()
                .map(|v| series_from(v, "structure constant", tower))
                .collect::<Result<Vec<_>>>()?;
            out_row.push(coords);
        }
        structure.push(out_row);
    }

    let dm = as_array(field(&obj, "derivationMatrix")?, "derivationMatrix")?;
    let derivation = dm
        .iter()
        .map(|row| {
            as_array(row, "derivation row")?
                .iter()
                .map(|v| series_from(v, "derivation entry", tower))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let unit = as_array(field(&obj, "unit")?, "unit")?
        .iter()
        .map(|v| series_from(v, "unit coordinate", tower))
        .collect::<Result<Vec<_>>>()?;

    let basis_valuations = as_array(field(&obj, "basisValuations")?, "basisValuations")?
        .iter()
        .map(gamma_from)
        .collect::<Result<Vec<_>>>()?;

    let separated = obj
        .get("separated")
        .and_then(Value::as_bool)
        .unwrap_or(false);

    let model = {
        let m = as_object(field(&obj, "model")?, "model")?;
        if m.get("trivial").and_then(Value::as_bool) == Some(true) {
            ExtensionModel::TrivialValued
        } else if let Some(b) = m.get("embedded") {
            let basis = as_array(b, "embedded basis")?
                .iter()
                .map(|v| series_from(v, "basis element", tower))
                .collect::<Result<Vec<_>>>()?;
            ExtensionModel::Embedded { basis }
        } else {
            return Err(Error::UsageError(
                "model must be {\"embedded\": [...]} or {\"trivial\": true}".into(),
            ));
        }
    };

    let alg = FiniteFreeAlgebra {
        dim,
        basis_labels: labels,
        structure,
        derivation,
        unit,
        basis_valuations,
        separated,
        model,
    };
    alg.validate()?;
    Ok(alg)
}

/// Algebra file for descent: `{generators, relations}` where each relation
/// is an array of `dim` coordinate polynomials (expression strings over the
/// generators as `x1..xm`).
pub fn l_presentation_from_json(
    doc: &Value,
    dim: usize,
    tower: &Tower,
) -> Result<LPresentation> {
    let obj = as_object(doc, "algebra file")?;
    let generators = as_array(field(&obj, "generators")?, "generators")?
        .iter()
        .map(|v| as_str(v, "generator").map(str::to_string))
        .collect::<Result<Vec<_>>>()?;
    let m = generators.len();
    let relations = as_array(field(&obj, "relations")?, "relations")?
        .iter()
        .map(|rel| {
            let coords = as_array(rel, "relation")?
                .iter()
                .map(|v| crate::text::parse_diff_poly(as_str(v, "relation coordinate")?, tower, Some(m)))
                .collect::<Result<Vec<_>>>()?;
            if coords.len() != dim {
                return Err(Error::UsageError(format!(
                    "relation has {} coordinates, extension dimension is {dim}",
                    coords.len()
                )));
            }
            Ok(LPoly { coords })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LPresentation {
        generators,
        relations,
    })
}
