//! Matrix files.
//!
//! ```text
//! {"type":"interval_matrix","entries":[[["lo","hi"], ...], ...]}
//! {"type":"subset_matrix","field":"Q"|"GF:<p>",
//!  "entries":[[{"val":"2"} | {"set":["0","1"]} | "any", ...], ...]}
//! ```

use qrank_core::{
    parse_rational, FieldDescriptor, IntervalMatrix, Rational, SubsetEntry, SubsetMatrix,
};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Interval(IntervalMatrix),
    Subset(SubsetMatrix),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Interval(_) => "interval_matrix",
            Input::Subset(_) => "subset_matrix",
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            Input::Interval(m) => m.shape(),
            Input::Subset(m) => m.shape(),
        }
    }
}

fn structure(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

fn rational_at(v: &Value, what: &str) -> Result<Rational, CliError> {
    let s = v
        .as_str()
        .ok_or_else(|| structure(format!("{what}: expected a rational string")))?;
    parse_rational(s).map_err(|e| CliError::Invalid(format!("{what}: {e}")))
}

fn parse_field(v: Option<&Value>) -> Result<FieldDescriptor, CliError> {
    let s = v
        .and_then(Value::as_str)
        .ok_or_else(|| structure("\"field\" must be \"Q\" or \"GF:<prime>\""))?;
    if s == "Q" {
        return Ok(FieldDescriptor::Rationals);
    }
    let modulus = s
        .strip_prefix("GF:")
        .and_then(|m| m.parse::<u64>().ok())
        .ok_or_else(|| structure(format!("unknown field {s:?}")))?;
    FieldDescriptor::prime(modulus).map_err(|e| CliError::Invalid(e.to_string()))
}

fn grid(doc: &Value) -> Result<Vec<&Vec<Value>>, CliError> {
    let rows = doc
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| structure("\"entries\" must be an array of rows"))?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| structure(format!("row {i}: expected an array")))?;
        if let Some(first) = out.first().map(|r: &&Vec<Value>| r.len()) {
            if row.len() != first {
                return Err(CliError::Invalid(format!(
                    "row {i}: has {} entries, row 0 has {first}",
                    row.len()
                )));
            }
        }
        out.push(row);
    }
    Ok(out)
}

fn parse_interval_matrix(doc: &Value) -> Result<IntervalMatrix, CliError> {
    let mut bounds = Vec::new();
    for (i, row) in grid(doc)?.into_iter().enumerate() {
        let mut cells = Vec::with_capacity(row.len());
        for (j, cell) in row.iter().enumerate() {
            let pos = format!("entry ({i}, {j})");
            let pair = cell
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| structure(format!("{pos}: expected [\"lo\", \"hi\"]")))?;
            let lo = rational_at(&pair[0], &pos)?;
            let hi = rational_at(&pair[1], &pos)?;
            if lo > hi {
                return Err(CliError::Invalid(format!("{pos}: lower bound exceeds upper bound")));
            }
            cells.push((lo, hi));
        }
        bounds.push(cells);
    }
    Ok(IntervalMatrix::from_bounds(bounds)?)
}

fn parse_subset_matrix(doc: &Value) -> Result<SubsetMatrix, CliError> {
    let field = parse_field(doc.get("field"))?;
    let mut rows = Vec::new();
    for (i, row) in grid(doc)?.into_iter().enumerate() {
        let mut cells = Vec::with_capacity(row.len());
        for (j, cell) in row.iter().enumerate() {
            let pos = format!("entry ({i}, {j})");
            let entry = match cell {
                Value::String(s) if s == "any" => SubsetEntry::Any,
                Value::Object(map) if map.len() == 1 && map.contains_key("val") => {
                    SubsetEntry::Singleton(rational_at(&map["val"], &pos)?)
                }
                Value::Object(map) if map.len() == 1 && map.contains_key("set") => {
                    let values = map["set"]
                        .as_array()
                        .ok_or_else(|| structure(format!("{pos}: \"set\" must be an array")))?;
                    SubsetEntry::FiniteSet(
                        values
                            .iter()
                            .map(|v| rational_at(v, &pos))
                            .collect::<Result<_, _>>()?,
                    )
                }
                _ => {
                    return Err(structure(format!(
                        "{pos}: expected {{\"val\": ..}}, {{\"set\": [..]}} or \"any\""
                    )))
                }
            };
            cells.push(entry);
        }
        rows.push(cells);
    }
    Ok(SubsetMatrix::from_rows(field, rows)?)
}

pub fn parse_input(text: &str) -> Result<Input, CliError> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("invalid JSON: {e}")))?;
    match doc.get("type").and_then(Value::as_str) {
        Some("interval_matrix") => Ok(Input::Interval(parse_interval_matrix(&doc)?)),
        Some("subset_matrix") => Ok(Input::Subset(parse_subset_matrix(&doc)?)),
        Some(other) => Err(structure(format!("unknown matrix type {other:?}"))),
        None => Err(structure("missing \"type\"")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_file() {
        let m = parse_input(r#"{"type":"interval_matrix","entries":[[["1","2"],["-1/2","0"]]]}"#).unwrap();
        assert_eq!(m.shape(), (1, 2));
        assert_eq!(m.kind(), "interval_matrix");
    }

    #[test]
    fn subset_file() {
        let m = parse_input(
            r#"{"type":"subset_matrix","field":"GF:3","entries":[[{"val":"2"},{"set":["0","1"]}]]}"#,
        )
        .unwrap();
        assert_eq!(m.shape(), (1, 2));
    }

    #[test]
    fn errors_carry_positions_and_codes() {
        let cases = [
            (r#"{"type":"interval_matrix","entries":[[["1","1/0"]]]}"#, 3, "(0, 0)"),
            (r#"{"type":"interval_matrix","entries":[[["1","1"],["3","2"]]]}"#, 3, "(0, 1)"),
            (r#"{"type":"interval_matrix","entries":[[["1","1"]],[]]}"#, 3, "row 1"),
            (r#"{"type":"interval_matrix","entries":[[["1"]]]}"#, 2, "(0, 0)"),
            (r#"{"type":"subset_matrix","field":"GF:2","entries":[["any"]]}"#, 3, "(0, 0)"),
            (r#"{"type":"subset_matrix","field":"GF:2","entries":[[{"val":"0"},{"val":"5"}]]}"#, 3, "(0, 1)"),
            (r#"{"type":"subset_matrix","field":"GF:4","entries":[]}"#, 3, "4"),
            (r#"{"type":"subset_matrix","field":"R","entries":[]}"#, 2, "R"),
            (r#"{"type":"interval_matrix","entries":[[["1","1"]]"#, 2, "JSON"),
        ];
        for (text, code, needle) in cases {
            let e = parse_input(text).unwrap_err();
            assert_eq!(e.exit_code(), code, "{text}: {e}");
            assert!(e.message().contains(needle), "{text}: {e}");
        }
    }
}
