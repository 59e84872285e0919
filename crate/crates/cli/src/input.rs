//! Input parsing for marginals, candidate tables and tropical matrices.
//!
//! Two layouts are accepted, told apart by the first non-blank character:
//! a JSON object (`{"p": [...], "q": [...], "table": [[...]]}`) or CSV
//! (one comma-separated vector or table row per line, `#` comments allowed).

use frechet_core::{ExtendedTropical, Scalar, TropicalMatrix};
use serde_json::Value;

use crate::CliError;

/// Marginals plus the optional candidate tables found in the input.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalInput<T> {
    pub p: Vec<T>,
    pub q: Vec<T>,
    /// Labelled tables: `table` from a check input, or `upper_table` and
    /// `lower_table` from a previously emitted bounds file.
    pub tables: Vec<(String, Vec<Vec<T>>)>,
}

fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
}

fn split_csv(line: &str) -> impl Iterator<Item = &str> {
    line.split(',').map(str::trim)
}

fn parse_csv_row<T: Scalar>(line: &str) -> Result<Vec<T>, CliError> {
    split_csv(line)
        .map(|s| T::parse_decimal(s).map_err(CliError::from))
        .collect()
}

pub fn parse_marginals<T: Scalar>(text: &str) -> Result<MarginalInput<T>, CliError> {
    if is_json(text) {
        parse_marginals_json(text)
    } else {
        parse_marginals_csv(text)
    }
}

fn parse_marginals_csv<T: Scalar>(text: &str) -> Result<MarginalInput<T>, CliError> {
    let mut lines = content_lines(text);
    let p = lines
        .next()
        .ok_or_else(|| CliError::Input("missing p marginal line".into()))
        .and_then(parse_csv_row)?;
    let q = lines
        .next()
        .ok_or_else(|| CliError::Input("missing q marginal line".into()))
        .and_then(parse_csv_row)?;
    let table: Vec<Vec<T>> = lines.map(parse_csv_row).collect::<Result<_, _>>()?;
    let tables = if table.is_empty() {
        Vec::new()
    } else {
        vec![("table".to_string(), table)]
    };
    Ok(MarginalInput { p, q, tables })
}

fn json_scalar<T: Scalar>(v: &Value) -> Result<T, CliError> {
    match v {
        Value::String(s) => Ok(T::parse_decimal(s)?),
        // serde_json prints the shortest round-tripping form, e.g. 0.2 -> "0.2"
        Value::Number(n) => Ok(T::parse_decimal(&n.to_string())?),
        other => Err(CliError::Input(format!("expected a number, got {other}"))),
    }
}

fn json_vector<T: Scalar>(v: &Value, key: &str) -> Result<Vec<T>, CliError> {
    v.as_array()
        .ok_or_else(|| CliError::Input(format!("\"{key}\" must be an array")))?
        .iter()
        .map(json_scalar)
        .collect()
}

fn json_rows<T, F>(v: &Value, key: &str, entry: F) -> Result<Vec<Vec<T>>, CliError>
where
    F: Fn(&Value) -> Result<T, CliError>,
{
    v.as_array()
        .ok_or_else(|| CliError::Input(format!("\"{key}\" must be an array of rows")))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| CliError::Input(format!("rows of \"{key}\" must be arrays")))?
                .iter()
                .map(&entry)
                .collect()
        })
        .collect()
}

fn parse_json_object(text: &str) -> Result<serde_json::Map<String, Value>, CliError> {
    match serde_json::from_str::<Value>(text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(CliError::Input("expected a JSON object".into())),
        Err(e) => Err(CliError::Input(format!("invalid JSON: {e}"))),
    }
}

fn parse_marginals_json<T: Scalar>(text: &str) -> Result<MarginalInput<T>, CliError> {
    let obj = parse_json_object(text)?;
    let field = |key: &str| {
        obj.get(key)
            .ok_or_else(|| CliError::Input(format!("missing \"{key}\"")))
    };
    let p = json_vector(field("p")?, "p")?;
    let q = json_vector(field("q")?, "q")?;
    let mut tables = Vec::new();
    for key in ["table", "upper_table", "lower_table"] {
        if let Some(v) = obj.get(key) {
            tables.push((key.to_string(), json_rows(v, key, json_scalar)?));
        }
        if key == "table" && !tables.is_empty() {
            break;
        }
    }
    Ok(MarginalInput { p, q, tables })
}

/// Two tropical matrices for residuation: JSON `{"a": [[..]], "b": [[..]]}`
/// or CSV with the two matrices separated by a blank line. Entries are
/// numbers or `-inf` / `+inf`.
pub fn parse_matrix_pair<T: Scalar>(
    text: &str,
) -> Result<(TropicalMatrix<T>, TropicalMatrix<T>), CliError> {
    let (a, b) = if is_json(text) {
        let obj = parse_json_object(text)?;
        let get = |key: &str| {
            obj.get(key)
                .ok_or_else(|| CliError::Input(format!("missing \"{key}\"")))
                .and_then(|v| json_rows(v, key, json_tropical))
        };
        (get("a")?, get("b")?)
    } else {
        let mut blocks: Vec<Vec<Vec<ExtendedTropical<T>>>> = vec![Vec::new()];
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                if !blocks.last().expect("nonempty").is_empty() {
                    blocks.push(Vec::new());
                }
                continue;
            }
            let row = split_csv(line)
                .map(|s| ExtendedTropical::parse(s).map_err(CliError::from))
                .collect::<Result<_, _>>()?;
            blocks.last_mut().expect("nonempty").push(row);
        }
        blocks.retain(|b| !b.is_empty());
        if blocks.len() != 2 {
            return Err(CliError::Input(format!(
                "expected two matrices separated by a blank line, found {}",
                blocks.len()
            )));
        }
        let b = blocks.pop().expect("two blocks");
        (blocks.pop().expect("two blocks"), b)
    };
    Ok((TropicalMatrix::from_rows(a)?, TropicalMatrix::from_rows(b)?))
}

fn json_tropical<T: Scalar>(v: &Value) -> Result<ExtendedTropical<T>, CliError> {
    match v {
        Value::String(s) => Ok(ExtendedTropical::parse(s)?),
        Value::Number(n) => Ok(ExtendedTropical::Finite(T::parse_decimal(&n.to_string())?)),
        other => Err(CliError::Input(format!("expected a tropical entry, got {other}"))),
    }
}
