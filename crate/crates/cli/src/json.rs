//! Conversions between JSON values and complex matrices.
//!
//! A complex entry is `[re, im]` (a bare number is accepted as a real entry);
//! a matrix is a row-major array of rows.

use lindblad_split::linalg::{ComplexMatrix, C64};
use lindblad_split::{KrausSet, Superoperator};
use serde_json::{json, Value};

use crate::CliError;

pub fn complex(v: &Value, path: &str) -> Result<C64, CliError> {
    match v {
        Value::Number(x) => Ok(C64::new(number(x.as_f64(), path)?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => {
            let re = number(pair[0].as_f64(), &format!("{path}[0]"))?;
            let im = number(pair[1].as_f64(), &format!("{path}[1]"))?;
            Ok(C64::new(re, im))
        }
        _ => Err(CliError::parse(path, "expected a complex number [re, im]")),
    }
}

fn number(x: Option<f64>, path: &str) -> Result<f64, CliError> {
    match x {
        Some(x) if x.is_finite() => Ok(x),
        _ => Err(CliError::parse(path, "expected a finite number")),
    }
}

pub fn matrix(v: &Value, path: &str) -> Result<ComplexMatrix, CliError> {
    let rows = v
        .as_array()
        .ok_or_else(|| CliError::parse(path, "expected a matrix (array of rows)"))?;
    if rows.is_empty() {
        return Err(CliError::Dimension(format!("{path}: matrix has no rows")));
    }
    let mut parsed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let row = row
            .as_array()
            .ok_or_else(|| CliError::parse(&rp, "expected a row (array of entries)"))?;
        let entries = row
            .iter()
            .enumerate()
            .map(|(j, e)| complex(e, &format!("{rp}[{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        parsed.push(entries);
    }
    let cols = parsed[0].len();
    if let Some(i) = parsed.iter().position(|r| r.len() != cols) {
        return Err(CliError::Dimension(format!(
            "{path}: row {i} has {} entries, row 0 has {cols}",
            parsed[i].len()
        )));
    }
    if cols == 0 {
        return Err(CliError::Dimension(format!("{path}: matrix has empty rows")));
    }
    Ok(ComplexMatrix::from_fn(parsed.len(), cols, |r, c| parsed[r][c]))
}

pub fn square(v: &Value, path: &str) -> Result<ComplexMatrix, CliError> {
    let m = matrix(v, path)?;
    if !m.is_square() {
        return Err(CliError::Dimension(format!(
            "{path}: expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m)
}

pub fn matrix_list(v: &Value, path: &str) -> Result<Vec<ComplexMatrix>, CliError> {
    v.as_array()
        .ok_or_else(|| CliError::parse(path, "expected an array of matrices"))?
        .iter()
        .enumerate()
        .map(|(i, m)| square(m, &format!("{path}[{i}]")))
        .collect()
}

pub fn c_to_json(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn mat_to_json(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| Value::Array((0..m.ncols()).map(|c| c_to_json(m[(r, c)])).collect()))
            .collect(),
    )
}

pub fn superop_to_json(s: &Superoperator) -> Value {
    mat_to_json(s.matrix())
}

pub fn kraus_to_json(ks: &KrausSet) -> Value {
    Value::Array(ks.ops().iter().map(mat_to_json).collect())
}

/// JSON has no NaN or infinity; such values become null.
pub fn real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}
