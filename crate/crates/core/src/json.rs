//! JSON encodings used by the command-line front end.
//!
//! Skew matrices: `{"var": "tau", "entries": [[[[deg, "coeff"], ...], ...], ...]}`
//! with terms in ascending degree and coefficients in the text grammar.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ext::ExtStructure;
use crate::field::Field;
use crate::parse::parse_element;
use crate::skew::{SkewMatrix, SkewPoly, Var};

pub fn skew_matrix_to_json(m: &SkewMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| {
            let row: Vec<Value> = (0..m.cols())
                .map(|j| Value::Array(m.get(i, j).terms().iter().map(|(k, c)| json!([k, c.to_string()])).collect()))
                .collect();
            Value::Array(row)
        })
        .collect();
    json!({ "var": m.var().name(), "entries": rows })
}

fn bad(msg: &str) -> Error {
    Error::parse(0, format!("malformed matrix JSON: {msg}"))
}

pub fn skew_matrix_from_json(field: &Field, v: &Value) -> Result<SkewMatrix> {
    let var = match v.get("var").and_then(Value::as_str) {
        Some("tau") => Var::Tau,
        Some("sig") => Var::Sigma,
        _ => return Err(bad("var must be \"tau\" or \"sig\"")),
    };
    let rows = v.get("entries").and_then(Value::as_array).ok_or_else(|| bad("missing entries"))?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row.as_array().ok_or_else(|| bad("row is not an array"))?;
        let mut polys = Vec::with_capacity(row.len());
        for entry in row {
            let terms = entry.as_array().ok_or_else(|| bad("entry is not an array"))?;
            let mut parsed = Vec::with_capacity(terms.len());
            for t in terms {
                let deg = t.get(0).and_then(Value::as_u64).ok_or_else(|| bad("term degree"))? as usize;
                let c = t.get(1).and_then(Value::as_str).ok_or_else(|| bad("term coefficient"))?;
                parsed.push((deg, parse_element(field, c)?));
            }
            polys.push(SkewPoly::from_terms(var, parsed));
        }
        out.push(polys);
    }
    SkewMatrix::from_rows(var, out)
}

/// `{"basis": [...], "pi_t": <matrix>, "ga_rank": s}`; each basis entry gives
/// the matrix position and degree of its monomial.
pub fn ext_structure_to_json(e: &ExtStructure) -> Value {
    let basis: Vec<Value> = e
        .basis
        .iter()
        .map(|b| json!({ "row": b.row, "col": b.col, "deg": b.deg }))
        .collect();
    json!({
        "field": e.field().header(),
        "source": e.source.phi_t().to_string(),
        "target": e.target.phi_t().to_string(),
        "basis": basis,
        "pi_t": skew_matrix_to_json(&e.pi_t),
        "ga_rank": e.ga_rank(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_field, parse_matrix};

    #[test]
    fn matrix_round_trip() {
        let k = parse_field("GF(3)(th)").unwrap();
        let m = parse_matrix(&k, Var::Tau, "[[th, 0], [(th^2 + 1)*tau^3 + 2, tau]]").unwrap();
        let v = skew_matrix_to_json(&m);
        assert_eq!(
            v.to_string(),
            r#"{"entries":[[[[0,"th"]],[]],[[[0,"2"],[3,"th^2 + 1"]],[[1,"1"]]]],"var":"tau"}"#
        );
        assert_eq!(skew_matrix_from_json(&k, &v).unwrap(), m);
        assert!(skew_matrix_from_json(&k, &json!({"var": "x"})).is_err());
    }
}
