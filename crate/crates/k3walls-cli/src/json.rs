//! JSON input parsing (schema-checked, unknown keys rejected) and a
//! canonical emitter: ordered keys, unbounded integers rendered as bare
//! decimal numbers, byte-deterministic output.

use std::fs;

use num_bigint::BigInt;
use serde_json::Value;

use k3walls::lattice::GramLattice;
use k3walls::matrix::IntMat;
use k3walls::mukai::{MukaiVector, NsData};

use crate::CliError;

// ---------------------------------------------------------------------------
// emitter
// ---------------------------------------------------------------------------

pub enum J {
    Null,
    Bool(bool),
    Int(BigInt),
    Str(String),
    Arr(Vec<J>),
    Obj(Vec<(&'static str, J)>),
}

impl J {
    pub fn int(x: &BigInt) -> J {
        J::Int(x.clone())
    }

    pub fn ints(xs: &[BigInt]) -> J {
        J::Arr(xs.iter().map(J::int).collect())
    }

    pub fn mat(m: &IntMat) -> J {
        J::Arr((0..m.rows()).map(|i| J::ints(m.row(i))).collect())
    }

    pub fn mukai(v: &MukaiVector) -> J {
        J::Obj(vec![
            ("r", J::int(&v.r)),
            ("theta", J::ints(&v.theta)),
            ("s", J::int(&v.s)),
        ])
    }

    pub fn opt(v: Option<J>) -> J {
        v.unwrap_or(J::Null)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            J::Null => out.push_str("null"),
            J::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            J::Int(x) => out.push_str(&x.to_string()),
            J::Str(s) => {
                out.push('"');
                for ch in s.chars() {
                    match ch {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\r' => out.push_str("\\r"),
                        '\t' => out.push_str("\\t"),
                        c if (c as u32) < 0x20 => {
                            out.push_str(&format!("\\u{:04x}", c as u32));
                        }
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            J::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            J::Obj(fields) => {
                out.push('{');
                for (i, (k, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('"');
                    out.push_str(k);
                    out.push_str("\":");
                    v.write(out);
                }
                out.push('}');
            }
        }
    }
}

// ---------------------------------------------------------------------------
// input parsing
// ---------------------------------------------------------------------------

fn read_value(path: &str) -> Result<Value, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::User(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| CliError::User(format!("{path}: invalid JSON: {e}")))
}

fn expect_object<'v>(
    v: &'v Value,
    path: &str,
    allowed: &[&str],
) -> Result<&'v serde_json::Map<String, Value>, CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| CliError::User(format!("{path}: expected a JSON object")))?;
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(CliError::User(format!(
                "{path}: unknown key \"{key}\" (allowed: {})",
                allowed.join(", ")
            )));
        }
    }
    Ok(obj)
}

pub fn value_to_bigint(v: &Value, ctx: &str) -> Result<BigInt, CliError> {
    let Value::Number(n) = v else {
        return Err(CliError::User(format!("{ctx}: expected an integer")));
    };
    let text = n.to_string();
    if text.contains(['.', 'e', 'E']) {
        return Err(CliError::User(format!(
            "{ctx}: expected an integer, got {text}"
        )));
    }
    text.parse::<BigInt>()
        .map_err(|_| CliError::User(format!("{ctx}: bad integer {text}")))
}

pub fn value_to_int_vec(v: &Value, ctx: &str) -> Result<Vec<BigInt>, CliError> {
    let Value::Array(items) = v else {
        return Err(CliError::User(format!(
            "{ctx}: expected an array of integers"
        )));
    };
    items
        .iter()
        .map(|item| value_to_bigint(item, ctx))
        .collect()
}

pub fn value_to_int_rows(v: &Value, ctx: &str) -> Result<Vec<Vec<BigInt>>, CliError> {
    let Value::Array(items) = v else {
        return Err(CliError::User(format!(
            "{ctx}: expected an array of arrays"
        )));
    };
    items
        .iter()
        .map(|item| value_to_int_vec(item, ctx))
        .collect()
}

/// `{"gram": [[int,...],...]}`
pub fn parse_gram_file(path: &str) -> Result<GramLattice, CliError> {
    let v = read_value(path)?;
    let obj = expect_object(&v, path, &["gram"])?;
    let gram = obj
        .get("gram")
        .ok_or_else(|| CliError::User(format!("{path}: missing key \"gram\"")))?;
    let rows = value_to_int_rows(gram, path)?;
    let mat = IntMat::from_rows(rows).map_err(CliError::from)?;
    GramLattice::new(mat).map_err(CliError::from)
}

/// `{"gram": [[int,...],...], "D": [int,...]}`
pub fn parse_ns_file(path: &str) -> Result<NsData, CliError> {
    let v = read_value(path)?;
    let obj = expect_object(&v, path, &["gram", "D"])?;
    let gram = obj
        .get("gram")
        .ok_or_else(|| CliError::User(format!("{path}: missing key \"gram\"")))?;
    let d = obj
        .get("D")
        .ok_or_else(|| CliError::User(format!("{path}: missing key \"D\"")))?;
    let rows = value_to_int_rows(gram, path)?;
    let mat = IntMat::from_rows(rows).map_err(CliError::from)?;
    let lattice = GramLattice::new(mat).map_err(CliError::from)?;
    let d = value_to_int_vec(d, path)?;
    NsData::new(lattice, d).map_err(CliError::from)
}

/// `{"embedding": [[int; rho+2]; 24]}` — columns are images of the
/// algebraic basis.
pub fn parse_embedding_file(path: &str) -> Result<IntMat, CliError> {
    let v = read_value(path)?;
    let obj = expect_object(&v, path, &["embedding"])?;
    let emb = obj
        .get("embedding")
        .ok_or_else(|| CliError::User(format!("{path}: missing key \"embedding\"")))?;
    let rows = value_to_int_rows(emb, path)?;
    IntMat::from_rows(rows).map_err(CliError::from)
}

/// `{"matrix": [[int,...],...]}`
pub fn parse_matrix_file(path: &str) -> Result<IntMat, CliError> {
    let v = read_value(path)?;
    let obj = expect_object(&v, path, &["matrix"])?;
    let m = obj
        .get("matrix")
        .ok_or_else(|| CliError::User(format!("{path}: missing key \"matrix\"")))?;
    let rows = value_to_int_rows(m, path)?;
    IntMat::from_rows(rows).map_err(CliError::from)
}

/// Inline comma-separated integers: `3,0,-5`.
pub fn parse_int_list(text: &str, ctx: &str) -> Result<Vec<BigInt>, CliError> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<BigInt>()
                .map_err(|_| CliError::User(format!("{ctx}: bad integer \"{p}\"")))
        })
        .collect()
}

/// Inline rows separated by semicolons: `2,0;0,3`.
pub fn parse_inline_rows(text: &str, ctx: &str) -> Result<Vec<Vec<BigInt>>, CliError> {
    text.split(';')
        .map(|row| parse_int_list(row, ctx))
        .collect()
}
