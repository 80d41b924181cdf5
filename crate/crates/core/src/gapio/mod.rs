//! Reading and writing the computer-algebra data files: assignments
//! `name := value;` whose values are integers, nested lists and
//! permutations in cycle notation.
//!
//! Indices in these files are 1-based; everything crossing this module's
//! boundary into the rest of the crate is 0-based.

mod differential;
mod dir;
mod parse;

use std::fmt;
use std::path::PathBuf;

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::perm::Perm;

pub use differential::{decode_chain, encode_chain, decode_store_degree};
pub use dir::{
    export_dir, import_dir, recompute_lengths, validate_data, DataSet, ExportSummary, ImportOptions, Validation,
};
pub use parse::parse;

#[derive(Debug, Error)]
pub enum GapError {
    #[error("{file}:{line}:{column}: {message}")]
    Syntax { file: String, line: usize, column: usize, message: String },
    #[error("{file}: no variable `{name}`")]
    Missing { file: String, name: String },
    #[error("`{name}`: {message}")]
    Shape { name: String, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Garside(#[from] crate::garside::GarsideError),
    #[error(transparent)]
    Complex(#[from] crate::complex::ComplexError),
}

/// A parsed value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Int(BigInt),
    List(Vec<Value>),
    Perm(Perm),
}

impl Value {
    pub fn int(v: impl Into<BigInt>) -> Value {
        Value::Int(v.into())
    }

    pub fn list(items: impl IntoIterator<Item = Value>) -> Value {
        Value::List(items.into_iter().collect())
    }

    pub fn int_list<T: Into<BigInt>>(items: impl IntoIterator<Item = T>) -> Value {
        Value::List(items.into_iter().map(|v| Value::Int(v.into())).collect())
    }

    pub fn as_list(&self, name: &str) -> Result<&[Value], GapError> {
        match self {
            Value::List(v) => Ok(v),
            _ => Err(shape(name, "expected a list")),
        }
    }

    pub fn as_int(&self, name: &str) -> Result<&BigInt, GapError> {
        match self {
            Value::Int(v) => Ok(v),
            _ => Err(shape(name, "expected an integer")),
        }
    }

    pub fn as_u64(&self, name: &str) -> Result<u64, GapError> {
        self.as_int(name)?.to_u64().ok_or_else(|| shape(name, "expected a nonnegative machine integer"))
    }

    pub fn as_perm(&self, name: &str) -> Result<&Perm, GapError> {
        match self {
            Value::Perm(p) => Ok(p),
            _ => Err(shape(name, "expected a permutation")),
        }
    }

    pub fn as_u64_list(&self, name: &str) -> Result<Vec<u64>, GapError> {
        self.as_list(name)?.iter().map(|v| v.as_u64(name)).collect()
    }

    pub fn as_perm_list(&self, name: &str) -> Result<Vec<Perm>, GapError> {
        self.as_list(name)?.iter().map(|v| v.as_perm(name).cloned()).collect()
    }

    fn contains_list(&self) -> bool {
        matches!(self, Value::List(v) if v.iter().any(|x| matches!(x, Value::List(_))))
    }
}

pub(crate) fn shape(name: &str, message: impl fmt::Display) -> GapError {
    GapError::Shape { name: name.to_string(), message: message.to_string() }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Perm(p) => write!(f, "{p}"),
            Value::List(items) => {
                f.write_str("[")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// The assignments of one file, in file order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DataFile {
    pub name: String,
    pub entries: IndexMap<String, Value>,
}

impl DataFile {
    pub fn new(name: impl Into<String>) -> Self {
        DataFile { name: name.into(), entries: IndexMap::new() }
    }

    pub fn with(mut self, var: impl Into<String>, value: Value) -> Self {
        self.entries.insert(var.into(), value);
        self
    }

    pub fn get(&self, var: &str) -> Result<&Value, GapError> {
        self.entries.get(var).ok_or_else(|| GapError::Missing { file: self.name.clone(), name: var.to_string() })
    }

    /// Canonical text: one assignment per variable; a list of lists is
    /// written one element per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (var, value) in &self.entries {
            s.push_str(var);
            s.push_str(" := ");
            match value {
                Value::List(items) if value.contains_list() || items.iter().any(|v| matches!(v, Value::Perm(_))) => {
                    s.push_str("[\n");
                    for (i, v) in items.iter().enumerate() {
                        s.push_str("  ");
                        s.push_str(&v.to_string());
                        if i + 1 < items.len() {
                            s.push(',');
                        }
                        s.push('\n');
                    }
                    s.push(']');
                }
                v => s.push_str(&v.to_string()),
            }
            s.push_str(";\n");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text_round_trips() {
        let p = Perm::from_cycles(&[vec![1, 2, 3], vec![4, 5]]).unwrap();
        let f = DataFile::new("t.gap")
            .with("x", Value::int_list([1, 2, 3]))
            .with("perms", Value::list([Value::Perm(p), Value::Perm(Perm::identity())]))
            .with("nested", Value::list([Value::int_list([-1]), Value::List(vec![])]));
        let text = f.to_text();
        assert_eq!(
            text,
            "x := [1,2,3];\nperms := [\n  (1,2,3)(4,5),\n  ()\n];\nnested := [\n  [-1],\n  []\n];\n"
        );
        assert_eq!(parse("t.gap", &text).unwrap(), f);
    }

    #[test]
    fn accessors_report_shape_errors() {
        let v = Value::int_list([1, 2]);
        assert_eq!(v.as_u64_list("v").unwrap(), [1, 2]);
        assert!(v.as_perm_list("v").is_err());
        assert!(Value::int(-1).as_u64("n").is_err());
        let f = DataFile::new("a.gap");
        assert!(matches!(f.get("allatoms"), Err(GapError::Missing { .. })));
    }
}
