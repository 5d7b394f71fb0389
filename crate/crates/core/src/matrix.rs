//! Dense matrices with permutation-labeled rows and columns.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::poly::UnivariatePolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatrixKind {
    #[serde(rename = "D")]
    D,
    #[serde(rename = "Dtilde")]
    DTilde,
    #[serde(rename = "Dtilde_q")]
    DTildeQ,
    #[serde(rename = "E")]
    E,
}

impl MatrixKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixKind::D => "D",
            MatrixKind::DTilde => "Dtilde",
            MatrixKind::DTildeQ => "Dtilde_q",
            MatrixKind::E => "E",
        }
    }
}

/// Rows are indexed by the lower level `(W_n)_k`, columns by the upper level
/// `(W_n)_{C(n,2)−k}`, both in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledMatrix<T> {
    pub n: usize,
    pub k: usize,
    pub kind: MatrixKind,
    pub row_labels: Vec<Permutation>,
    pub col_labels: Vec<Permutation>,
    pub entries: Vec<Vec<T>>,
}

impl<T> LabeledMatrix<T> {
    pub fn nrows(&self) -> usize {
        self.entries.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn check_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.nrows(),
                cols: self.ncols(),
            });
        }
        Ok(())
    }

    pub fn get(&self, row: &Permutation, col: &Permutation) -> Option<&T> {
        let i = self.row_labels.iter().position(|p| p == row)?;
        let j = self.col_labels.iter().position(|p| p == col)?;
        Some(&self.entries[i][j])
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, mut f: F) -> LabeledMatrix<U> {
        LabeledMatrix {
            n: self.n,
            k: self.k,
            kind: self.kind,
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(&mut f).collect())
                .collect(),
        }
    }
}

impl<T: Clone> LabeledMatrix<T> {
    /// Reorders rows and columns: new row `i` is old row `rows[i]`.
    pub fn permuted(&self, rows: &[usize], cols: &[usize]) -> Self {
        LabeledMatrix {
            n: self.n,
            k: self.k,
            kind: self.kind,
            row_labels: rows.iter().map(|&i| self.row_labels[i].clone()).collect(),
            col_labels: cols.iter().map(|&j| self.col_labels[j].clone()).collect(),
            entries: rows
                .iter()
                .map(|&i| cols.iter().map(|&j| self.entries[i][j].clone()).collect())
                .collect(),
        }
    }
}

pub trait JsonEntry {
    fn to_json(&self) -> Value;
    fn to_csv_field(&self) -> String;
}

impl JsonEntry for BigInt {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
    fn to_csv_field(&self) -> String {
        self.to_string()
    }
}

impl JsonEntry for UnivariatePolynomial {
    fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }
    fn to_csv_field(&self) -> String {
        csv_quote(&self.to_string())
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', ' ']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl<T: JsonEntry> LabeledMatrix<T> {
    /// `{n, k, kind, row_labels, col_labels, entries}`; integers as decimal
    /// strings, q-polynomials as coefficient arrays.
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "k": self.k,
            "kind": self.kind,
            "row_labels": self.row_labels,
            "col_labels": self.col_labels,
            "entries": self
                .entries
                .iter()
                .map(|row| row.iter().map(JsonEntry::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    /// Row-major CSV with a header row of column labels and the row label in
    /// the first field of each line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label");
        for c in &self.col_labels {
            write!(out, ",{}", csv_quote(&c.to_string())).expect("string write");
        }
        out.push('\n');
        for (label, row) in self.row_labels.iter().zip(&self.entries) {
            out.push_str(&csv_quote(&label.to_string()));
            for e in row {
                out.push(',');
                out.push_str(&e.to_csv_field());
            }
            out.push('\n');
        }
        out
    }
}
