//! Exact finite truncations of operators.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::scalars::RingKind;
use crate::seqspace::Value;

/// The sparse matrix `P_{[1,n]} T P_{[1,n]}`; only nonzero entries are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowMatrix {
    pub n: i64,
    pub ring: RingKind,
    pub entries: BTreeMap<(i64, i64), Value>,
}

#[derive(Serialize)]
struct WindowJson {
    n: i64,
    ring: String,
    entries: Vec<(i64, i64, String)>,
}

impl WindowMatrix {
    pub fn new(n: i64, ring: RingKind) -> Self {
        WindowMatrix {
            n,
            ring,
            entries: BTreeMap::new(),
        }
    }

    pub fn get(&self, i: i64, j: i64) -> Value {
        self.entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| Value::zero(self.ring))
    }

    /// Add `v` at `(i, j)` if the position lies in the window.
    pub fn add_at(&mut self, i: i64, j: i64, v: &Value) {
        if i < 1 || j < 1 || i > self.n || j > self.n || v.is_zero() {
            return;
        }
        let cur = self.get(i, j).add(v);
        if cur.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), cur);
        }
    }

    /// Plain matrix product (entries outside the window are ignored).
    pub fn mul(&self, other: &WindowMatrix) -> WindowMatrix {
        let mut out = WindowMatrix::new(self.n.min(other.n), self.ring);
        let mut rows_of_other: BTreeMap<i64, Vec<(i64, &Value)>> = BTreeMap::new();
        for ((k, j), v) in &other.entries {
            rows_of_other.entry(*k).or_default().push((*j, v));
        }
        for ((i, k), a) in &self.entries {
            if let Some(row) = rows_of_other.get(k) {
                for (j, b) in row {
                    out.add_at(*i, *j, &a.mul(b));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &WindowMatrix) -> WindowMatrix {
        let mut out = self.clone();
        for ((i, j), v) in &other.entries {
            out.add_at(*i, *j, v);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// JSON dump, entries sorted row-major.
    pub fn to_json(&self) -> String {
        let doc = WindowJson {
            n: self.n,
            ring: self.ring.to_string(),
            entries: self
                .entries
                .iter()
                .map(|((i, j), v)| (*i, *j, v.to_string()))
                .collect(),
        };
        serde_json::to_string(&doc).expect("serializable")
    }

    /// Largest number of nonzero entries in a row and in a column.
    pub fn band(&self) -> (usize, usize) {
        let mut rows: BTreeMap<i64, usize> = BTreeMap::new();
        let mut cols: BTreeMap<i64, usize> = BTreeMap::new();
        for (i, j) in self.entries.keys() {
            *rows.entry(*i).or_default() += 1;
            *cols.entry(*j).or_default() += 1;
        }
        (
            rows.values().copied().max().unwrap_or(0),
            cols.values().copied().max().unwrap_or(0),
        )
    }
}
