//! Decomposition of finite band matrices into pieces with at most one
//! nonzero entry per row and column, with factorization witnesses.
//!
//! The row phase follows the classical argument: keep only the rows with the
//! maximal number `r` of nonzero entries, split them into groups whose first
//! nonzero columns are pairwise distinct, reorder each group so that rows are
//! sorted by their first nonzero column, and induct on `M_A`, the largest
//! number of group rows that are nonzero in some row's first column. Every
//! component `X` comes with a pair `(L, R)` such that `X = L·A·R`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pinj::PInj;
use crate::scalars::{RingKind, RingValue, ScalarError};
use crate::seqspace::{IdealTag, SymSeq, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("row bound violated: {0}")]
    RowBoundViolated(String),
    #[error("witness does not reproduce its component")]
    BadWitness,
    #[error("entry ({0},{1}) outside a {2}x{3} matrix")]
    OutOfBounds(i64, i64, i64, i64),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("malformed matrix input: {0}")]
    Format(String),
}

/// A sparse `rows × cols` matrix, 1-based; zero entries are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinMatrix {
    pub rows: i64,
    pub cols: i64,
    pub ring: RingKind,
    entries: BTreeMap<(i64, i64), RingValue>,
}

impl FinMatrix {
    pub fn zero(rows: i64, cols: i64, ring: RingKind) -> Self {
        FinMatrix {
            rows,
            cols,
            ring,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: i64, ring: RingKind) -> Self {
        FinMatrix::diagonal_indicator(n, ring, (1..=n).collect())
    }

    /// `Σ_{i ∈ set} E_{ii}`.
    pub fn diagonal_indicator(n: i64, ring: RingKind, set: BTreeSet<i64>) -> Self {
        let mut m = FinMatrix::zero(n, n, ring);
        for i in set {
            m.set(i, i, RingValue::one(ring));
        }
        m
    }

    /// The permutation matrix sending `e_j` to `e_{perm(j)}` (identity off the map).
    pub fn permutation(n: i64, ring: RingKind, perm: &BTreeMap<i64, i64>) -> Self {
        let mut m = FinMatrix::zero(n, n, ring);
        for j in 1..=n {
            let i = perm.get(&j).copied().unwrap_or(j);
            m.set(i, j, RingValue::one(ring));
        }
        m
    }

    pub fn from_entries(
        rows: i64,
        cols: i64,
        ring: RingKind,
        entries: impl IntoIterator<Item = ((i64, i64), RingValue)>,
    ) -> Result<Self, DecompError> {
        let mut m = FinMatrix::zero(rows, cols, ring);
        for ((i, j), v) in entries {
            if i < 1 || j < 1 || i > rows || j > cols {
                return Err(DecompError::OutOfBounds(i, j, rows, cols));
            }
            let cur = m.get(i, j);
            m.set(i, j, cur.checked_add(&v)?);
        }
        Ok(m)
    }

    pub fn get(&self, i: i64, j: i64) -> RingValue {
        self.entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| RingValue::zero(self.ring))
    }

    pub fn set(&mut self, i: i64, j: i64, v: RingValue) {
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(i64, i64), &RingValue)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mul(&self, other: &FinMatrix) -> FinMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut by_row: BTreeMap<i64, Vec<(i64, &RingValue)>> = BTreeMap::new();
        for ((k, j), v) in &other.entries {
            by_row.entry(*k).or_default().push((*j, v));
        }
        let mut out = FinMatrix::zero(self.rows, other.cols, self.ring);
        for ((i, k), a) in &self.entries {
            if let Some(row) = by_row.get(k) {
                for (j, b) in row {
                    let cur = out.get(*i, *j);
                    out.set(*i, *j, &cur + &(a * *b));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &FinMatrix) -> FinMatrix {
        let mut out = self.clone();
        for ((i, j), v) in &other.entries {
            let cur = out.get(*i, *j);
            out.set(*i, *j, &cur + v);
        }
        out
    }

    pub fn sub(&self, other: &FinMatrix) -> FinMatrix {
        let mut out = self.clone();
        for ((i, j), v) in &other.entries {
            let cur = out.get(*i, *j);
            out.set(*i, *j, &cur - v);
        }
        out
    }

    pub fn transpose(&self) -> FinMatrix {
        FinMatrix {
            rows: self.cols,
            cols: self.rows,
            ring: self.ring,
            entries: self
                .entries
                .iter()
                .map(|((i, j), v)| ((*j, *i), v.clone()))
                .collect(),
        }
    }

    fn row_supports(&self) -> BTreeMap<i64, Vec<i64>> {
        let mut rows: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        for (i, j) in self.entries.keys() {
            rows.entry(*i).or_default().push(*j);
        }
        rows
    }

    /// Largest number of nonzero entries in a row.
    pub fn r(&self) -> usize {
        self.row_supports()
            .values()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
    }

    /// Largest number of nonzero entries in a column.
    pub fn c(&self) -> usize {
        self.transpose().r()
    }

    pub fn band(&self) -> usize {
        self.r().max(self.c())
    }

    pub fn from_json(text: &str, ring_override: Option<RingKind>) -> Result<Self, DecompError> {
        let doc: MatrixJson =
            serde_json::from_str(text).map_err(|e| DecompError::Format(e.to_string()))?;
        let ring = match ring_override {
            Some(r) => r,
            None => RingKind::parse(doc.ring.as_deref().unwrap_or("Q"))?,
        };
        let mut entries = Vec::new();
        for (i, j, v) in doc.entries {
            entries.push(((i, j), RingValue::parse(ring, &v)?));
        }
        FinMatrix::from_entries(doc.rows, doc.cols, ring, entries)
    }

    /// Dense comma-separated rows.
    pub fn from_csv(text: &str, ring: RingKind) -> Result<Self, DecompError> {
        let mut entries = Vec::new();
        let mut rows = 0;
        let mut cols = 0;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            rows += 1;
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols == 0 {
                cols = cells.len() as i64;
            } else if cols != cells.len() as i64 {
                return Err(DecompError::Format(format!(
                    "row {rows} has {} cells",
                    cells.len()
                )));
            }
            for (k, cell) in cells.iter().enumerate() {
                entries.push(((rows, k as i64 + 1), RingValue::parse(ring, cell)?));
            }
        }
        FinMatrix::from_entries(rows, cols, ring, entries)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(MatrixJson {
            rows: self.rows,
            cols: self.cols,
            ring: Some(self.ring.to_string()),
            entries: self
                .entries
                .iter()
                .map(|((i, j), v)| (*i, *j, v.to_string()))
                .collect(),
        })
        .expect("serializable")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: i64,
    cols: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ring: Option<String>,
    entries: Vec<(i64, i64, String)>,
}

/// Pairs `(L_k, R_k)` with `Σ_k L_k · A · R_k` equal to the component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub pairs: Vec<(FinMatrix, FinMatrix)>,
}

impl Witness {
    fn trivial(a: &FinMatrix) -> Self {
        Witness {
            pairs: vec![(
                FinMatrix::identity(a.rows, a.ring),
                FinMatrix::identity(a.cols, a.ring),
            )],
        }
    }

    pub fn apply(&self, a: &FinMatrix) -> FinMatrix {
        let mut out = FinMatrix::zero(a.rows, a.cols, a.ring);
        for (l, r) in &self.pairs {
            out = out.add(&l.mul(a).mul(r));
        }
        out
    }

    pub fn verifies(&self, a: &FinMatrix, component: &FinMatrix) -> bool {
        self.apply(a) == *component
    }

    /// If `self` expresses `X` through `A` and `inner` expresses `Y` through `X`,
    /// express `Y` through `A`.
    fn then(&self, inner: &Witness) -> Witness {
        let mut pairs = Vec::new();
        for (li, ri) in &inner.pairs {
            for (l, r) in &self.pairs {
                pairs.push((li.mul(l), r.mul(ri)));
            }
        }
        Witness { pairs }
    }

    fn left(l: FinMatrix, cols: i64, ring: RingKind) -> Witness {
        Witness {
            pairs: vec![(l, FinMatrix::identity(cols, ring))],
        }
    }
}

/// One step of the row reduction, kept for auditing the bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub r_before: usize,
    pub c_before: usize,
    pub m_before: usize,
    pub components: Vec<(usize, usize)>,
}

/// A component with its witness relative to the matrix it was split from.
#[derive(Debug, Clone)]
pub struct Part {
    pub matrix: FinMatrix,
    pub witness: Witness,
}

fn first_columns(a: &FinMatrix) -> BTreeMap<i64, i64> {
    a.row_supports()
        .into_iter()
        .map(|(i, js)| (i, *js.iter().min().expect("nonempty row")))
        .collect()
}

/// `M_A = max_j #{i ∈ I : A_{i, h_j(1)} ≠ 0}`.
fn m_value(a: &FinMatrix) -> usize {
    let h = first_columns(a);
    h.values()
        .map(|col| h.keys().filter(|i| !a.get(**i, *col).is_zero()).count())
        .max()
        .unwrap_or(0)
}

/// Split `A` (with `r(A) > 1`) into parts with `r < r(A)` and `c ≤ c(A)`.
pub fn reduce_rows(a: &FinMatrix) -> Result<Vec<Part>, DecompError> {
    let mut log = Vec::new();
    reduce_rows_logged(a, &mut log)
}

/// Like [`reduce_rows`], also recording every induction step.
pub fn reduce_rows_logged(
    a: &FinMatrix,
    log: &mut Vec<StepRecord>,
) -> Result<Vec<Part>, DecompError> {
    let r = a.r();
    if r <= 1 {
        return Ok(vec![Part {
            matrix: a.clone(),
            witness: Witness::trivial(a),
        }]);
    }
    let ring = a.ring;
    let rows = a.row_supports();
    let full: BTreeSet<i64> = rows
        .iter()
        .filter(|(_, js)| js.len() == r)
        .map(|(i, _)| *i)
        .collect();
    let p_full = FinMatrix::diagonal_indicator(a.rows, ring, full.clone());
    let a_r = p_full.mul(a);
    let mut parts = Vec::new();
    let rest = a.sub(&a_r);
    if !rest.is_zero() {
        let p_rest = FinMatrix::diagonal_indicator(
            a.rows,
            ring,
            (1..=a.rows).filter(|i| !full.contains(i)).collect(),
        );
        parts.push(Part {
            matrix: rest,
            witness: Witness::left(p_rest, a.cols, ring),
        });
    }
    // groups with pairwise distinct first columns
    let h = first_columns(&a_r);
    let mut groups: Vec<(BTreeSet<i64>, BTreeSet<i64>)> = Vec::new();
    for i in &full {
        let col = h[i];
        match groups.iter_mut().find(|g| !g.1.contains(&col)) {
            Some(g) => {
                g.0.insert(*i);
                g.1.insert(col);
            }
            None => groups.push((BTreeSet::from([*i]), BTreeSet::from([col]))),
        }
    }
    for (group, _) in groups {
        let p_group = FinMatrix::diagonal_indicator(a.rows, ring, group.clone());
        let g_mat = p_group.mul(&a_r);
        // reorder rows so that row order matches first-column order
        let mut by_h: Vec<i64> = group.iter().copied().collect();
        by_h.sort_by_key(|i| h[i]);
        let slots: Vec<i64> = group.iter().copied().collect();
        let perm: BTreeMap<i64, i64> = by_h.iter().copied().zip(slots.iter().copied()).collect();
        let u = FinMatrix::permutation(a.rows, ring, &perm);
        let sorted = u.mul(&g_mat);
        let to_sorted = Witness::left(u.mul(&p_group).mul(&p_full), a.cols, ring);
        let back = u.transpose();
        for part in induct_on_m(&sorted, log)? {
            let w = to_sorted.then(&part.witness);
            let w = Witness {
                pairs: w
                    .pairs
                    .into_iter()
                    .map(|(l, rr)| (back.mul(&l), rr))
                    .collect(),
            };
            parts.push(Part {
                matrix: back.mul(&part.matrix),
                witness: w,
            });
        }
    }
    let c = a.c();
    let mut sum = FinMatrix::zero(a.rows, a.cols, ring);
    for p in &parts {
        if p.matrix.r() >= r || p.matrix.c() > c {
            return Err(DecompError::RowBoundViolated(format!(
                "component has r = {}, c = {} against r(A) = {r}, c(A) = {c}",
                p.matrix.r(),
                p.matrix.c()
            )));
        }
        if !p.witness.verifies(a, &p.matrix) {
            return Err(DecompError::BadWitness);
        }
        sum = sum.add(&p.matrix);
    }
    if sum != *a {
        return Err(DecompError::RowBoundViolated(
            "components do not sum to A".into(),
        ));
    }
    Ok(parts)
}

/// The induction on `M_A` for a matrix whose nonzero rows all have `r`
/// entries, with rows ordered by first nonzero column.
fn induct_on_m(a: &FinMatrix, log: &mut Vec<StepRecord>) -> Result<Vec<Part>, DecompError> {
    let ring = a.ring;
    let m = m_value(a);
    let (r0, c0) = (a.r(), a.c());
    let h = first_columns(a);
    if m <= 1 {
        let heads: BTreeSet<i64> = h.values().copied().collect();
        let q = FinMatrix::diagonal_indicator(a.cols, ring, heads.clone());
        let q_rest = FinMatrix::diagonal_indicator(
            a.cols,
            ring,
            (1..=a.cols).filter(|j| !heads.contains(j)).collect(),
        );
        let ident = FinMatrix::identity(a.rows, ring);
        let a1 = a.mul(&q);
        let a2 = a.mul(&q_rest);
        log.push(StepRecord {
            r_before: r0,
            c_before: c0,
            m_before: m,
            components: vec![(a1.r(), a1.c()), (a2.r(), a2.c())],
        });
        let mut out = Vec::new();
        for (mat, right) in [(a1, q), (a2, q_rest)] {
            if !mat.is_zero() {
                out.push(Part {
                    matrix: mat,
                    witness: Witness {
                        pairs: vec![(ident.clone(), right)],
                    },
                });
            }
        }
        return Ok(out);
    }
    let rows_i: Vec<i64> = h.keys().copied().collect();
    let mut covered: BTreeSet<i64> = BTreeSet::new();
    let mut chosen: BTreeSet<i64> = BTreeSet::new();
    while covered.len() < rows_i.len() {
        let i_n = *rows_i
            .iter()
            .find(|i| !covered.contains(i))
            .expect("uncovered row");
        chosen.insert(i_n);
        let k_n: Vec<i64> = rows_i
            .iter()
            .copied()
            .filter(|j| !covered.contains(j) && !a.get(i_n, h[j]).is_zero())
            .collect();
        covered.extend(k_n);
    }
    let p_b = FinMatrix::diagonal_indicator(a.rows, ring, chosen.clone());
    let p_c = FinMatrix::diagonal_indicator(
        a.rows,
        ring,
        (1..=a.rows).filter(|i| !chosen.contains(i)).collect(),
    );
    let b = p_b.mul(a);
    let c = p_c.mul(a);
    let (mb, mc) = (m_value(&b), m_value(&c));
    log.push(StepRecord {
        r_before: r0,
        c_before: c0,
        m_before: m,
        components: vec![(b.r(), b.c()), (c.r(), c.c())],
    });
    if mb != 1 || (!c.is_zero() && mc >= m) {
        return Err(DecompError::RowBoundViolated(format!(
            "induction metric did not drop: M_A = {m}, M_B = {mb}, M_C = {mc}"
        )));
    }
    let mut out = Vec::new();
    for (sub, proj) in [(b, p_b), (c, p_c)] {
        if sub.is_zero() {
            continue;
        }
        let outer = Witness::left(proj, a.cols, ring);
        for part in induct_on_m(&sub, log)? {
            out.push(Part {
                matrix: part.matrix,
                witness: outer.then(&part.witness),
            });
        }
    }
    Ok(out)
}

/// A component `diag(α) U_f` of a decomposition, with its witness.
#[derive(Debug, Clone)]
pub struct Component {
    pub alpha: SymSeq,
    pub f: PInj,
    pub matrix: FinMatrix,
    pub witness: Witness,
}

impl Component {
    pub fn to_json_value(&self) -> serde_json::Value {
        let witness: Vec<serde_json::Value> = self
            .witness
            .pairs
            .iter()
            .map(|(l, r)| serde_json::json!({ "left": l.to_json_value(), "right": r.to_json_value() }))
            .collect();
        serde_json::json!({
            "alpha": self.alpha.to_string(),
            "f": self.f.to_string(),
            "matrix": self.matrix.to_json_value(),
            "witness": witness,
        })
    }
}

/// `{"ring": .., "components": [..]}` for a decomposition of `a`.
pub fn decomposition_json(a: &FinMatrix, comps: &[Component]) -> serde_json::Value {
    serde_json::json!({
        "ring": a.ring.to_string(),
        "components": comps.iter().map(Component::to_json_value).collect::<Vec<_>>(),
    })
}

/// Reduce rows until `r ≤ 1`, keeping witnesses relative to `a`.
fn rows_to_one(a: &FinMatrix, log: &mut Vec<StepRecord>) -> Result<Vec<Part>, DecompError> {
    let mut done = Vec::new();
    let mut work = vec![Part {
        matrix: a.clone(),
        witness: Witness::trivial(a),
    }];
    while let Some(p) = work.pop() {
        if p.matrix.r() <= 1 {
            done.push(p);
            continue;
        }
        for sub in reduce_rows_logged(&p.matrix, log)? {
            work.push(Part {
                matrix: sub.matrix,
                witness: p.witness.then(&sub.witness),
            });
        }
    }
    Ok(done)
}

/// Write `a` as a sum of components with at most one nonzero entry in every
/// row and column.
pub fn decompose(a: &FinMatrix) -> Result<Vec<Component>, DecompError> {
    let mut log = Vec::new();
    decompose_logged(a, &mut log)
}

pub fn decompose_logged(
    a: &FinMatrix,
    log: &mut Vec<StepRecord>,
) -> Result<Vec<Component>, DecompError> {
    let ring = a.ring;
    let mut out = Vec::new();
    for part in rows_to_one(a, log)? {
        let t = part.matrix.transpose();
        for sub in rows_to_one(&t, log)? {
            let matrix = sub.matrix.transpose();
            // sub = L·tᵀ·R, so matrix = Rᵀ · part · Lᵀ
            let inner = Witness {
                pairs: sub
                    .witness
                    .pairs
                    .iter()
                    .map(|(l, r)| (r.transpose(), l.transpose()))
                    .collect(),
            };
            let witness = part.witness.then(&inner);
            if !witness.verifies(a, &matrix) {
                return Err(DecompError::BadWitness);
            }
            if matrix.is_zero() {
                continue;
            }
            let (alpha, f) = extract_term(&matrix)?;
            out.push(Component {
                alpha,
                f,
                matrix,
                witness,
            });
        }
    }
    let mut sum = FinMatrix::zero(a.rows, a.cols, ring);
    for c in &out {
        if c.matrix.band() > 1 {
            return Err(DecompError::RowBoundViolated("component with N > 1".into()));
        }
        sum = sum.add(&c.matrix);
    }
    if sum != *a {
        return Err(DecompError::RowBoundViolated(
            "components do not sum to A".into(),
        ));
    }
    Ok(out)
}

/// `(α, f)` with `A = diag(α) U_f`, for `N(A) ≤ 1`.
pub fn extract_term(a: &FinMatrix) -> Result<(SymSeq, PInj), DecompError> {
    if a.band() > 1 {
        return Err(DecompError::RowBoundViolated("N(A) > 1".into()));
    }
    let pairs: Vec<(i64, i64)> = a.entries.keys().map(|(i, j)| (*j, *i)).collect();
    let f = PInj::finite_map(&pairs).map_err(|e| DecompError::Format(e.to_string()))?;
    let values: Vec<(i64, Value)> = a
        .entries
        .iter()
        .map(|((i, _), v)| (*i, Value::scalar(v.clone())))
        .collect();
    Ok((SymSeq::from_tracks(a.ring, &[], &values), f))
}

/// Every component's coefficients lie in `S` whenever those of `a` do.
pub fn decompose_preserves(a: &FinMatrix, tag: &IdealTag) -> Result<bool, DecompError> {
    let comps = decompose(a)?;
    Ok(comps.iter().all(|c| c.alpha.member(tag)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> FinMatrix {
        let ring = RingKind::Rational;
        let mut out = FinMatrix::zero(rows.len() as i64, rows[0].len() as i64, ring);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                out.set(i as i64 + 1, j as i64 + 1, RingValue::from_i64(ring, *v));
            }
        }
        out
    }

    #[test]
    fn upper_triangular_two_by_two() {
        let a = m(&[&[1, 1], &[0, 1]]);
        let parts = reduce_rows(&a).unwrap();
        assert!(parts.len() >= 2);
        for p in &parts {
            assert!(p.matrix.r() <= 1);
        }
    }

    #[test]
    fn diagonal_short_circuits() {
        let a = m(&[&[2, 0], &[0, 3]]);
        let parts = reduce_rows(&a).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].matrix, a);
    }

    #[test]
    fn all_ones() {
        let a = m(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]);
        for p in reduce_rows(&a).unwrap() {
            assert!(p.matrix.r() <= 2 && p.matrix.c() <= 3);
        }
        let comps = decompose(&a).unwrap();
        assert!(comps.iter().all(|c| c.matrix.band() <= 1));
    }

    #[test]
    fn single_entry_extracts() {
        let mut a = FinMatrix::zero(6, 6, RingKind::Rational);
        a.set(3, 5, RingValue::from_i64(RingKind::Rational, 7));
        let comps = decompose(&a).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].f, PInj::finite_map(&[(5, 3)]).unwrap());
        assert_eq!(
            comps[0].alpha,
            SymSeq::e(RingKind::Rational, 3)
                .scale_left(&Value::scalar(RingValue::from_i64(RingKind::Rational, 7)))
        );
    }

    #[test]
    fn csv_and_json_inputs() {
        let a = FinMatrix::from_csv("1,0\n2,3\n", RingKind::Rational).unwrap();
        assert_eq!(a.nnz(), 3);
        let text = a.to_json_value().to_string();
        assert_eq!(FinMatrix::from_json(&text, None).unwrap(), a);
    }
}
