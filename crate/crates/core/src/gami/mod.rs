//! Finite sums `Σ diag(α_k) U_{f_k}`: exact arithmetic, adjoint, entries,
//! equality, ideal membership, polar decomposition and unit witnesses.
//!
//! An [`OpSum`] is stored column-wise. Past a threshold `T`, the residue of
//! the column index `j` modulo a period `M` selects a set of affine rules
//! `A`, each carrying a profile `β`: the column has the entry `β(j)` in row
//! `A(j)`. Columns below `T` are listed explicitly. The threshold is pushed
//! past every column where two rules of the same class hit the same row, so
//! each entry belongs to exactly one rule and the form is canonical.

mod window;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::Integer;
use thiserror::Error;

pub use window::WindowMatrix;

use crate::pinj::{intersect_progressions, Affine, PInj, PInjError, Piece, ProgressionSet, Q};
use crate::scalars::{RingKind, RingValue};
use crate::seqspace::{IdealTag, ProfileSum, SymSeq, Track, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GamiError {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(RingKind, RingKind),
    #[error("some coefficient has no rational modulus")]
    NoModulus,
    #[error("operator is not a single term diag(α)U_f (band number {0})")]
    NotSingleTerm(usize),
    #[error("coefficient has finite support; the operator lies in M_∞")]
    FiniteSupport,
    #[error("no residue class carries a constant coefficient")]
    NotKaroubi,
    #[error("ring {0} is not a field")]
    NotField(RingKind),
    #[error(transparent)]
    PInj(#[from] PInjError),
}

/// Entries `(rule(j), j) ↦ profile(j)` for `j` in `{start + step·k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColTrack {
    pub start: i64,
    pub step: i64,
    pub rule: Affine,
    pub profile: ProfileSum,
}

impl ColTrack {
    fn contains(&self, j: i64) -> bool {
        j >= self.start && (j - self.start) % self.step == 0
    }
}

/// One term `diag(α) U_f` with `supp α ⊆ ran f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpTerm {
    pub alpha: SymSeq,
    pub map: PInj,
}

impl OpTerm {
    pub fn new(alpha: SymSeq, map: PInj) -> Self {
        let alpha = alpha.restrict(&map.range());
        OpTerm { alpha, map }
    }

    pub fn to_op(&self) -> OpSum {
        OpSum::term(&self.alpha, &self.map)
    }
}

/// Row bound `r`, column bound `c`, band number `N = max(r, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandStats {
    pub r: usize,
    pub c: usize,
    pub n: usize,
}

/// An element of the algebra spanned by the `diag(α) U_f`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpSum {
    ring: RingKind,
    threshold: i64,
    period: i64,
    classes: BTreeMap<i64, BTreeMap<Affine, ProfileSum>>,
    finite: BTreeMap<i64, BTreeMap<i64, Value>>,
}

pub type Column = BTreeMap<i64, Value>;

fn first_at_least(lower: i64, r: i64, m: i64) -> i64 {
    lower + (r - lower).rem_euclid(m)
}

fn add_into(col: &mut Column, row: i64, v: &Value) {
    if v.is_zero() {
        return;
    }
    let cur = col.remove(&row);
    let s = match cur {
        Some(c) => c.add(v),
        None => v.clone(),
    };
    if !s.is_zero() {
        col.insert(row, s);
    }
}

/// Column `j` of a class rule set, or `None` if some rule is undefined there
/// or two rules collide.
fn class_column(rules: &BTreeMap<Affine, ProfileSum>, j: i64) -> Option<Column> {
    let mut col = Column::new();
    let mut rows = BTreeSet::new();
    for (a, p) in rules {
        let row = a.eval_int(j).filter(|r| *r >= 1)?;
        if !rows.insert(row) {
            return None;
        }
        let v = p.eval(j)?;
        if !v.is_zero() {
            col.insert(row, v);
        }
    }
    Some(col)
}

impl OpSum {
    pub fn zero(ring: RingKind) -> Self {
        OpSum {
            ring,
            threshold: 1,
            period: 1,
            classes: BTreeMap::new(),
            finite: BTreeMap::new(),
        }
    }

    /// Sum of column tracks and explicit `(column, row, value)` points.
    pub fn from_col_tracks(
        ring: RingKind,
        tracks: &[ColTrack],
        points: &[(i64, i64, Value)],
    ) -> Self {
        let mut t = tracks
            .iter()
            .map(|tr| tr.start)
            .chain(points.iter().map(|p| p.0 + 1))
            .max()
            .unwrap_or(1)
            .max(1);
        let m = tracks.iter().fold(1i64, |acc, tr| acc.lcm(&tr.step));
        let mut classes: BTreeMap<i64, BTreeMap<Affine, ProfileSum>> = BTreeMap::new();
        for n in t..t + m {
            let mut rules: BTreeMap<Affine, ProfileSum> = BTreeMap::new();
            for tr in tracks.iter().filter(|tr| tr.contains(n)) {
                let cur = rules
                    .remove(&tr.rule)
                    .unwrap_or_else(|| ProfileSum::zero(ring));
                let s = cur.add(&tr.profile);
                if !s.is_zero() {
                    rules.insert(tr.rule, s);
                }
            }
            if !rules.is_empty() {
                classes.insert(n.rem_euclid(m), rules);
            }
        }
        // push the threshold past collisions of distinct rules
        let mut t2 = t;
        for (r, rules) in &classes {
            let keys: Vec<&Affine> = rules.keys().collect();
            for (i, a) in keys.iter().enumerate() {
                for b in &keys[i + 1..] {
                    if a.slope == b.slope {
                        continue;
                    }
                    let jq = (b.offset - a.offset) / (a.slope - b.slope);
                    if jq.is_integer() {
                        let j = jq.to_integer();
                        if j >= t && (j - r).rem_euclid(m) == 0 {
                            t2 = t2.max(j + 1);
                        }
                    }
                }
            }
        }
        t = t2;
        let mut finite: BTreeMap<i64, Column> = BTreeMap::new();
        for n in 1..t {
            let mut col = Column::new();
            for tr in tracks.iter().filter(|tr| tr.contains(n)) {
                let row = tr.rule.eval_int(n).expect("integral track");
                let v = tr.profile.eval(n).expect("profile valid on its track");
                add_into(&mut col, row, &v);
            }
            if !col.is_empty() {
                finite.insert(n, col);
            }
        }
        for (j, i, v) in points {
            let col = finite.entry(*j).or_default();
            add_into(col, *i, v);
        }
        finite.retain(|_, c| !c.is_empty());
        OpSum::canonical(ring, t, m, classes, finite)
    }

    fn canonical(
        ring: RingKind,
        threshold: i64,
        period: i64,
        mut classes: BTreeMap<i64, BTreeMap<Affine, ProfileSum>>,
        mut finite: BTreeMap<i64, Column>,
    ) -> Self {
        for rules in classes.values_mut() {
            rules.retain(|_, p| !p.is_zero());
        }
        classes.retain(|_, r| !r.is_empty());
        finite.retain(|_, c| !c.is_empty());
        let mut s = OpSum {
            ring,
            threshold: threshold.max(1),
            period: period.max(1),
            classes,
            finite,
        };
        let mut divs: Vec<i64> = (1..=s.period).filter(|d| s.period % d == 0).collect();
        divs.sort_unstable();
        for d in divs {
            if (0..s.period).all(|r| s.classes.get(&r) == s.classes.get(&(r % d))) {
                s.classes.retain(|r, _| *r < d);
                s.period = d;
                break;
            }
        }
        while s.threshold > 1 {
            let n = s.threshold - 1;
            let rule_col = match s.classes.get(&n.rem_euclid(s.period)) {
                Some(rules) => match class_column(rules, n) {
                    Some(c) => c,
                    None => break,
                },
                None => Column::new(),
            };
            let fin = s.finite.get(&n).cloned().unwrap_or_default();
            if rule_col == fin {
                s.finite.remove(&n);
                s.threshold = n;
            } else {
                break;
            }
        }
        s
    }

    pub fn ring(&self) -> RingKind {
        self.ring
    }

    pub fn threshold(&self) -> i64 {
        self.threshold
    }

    pub fn period(&self) -> i64 {
        self.period
    }

    pub fn is_zero(&self) -> bool {
        self.classes.is_empty() && self.finite.is_empty()
    }

    /// The canonical column tracks.
    pub fn tracks(&self) -> Vec<ColTrack> {
        let mut out = Vec::new();
        for (r, rules) in &self.classes {
            for (a, p) in rules {
                out.push(ColTrack {
                    start: first_at_least(self.threshold, *r, self.period),
                    step: self.period,
                    rule: *a,
                    profile: p.clone(),
                });
            }
        }
        out
    }

    /// Explicit `(column, row, value)` entries below the threshold.
    pub fn points(&self) -> Vec<(i64, i64, Value)> {
        let mut out = Vec::new();
        for (j, col) in &self.finite {
            for (i, v) in col {
                out.push((*j, *i, v.clone()));
            }
        }
        out
    }

    /// `diag(α) U_f`.
    pub fn term(alpha: &SymSeq, f: &PInj) -> Self {
        let ring = alpha.ring();
        let beta = alpha.act(&f.dagger());
        let mut tracks = Vec::new();
        let mut points = Vec::new();
        let beta_tracks = beta.tracks();
        for piece in f.pieces() {
            for bt in &beta_tracks {
                if let Some((s, m)) =
                    intersect_progressions(piece.start, piece.step, bt.start, bt.step)
                {
                    tracks.push(ColTrack {
                        start: s,
                        step: m,
                        rule: piece.rule,
                        profile: bt.profile.clone(),
                    });
                }
            }
            let mut j = piece.start;
            while j < beta.threshold() {
                let v = beta.eval(j);
                if !v.is_zero() {
                    points.push((j, piece.rule.eval_int(j).expect("integral"), v));
                }
                j += piece.step;
            }
        }
        for (j, i) in f.finite_pairs() {
            let v = beta.eval(j);
            if !v.is_zero() {
                points.push((j, i, v));
            }
        }
        OpSum::from_col_tracks(ring, &tracks, &points)
    }

    /// `U_f`.
    pub fn u(ring: RingKind, f: &PInj) -> Self {
        OpSum::term(&SymSeq::one(ring), f)
    }

    pub fn diag(alpha: &SymSeq) -> Self {
        OpSum::term(alpha, &PInj::identity())
    }

    pub fn identity(ring: RingKind) -> Self {
        OpSum::u(ring, &PInj::identity())
    }

    pub fn scalar(v: RingValue) -> Self {
        OpSum::diag(&SymSeq::scalar(v))
    }

    /// The matrix unit `E_{i,j}` times `v` (`i, j ≥ 1`).
    pub fn matrix_unit(v: &Value, i: i64, j: i64) -> Self {
        OpSum::from_col_tracks(v.ring(), &[], &[(j, i, v.clone())])
    }

    fn check_ring(&self, other: &OpSum) -> Result<(), GamiError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(GamiError::RingMismatch(self.ring, other.ring))
        }
    }

    pub fn add(&self, other: &OpSum) -> Result<OpSum, GamiError> {
        self.check_ring(other)?;
        let mut tracks = self.tracks();
        tracks.extend(other.tracks());
        let mut points = self.points();
        points.extend(other.points());
        Ok(OpSum::from_col_tracks(self.ring, &tracks, &points))
    }

    pub fn neg(&self) -> OpSum {
        OpSum {
            ring: self.ring,
            threshold: self.threshold,
            period: self.period,
            classes: self
                .classes
                .iter()
                .map(|(r, rules)| (*r, rules.iter().map(|(a, p)| (*a, p.neg())).collect()))
                .collect(),
            finite: self
                .finite
                .iter()
                .map(|(j, c)| (*j, c.iter().map(|(i, v)| (*i, v.neg())).collect()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &OpSum) -> Result<OpSum, GamiError> {
        self.add(&other.neg())
    }

    /// Column `j` as `row ↦ value`.
    pub fn column(&self, j: i64) -> Column {
        if j < 1 {
            return Column::new();
        }
        if j < self.threshold {
            return self.finite.get(&j).cloned().unwrap_or_default();
        }
        match self.classes.get(&j.rem_euclid(self.period)) {
            Some(rules) => class_column(rules, j).expect("valid past threshold"),
            None => Column::new(),
        }
    }

    pub fn entry(&self, i: i64, j: i64) -> Value {
        self.column(j)
            .remove(&i)
            .unwrap_or_else(|| Value::zero(self.ring))
    }

    /// Product `self · other`.
    pub fn mul(&self, other: &OpSum) -> Result<OpSum, GamiError> {
        self.check_ring(other)?;
        let ring = self.ring;
        if self.is_zero() || other.is_zero() {
            return Ok(OpSum::zero(ring));
        }
        let x_tracks = self.tracks();
        let mut tracks = Vec::new();
        let mut points = Vec::new();
        for yt in other.tracks() {
            let b = yt.rule;
            let img_start = b.eval_int(yt.start).expect("integral");
            let img_step = (b.slope * Q::from_integer(yt.step)).to_integer();
            let binv = b.inverse();
            for xt in &x_tracks {
                if let Some((s, m)) = intersect_progressions(img_start, img_step, xt.start, xt.step)
                {
                    tracks.push(ColTrack {
                        start: binv.eval_int(s).expect("in image"),
                        step: (binv.slope * Q::from_integer(m)).to_integer(),
                        rule: xt.rule.after(&b),
                        profile: xt.profile.pullback(b.slope, b.offset).mul(&yt.profile),
                    });
                }
            }
            let mut j = yt.start;
            loop {
                let k = b.eval_int(j).expect("integral");
                if k >= self.threshold {
                    break;
                }
                let v = yt.profile.eval(j).expect("valid on track");
                for (i, w) in self.column(k) {
                    points.push((j, i, w.mul(&v)));
                }
                j += yt.step;
            }
        }
        for (j, col) in &other.finite {
            for (k, v) in col {
                for (i, w) in self.column(*k) {
                    points.push((*j, i, w.mul(v)));
                }
            }
        }
        Ok(OpSum::from_col_tracks(ring, &tracks, &points))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> OpSum {
        let mut tracks = Vec::new();
        for t in self.tracks() {
            let a = t.rule;
            let inv = a.inverse();
            tracks.push(ColTrack {
                start: a.eval_int(t.start).expect("integral"),
                step: (a.slope * Q::from_integer(t.step)).to_integer(),
                rule: inv,
                profile: t.profile.pullback(inv.slope, inv.offset).conjugate(),
            });
        }
        let points: Vec<(i64, i64, Value)> = self
            .points()
            .into_iter()
            .map(|(j, i, v)| (i, j, v.conjugate()))
            .collect();
        OpSum::from_col_tracks(self.ring, &tracks, &points)
    }

    pub fn scale_left(&self, v: &Value) -> OpSum {
        OpSum::diag(&SymSeq::constant(v.clone()))
            .mul(self)
            .expect("same ring")
    }

    pub fn scale_right(&self, v: &Value) -> OpSum {
        self.mul(&OpSum::diag(&SymSeq::constant(v.clone())))
            .expect("same ring")
    }

    /// Matrix equality.
    pub fn equal(&self, other: &OpSum) -> bool {
        self.ring == other.ring && self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// The truncation to `[1, n]²`.
    pub fn window(&self, n: i64) -> WindowMatrix {
        let mut w = WindowMatrix::new(n, self.ring);
        for j in 1..=n {
            for (i, v) in self.column(j) {
                w.add_at(i, j, &v);
            }
        }
        w
    }

    /// Decompose into terms `diag(α) U_f`, one per affine rule plus greedy
    /// matchings of the explicit entries.
    pub fn terms(&self) -> Vec<OpTerm> {
        let ring = self.ring;
        let mut by_rule: BTreeMap<Affine, Vec<ColTrack>> = BTreeMap::new();
        for t in self.tracks() {
            by_rule.entry(t.rule).or_default().push(t);
        }
        let mut out = Vec::new();
        for (rule, ts) in by_rule {
            let pieces: Vec<Piece> = ts
                .iter()
                .map(|t| Piece {
                    start: t.start,
                    step: t.step,
                    rule,
                })
                .collect();
            let f = PInj::from_pieces(&pieces, &[]).expect("one rule on disjoint classes");
            let seq_tracks: Vec<Track> = ts
                .iter()
                .map(|t| Track {
                    start: t.start,
                    step: t.step,
                    profile: t.profile.clone(),
                })
                .collect();
            let beta = SymSeq::from_tracks(ring, &seq_tracks, &[]);
            out.push(OpTerm {
                alpha: beta.act(&f),
                map: f,
            });
        }
        let mut groups: Vec<(BTreeSet<i64>, BTreeSet<i64>, Vec<(i64, i64, Value)>)> = Vec::new();
        for (j, i, v) in self.points() {
            let slot = groups
                .iter_mut()
                .find(|g| !g.0.contains(&i) && !g.1.contains(&j));
            match slot {
                Some(g) => {
                    g.0.insert(i);
                    g.1.insert(j);
                    g.2.push((j, i, v));
                }
                None => groups.push((BTreeSet::from([i]), BTreeSet::from([j]), vec![(j, i, v)])),
            }
        }
        for (_, _, pts) in groups {
            let pairs: Vec<(i64, i64)> = pts.iter().map(|p| (p.0, p.1)).collect();
            let f = PInj::finite_map(&pairs).expect("matching is injective");
            let vals: Vec<(i64, Value)> = pts.iter().map(|p| (p.1, p.2.clone())).collect();
            out.push(OpTerm {
                alpha: SymSeq::from_tracks(ring, &[], &vals),
                map: f,
            });
        }
        out
    }

    /// Band statistics of the infinite matrix.
    pub fn band_stats(&self) -> BandStats {
        let mut c = self.finite.values().map(|col| col.len()).max().unwrap_or(0);
        for rules in self.classes.values() {
            c = c.max(rules.len());
        }
        let images: Vec<ProgressionSet> = self
            .tracks()
            .iter()
            .map(|t| {
                let s = t.rule.eval_int(t.start).expect("integral");
                let m = (t.rule.slope * Q::from_integer(t.step)).to_integer();
                ProgressionSet::progression(s, m).expect("positive")
            })
            .collect();
        let mut r = 0;
        if !images.is_empty() {
            for atom in ProgressionSet::atomize(&images) {
                if atom.is_finite() {
                    continue;
                }
                let probe = atom.progressions()[0].0;
                r = r.max(images.iter().filter(|s| s.contains(probe)).count());
            }
        }
        let mut row_counts: BTreeMap<i64, usize> = BTreeMap::new();
        for col in self.finite.values() {
            for i in col.keys() {
                *row_counts.entry(*i).or_default() += 1;
            }
        }
        for (i, k) in row_counts {
            r = r.max(k + images.iter().filter(|s| s.contains(i)).count());
        }
        BandStats { r, c, n: r.max(c) }
    }

    /// Membership in the ideal `I_S`: every coefficient lies in `S`.
    pub fn ideal_member(&self, tag: &IdealTag) -> bool {
        self.classes
            .values()
            .all(|rules| rules.values().all(|p| tag.admits(p.decay())))
    }

    /// Whether the matrix has finitely many distinct entries, all in the ring.
    pub fn is_karoubi(&self) -> bool {
        self.classes.values().all(|rules| {
            rules
                .values()
                .all(|p| p.as_constant().and_then(|v| v.as_scalar()).is_some())
        }) && self
            .finite
            .values()
            .all(|c| c.values().all(|v| v.as_scalar().is_some()))
    }

    /// The single term `diag(α) U_f` representing this operator, if `N ≤ 1`.
    pub fn as_term(&self) -> Result<OpTerm, GamiError> {
        let stats = self.band_stats();
        if stats.n > 1 {
            return Err(GamiError::NotSingleTerm(stats.n));
        }
        let pieces: Vec<Piece> = self
            .tracks()
            .iter()
            .map(|t| Piece {
                start: t.start,
                step: t.step,
                rule: t.rule,
            })
            .collect();
        let pairs: Vec<(i64, i64)> = self.points().iter().map(|p| (p.0, p.1)).collect();
        let f = PInj::from_pieces(&pieces, &pairs)?;
        let seq_tracks: Vec<Track> = self
            .tracks()
            .into_iter()
            .map(|t| Track {
                start: t.start,
                step: t.step,
                profile: t.profile,
            })
            .collect();
        let vals: Vec<(i64, Value)> = self.points().into_iter().map(|p| (p.0, p.2)).collect();
        let beta = SymSeq::from_tracks(self.ring, &seq_tracks, &vals);
        Ok(OpTerm {
            alpha: beta.act(&f),
            map: f,
        })
    }

    /// Polar decomposition `T = V |T|` of a single term.
    pub fn polar(&self) -> Result<(OpSum, OpSum), GamiError> {
        let term = self.as_term()?;
        let (phase, modulus) = term.alpha.modulus_and_phase().ok_or(GamiError::NoModulus)?;
        let v = OpSum::term(&phase, &term.map);
        let abs = OpSum::diag(&modulus.act(&term.map.dagger()));
        Ok((v, abs))
    }

    /// `(D, g, h)` with `U_h · D · x · U_g = 1`, for a single term with
    /// infinite support over a field.
    pub fn unit_witness(&self) -> Result<UnitWitness, GamiError> {
        if !self.ring.is_field() {
            return Err(GamiError::NotField(self.ring));
        }
        let term = self.as_term()?;
        if term.alpha.has_finite_support() {
            return Err(GamiError::FiniteSupport);
        }
        for t in self.tracks() {
            let Some(c) = t.profile.as_constant().and_then(|v| v.as_scalar()) else {
                continue;
            };
            let Some(inv) = c.inverse() else {
                continue;
            };
            let p = ProgressionSet::progression(t.start, t.step)?;
            let g = PInj::affine_on(Affine::int(t.step, t.start - t.step), 1, 1)?;
            let fp = term.map.restrict(&p);
            let d =
                OpSum::diag(&SymSeq::chi(self.ring, &fp.range()).scale_left(&Value::scalar(inv)));
            let h = term.map.compose(&g).dagger();
            return Ok(UnitWitness { d, g, h });
        }
        Err(GamiError::NotKaroubi)
    }
}

/// Witness that the ideal generated by an operator contains the identity.
#[derive(Debug, Clone)]
pub struct UnitWitness {
    pub d: OpSum,
    pub g: PInj,
    pub h: PInj,
}

impl UnitWitness {
    /// `U_h · D · x · U_g`.
    pub fn apply(&self, x: &OpSum) -> Result<OpSum, GamiError> {
        let ring = x.ring();
        OpSum::u(ring, &self.h)
            .mul(&self.d)?
            .mul(x)?
            .mul(&OpSum::u(ring, &self.g))
    }
}

impl fmt::Display for OpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms
            .iter()
            .map(|t| {
                if t.alpha == SymSeq::chi(self.ring, &t.map.range()) {
                    format!("U[{}]", t.map)
                } else {
                    format!("diag({})*U[{}]", t.alpha, t.map)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `P_A` as an operator.
pub fn projection(ring: RingKind, set: &ProgressionSet) -> OpSum {
    OpSum::u(ring, &PInj::projection(set))
}

/// Checks `x = y` entrywise on `[1, n]²`.
pub fn window_equal(x: &OpSum, y: &OpSum, n: i64) -> bool {
    x.window(n) == y.window(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    const R: RingKind = RingKind::Rational;

    #[test]
    fn isometry_relation() {
        let s1 = OpSum::u(R, &PInj::s1());
        assert!(s1.adjoint().mul(&s1).unwrap().equal(&OpSum::identity(R)));
        let p = s1.mul(&s1.adjoint()).unwrap();
        assert!(p.equal(&OpSum::diag(&SymSeq::chi(R, &ProgressionSet::evens()))));
    }

    #[test]
    fn disjoint_diagonals() {
        let a = OpSum::diag(&SymSeq::e(R, 1));
        let b = OpSum::diag(&SymSeq::e(R, 2));
        assert!(a.mul(&b).unwrap().is_zero());
    }

    #[test]
    fn entries_of_a_term() {
        let f = PInj::s2();
        let alpha = SymSeq::pow(Value::one(R), Q::from_integer(1)).unwrap();
        let x = OpSum::term(&alpha, &f);
        for j in 1..20 {
            assert_eq!(x.entry(2 * j + 1, j), alpha.eval(2 * j + 1));
            assert!(x.entry(2 * j, j).is_zero());
        }
        assert!(x.window(1).is_zero());
    }

    #[test]
    fn canonical_form_merges_presentations() {
        let ev = OpSum::diag(&SymSeq::chi(R, &ProgressionSet::evens()));
        let od = OpSum::diag(&SymSeq::chi(R, &ProgressionSet::odds()));
        assert_eq!(ev.add(&od).unwrap(), OpSum::identity(R));
    }

    #[test]
    fn crossing_rules_raise_threshold() {
        // n ↦ 2n and n ↦ n + 3 meet at n = 3
        let a = OpSum::u(R, &PInj::s1());
        let b = OpSum::u(R, &PInj::affine_on(Affine::int(1, 3), 1, 1).unwrap());
        let s = a.add(&b).unwrap();
        assert_eq!(
            s.entry(6, 3),
            Value::from_rational(R, &crate::scalars::q(2, 1)).unwrap()
        );
        assert!(s.sub(&a).unwrap().equal(&b));
        assert_eq!(s.band_stats().c, 2);
    }

    #[test]
    fn window_product_matches() {
        let x = OpSum::u(R, &PInj::s1())
            .add(&OpSum::diag(&SymSeq::e(R, 3)))
            .unwrap();
        let y = OpSum::u(R, &PInj::s2()).adjoint();
        let n = 40;
        let direct = x.mul(&y).unwrap().window(n);
        let big = x.window(4 * n).mul(&y.window(4 * n));
        let mut trimmed = WindowMatrix::new(n, R);
        for ((i, j), v) in big.entries {
            trimmed.add_at(i, j, &v);
        }
        assert_eq!(direct, trimmed);
    }

    #[test]
    fn polar_of_gaussian_term() {
        let g = RingKind::Gaussian;
        let c = Value::scalar(RingValue::parse(g, "3+4i").unwrap());
        let alpha = SymSeq::chi(g, &ProgressionSet::evens()).scale_left(&c);
        let t = OpSum::term(&alpha, &PInj::s1());
        let (v, abs) = t.polar().unwrap();
        assert!(v.mul(&abs).unwrap().equal(&t));
        let five = Value::scalar(RingValue::parse(g, "5").unwrap());
        assert!(abs.equal(&OpSum::diag(&SymSeq::one(g).scale_left(&five))));
    }

    #[test]
    fn unit_witness_for_isometry() {
        let x = OpSum::u(R, &PInj::s1());
        let w = x.unit_witness().unwrap();
        assert!(w.apply(&x).unwrap().equal(&OpSum::identity(R)));
        let e11 = OpSum::diag(&SymSeq::e(R, 1));
        assert_eq!(e11.unit_witness().unwrap_err(), GamiError::FiniteSupport);
    }

    #[test]
    fn membership_of_terms() {
        let x = OpSum::term(
            &SymSeq::pow(Value::one(R), Q::from_integer(1)).unwrap(),
            &PInj::s1(),
        );
        assert!(x.ideal_member(&IdealTag::Lp(Q::from_integer(2))));
        assert!(!x.ideal_member(&IdealTag::Lp(Q::from_integer(1))));
        assert!(!OpSum::identity(R).ideal_member(&IdealTag::C0));
    }
}
