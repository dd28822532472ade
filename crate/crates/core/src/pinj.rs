//! Partial injections of ℕ = {1, 2, 3, …} and eventually periodic subsets.
//!
//! A [`ProgressionSet`] is stored as a finite part below a threshold `T` plus a
//! set of residues modulo a period `M` describing membership for `n ≥ T`.
//! A [`PInj`] is stored the same way, with each residue class carrying an
//! affine rule `n ↦ a·n + b` (rational `a > 0`, `b`). Both are kept in a
//! canonical form (minimal period, then minimal threshold), so structural
//! equality coincides with equality of sets / graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::rational::Ratio;
use num::{Integer, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Q = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PInjError {
    #[error("invalid word symbol {0:?} (expected 1 or 2)")]
    BadWord(char),
    #[error("map is not injective: {0}")]
    NotInjective(String),
    #[error("map leaves the positive integers: {0}")]
    OutOfRange(String),
    #[error("slope must be positive, got {0}")]
    BadSlope(Q),
    #[error("progression start and step must be positive")]
    BadProgression,
}

fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

fn divisors(m: i64) -> Vec<i64> {
    let mut v: Vec<i64> = (1..=m).filter(|d| m % d == 0).collect();
    v.sort_unstable();
    v
}

/// Smallest `n ≥ lower` with `n ≡ r (mod m)`.
fn first_at_least(lower: i64, r: i64, m: i64) -> i64 {
    lower + (r - lower).rem_euclid(m)
}

/// Intersection of `{s1 + m1 k}` and `{s2 + m2 k}` (k ≥ 0) as a progression.
pub fn intersect_progressions(s1: i64, m1: i64, s2: i64, m2: i64) -> Option<(i64, i64)> {
    let (s1, m1, s2, m2) = (s1 as i128, m1 as i128, s2 as i128, m2 as i128);
    let g = m1.gcd(&m2);
    if (s2 - s1).rem_euclid(g) != 0 {
        return None;
    }
    let l = m1 / g * m2;
    // solve s1 + m1 t ≡ s2 (mod m2)
    let e = m1.extended_gcd(&m2);
    let t = ((s2 - s1) / g * e.x).rem_euclid(m2 / g);
    let x = s1 + m1 * t;
    let lower = s1.max(s2);
    let start = lower + (x - lower).rem_euclid(l);
    Some((start as i64, l as i64))
}

/// An eventually periodic subset of ℕ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProgressionSet {
    threshold: i64,
    period: i64,
    residues: BTreeSet<i64>,
    finite: BTreeSet<i64>,
}

impl ProgressionSet {
    /// Build from a membership predicate valid below `threshold` and periodic
    /// with `period` from `threshold` on.
    pub fn from_fn(threshold: i64, period: i64, mut member: impl FnMut(i64) -> bool) -> Self {
        let threshold = threshold.max(1);
        let period = period.max(1);
        let finite = (1..threshold).filter(|&n| member(n)).collect();
        let residues = (threshold..threshold + period)
            .filter(|&n| member(n))
            .map(|n| n.rem_euclid(period))
            .collect();
        let mut s = ProgressionSet {
            threshold,
            period,
            residues,
            finite,
        };
        s.canonicalize();
        s
    }

    fn canonicalize(&mut self) {
        for d in divisors(self.period) {
            let ok = (0..self.period)
                .all(|r| self.residues.contains(&r) == self.residues.contains(&(r % d)));
            if ok {
                self.residues = self.residues.iter().map(|r| r % d).collect();
                self.period = d;
                break;
            }
        }
        while self.threshold > 1 {
            let n = self.threshold - 1;
            if self.finite.contains(&n) == self.residues.contains(&n.rem_euclid(self.period)) {
                self.finite.remove(&n);
                self.threshold = n;
            } else {
                break;
            }
        }
    }

    pub fn empty() -> Self {
        ProgressionSet::from_fn(1, 1, |_| false)
    }

    pub fn naturals() -> Self {
        ProgressionSet::from_fn(1, 1, |_| true)
    }

    pub fn finite_set(items: impl IntoIterator<Item = i64>) -> Self {
        let set: BTreeSet<i64> = items.into_iter().filter(|&n| n >= 1).collect();
        let t = set.iter().next_back().map_or(1, |m| m + 1);
        ProgressionSet::from_fn(t, 1, |n| set.contains(&n))
    }

    /// `{start + step·k : k ≥ 0}`.
    pub fn progression(start: i64, step: i64) -> Result<Self, PInjError> {
        if start < 1 || step < 1 {
            return Err(PInjError::BadProgression);
        }
        Ok(ProgressionSet::from_fn(start, step, |n| {
            n >= start && (n - start) % step == 0
        }))
    }

    pub fn evens() -> Self {
        ProgressionSet::progression(2, 2).expect("valid")
    }

    pub fn odds() -> Self {
        ProgressionSet::progression(1, 2).expect("valid")
    }

    pub fn contains(&self, n: i64) -> bool {
        if n < 1 {
            false
        } else if n < self.threshold {
            self.finite.contains(&n)
        } else {
            self.residues.contains(&n.rem_euclid(self.period))
        }
    }

    pub fn threshold(&self) -> i64 {
        self.threshold
    }

    pub fn period(&self) -> i64 {
        self.period
    }

    pub fn is_finite(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty() && self.finite.is_empty()
    }

    /// Elements below the threshold.
    pub fn finite_part(&self) -> &BTreeSet<i64> {
        &self.finite
    }

    /// The infinite part as disjoint progressions `(start, step)`.
    pub fn progressions(&self) -> Vec<(i64, i64)> {
        let mut v: Vec<(i64, i64)> = self
            .residues
            .iter()
            .map(|&r| (first_at_least(self.threshold, r, self.period), self.period))
            .collect();
        v.sort_unstable();
        v
    }

    /// Build from a list of progressions and finite points (may overlap).
    pub fn from_parts(progs: &[(i64, i64)], finite: &[i64]) -> Self {
        let t = progs
            .iter()
            .map(|p| p.0)
            .chain(finite.iter().map(|n| n + 1))
            .max()
            .unwrap_or(1);
        let m = progs.iter().fold(1, |acc, p| lcm(acc, p.1));
        ProgressionSet::from_fn(t, m, |n| {
            finite.contains(&n) || progs.iter().any(|&(s, st)| n >= s && (n - s) % st == 0)
        })
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let t = self.threshold.max(other.threshold);
        let m = lcm(self.period, other.period);
        ProgressionSet::from_fn(t, m, |n| op(self.contains(n), other.contains(n)))
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        ProgressionSet::from_fn(self.threshold, self.period, |n| !self.contains(n))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    /// Elements `≤ bound`, ascending.
    pub fn elements_up_to(&self, bound: i64) -> Vec<i64> {
        (1..=bound).filter(|&n| self.contains(n)).collect()
    }

    pub fn min_element(&self) -> Option<i64> {
        if let Some(m) = self.finite.iter().next() {
            return Some(*m);
        }
        self.progressions().first().map(|p| p.0)
    }

    /// Number of elements when finite.
    pub fn len(&self) -> Option<usize> {
        self.is_finite().then(|| self.finite.len())
    }

    /// Nonempty Boolean atoms of the algebra generated by `sets`, ordered by
    /// their least element.
    pub fn atomize(sets: &[ProgressionSet]) -> Vec<ProgressionSet> {
        let t = sets.iter().map(|s| s.threshold).max().unwrap_or(1);
        let m = sets.iter().fold(1, |acc, s| lcm(acc, s.period));
        let signature = |n: i64| -> Vec<bool> { sets.iter().map(|s| s.contains(n)).collect() };
        let mut seen: Vec<Vec<bool>> = Vec::new();
        for n in 1..t + m {
            let sig = signature(n);
            if !seen.contains(&sig) {
                seen.push(sig);
            }
        }
        seen.into_iter()
            .map(|sig| ProgressionSet::from_fn(t, m, |n| signature(n) == sig))
            .collect()
    }
}

impl fmt::Display for ProgressionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.finite.is_empty() {
            let items: Vec<String> = self.finite.iter().map(|n| n.to_string()).collect();
            parts.push(format!("{{{}}}", items.join(",")));
        }
        for (s, m) in self.progressions() {
            parts.push(format!("prog({s},{m})"));
        }
        if parts.is_empty() {
            write!(f, "{{}}")
        } else {
            write!(f, "{}", parts.join("|"))
        }
    }
}

/// `n ↦ slope·n + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Affine {
    pub slope: Q,
    pub offset: Q,
}

impl Affine {
    pub fn new(slope: Q, offset: Q) -> Self {
        Affine { slope, offset }
    }

    pub fn int(slope: i64, offset: i64) -> Self {
        Affine::new(Q::from_integer(slope), Q::from_integer(offset))
    }

    pub fn identity() -> Self {
        Affine::int(1, 0)
    }

    pub fn eval(&self, n: i64) -> Q {
        self.slope * Q::from_integer(n) + self.offset
    }

    /// Value at `n` as an integer, if it is one.
    pub fn eval_int(&self, n: i64) -> Option<i64> {
        let v = self.eval(n);
        v.is_integer().then(|| v.to_integer())
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &Affine) -> Affine {
        Affine::new(
            self.slope * other.slope,
            self.slope * other.offset + self.offset,
        )
    }

    pub fn inverse(&self) -> Affine {
        Affine::new(self.slope.recip(), -self.offset / self.slope)
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "aff({},{})", self.slope, self.offset)
    }
}

/// One affine piece of a partial injection: `start + step·k ↦ rule(start + step·k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Piece {
    pub start: i64,
    pub step: i64,
    pub rule: Affine,
}

impl Piece {
    pub fn image_start(&self) -> i64 {
        self.rule.eval_int(self.start).expect("integral piece")
    }

    pub fn image_step(&self) -> i64 {
        let s = self.rule.slope * Q::from_integer(self.step);
        debug_assert!(s.is_integer());
        s.to_integer()
    }
}

/// A partial injection of ℕ in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PInj {
    threshold: i64,
    period: i64,
    classes: BTreeMap<i64, Affine>,
    finite: BTreeMap<i64, i64>,
}

impl PInj {
    fn canonical(
        threshold: i64,
        period: i64,
        classes: BTreeMap<i64, Affine>,
        finite: BTreeMap<i64, i64>,
    ) -> Self {
        let mut p = PInj {
            threshold: threshold.max(1),
            period: period.max(1),
            classes,
            finite,
        };
        p.finite.retain(|&n, _| n < p.threshold);
        for d in divisors(p.period) {
            let ok = (0..p.period).all(|r| p.classes.get(&r) == p.classes.get(&(r % d)));
            if ok {
                p.classes = p
                    .classes
                    .iter()
                    .filter(|(r, _)| **r < d)
                    .map(|(r, a)| (*r, *a))
                    .collect();
                p.period = d;
                break;
            }
        }
        while p.threshold > 1 {
            let n = p.threshold - 1;
            let rule = p.classes.get(&n.rem_euclid(p.period)).map(|a| a.eval(n));
            let fin = p.finite.get(&n).map(|v| Q::from_integer(*v));
            if rule == fin {
                p.finite.remove(&n);
                p.threshold = n;
            } else {
                break;
            }
        }
        p
    }

    pub fn empty() -> Self {
        PInj::canonical(1, 1, BTreeMap::new(), BTreeMap::new())
    }

    pub fn identity() -> Self {
        PInj::affine_on(Affine::identity(), 1, 1).expect("identity")
    }

    /// Assemble from pieces and finite pairs, validating integrality,
    /// positivity, and injectivity.
    pub fn from_pieces(pieces: &[Piece], finite: &[(i64, i64)]) -> Result<Self, PInjError> {
        for p in pieces {
            if p.start < 1 || p.step < 1 {
                return Err(PInjError::BadProgression);
            }
            if !p.rule.slope.is_positive() {
                return Err(PInjError::BadSlope(p.rule.slope));
            }
            let img_step = p.rule.slope * Q::from_integer(p.step);
            match p.rule.eval_int(p.start) {
                Some(v) if v >= 1 && img_step.is_integer() => {}
                Some(v) if v < 1 => {
                    return Err(PInjError::OutOfRange(format!("{} at {}", p.rule, p.start)))
                }
                _ => {
                    return Err(PInjError::OutOfRange(format!(
                        "{} is not integral on prog({},{})",
                        p.rule, p.start, p.step
                    )))
                }
            }
        }
        for &(n, v) in finite {
            if n < 1 || v < 1 {
                return Err(PInjError::OutOfRange(format!("{n}->{v}")));
            }
        }
        let f = PInj::from_pieces_unchecked(pieces, finite);
        f.check_injective()?;
        // finite pairs that collide with pieces must agree
        for &(n, v) in finite {
            if f.apply(n) != Some(v) {
                return Err(PInjError::NotInjective(format!("conflicting value at {n}")));
            }
        }
        for (i, p) in pieces.iter().enumerate() {
            for q in &pieces[i + 1..] {
                if let Some((s, _)) = intersect_progressions(p.start, p.step, q.start, q.step) {
                    if p.rule.eval(s) != q.rule.eval(s)
                        || p.rule.eval(s + p.step * q.step) != q.rule.eval(s + p.step * q.step)
                    {
                        return Err(PInjError::NotInjective(format!(
                            "overlapping pieces disagree at {s}"
                        )));
                    }
                }
            }
        }
        Ok(f)
    }

    /// Pieces are assumed consistent; overlaps take the first matching piece.
    fn from_pieces_unchecked(pieces: &[Piece], finite: &[(i64, i64)]) -> Self {
        let t = pieces
            .iter()
            .map(|p| p.start)
            .chain(finite.iter().map(|p| p.0 + 1))
            .max()
            .unwrap_or(1);
        let m = pieces.iter().fold(1, |acc, p| lcm(acc, p.step));
        let lookup = |n: i64| -> Option<Affine> {
            pieces
                .iter()
                .find(|p| n >= p.start && (n - p.start) % p.step == 0)
                .map(|p| p.rule)
        };
        let mut classes = BTreeMap::new();
        for n in t..t + m {
            if let Some(a) = lookup(n) {
                classes.insert(n.rem_euclid(m), a);
            }
        }
        let mut fin = BTreeMap::new();
        for n in 1..t {
            if let Some(&(_, v)) = finite.iter().find(|p| p.0 == n) {
                fin.insert(n, v);
            } else if let Some(a) = lookup(n) {
                fin.insert(n, a.eval_int(n).expect("integral"));
            }
        }
        PInj::canonical(t, m, classes, fin)
    }

    fn check_injective(&self) -> Result<(), PInjError> {
        let pieces = self.pieces();
        for (i, p) in pieces.iter().enumerate() {
            for q in &pieces[i + 1..] {
                if intersect_progressions(
                    p.image_start(),
                    p.image_step(),
                    q.image_start(),
                    q.image_step(),
                )
                .is_some()
                {
                    return Err(PInjError::NotInjective(format!(
                        "images of prog({},{}) and prog({},{}) overlap",
                        p.start, p.step, q.start, q.step
                    )));
                }
            }
        }
        let mut seen = BTreeSet::new();
        for (&n, &v) in &self.finite {
            if !seen.insert(v) {
                return Err(PInjError::NotInjective(format!("value {v} repeated")));
            }
            for p in &pieces {
                let (s, m) = (p.image_start(), p.image_step());
                if v >= s && (v - s) % m == 0 {
                    return Err(PInjError::NotInjective(format!(
                        "value {v} of {n} also hit by prog({},{})",
                        p.start, p.step
                    )));
                }
            }
        }
        Ok(())
    }

    /// `rule` restricted to `{start + step·k}`.
    pub fn affine_on(rule: Affine, start: i64, step: i64) -> Result<Self, PInjError> {
        PInj::from_pieces(&[Piece { start, step, rule }], &[])
    }

    pub fn finite_map(pairs: &[(i64, i64)]) -> Result<Self, PInjError> {
        PInj::from_pieces(&[], pairs)
    }

    /// The identity on `set` (the idempotent `P_A`).
    pub fn projection(set: &ProgressionSet) -> Self {
        let classes = set
            .residues
            .iter()
            .map(|&r| (r, Affine::identity()))
            .collect();
        let finite = set.finite.iter().map(|&n| (n, n)).collect();
        PInj::canonical(set.threshold, set.period, classes, finite)
    }

    pub fn apply(&self, n: i64) -> Option<i64> {
        if n < 1 {
            return None;
        }
        if n < self.threshold {
            return self.finite.get(&n).copied();
        }
        self.classes
            .get(&n.rem_euclid(self.period))
            .map(|a| a.eval_int(n).expect("integral by construction"))
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty() && self.finite.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn threshold(&self) -> i64 {
        self.threshold
    }

    pub fn period(&self) -> i64 {
        self.period
    }

    /// Finite pairs below the threshold.
    pub fn finite_pairs(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.finite.iter().map(|(a, b)| (*a, *b))
    }

    /// Residue classes `n ≡ r (mod period)`, `n ≥ threshold`, with their rules.
    pub fn classes(&self) -> impl Iterator<Item = (i64, Affine)> + '_ {
        self.classes.iter().map(|(r, a)| (*r, *a))
    }

    /// Infinite part as pieces on disjoint progressions.
    pub fn pieces(&self) -> Vec<Piece> {
        self.classes
            .iter()
            .map(|(&r, &rule)| Piece {
                start: first_at_least(self.threshold, r, self.period),
                step: self.period,
                rule,
            })
            .collect()
    }

    pub fn domain(&self) -> ProgressionSet {
        ProgressionSet {
            threshold: self.threshold,
            period: self.period,
            residues: self.classes.keys().copied().collect(),
            finite: self.finite.keys().copied().collect(),
        }
        .recanon()
    }

    pub fn range(&self) -> ProgressionSet {
        let progs: Vec<(i64, i64)> = self
            .pieces()
            .iter()
            .map(|p| (p.image_start(), p.image_step()))
            .collect();
        let fin: Vec<i64> = self.finite.values().copied().collect();
        ProgressionSet::from_parts(&progs, &fin)
    }

    /// `self ∘ g` (apply `g` first).
    pub fn compose(&self, g: &PInj) -> PInj {
        let f_pieces = self.pieces();
        let mut pieces = Vec::new();
        let mut finite: Vec<(i64, i64)> = Vec::new();
        for (n, v) in g.finite_pairs() {
            if let Some(w) = self.apply(v) {
                finite.push((n, w));
            }
        }
        for gp in g.pieces() {
            let (is, im) = (gp.image_start(), gp.image_step());
            let inv = gp.rule.inverse();
            for fp in &f_pieces {
                if let Some((s, m)) = intersect_progressions(is, im, fp.start, fp.step) {
                    let start = inv.eval_int(s).expect("in image");
                    let step = (inv.slope * Q::from_integer(m)).to_integer();
                    pieces.push(Piece {
                        start,
                        step,
                        rule: fp.rule.after(&gp.rule),
                    });
                }
            }
            for (m, w) in self.finite_pairs() {
                if m >= is && (m - is) % im == 0 {
                    finite.push((inv.eval_int(m).expect("in image"), w));
                }
            }
        }
        PInj::from_pieces_unchecked(&pieces, &finite)
    }

    /// The inverse partial map.
    pub fn dagger(&self) -> PInj {
        let pieces: Vec<Piece> = self
            .pieces()
            .iter()
            .map(|p| Piece {
                start: p.image_start(),
                step: p.image_step(),
                rule: p.rule.inverse(),
            })
            .collect();
        let finite: Vec<(i64, i64)> = self.finite.iter().map(|(a, b)| (*b, *a)).collect();
        PInj::from_pieces_unchecked(&pieces, &finite)
    }

    /// Restrict the domain to `set`.
    pub fn restrict(&self, set: &ProgressionSet) -> PInj {
        self.compose(&PInj::projection(set))
    }

    /// Restrict the range to `set`.
    pub fn corestrict(&self, set: &ProgressionSet) -> PInj {
        PInj::projection(set).compose(self)
    }

    /// Union of two maps with disjoint domains and ranges.
    pub fn union(&self, other: &PInj) -> Result<PInj, PInjError> {
        let mut pieces = self.pieces();
        pieces.extend(other.pieces());
        let mut finite: Vec<(i64, i64)> = self.finite_pairs().collect();
        finite.extend(other.finite_pairs());
        if !self.domain().intersect(&other.domain()).is_empty() {
            return Err(PInjError::NotInjective("domains overlap".into()));
        }
        PInj::from_pieces(&pieces, &finite)
    }

    pub fn is_idempotent(&self) -> bool {
        *self == PInj::projection(&self.domain())
    }

    /// `s₁(n) = 2n`.
    pub fn s1() -> Self {
        PInj::affine_on(Affine::int(2, 0), 1, 1).expect("valid")
    }

    /// `s₂(n) = 2n + 1`.
    pub fn s2() -> Self {
        PInj::affine_on(Affine::int(2, 1), 1, 1).expect("valid")
    }

    /// `s_μ = s_{μ₁} ∘ … ∘ s_{μ_l}`, i.e. `n ↦ 2^l n + Σ (μ_i − 1) 2^{i−1}`.
    pub fn s_word(word: &[u8]) -> Result<Self, PInjError> {
        let mut f = PInj::identity();
        for &c in word.iter().rev() {
            let g = match c {
                1 => PInj::s1(),
                2 => PInj::s2(),
                other => return Err(PInjError::BadWord(char::from(b'0' + other.min(9)))),
            };
            f = g.compose(&f);
        }
        Ok(f)
    }

    /// `f₀(n) = 2n`.
    pub fn f0() -> Self {
        PInj::s1()
    }

    /// `f₁(n) = 2n − 1`.
    pub fn f1() -> Self {
        PInj::affine_on(Affine::int(2, -1), 1, 1).expect("valid")
    }

    /// The involution fixing 1 and swapping `2m ↔ 2m + 1`.
    pub fn swap_pairs() -> Self {
        PInj::from_pieces(
            &[
                Piece {
                    start: 2,
                    step: 2,
                    rule: Affine::int(1, 1),
                },
                Piece {
                    start: 3,
                    step: 2,
                    rule: Affine::int(1, -1),
                },
            ],
            &[(1, 1)],
        )
        .expect("valid")
    }
}

impl ProgressionSet {
    fn recanon(mut self) -> Self {
        self.canonicalize();
        self
    }
}

impl fmt::Display for PInj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.finite.is_empty() {
            let items: Vec<String> = self
                .finite
                .iter()
                .map(|(a, b)| format!("{a}->{b}"))
                .collect();
            parts.push(format!("map{{{}}}", items.join(",")));
        }
        for p in self.pieces() {
            parts.push(format!("{}@prog({},{})", p.rule, p.start, p.step));
        }
        if parts.is_empty() {
            write!(f, "map{{}}")
        } else {
            write!(f, "{}", parts.join("|"))
        }
    }
}

/// Parse a word over `{1,2}` such as `"121"`.
pub fn parse_word(s: &str) -> Result<Vec<u8>, PInjError> {
    s.chars()
        .map(|c| match c {
            '1' => Ok(1),
            '2' => Ok(2),
            other => Err(PInjError::BadWord(other)),
        })
        .collect()
}

/// `ψ(l, k) = 2^l + k`, a bijection from `{(l,k) : 0 ≤ k < 2^l}` onto ℕ.
pub fn psi(l: u32, k: i64) -> Option<i64> {
    let p = 1i64.checked_shl(l)?;
    (0..p).contains(&k).then(|| p + k)
}

pub fn psi_inverse(n: i64) -> Option<(u32, i64)> {
    if n < 1 {
        return None;
    }
    let l = 63 - n.leading_zeros();
    Some((l, n - (1i64 << l)))
}

/// Copies of ℕ inside ℕ: the first onto the evens, the second onto the odds.
pub mod disjoint_union {
    use super::PInj;

    pub fn encode(copy: u8, m: i64) -> Option<i64> {
        match copy {
            1 if m >= 1 => Some(2 * m),
            2 if m >= 1 => Some(2 * m - 1),
            _ => None,
        }
    }

    pub fn decode(n: i64) -> Option<(u8, i64)> {
        if n < 1 {
            None
        } else if n % 2 == 0 {
            Some((1, n / 2))
        } else {
            Some((2, (n + 1) / 2))
        }
    }

    /// The inclusion of copy `i` (1 or 2).
    pub fn inclusion(copy: u8) -> PInj {
        match copy {
            1 => PInj::f0(),
            _ => PInj::f1(),
        }
    }
}

/// ℕ × ℕ inside ℕ, with row `n = 1` landing on the evens.
pub mod pairs {
    use super::{Affine, PInj};

    pub fn encode(m: i64, n: i64) -> Option<i64> {
        if m < 1 || n < 1 || n > 62 {
            return None;
        }
        if n == 1 {
            Some(2 * m)
        } else {
            (1i64 << (n - 1)).checked_mul(2 * m - 1).map(|v| v - 1)
        }
    }

    pub fn decode(x: i64) -> Option<(i64, i64)> {
        if x < 1 {
            return None;
        }
        if x % 2 == 0 {
            return Some((x / 2, 1));
        }
        let y = x + 1;
        let j = y.trailing_zeros() as i64;
        let odd = y >> j;
        Some(((odd + 1) / 2, j + 1))
    }

    /// `m ↦ code(m, n)` for a fixed second coordinate.
    pub fn row(n: i64) -> PInj {
        let rule = if n == 1 {
            Affine::int(2, 0)
        } else {
            let p = 1i64 << (n - 1);
            Affine::int(2 * p, -p - 1)
        };
        PInj::affine_on(rule, 1, 1).expect("valid row")
    }
}

/// Helper for tests and generators: a `Q` from integers.
pub fn qq(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

impl Affine {
    /// Whether the rule is the identity map.
    pub fn is_identity(&self) -> bool {
        self.slope.is_one() && self.offset.is_zero()
    }

    pub fn slope_f64(&self) -> f64 {
        self.slope.to_f64().unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_s1_s2() {
        let f = PInj::s1().compose(&PInj::s2());
        assert_eq!(f, PInj::affine_on(Affine::int(4, 2), 1, 1).unwrap());
        assert_eq!(f, PInj::s_word(&[1, 2]).unwrap());
    }

    #[test]
    fn dagger_projection() {
        let s1 = PInj::s1();
        assert_eq!(
            s1.compose(&s1.dagger()),
            PInj::projection(&ProgressionSet::evens())
        );
        assert_eq!(s1.dagger().compose(&s1), PInj::identity());
        assert!(s1.dagger().compose(&PInj::s2()).is_empty());
        assert_eq!(s1.dagger().apply(6), Some(3));
        assert_eq!(s1.dagger().apply(5), None);
    }

    #[test]
    fn finite_dagger() {
        let f = PInj::finite_map(&[(3, 7)]).unwrap();
        assert_eq!(f.dagger(), PInj::finite_map(&[(7, 3)]).unwrap());
    }

    #[test]
    fn crt_intersection() {
        let a = ProgressionSet::progression(2, 2).unwrap();
        let b = ProgressionSet::progression(3, 3).unwrap();
        assert_eq!(a.intersect(&b), ProgressionSet::progression(6, 6).unwrap());
        assert_eq!(intersect_progressions(2, 2, 3, 3), Some((6, 6)));
        assert_eq!(intersect_progressions(2, 4, 3, 2), None);
    }

    #[test]
    fn complement_of_evens() {
        assert_eq!(ProgressionSet::evens().complement(), ProgressionSet::odds());
    }

    #[test]
    fn atomize_cases() {
        assert_eq!(
            ProgressionSet::atomize(&[]),
            vec![ProgressionSet::naturals()]
        );
        let atoms = ProgressionSet::atomize(&[
            ProgressionSet::evens(),
            ProgressionSet::progression(4, 4).unwrap(),
        ]);
        assert_eq!(atoms.len(), 3);
    }

    #[test]
    fn s_word_formula() {
        let w = [2u8, 1, 2];
        let f = PInj::s_word(&w).unwrap();
        let off: i64 = w
            .iter()
            .enumerate()
            .map(|(i, &c)| (c as i64 - 1) << i)
            .sum();
        for n in 1..50 {
            assert_eq!(f.apply(n), Some(8 * n + off));
        }
    }

    #[test]
    fn codecs_are_bijective() {
        let n_max = 1 << 12;
        let mut seen = BTreeSet::new();
        for l in 0..12 {
            for k in 0..(1 << l) {
                let n = psi(l, k).unwrap();
                assert_eq!(psi_inverse(n), Some((l, k)));
                seen.insert(n);
            }
        }
        assert_eq!(seen.len(), n_max - 1);
        for x in 1..=n_max as i64 {
            let (m, n) = pairs::decode(x).unwrap();
            assert_eq!(pairs::encode(m, n), Some(x));
            assert_eq!(pairs::row(n).apply(m), Some(x));
            let (c, m) = disjoint_union::decode(x).unwrap();
            assert_eq!(disjoint_union::encode(c, m), Some(x));
        }
    }

    #[test]
    fn rejects_non_injective() {
        assert!(PInj::finite_map(&[(1, 5), (2, 5)]).is_err());
        let p = Piece {
            start: 1,
            step: 1,
            rule: Affine::int(1, 0),
        };
        assert!(PInj::from_pieces(&[p], &[(1, 1), (2, 1)]).is_err());
        assert!(PInj::affine_on(Affine::int(1, -3), 1, 1).is_err());
    }

    #[test]
    fn swap_pairs_shape() {
        let v = PInj::swap_pairs();
        assert_eq!(v.compose(&v), PInj::identity());
        assert_eq!(v.apply(1), Some(1));
        assert_eq!(v.apply(4), Some(5));
    }
}
