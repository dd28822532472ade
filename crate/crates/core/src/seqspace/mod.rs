//! Symbolic bounded sequences over a coefficient ring.
//!
//! A [`SymSeq`] is stored on a grid: below a threshold `T` the values are
//! listed explicitly, and for `n ≥ T` the residue class of `n` modulo a
//! period `M` selects a [`ProfileSum`] evaluated at `n`. The grid is kept
//! minimal (smallest period, then smallest threshold), which makes the
//! representation canonical: structural equality is sequence equality.

mod magnitude;
mod member;
mod shape;

use std::collections::BTreeMap;
use std::fmt;

use num::rational::BigRational;
use num::{Integer, Signed, Zero};
use thiserror::Error;

pub use magnitude::{factor, Magnitude, Value};
pub use member::IdealTag;
pub use shape::{big, Decay, ProfileSum, Shape};

use crate::pinj::{intersect_progressions, PInj, ProgressionSet, Q};
use crate::scalars::{RingKind, RingValue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("decaying profiles need a ring containing the rationals, got {0}")]
    NeedsRationals(RingKind),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(RingKind, RingKind),
    #[error("invalid profile: {0}")]
    BadProfile(String),
}

/// One progression `{start + step·k}` carrying a profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Track {
    pub start: i64,
    pub step: i64,
    pub profile: ProfileSum,
}

impl Track {
    fn contains(&self, n: i64) -> bool {
        n >= self.start && (n - self.start) % self.step == 0
    }
}

/// A symbolic element of ℓ^∞ over a ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymSeq {
    ring: RingKind,
    threshold: i64,
    period: i64,
    classes: BTreeMap<i64, ProfileSum>,
    finite: BTreeMap<i64, Value>,
}

fn first_at_least(lower: i64, r: i64, m: i64) -> i64 {
    lower + (r - lower).rem_euclid(m)
}

impl SymSeq {
    pub fn zero(ring: RingKind) -> Self {
        SymSeq {
            ring,
            threshold: 1,
            period: 1,
            classes: BTreeMap::new(),
            finite: BTreeMap::new(),
        }
    }

    /// Sum of the given tracks and points (overlaps add up).
    pub fn from_tracks(ring: RingKind, tracks: &[Track], points: &[(i64, Value)]) -> Self {
        let t = tracks
            .iter()
            .map(|tr| tr.start)
            .chain(points.iter().map(|p| p.0 + 1))
            .max()
            .unwrap_or(1)
            .max(1);
        let m = tracks.iter().fold(1i64, |acc, tr| acc.lcm(&tr.step));
        let mut classes = BTreeMap::new();
        for n in t..t + m {
            let mut p = ProfileSum::zero(ring);
            for tr in tracks.iter().filter(|tr| tr.contains(n)) {
                p = p.add(&tr.profile);
            }
            if !p.is_zero() {
                classes.insert(n.rem_euclid(m), p);
            }
        }
        let mut finite: BTreeMap<i64, Value> = BTreeMap::new();
        for n in 1..t {
            let mut v = Value::zero(ring);
            for tr in tracks.iter().filter(|tr| tr.contains(n)) {
                v = v.add(&tr.profile.eval(n).expect("profile valid on its track"));
            }
            if !v.is_zero() {
                finite.insert(n, v);
            }
        }
        for (n, v) in points {
            if *n < 1 {
                continue;
            }
            let cur = finite.remove(n).unwrap_or_else(|| Value::zero(ring));
            let s = cur.add(v);
            if !s.is_zero() {
                finite.insert(*n, s);
            }
        }
        SymSeq::canonical(ring, t, m, classes, finite)
    }

    fn canonical(
        ring: RingKind,
        threshold: i64,
        period: i64,
        classes: BTreeMap<i64, ProfileSum>,
        finite: BTreeMap<i64, Value>,
    ) -> Self {
        let mut s = SymSeq {
            ring,
            threshold: threshold.max(1),
            period: period.max(1),
            classes,
            finite,
        };
        s.classes.retain(|_, p| !p.is_zero());
        s.finite.retain(|_, v| !v.is_zero());
        let mut divs: Vec<i64> = (1..=s.period).filter(|d| s.period % d == 0).collect();
        divs.sort_unstable();
        for d in divs {
            let ok = (0..s.period).all(|r| s.classes.get(&r) == s.classes.get(&(r % d)));
            if ok {
                s.classes.retain(|r, _| *r < d);
                s.period = d;
                break;
            }
        }
        while s.threshold > 1 {
            let n = s.threshold - 1;
            let rule = match s.classes.get(&n.rem_euclid(s.period)) {
                Some(p) => match p.eval(n) {
                    Some(v) => v,
                    None => break,
                },
                None => Value::zero(ring),
            };
            let fin = s
                .finite
                .get(&n)
                .cloned()
                .unwrap_or_else(|| Value::zero(ring));
            if rule == fin {
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

    pub fn constant(v: Value) -> Self {
        let ring = v.ring();
        SymSeq::from_tracks(
            ring,
            &[Track {
                start: 1,
                step: 1,
                profile: ProfileSum::constant(v),
            }],
            &[],
        )
    }

    pub fn one(ring: RingKind) -> Self {
        SymSeq::constant(Value::one(ring))
    }

    pub fn scalar(v: RingValue) -> Self {
        SymSeq::constant(Value::scalar(v))
    }

    /// Characteristic sequence of `set`.
    pub fn chi(ring: RingKind, set: &ProgressionSet) -> Self {
        let one = Value::one(ring);
        let tracks: Vec<Track> = set
            .progressions()
            .into_iter()
            .map(|(start, step)| Track {
                start,
                step,
                profile: ProfileSum::constant(one.clone()),
            })
            .collect();
        let points: Vec<(i64, Value)> = set
            .finite_part()
            .iter()
            .map(|n| (*n, one.clone()))
            .collect();
        SymSeq::from_tracks(ring, &tracks, &points)
    }

    /// The unit vector at `n`.
    pub fn e(ring: RingKind, n: i64) -> Self {
        SymSeq::from_tracks(ring, &[], &[(n, Value::one(ring))])
    }

    /// `(v₁, v₂, …, v_k, 0, 0, …)`.
    pub fn list(ring: RingKind, values: &[Value]) -> Self {
        let points: Vec<(i64, Value)> = values
            .iter()
            .enumerate()
            .map(|(i, v)| (i as i64 + 1, v.clone()))
            .collect();
        SymSeq::from_tracks(ring, &[], &points)
    }

    /// A single shape on a progression.
    pub fn track(
        ring: RingKind,
        start: i64,
        step: i64,
        profile: ProfileSum,
    ) -> Result<Self, SeqError> {
        if start < 1 || step < 1 {
            return Err(SeqError::BadProfile("progression must be positive".into()));
        }
        if profile.ring() != ring {
            return Err(SeqError::RingMismatch(ring, profile.ring()));
        }
        if !ring.contains_rationals() && !profile.is_constant() {
            return Err(SeqError::NeedsRationals(ring));
        }
        for (s, _) in profile.terms() {
            if s.log_rho() > 0.0 {
                return Err(SeqError::BadProfile(format!("{s} is unbounded")));
            }
            if s.eval(start).is_none() {
                return Err(SeqError::BadProfile(format!("{s} undefined at {start}")));
            }
            for ((d, c), _) in &s.logs {
                let step_q = *d * Q::from_integer(step);
                if !(*d * Q::from_integer(start) + *c).is_integer() || !step_q.is_integer() {
                    return Err(SeqError::BadProfile(format!(
                        "log argument of {s} is not integral on the track"
                    )));
                }
            }
        }
        Ok(SymSeq::from_tracks(
            ring,
            &[Track {
                start,
                step,
                profile,
            }],
            &[],
        ))
    }

    /// `c·n^{-e}` (equivalently `c·(k+1)^{-e}` with `k = n − 1`).
    pub fn pow(c: Value, e: Q) -> Result<Self, SeqError> {
        if e.is_negative() {
            return Err(SeqError::BadProfile(format!("negative exponent {e}")));
        }
        let ring = c.ring();
        SymSeq::track(
            ring,
            1,
            1,
            ProfileSum::single(Shape::power(Q::zero(), e), c),
        )
    }

    /// `c·r^{n−1}` for a rational `0 < r ≤ 1`.
    pub fn geom(c: Value, r: &BigRational) -> Result<Self, SeqError> {
        if !r.is_positive() || *r > BigRational::from_integer(1.into()) {
            return Err(SeqError::BadProfile(format!("ratio {r} outside (0,1]")));
        }
        let ring = c.ring();
        let amp = c.scale(&r.recip());
        SymSeq::track(ring, 1, 1, ProfileSum::single(Shape::geometric(r), amp))
    }

    /// `n^{-e} · log(n+1)^{-g}`.
    pub fn logpow(ring: RingKind, e: Q, g: Q) -> Result<Self, SeqError> {
        if e.is_negative() || g.is_negative() {
            return Err(SeqError::BadProfile("negative exponent".into()));
        }
        let shape = Shape::power(Q::zero(), e)
            .mul(&Shape::log(Q::from_integer(1), Q::from_integer(1), g))
            .pop()
            .expect("product of a power and a log is a single shape")
            .1;
        SymSeq::track(ring, 1, 1, ProfileSum::single(shape, Value::one(ring)))
    }

    /// Value at `n`.
    pub fn eval(&self, n: i64) -> Value {
        if n < 1 {
            return Value::zero(self.ring);
        }
        if n < self.threshold {
            return self
                .finite
                .get(&n)
                .cloned()
                .unwrap_or_else(|| Value::zero(self.ring));
        }
        match self.classes.get(&n.rem_euclid(self.period)) {
            Some(p) => p.eval(n).expect("profile valid past threshold"),
            None => Value::zero(self.ring),
        }
    }

    /// The canonical tracks (one per nonzero residue class).
    pub fn tracks(&self) -> Vec<Track> {
        self.classes
            .iter()
            .map(|(r, p)| Track {
                start: first_at_least(self.threshold, *r, self.period),
                step: self.period,
                profile: p.clone(),
            })
            .collect()
    }

    /// Nonzero values below the threshold.
    pub fn points(&self) -> Vec<(i64, Value)> {
        self.finite.iter().map(|(n, v)| (*n, v.clone())).collect()
    }

    pub fn support(&self) -> ProgressionSet {
        let progs: Vec<(i64, i64)> = self.tracks().iter().map(|t| (t.start, t.step)).collect();
        let fin: Vec<i64> = self.finite.keys().copied().collect();
        ProgressionSet::from_parts(&progs, &fin)
    }

    pub fn has_finite_support(&self) -> bool {
        self.classes.is_empty()
    }

    /// Whether every value lies in the ring (no irrational magnitudes) and
    /// there are finitely many distinct values.
    pub fn is_finitely_valued(&self) -> bool {
        self.classes.values().all(|p| p.as_constant().is_some())
            && self.finite.values().all(|v| v.as_scalar().is_some())
            && self
                .classes
                .values()
                .all(|p| p.as_constant().and_then(|v| v.as_scalar()).is_some())
    }

    fn check_ring(&self, other: &SymSeq) -> Result<(), SeqError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(SeqError::RingMismatch(self.ring, other.ring))
        }
    }

    pub fn add(&self, other: &SymSeq) -> Result<SymSeq, SeqError> {
        self.check_ring(other)?;
        let mut tracks = self.tracks();
        tracks.extend(other.tracks());
        let mut points = self.points();
        points.extend(other.points());
        Ok(SymSeq::from_tracks(self.ring, &tracks, &points))
    }

    pub fn neg(&self) -> SymSeq {
        SymSeq {
            ring: self.ring,
            threshold: self.threshold,
            period: self.period,
            classes: self.classes.iter().map(|(r, p)| (*r, p.neg())).collect(),
            finite: self.finite.iter().map(|(n, v)| (*n, v.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &SymSeq) -> Result<SymSeq, SeqError> {
        self.add(&other.neg())
    }

    /// Pointwise product, `self` on the left.
    pub fn mul(&self, other: &SymSeq) -> Result<SymSeq, SeqError> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(SymSeq::zero(self.ring));
        }
        let t = self.threshold.max(other.threshold);
        let m = self.period.lcm(&other.period);
        let mut classes = BTreeMap::new();
        for n in t..t + m {
            let (Some(a), Some(b)) = (
                self.classes.get(&n.rem_euclid(self.period)),
                other.classes.get(&n.rem_euclid(other.period)),
            ) else {
                continue;
            };
            classes.insert(n.rem_euclid(m), a.mul(b));
        }
        let mut finite = BTreeMap::new();
        for n in 1..t {
            let a = self.eval(n);
            if a.is_zero() {
                continue;
            }
            finite.insert(n, a.mul(&other.eval(n)));
        }
        Ok(SymSeq::canonical(self.ring, t, m, classes, finite))
    }

    pub fn scale_left(&self, v: &Value) -> SymSeq {
        self.map_values(|p| p.scale_left(v), |x| v.mul(x))
    }

    pub fn scale_right(&self, v: &Value) -> SymSeq {
        self.map_values(|p| p.scale_right(v), |x| x.mul(v))
    }

    pub fn conjugate(&self) -> SymSeq {
        self.map_values(ProfileSum::conjugate, Value::conjugate)
    }

    fn map_values(
        &self,
        fp: impl Fn(&ProfileSum) -> ProfileSum,
        fv: impl Fn(&Value) -> Value,
    ) -> SymSeq {
        SymSeq::canonical(
            self.ring,
            self.threshold,
            self.period,
            self.classes.iter().map(|(r, p)| (*r, fp(p))).collect(),
            self.finite.iter().map(|(n, v)| (*n, fv(v))).collect(),
        )
    }

    pub fn restrict(&self, set: &ProgressionSet) -> SymSeq {
        self.mul(&SymSeq::chi(self.ring, set)).expect("same ring")
    }

    /// The action `(f_* a)(n) = a(f†(n))` on `ran f`, zero elsewhere.
    pub fn act(&self, f: &PInj) -> SymSeq {
        let mut tracks = Vec::new();
        let mut points = Vec::new();
        for (n, w) in f.finite_pairs() {
            let v = self.eval(n);
            if !v.is_zero() {
                points.push((w, v));
            }
        }
        let own = self.tracks();
        for piece in f.pieces() {
            let inv = piece.rule.inverse();
            for tr in &own {
                let Some((s, m)) =
                    intersect_progressions(tr.start, tr.step, piece.start, piece.step)
                else {
                    continue;
                };
                let image_start = piece.rule.eval_int(s).expect("integral");
                let image_step = (piece.rule.slope * Q::from_integer(m)).to_integer();
                tracks.push(Track {
                    start: image_start,
                    step: image_step,
                    profile: tr.profile.pullback(inv.slope, inv.offset),
                });
            }
            // domain points of the piece below our threshold
            let mut n = piece.start;
            while n < self.threshold {
                let v = self.eval(n);
                if !v.is_zero() {
                    points.push((piece.rule.eval_int(n).expect("integral"), v));
                }
                n += piece.step;
            }
        }
        SymSeq::from_tracks(self.ring, &tracks, &points)
    }

    /// Membership in a symmetric ideal. Nonzero amplitudes count as norm 1.
    pub fn member(&self, tag: &IdealTag) -> bool {
        self.classes.values().all(|p| tag.admits(p.decay()))
    }

    /// `(phase, modulus)` with `phase · modulus = self`, when each residue
    /// class has amplitudes sharing one unit and rational moduli.
    pub fn modulus_and_phase(&self) -> Option<(SymSeq, SymSeq)> {
        let ring = self.ring;
        let mut ph_classes = BTreeMap::new();
        let mut mod_classes = BTreeMap::new();
        for (r, p) in &self.classes {
            let mut unit: Option<Value> = None;
            let mut modulus = ProfileSum::zero(ring);
            for (s, v) in p.terms() {
                let (u, m) = v.modulus_unit()?;
                match &unit {
                    Some(prev) if *prev != u => return None,
                    _ => unit = Some(u),
                }
                modulus.insert_add(s.clone(), m);
            }
            if let Some(u) = unit {
                ph_classes.insert(*r, ProfileSum::constant(u));
                mod_classes.insert(*r, modulus);
            }
        }
        let mut ph_fin = BTreeMap::new();
        let mut mod_fin = BTreeMap::new();
        for (n, v) in &self.finite {
            let (u, m) = v.modulus_unit()?;
            ph_fin.insert(*n, u);
            mod_fin.insert(*n, m);
        }
        Some((
            SymSeq::canonical(ring, self.threshold, self.period, ph_classes, ph_fin),
            SymSeq::canonical(ring, self.threshold, self.period, mod_classes, mod_fin),
        ))
    }

    /// Values at `1..=n`.
    pub fn window(&self, n: i64) -> Vec<Value> {
        (1..=n).map(|i| self.eval(i)).collect()
    }
}

impl fmt::Display for SymSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (n, v) in &self.finite {
            parts.push(format!("({v})*e({n})"));
        }
        for t in self.tracks() {
            parts.push(format!("track({},{})[{}]", t.start, t.step, t.profile));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Rational `Q` from a big rational, when small enough.
pub fn small_q(q: &BigRational) -> Option<Q> {
    use num::ToPrimitive;
    Some(Q::new(q.numer().to_i64()?, q.denom().to_i64()?))
}
