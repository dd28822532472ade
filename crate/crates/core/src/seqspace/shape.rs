//! Decay shapes: functions of the absolute index `n` of the form
//! `ρ^n · Π (n+a)^{-x} · (n+b)^{-m} · Π log(d·n+c)^{-g}`.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use super::magnitude::{factor, Magnitude, Value};
use crate::pinj::Q;
use crate::scalars::RingKind;

pub fn big(q: Q) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

/// A canonical decay shape.
///
/// * `geom` holds the exponents of `ρ = Π p^{x_p}` (empty means `ρ = 1`);
/// * `fracs` maps `a` to `x ∈ (0,1)` for factors `(n+a)^{-x}`;
/// * `pole` is at most one integral factor `(n+b)^{-m}` (partial fractions
///   split products of several);
/// * `logs` maps `(d, c)` to `g > 0` for factors `log(d·n+c)^{-g}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    pub geom: BTreeMap<u64, Q>,
    pub fracs: BTreeMap<Q, Q>,
    pub pole: Option<(Q, u32)>,
    pub logs: BTreeMap<(Q, Q), Q>,
}

/// Asymptotic size of a shape: geometric decay, or `n^{-E} log(n)^{-G}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decay {
    Geometric,
    Power { e: Q, g: Q },
}

impl Shape {
    pub fn constant() -> Self {
        Shape::default()
    }

    pub fn is_constant(&self) -> bool {
        *self == Shape::default()
    }

    /// `(n+a)^{-e}` for `e ≥ 0`.
    pub fn power(a: Q, e: Q) -> Self {
        let mut s = Shape::default();
        let m = e.floor().to_integer();
        let x = e - Q::from_integer(m);
        if !x.is_zero() {
            s.fracs.insert(a, x);
        }
        if m > 0 {
            s.pole = Some((a, m as u32));
        }
        s
    }

    /// `r^n` for a positive rational `r`.
    pub fn geometric(r: &BigRational) -> Self {
        let mut s = Shape::default();
        let num = r.numer().to_u64().expect("small base");
        let den = r.denom().to_u64().expect("small base");
        for (p, k) in factor(num) {
            *s.geom.entry(p).or_insert_with(Q::zero) += Q::from_integer(k as i64);
        }
        for (p, k) in factor(den) {
            *s.geom.entry(p).or_insert_with(Q::zero) -= Q::from_integer(k as i64);
        }
        s.geom.retain(|_, x| !x.is_zero());
        s
    }

    /// `log(d·n+c)^{-g}`.
    pub fn log(d: Q, c: Q, g: Q) -> Self {
        let mut s = Shape::default();
        if !g.is_zero() {
            s.logs.insert((d, c), g);
        }
        s
    }

    /// `ln ρ`, zero when `ρ = 1`.
    pub fn log_rho(&self) -> f64 {
        self.geom
            .iter()
            .map(|(p, x)| x.to_f64().unwrap_or(0.0) * (*p as f64).ln())
            .sum()
    }

    pub fn is_geometric(&self) -> bool {
        !self.geom.is_empty()
    }

    pub fn decay(&self) -> Decay {
        if self.is_geometric() {
            return Decay::Geometric;
        }
        let e = self.fracs.values().copied().sum::<Q>()
            + self
                .pole
                .map_or(Q::zero(), |(_, m)| Q::from_integer(m as i64));
        let g = self.logs.values().copied().sum::<Q>();
        Decay::Power { e, g }
    }

    /// Exact value at `n`, or `None` where a factor is undefined.
    pub fn eval(&self, n: i64) -> Option<(BigRational, Magnitude)> {
        let nq = Q::from_integer(n);
        let (mut coef, mut mag) =
            Magnitude::from_prime_powers(self.geom.iter().map(|(p, x)| (*p, *x * nq)));
        let mut absorb = |c: BigRational, m: Magnitude| {
            let (c2, m2) = mag.mul(&m);
            coef = &coef * &c * c2;
            mag = m2;
        };
        for (a, x) in &self.fracs {
            let base = nq + *a;
            if !base.is_positive() {
                return None;
            }
            let (c, m) = Magnitude::rational_power(&big(base), -*x);
            absorb(c, m);
        }
        if let Some((b, m)) = self.pole {
            let base = nq + b;
            if !base.is_positive() {
                return None;
            }
            absorb(big(base).pow(-(m as i32)), Magnitude::one());
        }
        for ((d, c), g) in &self.logs {
            let v = *d * nq + *c;
            if !v.is_integer() || v.to_integer() < 2 {
                return None;
            }
            let (cc, m) = Magnitude::log_power(v.to_integer() as u64, -*g);
            absorb(cc, m);
        }
        Some((coef, mag))
    }

    /// `shape(s·n' + t)` written as `coef · mag · shape'(n')`, for `s > 0`.
    pub fn pullback(&self, s: Q, t: Q) -> (BigRational, Magnitude, Shape) {
        let (mut coef, mut mag) =
            Magnitude::from_prime_powers(self.geom.iter().map(|(p, x)| (*p, *x * t)));
        let mut out = Shape {
            geom: self.geom.iter().map(|(p, x)| (*p, *x * s)).collect(),
            ..Shape::default()
        };
        let mut absorb = |c: BigRational, m: Magnitude| {
            let (c2, m2) = mag.mul(&m);
            coef = &coef * &c * c2;
            mag = m2;
        };
        for (a, x) in &self.fracs {
            let (c, m) = Magnitude::rational_power(&big(s), -*x);
            absorb(c, m);
            out.fracs.insert((t + *a) / s, *x);
        }
        if let Some((b, m)) = self.pole {
            absorb(big(s).pow(-(m as i32)), Magnitude::one());
            out.pole = Some(((t + b) / s, m));
        }
        for ((d, c), g) in &self.logs {
            out.logs.insert((*d * s, *d * t + *c), *g);
        }
        (coef, mag, out)
    }

    /// Product, expanded into canonical shapes with rational coefficients.
    pub fn mul(&self, other: &Shape) -> Vec<(BigRational, Shape)> {
        let mut base = Shape::default();
        for (p, x) in self.geom.iter().chain(other.geom.iter()) {
            *base.geom.entry(*p).or_insert_with(Q::zero) += *x;
        }
        base.geom.retain(|_, x| !x.is_zero());
        for (k, g) in self.logs.iter().chain(other.logs.iter()) {
            *base.logs.entry(*k).or_insert_with(Q::zero) += *g;
        }
        let mut poles: BTreeMap<Q, u32> = BTreeMap::new();
        for (a, x) in self.fracs.iter().chain(other.fracs.iter()) {
            let e = base.fracs.get(a).copied().unwrap_or_else(Q::zero) + *x;
            if e >= Q::one() {
                *poles.entry(*a).or_insert(0) += 1;
                let rest = e - Q::one();
                if rest.is_zero() {
                    base.fracs.remove(a);
                } else {
                    base.fracs.insert(*a, rest);
                }
            } else {
                base.fracs.insert(*a, e);
            }
        }
        for (b, m) in self.pole.iter().chain(other.pole.iter()) {
            *poles.entry(*b).or_insert(0) += *m;
        }
        let list: Vec<(Q, u32)> = poles.into_iter().collect();
        partial_fractions(&list)
            .into_iter()
            .map(|(pole, c)| {
                let mut s = base.clone();
                s.pole = pole;
                (c, s)
            })
            .collect()
    }

    /// Coefficients `c_k` with `shape(n) = n^{-E} Σ_k c_k n^{-k}` up to `depth`
    /// (log-free shapes with `ρ = 1` only).
    pub fn expansion(&self, depth: usize) -> Vec<BigRational> {
        let mut acc = vec![BigRational::zero(); depth];
        acc[0] = BigRational::one();
        let factors = self
            .fracs
            .iter()
            .map(|(a, x)| (*a, *x))
            .chain(self.pole.map(|(b, m)| (b, Q::from_integer(m as i64))));
        for (a, x) in factors {
            // (1 + a/n)^{-x} = Σ binom(-x, k) a^k n^{-k}
            let mut series = vec![BigRational::zero(); depth];
            let mut term = BigRational::one();
            let ab = big(a);
            let xb = big(x);
            for (k, slot) in series.iter_mut().enumerate() {
                *slot = term.clone();
                let kb = BigRational::from_integer(BigInt::from(k as i64));
                term = &term * (-&xb - &kb) / (&kb + BigRational::one()) * &ab;
            }
            let mut next = vec![BigRational::zero(); depth];
            for i in 0..depth {
                if acc[i].is_zero() {
                    continue;
                }
                for j in 0..depth - i {
                    next[i + j] += &acc[i] * &series[j];
                }
            }
            acc = next;
        }
        acc
    }
}

type PoleKey = Option<(Q, u32)>;

/// Write `Π (n+a_i)^{-m_i}` (distinct `a_i`) as a sum of single poles.
fn partial_fractions(poles: &[(Q, u32)]) -> Vec<(PoleKey, BigRational)> {
    let mut out: BTreeMap<PoleKey, BigRational> = BTreeMap::new();
    expand_poles(poles.to_vec(), BigRational::one(), &mut out);
    out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn expand_poles(
    mut poles: Vec<(Q, u32)>,
    coef: BigRational,
    out: &mut BTreeMap<PoleKey, BigRational>,
) {
    poles.retain(|p| p.1 > 0);
    match poles.len() {
        0 => *out.entry(None).or_insert_with(BigRational::zero) += coef,
        1 => *out.entry(Some(poles[0])).or_insert_with(BigRational::zero) += coef,
        _ => {
            // 1/((n+a)(n+b)) = (1/(b-a)) (1/(n+a) - 1/(n+b))
            let (a, m) = poles[0];
            let (b, k) = poles[1];
            let c = &coef / big(b - a);
            let mut left = poles.clone();
            left[1] = (b, k - 1);
            expand_poles(left, c.clone(), out);
            let mut right = poles;
            right[0] = (a, m - 1);
            expand_poles(right, -c, out);
        }
    }
}

fn fmt_q(q: &Q) -> String {
    q.to_string()
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (p, x) in &self.geom {
            parts.push(format!("nexp({p};{})", fmt_q(x)));
        }
        for (a, x) in &self.fracs {
            parts.push(format!("npow({};{})", fmt_q(a), fmt_q(x)));
        }
        if let Some((b, m)) = self.pole {
            parts.push(format!("npow({};{m})", fmt_q(&b)));
        }
        for ((d, c), g) in &self.logs {
            parts.push(format!("nlog({};{};{})", fmt_q(d), fmt_q(c), fmt_q(g)));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A finite sum of shapes with ring-valued amplitudes, all on one track.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProfileSum {
    ring: RingKind,
    terms: BTreeMap<Shape, Value>,
}

impl ProfileSum {
    pub fn zero(ring: RingKind) -> Self {
        ProfileSum {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(shape: Shape, amp: Value) -> Self {
        let mut p = ProfileSum::zero(amp.ring());
        p.insert_add(shape, amp);
        p
    }

    pub fn constant(v: Value) -> Self {
        ProfileSum::single(Shape::constant(), v)
    }

    pub fn ring(&self) -> RingKind {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Shape, &Value)> {
        self.terms.iter()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Shape::is_constant)
    }

    /// The constant value, when there is no decay.
    pub fn as_constant(&self) -> Option<Value> {
        if self.is_zero() {
            return Some(Value::zero(self.ring));
        }
        (self.terms.len() == 1)
            .then(|| self.terms.get(&Shape::constant()).cloned())
            .flatten()
    }

    pub fn insert_add(&mut self, shape: Shape, amp: Value) {
        if amp.is_zero() {
            return;
        }
        match self.terms.get_mut(&shape) {
            Some(v) => {
                let s = v.add(&amp);
                if s.is_zero() {
                    self.terms.remove(&shape);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(shape, amp);
            }
        }
    }

    pub fn add(&self, other: &ProfileSum) -> ProfileSum {
        let mut out = self.clone();
        for (s, v) in &other.terms {
            out.insert_add(s.clone(), v.clone());
        }
        out
    }

    pub fn neg(&self) -> ProfileSum {
        ProfileSum {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(s, v)| (s.clone(), v.neg()))
                .collect(),
        }
    }

    /// Pointwise product, `self` on the left.
    pub fn mul(&self, other: &ProfileSum) -> ProfileSum {
        let mut out = ProfileSum::zero(self.ring);
        for (s1, v1) in &self.terms {
            for (s2, v2) in &other.terms {
                let amp = v1.mul(v2);
                for (c, s) in s1.mul(s2) {
                    out.insert_add(s, amp.scale(&c));
                }
            }
        }
        out
    }

    pub fn scale_left(&self, v: &Value) -> ProfileSum {
        let mut out = ProfileSum::zero(self.ring);
        for (s, a) in &self.terms {
            out.insert_add(s.clone(), v.mul(a));
        }
        out
    }

    pub fn scale_right(&self, v: &Value) -> ProfileSum {
        let mut out = ProfileSum::zero(self.ring);
        for (s, a) in &self.terms {
            out.insert_add(s.clone(), a.mul(v));
        }
        out
    }

    pub fn conjugate(&self) -> ProfileSum {
        ProfileSum {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(s, v)| (s.clone(), v.conjugate()))
                .collect(),
        }
    }

    pub fn eval(&self, n: i64) -> Option<Value> {
        let mut out = Value::zero(self.ring);
        for (s, v) in &self.terms {
            let (c, m) = s.eval(n)?;
            out = out.add(&v.mul_magnitude(&c, &m));
        }
        Some(out)
    }

    /// Substitute `n = s·n' + t`.
    pub fn pullback(&self, s: Q, t: Q) -> ProfileSum {
        let mut out = ProfileSum::zero(self.ring);
        for (shape, v) in &self.terms {
            let (c, m, sh) = shape.pullback(s, t);
            out.insert_add(sh, v.mul_magnitude(&c, &m));
        }
        out
    }

    /// Dominant asymptotic size of the sum, `None` if zero.
    ///
    /// Log-free shapes are expanded jointly in `1/n` so that cancellation of
    /// leading terms is seen exactly. Shapes with logarithms are grouped by
    /// their leading order; a group whose leading coefficients cancel is
    /// treated as one logarithm smaller.
    pub fn decay(&self) -> Option<Decay> {
        if self.is_zero() {
            return None;
        }
        let mut candidates: Vec<(Q, Q)> = Vec::new();
        let depth = 2 * self.terms.len() + 6;
        let mut series: BTreeMap<Q, Value> = BTreeMap::new();
        let mut log_groups: BTreeMap<(Q, Q), Value> = BTreeMap::new();
        let mut max_e = Q::zero();
        for (s, v) in &self.terms {
            let Decay::Power { e, g } = s.decay() else {
                continue;
            };
            max_e = max_e.max(e);
            if g.is_zero() {
                for (k, c) in s.expansion(depth).into_iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let key = e + Q::from_integer(k as i64);
                    let cur = series
                        .remove(&key)
                        .unwrap_or_else(|| Value::zero(self.ring));
                    let next = cur.add(&v.scale(&c));
                    if !next.is_zero() {
                        series.insert(key, next);
                    }
                }
            } else {
                let cur = log_groups
                    .remove(&(e, g))
                    .unwrap_or_else(|| Value::zero(self.ring));
                log_groups.insert((e, g), cur.add(v));
            }
        }
        let had_power = self
            .terms
            .keys()
            .any(|s| matches!(s.decay(), Decay::Power { .. }));
        if let Some((e, _)) = series.iter().next() {
            candidates.push((*e, Q::zero()));
        } else if had_power && log_groups.is_empty() {
            candidates.push((max_e + Q::from_integer(depth as i64), Q::zero()));
        }
        for ((e, g), v) in log_groups {
            if v.is_zero() {
                candidates.push((e, g + Q::one()));
            } else {
                candidates.push((e, g));
            }
        }
        match candidates.into_iter().min() {
            Some((e, g)) => Some(Decay::Power { e, g }),
            None => Some(Decay::Geometric),
        }
    }
}

impl fmt::Display for ProfileSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, v)| {
                if s.is_constant() {
                    format!("({v})")
                } else {
                    format!("({v})*{s}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
