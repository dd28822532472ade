//! Exact positive reals of the form `Π p^{x_p} · Π log(r)^{h_r}` and ring
//! values with such magnitudes as a basis.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::pinj::Q;
use crate::scalars::{RingKind, RingValue};

/// Prime factorization of a positive integer.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `(r, t)` with `n = r^t` and `t` maximal.
fn perfect_power_root(n: u64) -> (u64, u32) {
    let f = factor(n);
    let g = f
        .iter()
        .fold(0u32, |acc, &(_, k)| num::integer::gcd(acc, k));
    if g <= 1 {
        return (n, 1);
    }
    let r = f.iter().map(|&(p, k)| p.pow(k / g)).product();
    (r, g)
}

fn big_to_u64(n: &BigInt) -> u64 {
    n.to_u64()
        .expect("integer too large for exact factorization")
}

fn floor_q(x: Q) -> i64 {
    x.floor().to_integer()
}

fn int_pow(p: u64, e: i64) -> BigRational {
    let b = BigRational::from_integer(BigInt::from(p));
    b.pow(i32::try_from(e).expect("exponent fits"))
}

/// A positive real `Π p^{x_p} · Π log(r)^{h_r}` with every `x_p ∈ (0, 1)`
/// and every `r ≥ 2` not a perfect power.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Magnitude {
    primes: BTreeMap<u64, Q>,
    logs: BTreeMap<u64, Q>,
}

impl Magnitude {
    pub fn one() -> Self {
        Magnitude::default()
    }

    pub fn is_one(&self) -> bool {
        self.primes.is_empty() && self.logs.is_empty()
    }

    /// `Π p^{e_p}` for arbitrary rational exponents, split as rational × magnitude.
    pub fn from_prime_powers(exps: impl IntoIterator<Item = (u64, Q)>) -> (BigRational, Self) {
        let mut coef = BigRational::one();
        let mut m = Magnitude::one();
        for (p, e) in exps {
            let total = m.primes.get(&p).copied().unwrap_or_else(Q::zero) + e;
            let fl = floor_q(total);
            coef *= int_pow(p, fl);
            let frac = total - Q::from_integer(fl);
            if frac.is_zero() {
                m.primes.remove(&p);
            } else {
                m.primes.insert(p, frac);
            }
        }
        (coef, m)
    }

    /// `r^x` for a positive rational `r`.
    pub fn rational_power(r: &BigRational, x: Q) -> (BigRational, Self) {
        assert!(r.is_positive(), "power of non-positive rational");
        if x.is_zero() {
            return (BigRational::one(), Magnitude::one());
        }
        let mut exps = Vec::new();
        for (p, k) in factor(big_to_u64(r.numer())) {
            exps.push((p, x * Q::from_integer(k as i64)));
        }
        for (p, k) in factor(big_to_u64(r.denom())) {
            exps.push((p, -x * Q::from_integer(k as i64)));
        }
        Magnitude::from_prime_powers(exps)
    }

    /// `log(v)^h` for an integer `v ≥ 2`.
    pub fn log_power(v: u64, h: Q) -> (BigRational, Self) {
        assert!(v >= 2, "log argument must be at least 2");
        if h.is_zero() {
            return (BigRational::one(), Magnitude::one());
        }
        let (r, t) = perfect_power_root(v);
        let (coef, mut m) =
            Magnitude::rational_power(&BigRational::from_integer(BigInt::from(t)), h);
        m.logs.insert(r, h);
        (coef, m)
    }

    pub fn mul(&self, other: &Magnitude) -> (BigRational, Magnitude) {
        let exps = self
            .primes
            .iter()
            .chain(other.primes.iter())
            .map(|(p, x)| (*p, *x));
        let (coef, mut m) = Magnitude::from_prime_powers(exps);
        m.logs = self.logs.clone();
        for (r, h) in &other.logs {
            let e = m.logs.entry(*r).or_insert_with(Q::zero);
            *e += *h;
            if e.is_zero() {
                m.logs.remove(r);
            }
        }
        (coef, m)
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = 1.0f64;
        for (p, x) in &self.primes {
            v *= (*p as f64).powf(x.to_f64().unwrap_or(0.0));
        }
        for (r, h) in &self.logs {
            v *= (*r as f64).ln().powf(h.to_f64().unwrap_or(0.0));
        }
        v
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (p, x) in &self.primes {
            parts.push(format!("{p}^({x})"));
        }
        for (r, h) in &self.logs {
            parts.push(format!("log({r})^({h})"));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A ring element with coefficients over a basis of magnitudes.
///
/// Over rings that do not contain ℚ only the trivial magnitude occurs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Value {
    ring: RingKind,
    terms: BTreeMap<Magnitude, RingValue>,
}

impl Value {
    pub fn zero(ring: RingKind) -> Self {
        Value {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: RingKind) -> Self {
        Value::scalar(RingValue::one(ring))
    }

    pub fn scalar(v: RingValue) -> Self {
        let ring = v.kind();
        let mut terms = BTreeMap::new();
        if !v.is_zero() {
            terms.insert(Magnitude::one(), v);
        }
        Value { ring, terms }
    }

    pub fn from_rational(ring: RingKind, q: &BigRational) -> Option<Self> {
        RingValue::from_rational(ring, q).map(Value::scalar)
    }

    /// `coef · mag` in `ring`.
    pub fn term(ring: RingKind, coef: &BigRational, mag: Magnitude) -> Option<Self> {
        let c = RingValue::from_rational(ring, coef)?;
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mag, c);
        }
        Some(Value { ring, terms })
    }

    pub fn ring(&self) -> RingKind {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Magnitude, &RingValue)> {
        self.terms.iter()
    }

    /// The plain ring value, when no irrational magnitude is involved.
    pub fn as_scalar(&self) -> Option<RingValue> {
        match self.terms.len() {
            0 => Some(RingValue::zero(self.ring)),
            1 => {
                let (m, v) = self.terms.iter().next().expect("one term");
                m.is_one().then(|| v.clone())
            }
            _ => None,
        }
    }

    fn insert_add(&mut self, m: Magnitude, v: RingValue) {
        if v.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                let s = &*e + &v;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *e = s;
                }
            }
            None => {
                self.terms.insert(m, v);
            }
        }
    }

    pub fn add(&self, other: &Value) -> Value {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.insert_add(m.clone(), v.clone());
        }
        out
    }

    pub fn neg(&self) -> Value {
        Value {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.negate()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Value) -> Value {
        self.add(&other.neg())
    }

    /// Product with `self` on the left.
    pub fn mul(&self, other: &Value) -> Value {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        let mut out = Value::zero(self.ring);
        for (m1, v1) in &self.terms {
            for (m2, v2) in &other.terms {
                let (c, m) = m1.mul(m2);
                let p = v1 * v2;
                let p = if c.is_one() {
                    p
                } else {
                    p.scale(&c)
                        .expect("magnitudes only occur over rings containing Q")
                };
                out.insert_add(m, p);
            }
        }
        out
    }

    pub fn scale(&self, q: &BigRational) -> Value {
        if q.is_one() {
            return self.clone();
        }
        let mut out = Value::zero(self.ring);
        for (m, v) in &self.terms {
            out.insert_add(m.clone(), v.scale(q).expect("rational scaling in ring"));
        }
        out
    }

    pub fn mul_magnitude(&self, coef: &BigRational, mag: &Magnitude) -> Value {
        let t = Value::term(self.ring, coef, mag.clone()).expect("rational scaling in ring");
        self.mul(&t)
    }

    pub fn conjugate(&self) -> Value {
        Value {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.conjugate()))
                .collect(),
        }
    }

    /// Split as `unit · modulus` when the value is a single magnitude term with
    /// a coefficient of rational modulus.
    pub fn modulus_unit(&self) -> Option<(Value, Value)> {
        if self.is_zero() {
            return Some((self.clone(), self.clone()));
        }
        if self.terms.len() != 1 {
            return None;
        }
        let (m, v) = self.terms.iter().next().expect("one term");
        let (u, r) = v.try_modulus_unit().ok()??;
        let mut modulus = Value::zero(self.ring);
        modulus.insert_add(m.clone(), r);
        Some((Value::scalar(u), modulus))
    }

    /// The unit part of [`Value::modulus_unit`] only.
    pub fn phase(&self) -> Option<Value> {
        self.modulus_unit().map(|p| p.0)
    }

    /// Approximate complex value `(re, im)`; matrices report their (1,1) entry.
    pub fn to_f64(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (m, v) in &self.terms {
            let w = m.to_f64();
            let (a, b) = match v {
                RingValue::Integer(n) => (n.to_f64().unwrap_or(f64::NAN), 0.0),
                RingValue::Rational(q) => (q.to_f64().unwrap_or(f64::NAN), 0.0),
                RingValue::Gaussian(a, b) => (
                    a.to_f64().unwrap_or(f64::NAN),
                    b.to_f64().unwrap_or(f64::NAN),
                ),
                RingValue::IntMod { residue, .. } => (*residue as f64, 0.0),
                RingValue::Mat2(x) => (x[0].to_f64().unwrap_or(f64::NAN), 0.0),
            };
            re += a * w;
            im += b * w;
        }
        (re, im)
    }
}

fn needs_parens(v: &RingValue) -> bool {
    let s = v.to_string();
    s[1..].contains(['+', '-']) || s.contains('/') || s.ends_with('i')
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "{}", RingValue::zero(self.ring));
        }
        let mut first = true;
        for (m, v) in &self.terms {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if m.is_one() {
                if self.terms.len() > 1 && needs_parens(v) {
                    write!(f, "({v})")?;
                } else {
                    write!(f, "{v}")?;
                }
            } else if v.is_one() {
                write!(f, "{m}")?;
            } else if needs_parens(v) {
                write!(f, "({v})*{m}")?;
            } else {
                write!(f, "{v}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::q;

    #[test]
    fn square_root_normalization() {
        let (c, m) = Magnitude::rational_power(&q(8, 1), Q::new(1, 2));
        assert_eq!(c, q(2, 1));
        assert_eq!(m.to_string(), "2^(1/2)");
        let (c2, m2) = m.mul(&m);
        assert_eq!(c2, q(2, 1));
        assert!(m2.is_one());
    }

    #[test]
    fn log_of_perfect_power() {
        let (c, m) = Magnitude::log_power(8, Q::from_integer(-1));
        assert_eq!(c, q(1, 3));
        assert_eq!(m.to_string(), "log(2)^(-1)");
    }

    #[test]
    fn value_cancellation() {
        let r = RingKind::Rational;
        let (c, m) = Magnitude::rational_power(&q(2, 1), Q::new(1, 2));
        let a = Value::term(r, &c, m).unwrap();
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.mul(&a), Value::from_rational(r, &q(2, 1)).unwrap());
    }
}
