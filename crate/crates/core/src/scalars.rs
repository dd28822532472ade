//! Exact coefficient rings.
//!
//! Every coefficient that flows through the calculus is a [`RingValue`]. The
//! variants model the integers, the rationals, the Gaussian rationals, the
//! residues modulo `m`, and 2×2 rational matrices (the one noncommutative
//! ring, used to make sure nothing silently assumes commutativity).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("ring mismatch: {0} vs {1}")]
    VariantMismatch(RingKind, RingKind),
    #[error("no rational modulus for {0}")]
    NoModulus(String),
    #[error("cannot parse {text:?} as an element of {ring}")]
    Parse { ring: RingKind, text: String },
    #[error("unknown ring {0:?}")]
    UnknownRing(String),
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
}

/// The ring a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingKind {
    Integer,
    Rational,
    Gaussian,
    IntMod(u64),
    Mat2,
}

impl RingKind {
    /// Whether ℚ embeds in the ring (needed for decaying sequence profiles).
    pub fn contains_rationals(self) -> bool {
        matches!(
            self,
            RingKind::Rational | RingKind::Gaussian | RingKind::Mat2
        )
    }

    pub fn is_field(self) -> bool {
        match self {
            RingKind::Rational | RingKind::Gaussian => true,
            RingKind::IntMod(m) => is_prime(m),
            _ => false,
        }
    }

    pub fn has_modulus(self) -> bool {
        matches!(
            self,
            RingKind::Integer | RingKind::Rational | RingKind::Gaussian
        )
    }

    pub fn parse(s: &str) -> Result<RingKind, ScalarError> {
        let t = s.trim();
        match t {
            "Z" | "ZZ" | "int" => Ok(RingKind::Integer),
            "Q" | "QQ" | "rat" => Ok(RingKind::Rational),
            "Qi" | "Q(i)" | "gauss" => Ok(RingKind::Gaussian),
            "M2" | "M2Q" | "M2(Q)" | "mat2" => Ok(RingKind::Mat2),
            _ => {
                let digits = t
                    .strip_prefix('m')
                    .or_else(|| t.strip_prefix("F"))
                    .or_else(|| t.strip_prefix("Z/"))
                    .ok_or_else(|| ScalarError::UnknownRing(t.to_string()))?;
                let m: u64 = digits
                    .parse()
                    .map_err(|_| ScalarError::UnknownRing(t.to_string()))?;
                if m < 2 {
                    return Err(ScalarError::BadModulus(m));
                }
                Ok(RingKind::IntMod(m))
            }
        }
    }
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingKind::Integer => write!(f, "Z"),
            RingKind::Rational => write!(f, "Q"),
            RingKind::Gaussian => write!(f, "Qi"),
            RingKind::IntMod(m) => write!(f, "m{m}"),
            RingKind::Mat2 => write!(f, "M2"),
        }
    }
}

fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact ring element.
///
/// Rationals are kept in lowest terms with positive denominator (guaranteed by
/// `BigRational`); residues live in `[0, m)`; `Mat2` is row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingValue {
    Integer(BigInt),
    Rational(BigRational),
    Gaussian(BigRational, BigRational),
    IntMod { modulus: u64, residue: u64 },
    Mat2(Box<[BigRational; 4]>),
}

impl RingValue {
    pub fn kind(&self) -> RingKind {
        match self {
            RingValue::Integer(_) => RingKind::Integer,
            RingValue::Rational(_) => RingKind::Rational,
            RingValue::Gaussian(..) => RingKind::Gaussian,
            RingValue::IntMod { modulus, .. } => RingKind::IntMod(*modulus),
            RingValue::Mat2(_) => RingKind::Mat2,
        }
    }

    pub fn zero(kind: RingKind) -> RingValue {
        RingValue::from_integer(kind, &BigInt::zero())
    }

    pub fn one(kind: RingKind) -> RingValue {
        RingValue::from_integer(kind, &BigInt::one())
    }

    /// Image of an integer under the unique ring map ℤ → R.
    pub fn from_integer(kind: RingKind, n: &BigInt) -> RingValue {
        match kind {
            RingKind::Integer => RingValue::Integer(n.clone()),
            RingKind::Rational => RingValue::Rational(BigRational::from_integer(n.clone())),
            RingKind::Gaussian => {
                RingValue::Gaussian(BigRational::from_integer(n.clone()), BigRational::zero())
            }
            RingKind::IntMod(m) => {
                let r = n.mod_floor(&BigInt::from(m));
                RingValue::IntMod {
                    modulus: m,
                    residue: u64::try_from(r).expect("residue fits"),
                }
            }
            RingKind::Mat2 => {
                let q = BigRational::from_integer(n.clone());
                RingValue::Mat2(Box::new([
                    q.clone(),
                    BigRational::zero(),
                    BigRational::zero(),
                    q,
                ]))
            }
        }
    }

    pub fn from_i64(kind: RingKind, n: i64) -> RingValue {
        RingValue::from_integer(kind, &BigInt::from(n))
    }

    /// Image of a rational, when it exists in the ring.
    pub fn from_rational(kind: RingKind, q: &BigRational) -> Option<RingValue> {
        match kind {
            RingKind::Rational => Some(RingValue::Rational(q.clone())),
            RingKind::Gaussian => Some(RingValue::Gaussian(q.clone(), BigRational::zero())),
            RingKind::Mat2 => Some(RingValue::Mat2(Box::new([
                q.clone(),
                BigRational::zero(),
                BigRational::zero(),
                q.clone(),
            ]))),
            RingKind::Integer => q.is_integer().then(|| RingValue::Integer(q.to_integer())),
            RingKind::IntMod(m) => {
                let num = RingValue::from_integer(kind, q.numer());
                let den = RingValue::from_integer(kind, q.denom()).inverse()?;
                let _ = m;
                Some(&num * &den)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingValue::Integer(n) => n.is_zero(),
            RingValue::Rational(q) => q.is_zero(),
            RingValue::Gaussian(a, b) => a.is_zero() && b.is_zero(),
            RingValue::IntMod { residue, .. } => *residue == 0,
            RingValue::Mat2(m) => m.iter().all(Zero::is_zero),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == RingValue::one(self.kind())
    }

    fn check(&self, other: &RingValue) -> Result<(), ScalarError> {
        if self.kind() == other.kind() {
            Ok(())
        } else {
            Err(ScalarError::VariantMismatch(self.kind(), other.kind()))
        }
    }

    pub fn checked_add(&self, other: &RingValue) -> Result<RingValue, ScalarError> {
        self.check(other)?;
        Ok(self.add_same(other))
    }

    pub fn checked_sub(&self, other: &RingValue) -> Result<RingValue, ScalarError> {
        self.check(other)?;
        Ok(self.add_same(&other.negate()))
    }

    pub fn checked_mul(&self, other: &RingValue) -> Result<RingValue, ScalarError> {
        self.check(other)?;
        Ok(self.mul_same(other))
    }

    fn add_same(&self, other: &RingValue) -> RingValue {
        use RingValue::*;
        match (self, other) {
            (Integer(a), Integer(b)) => Integer(a + b),
            (Rational(a), Rational(b)) => Rational(a + b),
            (Gaussian(a, b), Gaussian(c, d)) => Gaussian(a + c, b + d),
            (
                IntMod {
                    modulus,
                    residue: a,
                },
                IntMod { residue: b, .. },
            ) => IntMod {
                modulus: *modulus,
                residue: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
            },
            (Mat2(a), Mat2(b)) => Mat2(Box::new([
                &a[0] + &b[0],
                &a[1] + &b[1],
                &a[2] + &b[2],
                &a[3] + &b[3],
            ])),
            (a, b) => panic!("ring mismatch: {} vs {}", a.kind(), b.kind()),
        }
    }

    fn mul_same(&self, other: &RingValue) -> RingValue {
        use RingValue::*;
        match (self, other) {
            (Integer(a), Integer(b)) => Integer(a * b),
            (Rational(a), Rational(b)) => Rational(a * b),
            (Gaussian(a, b), Gaussian(c, d)) => Gaussian(a * c - b * d, a * d + b * c),
            (
                IntMod {
                    modulus,
                    residue: a,
                },
                IntMod { residue: b, .. },
            ) => IntMod {
                modulus: *modulus,
                residue: ((*a as u128 * *b as u128) % *modulus as u128) as u64,
            },
            (Mat2(a), Mat2(b)) => Mat2(Box::new([
                &a[0] * &b[0] + &a[1] * &b[2],
                &a[0] * &b[1] + &a[1] * &b[3],
                &a[2] * &b[0] + &a[3] * &b[2],
                &a[2] * &b[1] + &a[3] * &b[3],
            ])),
            (a, b) => panic!("ring mismatch: {} vs {}", a.kind(), b.kind()),
        }
    }

    pub fn negate(&self) -> RingValue {
        use RingValue::*;
        match self {
            Integer(a) => Integer(-a),
            Rational(a) => Rational(-a),
            Gaussian(a, b) => Gaussian(-a, -b),
            IntMod { modulus, residue } => IntMod {
                modulus: *modulus,
                residue: (modulus - residue) % modulus,
            },
            Mat2(a) => Mat2(Box::new([-&a[0], -&a[1], -&a[2], -&a[3]])),
        }
    }

    /// Complex conjugation on ℚ(i), transpose on 2×2 matrices, identity elsewhere.
    pub fn conjugate(&self) -> RingValue {
        match self {
            RingValue::Gaussian(a, b) => RingValue::Gaussian(a.clone(), -b),
            RingValue::Mat2(a) => RingValue::Mat2(Box::new([
                a[0].clone(),
                a[2].clone(),
                a[1].clone(),
                a[3].clone(),
            ])),
            other => other.clone(),
        }
    }

    /// Two-sided inverse, if the element is a unit.
    pub fn inverse(&self) -> Option<RingValue> {
        use RingValue::*;
        match self {
            Integer(a) => (a.abs().is_one()).then(|| Integer(a.clone())),
            Rational(a) => (!a.is_zero()).then(|| Rational(a.recip())),
            Gaussian(a, b) => {
                let n = a * a + b * b;
                (!n.is_zero()).then(|| Gaussian(a / &n, -b / &n))
            }
            IntMod { modulus, residue } => {
                let g = BigInt::from(*residue).extended_gcd(&BigInt::from(*modulus));
                if !g.gcd.is_one() {
                    return None;
                }
                let r = g.x.mod_floor(&BigInt::from(*modulus));
                Some(IntMod {
                    modulus: *modulus,
                    residue: u64::try_from(r).ok()?,
                })
            }
            Mat2(m) => {
                let det = &m[0] * &m[3] - &m[1] * &m[2];
                if det.is_zero() {
                    return None;
                }
                Some(Mat2(Box::new([
                    &m[3] / &det,
                    -&m[1] / &det,
                    -&m[2] / &det,
                    &m[0] / &det,
                ])))
            }
        }
    }

    /// Multiply by a rational scalar (central in every ring that contains ℚ).
    pub fn scale(&self, q: &BigRational) -> Option<RingValue> {
        let s = RingValue::from_rational(self.kind(), q)?;
        Some(&s * self)
    }

    /// Split `a` as `unit · modulus` with `modulus = |a|` rational, if possible.
    ///
    /// Zero maps to `(0, 0)`. Returns `Ok(None)` when `|a|` is irrational.
    pub fn try_modulus_unit(&self) -> Result<Option<(RingValue, RingValue)>, ScalarError> {
        let kind = self.kind();
        if self.is_zero() {
            return Ok(Some((RingValue::zero(kind), RingValue::zero(kind))));
        }
        match self {
            RingValue::Integer(a) => Ok(Some((
                RingValue::Integer(a.signum()),
                RingValue::Integer(a.abs()),
            ))),
            RingValue::Rational(a) => Ok(Some((
                RingValue::Rational(a.signum()),
                RingValue::Rational(a.abs()),
            ))),
            RingValue::Gaussian(a, b) => {
                let n = a * a + b * b;
                let Some(m) = rational_sqrt(&n) else {
                    return Ok(None);
                };
                Ok(Some((
                    RingValue::Gaussian(a / &m, b / &m),
                    RingValue::Gaussian(m, BigRational::zero()),
                )))
            }
            other => Err(ScalarError::NoModulus(other.to_string())),
        }
    }

    /// Parse in a known ring. Integers parse in every ring.
    pub fn parse(kind: RingKind, text: &str) -> Result<RingValue, ScalarError> {
        let err = || ScalarError::Parse {
            ring: kind,
            text: text.to_string(),
        };
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        match kind {
            RingKind::Integer => t
                .parse::<BigInt>()
                .map(RingValue::Integer)
                .map_err(|_| err()),
            RingKind::Rational => parse_rational(&t).map(RingValue::Rational).ok_or_else(err),
            RingKind::Gaussian => parse_gaussian(&t)
                .map(|(a, b)| RingValue::Gaussian(a, b))
                .ok_or_else(err),
            RingKind::IntMod(m) => {
                let body = match t.strip_prefix('m') {
                    Some(rest) => {
                        let (ms, r) = rest.split_once(':').ok_or_else(err)?;
                        if ms.parse::<u64>().map_err(|_| err())? != m {
                            return Err(err());
                        }
                        r.to_string()
                    }
                    None => t.clone(),
                };
                let n: BigInt = body.parse().map_err(|_| err())?;
                Ok(RingValue::from_integer(kind, &n))
            }
            RingKind::Mat2 => {
                if let Some(q) = parse_rational(&t) {
                    return Ok(RingValue::from_rational(kind, &q).expect("Q embeds in M2"));
                }
                let inner = t
                    .strip_prefix("[[")
                    .and_then(|s| s.strip_suffix("]]"))
                    .ok_or_else(err)?;
                let (r0, r1) = inner.split_once("],[").ok_or_else(err)?;
                let mut vals = Vec::with_capacity(4);
                for part in r0.split(',').chain(r1.split(',')) {
                    vals.push(parse_rational(part).ok_or_else(err)?);
                }
                let arr: [BigRational; 4] = vals.try_into().map_err(|_| err())?;
                Ok(RingValue::Mat2(Box::new(arr)))
            }
        }
    }

    /// Guess the ring from the literal's shape: `m5:3`, `[[..]]`, `..i`, `p/q`, else ℤ.
    pub fn parse_any(text: &str) -> Result<RingValue, ScalarError> {
        let t = text.trim();
        let kind = if let Some(rest) = t.strip_prefix('m') {
            let m = rest
                .split_once(':')
                .and_then(|(m, _)| m.parse::<u64>().ok())
                .ok_or_else(|| ScalarError::Parse {
                    ring: RingKind::IntMod(2),
                    text: t.to_string(),
                })?;
            RingKind::IntMod(m)
        } else if t.starts_with('[') {
            RingKind::Mat2
        } else if t.ends_with('i') {
            RingKind::Gaussian
        } else if t.contains('/') {
            RingKind::Rational
        } else {
            RingKind::Integer
        };
        RingValue::parse(kind, t)
    }
}

fn parse_rational(t: &str) -> Option<BigRational> {
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => t.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

fn parse_gaussian(t: &str) -> Option<(BigRational, BigRational)> {
    let Some(body) = t.strip_suffix('i') else {
        return Some((parse_rational(t)?, BigRational::zero()));
    };
    // split at the last sign that is not the leading one
    let split = body
        .char_indices()
        .skip(1)
        .filter(|(_, c)| *c == '+' || *c == '-')
        .map(|(i, _)| i)
        .last();
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => BigRational::one(),
        "-" => -BigRational::one(),
        s => parse_rational(s.strip_prefix('+').unwrap_or(s))?,
    };
    Some((parse_rational(re)?, im))
}

/// Exact square root of a non-negative rational, if it is a rational square.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

fn fmt_rat(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for RingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingValue::Integer(n) => write!(f, "{n}"),
            RingValue::Rational(q) => write!(f, "{}", fmt_rat(q)),
            RingValue::Gaussian(a, b) => {
                if b.is_zero() {
                    write!(f, "{}", fmt_rat(a))
                } else if a.is_zero() {
                    write!(f, "{}i", fmt_rat(b))
                } else if b.is_negative() {
                    write!(f, "{}{}i", fmt_rat(a), fmt_rat(b))
                } else {
                    write!(f, "{}+{}i", fmt_rat(a), fmt_rat(b))
                }
            }
            RingValue::IntMod { modulus, residue } => write!(f, "m{modulus}:{residue}"),
            RingValue::Mat2(m) => write!(
                f,
                "[[{},{}],[{},{}]]",
                fmt_rat(&m[0]),
                fmt_rat(&m[1]),
                fmt_rat(&m[2]),
                fmt_rat(&m[3])
            ),
        }
    }
}

impl Add for &RingValue {
    type Output = RingValue;
    fn add(self, rhs: &RingValue) -> RingValue {
        self.add_same(rhs)
    }
}

impl Sub for &RingValue {
    type Output = RingValue;
    fn sub(self, rhs: &RingValue) -> RingValue {
        self.add_same(&rhs.negate())
    }
}

impl Mul for &RingValue {
    type Output = RingValue;
    fn mul(self, rhs: &RingValue) -> RingValue {
        self.mul_same(rhs)
    }
}

impl Neg for &RingValue {
    type Output = RingValue;
    fn neg(self) -> RingValue {
        self.negate()
    }
}

/// Rational of small integers, for tests and literals.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> RingValue {
        RingValue::parse_any(s).unwrap()
    }

    #[test]
    fn rational_sum() {
        let a = RingValue::Rational(q(1, 2));
        let b = RingValue::Rational(q(1, 3));
        assert_eq!(a.checked_add(&b).unwrap(), RingValue::Rational(q(5, 6)));
    }

    #[test]
    fn gaussian_conjugate() {
        assert_eq!(r("2+3i").conjugate(), r("2-3i"));
    }

    #[test]
    fn intmod_product() {
        let k = RingKind::IntMod(5);
        let a = RingValue::from_i64(k, 3);
        let b = RingValue::from_i64(k, 4);
        assert_eq!(&a * &b, RingValue::from_i64(k, 2));
        assert_eq!(a.inverse().unwrap(), RingValue::from_i64(k, 2));
    }

    #[test]
    fn mismatch_is_reported() {
        let a = RingValue::Rational(q(1, 2));
        let b = RingValue::from_i64(RingKind::Integer, 1);
        assert_eq!(
            a.checked_mul(&b),
            Err(ScalarError::VariantMismatch(
                RingKind::Rational,
                RingKind::Integer
            ))
        );
    }

    #[test]
    fn modulus_of_three_four() {
        let (u, m) = r("3+4i").try_modulus_unit().unwrap().unwrap();
        assert_eq!(u, r("3/5+4/5i"));
        assert_eq!(m, RingValue::parse(RingKind::Gaussian, "5").unwrap());
        assert_eq!(&u * &m, r("3+4i"));
    }

    #[test]
    fn modulus_of_zero_and_irrational() {
        let z = RingValue::zero(RingKind::Gaussian);
        let (u, m) = z.try_modulus_unit().unwrap().unwrap();
        assert!(u.is_zero() && m.is_zero());
        assert_eq!(r("1+1i").try_modulus_unit().unwrap(), None);
        assert!(r("m5:3").try_modulus_unit().is_err());
    }

    #[test]
    fn mat2_is_noncommutative() {
        let a = r("[[1,1],[0,1]]");
        let b = r("[[1,0],[1,1]]");
        assert_ne!(&a * &b, &b * &a);
        assert_eq!(a.conjugate(), b);
    }

    #[test]
    fn literal_round_trip() {
        for s in [
            "3/4",
            "-7",
            "2+3i",
            "-1/2-1i",
            "5i",
            "m5:3",
            "[[1,0],[1/2,-3]]",
        ] {
            let v = r(s);
            assert_eq!(
                RingValue::parse(v.kind(), &v.to_string()).unwrap(),
                v,
                "{s}"
            );
        }
    }
}
