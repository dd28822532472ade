//! Formal crossed products `Σ α # U_f` with the product
//! `(a # U_f)(b # U_g) = a f_*(b) # U_{fg}`, their normal form modulo the
//! support and additivity relations, and the map onto operators.

use std::collections::BTreeMap;

use crate::gami::{GamiError, OpSum};
use crate::pinj::{Affine, PInj, ProgressionSet, Q};
use crate::scalars::{RingKind, RingValue};
use crate::seqspace::{IdealTag, SeqError, SymSeq, Value};

/// A formal sum of terms `α # U_f`, kept as entered.
#[derive(Debug, Clone)]
pub struct CrossedElem {
    pub ring: RingKind,
    pub terms: Vec<(SymSeq, PInj)>,
}

/// The normal form: past `threshold` every entry is owned by a single affine
/// rule, with its coefficient supported on the rule's image; below it the
/// entries are listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedNormal {
    pub threshold: i64,
    pub points: BTreeMap<(i64, i64), Value>,
    pub rules: BTreeMap<Affine, SymSeq>,
}

impl CrossedNormal {
    pub fn is_zero(&self) -> bool {
        self.points.is_empty() && self.rules.is_empty()
    }
}

/// The column at which two distinct rules meet, if any.
fn meeting_point(a: &Affine, b: &Affine) -> Option<i64> {
    if a.slope == b.slope {
        return None;
    }
    let j: Q = (b.offset - a.offset) / (a.slope - b.slope);
    (j.is_integer() && j.to_integer() >= 1).then(|| j.to_integer())
}

impl CrossedElem {
    pub fn zero(ring: RingKind) -> Self {
        CrossedElem {
            ring,
            terms: vec![],
        }
    }

    pub fn term(alpha: SymSeq, f: PInj) -> Self {
        CrossedElem {
            ring: alpha.ring(),
            terms: vec![(alpha, f)],
        }
    }

    pub fn add(&self, other: &CrossedElem) -> CrossedElem {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        CrossedElem {
            ring: self.ring,
            terms,
        }
    }

    pub fn neg(&self) -> CrossedElem {
        CrossedElem {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(a, f)| (a.neg(), f.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &CrossedElem) -> CrossedElem {
        self.add(&other.neg())
    }

    /// Termwise `a f_*(b) # U_{fg}`.
    pub fn mul(&self, other: &CrossedElem) -> Result<CrossedElem, SeqError> {
        let mut terms = Vec::new();
        for (a, f) in &self.terms {
            for (b, g) in &other.terms {
                let coef = a.mul(&b.act(f))?;
                terms.push((coef, f.compose(g)));
            }
        }
        Ok(CrossedElem {
            ring: self.ring,
            terms,
        })
    }

    /// Canonical representative modulo the relations.
    pub fn normal_form(&self) -> CrossedNormal {
        let ring = self.ring;
        let mut rules: Vec<Affine> = Vec::new();
        for (_, f) in &self.terms {
            for p in f.pieces() {
                if !rules.contains(&p.rule) {
                    rules.push(p.rule);
                }
            }
        }
        let mut threshold = self
            .terms
            .iter()
            .map(|(_, f)| f.threshold())
            .max()
            .unwrap_or(1);
        for (k, a) in rules.iter().enumerate() {
            for b in &rules[k + 1..] {
                if let Some(j) = meeting_point(a, b) {
                    threshold = threshold.max(j + 1);
                }
            }
        }
        let mut points: BTreeMap<(i64, i64), Value> = BTreeMap::new();
        let mut add_point = |i: i64, j: i64, v: Value| {
            let cur = points
                .remove(&(i, j))
                .unwrap_or_else(|| Value::zero(ring))
                .add(&v);
            if !cur.is_zero() {
                points.insert((i, j), cur);
            }
        };
        let mut by_rule: BTreeMap<Affine, SymSeq> = BTreeMap::new();
        for (alpha, f) in &self.terms {
            for (j, i) in f.finite_pairs() {
                add_point(i, j, alpha.eval(i));
            }
            for p in f.pieces() {
                let mut j = p.start;
                while j < threshold {
                    let i = p.rule.eval_int(j).expect("integral on its piece");
                    add_point(i, j, alpha.eval(i));
                    j += p.step;
                }
                let image = PInj::affine_on(p.rule, j, p.step)
                    .expect("piece restricts to a piece")
                    .range();
                let coef = alpha.restrict(&image);
                let slot = by_rule.entry(p.rule).or_insert_with(|| SymSeq::zero(ring));
                *slot = slot.add(&coef).expect("same ring");
            }
        }
        by_rule.retain(|_, a| !a.is_zero());
        CrossedNormal {
            threshold,
            points,
            rules: by_rule,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.normal_form().is_zero()
    }

    /// `Σ diag(α) U_f`.
    pub fn to_gami(&self) -> Result<OpSum, GamiError> {
        let mut out = OpSum::zero(self.ring);
        for (alpha, f) in &self.terms {
            out = out.add(&OpSum::term(alpha, f))?;
        }
        Ok(out)
    }

    /// A preimage of an operator, one term per summand.
    pub fn preimage(op: &OpSum) -> CrossedElem {
        CrossedElem {
            ring: op.ring(),
            terms: op.terms().into_iter().map(|t| (t.alpha, t.map)).collect(),
        }
    }

    /// Every coefficient lies in the ideal.
    pub fn coefficients_in(&self, tag: &IdealTag) -> bool {
        self.terms.iter().all(|(a, _)| a.member(tag))
    }
}

/// An element `(k, a)` of the unitalization: a scalar sequence `k` (integer
/// valued) plus a sequence `a` in the ideal part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unitized {
    pub scalar: SymSeq,
    pub part: SymSeq,
}

impl Unitized {
    /// The splitting `k ↦ (k, 0)`.
    pub fn section(k: &SymSeq) -> Unitized {
        Unitized {
            scalar: k.clone(),
            part: SymSeq::zero(k.ring()),
        }
    }

    /// The retraction `(k, a) ↦ k`.
    pub fn retract(&self) -> SymSeq {
        self.scalar.clone()
    }

    /// `(k, a)(l, b) = (kl, kb + la + ab)`.
    pub fn mul(&self, other: &Unitized) -> Result<Unitized, SeqError> {
        let scalar = self.scalar.mul(&other.scalar)?;
        let part = self
            .scalar
            .mul(&other.part)?
            .add(&self.part.mul(&other.scalar)?)?
            .add(&self.part.mul(&other.part)?)?;
        Ok(Unitized { scalar, part })
    }

    pub fn add(&self, other: &Unitized) -> Result<Unitized, SeqError> {
        Ok(Unitized {
            scalar: self.scalar.add(&other.scalar)?,
            part: self.part.add(&other.part)?,
        })
    }

    pub fn one(ring: RingKind) -> Unitized {
        Unitized::section(&SymSeq::scalar(RingValue::one(ring)))
    }
}

/// `χ_A # U_f` as a convenience constructor.
pub fn chi_term(ring: RingKind, set: &ProgressionSet, f: PInj) -> CrossedElem {
    CrossedElem::term(SymSeq::chi(ring, set), f)
}

#[cfg(test)]
mod tests {
    use super::*;

    const R: RingKind = RingKind::Rational;

    #[test]
    fn shift_squared() {
        let x = CrossedElem::term(SymSeq::one(R), PInj::s1());
        let sq = x.mul(&x).unwrap();
        let op = sq.to_gami().unwrap();
        let s11 = PInj::s1().compose(&PInj::s1());
        assert!(op.equal(&OpSum::u(R, &s11)));
        assert_eq!(sq.terms[0].0, SymSeq::chi(R, &ProgressionSet::evens()));
    }

    #[test]
    fn support_relation_normalizes_to_zero() {
        let alpha = SymSeq::scalar(RingValue::from_i64(R, 5));
        let evens = ProgressionSet::evens();
        let f = PInj::s2();
        let lhs = CrossedElem::term(alpha.mul(&SymSeq::chi(R, &evens)).unwrap(), f.clone());
        let rhs = CrossedElem::term(alpha, PInj::projection(&evens).compose(&f));
        let diff = lhs.sub(&rhs);
        assert!(diff.is_zero());
        assert!(diff.to_gami().unwrap().is_zero());
    }

    #[test]
    fn colliding_rules_cancel() {
        let one = SymSeq::e(R, 6);
        let a = CrossedElem::term(
            one.clone(),
            PInj::affine_on(Affine::int(2, 0), 1, 1).unwrap(),
        );
        let b = CrossedElem::term(one, PInj::affine_on(Affine::int(1, 3), 1, 1).unwrap());
        assert!(a.sub(&b).is_zero());
    }

    #[test]
    fn preimage_round_trip() {
        let op = OpSum::u(R, &PInj::swap_pairs());
        let x = CrossedElem::preimage(&op);
        assert!(x.to_gami().unwrap().equal(&op));
    }

    #[test]
    fn unitalization_splits() {
        let k = SymSeq::scalar(RingValue::from_i64(R, 2));
        let a = SymSeq::e(R, 3);
        let u = Unitized {
            scalar: k.clone(),
            part: a,
        };
        assert_eq!(Unitized::section(&k).retract(), k);
        let sq = u.mul(&u).unwrap();
        assert_eq!(sq.retract(), k.mul(&k).unwrap());
    }
}
