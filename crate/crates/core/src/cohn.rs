//! The Cohn ring on two generators in its free basis `s_μ s_ν†`, the embedded
//! matrix units and the representation by partial isometries.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, One, Signed, Zero};
use serde::Serialize;

use crate::gami::{GamiError, OpSum};
use crate::pinj::PInj;
use crate::scalars::{RingKind, RingValue};
use crate::seqspace::{SymSeq, Value};

/// The basis element `s_μ s_ν†`; letters are 1 and 2, `μ₁` outermost.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CohnWord {
    pub mu: Vec<u8>,
    pub nu: Vec<u8>,
}

impl CohnWord {
    pub fn new(mu: Vec<u8>, nu: Vec<u8>) -> Self {
        debug_assert!(mu.iter().chain(&nu).all(|c| *c == 1 || *c == 2));
        CohnWord { mu, nu }
    }

    pub fn identity() -> Self {
        CohnWord::new(vec![], vec![])
    }

    pub fn dagger(&self) -> Self {
        CohnWord::new(self.nu.clone(), self.mu.clone())
    }

    /// `(s_μ s_ν†)(s_ρ s_σ†)`, or `None` when it vanishes.
    pub fn mul(&self, other: &CohnWord) -> Option<CohnWord> {
        let (nu, rho) = (&self.nu, &other.mu);
        if let Some(rest) = rho.strip_prefix(nu.as_slice()) {
            let mut mu = self.mu.clone();
            mu.extend_from_slice(rest);
            Some(CohnWord::new(mu, other.nu.clone()))
        } else if let Some(rest) = nu.strip_prefix(rho.as_slice()) {
            let mut sigma = other.nu.clone();
            sigma.extend_from_slice(rest);
            Some(CohnWord::new(self.mu.clone(), sigma))
        } else {
            None
        }
    }

    /// The partial injection `s_μ ∘ s_ν†`.
    pub fn to_pinj(&self) -> PInj {
        let mu = PInj::s_word(&self.mu).expect("letters are 1 or 2");
        let nu = PInj::s_word(&self.nu).expect("letters are 1 or 2");
        mu.compose(&nu.dagger())
    }
}

fn word_str(w: &[u8]) -> String {
    w.iter().map(|c| char::from(b'0' + c)).collect()
}

impl fmt::Display for CohnWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.mu.is_empty(), self.nu.is_empty()) {
            (true, true) => write!(f, "1"),
            (false, true) => write!(f, "S[{}]", word_str(&self.mu)),
            (true, false) => write!(f, "S'[{}]", word_str(&self.nu)),
            (false, false) => write!(f, "S[{}]S'[{}]", word_str(&self.mu), word_str(&self.nu)),
        }
    }
}

/// The word `μ` with `s_μ(1) = n`.
pub fn word_of(mut n: i64) -> Option<Vec<u8>> {
    if n < 1 {
        return None;
    }
    let mut out = Vec::new();
    while n > 1 {
        out.push(if n % 2 == 0 { 1 } else { 2 });
        n /= 2;
    }
    Some(out)
}

/// `s_μ(1)`.
pub fn index_of(word: &[u8]) -> i64 {
    word.iter()
        .rev()
        .fold(1i64, |n, c| 2 * n + i64::from(*c) - 1)
}

/// An integral combination of basis words; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CohnElem {
    terms: BTreeMap<CohnWord, BigInt>,
}

impl CohnElem {
    pub fn zero() -> Self {
        CohnElem::default()
    }

    pub fn one() -> Self {
        CohnElem::word(CohnWord::identity())
    }

    pub fn word(w: CohnWord) -> Self {
        CohnElem::from_terms([(w, BigInt::one())])
    }

    /// The generator `s_i` for `i ∈ {1, 2}`.
    pub fn s(i: u8) -> Self {
        CohnElem::word(CohnWord::new(vec![i], vec![]))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (CohnWord, BigInt)>) -> Self {
        let mut out = CohnElem::zero();
        for (w, c) in terms {
            out.add_term(w, c);
        }
        out
    }

    fn add_term(&mut self, w: CohnWord, c: BigInt) {
        let cur = self.terms.remove(&w).unwrap_or_default() + c;
        if !cur.is_zero() {
            self.terms.insert(w, cur);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CohnWord, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &CohnElem) -> CohnElem {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> CohnElem {
        CohnElem {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &CohnElem) -> CohnElem {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> CohnElem {
        CohnElem::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), c * k)))
    }

    pub fn mul(&self, other: &CohnElem) -> CohnElem {
        let mut out = CohnElem::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(w) = a.mul(b) {
                    out.add_term(w, ca * cb);
                }
            }
        }
        out
    }

    pub fn dagger(&self) -> CohnElem {
        CohnElem {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.dagger(), c.clone()))
                .collect(),
        }
    }

    /// The image of the matrix unit `E_{i,j}`:
    /// `s_μ (1 − s₁s₁† − s₂s₂†) s_ν†` with `s_μ(1) = i`, `s_ν(1) = j`.
    pub fn minf_embed(i: i64, j: i64) -> Option<CohnElem> {
        let (mu, nu) = (word_of(i)?, word_of(j)?);
        Some(defect_word(&mu, &nu, &BigInt::one()))
    }

    /// `ρ(x)` as a combination of partial isometries.
    pub fn rho(&self, ring: RingKind) -> OpSum {
        let mut out = OpSum::zero(ring);
        for (w, c) in &self.terms {
            let v = Value::scalar(RingValue::from_integer(ring, c));
            let t = OpSum::term(&SymSeq::constant(v), &w.to_pinj());
            out = out.add(&t).expect("same ring");
        }
        out
    }

    /// `ρ(α # x) = diag(α) ρ(x)`.
    pub fn rho_with(&self, alpha: &SymSeq) -> Result<OpSum, GamiError> {
        OpSum::diag(alpha).mul(&self.rho(alpha.ring()))
    }
}

fn defect_word(mu: &[u8], nu: &[u8], c: &BigInt) -> CohnElem {
    let mut out = CohnElem::zero();
    out.add_term(CohnWord::new(mu.to_vec(), nu.to_vec()), c.clone());
    for letter in [1u8, 2] {
        let mut m = mu.to_vec();
        m.push(letter);
        let mut n = nu.to_vec();
        n.push(letter);
        out.add_term(CohnWord::new(m, n), -c);
    }
    out
}

impl fmt::Display for CohnElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() {
                "-"
            } else if k > 0 {
                "+"
            } else {
                ""
            };
            if k > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            let a = c.abs();
            if a.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{a}*{w}")?;
            }
        }
        Ok(())
    }
}

/// An element `Σ α_k # w_k` of the crossed product over the Cohn ring.
#[derive(Debug, Clone)]
pub struct CohnCrossed {
    pub ring: RingKind,
    pub terms: Vec<(SymSeq, CohnWord)>,
}

/// The normal form used to decide whether `ρ(x) = 0`: a finite matrix part on
/// indices below `2^l` and coefficients on words whose shorter side has
/// length exactly `l`.
#[derive(Debug, Clone)]
pub struct CohnNormalForm {
    pub level: usize,
    pub matrix_part: BTreeMap<(i64, i64), Value>,
    pub top_words: BTreeMap<CohnWord, SymSeq>,
}

impl CohnNormalForm {
    pub fn is_zero(&self) -> bool {
        self.matrix_part.values().all(Value::is_zero)
            && self.top_words.values().all(SymSeq::is_zero)
    }
}

impl CohnCrossed {
    pub fn rho(&self) -> Result<OpSum, GamiError> {
        let mut out = OpSum::zero(self.ring);
        for (alpha, w) in &self.terms {
            out = out.add(&OpSum::term(alpha, &w.to_pinj()))?;
        }
        Ok(out)
    }

    /// Push every word up to the common level, splitting off matrix units
    /// along the way via `s_μ s_ν† = s_μ e s_ν† + Σ_i s_{μi} s_{νi}†`.
    pub fn normal_form(&self) -> CohnNormalForm {
        let level = self
            .terms
            .iter()
            .map(|(_, w)| w.mu.len().max(w.nu.len()))
            .max()
            .unwrap_or(0);
        let mut nf = CohnNormalForm {
            level,
            matrix_part: BTreeMap::new(),
            top_words: BTreeMap::new(),
        };
        let mut work: Vec<(SymSeq, CohnWord)> = self.terms.clone();
        while let Some((alpha, w)) = work.pop() {
            if w.mu.len().min(w.nu.len()) >= level {
                let range = PInj::s_word(&w.mu).expect("letters are 1 or 2").range();
                let coef = alpha.restrict(&range);
                let entry = nf
                    .top_words
                    .entry(w)
                    .or_insert_with(|| SymSeq::zero(self.ring));
                *entry = entry.add(&coef).expect("same ring");
                continue;
            }
            let (i, j) = (index_of(&w.mu), index_of(&w.nu));
            let v = alpha.eval(i);
            let slot = nf
                .matrix_part
                .entry((i, j))
                .or_insert_with(|| Value::zero(self.ring));
            *slot = slot.add(&v);
            for letter in [1u8, 2] {
                let mut mu = w.mu.clone();
                mu.push(letter);
                let mut nu = w.nu.clone();
                nu.push(letter);
                work.push((alpha.clone(), CohnWord::new(mu, nu)));
            }
        }
        nf.matrix_part.retain(|_, v| !v.is_zero());
        nf.top_words.retain(|_, a| !a.is_zero());
        nf
    }

    /// Decide `x = 0` through the normal form.
    pub fn injectivity_probe(&self) -> bool {
        self.normal_form().is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(mu: &[u8], nu: &[u8]) -> CohnElem {
        CohnElem::word(CohnWord::new(mu.to_vec(), nu.to_vec()))
    }

    #[test]
    fn word_products() {
        assert_eq!(w(&[1], &[2]).mul(&w(&[2], &[1])), w(&[1], &[1]));
        assert!(CohnElem::s(1).dagger().mul(&CohnElem::s(2)).is_zero());
        assert_eq!(
            CohnElem::s(1).dagger().mul(&CohnElem::s(1)),
            CohnElem::one()
        );
    }

    #[test]
    fn word_index_round_trip() {
        for n in 1..200 {
            assert_eq!(index_of(&word_of(n).unwrap()), n);
            let s = PInj::s_word(&word_of(n).unwrap()).unwrap();
            assert_eq!(s.apply(1), Some(n));
        }
    }

    #[test]
    fn matrix_units_multiply() {
        let e = |i, j| CohnElem::minf_embed(i, j).unwrap();
        assert_eq!(e(1, 2).mul(&e(2, 1)), e(1, 1));
        assert!(e(1, 2).mul(&e(3, 1)).is_zero());
        assert_eq!(
            e(1, 1),
            CohnElem::one().sub(&w(&[1], &[1])).sub(&w(&[2], &[2]))
        );
    }

    #[test]
    fn rho_of_flip_is_unitary() {
        let fhat = CohnElem::minf_embed(1, 1)
            .unwrap()
            .add(&w(&[2], &[1]))
            .add(&w(&[1], &[2]));
        let r = fhat.rho(RingKind::Integer);
        let prod = r.adjoint().mul(&r).unwrap();
        assert!(prod.equal(&OpSum::identity(RingKind::Integer)));
        assert!(r.equal(&OpSum::u(RingKind::Integer, &PInj::swap_pairs())));
    }

    #[test]
    fn probe_sees_disjoint_support() {
        let odds = SymSeq::chi(RingKind::Rational, &crate::pinj::ProgressionSet::odds());
        let x = CohnCrossed {
            ring: RingKind::Rational,
            terms: vec![(odds, CohnWord::new(vec![1], vec![1]))],
        };
        assert!(x.injectivity_probe());
        assert!(x.rho().unwrap().is_zero());
    }
}
