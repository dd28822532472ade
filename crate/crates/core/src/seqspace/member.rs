//! Symmetric sequence ideals and the decay rules deciding membership.

use std::fmt;
use std::str::FromStr;

use num::{One, Zero};

use super::shape::Decay;
use crate::pinj::Q;

/// A symmetric ideal of ℓ^∞: `c_f ⊂ ℓ^{p−} ⊂ ℓ^p ⊂ ℓ^{p+} ⊂ c_0 ⊂ ℓ^∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdealTag {
    Cf,
    C0,
    Lp(Q),
    LpPlus(Q),
    /// `None` stands for `p = ∞`, i.e. the union of all ℓ^q.
    LpMinus(Option<Q>),
    LInfty,
}

impl IdealTag {
    /// Whether a residue class with the given asymptotic size lies in the ideal.
    /// `None` is the zero class.
    pub fn admits(&self, decay: Option<Decay>) -> bool {
        let Some(decay) = decay else {
            return true;
        };
        let (e, g) = match decay {
            Decay::Geometric => return !matches!(self, IdealTag::Cf),
            Decay::Power { e, g } => (e, g),
        };
        let one = Q::one();
        match self {
            IdealTag::Cf => false,
            IdealTag::LInfty => true,
            IdealTag::C0 => e > Q::zero() || g > Q::zero(),
            IdealTag::Lp(p) => e * p > one || (e * p == one && g * p > one),
            IdealTag::LpPlus(p) => e * p >= one,
            IdealTag::LpMinus(Some(p)) => e * p > one,
            IdealTag::LpMinus(None) => e > Q::zero(),
        }
    }

    /// Position in the inclusion chain for a fixed `p` (smaller is smaller ideal).
    pub fn rank(&self) -> u8 {
        match self {
            IdealTag::Cf => 0,
            IdealTag::LpMinus(_) => 1,
            IdealTag::Lp(_) => 2,
            IdealTag::LpPlus(_) => 3,
            IdealTag::C0 => 4,
            IdealTag::LInfty => 5,
        }
    }

    /// The chain `c_f ⊂ ℓ^{p−} ⊂ ℓ^p ⊂ ℓ^{p+} ⊂ c_0 ⊂ ℓ^∞`.
    pub fn chain(p: Q) -> [IdealTag; 6] {
        [
            IdealTag::Cf,
            IdealTag::LpMinus(Some(p)),
            IdealTag::Lp(p),
            IdealTag::LpPlus(p),
            IdealTag::C0,
            IdealTag::LInfty,
        ]
    }
}

impl fmt::Display for IdealTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealTag::Cf => write!(f, "cf"),
            IdealTag::C0 => write!(f, "c0"),
            IdealTag::Lp(p) => write!(f, "lp:{p}"),
            IdealTag::LpPlus(p) => write!(f, "lp+:{p}"),
            IdealTag::LpMinus(Some(p)) => write!(f, "lp-:{p}"),
            IdealTag::LpMinus(None) => write!(f, "lp-:inf"),
            IdealTag::LInfty => write!(f, "linf"),
        }
    }
}

impl FromStr for IdealTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_p = |t: &str| -> Result<Q, String> {
            let q: Q = t
                .trim()
                .parse()
                .map_err(|_| format!("bad exponent {t:?}"))?;
            if q <= Q::zero() {
                return Err(format!("exponent must be positive, got {q}"));
            }
            Ok(q)
        };
        match s.trim() {
            "cf" => Ok(IdealTag::Cf),
            "c0" => Ok(IdealTag::C0),
            "linf" => Ok(IdealTag::LInfty),
            "lp-:inf" => Ok(IdealTag::LpMinus(None)),
            t => {
                if let Some(p) = t.strip_prefix("lp+:") {
                    Ok(IdealTag::LpPlus(parse_p(p)?))
                } else if let Some(p) = t.strip_prefix("lp-:") {
                    Ok(IdealTag::LpMinus(Some(parse_p(p)?)))
                } else if let Some(p) = t.strip_prefix("lp:") {
                    Ok(IdealTag::Lp(parse_p(p)?))
                } else {
                    Err(format!("unknown ideal {t:?}"))
                }
            }
        }
    }
}
