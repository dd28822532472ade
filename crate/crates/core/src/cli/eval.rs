//! Typed evaluation of parsed expressions.

use std::fmt;

use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};

use super::parse::{line_col, CohnLit, Expr, ExprKind, PinjLit, SetLit, ShapeLit, Span};
use crate::cohn::{CohnElem, CohnWord};
use crate::crossed::CrossedElem;
use crate::gami::OpSum;
use crate::pinj::{pairs, Affine, PInj, ProgressionSet, Q};
use crate::scalars::{RingKind, RingValue};
use crate::seqspace::{big, Magnitude, ProfileSum, Shape, SymSeq, Value};
use crate::sumring::{self, LazyOp};

#[derive(Debug, Clone)]
pub enum Val {
    Scalar(Value),
    Seq(SymSeq),
    Op(OpSum),
    Cohn(CohnElem),
    Crossed(CrossedElem),
    Lazy(LazyOp),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ty {
    Scalar,
    Seq,
    Op,
    Cohn,
    Crossed,
    Lazy,
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Ty::Scalar => "Scalar",
            Ty::Seq => "Seq",
            Ty::Op => "Op",
            Ty::Cohn => "Cohn",
            Ty::Crossed => "Crossed",
            Ty::Lazy => "Op (infinite sum)",
        };
        write!(f, "{s}")
    }
}

impl Val {
    pub fn ty(&self) -> Ty {
        match self {
            Val::Scalar(_) => Ty::Scalar,
            Val::Seq(_) => Ty::Seq,
            Val::Op(_) => Ty::Op,
            Val::Cohn(_) => Ty::Cohn,
            Val::Crossed(_) => Ty::Crossed,
            Val::Lazy(_) => Ty::Lazy,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    Type {
        span: Span,
        expected: String,
        found: String,
    },
    Runtime {
        span: Span,
        message: String,
    },
}

impl EvalError {
    pub fn render(&self, src: &str) -> String {
        match self {
            EvalError::Type {
                span,
                expected,
                found,
            } => {
                let (l, c) = line_col(src, span.start);
                format!("type error at line {l}, column {c}: expected {expected}, found {found}")
            }
            EvalError::Runtime { span, message } => {
                let (l, c) = line_col(src, span.start);
                format!("error at line {l}, column {c}: {message}")
            }
        }
    }
}

type EResult<T> = Result<T, EvalError>;

fn rt(span: Span, message: impl fmt::Display) -> EvalError {
    EvalError::Runtime {
        span,
        message: message.to_string(),
    }
}

fn type_err(span: Span, expected: &str, found: &Val) -> EvalError {
    EvalError::Type {
        span,
        expected: expected.to_string(),
        found: found.ty().to_string(),
    }
}

pub struct Evaluator {
    pub ring: RingKind,
}

fn to_set(s: &SetLit) -> Result<ProgressionSet, String> {
    Ok(match s {
        SetLit::Evens => ProgressionSet::evens(),
        SetLit::Odds => ProgressionSet::odds(),
        SetLit::All => ProgressionSet::naturals(),
        SetLit::Finite(items) => {
            if items.iter().any(|n| *n < 1) {
                return Err("set elements must be positive".into());
            }
            ProgressionSet::finite_set(items.iter().copied())
        }
        SetLit::Prog(s, m) => ProgressionSet::progression(*s, *m).map_err(|e| e.to_string())?,
        SetLit::Union(parts) => {
            let mut out = ProgressionSet::empty();
            for p in parts {
                out = out.union(&to_set(p)?);
            }
            out
        }
    })
}

pub fn to_pinj(f: &PinjLit) -> Result<PInj, String> {
    Ok(match f {
        PinjLit::Named(n) => match n.as_str() {
            "s1" => PInj::s1(),
            "s2" => PInj::s2(),
            "f0" => PInj::f0(),
            "f1" => PInj::f1(),
            "id" => PInj::identity(),
            _ => PInj::swap_pairs(),
        },
        PinjLit::Word(w) => PInj::s_word(w).map_err(|e| e.to_string())?,
        PinjLit::Row(n) => {
            if !(1..=62).contains(n) {
                return Err(format!("row index {n} outside 1..=62"));
            }
            pairs::row(*n)
        }
        PinjLit::Proj(s) => PInj::projection(&to_set(s)?),
        PinjLit::Map(p) => PInj::finite_map(p).map_err(|e| e.to_string())?,
        PinjLit::Aff {
            slope,
            offset,
            start,
            step,
        } => PInj::affine_on(Affine::new(*slope, *offset), *start, *step)
            .map_err(|e| e.to_string())?,
        PinjLit::Compose(a, b) => to_pinj(a)?.compose(&to_pinj(b)?),
        PinjLit::Dagger(a) => to_pinj(a)?.dagger(),
        PinjLit::Union(parts) => {
            let mut out = PInj::empty();
            for p in parts {
                out = out.union(&to_pinj(p)?).map_err(|e| e.to_string())?;
            }
            out
        }
    })
}

fn cohn_of(lits: &[CohnLit]) -> Result<CohnElem, String> {
    let mut out = CohnElem::one();
    for l in lits {
        let x = match l {
            CohnLit::S(w) => CohnElem::word(CohnWord::new(w.clone(), vec![])),
            CohnLit::SDagger(w) => CohnElem::word(CohnWord::new(vec![], w.clone())),
            CohnLit::E(i, j) => CohnElem::minf_embed(*i, *j)
                .ok_or_else(|| format!("E({i},{j}) needs positive indices"))?,
        };
        out = out.mul(&x);
    }
    Ok(out)
}

fn is_integer_scalar(v: &Value) -> Option<BigInt> {
    match v.as_scalar()? {
        RingValue::Integer(n) => Some(n),
        RingValue::Rational(q) if q.is_integer() => Some(q.to_integer()),
        RingValue::Gaussian(a, b) if b.is_zero() && a.is_integer() => Some(a.to_integer()),
        _ => None,
    }
}

fn rational_of(v: &Value) -> Option<BigRational> {
    match v.as_scalar()? {
        RingValue::Integer(n) => Some(BigRational::from_integer(n)),
        RingValue::Rational(q) => Some(q),
        RingValue::Gaussian(a, b) if b.is_zero() => Some(a),
        _ => None,
    }
}

impl Evaluator {
    pub fn new(ring: RingKind) -> Self {
        Evaluator { ring }
    }

    pub fn eval_src(&self, src: &str) -> Result<Val, String> {
        let e = super::parse::parse(src).map_err(|e| {
            let (l, c) = line_col(src, e.offset);
            format!("syntax error at line {l}, column {c}: {}", e.message)
        })?;
        self.eval(&e).map_err(|e| e.render(src))
    }

    fn scalar_expr(&self, e: &Expr) -> EResult<Value> {
        match self.eval(e)? {
            Val::Scalar(v) => Ok(v),
            other => Err(type_err(e.span, "Scalar", &other)),
        }
    }

    fn num(&self, text: &str, imag: bool, span: Span) -> EResult<Value> {
        let q: BigRational = match text.split_once('/') {
            Some((a, b)) => {
                let (a, b): (BigInt, BigInt) = (
                    a.parse().map_err(|_| rt(span, "bad number"))?,
                    b.parse().map_err(|_| rt(span, "bad number"))?,
                );
                if b.is_zero() {
                    return Err(rt(span, "zero denominator"));
                }
                BigRational::new(a, b)
            }
            None => BigRational::from_integer(text.parse().map_err(|_| rt(span, "bad number"))?),
        };
        if imag {
            if self.ring != RingKind::Gaussian {
                return Err(rt(span, format!("imaginary literal in ring {}", self.ring)));
            }
            return Ok(Value::scalar(RingValue::Gaussian(BigRational::zero(), q)));
        }
        let v = RingValue::from_rational(self.ring, &q)
            .ok_or_else(|| rt(span, format!("{q} is not an element of {}", self.ring)))?;
        Ok(Value::scalar(v))
    }

    pub fn eval(&self, e: &Expr) -> EResult<Val> {
        let ring = self.ring;
        let span = e.span;
        Ok(match &e.kind {
            ExprKind::Num { text, imag } => Val::Scalar(self.num(text, *imag, span)?),
            ExprKind::ModLit { modulus, residue } => {
                if self.ring != RingKind::IntMod(*modulus) {
                    return Err(rt(
                        span,
                        format!("m{modulus}:{residue} in ring {}", self.ring),
                    ));
                }
                let v = RingValue::parse(ring, residue).map_err(|err| rt(span, err))?;
                Val::Scalar(Value::scalar(v))
            }
            ExprKind::Matrix(cells) => {
                if ring != RingKind::Mat2 {
                    return Err(rt(span, format!("matrix literal in ring {ring}")));
                }
                let mut entries = Vec::new();
                for c in cells {
                    let v = self.scalar_expr(c)?;
                    let RingValue::Mat2(m) = v
                        .as_scalar()
                        .ok_or_else(|| rt(c.span, "irrational matrix entry"))?
                    else {
                        unreachable!("Mat2 ring")
                    };
                    if m[1].is_zero() && m[2].is_zero() && m[0] == m[3] {
                        entries.push(m[0].clone());
                    } else {
                        return Err(rt(c.span, "matrix entries must be rational"));
                    }
                }
                let arr: [BigRational; 4] = entries.try_into().expect("four cells");
                Val::Scalar(Value::scalar(RingValue::Mat2(Box::new(arr))))
            }
            ExprKind::Log(n, h) => {
                if !ring.contains_rationals() {
                    return Err(rt(
                        span,
                        format!("log needs a ring containing Q, not {ring}"),
                    ));
                }
                let (c, m) = Magnitude::log_power(*n, *h);
                Val::Scalar(Value::term(ring, &c, m).expect("ring contains Q"))
            }
            ExprKind::Pow(base, x) => {
                let b = self.eval(base)?;
                self.power(b, *x, base.span)?
            }
            ExprKind::U(f) => Val::Op(OpSum::u(ring, &to_pinj(f).map_err(|m| rt(span, m))?)),
            ExprKind::Diag(inner) => match self.eval(inner)? {
                Val::Seq(s) => Val::Op(OpSum::diag(&s)),
                Val::Scalar(v) => Val::Op(OpSum::diag(&SymSeq::constant(v))),
                other => return Err(type_err(inner.span, "Seq", &other)),
            },
            ExprKind::Phi(inner) => {
                let v = self.eval(inner)?;
                Val::Lazy(sumring::phi_lazy(&self.lazy(v, inner.span)?))
            }
            ExprKind::Oplus(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                if matches!(x, Val::Lazy(_)) || matches!(y, Val::Lazy(_)) {
                    Val::Lazy(LazyOp::oplus(
                        &self.lazy(x, a.span)?,
                        &self.lazy(y, b.span)?,
                    ))
                } else {
                    let (x, y) = (self.op(x, a.span)?, self.op(y, b.span)?);
                    Val::Op(sumring::oplus(&x, &y).map_err(|err| rt(span, err))?)
                }
            }
            ExprKind::E(n) => {
                if *n < 1 {
                    return Err(rt(span, "e(n) needs n ≥ 1"));
                }
                Val::Seq(SymSeq::e(ring, *n))
            }
            ExprKind::Chi(s) => Val::Seq(SymSeq::chi(ring, &to_set(s).map_err(|m| rt(span, m))?)),
            ExprKind::PowSeq(c, x) => {
                let c = self.scalar_expr(c)?;
                Val::Seq(SymSeq::pow(c, *x).map_err(|err| rt(span, err))?)
            }
            ExprKind::GeomSeq(c, r) => {
                let c = self.scalar_expr(c)?;
                Val::Seq(SymSeq::geom(c, &big(*r)).map_err(|err| rt(span, err))?)
            }
            ExprKind::LogPowSeq(x, g) => {
                Val::Seq(SymSeq::logpow(ring, *x, *g).map_err(|err| rt(span, err))?)
            }
            ExprKind::List(items) => {
                let vals = items
                    .iter()
                    .map(|i| self.scalar_expr(i))
                    .collect::<EResult<Vec<_>>>()?;
                Val::Seq(SymSeq::list(ring, &vals))
            }
            ExprKind::Track { start, step, terms } => {
                let mut profile = ProfileSum::zero(ring);
                for (amp, shapes) in terms {
                    let a = self.scalar_expr(amp)?;
                    let mut p = ProfileSum::constant(a);
                    for s in shapes {
                        let shape = match s {
                            ShapeLit::NPow(a, x) => {
                                if x.is_negative() {
                                    return Err(rt(span, "npow exponent must be non-negative"));
                                }
                                Shape::power(*a, *x)
                            }
                            ShapeLit::NExp(p, x) => {
                                let mut sh = Shape::constant();
                                if !x.is_zero() {
                                    sh.geom.insert(*p, *x);
                                }
                                sh
                            }
                            ShapeLit::NLog(d, c, g) => Shape::log(*d, *c, *g),
                        };
                        p = p.mul(&ProfileSum::single(shape, Value::one(ring)));
                    }
                    profile = profile.add(&p);
                }
                Val::Seq(SymSeq::track(ring, *start, *step, profile).map_err(|err| rt(span, err))?)
            }
            ExprKind::Cohn(lits) => Val::Cohn(cohn_of(lits).map_err(|m| rt(span, m))?),
            ExprKind::Neg(inner) => match self.eval(inner)? {
                Val::Scalar(v) => Val::Scalar(v.neg()),
                Val::Seq(s) => Val::Seq(s.neg()),
                Val::Op(o) => Val::Op(o.neg()),
                Val::Cohn(c) => Val::Cohn(c.neg()),
                Val::Crossed(c) => Val::Crossed(c.neg()),
                Val::Lazy(l) => Val::Lazy(l.neg()),
            },
            ExprKind::Dagger(inner) => match self.eval(inner)? {
                Val::Scalar(v) => Val::Scalar(v.conjugate()),
                Val::Seq(s) => Val::Seq(s.conjugate()),
                Val::Op(o) => Val::Op(o.adjoint()),
                Val::Cohn(c) => Val::Cohn(c.dagger()),
                Val::Crossed(c) => Val::Crossed(CrossedElem {
                    ring,
                    terms: c
                        .terms
                        .iter()
                        .map(|(a, f)| (a.conjugate().act(&f.dagger()), f.dagger()))
                        .collect(),
                }),
                Val::Lazy(l) => Val::Lazy(l.adjoint()),
            },
            ExprKind::Add(a, b) => {
                self.add(self.eval(a)?, self.eval(b)?, a.span, b.span, span, false)?
            }
            ExprKind::Sub(a, b) => {
                self.add(self.eval(a)?, self.eval(b)?, a.span, b.span, span, true)?
            }
            ExprKind::Mul(a, b) => self.mul(self.eval(a)?, self.eval(b)?, a.span, b.span, span)?,
            ExprKind::Div(a, b) => {
                let x = self.eval(a)?;
                let d = self.scalar_expr(b)?;
                let inv = d
                    .as_scalar()
                    .and_then(|s| s.inverse())
                    .ok_or_else(|| rt(b.span, format!("{d} is not invertible")))?;
                self.mul(x, Val::Scalar(Value::scalar(inv)), a.span, b.span, span)?
            }
            ExprKind::Hash(a, b) => {
                let coef = match self.eval(a)? {
                    Val::Seq(s) => s,
                    Val::Scalar(v) => SymSeq::constant(v),
                    other => return Err(type_err(a.span, "Seq", &other)),
                };
                match &b.kind {
                    ExprKind::U(f) => {
                        let f = to_pinj(f).map_err(|m| rt(b.span, m))?;
                        Val::Crossed(CrossedElem::term(coef, f))
                    }
                    ExprKind::Cohn(lits) => {
                        let x = cohn_of(lits).map_err(|m| rt(b.span, m))?;
                        let terms = x
                            .terms()
                            .map(|(w, c)| {
                                let k = Value::scalar(RingValue::from_integer(ring, c));
                                (coef.scale_right(&k), w.to_pinj())
                            })
                            .collect();
                        Val::Crossed(CrossedElem { ring, terms })
                    }
                    _ => {
                        return Err(EvalError::Type {
                            span: b.span,
                            expected: "U[...] or a Cohn word".into(),
                            found: "expression".into(),
                        })
                    }
                }
            }
        })
    }

    fn power(&self, b: Val, x: Q, span: Span) -> EResult<Val> {
        if x.is_integer() {
            let k = x.to_integer();
            let base = if k < 0 {
                match &b {
                    Val::Scalar(v) => Val::Scalar(Value::scalar(
                        v.as_scalar()
                            .and_then(|s| s.inverse())
                            .ok_or_else(|| rt(span, "not invertible"))?,
                    )),
                    other => return Err(type_err(span, "Scalar", other)),
                }
            } else {
                b
            };
            let mut acc = self.unit_like(&base);
            for _ in 0..k.unsigned_abs() {
                acc = self.mul(acc, base.clone(), span, span, span)?;
            }
            return Ok(acc);
        }
        let Val::Scalar(v) = &b else {
            return Err(type_err(span, "Scalar", &b));
        };
        let r = rational_of(v)
            .filter(|r| r.is_positive())
            .ok_or_else(|| rt(span, "fractional powers need a positive rational base"))?;
        if r.numer().to_u64().is_none() || r.denom().to_u64().is_none() {
            return Err(rt(span, "base too large"));
        }
        if !self.ring.contains_rationals() {
            return Err(rt(
                span,
                format!(
                    "fractional powers need a ring containing Q, not {}",
                    self.ring
                ),
            ));
        }
        let (c, m) = Magnitude::rational_power(&r, x);
        Ok(Val::Scalar(
            Value::term(self.ring, &c, m).expect("ring contains Q"),
        ))
    }

    fn unit_like(&self, v: &Val) -> Val {
        match v {
            Val::Cohn(_) => Val::Cohn(CohnElem::one()),
            Val::Op(_) | Val::Lazy(_) | Val::Crossed(_) => Val::Op(OpSum::identity(self.ring)),
            Val::Seq(_) => Val::Seq(SymSeq::one(self.ring)),
            Val::Scalar(_) => Val::Scalar(Value::one(self.ring)),
        }
    }

    /// Coerce to an operator.
    pub fn op(&self, v: Val, span: Span) -> EResult<OpSum> {
        match v {
            Val::Op(o) => Ok(o),
            Val::Scalar(s) => Ok(OpSum::diag(&SymSeq::constant(s))),
            Val::Cohn(c) => Ok(c.rho(self.ring)),
            Val::Crossed(c) => c.to_gami().map_err(|e| rt(span, e)),
            other => Err(type_err(span, "Op", &other)),
        }
    }

    pub fn lazy(&self, v: Val, span: Span) -> EResult<LazyOp> {
        match v {
            Val::Lazy(l) => Ok(l),
            other => Ok(LazyOp::from_op(&self.op(other, span)?)),
        }
    }

    fn add(&self, x: Val, y: Val, sx: Span, sy: Span, span: Span, sub: bool) -> EResult<Val> {
        let y = if sub {
            match y {
                Val::Scalar(v) => Val::Scalar(v.neg()),
                Val::Seq(s) => Val::Seq(s.neg()),
                Val::Op(o) => Val::Op(o.neg()),
                Val::Cohn(c) => Val::Cohn(c.neg()),
                Val::Crossed(c) => Val::Crossed(c.neg()),
                Val::Lazy(l) => Val::Lazy(l.neg()),
            }
        } else {
            y
        };
        let err = |e: crate::seqspace::SeqError| rt(span, e);
        Ok(match (x, y) {
            (Val::Scalar(a), Val::Scalar(b)) => Val::Scalar(a.add(&b)),
            (Val::Seq(a), Val::Seq(b)) => Val::Seq(a.add(&b).map_err(err)?),
            (Val::Seq(a), Val::Scalar(b)) => Val::Seq(a.add(&SymSeq::constant(b)).map_err(err)?),
            (Val::Scalar(a), Val::Seq(b)) => Val::Seq(SymSeq::constant(a).add(&b).map_err(err)?),
            (Val::Cohn(a), Val::Cohn(b)) => Val::Cohn(a.add(&b)),
            (Val::Crossed(a), Val::Crossed(b)) => Val::Crossed(a.add(&b)),
            (Val::Cohn(a), Val::Scalar(b)) if is_integer_scalar(&b).is_some() => {
                Val::Cohn(a.add(&CohnElem::one().scale(&is_integer_scalar(&b).expect("checked"))))
            }
            (Val::Scalar(a), Val::Cohn(b)) if is_integer_scalar(&a).is_some() => Val::Cohn(
                CohnElem::one()
                    .scale(&is_integer_scalar(&a).expect("checked"))
                    .add(&b),
            ),
            (x @ Val::Lazy(_), y) | (x, y @ Val::Lazy(_)) => {
                if matches!(x, Val::Seq(_)) || matches!(y, Val::Seq(_)) {
                    let bad = if matches!(x, Val::Seq(_)) {
                        (sx, x)
                    } else {
                        (sy, y)
                    };
                    return Err(type_err(bad.0, "Op", &bad.1));
                }
                Val::Lazy(self.lazy(x, sx)?.add(&self.lazy(y, sy)?))
            }
            (x, y) => {
                if matches!(x, Val::Seq(_)) {
                    return Err(type_err(sx, &y.ty().to_string(), &x));
                }
                if matches!(y, Val::Seq(_)) {
                    return Err(type_err(sy, &x.ty().to_string(), &y));
                }
                let (a, b) = (self.op(x, sx)?, self.op(y, sy)?);
                Val::Op(a.add(&b).map_err(|e| rt(span, e))?)
            }
        })
    }

    fn mul(&self, x: Val, y: Val, sx: Span, sy: Span, span: Span) -> EResult<Val> {
        let err = |e: crate::seqspace::SeqError| rt(span, e);
        Ok(match (x, y) {
            (Val::Scalar(a), Val::Scalar(b)) => Val::Scalar(a.mul(&b)),
            (Val::Scalar(a), Val::Seq(s)) => Val::Seq(s.scale_left(&a)),
            (Val::Seq(s), Val::Scalar(a)) => Val::Seq(s.scale_right(&a)),
            (Val::Seq(a), Val::Seq(b)) => Val::Seq(a.mul(&b).map_err(err)?),
            (Val::Scalar(a), Val::Op(o)) => Val::Op(o.scale_left(&a)),
            (Val::Op(o), Val::Scalar(a)) => Val::Op(o.scale_right(&a)),
            (Val::Cohn(a), Val::Cohn(b)) => Val::Cohn(a.mul(&b)),
            (Val::Scalar(a), Val::Cohn(c)) if is_integer_scalar(&a).is_some() => {
                Val::Cohn(c.scale(&is_integer_scalar(&a).expect("checked")))
            }
            (Val::Cohn(c), Val::Scalar(a)) if is_integer_scalar(&a).is_some() => {
                Val::Cohn(c.scale(&is_integer_scalar(&a).expect("checked")))
            }
            (Val::Crossed(a), Val::Crossed(b)) => Val::Crossed(a.mul(&b).map_err(err)?),
            (Val::Scalar(a), Val::Crossed(c)) => Val::Crossed(CrossedElem {
                ring: c.ring,
                terms: c
                    .terms
                    .iter()
                    .map(|(s, f)| (s.scale_left(&a), f.clone()))
                    .collect(),
            }),
            (Val::Crossed(c), Val::Scalar(a)) => Val::Crossed(CrossedElem {
                ring: c.ring,
                terms: c
                    .terms
                    .iter()
                    .map(|(s, f)| (s.scale_right(&a), f.clone()))
                    .collect(),
            }),
            (x @ Val::Lazy(_), y) | (x, y @ Val::Lazy(_)) => {
                Val::Lazy(self.lazy(x, sx)?.mul(&self.lazy(y, sy)?))
            }
            (x, y) => {
                if matches!(x, Val::Seq(_)) {
                    return Err(type_err(sx, "Scalar or Op (use diag(...))", &x));
                }
                if matches!(y, Val::Seq(_)) {
                    return Err(type_err(sy, "Scalar or Op (use diag(...))", &y));
                }
                let (a, b) = (self.op(x, sx)?, self.op(y, sy)?);
                Val::Op(a.mul(&b).map_err(|e| rt(span, e))?)
            }
        })
    }
}

impl Evaluator {
    /// Decide equality; operators exactly, infinite sums on an `n × n` window.
    /// The sources are only used to place error messages.
    pub fn values_equal(&self, a: Val, b: Val, la: &str, lb: &str, n: i64) -> Result<bool, String> {
        Ok(match (a, b) {
            (Val::Scalar(x), Val::Scalar(y)) => x == y,
            (Val::Seq(x), Val::Seq(y)) => x == y,
            (Val::Seq(x), Val::Scalar(y)) | (Val::Scalar(y), Val::Seq(x)) => {
                x == SymSeq::constant(y)
            }
            (Val::Cohn(x), Val::Cohn(y)) => x == y,
            (Val::Crossed(x), Val::Crossed(y)) => x.sub(&y).is_zero(),
            (Val::Seq(_), _) | (_, Val::Seq(_)) => {
                return Err(
                    "cannot compare a sequence with an operator; wrap it in diag(...)".into(),
                )
            }
            (x @ Val::Lazy(_), y) | (x, y @ Val::Lazy(_)) => {
                let x = self.lazy(x, whole(la)).map_err(|e| e.render(la))?;
                let y = self.lazy(y, whole(lb)).map_err(|e| e.render(lb))?;
                x.window(n) == y.window(n)
            }
            (x, y) => {
                let x = self.op(x, whole(la)).map_err(|e| e.render(la))?;
                let y = self.op(y, whole(lb)).map_err(|e| e.render(lb))?;
                x.equal(&y)
            }
        })
    }
}

fn whole(src: &str) -> Span {
    Span {
        start: 0,
        end: src.len(),
    }
}

/// Print a value in re-parseable canonical form.
pub fn render(v: &Val) -> Result<String, String> {
    Ok(match v {
        Val::Scalar(s) => s.to_string(),
        Val::Seq(s) => s.to_string(),
        Val::Op(o) => o.to_string(),
        Val::Cohn(c) => c.to_string(),
        Val::Crossed(c) => {
            let terms = CrossedElem::preimage(&c.to_gami().map_err(|e| e.to_string())?).terms;
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms
                    .iter()
                    .map(|(a, f)| format!("({a})#U[{f}]"))
                    .collect::<Vec<_>>()
                    .join(" + ")
            }
        }
        Val::Lazy(_) => {
            return Err("infinite sums can only be inspected with `window --n N`".into())
        }
    })
}
