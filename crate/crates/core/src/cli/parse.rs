//! Tokenizer and recursive-descent parser for the expression language.

use std::fmt;

use crate::pinj::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    /// `digits`, `digits/digits`, optionally followed by `i`.
    Num {
        text: String,
        imag: bool,
    },
    Ident(String),
    Arrow,
    Sym(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num { text, imag } => write!(f, "{text}{}", if *imag { "i" } else { "" }),
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Arrow => write!(f, "->"),
            Tok::Sym(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub offset: usize,
    pub message: String,
}

/// Line and column (both 1-based) of a byte offset.
pub fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

pub fn tokenize(src: &str) -> Result<Vec<(Tok, Span)>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let c = bytes[k] as char;
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        let start = k;
        if c.is_ascii_digit() {
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            if k + 1 < bytes.len() && bytes[k] == b'/' && bytes[k + 1].is_ascii_digit() {
                k += 1;
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
            }
            let text = src[start..k].to_string();
            let imag = k < bytes.len()
                && bytes[k] == b'i'
                && !(k + 1 < bytes.len()
                    && (bytes[k + 1].is_ascii_alphanumeric() || bytes[k + 1] == b'_'));
            if imag {
                k += 1;
            }
            out.push((Tok::Num { text, imag }, Span { start, end: k }));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while k < bytes.len() && (bytes[k].is_ascii_alphanumeric() || bytes[k] == b'_') {
                k += 1;
            }
            out.push((
                Tok::Ident(src[start..k].to_string()),
                Span { start, end: k },
            ));
            continue;
        }
        if c == '-' && k + 1 < bytes.len() && bytes[k + 1] == b'>' {
            k += 2;
            out.push((Tok::Arrow, Span { start, end: k }));
            continue;
        }
        if "()[]{},;+-*/^'#@|:".contains(c) {
            k += 1;
            out.push((Tok::Sym(c), Span { start, end: k }));
            continue;
        }
        return Err(SyntaxError {
            offset: k,
            message: format!("unexpected character {c:?}"),
        });
    }
    Ok(out)
}

/// A set literal inside `chi[...]` or `P[...]`.
#[derive(Debug, Clone, PartialEq)]
pub enum SetLit {
    Evens,
    Odds,
    All,
    Finite(Vec<i64>),
    Prog(i64, i64),
    Union(Vec<SetLit>),
}

/// A partial injection literal inside `U[...]`.
#[derive(Debug, Clone, PartialEq)]
pub enum PinjLit {
    Named(String),
    Word(Vec<u8>),
    Row(i64),
    Proj(SetLit),
    Map(Vec<(i64, i64)>),
    Aff {
        slope: Q,
        offset: Q,
        start: i64,
        step: i64,
    },
    Compose(Box<PinjLit>, Box<PinjLit>),
    Dagger(Box<PinjLit>),
    Union(Vec<PinjLit>),
}

/// One factor of a track profile.
#[derive(Debug, Clone, PartialEq)]
pub enum ShapeLit {
    NPow(Q, Q),
    NExp(u64, Q),
    NLog(Q, Q, Q),
}

/// A Cohn monomial factor.
#[derive(Debug, Clone, PartialEq)]
pub enum CohnLit {
    S(Vec<u8>),
    SDagger(Vec<u8>),
    E(i64, i64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Num {
        text: String,
        imag: bool,
    },
    ModLit {
        modulus: u64,
        residue: String,
    },
    Matrix(Vec<Expr>),
    Log(u64, Q),
    Pow(Box<Expr>, Q),
    U(PinjLit),
    Diag(Box<Expr>),
    Phi(Box<Expr>),
    Oplus(Box<Expr>, Box<Expr>),
    E(i64),
    Chi(SetLit),
    PowSeq(Box<Expr>, Q),
    GeomSeq(Box<Expr>, Q),
    LogPowSeq(Q, Q),
    List(Vec<Expr>),
    Track {
        start: i64,
        step: i64,
        terms: Vec<(Expr, Vec<ShapeLit>)>,
    },
    Cohn(Vec<CohnLit>),
    Neg(Box<Expr>),
    Dagger(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Hash(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

struct Parser<'a> {
    toks: &'a [(Tok, Span)],
    pos: usize,
    len: usize,
}

type PResult<T> = Result<T, SyntaxError>;

pub fn parse(src: &str) -> PResult<Expr> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        len: src.len(),
    };
    let e = p.expr()?;
    if p.pos < toks.len() {
        return Err(p.error(format!("unexpected {}", toks[p.pos].0)));
    }
    Ok(e)
}

fn parse_q(text: &str) -> Option<Q> {
    match text.split_once('/') {
        Some((a, b)) => {
            let (a, b): (i64, i64) = (a.parse().ok()?, b.parse().ok()?);
            (b != 0).then(|| Q::new(a, b))
        }
        None => text.parse::<i64>().ok().map(Q::from_integer),
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |t| t.1.start)
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].1.end
        }
    }

    fn error(&self, message: String) -> SyntaxError {
        SyntaxError {
            offset: self.offset(),
            message,
        }
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Sym(c))
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.is_sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> PResult<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            let found = self
                .peek()
                .map_or("end of input".to_string(), |t| t.to_string());
            Err(self.error(format!("expected '{c}', found {found}")))
        }
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == name)
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("expected a name".into())),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        let neg = self.eat_sym('-');
        match self.peek() {
            Some(Tok::Num { text, imag: false }) if !text.contains('/') => {
                let v: i64 = text
                    .parse()
                    .map_err(|_| self.error("integer too large".into()))?;
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.error("expected an integer".into())),
        }
    }

    fn rat(&mut self) -> PResult<Q> {
        if self.eat_sym('(') {
            let q = self.rat()?;
            self.expect_sym(')')?;
            return Ok(q);
        }
        let neg = self.eat_sym('-');
        match self.peek() {
            Some(Tok::Num { text, imag: false }) => {
                let v = parse_q(text).ok_or_else(|| self.error(format!("bad rational {text}")))?;
                self.pos += 1;
                let v = if self.is_sym('/') {
                    self.pos += 1;
                    let d = self.int()?;
                    if d == 0 {
                        return Err(self.error("zero denominator".into()));
                    }
                    v / Q::from_integer(d)
                } else {
                    v
                };
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.error("expected a rational number".into())),
        }
    }

    fn word(&mut self) -> PResult<Vec<u8>> {
        if self.is_sym(']') {
            return Ok(vec![]);
        }
        match self.peek() {
            Some(Tok::Num { text, imag: false }) if text.chars().all(|c| c == '1' || c == '2') => {
                let w = text.bytes().map(|b| b - b'0').collect();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.error("expected a word over {1,2}".into())),
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let start = self.offset();
        let mut lhs = self.term()?;
        loop {
            let kind = if self.eat_sym('+') {
                ExprKind::Add as fn(Box<Expr>, Box<Expr>) -> ExprKind
            } else if self.eat_sym('-') {
                ExprKind::Sub
            } else {
                break;
            };
            let rhs = self.term()?;
            lhs = Expr {
                kind: kind(Box::new(lhs), Box::new(rhs)),
                span: Span {
                    start,
                    end: self.prev_end(),
                },
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> PResult<Expr> {
        let start = self.offset();
        let mut lhs = self.unary()?;
        loop {
            let kind = if self.eat_sym('*') {
                ExprKind::Mul as fn(Box<Expr>, Box<Expr>) -> ExprKind
            } else if self.eat_sym('/') {
                ExprKind::Div
            } else {
                break;
            };
            let rhs = self.unary()?;
            lhs = Expr {
                kind: kind(Box::new(lhs), Box::new(rhs)),
                span: Span {
                    start,
                    end: self.prev_end(),
                },
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let start = self.offset();
        if self.eat_sym('-') {
            let inner = self.unary()?;
            return Ok(Expr {
                kind: ExprKind::Neg(Box::new(inner)),
                span: Span {
                    start,
                    end: self.prev_end(),
                },
            });
        }
        let lhs = self.postfix()?;
        if self.eat_sym('#') {
            let rhs = self.postfix()?;
            return Ok(Expr {
                kind: ExprKind::Hash(Box::new(lhs), Box::new(rhs)),
                span: Span {
                    start,
                    end: self.prev_end(),
                },
            });
        }
        Ok(lhs)
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let start = self.offset();
        let mut e = self.atom()?;
        loop {
            if self.eat_sym('\'') {
                e = Expr {
                    kind: ExprKind::Dagger(Box::new(e)),
                    span: Span {
                        start,
                        end: self.prev_end(),
                    },
                };
            } else if self.eat_sym('^') {
                let q = self.rat()?;
                e = Expr {
                    kind: ExprKind::Pow(Box::new(e), q),
                    span: Span {
                        start,
                        end: self.prev_end(),
                    },
                };
            } else {
                return Ok(e);
            }
        }
    }

    fn atom(&mut self) -> PResult<Expr> {
        let start = self.offset();
        let kind = self.atom_kind()?;
        Ok(Expr {
            kind,
            span: Span {
                start,
                end: self.prev_end(),
            },
        })
    }

    fn atom_kind(&mut self) -> PResult<ExprKind> {
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| self.error("unexpected end of input".into()))?;
        match tok {
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e.kind)
            }
            Tok::Sym('[') => {
                self.pos += 1;
                let mut cells = Vec::new();
                for r in 0..2 {
                    if r > 0 {
                        self.expect_sym(',')?;
                    }
                    self.expect_sym('[')?;
                    cells.push(self.expr()?);
                    self.expect_sym(',')?;
                    cells.push(self.expr()?);
                    self.expect_sym(']')?;
                }
                self.expect_sym(']')?;
                Ok(ExprKind::Matrix(cells))
            }
            Tok::Num { text, imag } => {
                self.pos += 1;
                Ok(ExprKind::Num { text, imag })
            }
            Tok::Ident(name) => self.named_atom(&name),
            other => Err(self.error(format!("unexpected {other}"))),
        }
    }

    fn named_atom(&mut self, name: &str) -> PResult<ExprKind> {
        // modular literal m7:3
        if let Some(digits) = name.strip_prefix('m') {
            if !digits.is_empty()
                && digits.chars().all(|c| c.is_ascii_digit())
                && self.peek_at(1) == Some(&Tok::Sym(':'))
            {
                self.pos += 2;
                let neg = self.eat_sym('-');
                let r = self.int()?;
                let modulus = digits
                    .parse()
                    .map_err(|_| self.error("modulus too large".into()))?;
                let residue = if neg { format!("-{r}") } else { r.to_string() };
                return Ok(ExprKind::ModLit { modulus, residue });
            }
        }
        self.pos += 1;
        match name {
            "i" => Ok(ExprKind::Num {
                text: "1".into(),
                imag: true,
            }),
            "U" => {
                self.expect_sym('[')?;
                let f = self.pinj()?;
                self.expect_sym(']')?;
                Ok(ExprKind::U(f))
            }
            "diag" | "Phi" => {
                self.expect_sym('(')?;
                let e = Box::new(self.expr()?);
                self.expect_sym(')')?;
                Ok(if name == "diag" {
                    ExprKind::Diag(e)
                } else {
                    ExprKind::Phi(e)
                })
            }
            "oplus" => {
                self.expect_sym('(')?;
                let a = self.expr()?;
                self.expect_sym(',')?;
                let b = self.expr()?;
                self.expect_sym(')')?;
                Ok(ExprKind::Oplus(Box::new(a), Box::new(b)))
            }
            "log" => {
                self.expect_sym('(')?;
                let n = self.int()?;
                self.expect_sym(')')?;
                if n < 2 {
                    return Err(self.error("log needs an integer argument ≥ 2".into()));
                }
                let h = if self.eat_sym('^') {
                    self.rat()?
                } else {
                    Q::from_integer(1)
                };
                Ok(ExprKind::Log(n as u64, h))
            }
            "e" => {
                self.expect_sym('(')?;
                let n = self.int()?;
                self.expect_sym(')')?;
                Ok(ExprKind::E(n))
            }
            "chi" => {
                self.expect_sym('[')?;
                let s = self.set()?;
                self.expect_sym(']')?;
                Ok(ExprKind::Chi(s))
            }
            "pow" | "geom" => {
                self.expect_sym('(')?;
                let c = Box::new(self.expr()?);
                self.expect_sym(';')?;
                let x = self.rat()?;
                self.expect_sym(')')?;
                Ok(if name == "pow" {
                    ExprKind::PowSeq(c, x)
                } else {
                    ExprKind::GeomSeq(c, x)
                })
            }
            "logpow" => {
                self.expect_sym('(')?;
                let e = self.rat()?;
                self.expect_sym(';')?;
                let g = self.rat()?;
                self.expect_sym(')')?;
                Ok(ExprKind::LogPowSeq(e, g))
            }
            "list" => {
                self.expect_sym('[')?;
                let mut items = vec![self.expr()?];
                while self.eat_sym(',') {
                    items.push(self.expr()?);
                }
                self.expect_sym(']')?;
                Ok(ExprKind::List(items))
            }
            "track" => {
                self.expect_sym('(')?;
                let start = self.int()?;
                self.expect_sym(',')?;
                let step = self.int()?;
                self.expect_sym(')')?;
                self.expect_sym('[')?;
                let mut terms = vec![self.profile_term()?];
                while self.eat_sym('+') {
                    terms.push(self.profile_term()?);
                }
                self.expect_sym(']')?;
                Ok(ExprKind::Track { start, step, terms })
            }
            "E" => {
                self.expect_sym('(')?;
                let i = self.int()?;
                self.expect_sym(',')?;
                let j = self.int()?;
                self.expect_sym(')')?;
                let mut lits = vec![CohnLit::E(i, j)];
                self.more_cohn(&mut lits)?;
                Ok(ExprKind::Cohn(lits))
            }
            "S" | "S1" | "S2" => {
                self.pos -= 1;
                let mut lits = Vec::new();
                self.more_cohn(&mut lits)?;
                Ok(ExprKind::Cohn(lits))
            }
            other => {
                self.pos -= 1;
                Err(self.error(format!("unknown name {other:?}")))
            }
        }
    }

    /// Juxtaposed Cohn factors: `S1`, `S2`, `S[12]`, `S'[21]`.
    fn more_cohn(&mut self, lits: &mut Vec<CohnLit>) -> PResult<()> {
        loop {
            if self.is_ident("S1") || self.is_ident("S2") {
                let letter = if self.is_ident("S1") { 1 } else { 2 };
                self.pos += 1;
                lits.push(CohnLit::S(vec![letter]));
            } else if self.is_ident("S") {
                self.pos += 1;
                let dag = self.eat_sym('\'');
                self.expect_sym('[')?;
                let w = self.word()?;
                self.expect_sym(']')?;
                lits.push(if dag {
                    CohnLit::SDagger(w)
                } else {
                    CohnLit::S(w)
                });
            } else if self.is_ident("E")
                && self.peek_at(1) == Some(&Tok::Sym('('))
                && !lits.is_empty()
            {
                self.pos += 2;
                let i = self.int()?;
                self.expect_sym(',')?;
                let j = self.int()?;
                self.expect_sym(')')?;
                lits.push(CohnLit::E(i, j));
            } else {
                return Ok(());
            }
        }
    }

    fn profile_term(&mut self) -> PResult<(Expr, Vec<ShapeLit>)> {
        self.expect_sym('(')?;
        let amp = self.expr()?;
        self.expect_sym(')')?;
        let mut shapes = Vec::new();
        while self.eat_sym('*') {
            let name = self.ident()?;
            self.expect_sym('(')?;
            let s = match name.as_str() {
                "npow" => {
                    let a = self.rat()?;
                    self.expect_sym(';')?;
                    ShapeLit::NPow(a, self.rat()?)
                }
                "nexp" => {
                    let p = self.int()?;
                    if p < 2 {
                        return Err(self.error("nexp base must be ≥ 2".into()));
                    }
                    self.expect_sym(';')?;
                    ShapeLit::NExp(p as u64, self.rat()?)
                }
                "nlog" => {
                    let d = self.rat()?;
                    self.expect_sym(';')?;
                    let c = self.rat()?;
                    self.expect_sym(';')?;
                    ShapeLit::NLog(d, c, self.rat()?)
                }
                other => return Err(self.error(format!("unknown profile factor {other:?}"))),
            };
            self.expect_sym(')')?;
            shapes.push(s);
        }
        Ok((amp, shapes))
    }

    fn set(&mut self) -> PResult<SetLit> {
        let mut parts = vec![self.set_atom()?];
        while self.eat_sym('|') {
            parts.push(self.set_atom()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            SetLit::Union(parts)
        })
    }

    fn set_atom(&mut self) -> PResult<SetLit> {
        if self.eat_sym('{') {
            let mut items = Vec::new();
            if !self.is_sym('}') {
                items.push(self.int()?);
                while self.eat_sym(',') {
                    items.push(self.int()?);
                }
            }
            self.expect_sym('}')?;
            return Ok(SetLit::Finite(items));
        }
        let name = self.ident()?;
        match name.as_str() {
            "even" | "evens" => Ok(SetLit::Evens),
            "odd" | "odds" => Ok(SetLit::Odds),
            "all" | "N" => Ok(SetLit::All),
            "prog" => {
                self.expect_sym('(')?;
                let s = self.int()?;
                self.expect_sym(',')?;
                let m = self.int()?;
                self.expect_sym(')')?;
                Ok(SetLit::Prog(s, m))
            }
            other => Err(self.error(format!("unknown set {other:?}"))),
        }
    }

    fn pinj(&mut self) -> PResult<PinjLit> {
        let mut parts = vec![self.pinj_comp()?];
        while self.eat_sym('|') {
            parts.push(self.pinj_comp()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            PinjLit::Union(parts)
        })
    }

    fn pinj_comp(&mut self) -> PResult<PinjLit> {
        let mut lhs = self.pinj_post()?;
        while self.eat_sym('*') {
            let rhs = self.pinj_post()?;
            lhs = PinjLit::Compose(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn pinj_post(&mut self) -> PResult<PinjLit> {
        let mut f = self.pinj_atom()?;
        while self.eat_sym('\'') {
            f = PinjLit::Dagger(Box::new(f));
        }
        Ok(f)
    }

    fn pinj_atom(&mut self) -> PResult<PinjLit> {
        if self.eat_sym('(') {
            let f = self.pinj()?;
            self.expect_sym(')')?;
            return Ok(f);
        }
        let name = self.ident()?;
        match name.as_str() {
            "s1" | "s2" | "f0" | "f1" | "id" | "swap" | "v" => Ok(PinjLit::Named(name)),
            "s" => {
                self.expect_sym('[')?;
                let w = self.word()?;
                self.expect_sym(']')?;
                Ok(PinjLit::Word(w))
            }
            "row" => {
                self.expect_sym('(')?;
                let n = self.int()?;
                self.expect_sym(')')?;
                Ok(PinjLit::Row(n))
            }
            "P" => {
                self.expect_sym('[')?;
                let s = self.set()?;
                self.expect_sym(']')?;
                Ok(PinjLit::Proj(s))
            }
            "map" => {
                self.expect_sym('{')?;
                let mut pairs = Vec::new();
                if !self.is_sym('}') {
                    loop {
                        let a = self.int()?;
                        if self.peek() != Some(&Tok::Arrow) {
                            return Err(self.error("expected '->'".into()));
                        }
                        self.pos += 1;
                        let b = self.int()?;
                        pairs.push((a, b));
                        if !self.eat_sym(',') {
                            break;
                        }
                    }
                }
                self.expect_sym('}')?;
                Ok(PinjLit::Map(pairs))
            }
            "aff" => {
                self.expect_sym('(')?;
                let slope = self.rat()?;
                self.expect_sym(',')?;
                let offset = self.rat()?;
                self.expect_sym(')')?;
                self.expect_sym('@')?;
                if self.ident()? != "prog" {
                    return Err(self.error("expected prog(start,step)".into()));
                }
                self.expect_sym('(')?;
                let start = self.int()?;
                self.expect_sym(',')?;
                let step = self.int()?;
                self.expect_sym(')')?;
                Ok(PinjLit::Aff {
                    slope,
                    offset,
                    start,
                    step,
                })
            }
            other => Err(self.error(format!("unknown map {other:?}"))),
        }
    }
}
