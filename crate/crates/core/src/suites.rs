//! Randomized identity suites behind `verify-paper`.

use std::collections::BTreeMap;

use num::{Signed, Zero};

use crate::cohn::{CohnCrossed, CohnElem};
use crate::crossed::CrossedElem;
use crate::decomp::{decompose, reduce_rows_logged, FinMatrix};
use crate::gami::OpSum;
use crate::pinj::{pairs, PInj, Q};
use crate::random::Gen;
use crate::scalars::{RingKind, RingValue};
use crate::seqspace::{IdealTag, SymSeq, Value};
use crate::sumring::{self, LazyOp, OuterSeq};

pub const SUITES: [&str; 11] = [
    "dagproj",
    "eqcov",
    "sumring",
    "defphi",
    "cohn",
    "cpg",
    "poldec",
    "elusive",
    "bigsum",
    "gamastable",
    "jota",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub trials: usize,
    pub passed: usize,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

struct Tally {
    trials: usize,
    passed: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            trials: 0,
            passed: 0,
            first_failure: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.trials += 1;
        if ok {
            self.passed += 1;
        } else if self.first_failure.is_none() {
            self.first_failure = Some(what());
        }
    }

    fn report(self, name: &str) -> SuiteReport {
        SuiteReport {
            name: name.to_string(),
            trials: self.trials,
            passed: self.passed,
            first_failure: self.first_failure,
        }
    }
}

/// Run one suite; `None` for an unknown name.
pub fn run(name: &str, seed: u64, trials: usize) -> Option<SuiteReport> {
    let idx = SUITES.iter().position(|s| *s == name)?;
    let mut g = Gen::new(
        seed.wrapping_mul(1_000_003).wrapping_add(idx as u64),
        RingKind::Rational,
    );
    let mut t = Tally::new();
    match name {
        "dagproj" => dagproj(&mut g, &mut t, trials),
        "eqcov" => eqcov(&mut g, &mut t, trials),
        "sumring" => sum_ring(&mut g, &mut t, trials),
        "defphi" => defphi(&mut g, &mut t, trials),
        "cohn" => cohn(&mut g, &mut t, trials),
        "cpg" => cpg(&mut g, &mut t, trials),
        "poldec" => poldec(&mut g, &mut t, trials),
        "elusive" => elusive(&mut g, &mut t, trials),
        "bigsum" => bigsum(&mut g, &mut t, trials),
        "gamastable" => gamastable(&mut g, &mut t, trials),
        _ => jota(&mut g, &mut t, trials),
    }
    Some(t.report(name))
}

fn dagproj(g: &mut Gen, t: &mut Tally, trials: usize) {
    for _ in 0..trials {
        let (f, h, k) = (g.pinj(), g.pinj(), g.pinj());
        let assoc = f.compose(&h.compose(&k)) == f.compose(&h).compose(&k);
        let inverse = f.compose(&f.dagger()).compose(&f) == f;
        let anti = f.compose(&h).dagger() == h.dagger().compose(&f.dagger());
        let proj = f.dagger().compose(&f) == PInj::projection(&f.domain());
        let pointwise =
            (1..=100).all(|n| f.compose(&h).apply(n) == h.apply(n).and_then(|m| f.apply(m)));
        t.check(assoc && inverse && anti && proj && pointwise, || {
            format!("f = {f}, g = {h}, h = {k}")
        });
    }
}

fn eqcov(g: &mut Gen, t: &mut Tally, trials: usize) {
    let ring = g.ring;
    for _ in 0..trials {
        let (alpha, f) = (g.seq(), g.pinj());
        let uf = OpSum::u(ring, &f);
        let pushed = alpha.act(&f);
        let lhs = OpSum::diag(&pushed).mul(&uf).expect("same ring");
        let rhs = uf.mul(&OpSum::diag(&alpha)).expect("same ring");
        let conj = rhs.mul(&uf.adjoint()).expect("same ring");
        let window_ok = {
            let w = rhs.window(48);
            (1..=48).all(|j| {
                let expected = f.apply(j).filter(|i| *i <= 48).map(|i| (i, alpha.eval(j)));
                match expected {
                    Some((i, v)) => w.get(i, j) == v,
                    None => (1..=48).all(|i| w.get(i, j).is_zero()),
                }
            })
        };
        t.check(
            lhs.equal(&rhs) && conj.equal(&OpSum::diag(&pushed)) && window_ok,
            || format!("alpha = {alpha}, f = {f}"),
        );
    }
}

fn sum_ring(g: &mut Gen, t: &mut Tally, trials: usize) {
    let ring = g.ring;
    t.check(sumring::axioms_hold(ring), || "sum-ring axioms".into());
    let one = OpSum::identity(ring);
    t.check(
        sumring::oplus(&one, &one)
            .map(|x| x.equal(&one))
            .unwrap_or(false),
        || "1 + 1".into(),
    );
    for _ in 0..trials.saturating_sub(2) {
        let (a, b, c, d) = (g.op(), g.op(), g.op(), g.op());
        let lhs = sumring::oplus(&a, &b).and_then(|x| x.mul(&sumring::oplus(&c, &d)?));
        let rhs = a.mul(&c).and_then(|ac| sumring::oplus(&ac, &b.mul(&d)?));
        let ok = match (lhs, rhs) {
            (Ok(l), Ok(r)) => l.equal(&r),
            _ => false,
        };
        t.check(ok, || format!("a = {a}, b = {b}, c = {c}, d = {d}"));
    }
}

fn defphi(g: &mut Gen, t: &mut Tally, trials: usize) {
    for _ in 0..trials {
        let r = g.op();
        let phi = sumring::phi(&r);
        let lhs = LazyOp::oplus(&LazyOp::from_op(&r), &phi);
        let ok = [64, 128, 256]
            .iter()
            .all(|n| lhs.window(*n) == phi.window(*n));
        t.check(ok, || format!("r = {r}"));
    }
}

fn cohn(g: &mut Gen, t: &mut Tally, trials: usize) {
    let s = |i| CohnElem::s(i);
    let one = CohnElem::one();
    let relations = (1..=2u8).all(|i| {
        (1..=2u8).all(|j| {
            let p = s(i).dagger().mul(&s(j));
            if i == j {
                p == one
            } else {
                p.is_zero()
            }
        })
    });
    t.check(relations, || "generator relations".into());
    let e = |i, j| CohnElem::minf_embed(i, j).expect("positive");
    let units: BTreeMap<(i64, i64), CohnElem> = (1..=16)
        .flat_map(|i| (1..=16).map(move |j| ((i, j), e(i, j))))
        .collect();
    let mut mult = true;
    for i in 1..=16 {
        for j in 1..=16 {
            for k in 1..=16 {
                for l in 1..=16 {
                    let p = units[&(i, j)].mul(&units[&(k, l)]);
                    let ok = if j == k {
                        p == units[&(i, l)]
                    } else {
                        p.is_zero()
                    };
                    mult &= ok;
                }
            }
        }
    }
    t.check(mult, || "matrix unit multiplicativity".into());
    let fhat = e(1, 1)
        .add(&CohnElem::word(crate::cohn::CohnWord::new(
            vec![2],
            vec![1],
        )))
        .add(&CohnElem::word(crate::cohn::CohnWord::new(
            vec![1],
            vec![2],
        )));
    let rf = fhat.rho(RingKind::Integer);
    t.check(
        rf.adjoint()
            .mul(&rf)
            .map(|p| p.equal(&OpSum::identity(RingKind::Integer)))
            .unwrap_or(false),
        || "flip element is not an isometry".into(),
    );
    for _ in 0..trials.saturating_sub(3) {
        let (x, y, z) = (g.cohn(8, 3), g.cohn(8, 3), g.cohn(8, 3));
        let assoc = x.mul(&y).mul(&z) == x.mul(&y.mul(&z));
        let anti = x.mul(&y).dagger() == y.dagger().mul(&x.dagger());
        let (sx, sy) = (g.cohn(3, 2), g.cohn(3, 2));
        let hom = sx
            .rho(RingKind::Integer)
            .mul(&sy.rho(RingKind::Integer))
            .map(|p| p.equal(&sx.mul(&sy).rho(RingKind::Integer)))
            .unwrap_or(false);
        let terms = (0..g.rng_range(1, 3))
            .map(|_| (g.seq(), g.cohn_word(3)))
            .collect();
        let cx = CohnCrossed {
            ring: g.ring,
            terms,
        };
        let probe = cx.injectivity_probe() == cx.rho().map(|o| o.is_zero()).unwrap_or(false);
        t.check(assoc && anti && hom && probe, || {
            format!("x = {x}, y = {y}, z = {z}")
        });
    }
}

fn crossed(g: &mut Gen) -> CrossedElem {
    let k = g.rng_range(1, 2);
    let mut x = CrossedElem::zero(g.ring);
    for _ in 0..k {
        x = x.add(&CrossedElem::term(g.seq(), g.pinj()));
    }
    x
}

fn cpg(g: &mut Gen, t: &mut Tally, trials: usize) {
    for _ in 0..trials {
        let (x, y) = (crossed(g), crossed(g));
        let hom = match (x.mul(&y), x.to_gami(), y.to_gami()) {
            (Ok(xy), Ok(a), Ok(b)) => xy
                .to_gami()
                .and_then(|p| Ok(p.equal(&a.mul(&b)?)))
                .unwrap_or(false),
            _ => false,
        };
        let image = x.to_gami().expect("same ring");
        let kernel = x.is_zero() == image.is_zero();
        let back = x.sub(&CrossedElem::preimage(&image)).is_zero();
        t.check(hom && kernel && back, || "crossed product pair".into());
    }
}

fn poldec(g: &mut Gen, t: &mut Tally, trials: usize) {
    for _ in 0..trials {
        let alpha = rational_modulus_seq(g);
        let f = g.pinj();
        let term = OpSum::term(&alpha, &f);
        let ok = match term.polar() {
            Ok((v, abs)) => {
                let fact = v.mul(&abs).map(|p| p.equal(&term)).unwrap_or(false);
                let partial = v
                    .mul(&v.adjoint())
                    .and_then(|p| p.mul(&v))
                    .map(|p| p.equal(&v))
                    .unwrap_or(false);
                let positive = abs.window(64).entries.values().all(exactly_positive);
                let same_ideal = [Q::from_integer(1), Q::new(3, 2), Q::from_integer(2)]
                    .iter()
                    .flat_map(|p| IdealTag::chain(*p))
                    .all(|tag| term.ideal_member(&tag) == abs.ideal_member(&tag));
                fact && partial && positive && same_ideal
            }
            Err(_) => term.is_zero(),
        };
        t.check(ok, || format!("alpha = {alpha}, f = {f}"));
    }
}

/// Every summand has a positive rational coefficient (magnitudes are positive).
pub fn exactly_positive(v: &Value) -> bool {
    !v.is_zero()
        && v.terms().all(|(_, c)| match c {
            RingValue::Integer(n) => n.is_positive(),
            RingValue::Rational(q) => q.is_positive(),
            RingValue::Gaussian(a, b) => a.is_positive() && b.is_zero(),
            _ => false,
        })
}

/// A single-shape sequence: one sign per residue class and rational modulus.
pub fn rational_modulus_seq(g: &mut Gen) -> SymSeq {
    let ring = g.ring;
    let c = Value::scalar(g.rational_unit());
    match g.rng_range(0, 4) {
        0 => SymSeq::pow(
            c,
            *[Q::new(1, 2), Q::from_integer(1), Q::from_integer(2)]
                .get(g.rng_range(0, 2))
                .expect("index"),
        )
        .expect("valid"),
        1 => SymSeq::geom(c, &crate::scalars::q(1, 3)).expect("valid"),
        2 => SymSeq::chi(ring, &g.set()).scale_left(&c),
        3 => SymSeq::e(ring, g.rng_range(1, 9) as i64).scale_left(&c),
        _ => SymSeq::constant(c),
    }
}

fn elusive(g: &mut Gen, t: &mut Tally, trials: usize) {
    for k in 0..trials {
        let ring = [RingKind::Rational, RingKind::IntMod(7), RingKind::Gaussian][k % 3];
        g.with_ring(ring);
        let (rows, cols) = (g.rng_range(2, 24) as i64, g.rng_range(2, 24) as i64);
        let band = g.rng_range(2, 6);
        let a = g.fin_matrix(rows, cols, band);
        let mut log = Vec::new();
        let ok = match reduce_rows_logged(&a, &mut log) {
            Ok(parts) => {
                let (r, c) = (a.r(), a.c());
                let bounds = r <= 1 || parts.iter().all(|p| p.matrix.r() < r && p.matrix.c() <= c);
                let steps = log.iter().all(|s| {
                    s.components
                        .iter()
                        .all(|(cr, cc)| *cr <= s.r_before && *cc <= s.c_before)
                        && (s.m_before > 1
                            || s.components
                                .iter()
                                .all(|(cr, _)| *cr < s.r_before || *cr == 0))
                });
                let sum = parts
                    .iter()
                    .fold(FinMatrix::zero(rows, cols, ring), |acc, p| {
                        acc.add(&p.matrix)
                    });
                let witnesses = parts.iter().all(|p| p.witness.verifies(&a, &p.matrix));
                bounds && steps && sum == a && witnesses
            }
            Err(_) => false,
        };
        t.check(ok, || {
            format!("matrix with {} entries over {ring}", a.nnz())
        });
    }
    g.with_ring(RingKind::Rational);
}

fn bigsum(g: &mut Gen, t: &mut Tally, trials: usize) {
    for k in 0..trials {
        let ring = [RingKind::Rational, RingKind::IntMod(7), RingKind::Gaussian][k % 3];
        g.with_ring(ring);
        let (rows, cols) = (g.rng_range(1, 24) as i64, g.rng_range(1, 24) as i64);
        let band = g.rng_range(1, 6);
        let a = g.fin_matrix(rows, cols, band);
        let ok = match decompose(&a) {
            Ok(comps) => {
                let sum = comps
                    .iter()
                    .fold(FinMatrix::zero(rows, cols, ring), |acc, c| {
                        acc.add(&c.matrix)
                    });
                sum == a
                    && comps.iter().all(|c| {
                        c.matrix.band() <= 1
                            && c.witness.verifies(&a, &c.matrix)
                            && c.matrix.entries().all(|((i, j), v)| {
                                c.f.apply(*j) == Some(*i)
                                    && c.alpha.eval(*i) == Value::scalar(v.clone())
                            })
                    })
            }
            Err(_) => false,
        };
        t.check(ok, || {
            format!("matrix with {} entries over {ring}", a.nnz())
        });
    }
    g.with_ring(RingKind::Rational);
}

fn gamastable(g: &mut Gen, t: &mut Tally, trials: usize) {
    for _ in 0..trials {
        let (a, b) = (g.op(), g.op());
        let ok = (|| -> Result<bool, crate::gami::GamiError> {
            let (pa, pb) = (sumring::m2_iso(&a)?, sumring::m2_iso(&b)?);
            let pab = sumring::m2_iso(&a.mul(&b)?)?;
            Ok(pab.equal(&pa.mul(&pb)?) && sumring::m2_reconstruct(&pa)?.equal(&a))
        })()
        .unwrap_or(false);
        t.check(ok, || format!("a = {a}, b = {b}"));
    }
}

fn jota(g: &mut Gen, t: &mut Tally, trials: usize) {
    let ring = g.ring;
    for _ in 0..trials {
        let (alpha, f, beta, h) = (g.seq(), g.pinj(), g.seq(), g.pinj());
        let ok = (|| -> Result<bool, crate::gami::GamiError> {
            let x = sumring::jmath(&alpha, &f);
            let y = sumring::jmath(&beta, &h);
            let prod_coef = alpha.mul(&beta.act(&f)).expect("same ring");
            let hom = x
                .mul(&y)?
                .equal(&sumring::jmath(&prod_coef, &f.compose(&h)));
            let plain = OpSum::term(&alpha, &f);
            let w = x.window(128);
            let corner =
                w.entries
                    .iter()
                    .all(|((i, j), v)| match (pairs::decode(*i), pairs::decode(*j)) {
                        (Some((a, 1)), Some((b, 1))) => plain.entry(a, b) == *v,
                        _ => false,
                    })
                    && (1..=64).all(|b| (1..=64).all(|a| plain.entry(a, b) == w.get(2 * a, 2 * b)));
            let outer = OuterSeq {
                ring,
                items: BTreeMap::from([(1, alpha.clone()), (2, beta.clone())]),
                tail: None,
            };
            let mu = sumring::mu_intertwines_inner(&outer, &f, 128)
                && sumring::mu_intertwines_outer(&outer, &PInj::s1(), 128);
            Ok(hom && corner && mu)
        })()
        .unwrap_or(false);
        t.check(ok, || format!("alpha = {alpha}, f = {f}"));
    }
}
