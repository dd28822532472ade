//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use gammacalc::cohn::{CohnElem, CohnWord};
use gammacalc::crossed::CrossedElem;
use gammacalc::decomp::{decompose_logged, reduce_rows, FinMatrix};
use gammacalc::gami::OpSum;
use gammacalc::pinj::{PInj, ProgressionSet, Q};
use gammacalc::random::Gen;
use gammacalc::scalars::{RingKind, RingValue};
use gammacalc::seqspace::{IdealTag, SymSeq, Value};
use gammacalc::suites::{exactly_positive, rational_modulus_seq};
use gammacalc::sumring::{self, LazyOp};

const R: RingKind = RingKind::Rational;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

// ---------- shared oracles ----------

type Win = BTreeMap<(i64, i64), Value>;

fn win_add(w: &mut Win, i: i64, j: i64, v: &Value, n: i64) {
    if i < 1 || j < 1 || i > n || j > n || v.is_zero() {
        return;
    }
    let cur = w
        .remove(&(i, j))
        .unwrap_or_else(|| Value::zero(v.ring()))
        .add(v);
    if !cur.is_zero() {
        w.insert((i, j), cur);
    }
}

/// Window of `Σ diag(α) U_f` built entry by entry from the definition.
fn term_window(terms: &[(SymSeq, PInj)], n: i64) -> Win {
    let mut w = Win::new();
    for (alpha, f) in terms {
        for j in 1..=n {
            if let Some(i) = f.apply(j) {
                win_add(&mut w, i, j, &alpha.eval(i), n);
            }
        }
    }
    w
}

fn random_terms(g: &mut Gen) -> Vec<(SymSeq, PInj)> {
    let k = g.rng_range(1, 3);
    (0..k).map(|_| (g.seq(), g.pinj())).collect()
}

fn op_of(terms: &[(SymSeq, PInj)]) -> OpSum {
    terms.iter().fold(OpSum::zero(R), |acc, (a, f)| {
        acc.add(&OpSum::term(a, f)).expect("same ring")
    })
}

type Sp = BTreeMap<(i64, i64), RingValue>;

fn sp(m: &FinMatrix) -> Sp {
    m.entries().map(|(k, v)| (*k, v.clone())).collect()
}

fn sp_insert(s: &mut Sp, k: (i64, i64), v: RingValue) {
    let cur = match s.remove(&k) {
        Some(c) => &c + &v,
        None => v,
    };
    if !cur.is_zero() {
        s.insert(k, cur);
    }
}

fn sp_mul(a: &Sp, b: &Sp) -> Sp {
    let mut rows: BTreeMap<i64, Vec<(i64, &RingValue)>> = BTreeMap::new();
    for ((k, j), v) in b {
        rows.entry(*k).or_default().push((*j, v));
    }
    let mut out = Sp::new();
    for ((i, k), x) in a {
        for (j, y) in rows.get(k).into_iter().flatten() {
            sp_insert(&mut out, (*i, *j), x * y);
        }
    }
    out
}

fn sp_add(a: &Sp, b: &Sp) -> Sp {
    let mut out = a.clone();
    for (k, v) in b {
        sp_insert(&mut out, *k, v.clone());
    }
    out
}

fn max_line(s: &Sp, by_row: bool) -> usize {
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for (i, j) in s.keys() {
        *counts.entry(if by_row { *i } else { *j }).or_default() += 1;
    }
    counts.values().copied().max().unwrap_or(0)
}

// ---------- 1. inverse monoid ----------

fn inverse_graph(f: &PInj, bound: i64) -> BTreeMap<i64, i64> {
    (1..=bound)
        .filter_map(|n| f.apply(n).map(|m| (m, n)))
        .collect()
}

fn criterion_inverse_monoid() -> Outcome {
    let start = Instant::now();
    let mut g = Gen::new(101, R);
    let (n_pts, search) = (128i64, 128 * 32 + 64);
    let mut good = 0;
    for _ in 0..1000 {
        let (f, h, k) = (g.pinj(), g.pinj(), g.pinj());
        let fh = f.compose(&h);
        let structural = f.compose(&h.compose(&k)) == fh.compose(&k)
            && f.compose(&f.dagger()).compose(&f) == f
            && fh.dagger() == h.dagger().compose(&f.dagger())
            && f.dagger().compose(&f) == PInj::projection(&f.domain());
        let chain = |n: i64| k.apply(n).and_then(|m| h.apply(m)).and_then(|m| f.apply(m));
        let inv_fh = inverse_graph(&fh, search);
        let fff = f.compose(&f.dagger()).compose(&f);
        let ff = f.dagger().compose(&f);
        let pointwise = (1..=n_pts).all(|n| {
            f.compose(&h.compose(&k)).apply(n) == chain(n)
                && fh.compose(&k).apply(n) == chain(n)
                && fff.apply(n) == f.apply(n)
                && ff.apply(n) == f.apply(n).map(|_| n)
                && fh.dagger().apply(n) == inv_fh.get(&n).copied()
        });
        if structural && pointwise {
            good += 1;
        }
    }
    let took = start.elapsed();
    outcome(
        good == 1000 && took < Duration::from_secs(5),
        format!("{good}/1000 triples exact and pointwise on [1,{n_pts}], {took:.2?} (limit 5s)"),
    )
}

// ---------- 2. decomposition ----------

fn witness_sum(a: &Sp, pairs: &[(FinMatrix, FinMatrix)]) -> Sp {
    pairs.iter().fold(Sp::new(), |acc, (l, r)| {
        sp_add(&acc, &sp_mul(&sp_mul(&sp(l), a), &sp(r)))
    })
}

/// Re-run the row reduction level by level, checking every split.
fn audit_reduction(a: &FinMatrix) -> bool {
    let mut work = vec![a.clone()];
    while let Some(m) = work.pop() {
        let s = sp(&m);
        let (r, c) = (max_line(&s, true), max_line(&s, false));
        if r <= 1 {
            continue;
        }
        let Ok(parts) = reduce_rows(&m) else {
            return false;
        };
        let mut total = Sp::new();
        for p in parts {
            let ps = sp(&p.matrix);
            if max_line(&ps, true) >= r || max_line(&ps, false) > c {
                return false;
            }
            if witness_sum(&s, &p.witness.pairs) != ps {
                return false;
            }
            total = sp_add(&total, &ps);
            work.push(p.matrix);
        }
        if total != s {
            return false;
        }
    }
    true
}

fn criterion_decomposition() -> Outcome {
    let start = Instant::now();
    let mut g = Gen::new(202, R);
    let rings = [R, RingKind::IntMod(7), RingKind::Gaussian];
    let (mut good, mut comps_total, mut steps_total) = (0, 0, 0);
    for t in 0..1000 {
        let ring = rings[t % 3];
        g.with_ring(ring);
        let rows = g.rng_range(1, 64) as i64;
        let cols = g.rng_range(1, 64) as i64;
        let band = g.rng_range(1, 8);
        let a = g.fin_matrix(rows, cols, band);
        let s = sp(&a);
        assert!(max_line(&s, true) <= 8 && max_line(&s, false) <= 8);
        let mut log = Vec::new();
        let Ok(comps) = decompose_logged(&a, &mut log) else {
            continue;
        };
        comps_total += comps.len();
        steps_total += log.len();
        let mut total = Sp::new();
        let mut ok = true;
        for c in &comps {
            let cs = sp(&c.matrix);
            ok &= max_line(&cs, true) <= 1 && max_line(&cs, false) <= 1;
            ok &= witness_sum(&s, &c.witness.pairs) == cs;
            ok &= cs.iter().all(|((i, j), v)| {
                c.f.apply(*j) == Some(*i) && c.alpha.eval(*i) == Value::scalar(v.clone())
            });
            total = sp_add(&total, &cs);
        }
        ok &= total == s;
        ok &= log.iter().all(|st| {
            st.components
                .iter()
                .all(|(r, c)| *r <= st.r_before && *c <= st.c_before)
        });
        ok &= audit_reduction(&a) && audit_reduction(&a.transpose());
        if ok {
            good += 1;
        }
    }
    let took = start.elapsed();
    outcome(
        good == 1000 && took < Duration::from_secs(30),
        format!(
            "{good}/1000 matrices ({comps_total} components, {steps_total} induction steps), {took:.2?} (limit 30s)"
        ),
    )
}

// ---------- 3. Cohn ring ----------

/// The Cohn ring acting on `{0, 1, 2, ...}` by `s₁(n) = 2n+1`, `s₂(n) = 2n+2`,
/// where the defect idempotent is the projection onto `{0}`.
fn s_apply(word: &[u8], n: i64) -> i64 {
    word.iter()
        .rev()
        .fold(n, |m, l| if *l == 1 { 2 * m + 1 } else { 2 * m + 2 })
}

fn cohn_rep(x: &CohnElem, size: i64) -> BTreeMap<(i64, i64), i64> {
    let mut out: BTreeMap<(i64, i64), i64> = BTreeMap::new();
    for (w, c) in x.terms() {
        let c: i64 = c.try_into().expect("small coefficient");
        let mut k = 0;
        loop {
            let (i, j) = (s_apply(&w.mu, k), s_apply(&w.nu, k));
            if i >= size && j >= size {
                break;
            }
            if i < size && j < size {
                *out.entry((i, j)).or_default() += c;
            }
            k += 1;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn criterion_cohn() -> Outcome {
    let mut notes = Vec::new();
    let s = |i: u8| CohnElem::s(i);
    let mut relations = true;
    for i in 1..=2u8 {
        for j in 1..=2u8 {
            let p = s(i).dagger().mul(&s(j));
            relations &= if i == j {
                p == CohnElem::one()
            } else {
                p.is_zero()
            };
            let op = OpSum::u(R, &PInj::s_word(&[i]).unwrap())
                .adjoint()
                .mul(&OpSum::u(R, &PInj::s_word(&[j]).unwrap()))
                .unwrap();
            let expect = if i == j {
                OpSum::identity(R)
            } else {
                OpSum::zero(R)
            };
            relations &= op.equal(&expect);
            let w = op.window(128);
            relations &= w.entries.len() == if i == j { 128 } else { 0 };
        }
    }
    notes.push(format!(
        "generator relations {}",
        if relations { "hold" } else { "FAIL" }
    ));

    let size = 64;
    let units: BTreeMap<(i64, i64), CohnElem> = (1..=16)
        .flat_map(|i| (1..=16).map(move |j| ((i, j), CohnElem::minf_embed(i, j).unwrap())))
        .collect();
    let reps: BTreeMap<(i64, i64), BTreeMap<(i64, i64), i64>> =
        units.iter().map(|(k, e)| (*k, cohn_rep(e, size))).collect();
    let mut single_units = reps
        .values()
        .all(|r| r.len() == 1 && r.values().all(|v| *v == 1));
    let positions: std::collections::BTreeSet<_> =
        reps.values().flat_map(|r| r.keys().copied()).collect();
    single_units &= positions.len() == 256;
    let mut mult_ok = 0;
    for i in 1..=16 {
        for j in 1..=16 {
            for k in 1..=16 {
                for l in 1..=16 {
                    let p = units[&(i, j)].mul(&units[&(k, l)]);
                    let exact = if j == k {
                        p == units[&(i, l)]
                    } else {
                        p.is_zero()
                    };
                    let expected = if j == k {
                        reps[&(i, l)].clone()
                    } else {
                        BTreeMap::new()
                    };
                    if exact && cohn_rep(&p, size) == expected {
                        mult_ok += 1;
                    }
                }
            }
        }
    }
    notes.push(format!(
        "E_ij E_kl = δ_jk E_il for {mult_ok}/65536 index tuples"
    ));

    let fhat = units[&(1, 1)]
        .add(&CohnElem::word(CohnWord::new(vec![2], vec![1])))
        .add(&CohnElem::word(CohnWord::new(vec![1], vec![2])));
    let rf = fhat.rho(R);
    let unitary = rf.adjoint().mul(&rf).unwrap().equal(&OpSum::identity(R));
    let w = rf.window(256);
    let mut perm_cols =
        (1..=255).all(|j| (1..=256).filter(|i| !w.get(*i, j).is_zero()).count() == 1);
    perm_cols &= w.entries.values().all(|v| *v == Value::one(R));
    notes.push(format!(
        "flip element isometric {}",
        if unitary && perm_cols { "yes" } else { "NO" }
    ));
    outcome(
        relations && single_units && mult_ok == 65536 && unitary && perm_cols,
        notes.join("; "),
    )
}

// ---------- 4. sum ring ----------

fn criterion_sum_ring() -> Outcome {
    let one = OpSum::identity(R);
    let (x0, x1, y0, y1) = (
        sumring::x(0, R),
        sumring::x(1, R),
        sumring::y(0, R),
        sumring::y(1, R),
    );
    let id_win: Win = (1..=64).map(|i| ((i, i), Value::one(R))).collect();
    let checks = [
        y0.mul(&x0).unwrap(),
        y1.mul(&x1).unwrap(),
        x0.mul(&y0).unwrap().add(&x1.mul(&y1).unwrap()).unwrap(),
    ];
    let axioms = checks
        .iter()
        .all(|c| c.equal(&one) && c.window(64).entries == id_win);

    let mut g = Gen::new(404, R);
    let mut oplus_ok = 0;
    for _ in 0..100 {
        let (a, b, c, d) = (g.op(), g.op(), g.op(), g.op());
        let lhs = sumring::oplus(&a, &b)
            .unwrap()
            .mul(&sumring::oplus(&c, &d).unwrap())
            .unwrap();
        let rhs = sumring::oplus(&a.mul(&c).unwrap(), &b.mul(&d).unwrap()).unwrap();
        if lhs.equal(&rhs) {
            oplus_ok += 1;
        }
    }

    let mut phi_ok = 0;
    for _ in 0..100 {
        let terms = random_terms(&mut g);
        let r = op_of(&terms);
        let phi = sumring::phi(&r);
        let lhs = LazyOp::oplus(&LazyOp::from_op(&r), &phi);
        let ok = [64i64, 128, 256].iter().all(|&n| {
            let base = term_window(&terms, n);
            let mut expected = Win::new();
            let mut k = 0u32;
            while (1i64 << (k + 1)) - (1i64 << k) + 1 <= n {
                let gk = |i: i64| (1i64 << (k + 1)) * i - (1i64 << k) + 1;
                for ((i, j), v) in &base {
                    win_add(&mut expected, gk(*i), gk(*j), v, n);
                }
                k += 1;
            }
            lhs.window(n).entries == expected && phi.window(n).entries == expected
        });
        if ok {
            phi_ok += 1;
        }
    }
    outcome(
        axioms && oplus_ok == 100 && phi_ok == 100,
        format!(
            "axioms {}; (a⊕b)(c⊕d) = ac⊕bd {oplus_ok}/100; r⊕Φ(r) = Φ(r) on n ∈ {{64,128,256}} {phi_ok}/100",
            if axioms { "exact" } else { "FAIL" }
        ),
    )
}

// ---------- 5. crossed product ----------

fn crossed_of(terms: Vec<(SymSeq, PInj)>) -> CrossedElem {
    CrossedElem { ring: R, terms }
}

/// An equivalent presentation obtained by the defining relations.
fn rewrite(g: &mut Gen, x: &CrossedElem) -> CrossedElem {
    let mut terms = Vec::new();
    for (a, f) in &x.terms {
        match g.rng_range(0, 2) {
            0 => terms.push((a.mul(&SymSeq::chi(R, &f.range())).unwrap(), f.clone())),
            1 => {
                let set = g.set();
                terms.push((a.clone(), f.restrict(&set)));
                terms.push((a.clone(), f.restrict(&set.complement())));
            }
            _ => {
                let set = g.set();
                terms.push((a.mul(&SymSeq::chi(R, &set)).unwrap(), f.clone()));
                terms.push((
                    a.mul(&SymSeq::chi(R, &set.complement())).unwrap(),
                    f.clone(),
                ));
            }
        }
    }
    crossed_of(terms)
}

fn criterion_crossed() -> Outcome {
    let mut g = Gen::new(505, R);
    let (mut hom, mut kernel, mut zeros_seen) = (0, 0, 0);
    for t in 0..500 {
        let x = crossed_of(random_terms(&mut g));
        let y = crossed_of(random_terms(&mut g));
        let xy = x.mul(&y).unwrap();
        let prod_op = x.to_gami().unwrap().mul(&y.to_gami().unwrap()).unwrap();
        let win_ok = term_window(&xy.terms, 64) == prod_op.window(64).entries;
        if xy.to_gami().unwrap().equal(&prod_op) && win_ok {
            hom += 1;
        }
        let z = if t % 2 == 0 {
            x.sub(&rewrite(&mut g, &x))
        } else {
            x.clone()
        };
        let image = z.to_gami().unwrap();
        let image_zero = image.is_zero() && term_window(&z.terms, 64).is_empty();
        if z.is_zero() {
            zeros_seen += 1;
        }
        if z.is_zero() == image_zero && (t % 2 == 1 || z.is_zero()) {
            kernel += 1;
        }
    }
    outcome(
        hom == 500 && kernel == 500,
        format!(
            "homomorphism {hom}/500; kernel = normalized zero {kernel}/500 ({zeros_seen} zeros)"
        ),
    )
}

// ---------- 6. ideal lattice ----------

struct Family {
    seq: SymSeq,
    label: String,
    /// `ln|a_n|` as a function of `ln n` and `n` (the latter may be infinite).
    ln_abs: Box<dyn Fn(f64, f64) -> f64>,
    monotone: bool,
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn families() -> Vec<Family> {
    let mut out = Vec::new();
    for a in [
        q(1, 3),
        q(1, 2),
        q(2, 3),
        q(1, 1),
        q(3, 2),
        q(2, 1),
        q(3, 1),
    ] {
        let af = *a.numer() as f64 / *a.denom() as f64;
        out.push(Family {
            seq: SymSeq::pow(Value::one(R), a).unwrap(),
            label: format!("pow(1;{a})"),
            ln_abs: Box::new(move |ln_n, _| -af * ln_n),
            monotone: true,
        });
    }
    for a in [q(1, 2), q(2, 3), q(1, 1)] {
        for gexp in [q(1, 4), q(2, 1)] {
            let af = *a.numer() as f64 / *a.denom() as f64;
            let gf = *gexp.numer() as f64 / *gexp.denom() as f64;
            out.push(Family {
                seq: SymSeq::logpow(R, a, gexp).unwrap(),
                label: format!("logpow({a};{gexp})"),
                ln_abs: Box::new(move |ln_n, n| {
                    let ln_n1 = if n.is_finite() { (n + 1.0).ln() } else { ln_n };
                    -af * ln_n - gf * ln_n1.ln()
                }),
                monotone: true,
            });
        }
    }
    out.push(Family {
        seq: SymSeq::geom(Value::one(R), &num::BigRational::new(1.into(), 2.into())).unwrap(),
        label: "geom(1;1/2)".into(),
        ln_abs: Box::new(|_, n| (n - 1.0) * 0.5f64.ln()),
        monotone: true,
    });
    out.push(Family {
        seq: SymSeq::e(R, 3),
        label: "e(3)".into(),
        ln_abs: Box::new(|_, n| if n == 3.0 { 0.0 } else { f64::NEG_INFINITY }),
        monotone: false,
    });
    out.push(Family {
        seq: SymSeq::one(R),
        label: "1".into(),
        ln_abs: Box::new(|_, _| 0.0),
        monotone: true,
    });
    out.push(Family {
        seq: SymSeq::chi(R, &ProgressionSet::evens()),
        label: "chi[even]".into(),
        ln_abs: Box::new(|_, n| {
            if n % 2.0 == 0.0 {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        }),
        monotone: false,
    });
    out
}

const TERMS: u64 = 1_000_000;
const DIVERGENCE: f64 = 1e3;

/// Partial sums of `Σ |a_n|^q` and of the condensed series
/// `Σ 2^k |a_{2^k}|^q`, each to 10^6 terms; divergent when either exceeds 10^3.
fn summable(fam: &Family, q: f64) -> bool {
    let mut s = 0.0;
    for n in 1..=TERMS {
        let nf = n as f64;
        s += (q * (fam.ln_abs)(nf.ln(), nf)).exp();
        if s > DIVERGENCE {
            return false;
        }
    }
    if !fam.monotone {
        return true;
    }
    let ln2 = 2f64.ln();
    let mut c = 0.0;
    for k in 0..TERMS {
        let ln_n = k as f64 * ln2;
        let n = if k < 1000 {
            2f64.powi(k as i32)
        } else {
            f64::INFINITY
        };
        c += (ln_n + q * (fam.ln_abs)(ln_n, n)).exp();
        if c > DIVERGENCE {
            return false;
        }
    }
    true
}

fn oracle_member(fam: &Family, tag: &IdealTag) -> Option<bool> {
    let f = |p: &Q| *p.numer() as f64 / *p.denom() as f64;
    match tag {
        IdealTag::Lp(p) => Some(summable(fam, f(p))),
        IdealTag::LpPlus(p) => Some([1.1, 1.01].iter().all(|e| summable(fam, f(p) * e))),
        IdealTag::LpMinus(Some(p)) => Some([0.9, 0.99].iter().any(|e| summable(fam, f(p) * e))),
        _ => None,
    }
}

fn criterion_ideal_lattice() -> Outcome {
    let fams = families();
    let mut notes = Vec::new();
    let mut ok = true;

    let eval_ok = fams.iter().all(|fam| {
        (1..=40).all(|n| {
            let lib = fam.seq.eval(n).to_f64().0.abs();
            let want = (fam.ln_abs)((n as f64).ln(), n as f64).exp();
            (lib - want).abs() <= 1e-9 * want.max(1e-300)
        })
    });
    ok &= eval_ok;

    let ps = [q(1, 1), q(3, 2), q(2, 1)];
    let (mut agree, mut compared, mut monotone) = (0, 0, true);
    for p in ps {
        let chain = IdealTag::chain(p);
        for fam in &fams {
            let member: Vec<bool> = chain.iter().map(|t| fam.seq.member(t)).collect();
            monotone &= member.windows(2).all(|w| !w[0] || w[1]);
            for tag in &chain {
                if let Some(o) = oracle_member(fam, tag) {
                    compared += 1;
                    if o == fam.seq.member(tag) {
                        agree += 1;
                    } else {
                        notes.push(format!("oracle disagrees on {} in {tag}", fam.label));
                    }
                }
            }
        }
    }
    ok &= monotone && agree == compared;

    let mut strict = true;
    for p in ps {
        let inv = Q::from_integer(1) / p;
        let edge = SymSeq::pow(Value::one(R), inv).unwrap();
        strict &= edge.member(&IdealTag::LpPlus(p)) && !edge.member(&IdealTag::Lp(p));
        let g = Q::from_integer(2) / p;
        let logged = SymSeq::logpow(R, inv, g).unwrap();
        strict &= logged.member(&IdealTag::Lp(p)) && !logged.member(&IdealTag::LpMinus(Some(p)));
    }
    ok &= strict;

    let mut g = Gen::new(606, R);
    let mut closed = 0;
    for t in 0..200 {
        let p = ps[t % 3];
        let tag = IdealTag::chain(p)[g.rng_range(0, 5)];
        let members: Vec<&Family> = fams.iter().filter(|f| f.seq.member(&tag)).collect();
        let fam = members[g.rng_range(0, members.len() - 1)];
        let x = OpSum::term(&fam.seq, &g.pinj());
        let y = g.op();
        let both = [y.mul(&x).unwrap(), x.mul(&y).unwrap()];
        if x.ideal_member(&tag) && both.iter().all(|z| z.ideal_member(&tag)) {
            closed += 1;
        }
    }
    ok &= closed == 200;

    notes.insert(
        0,
        format!(
            "chain monotone {}; oracle agreement {agree}/{compared}; strict witnesses {}; two-sided closure {closed}/200; eval cross-check {}",
            if monotone { "yes" } else { "NO" },
            if strict { "yes" } else { "NO" },
            if eval_ok { "yes" } else { "NO" },
        ),
    );
    outcome(ok, notes.join("; "))
}

// ---------- 7. polar decomposition ----------

fn criterion_polar() -> Outcome {
    let mut g = Gen::new(707, R);
    let mut good = 0;
    for _ in 0..200 {
        let alpha = rational_modulus_seq(&mut g);
        let f = g.pinj();
        let t = OpSum::term(&alpha, &f);
        let Ok((v, abs)) = t.polar() else {
            continue;
        };
        let fact = v.mul(&abs).unwrap().equal(&t);
        let partial = v.mul(&v.adjoint()).unwrap().mul(&v).unwrap().equal(&v);
        let square = abs.mul(&abs).unwrap().equal(&t.adjoint().mul(&t).unwrap());
        let w = abs.window(64);
        let positive = w
            .entries
            .iter()
            .all(|((i, j), x)| i == j && exactly_positive(x));
        let same_ideal = [q(1, 1), q(3, 2), q(2, 1)]
            .into_iter()
            .flat_map(IdealTag::chain)
            .all(|tag| t.ideal_member(&tag) == abs.ideal_member(&tag));
        if fact && partial && square && positive && same_ideal {
            good += 1;
        }
    }
    outcome(
        good == 200,
        format!("{good}/200 terms: T = V|T|, VV†V = V, |T|² = T†T, |T| ≥ 0, same ideals"),
    )
}

// ---------- 8. unit witness ----------

fn criterion_unit_witness() -> Outcome {
    let mut g = Gen::new(808, R);
    let (mut good, mut made) = (0, 0);
    while made < 100 {
        let alpha = g.seq_rational_constant();
        let f = g.pinj_infinite();
        if alpha.restrict(&f.range()).has_finite_support() {
            continue;
        }
        made += 1;
        let x = OpSum::term(&alpha, &f);
        let Ok(w) = x.unit_witness() else {
            continue;
        };
        let prod = w.apply(&x).unwrap();
        let win = prod.window(64);
        let diag = (1..=64).all(|i| win.get(i, i) == Value::one(R)) && win.entries.len() == 64;
        if prod.equal(&OpSum::identity(R)) && diag {
            good += 1;
        }
    }
    outcome(
        good == 100,
        format!("{good}/100 infinite-support terms give U_h·D·x·U_g = 1"),
    )
}

// ---------- 9. stability ----------

fn criterion_stability() -> Outcome {
    let mut g = Gen::new(909, R);
    let (mut m2, mut corner) = (0, 0);
    let copy = |c: usize, m: i64| if c == 0 { 2 * m } else { 2 * m - 1 };
    for _ in 0..200 {
        let (ta, tb) = (random_terms(&mut g), random_terms(&mut g));
        let (a, b) = (op_of(&ta), op_of(&tb));
        let (pa, pb) = (sumring::m2_iso(&a).unwrap(), sumring::m2_iso(&b).unwrap());
        let mult = sumring::m2_iso(&a.mul(&b).unwrap())
            .unwrap()
            .equal(&pa.mul(&pb).unwrap());
        let back = sumring::m2_reconstruct(&pa).unwrap().equal(&a);
        let big = term_window(&ta, 128);
        let blocks = (0..2).all(|p| {
            (0..2).all(|r| {
                let w = pa.entries[p][r].window(64);
                (1..=64).all(|i| {
                    (1..=64).all(|j| {
                        w.get(i, j)
                            == big
                                .get(&(copy(p, i), copy(r, j)))
                                .cloned()
                                .unwrap_or_else(|| Value::zero(R))
                    })
                })
            })
        });
        if mult && back && blocks {
            m2 += 1;
        }

        let (alpha, f) = ta[0].clone();
        let j = sumring::jmath(&alpha, &f);
        let plain = term_window(&[(alpha.clone(), f.clone())], 128);
        let mut expected = Win::new();
        for ((i, k), v) in &plain {
            win_add(&mut expected, 2 * i, 2 * k, v, 128);
        }
        let same = j.window(128).entries == expected
            && j.equal(&sumring::jmath_op(&OpSum::term(&alpha, &f)).unwrap());
        if same {
            corner += 1;
        }
    }
    outcome(
        m2 == 200 && corner == 200,
        format!("M₂ multiplicative + reconstruction + block windows {m2}/200; corner embedding on n = 128 {corner}/200"),
    )
}

// ---------- 10. symbolic vs window equality ----------

fn criterion_oracle_coherence() -> Outcome {
    let mut g = Gen::new(1010, R);
    let n = 512;
    let (mut false_eq, mut false_ne, mut equal_pairs, mut hidden) = (0, 0, 0, 0);
    for t in 0..1000 {
        let (a, b, c) = (g.op(), g.op(), g.op());
        let kind = t % 6;
        let (x, y) = match kind {
            0 => (
                a.mul(&b).unwrap().mul(&c).unwrap(),
                a.mul(&b.mul(&c).unwrap()).unwrap(),
            ),
            1 => (a.add(&b).unwrap(), b.add(&a).unwrap()),
            2 => {
                let (alpha, f) = (g.seq(), g.pinj());
                let uf = OpSum::u(R, &f);
                (
                    uf.mul(&OpSum::diag(&alpha)).unwrap(),
                    OpSum::diag(&alpha.act(&f)).mul(&uf).unwrap(),
                )
            }
            3 => (a, b),
            4 => {
                let (i, j) = (g.rng_range(1, 512) as i64, g.rng_range(1, 512) as i64);
                let e = OpSum::matrix_unit(&Value::scalar(g.scalar()), i, j);
                (a.add(&e).unwrap(), a)
            }
            _ => {
                let (i, j) = (g.rng_range(513, 900) as i64, g.rng_range(1, 900) as i64);
                let e = OpSum::matrix_unit(&Value::scalar(g.scalar()), i, j);
                (a.add(&e).unwrap(), a)
            }
        };
        let eq = x.equal(&y);
        let weq = x.window(n) == y.window(n);
        if eq {
            equal_pairs += 1;
        }
        if eq && !weq {
            false_eq += 1;
        }
        if !eq && weq {
            if kind == 5 {
                hidden += 1;
            } else {
                false_ne += 1;
            }
        }
    }
    outcome(
        false_eq == 0 && false_ne == 0,
        format!(
            "1000 pairs ({equal_pairs} equal): {false_eq} false equal, {false_ne} false unequal; {hidden} differ only outside the window"
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("inverse monoid", criterion_inverse_monoid),
        ("band decomposition", criterion_decomposition),
        ("Cohn ring", criterion_cohn),
        ("sum ring", criterion_sum_ring),
        ("crossed product", criterion_crossed),
        ("ideal lattice", criterion_ideal_lattice),
        ("polar decomposition", criterion_polar),
        ("unit witness", criterion_unit_witness),
        ("stability", criterion_stability),
        ("oracle coherence", criterion_oracle_coherence),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = run();
        println!(
            "{} criterion {:>2} {name}: {} [{:.2?}]",
            if out.ok { "PASS" } else { "FAIL" },
            k + 1,
            out.detail,
            t.elapsed()
        );
        if !out.ok {
            failed += 1;
        }
    }
    let total = start.elapsed();
    let in_budget = total < Duration::from_secs(180);
    println!(
        "{} total runtime {total:.2?} (limit 180s)",
        if in_budget { "PASS" } else { "FAIL" }
    );
    if failed > 0 || !in_budget {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
