//! The sum-ring structure: `⊕`, the infinite repetition `Φ`, and the
//! stability maps between `M₂`, `ℕ ⊔ ℕ` and `ℕ × ℕ` indexings.
//!
//! With `f₀(n) = 2n` and `f₁(n) = 2n − 1` we take `x_i = U_{f_i}` and
//! `y_i = U_{f_i}†`, so that `y₀x₀ = y₁x₁ = 1` and `x₀y₀ + x₁y₁ = 1`.
//! `Φ(A)` places a copy of `A` on each family `g_k = f₁^k ∘ f₀`, that is
//! `g_k(i) = 2^{k+1} i − 2^k + 1`; the images cover every index except 1.
//! The variant `2^{k+1} i + 2^k − 1` seen elsewhere does not arise from
//! this composition under either choice of `x_i`; it is not used.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::gami::{Column, GamiError, OpSum, WindowMatrix};
use crate::pinj::{disjoint_union, pairs, PInj};
use crate::scalars::RingKind;
use crate::seqspace::{SymSeq, Value};

pub fn x(i: u8, ring: RingKind) -> OpSum {
    OpSum::u(ring, &f(i))
}

pub fn y(i: u8, ring: RingKind) -> OpSum {
    OpSum::u(ring, &f(i).dagger())
}

fn f(i: u8) -> PInj {
    if i == 0 {
        PInj::f0()
    } else {
        PInj::f1()
    }
}

/// `y₀x₀ = y₁x₁ = 1` and `x₀y₀ + x₁y₁ = 1`, checked as operator identities.
pub fn axioms_hold(ring: RingKind) -> bool {
    let one = OpSum::identity(ring);
    let yx = |i| y(i, ring).mul(&x(i, ring)).expect("same ring");
    let xy = |i| x(i, ring).mul(&y(i, ring)).expect("same ring");
    yx(0).equal(&one) && yx(1).equal(&one) && xy(0).add(&xy(1)).expect("same ring").equal(&one)
}

/// `r ⊕ s = x₀ r y₀ + x₁ s y₁`.
pub fn oplus(r: &OpSum, s: &OpSum) -> Result<OpSum, GamiError> {
    let ring = r.ring();
    let a = x(0, ring).mul(r)?.mul(&y(0, ring))?;
    let b = x(1, ring).mul(s)?.mul(&y(1, ring))?;
    a.add(&b)
}

/// `g_k(i) = 2^{k+1} i − 2^k + 1`.
pub fn g(k: u32, i: i64) -> Option<i64> {
    let p = 1i64.checked_shl(k)?;
    (2 * p).checked_mul(i)?.checked_sub(p - 1)
}

/// The `(k, i)` with `g_k(i) = n`; `None` for `n = 1`.
pub fn g_inverse(n: i64) -> Option<(u32, i64)> {
    if n < 2 {
        return None;
    }
    let k = (n - 1).trailing_zeros();
    let odd = (n - 1) >> k;
    Some((k, (odd + 1) / 2))
}

type Lines = Arc<dyn Fn(i64) -> Column + Send + Sync>;

/// An operator known through its columns and rows, each finite.
#[derive(Clone)]
pub struct LazyOp {
    pub ring: RingKind,
    pub band_bound: Option<usize>,
    cols: Lines,
    rows: Lines,
}

impl fmt::Debug for LazyOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LazyOp")
            .field("ring", &self.ring)
            .field("band_bound", &self.band_bound)
            .finish_non_exhaustive()
    }
}

fn conj_column(col: Column) -> Column {
    col.into_iter().map(|(k, v)| (k, v.conjugate())).collect()
}

impl LazyOp {
    pub fn new(
        ring: RingKind,
        band_bound: Option<usize>,
        cols: impl Fn(i64) -> Column + Send + Sync + 'static,
        rows: impl Fn(i64) -> Column + Send + Sync + 'static,
    ) -> Self {
        LazyOp {
            ring,
            band_bound,
            cols: Arc::new(cols),
            rows: Arc::new(rows),
        }
    }

    pub fn from_op(op: &OpSum) -> Self {
        let stats = op.band_stats();
        let a = op.clone();
        let adj = op.adjoint();
        LazyOp::new(
            op.ring(),
            Some(stats.n),
            move |j| a.column(j),
            move |i| conj_column(adj.column(i)),
        )
    }

    /// Column `j` as `row ↦ value`.
    pub fn column(&self, j: i64) -> Column {
        if j < 1 {
            return Column::new();
        }
        (self.cols)(j)
    }

    /// Row `i` as `column ↦ value`.
    pub fn row(&self, i: i64) -> Column {
        if i < 1 {
            return Column::new();
        }
        (self.rows)(i)
    }

    pub fn entry(&self, i: i64, j: i64) -> Value {
        self.column(j)
            .remove(&i)
            .unwrap_or_else(|| Value::zero(self.ring))
    }

    pub fn window(&self, n: i64) -> WindowMatrix {
        let mut w = WindowMatrix::new(n, self.ring);
        for j in 1..=n {
            for (i, v) in self.column(j) {
                w.add_at(i, j, &v);
            }
        }
        w
    }

    pub fn add(&self, other: &LazyOp) -> LazyOp {
        let (a, b) = (self.clone(), other.clone());
        let (c, d) = (self.clone(), other.clone());
        let band = match (self.band_bound, other.band_bound) {
            (Some(p), Some(q)) => Some(p + q),
            _ => None,
        };
        LazyOp::new(
            self.ring,
            band,
            move |j| merge(a.column(j), b.column(j)),
            move |i| merge(c.row(i), d.row(i)),
        )
    }

    pub fn neg(&self) -> LazyOp {
        let (a, b) = (self.clone(), self.clone());
        let negate =
            |col: Column| -> Column { col.into_iter().map(|(k, v)| (k, v.neg())).collect() };
        LazyOp::new(
            self.ring,
            self.band_bound,
            move |j| negate(a.column(j)),
            move |i| negate(b.row(i)),
        )
    }

    pub fn mul(&self, other: &LazyOp) -> LazyOp {
        let (a, b) = (self.clone(), other.clone());
        let (c, d) = (self.clone(), other.clone());
        let band = match (self.band_bound, other.band_bound) {
            (Some(p), Some(q)) => Some(p * q),
            _ => None,
        };
        LazyOp::new(
            self.ring,
            band,
            move |j| {
                let mut out = Column::new();
                for (k, bv) in b.column(j) {
                    for (i, av) in a.column(k) {
                        add_into(&mut out, i, &av.mul(&bv));
                    }
                }
                out
            },
            move |i| {
                let mut out = Column::new();
                for (k, av) in c.row(i) {
                    for (j, bv) in d.row(k) {
                        add_into(&mut out, j, &av.mul(&bv));
                    }
                }
                out
            },
        )
    }

    pub fn adjoint(&self) -> LazyOp {
        let (a, b) = (self.clone(), self.clone());
        LazyOp::new(
            self.ring,
            self.band_bound,
            move |j| conj_column(a.row(j)),
            move |i| conj_column(b.column(i)),
        )
    }

    /// Conjugate by an injection: entries `(i, j)` move to `(h(i), h(j))`.
    fn spread(
        &self,
        h: impl Fn(i64) -> Option<i64> + Send + Sync + Clone + 'static,
        h_inv: impl Fn(i64) -> Option<i64> + Send + Sync + Clone + 'static,
    ) -> LazyOp {
        let (a, b) = (self.clone(), self.clone());
        let (h1, h2) = (h.clone(), h);
        let (i1, i2) = (h_inv.clone(), h_inv);
        let relabel = move |col: Column, h: &dyn Fn(i64) -> Option<i64>| -> Column {
            col.into_iter()
                .filter_map(|(k, v)| h(k).map(|hk| (hk, v)))
                .collect()
        };
        let relabel2 = relabel.clone();
        LazyOp::new(
            self.ring,
            self.band_bound,
            move |j| match i1(j) {
                Some(src) => relabel(a.column(src), &h1),
                None => Column::new(),
            },
            move |i| match i2(i) {
                Some(src) => relabel2(b.row(src), &h2),
                None => Column::new(),
            },
        )
    }

    /// `r ⊕ s` for lazily known operands.
    pub fn oplus(r: &LazyOp, s: &LazyOp) -> LazyOp {
        let even = |n: i64| n.checked_mul(2);
        let even_inv = |n: i64| (n % 2 == 0).then_some(n / 2);
        let odd = |n: i64| n.checked_mul(2).map(|v| v - 1);
        let odd_inv = |n: i64| (n % 2 == 1).then_some((n + 1) / 2);
        r.spread(even, even_inv)
            .add(&s.spread(odd, odd_inv))
            .with_band(max_band(r, s))
    }

    fn with_band(mut self, band: Option<usize>) -> LazyOp {
        self.band_bound = band;
        self
    }
}

fn max_band(r: &LazyOp, s: &LazyOp) -> Option<usize> {
    Some(r.band_bound?.max(s.band_bound?))
}

fn add_into(col: &mut Column, k: i64, v: &Value) {
    let cur = col
        .remove(&k)
        .unwrap_or_else(|| Value::zero(v.ring()))
        .add(v);
    if !cur.is_zero() {
        col.insert(k, cur);
    }
}

fn merge(mut a: Column, b: Column) -> Column {
    for (k, v) in b {
        add_into(&mut a, k, &v);
    }
    a
}

/// `Φ(A) = Σ_k x₁^k x₀ A y₀ y₁^k`.
pub fn phi(a: &OpSum) -> LazyOp {
    phi_lazy(&LazyOp::from_op(a))
}

pub fn phi_lazy(a: &LazyOp) -> LazyOp {
    let forward = |src: i64, target: i64| -> Option<i64> {
        let (k, _) = g_inverse(target)?;
        g(k, src)
    };
    let (a1, a2) = (a.clone(), a.clone());
    LazyOp::new(
        a.ring,
        a.band_bound,
        move |j| match g_inverse(j) {
            Some((_, src)) => a1
                .column(src)
                .into_iter()
                .filter_map(|(i, v)| forward(i, j).map(|gi| (gi, v)))
                .collect(),
            None => Column::new(),
        },
        move |i| match g_inverse(i) {
            Some((_, src)) => a2
                .row(src)
                .into_iter()
                .filter_map(|(j, v)| forward(j, i).map(|gj| (gj, v)))
                .collect(),
            None => Column::new(),
        },
    )
}

/// A 2×2 matrix of operators.
#[derive(Debug, Clone)]
pub struct Block2 {
    pub entries: [[OpSum; 2]; 2],
}

impl Block2 {
    pub fn mul(&self, other: &Block2) -> Result<Block2, GamiError> {
        let e = |i: usize, j: usize| -> Result<OpSum, GamiError> {
            self.entries[i][0]
                .mul(&other.entries[0][j])?
                .add(&self.entries[i][1].mul(&other.entries[1][j])?)
        };
        Ok(Block2 {
            entries: [[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]],
        })
    }

    pub fn equal(&self, other: &Block2) -> bool {
        (0..2).all(|i| (0..2).all(|j| self.entries[i][j].equal(&other.entries[i][j])))
    }
}

fn inclusion(copy: usize, ring: RingKind) -> OpSum {
    OpSum::u(ring, &disjoint_union::inclusion(copy as u8 + 1))
}

/// The blocks `U_{p_i}† a U_{p_j}`, where `p_i` includes `ℕ` as the `i`-th
/// copy of `ℕ ⊔ ℕ` (evens, then odds).
pub fn m2_iso(a: &OpSum) -> Result<Block2, GamiError> {
    let ring = a.ring();
    let e = |i: usize, j: usize| -> Result<OpSum, GamiError> {
        inclusion(i, ring)
            .adjoint()
            .mul(a)?
            .mul(&inclusion(j, ring))
    };
    Ok(Block2 {
        entries: [[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]],
    })
}

/// `Σ U_{p_i} b_{ij} U_{p_j}†`, inverse to [`m2_iso`].
pub fn m2_reconstruct(b: &Block2) -> Result<OpSum, GamiError> {
    let ring = b.entries[0][0].ring();
    let mut out = OpSum::zero(ring);
    for i in 0..2 {
        for j in 0..2 {
            let t = inclusion(i, ring)
                .mul(&b.entries[i][j])?
                .mul(&inclusion(j, ring).adjoint())?;
            out = out.add(&t)?;
        }
    }
    Ok(out)
}

/// The corner embedding `α # U_f ↦ ι(α) # U_{f × χ_{1}}` through the pair
/// codec, where `ι(α)(m, n) = α_m δ_{1,n}`.
pub fn jmath(alpha: &SymSeq, f: &PInj) -> OpSum {
    let row = pairs::row(1);
    let iota = alpha.act(&row);
    let lifted = row.compose(f).compose(&row.dagger());
    OpSum::term(&iota, &lifted)
}

/// The corner embedding of a whole operator: `U_r T U_r†` with `r = code(·, 1)`.
pub fn jmath_op(t: &OpSum) -> Result<OpSum, GamiError> {
    let u = OpSum::u(t.ring(), &pairs::row(1));
    u.mul(t)?.mul(&u.adjoint())
}

/// A sequence of sequences: finitely many explicit members and an optional
/// common tail for every outer index past the listed ones.
#[derive(Debug, Clone)]
pub struct OuterSeq {
    pub ring: RingKind,
    pub items: BTreeMap<i64, SymSeq>,
    pub tail: Option<(i64, SymSeq)>,
}

impl OuterSeq {
    pub fn inner(&self, n: i64) -> Option<&SymSeq> {
        if let Some(s) = self.items.get(&n) {
            return Some(s);
        }
        match &self.tail {
            Some((from, s)) if n >= *from => Some(s),
            _ => None,
        }
    }

    /// `μ(α)` at the codec index `k`, i.e. `(α_n)_m` for `k = code(m, n)`.
    pub fn mu_at(&self, k: i64) -> Value {
        let zero = Value::zero(self.ring);
        match pairs::decode(k) {
            Some((m, n)) => self.inner(n).map(|s| s.eval(m)).unwrap_or(zero),
            None => zero,
        }
    }

    /// `μ(α)` as a symbolic sequence; available when there is no tail.
    pub fn mu(&self) -> Option<SymSeq> {
        if self.tail.as_ref().is_some_and(|(_, s)| !s.is_zero()) {
            return None;
        }
        let mut out = SymSeq::zero(self.ring);
        for (n, s) in &self.items {
            out = out.add(&s.act(&pairs::row(*n))).expect("same ring");
        }
        Some(out)
    }

    /// Apply `f_*` to every inner sequence.
    pub fn act_inner(&self, f: &PInj) -> OuterSeq {
        OuterSeq {
            ring: self.ring,
            items: self.items.iter().map(|(n, s)| (*n, s.act(f))).collect(),
            tail: self.tail.as_ref().map(|(from, s)| (*from, s.act(f))),
        }
    }

    /// Apply `f_*` to the outer index; `f` must be finite when a tail is present.
    pub fn act_outer(&self, f: &PInj) -> OuterSeq {
        let items = self
            .items
            .iter()
            .filter_map(|(n, s)| f.apply(*n).map(|m| (m, s.clone())))
            .collect();
        OuterSeq {
            ring: self.ring,
            items,
            tail: None,
        }
    }
}

/// `μ ∘ (inner f_*) = (1 × f)_* ∘ μ` on codec indices up to `n`.
pub fn mu_intertwines_inner(alpha: &OuterSeq, f: &PInj, n: i64) -> bool {
    let lhs = alpha.act_inner(f);
    (1..=n).all(|k| {
        let expected = match pairs::decode(k) {
            Some((m, outer)) => match f.dagger().apply(m) {
                Some(src) => pairs::encode(src, outer)
                    .map(|c| alpha.mu_at(c))
                    .unwrap_or_else(|| Value::zero(alpha.ring)),
                None => Value::zero(alpha.ring),
            },
            None => Value::zero(alpha.ring),
        };
        lhs.mu_at(k) == expected
    })
}

/// `μ ∘ (outer f_*) = (f × 1)_* ∘ μ` on codec indices up to `n`.
pub fn mu_intertwines_outer(alpha: &OuterSeq, f: &PInj, n: i64) -> bool {
    let lhs = alpha.act_outer(f);
    (1..=n).all(|k| {
        let expected = match pairs::decode(k) {
            Some((m, outer)) => match f.dagger().apply(outer) {
                Some(src) => pairs::encode(m, src)
                    .map(|c| alpha.mu_at(c))
                    .unwrap_or_else(|| Value::zero(alpha.ring)),
                None => Value::zero(alpha.ring),
            },
            None => Value::zero(alpha.ring),
        };
        lhs.mu_at(k) == expected
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::RingValue;

    const R: RingKind = RingKind::Rational;

    #[test]
    fn axioms() {
        assert!(axioms_hold(R));
        let one = OpSum::identity(R);
        assert!(oplus(&one, &one).unwrap().equal(&one));
        assert!(oplus(&OpSum::zero(R), &OpSum::zero(R)).unwrap().is_zero());
    }

    #[test]
    fn families_are_disjoint_and_cover() {
        let mut seen = std::collections::BTreeSet::new();
        for k in 0..8 {
            for i in 1..200 {
                let n = g(k, i).unwrap();
                assert!(seen.insert(n));
                assert_eq!(g_inverse(n), Some((k, i)));
            }
        }
        assert!(g_inverse(1).is_none());
        for n in 2..300 {
            assert!(g_inverse(n).is_some());
        }
    }

    #[test]
    fn phi_of_matrix_unit() {
        let e = OpSum::matrix_unit(&Value::one(R), 1, 1);
        let w = phi(&e).window(64);
        let expected: Vec<i64> = (0..10)
            .filter_map(|k| g(k, 1))
            .filter(|n| *n <= 64)
            .collect();
        assert_eq!(w.entries.len(), expected.len());
        for n in expected {
            assert_eq!(w.get(n, n), Value::one(R));
        }
    }

    #[test]
    fn defphi_on_shift() {
        let r = OpSum::u(R, &PInj::s1())
            .add(&OpSum::matrix_unit(&Value::one(R), 2, 3))
            .unwrap();
        let p = phi(&r);
        let lhs = LazyOp::oplus(&LazyOp::from_op(&r), &p);
        assert_eq!(lhs.window(128), p.window(128));
    }

    #[test]
    fn m2_round_trip() {
        let a = OpSum::u(R, &PInj::s2());
        let b = m2_iso(&a).unwrap();
        assert!(m2_reconstruct(&b).unwrap().equal(&a));
        let id = m2_iso(&OpSum::identity(R)).unwrap();
        assert!(id.entries[0][0].equal(&OpSum::identity(R)));
        assert!(id.entries[0][1].is_zero());
    }

    #[test]
    fn corner_embedding() {
        let e1 = SymSeq::e(R, 1);
        let t = jmath(&e1, &PInj::identity());
        assert!(t.equal(&OpSum::matrix_unit(&Value::one(R), 2, 2)));
        let alpha = SymSeq::scalar(RingValue::from_i64(R, 3));
        let f = PInj::s1();
        assert!(jmath(&alpha, &f).equal(&jmath_op(&OpSum::term(&alpha, &f)).unwrap()));
    }

    #[test]
    fn mu_reindexes() {
        let outer = OuterSeq {
            ring: R,
            items: BTreeMap::from([(1, SymSeq::e(R, 1))]),
            tail: None,
        };
        assert_eq!(
            outer.mu().unwrap(),
            SymSeq::e(R, pairs::encode(1, 1).unwrap())
        );
        assert!(mu_intertwines_inner(&outer, &PInj::s1(), 256));
        assert!(mu_intertwines_outer(&outer, &PInj::s1(), 256));
    }
}
