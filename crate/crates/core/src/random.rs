//! Seeded generators of random test objects.

use num::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohn::{CohnElem, CohnWord};
use crate::decomp::FinMatrix;
use crate::gami::OpSum;
use crate::pinj::{Affine, PInj, ProgressionSet, Q};
use crate::scalars::{q, RingKind, RingValue};
use crate::seqspace::{SymSeq, Value};

pub struct Gen {
    pub rng: ChaCha8Rng,
    pub ring: RingKind,
}

impl Gen {
    pub fn new(seed: u64, ring: RingKind) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            ring,
        }
    }

    /// Uniform integer in `lo..=hi`.
    pub fn rng_range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn with_ring(&mut self, ring: RingKind) -> &mut Self {
        self.ring = ring;
        self
    }

    /// A small nonzero ring element.
    pub fn scalar(&mut self) -> RingValue {
        loop {
            let v = self.any_scalar();
            if !v.is_zero() {
                return v;
            }
        }
    }

    fn any_scalar(&mut self) -> RingValue {
        let ring = self.ring;
        let a = self.rng.gen_range(-4i64..=4);
        match ring {
            RingKind::Rational => {
                let d = self.rng.gen_range(1i64..=3);
                RingValue::Rational(q(a, d))
            }
            RingKind::Gaussian => {
                let b = self.rng.gen_range(-3i64..=3);
                RingValue::Gaussian(q(a, 1), q(b, 1))
            }
            RingKind::Mat2 => {
                let e: Vec<i64> = (0..4).map(|_| self.rng.gen_range(-2i64..=2)).collect();
                RingValue::Mat2(Box::new([q(e[0], 1), q(e[1], 1), q(e[2], 1), q(e[3], 1)]))
            }
            _ => RingValue::from_i64(ring, a),
        }
    }

    /// A nonzero rational with small numerator and denominator.
    pub fn rational_unit(&mut self) -> RingValue {
        let a = *[-3i64, -2, -1, 1, 2, 3]
            .choose(&mut self.rng)
            .expect("nonempty");
        let d = self.rng.gen_range(1i64..=3);
        RingValue::from_rational(self.ring, &q(a, d)).expect("rational ring")
    }

    pub fn progression(&mut self) -> (i64, i64) {
        let step = self.rng.gen_range(1i64..=4);
        let start = self.rng.gen_range(1i64..=6);
        (start, step)
    }

    pub fn set(&mut self) -> ProgressionSet {
        match self.rng.gen_range(0..4) {
            0 => ProgressionSet::evens(),
            1 => ProgressionSet::odds(),
            2 => {
                let (s, m) = self.progression();
                ProgressionSet::progression(s, m).expect("positive")
            }
            _ => {
                let k = self.rng.gen_range(1..5);
                ProgressionSet::finite_set((0..k).map(|_| self.rng.gen_range(1i64..=12)))
            }
        }
    }

    fn basic_pinj(&mut self) -> PInj {
        match self.rng.gen_range(0..10) {
            0 => PInj::s1(),
            1 => PInj::s2(),
            2 => PInj::f0(),
            3 => PInj::f1(),
            4 => PInj::swap_pairs(),
            5 => PInj::projection(&self.set()),
            6 => {
                let slope = self.rng.gen_range(1i64..=3);
                let offset = self.rng.gen_range(-2i64..=3);
                let (s, m) = self.progression();
                let start = s.max(3);
                PInj::affine_on(Affine::int(slope, offset), start, m).expect("positive image")
            }
            7 => {
                let k = self.rng.gen_range(1..4);
                let mut dom: Vec<i64> = (1..=12).collect();
                let mut ran: Vec<i64> = (1..=12).collect();
                dom.shuffle(&mut self.rng);
                ran.shuffle(&mut self.rng);
                let pairs: Vec<(i64, i64)> = dom.into_iter().zip(ran).take(k).collect();
                PInj::finite_map(&pairs).expect("injective")
            }
            8 => PInj::identity(),
            _ => {
                let shift = self.rng.gen_range(1i64..=3);
                PInj::affine_on(Affine::new(Q::new(1, 2), Q::from_integer(shift)), 2, 2)
                    .expect("halving on evens")
            }
        }
    }

    /// A composite of one to three basic maps, possibly daggered.
    pub fn pinj(&mut self) -> PInj {
        let k = self.rng.gen_range(1..=3);
        let mut f = PInj::identity();
        for _ in 0..k {
            let mut g = self.basic_pinj();
            if self.rng.gen_bool(0.3) {
                g = g.dagger();
            }
            f = f.compose(&g);
        }
        f
    }

    /// A total injection with infinite domain (a composite of shifts).
    pub fn pinj_infinite(&mut self) -> PInj {
        let k = self.rng.gen_range(1..=2);
        let mut f = PInj::identity();
        for _ in 0..k {
            let g = match self.rng.gen_range(0..5) {
                0 => PInj::s1(),
                1 => PInj::s2(),
                2 => PInj::f1(),
                3 => PInj::swap_pairs(),
                _ => {
                    let offset = self.rng.gen_range(0i64..=3);
                    PInj::affine_on(Affine::int(1, offset), 1, 1).expect("shift")
                }
            };
            f = f.compose(&g);
        }
        f
    }

    fn basic_seq(&mut self) -> SymSeq {
        let ring = self.ring;
        let v = Value::scalar(self.scalar());
        match self.rng.gen_range(0..6) {
            0 => SymSeq::constant(v),
            1 => SymSeq::e(ring, self.rng.gen_range(1i64..=10)).scale_left(&v),
            2 => SymSeq::chi(ring, &self.set()).scale_left(&v),
            3 if ring.contains_rationals() => {
                let e = *[
                    Q::new(1, 2),
                    Q::from_integer(1),
                    Q::new(3, 2),
                    Q::from_integer(2),
                ]
                .choose(&mut self.rng)
                .expect("nonempty");
                SymSeq::pow(v, e).expect("valid exponent")
            }
            4 if ring.contains_rationals() => SymSeq::geom(v, &q(1, 2)).expect("valid ratio"),
            _ => SymSeq::list(ring, &[v.clone(), Value::zero(ring), v]),
        }
    }

    /// A sum or product of up to two basic sequences.
    pub fn seq(&mut self) -> SymSeq {
        let a = self.basic_seq();
        match self.rng.gen_range(0..3) {
            0 => a,
            1 => a.add(&self.basic_seq()).expect("same ring"),
            _ => a.mul(&self.basic_seq()).expect("same ring"),
        }
    }

    /// A sequence with rational constant amplitude on an infinite progression.
    pub fn seq_rational_constant(&mut self) -> SymSeq {
        let (s, m) = self.progression();
        let v = Value::scalar(self.rational_unit());
        SymSeq::chi(
            self.ring,
            &ProgressionSet::progression(s, m).expect("positive"),
        )
        .scale_left(&v)
    }

    /// A sum of one to three terms `diag(α) U_f`.
    pub fn op(&mut self) -> OpSum {
        let k = self.rng.gen_range(1..=3);
        let mut out = OpSum::zero(self.ring);
        for _ in 0..k {
            let (a, f) = (self.seq(), self.pinj());
            out = out.add(&OpSum::term(&a, &f)).expect("same ring");
        }
        out
    }

    /// A `rows × cols` matrix whose rows and columns each hold at most
    /// `band` nonzero entries.
    pub fn fin_matrix(&mut self, rows: i64, cols: i64, band: usize) -> FinMatrix {
        let mut m = FinMatrix::zero(rows, cols, self.ring);
        let layers = self.rng.gen_range(1..=band);
        for _ in 0..layers {
            let mut targets: Vec<i64> = (1..=cols).collect();
            targets.shuffle(&mut self.rng);
            for (i, j) in (1..=rows).zip(targets) {
                if self.rng.gen_bool(0.7) {
                    let cur = m.get(i, j);
                    m.set(i, j, &cur + &self.scalar());
                }
            }
        }
        m
    }

    pub fn word(&mut self, max_len: usize) -> Vec<u8> {
        let l = self.rng.gen_range(0..=max_len);
        (0..l).map(|_| self.rng.gen_range(1u8..=2)).collect()
    }

    pub fn cohn_word(&mut self, max_len: usize) -> CohnWord {
        CohnWord::new(self.word(max_len), self.word(max_len))
    }

    /// Up to `max_terms` words of length at most `max_len` with small coefficients.
    pub fn cohn(&mut self, max_terms: usize, max_len: usize) -> CohnElem {
        let k = self.rng.gen_range(1..=max_terms);
        CohnElem::from_terms((0..k).map(|_| {
            let c = *[-2i64, -1, 1, 2, 3]
                .choose(&mut self.rng)
                .expect("nonempty");
            (self.cohn_word(max_len), BigInt::from(c))
        }))
    }
}
