use proptest::prelude::*;

use gammacalc::cli::eval::{render, Evaluator, Val};
use gammacalc::cohn::CohnElem;
use gammacalc::crossed::CrossedElem;
use gammacalc::gami::OpSum;
use gammacalc::random::Gen;
use gammacalc::scalars::RingKind;
use gammacalc::seqspace::Value;

const RINGS: [RingKind; 4] = [
    RingKind::Rational,
    RingKind::Integer,
    RingKind::Gaussian,
    RingKind::IntMod(7),
];

fn reparse(ring: RingKind, v: &Val) -> Val {
    let text = render(v).expect("finite value");
    Evaluator::new(ring)
        .eval_src(&text)
        .unwrap_or_else(|e| panic!("{text:?} does not re-parse: {e}"))
}

fn same(ring: RingKind, a: &Val, b: &Val) -> bool {
    Evaluator::new(ring)
        .values_equal(a.clone(), b.clone(), "", "", 64)
        .expect("comparable")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scalars_round_trip(seed in any::<u64>(), k in 0usize..4) {
        let ring = RINGS[k];
        let mut g = Gen::new(seed, ring);
        let v = Val::Scalar(Value::scalar(g.scalar()));
        prop_assert!(same(ring, &v, &reparse(ring, &v)));
    }

    #[test]
    fn sequences_round_trip(seed in any::<u64>(), k in 0usize..4) {
        let ring = RINGS[k];
        let mut g = Gen::new(seed, ring);
        let v = Val::Seq(g.seq());
        let back = reparse(ring, &v);
        prop_assert!(same(ring, &v, &back), "{}", render(&v).unwrap());
    }

    #[test]
    fn operators_round_trip(seed in any::<u64>(), k in 0usize..4) {
        let ring = RINGS[k];
        let mut g = Gen::new(seed, ring);
        let v = Val::Op(g.op());
        let back = reparse(ring, &v);
        prop_assert!(same(ring, &v, &back), "{}", render(&v).unwrap());
    }

    #[test]
    fn products_round_trip(seed in any::<u64>()) {
        let ring = RingKind::Rational;
        let mut g = Gen::new(seed, ring);
        let (a, b) = (g.op(), g.op());
        let v = Val::Op(a.mul(&b).unwrap().add(&a.adjoint()).unwrap());
        prop_assert!(same(ring, &v, &reparse(ring, &v)));
    }

    #[test]
    fn cohn_round_trip(seed in any::<u64>()) {
        let mut g = Gen::new(seed, RingKind::Integer);
        let v = Val::Cohn(g.cohn(5, 3));
        let back = reparse(RingKind::Integer, &v);
        match (&v, &back) {
            (Val::Cohn(a), Val::Cohn(b)) => prop_assert_eq!(a, b),
            (Val::Cohn(a), Val::Scalar(_)) => {
                prop_assert!(a.terms().all(|(w, _)| w.mu.is_empty() && w.nu.is_empty()));
            }
            _ => prop_assert!(false, "changed type"),
        }
    }

    #[test]
    fn crossed_round_trip(seed in any::<u64>()) {
        let ring = RingKind::Rational;
        let mut g = Gen::new(seed, ring);
        let x = CrossedElem { ring, terms: vec![(g.seq(), g.pinj()), (g.seq(), g.pinj())] };
        let v = Val::Crossed(x);
        prop_assert!(same(ring, &v, &reparse(ring, &v)));
    }
}

#[test]
fn zero_and_identity_print() {
    let ring = RingKind::Rational;
    for v in [
        Val::Op(OpSum::zero(ring)),
        Val::Op(OpSum::identity(ring)),
        Val::Cohn(CohnElem::zero()),
        Val::Cohn(CohnElem::one()),
    ] {
        assert!(same(ring, &v, &reparse(ring, &v)));
    }
}
