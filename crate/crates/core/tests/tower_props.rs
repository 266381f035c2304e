use coxsurf_core::num::{rat, Int, Rat};
use coxsurf_core::tower::{
    bounds_check, first_kappa_loss, kappa_persists, mui_consistency, tower_sequence, tower_surface, TowerVariant,
};
use coxsurf_core::zariski_decompose;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn variant() -> impl Strategy<Value = TowerVariant> {
    prop_oneof![Just(TowerVariant::TriplePoint), Just(TowerVariant::Node)]
}

/// `a_i = a0 F_{i+1} + F_i` with `F_0 = 0`, `F_1 = 1`.
fn fib_oracle(a0: i64, i: usize) -> Int {
    let (mut f, mut g) = (Int::zero(), Int::one());
    for _ in 0..i {
        let h = &f + &g;
        f = g;
        g = h;
    }
    g * a0 + f
}

/// Direct product form: `mu_i = a_i prod_{k<i} (1 - 1/mu_k)`.
fn mu_oracle(a0: i64, steps: usize) -> Vec<Rat> {
    let mut out: Vec<Rat> = Vec::new();
    let mut prod = Rat::one();
    for i in 0..=steps {
        let mu = &prod * Rat::from_integer(fib_oracle(a0, i));
        prod = prod * (Rat::one() - mu.recip());
        out.push(mu);
    }
    out
}

proptest! {
    #[test]
    fn sequence_matches_closed_forms(v in variant(), steps in 0usize..=40) {
        let seq = tower_sequence(v, steps);
        let mus = mu_oracle(v.a0(), steps);
        for (s, mu) in seq.iter().zip(&mus) {
            prop_assert_eq!(&s.a_cur, &fib_oracle(v.a0(), s.i));
            prop_assert!(mui_consistency(s));
            if s.mu_cur.is_zero() {
                break;
            }
            prop_assert_eq!(&s.mu_cur, mu);
            prop_assert_eq!(&s.coeff, &(&s.prefix * (Rat::one() - s.mu_cur.recip())));
        }
    }

    #[test]
    fn ratios_follow_continued_fraction(v in variant(), steps in 1usize..=60) {
        let seq = tower_sequence(v, steps);
        for w in seq.windows(2) {
            prop_assert_eq!(&w[1].b_cur, &(Rat::one() + w[0].b_cur.recip()));
        }
        // Successive ratios straddle the golden ratio: b^2 - b - 1 alternates in sign.
        let sign = |b: &Rat| (b * b - b - Rat::one()).signum();
        for w in seq.windows(2).skip(1) {
            prop_assert_eq!(sign(&w[0].b_cur), -sign(&w[1].b_cur));
        }
    }
}

#[test]
fn triple_point_tower_keeps_kappa() {
    let seq = tower_sequence(TowerVariant::TriplePoint, 60);
    assert!(seq.iter().all(kappa_persists));
    assert!(seq.iter().all(|s| s.coeff.is_positive()));
    assert!(seq.windows(2).skip(1).all(|w| w[1].mu_cur > w[0].mu_cur));
    let coeffs: Vec<Rat> = seq[..4].iter().map(|s| s.coeff.clone()).collect();
    assert_eq!(coeffs, [rat(2, 3), rat(5, 12), rat(23, 84), rat(169, 924)]);
    assert_eq!(first_kappa_loss(TowerVariant::TriplePoint, 60), None);
}

#[test]
fn node_tower_loses_kappa() {
    assert_eq!(first_kappa_loss(TowerVariant::Node, 10), Some(2));
}

#[test]
fn bounds_report_is_reproducible() {
    let r = bounds_check(50);
    assert_eq!(r, bounds_check(50));
    assert!(r.b_violations.is_empty());
    assert!(r.consistency_violations.is_empty());
}

#[test]
fn tower_lattice_invariants() {
    for depth in 1..=6 {
        let t = tower_surface(TowerVariant::TriplePoint, depth).unwrap();
        let l = &t.lattice;
        assert_eq!(l.rank(), 10 + depth);
        assert!(l.self_intersection(&t.fiber).is_zero());
        assert_eq!(l.anticanonical(), {
            let mut v = vec![0i64; 10 + depth];
            v[0] = 3;
            v[1..].iter_mut().for_each(|x| *x = -1);
            coxsurf_core::DivisorClass::from_ints(&v)
        });
        let seq = tower_sequence(TowerVariant::TriplePoint, depth - 1);
        for (c, s) in t.candidates.iter().zip(&seq) {
            let a = coxsurf_core::num::to_i64(&s.a_cur);
            assert_eq!(c.self_int, -a * a);
            assert_eq!(l.pair(&c.class, &t.fiber), Rat::zero());
        }
        let zd = zariski_decompose(l, &l.anticanonical(), &t.candidates).unwrap();
        assert_eq!(zd.positive, t.fiber.scale(&seq[depth - 1].coeff), "depth {depth}");
    }
}
