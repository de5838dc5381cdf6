use num_bigint::BigInt;
use num_traits::Signed;
use octocf::classical::{additive_convergents, geometric_convergents, LatticeVec};
use octocf::diagch::{CombDatum, LabeledQuadrangulation, Perm, Wedge};
use octocf::numerics::{Mat2, QuadNum, Rational, Vec2};
use octocf::octagon::{octagon_area, q_prime};
use proptest::prelude::*;

/// Positive irrationals `a + b√2` with `b ≠ 0`.
fn irrational() -> impl Strategy<Value = QuadNum> {
    (-40i64..40, 1i64..20, 1i64..20, 1i64..20, any::<bool>())
        .prop_map(|(p, q, r, s, neg)| {
            let b = Rational::new(if neg { -r } else { r }.into(), s.into());
            QuadNum::new(Rational::new(p.into(), q.into()), b)
        })
        .prop_filter("positive", QuadNum::is_positive)
}

/// Directions strictly inside the cone of `Q′`, that is in `(π/8, π)`.
fn q_prime_direction() -> impl Strategy<Value = Vec2> {
    (-500i64..500, 1i64..100, -20i64..20, 1i64..20)
        .prop_map(|(p, q, r, s)| {
            Vec2::new(
                QuadNum::new(Rational::new(p.into(), q.into()), Rational::new(r.into(), s.into())),
                QuadNum::one(),
            )
        })
        .prop_filter("inside the cone", |v| q_prime(v.clone()).is_ok())
}

fn torus(alpha: &QuadNum) -> LabeledQuadrangulation {
    let comb = CombDatum::new(Perm::identity(1), Perm::identity(1)).unwrap();
    let wedge = Wedge::new(Vec2::from_ints(0, 1), Vec2::from_ints(1, 0));
    LabeledQuadrangulation::new(comb, vec![wedge], Vec2::new(alpha.clone(), QuadNum::one())).unwrap()
}

fn lattice(v: &Vec2) -> LatticeVec {
    let int = |x: &QuadNum| {
        assert!(x.is_rational() && x.a().is_integer(), "{x}");
        x.a().to_integer()
    };
    LatticeVec { p: int(&v.x), q: int(&v.y) }
}

fn inside(outer: &Wedge, inner: &Wedge) -> bool {
    !outer.r.cross(&inner.r).is_negative() && !inner.l.cross(&outer.l).is_negative()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn torus_runs_visit_the_convergents(alpha in irrational()) {
        let mut q = torus(&alpha);
        let mut found = Vec::new();
        for _ in 0..12 {
            let moves = q.available_moves();
            prop_assert_eq!(moves.len(), 1);
            found.push(lattice(&q.diagonal(0).unwrap()));
            q = q.staircase_move(&moves[0]).unwrap();
        }
        prop_assert_eq!(found, additive_convergents(&alpha, 12).unwrap());
    }

    #[test]
    fn convergents_alternate_and_are_unimodular(alpha in irrational()) {
        let c = geometric_convergents(&alpha, 20).unwrap();
        prop_assert!(!c.halted);
        let sides: Vec<i8> = c.vectors.iter().map(|v| v.side_of(&alpha).signum()).collect();
        prop_assert!(sides.iter().all(|&s| s != 0));
        for w in sides.windows(2) {
            prop_assert_eq!(w[0], -w[1]);
        }
        for w in c.vectors.windows(2) {
            prop_assert_eq!(w[1].cross(&w[0]).abs(), BigInt::from(1));
        }
    }

    #[test]
    fn staircase_moves_keep_the_invariants(reference in q_prime_direction()) {
        let area = octagon_area();
        let mut q = q_prime(reference).unwrap();
        for _ in 0..15 {
            let moves = q.available_moves();
            prop_assert!(!moves.is_empty());
            let mv = &moves[0];
            prop_assert_eq!(mv.matrix.det(), 1);
            prop_assert!(mv.matrix.is_nonnegative());
            let next = match q.staircase_move(mv) {
                Ok(next) => next,
                // a diagonal parallel to the reference ends the run
                Err(_) => break,
            };
            prop_assert_eq!(next.side_vectors(), mv.matrix.apply_vecs(&q.side_vectors()));
            next.validate().unwrap();
            prop_assert_eq!(next.total_area(), area.clone());
            for (old, new) in q.wedges().iter().zip(next.wedges()) {
                prop_assert!(inside(old, new));
            }
            if next.is_terminal() {
                break;
            }
            q = next;
        }
    }

    #[test]
    fn linear_images_stay_valid(reference in q_prime_direction(), k in 1i64..5, flip in any::<bool>()) {
        let q = q_prime(reference).unwrap();
        let m = Mat2::from_ints(if flip { -1 } else { 1 }, k, 0, 1);
        let image = q.transform(&m);
        image.validate().unwrap();
        prop_assert_eq!(image.total_area(), q.total_area());
        prop_assert_eq!(image.transform(&m.inverse().unwrap()), q.clone());
        prop_assert_eq!(q.mirror().mirror(), q);
    }
}
