use octocf::farey::{
    boundary_direction, branch, classify, dual_expansion, expand, farey_step, farey_step_u, nested_arcs, reconstruct,
    Classification, Direction, FareyExpansion, Rp1Interval, SectorIndex,
};
use octocf::numerics::{ProjVal, QuadNum, Rational};
use proptest::prelude::*;

fn sector(j: u8) -> SectorIndex {
    SectorIndex::new(j.into()).unwrap()
}

fn interior_direction() -> impl Strategy<Value = Direction> {
    (-10_000i64..10_000, 1i64..1000, -50i64..50, 1i64..50)
        .prop_map(|(p, q, r, s)| {
            Direction::from_u(QuadNum::new(Rational::new(p.into(), q.into()), Rational::new(r.into(), s.into())))
        })
        .prop_filter("interior", |d| matches!(classify(d), Classification::Interior(_)))
}

fn prefix() -> impl Strategy<Value = Vec<SectorIndex>> {
    (0u8..=7, prop::collection::vec(1u8..=7, 0..12))
        .prop_map(|(s0, rest)| std::iter::once(s0).chain(rest).map(sector).collect())
}

#[test]
fn continuity_at_every_boundary() {
    for j in 1..=7u8 {
        let u = boundary_direction(j.into()).u();
        assert_eq!(farey_step_u(sector(j - 1), &u), farey_step_u(sector(j), &u), "boundary {j}");
    }
}

#[test]
fn each_branch_is_onto() {
    let targets = [boundary_direction(1).u(), ProjVal::Infinity];
    for j in 0..=7u8 {
        let images: Vec<ProjVal> = [j, j + 1]
            .iter()
            .map(|&b| {
                let d = boundary_direction(b.into());
                // θ = 0 and θ = π share u = ∞; use the vector action there
                ProjVal::from_vec(d.transform(branch(sector(j))).vec())
            })
            .collect();
        assert!(images.iter().all(|u| targets.contains(u)), "sector {j}: {images:?}");
        assert_ne!(images[0], images[1]);
    }
}

#[test]
fn bare_pair_shrinks_like_one_over_n() {
    // [2; 1, 1, …] and [3; 1, 1, …] meet at a parabolic point
    let e = FareyExpansion {
        entries: [2].iter().chain(&[1; 400]).map(|&j| sector(j)).collect(),
        boundary_hit: true,
        terminating: true,
    };
    let d = dual_expansion(&e).unwrap();
    assert_eq!(d.entries[0].get(), 3);
    let width = |n: usize| {
        let a = reconstruct(&e.entries[..n]).unwrap();
        let b = reconstruct(&d.entries[..n]).unwrap();
        a.angular_width() + b.angular_width()
    };
    let (w100, w200, w400) = (width(100), width(200), width(400));
    assert!(w200 > 1e-6, "{w200}");
    assert!((w100 / w200 - 2.0).abs() < 0.1, "{}", w100 / w200);
    assert!((w200 / w400 - 2.0).abs() < 0.1, "{}", w200 / w400);
}

proptest! {
    #[test]
    fn shift_property(d in interior_direction()) {
        let e = expand(&d, 12);
        prop_assume!(!e.boundary_hit);
        let (_, image) = farey_step(&d);
        prop_assert_eq!(&expand(&image, 11).entries[..], &e.entries[1..]);
    }

    #[test]
    fn vector_and_moebius_actions_agree(d in interior_direction()) {
        let mut cur = d;
        let mut u = cur.u();
        for _ in 0..8 {
            let (j, next) = farey_step(&cur);
            u = farey_step_u(j, &u);
            prop_assert_eq!(&u, &ProjVal::from_vec(next.vec()));
            cur = next;
            if !matches!(classify(&cur), Classification::Interior(_)) {
                break;
            }
        }
    }

    #[test]
    fn expansion_prefixes_contain_the_direction(d in interior_direction()) {
        let e = expand(&d, 10);
        let arcs = nested_arcs(&e.entries).unwrap();
        for (k, arc) in arcs.iter().enumerate() {
            prop_assert!(arc.contains(&d), "depth {}: {} ∉ {}", k, d, arc);
        }
    }

    #[test]
    fn reconstruction_nests(p in prefix()) {
        let arcs = nested_arcs(&p).unwrap();
        for k in 1..arcs.len() {
            prop_assert!(arcs[k].is_subset_of(&arcs[k - 1]));
            prop_assert_eq!(&arcs[k], &reconstruct(&p[..=k]).unwrap());
        }
        prop_assert!(arcs[0] == Rp1Interval::sector(p[0]));
    }

    #[test]
    fn duals_are_involutive(p in prefix(), tail in prop::sample::select(vec![1u8, 7])) {
        let mut entries = p;
        entries.extend(std::iter::repeat_n(sector(tail), 6));
        let e = FareyExpansion { entries, boundary_hit: true, terminating: true };
        let d = dual_expansion(&e).unwrap();
        prop_assert_eq!(dual_expansion(&d).unwrap(), e.clone());
        let differing = e.entries.iter().zip(&d.entries).filter(|(a, b)| a != b).count();
        prop_assert!(differing <= 1);
    }
}
