use std::cmp::Ordering;

use num_integer::Integer;
use proptest::prelude::*;
use toricwedge::planefan::{enumerate_fans, BaseSurface, LatticeVector2, PlaneFan, Unimodular2};

fn build_fan(base: usize, positions: &[usize]) -> PlaneFan {
    let mut fan = match base {
        0 => PlaneFan::projective_plane(),
        d => PlaneFan::hirzebruch(d as i64 - 4),
    };
    for &p in positions {
        fan = fan.blow_up(p % fan.len() + 1).unwrap();
    }
    fan
}

fn sl2(word: &[u8]) -> Unimodular2 {
    let gens = [
        Unimodular2 { a: 1, b: 1, c: 0, d: 1 },
        Unimodular2 { a: 1, b: 0, c: 1, d: 1 },
        Unimodular2 { a: 0, b: -1, c: 1, d: 0 },
        Unimodular2 { a: 1, b: -1, c: 0, d: 1 },
    ];
    word.iter().fold(Unimodular2 { a: 1, b: 0, c: 0, d: 1 }, |g, &k| {
        let h = gens[k as usize];
        Unimodular2 {
            a: h.a * g.a + h.b * g.c,
            b: h.a * g.b + h.b * g.d,
            c: h.c * g.a + h.d * g.c,
            d: h.c * g.b + h.d * g.d,
        }
    })
}

fn fan_strategy() -> impl Strategy<Value = PlaneFan> {
    (0usize..9, prop::collection::vec(0usize..64, 0..7))
        .prop_map(|(base, positions)| build_fan(base, &positions))
}

fn half(v: LatticeVector2) -> u8 {
    if v.y > 0 || (v.y == 0 && v.x > 0) {
        0
    } else {
        1
    }
}

fn angle_cmp(u: LatticeVector2, w: LatticeVector2) -> Ordering {
    half(u).cmp(&half(w)).then_with(|| 0.cmp(&u.det(w)))
}

/// Primitive nonzero rays, unimodular consecutive pairs, and a strictly
/// increasing angle sequence once the list is rotated to start at its
/// smallest angle.
fn brute_valid(rays: &[LatticeVector2]) -> bool {
    let m = rays.len();
    if m < 3 || rays.iter().any(|v| v.x.gcd(&v.y) != 1) {
        return false;
    }
    if (0..m).any(|i| rays[i].det(rays[(i + 1) % m]) != 1) {
        return false;
    }
    let start = (0..m)
        .min_by(|&a, &b| angle_cmp(rays[a], rays[b]))
        .unwrap();
    (0..m - 1).all(|k| {
        angle_cmp(rays[(start + k) % m], rays[(start + k + 1) % m]) == Ordering::Less
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn rotation_numbers_sum(fan in fan_strategy()) {
        let m = fan.len() as i64;
        prop_assert_eq!(fan.rotation_numbers().sum(), 3 * m - 12);
    }

    #[test]
    fn large_fans_blow_down(fan in fan_strategy()) {
        if fan.len() >= 5 {
            prop_assert!(!fan.blow_down_positions().is_empty());
        }
        let r = fan.reduce_to_base();
        prop_assert_eq!(r.base.len(), fan.len().min(4));
        prop_assert_eq!(r.trace.len(), fan.len() - r.base.len());
        prop_assert!(r.base.base_surface().is_some());
    }

    #[test]
    fn blow_down_undoes_blow_up(fan in fan_strategy(), p in 0usize..64) {
        let i = p % fan.len() + 1;
        let up = fan.blow_up(i).unwrap();
        prop_assert!(up.blow_down_positions().contains(&(i + 1)));
        prop_assert_eq!(up.blow_down(i + 1).unwrap(), fan);
    }

    #[test]
    fn equivalence_ignores_basis_and_labels(
        fan in fan_strategy(),
        word in prop::collection::vec(0u8..4, 0..8),
        start in 0usize..16,
        reflect in any::<bool>(),
    ) {
        let g = sl2(&word);
        prop_assert_eq!(g.det(), 1);
        let moved = fan.transformed(&g);
        prop_assert!(PlaneFan::validate(moved.rays().to_vec()).is_ok());
        prop_assert!(moved.is_equivalent(&fan));
        let (relabeled, _) = fan.relabeled(start % fan.len(), reflect);
        prop_assert_eq!(relabeled.canonical_form(), fan.canonical_form());
        let c = fan.canonical_form();
        prop_assert_eq!(c.canonical_form(), c.clone());
        prop_assert_eq!(c.normalize_basis(), c);
    }

    #[test]
    fn validate_matches_brute_force(
        pairs in prop::collection::vec((-3i64..=3, -3i64..=3), 0..7)
    ) {
        let rays: Vec<LatticeVector2> = pairs.iter().map(|&(x, y)| LatticeVector2::new(x, y)).collect();
        prop_assert_eq!(PlaneFan::validate(rays.clone()).is_ok(), brute_valid(&rays));
    }

    #[test]
    fn valid_fans_pass_brute_force(fan in fan_strategy(), word in prop::collection::vec(0u8..4, 0..6)) {
        let moved = fan.transformed(&sl2(&word));
        prop_assert!(brute_valid(moved.rays()));
        let mut doubled = moved.rays().to_vec();
        doubled.extend_from_slice(moved.rays());
        prop_assert!(PlaneFan::validate(doubled).is_err());
    }
}

#[test]
fn three_rays_is_only_the_plane() {
    for depth in 0..4 {
        let fans = enumerate_fans(3, depth);
        assert_eq!(fans.len(), 1);
        assert!(fans[0].is_equivalent(&PlaneFan::projective_plane()));
    }
}

#[test]
fn four_rays_are_hirzebruch() {
    for depth in 0..5 {
        let fans = enumerate_fans(4, depth);
        assert_eq!(fans.len(), depth + 1, "depth {depth}");
        for d in 0..=depth as i64 {
            assert!(fans.iter().any(|f| f.is_equivalent(&PlaneFan::hirzebruch(d))));
        }
        for f in &fans {
            assert!(matches!(f.base_surface(), Some(BaseSurface::Hirzebruch { d }) if d <= depth as i64));
        }
    }
}

#[test]
fn enumerated_fans_are_distinct_classes() {
    for m in 5..=7 {
        let fans = enumerate_fans(m, 4);
        assert!(fans.windows(2).all(|w| w[0] < w[1]));
        for f in &fans {
            assert_eq!(f.len(), m);
            assert_eq!(&f.canonical_form(), f);
        }
    }
}
