mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toricwedge::planefan::{enumerate_fans, PlaneFan};
use toricwedge::wedgepuzzle::{
    assemble_from_axes, assemble_matrix, check_nonsingular, enumerate_puzzles, fan_at,
    is_edge, projection, puzzle_key, shift, validate_puzzle, Label, Puzzle, WedgeComplex,
    WedgeSignature,
};

fn sig(j: &[usize]) -> WedgeSignature {
    WedgeSignature::new(j.to_vec()).unwrap()
}

#[test]
fn complex_matches_iterated_wedge() {
    for m in 3..=6 {
        for s in common::signatures(m, 3) {
            let j = s.multiplicities().to_vec();
            let k = WedgeComplex::build(&s);
            assert_eq!(k.facets, common::iterated_wedge_facets(&j), "J = {j:?}");
            let expected: usize = (0..m)
                .map(|i| {
                    (0..m)
                        .filter(|&v| v != i && v != (i + 1) % m)
                        .map(|v| j[v])
                        .product::<usize>()
                })
                .sum();
            assert_eq!(k.facets.len(), expected);
            assert!(k.facets.iter().all(|f| f.len() == s.fan_dimension()));
            assert_eq!(k.vertices.len(), s.d());
        }
    }
}

/// A candidate is valid exactly when its assembled matrix is non-singular
/// over the whole complex and reproduces every assigned fan.
fn matrix_oracle(p: &Puzzle, axes: &BTreeMap<Label, i64>) -> bool {
    let s = &p.signature;
    let Ok(m) = assemble_from_axes(s, p.base(), axes) else {
        return false;
    };
    check_nonsingular(&m, &WedgeComplex::build(s)).unwrap_or(false)
        && s.grid_vertices().iter().all(|a| {
            fan_at(&m, a).is_ok_and(|f| f.normalize_basis() == p.assignment[a].normalize_basis())
        })
}

/// Candidates whose fan at each grid vertex is the base shifted in every
/// moved color, mostly by a shared per-color parameter and sometimes by a
/// random one, so that some squares fail to close or to be realizable.
#[test]
fn square_checks_agree_with_global_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut valid, mut total) = (0, 0);
    for j in [vec![2, 2, 1, 1, 1], vec![2, 2, 2, 1, 1], vec![2, 1, 2, 1, 2], vec![2, 2, 1, 2]] {
        let s = sig(&j);
        let colors: Vec<usize> = (1..=j.len()).filter(|&c| s.multiplicity(c) == 2).collect();
        for base in enumerate_fans(j.len(), 2) {
            for _ in 0..300 {
                let axis: Vec<i64> = colors.iter().map(|_| rng.gen_range(-2..=2)).collect();
                let mut assignment = BTreeMap::new();
                for alpha in s.grid_vertices() {
                    let mut fan = Some(base.clone());
                    for (k, &c) in colors.iter().enumerate() {
                        if alpha[c - 1] == 2 {
                            let e = if rng.gen_bool(0.7) { axis[k] } else { rng.gen_range(-1..=1) };
                            fan = fan.and_then(|f| shift(&f, c, e).ok());
                        }
                    }
                    if let Some(f) = fan {
                        assignment.insert(alpha, f);
                    }
                }
                let Ok(p) = Puzzle::from_assignment(&s, assignment) else {
                    continue;
                };
                total += 1;
                let v = validate_puzzle(&p);
                valid += usize::from(v);
                assert_eq!(v, matrix_oracle(&p, &p.axes()), "J = {j:?}, base {base}");
            }
        }
    }
    assert!(total > 100 && valid > 0 && valid < total, "{valid} of {total}");
}

#[test]
fn three_wedged_colors_have_no_irreducible_cube() {
    for j in [[2, 2, 2, 1, 1], [2, 1, 2, 1, 2]] {
        let s = sig(&j);
        for p in enumerate_puzzles(&s, 2, 2) {
            for (colors, corners) in s.grid_cubes() {
                let reducible = (0..8usize).any(|a| {
                    colors.iter().enumerate().any(|(bit, &c)| {
                        let b = a | (1 << bit);
                        b != a
                            && is_edge(&p.assignment[&corners[a]], &p.assignment[&corners[b]], c)
                                == Some(0)
                    })
                });
                assert!(reducible, "J = {j:?}");
            }
        }
    }
}

#[test]
fn projections_commute_with_assignment() {
    for j in [[3, 1, 1, 1, 1], [2, 2, 1, 1, 1], [2, 1, 1, 2, 1]] {
        let s = sig(&j);
        for p in enumerate_puzzles(&s, 2, 2) {
            let m = assemble_matrix(&p).unwrap();
            for label in s.extra_labels().into_iter().chain([Label::new(1, 1)]) {
                if s.multiplicity(label.vertex) < 2 {
                    continue;
                }
                let q = projection(&m, label).unwrap();
                let mut j2 = j.to_vec();
                j2[label.vertex - 1] -= 1;
                assert!(check_nonsingular(&q, &WedgeComplex::build(&sig(&j2))).unwrap());
                // every vertex of the smaller grid is a vertex avoiding the dropped copy
                for beta in sig(&j2).grid_vertices() {
                    let mut alpha = beta.clone();
                    let i = label.vertex - 1;
                    if alpha[i] >= label.copy {
                        alpha[i] += 1;
                    }
                    let f = fan_at(&q, &beta).unwrap();
                    assert_eq!(f.normalize_basis(), p.assignment[&alpha].normalize_basis());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shift_is_invertible(base in 0usize..12, color in 1usize..=5, e in -3i64..=3) {
        let fans = enumerate_fans(5, 2);
        let fan = &fans[base % fans.len()];
        match shift(fan, color, e) {
            Ok(moved) => {
                prop_assert_eq!(is_edge(fan, &moved, color), Some(e));
                let back = shift(&moved, color, -e).unwrap();
                prop_assert_eq!(back.normalize_basis(), fan.normalize_basis());
            }
            Err(_) => prop_assert!(fan.opposite_position(color).is_none() && e != 0),
        }
    }

    #[test]
    fn keys_are_relabeling_invariant(pick in 0usize..64) {
        let s = sig(&[2, 1, 1, 1, 1]);
        let puzzles = enumerate_puzzles(&s, 2, 2);
        let p = &puzzles[pick % puzzles.len()];
        let key = puzzle_key(p);
        let back = key.to_puzzle(&s).unwrap();
        prop_assert!(validate_puzzle(&back));
        prop_assert_eq!(puzzle_key(&back), key);
    }
}

#[test]
fn constant_puzzles_are_valid() {
    let base = PlaneFan::pentagon(1);
    for j in [[2, 1, 1, 1, 1], [1, 3, 1, 1, 1], [2, 2, 2, 1, 1]] {
        let p = Puzzle::constant(&sig(&j), &base).unwrap();
        assert!(validate_puzzle(&p));
        assert!(matrix_oracle(&p, &BTreeMap::new()));
    }
}
