use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::planefan::{enumerate_fans, LatticeVector2, PlaneFan};

use super::puzzle::{validate_puzzle, Puzzle};
use super::shift::is_edge;
use super::{Label, WedgeSignature};

/// Canonical representative of a puzzle up to fan equivalence, dihedral
/// relabelings preserving `J`, and permutations of the copies of each vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PuzzleKey {
    /// normalized base fan
    pub base: Vec<LatticeVector2>,
    /// per color, the sorted parameters of the edges leaving the base vertex
    pub params: Vec<Vec<i64>>,
}

impl PuzzleKey {
    /// The puzzle this key describes, with the base at `(1, ..., 1)`.
    pub fn to_puzzle(&self, signature: &WedgeSignature) -> Option<Puzzle> {
        let base = PlaneFan::validate(self.base.clone()).ok()?;
        let axes = axes_from_params(&self.params);
        Puzzle::from_axes(signature, &base, &axes).ok()
    }
}

fn axes_from_params(params: &[Vec<i64>]) -> BTreeMap<Label, i64> {
    params
        .iter()
        .enumerate()
        .flat_map(|(i, ps)| {
            ps.iter()
                .enumerate()
                .map(move |(k, &e)| (Label::new(i + 1, k + 2), e))
        })
        .collect()
}

/// Minimum over `J`-preserving relabelings and choices of base vertex.
pub fn puzzle_key(puzzle: &Puzzle) -> PuzzleKey {
    let sig = &puzzle.signature;
    let j = sig.multiplicities();
    let m = sig.m();
    let mut best: Option<PuzzleKey> = None;
    for start in 0..m {
        for reflect in [false, true] {
            let (_, order) = puzzle.base().relabeled(start, reflect);
            if (0..m).any(|k| j[order[k]] != j[k]) {
                continue;
            }
            for (alpha, fan) in &puzzle.assignment {
                let f0 = fan.relabeled(start, reflect).0;
                let params = (0..m)
                    .map(|c| {
                        let o = order[c];
                        let mut ps: Vec<i64> = (1..=j[o])
                            .filter(|&k| k != alpha[o])
                            .map(|k| {
                                let mut beta = alpha.clone();
                                beta[o] = k;
                                let f = puzzle.assignment[&beta].relabeled(start, reflect).0;
                                is_edge(&f0, &f, c + 1).expect("puzzle edge")
                            })
                            .collect();
                        ps.sort_unstable();
                        ps
                    })
                    .collect();
                let key = PuzzleKey {
                    base: f0.rays().to_vec(),
                    params,
                };
                if best.as_ref().is_none_or(|b| key < *b) {
                    best = Some(key);
                }
            }
        }
    }
    best.expect("at least the identity relabeling")
}

/// Nondecreasing sequences of `len` values in `[-bound, bound]`.
fn nondecreasing(len: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s: Vec<i64>| {
                let lo = s.last().copied().unwrap_or(-bound);
                (lo..=bound).map(move |e| {
                    let mut t = s.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

fn candidate_params(sig: &WedgeSignature, base: &PlaneFan, e_bound: i64) -> Vec<Vec<Vec<i64>>> {
    let mut out = vec![vec![]];
    for (i, &ji) in sig.multiplicities().iter().enumerate() {
        let choices = if base.opposite_position(i + 1).is_some() {
            nondecreasing(ji - 1, e_bound)
        } else {
            vec![vec![0; ji - 1]]
        };
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Vec<i64>>| {
                choices.iter().map(move |c| {
                    let mut p = prefix.clone();
                    p.push(c.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// All valid puzzles over `P_m(J)` whose base fans are reached from the
/// minimal surfaces within `base_depth` blow-ups and whose shift parameters
/// lie in `[-e_bound, e_bound]`, one per class, sorted by [`puzzle_key`].
pub fn enumerate_puzzles(sig: &WedgeSignature, base_depth: usize, e_bound: u32) -> Vec<Puzzle> {
    let m = sig.m();
    let bound = i64::from(e_bound);
    let mut bases = BTreeSet::new();
    for class in enumerate_fans(m, base_depth) {
        for start in 0..m {
            for reflect in [false, true] {
                bases.insert(class.relabeled(start, reflect).0);
            }
        }
    }
    let found: Vec<(PuzzleKey, Puzzle)> = bases
        .par_iter()
        .flat_map_iter(|base| {
            candidate_params(sig, base, bound)
                .into_iter()
                .filter_map(|params| {
                    let p = Puzzle::from_axes(sig, base, &axes_from_params(&params)).ok()?;
                    validate_puzzle(&p).then(|| (puzzle_key(&p), p))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let mut classes: BTreeMap<PuzzleKey, Puzzle> = BTreeMap::new();
    for (key, p) in found {
        classes.entry(key).or_insert(p);
    }
    classes
        .into_iter()
        .map(|(key, p)| key.to_puzzle(sig).unwrap_or(p))
        .collect()
}
