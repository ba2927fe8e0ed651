//! Complete non-singular fans in the plane.
//!
//! Rays are stored counterclockwise. Positions in the public API are 1-based
//! and cyclic, matching the usual `v_1, ..., v_m` labeling.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticeVector2 {
    pub x: i64,
    pub y: i64,
}

impl From<[i64; 2]> for LatticeVector2 {
    fn from([x, y]: [i64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<LatticeVector2> for [i64; 2] {
    fn from(v: LatticeVector2) -> Self {
        [v.x, v.y]
    }
}

impl fmt::Display for LatticeVector2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl LatticeVector2 {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    /// `x·other.y - y·other.x`
    pub fn det(self, other: Self) -> i64 {
        self.x * other.y - self.y * other.x
    }

    pub fn is_primitive(self) -> bool {
        self.x.gcd(&self.y) == 1
    }

    pub fn scaled(self, k: i64) -> Self {
        Self::new(self.x * k, self.y * k)
    }
}

impl std::ops::Add for LatticeVector2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for LatticeVector2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Neg for LatticeVector2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Integer 2x2 matrix acting on column vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Unimodular2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Unimodular2 {
    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, v: LatticeVector2) -> LatticeVector2 {
        LatticeVector2::new(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }

    /// The map sending `u -> (1,0)` and `w -> (0,1)`; requires `det(u,w) = ±1`.
    pub fn sending_to_standard(u: LatticeVector2, w: LatticeVector2) -> Self {
        let det = u.det(w);
        assert!(det == 1 || det == -1, "not a lattice basis: {u} {w}");
        // inverse of [u w] is (1/det) [[w.y, -w.x], [-u.y, u.x]]
        Self {
            a: w.y * det,
            b: -w.x * det,
            c: -u.y * det,
            d: u.x * det,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("a complete fan in the plane needs at least 3 rays, got {0}")]
    TooFewRays(usize),
    #[error("ray {0} is not a primitive lattice vector")]
    NotPrimitive(usize),
    #[error("det(v_{position}, v_next) = {det}, expected 1")]
    NotUnimodular { position: usize, det: i64 },
    #[error("rays {0} and {1} coincide")]
    DuplicateRay(usize, usize),
    #[error("rays wind {0} times around the origin, expected once")]
    WindingNumber(usize),
    #[error("position {0} cannot be blown down (rotation number is not 1)")]
    NotBlowDownable(usize),
    #[error("position {position} is outside 1..={len}")]
    PositionOutOfRange { position: usize, len: usize },
}

/// A complete non-singular fan in the plane with counterclockwise rays.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlaneFan {
    rays: Vec<LatticeVector2>,
}

/// Integers `a_i` with `v_{i-1} + v_{i+1} = a_i v_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationNumbers(pub Vec<i64>);

impl RotationNumbers {
    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }
}

/// Terminal surface of the blow-down reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum BaseSurface {
    #[serde(rename = "CP2")]
    ProjectivePlane,
    Hirzebruch { d: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub base: PlaneFan,
    /// 1-based positions removed, each relative to the fan at that step
    pub trace: Vec<usize>,
}

/// Counts how many times the closed ray sequence passes the positive x-axis.
fn winding_number(rays: &[LatticeVector2]) -> usize {
    let m = rays.len();
    (0..m)
        .filter(|&i| {
            let (u, w) = (rays[i], rays[(i + 1) % m]);
            let lands_on_axis = w.y == 0 && w.x > 0;
            lands_on_axis || (u.y < 0 && w.y > 0)
        })
        .count()
}

impl PlaneFan {
    /// Checks the ray list and returns the first violated condition.
    pub fn validate(rays: Vec<LatticeVector2>) -> Result<Self, FanError> {
        let m = rays.len();
        if m < 3 {
            return Err(FanError::TooFewRays(m));
        }
        if let Some(i) = rays.iter().position(|v| !v.is_primitive()) {
            return Err(FanError::NotPrimitive(i + 1));
        }
        for i in 0..m {
            let det = rays[i].det(rays[(i + 1) % m]);
            if det != 1 {
                return Err(FanError::NotUnimodular {
                    position: i + 1,
                    det,
                });
            }
        }
        for i in 0..m {
            if let Some(j) = (i + 1..m).find(|&j| rays[j] == rays[i]) {
                return Err(FanError::DuplicateRay(i + 1, j + 1));
            }
        }
        let w = winding_number(&rays);
        if w != 1 {
            return Err(FanError::WindingNumber(w));
        }
        Ok(Self { rays })
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self, FanError> {
        Self::validate(pairs.iter().map(|&(x, y)| LatticeVector2::new(x, y)).collect())
    }

    /// Rays `(1,0), (0,1), (-1,-1)`.
    pub fn projective_plane() -> Self {
        Self::from_pairs(&[(1, 0), (0, 1), (-1, -1)]).expect("valid")
    }

    /// Rays `(1,0), (0,1), (-1,d), (0,-1)`.
    pub fn hirzebruch(d: i64) -> Self {
        Self::from_pairs(&[(1, 0), (0, 1), (-1, d), (0, -1)]).expect("valid")
    }

    /// The pentagon family `(1,0), (0,1), (-1,1), (-1,0), (d,-1)`.
    pub fn pentagon(d: i64) -> Self {
        Self::from_pairs(&[(1, 0), (0, 1), (-1, 1), (-1, 0), (d, -1)]).expect("valid")
    }

    pub fn rays(&self) -> &[LatticeVector2] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// Ray at a 1-based cyclic position.
    pub fn ray(&self, position: usize) -> LatticeVector2 {
        self.rays[self.index(position)]
    }

    fn index(&self, position: usize) -> usize {
        (position + self.len() - 1) % self.len()
    }

    fn check_position(&self, position: usize) -> Result<(), FanError> {
        if position == 0 || position > self.len() {
            return Err(FanError::PositionOutOfRange {
                position,
                len: self.len(),
            });
        }
        Ok(())
    }

    pub fn rotation_numbers(&self) -> RotationNumbers {
        let m = self.len();
        let a = (0..m)
            .map(|i| {
                let prev = self.rays[(i + m - 1) % m];
                let next = self.rays[(i + 1) % m];
                // det(v_{i-1}, v_i) = 1 gives det(v_{i-1}, v_{i+1}) = a_i
                let a = prev.det(next);
                debug_assert_eq!(prev + next, self.rays[i].scaled(a));
                a
            })
            .collect();
        RotationNumbers(a)
    }

    /// Inserts `v_i + v_{i+1}` between positions `i` and `i+1`.
    pub fn blow_up(&self, position: usize) -> Result<Self, FanError> {
        self.check_position(position)?;
        let i = self.index(position);
        let new = self.rays[i] + self.rays[(i + 1) % self.len()];
        let mut rays = self.rays.clone();
        rays.insert(i + 1, new);
        Ok(Self { rays })
    }

    /// Positions whose rotation number is 1.
    pub fn blow_down_positions(&self) -> Vec<usize> {
        self.rotation_numbers()
            .0
            .iter()
            .enumerate()
            .filter(|(_, &a)| a == 1)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn blow_down(&self, position: usize) -> Result<Self, FanError> {
        self.check_position(position)?;
        let i = self.index(position);
        if self.len() <= 3 || self.rotation_numbers().0[i] != 1 {
            return Err(FanError::NotBlowDownable(position));
        }
        let mut rays = self.rays.clone();
        rays.remove(i);
        Ok(Self { rays })
    }

    /// Blows down at the lowest available position until at most 4 rays remain.
    pub fn reduce_to_base(&self) -> Reduction {
        let mut fan = self.clone();
        let mut trace = Vec::new();
        while fan.len() > 4 {
            let position = *fan
                .blow_down_positions()
                .first()
                .expect("every fan with at least 5 rays is a blow-up");
            fan = fan.blow_down(position).expect("rotation number is 1");
            trace.push(position);
        }
        Reduction { base: fan, trace }
    }

    /// Identifies a fan with at most 4 rays as CP² or a Hirzebruch surface.
    pub fn base_surface(&self) -> Option<BaseSurface> {
        match self.len() {
            3 => Some(BaseSurface::ProjectivePlane),
            4 => {
                let d = self.rotation_numbers().0.iter().map(|a| a.abs()).max();
                d.map(|d| BaseSurface::Hirzebruch { d })
            }
            _ => None,
        }
    }

    pub fn transformed(&self, g: &Unimodular2) -> Self {
        Self {
            rays: self.rays.iter().map(|&v| g.apply(v)).collect(),
        }
    }

    /// Applies the basis change sending `v_1 -> (1,0)` and `v_2 -> (0,1)`.
    pub fn normalize_basis(&self) -> Self {
        self.transformed(&Unimodular2::sending_to_standard(self.rays[0], self.rays[1]))
    }

    /// Basis change putting the ray at `position` on `(1,0)` and the next one on `(0,1)`.
    pub fn normalize_at(&self, position: usize) -> Self {
        let i = self.index(position);
        let g = Unimodular2::sending_to_standard(self.rays[i], self.rays[(i + 1) % self.len()]);
        self.transformed(&g)
    }

    /// Relabels the polygon by a dihedral symmetry and re-normalizes.
    ///
    /// New position `k` (0-based) carries the old ray `(start + k)` when
    /// `reflect` is false, `(start - k)` otherwise. Returns the relabeled fan
    /// and the old 0-based index of each new position.
    pub fn relabeled(&self, start: usize, reflect: bool) -> (Self, Vec<usize>) {
        let m = self.len();
        let order: Vec<usize> = (0..m)
            .map(|k| {
                if reflect {
                    (start + m - k % m) % m
                } else {
                    (start + k) % m
                }
            })
            .collect();
        let seq: Vec<LatticeVector2> = order.iter().map(|&i| self.rays[i]).collect();
        let g = Unimodular2::sending_to_standard(seq[0], seq[1]);
        let rays = seq.into_iter().map(|v| g.apply(v)).collect();
        (Self { rays }, order)
    }

    /// Lexicographically least normalized ray list over all dihedral relabelings.
    pub fn canonical_form(&self) -> Self {
        let m = self.len();
        (0..m)
            .flat_map(|s| [false, true].map(|r| (s, r)))
            .map(|(s, r)| self.relabeled(s, r).0)
            .min()
            .expect("nonempty fan")
    }

    pub fn is_equivalent(&self, other: &Self) -> bool {
        self.len() == other.len() && self.canonical_form() == other.canonical_form()
    }

    /// Position of the ray opposite to the ray at `position`, if present.
    pub fn opposite_position(&self, position: usize) -> Option<usize> {
        let v = self.ray(position);
        self.rays.iter().position(|&w| w == -v).map(|i| i + 1)
    }

    /// Builds a fan from rays that are either all counterclockwise or all
    /// clockwise (consecutive determinants all `+1` or all `-1`). A clockwise
    /// list is mirrored so the labeling becomes counterclockwise.
    pub fn from_oriented_rays(rays: Vec<LatticeVector2>) -> Result<Self, FanError> {
        let m = rays.len();
        if m >= 2 && (0..m).all(|i| rays[i].det(rays[(i + 1) % m]) == -1) {
            let mirrored = rays.into_iter().map(|v| LatticeVector2::new(v.y, v.x)).collect();
            return Self::validate(mirrored);
        }
        Self::validate(rays)
    }
}

impl fmt::Display for PlaneFan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rays.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// All fans with exactly `m` rays reachable from CP² or a Hirzebruch surface
/// with `0 <= d <= depth` by at most `depth` blow-ups, one canonical form per
/// class, sorted.
pub fn enumerate_fans(m: usize, depth: usize) -> Vec<PlaneFan> {
    let mut found = BTreeSet::new();
    let bases: Vec<PlaneFan> = std::iter::once(PlaneFan::projective_plane())
        .chain((0..=depth as i64).map(PlaneFan::hirzebruch))
        .collect();
    for base in bases {
        if base.len() > m || m - base.len() > depth {
            continue;
        }
        let mut level: BTreeSet<PlaneFan> = BTreeSet::from([base.canonical_form()]);
        for _ in base.len()..m {
            level = level
                .par_iter()
                .flat_map_iter(|fan| {
                    (1..=fan.len()).map(move |i| fan.blow_up(i).expect("in range").canonical_form())
                })
                .collect();
        }
        found.extend(level);
    }
    found.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fan(p: &[(i64, i64)]) -> PlaneFan {
        PlaneFan::from_pairs(p).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(PlaneFan::from_pairs(&[(1, 0), (0, 1), (-1, -1)]).is_ok());
        assert_eq!(
            PlaneFan::from_pairs(&[(1, 0), (0, 1), (-1, -2)]),
            Err(FanError::NotUnimodular { position: 3, det: 2 })
        );
        assert_eq!(
            PlaneFan::from_pairs(&[(1, 0), (2, 2), (-1, 0), (0, -1)]),
            Err(FanError::NotPrimitive(2))
        );
        assert_eq!(
            PlaneFan::from_pairs(&[(1, 0), (0, 1)]),
            Err(FanError::TooFewRays(2))
        );
    }

    #[test]
    fn double_winding_is_rejected() {
        let square = [(1, 0), (0, 1), (-1, 0), (0, -1)];
        let twice: Vec<(i64, i64)> = square.iter().chain(square.iter()).cloned().collect();
        assert_eq!(
            PlaneFan::from_pairs(&twice),
            Err(FanError::DuplicateRay(1, 5))
        );
        assert_eq!(winding_number(&twice.iter().map(|&(x, y)| LatticeVector2::new(x, y)).collect::<Vec<_>>()), 2);
    }

    #[test]
    fn rotation_number_examples() {
        assert_eq!(PlaneFan::projective_plane().rotation_numbers().0, vec![-1, -1, -1]);
        for d in -3..=3 {
            assert_eq!(PlaneFan::hirzebruch(d).rotation_numbers().0, vec![0, d, 0, -d]);
        }
        assert_eq!(PlaneFan::pentagon(2).rotation_numbers().0, vec![2, 1, 1, -1, 0]);
    }

    #[test]
    fn blow_up_examples() {
        let cp2 = PlaneFan::projective_plane();
        assert_eq!(cp2.blow_up(1).unwrap(), fan(&[(1, 0), (1, 1), (0, 1), (-1, -1)]));
        assert_eq!(
            PlaneFan::hirzebruch(0).blow_up(2).unwrap(),
            fan(&[(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1)])
        );
        // wrap-around insertion goes after the last ray
        assert_eq!(
            cp2.blow_up(3).unwrap().rays().last().copied(),
            Some(LatticeVector2::new(0, -1))
        );
        assert!(cp2.blow_up(4).is_err());
    }

    #[test]
    fn blow_down_examples() {
        let f = fan(&[(1, 0), (1, 1), (0, 1), (-1, -1)]);
        assert_eq!(f.blow_down(2).unwrap(), PlaneFan::projective_plane());
        let cp2 = PlaneFan::projective_plane();
        for i in 1..=3 {
            assert_eq!(cp2.blow_down(i), Err(FanError::NotBlowDownable(i)));
        }
        assert!(cp2.blow_down_positions().is_empty());
        let p = PlaneFan::pentagon(2);
        assert_eq!(p.blow_down_positions(), vec![2, 3]);
        let down = p.blow_down(3).unwrap();
        assert_eq!(down.len(), 4);
        let classes = enumerate_fans(4, 3);
        assert!(classes.iter().any(|c| c.is_equivalent(&down)));
        assert_eq!(down.base_surface(), Some(BaseSurface::Hirzebruch { d: 2 }));
    }

    #[test]
    fn reduce_examples() {
        let cp2 = PlaneFan::projective_plane();
        let r = cp2.reduce_to_base();
        assert_eq!(r.base, cp2);
        assert!(r.trace.is_empty());
        for d in 0..4 {
            let r = PlaneFan::pentagon(d).reduce_to_base();
            assert_eq!(r.trace.len(), 1);
            assert!(matches!(r.base.base_surface(), Some(BaseSurface::Hirzebruch { .. })));
        }
    }

    #[test]
    fn normalize_examples() {
        let f = PlaneFan::hirzebruch(0).transformed(&Unimodular2 { a: 1, b: 1, c: 0, d: 1 });
        assert_eq!(f.ray(1), LatticeVector2::new(1, 0));
        let n = f.normalize_basis();
        assert_eq!(n.ray(1), LatticeVector2::new(1, 0));
        assert_eq!(n.ray(2), LatticeVector2::new(0, 1));
        let p = PlaneFan::pentagon(3);
        assert_eq!(p.normalize_basis(), p);
    }

    #[test]
    fn hirzebruch_sign_equivalence() {
        assert!(PlaneFan::hirzebruch(1).is_equivalent(&PlaneFan::hirzebruch(-1)));
        assert!(PlaneFan::hirzebruch(2).is_equivalent(&PlaneFan::hirzebruch(-2)));
        assert!(!PlaneFan::hirzebruch(1).is_equivalent(&PlaneFan::hirzebruch(2)));
        assert!(!PlaneFan::projective_plane().is_equivalent(&PlaneFan::hirzebruch(0)));
    }

    #[test]
    fn clockwise_input_is_mirrored() {
        let cw = vec![
            LatticeVector2::new(1, 0),
            LatticeVector2::new(0, -1),
            LatticeVector2::new(-1, 1),
        ];
        let f = PlaneFan::from_oriented_rays(cw).unwrap();
        assert!(f.is_equivalent(&PlaneFan::projective_plane()));
    }

    #[test]
    fn enumeration_small_cases() {
        assert_eq!(enumerate_fans(3, 0), vec![PlaneFan::projective_plane().canonical_form()]);
        assert_eq!(enumerate_fans(3, 5).len(), 1);
        let four = enumerate_fans(4, 2);
        assert_eq!(four.len(), 3);
        for d in 0..=2 {
            assert!(four.iter().any(|f| f.is_equivalent(&PlaneFan::hirzebruch(d))));
        }
    }

    #[test]
    fn opposite_rays() {
        let p = PlaneFan::pentagon(2);
        assert_eq!(p.opposite_position(1), Some(4));
        assert_eq!(p.opposite_position(2), None);
        assert_eq!(PlaneFan::projective_plane().opposite_position(1), None);
    }
}
