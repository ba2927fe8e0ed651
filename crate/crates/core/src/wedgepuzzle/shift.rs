use crate::planefan::{LatticeVector2, PlaneFan};

use super::PuzzleError;

/// Positions (1-based) strictly between the ray opposite to `color` and
/// `color` itself, walking counterclockwise from the opposite ray.
pub(crate) fn lower_block(fan: &PlaneFan, color: usize) -> Option<Vec<usize>> {
    let m = fan.len();
    let opposite = fan.opposite_position(color)?;
    let mut out = Vec::new();
    let mut p = opposite % m + 1;
    while p != color {
        out.push(p);
        p = p % m + 1;
    }
    Some(out)
}

/// Shears the lower block along the line through `v_color`:
/// `v_β ↦ v_β - e·det(v_color, v_β)·v_color`. In a basis with
/// `v_color = (1,0)` this is `x ↦ x - e·y`.
pub fn shift(fan: &PlaneFan, color: usize, e: i64) -> Result<PlaneFan, PuzzleError> {
    if color == 0 || color > fan.len() {
        return Err(PuzzleError::InvalidLabel(color.to_string()));
    }
    if e == 0 {
        return Ok(fan.clone());
    }
    let block = lower_block(fan, color).ok_or(PuzzleError::NoOppositeRay { color })?;
    let v = fan.ray(color);
    let mut rays: Vec<LatticeVector2> = fan.rays().to_vec();
    for p in block {
        let w = rays[p - 1];
        rays[p - 1] = w - v.scaled(e * v.det(w));
    }
    Ok(PlaneFan::validate(rays)?)
}

/// The parameter `e` with `shift(f1, color, e) ≅ f2`, comparing normalized
/// ray lists; `Some(0)` when the fans agree up to basis change.
pub fn is_edge(f1: &PlaneFan, f2: &PlaneFan, color: usize) -> Option<i64> {
    if f1.len() != f2.len() || color == 0 || color > f1.len() {
        return None;
    }
    let (n1, n2) = (f1.normalize_at(color), f2.normalize_at(color));
    if n1 == n2 {
        return Some(0);
    }
    let block = lower_block(&n1, color)?;
    let first = *block.first()?;
    let (a, b) = (n1.ray(first), n2.ray(first));
    // v_color = (1,0) here, so the first lower ray moves by -e·y in x
    if a.y != b.y || a.y == 0 || (a.x - b.x) % a.y != 0 {
        return None;
    }
    let e = (a.x - b.x) / a.y;
    match shift(&n1, color, e) {
        Ok(s) if s == n2 => Some(e),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pentagon_shift_moves_last_ray() {
        for d in -2..3 {
            for e in -2..3 {
                let s = shift(&PlaneFan::pentagon(d), 1, e).unwrap();
                assert_eq!(s, PlaneFan::pentagon(d + e));
            }
        }
    }

    #[test]
    fn shift_needs_opposite_ray() {
        let cp2 = PlaneFan::projective_plane();
        assert_eq!(shift(&cp2, 1, 0).unwrap(), cp2);
        assert_eq!(
            shift(&cp2, 1, 1),
            Err(PuzzleError::NoOppositeRay { color: 1 })
        );
    }

    #[test]
    fn edges_between_pentagons() {
        let (l2, l3) = (PlaneFan::pentagon(2), PlaneFan::pentagon(3));
        assert_eq!(is_edge(&l2, &l3, 1), Some(1));
        assert_eq!(is_edge(&l3, &l2, 1), Some(-1));
        assert_eq!(is_edge(&l2, &l2, 1), Some(0));
        assert_eq!(is_edge(&PlaneFan::projective_plane(), &PlaneFan::hirzebruch(0), 1), None);
        // color 2 has no opposite ray in a pentagon
        assert_eq!(is_edge(&l2, &l3, 2), None);
    }

    #[test]
    fn is_edge_ignores_basis() {
        let l2 = PlaneFan::pentagon(2);
        let l4 = PlaneFan::pentagon(4).normalize_at(3);
        assert_eq!(is_edge(&l2, &l4, 1), Some(2));
    }

    #[test]
    fn opposite_color_shifts_other_side() {
        // color 4 is opposite to color 1; its lower block is {2, 3}
        let l = PlaneFan::pentagon(1);
        assert_eq!(lower_block(&l, 4), Some(vec![2, 3]));
        let s = shift(&l, 4, 1).unwrap();
        assert_eq!(is_edge(&l, &s, 4), Some(1));
    }
}
