use std::collections::{BTreeMap, VecDeque};

use crate::planefan::PlaneFan;

use super::charmatrix::{check_nonsingular, fan_at, CharMatrix};
use super::shift::{is_edge, lower_block, shift};
use super::{Label, PuzzleError, WedgeComplex, WedgeSignature};

/// An edge of `G(J)` of color `color`; `p(to) = shift(p(from), color, e)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PuzzleEdge {
    pub color: usize,
    pub from: Vec<usize>,
    pub to: Vec<usize>,
    pub e: i64,
}

/// A map from the vertices of `G(J)` to plane fans with the shift
/// parameter of every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Puzzle {
    pub signature: WedgeSignature,
    pub assignment: BTreeMap<Vec<usize>, PlaneFan>,
    /// every edge of `G(J)`, sorted, `from` lexicographically below `to`
    pub edges: Vec<PuzzleEdge>,
}

impl Puzzle {
    /// The fan at the vertex `(1, ..., 1)`.
    pub fn base(&self) -> &PlaneFan {
        &self.assignment[&vec![1; self.signature.m()]]
    }

    pub fn fan(&self, alpha: &[usize]) -> Option<&PlaneFan> {
        self.assignment.get(alpha)
    }

    /// Every vertex mapped to `base`, all parameters zero.
    pub fn constant(signature: &WedgeSignature, base: &PlaneFan) -> Result<Self, PuzzleError> {
        Self::from_axes(signature, base, &BTreeMap::new())
    }

    /// Builds the puzzle whose edge from `(1,..,1)` to copy `k` of color `i`
    /// carries `axes[i_k]` (missing entries are 0). The fan at `α` is
    /// obtained by shifting the base successively in every color.
    pub fn from_axes(
        signature: &WedgeSignature,
        base: &PlaneFan,
        axes: &BTreeMap<Label, i64>,
    ) -> Result<Self, PuzzleError> {
        check_base(signature, base)?;
        let mut assignment = BTreeMap::new();
        for alpha in signature.grid_vertices() {
            let mut fan = base.clone();
            for (i, &k) in alpha.iter().enumerate() {
                if k > 1 {
                    let e = axes.get(&Label::new(i + 1, k)).copied().unwrap_or(0);
                    fan = shift(&fan, i + 1, e)?;
                }
            }
            assignment.insert(alpha, fan);
        }
        Self::from_assignment(signature, assignment)
    }

    /// Computes every edge parameter with `is_edge`; fails when some edge of
    /// `G(J)` joins fans that are not related by a shift of its color.
    pub fn from_assignment(
        signature: &WedgeSignature,
        assignment: BTreeMap<Vec<usize>, PlaneFan>,
    ) -> Result<Self, PuzzleError> {
        let mut edges = Vec::new();
        for (color, from, to) in signature.grid_edges() {
            let (Some(a), Some(b)) = (assignment.get(&from), assignment.get(&to)) else {
                return Err(PuzzleError::InvalidPuzzle(format!(
                    "vertex {from:?} or {to:?} is unassigned"
                )));
            };
            let e = is_edge(a, b, color).ok_or_else(|| {
                PuzzleError::InvalidPuzzle(format!(
                    "{from:?} -> {to:?} is not a shift of color {color}"
                ))
            })?;
            edges.push(PuzzleEdge { color, from, to, e });
        }
        edges.sort();
        Ok(Self {
            signature: signature.clone(),
            assignment,
            edges,
        })
    }

    /// Propagates the base fan along the given edges (in either direction),
    /// then recomputes all edges and checks the given parameters against them.
    pub fn from_edges(
        signature: &WedgeSignature,
        base: &PlaneFan,
        given: &[PuzzleEdge],
    ) -> Result<Self, PuzzleError> {
        check_base(signature, base)?;
        let vertices = signature.grid_vertices();
        for edge in given {
            let valid = vertices.contains(&edge.from)
                && vertices.contains(&edge.to)
                && edge.color >= 1
                && edge.color <= signature.m()
                && (0..signature.m())
                    .all(|i| (i + 1 == edge.color) != (edge.from[i] == edge.to[i]));
            if !valid {
                return Err(PuzzleError::InvalidPuzzle(format!(
                    "{:?} -> {:?} is not an edge of color {}",
                    edge.from, edge.to, edge.color
                )));
            }
        }
        let mut assignment = BTreeMap::new();
        let start = vec![1; signature.m()];
        assignment.insert(start.clone(), base.clone());
        let mut queue = VecDeque::from([start]);
        while let Some(alpha) = queue.pop_front() {
            let fan = assignment[&alpha].clone();
            for edge in given {
                let (next, e) = if edge.from == alpha {
                    (&edge.to, edge.e)
                } else if edge.to == alpha {
                    (&edge.from, -edge.e)
                } else {
                    continue;
                };
                if !assignment.contains_key(next) {
                    assignment.insert(next.clone(), shift(&fan, edge.color, e)?);
                    queue.push_back(next.clone());
                }
            }
        }
        if assignment.len() < vertices.len() {
            // remaining vertices follow from the axes by composing shifts
            let start = vec![1; signature.m()];
            let mut axes = BTreeMap::new();
            for label in signature.extra_labels() {
                let mut alpha = start.clone();
                alpha[label.vertex - 1] = label.copy;
                let e = assignment
                    .get(&alpha)
                    .and_then(|f| is_edge(base, f, label.vertex))
                    .ok_or_else(|| {
                        PuzzleError::InvalidPuzzle(format!(
                            "edges do not determine the fan at {alpha:?}"
                        ))
                    })?;
                axes.insert(label, e);
            }
            let full = Self::from_axes(signature, base, &axes)?;
            for (alpha, fan) in full.assignment {
                assignment.entry(alpha).or_insert(fan);
            }
        }
        let puzzle = Self::from_assignment(signature, assignment)?;
        for edge in given {
            let (from, to, e) = if edge.from < edge.to {
                (&edge.from, &edge.to, edge.e)
            } else {
                (&edge.to, &edge.from, -edge.e)
            };
            let found = puzzle
                .edges
                .iter()
                .find(|x| &x.from == from && &x.to == to)
                .map(|x| x.e);
            if found != Some(e) {
                return Err(PuzzleError::InvalidPuzzle(format!(
                    "edge {from:?} -> {to:?} has parameter {found:?}, not {e}"
                )));
            }
        }
        Ok(puzzle)
    }

    /// Parameters of the edges leaving `(1,..,1)`, keyed by the copy reached.
    pub fn axes(&self) -> BTreeMap<Label, i64> {
        let start = vec![1; self.signature.m()];
        self.edges
            .iter()
            .filter(|e| e.from == start)
            .map(|e| (Label::new(e.color, e.to[e.color - 1]), e.e))
            .collect()
    }
}

fn check_base(signature: &WedgeSignature, base: &PlaneFan) -> Result<(), PuzzleError> {
    if base.len() != signature.m() {
        return Err(PuzzleError::InvalidPuzzle(format!(
            "base fan has {} rays, signature has m = {}",
            base.len(),
            signature.m()
        )));
    }
    Ok(())
}

/// Standard form over `P_m(J)`. Rows 1 and 2 hold the base fan; copy `i_k`
/// with `k ≥ 2` owns one more row, where column `i_k` is `+1`, column `i_1`
/// is `-1` and every ray `β` in the lower block of `i` carries
/// `-e·det(v_i, v_β)` with `e = axes[i_k]`.
pub fn assemble_from_axes(
    signature: &WedgeSignature,
    base: &PlaneFan,
    axes: &BTreeMap<Label, i64>,
) -> Result<CharMatrix, PuzzleError> {
    check_base(signature, base)?;
    let extra = signature.extra_labels();
    let n = 2 + extra.len();
    let mut columns: BTreeMap<Label, Vec<i64>> = BTreeMap::new();
    for label in signature.labels() {
        let mut col = vec![0; n];
        if label.copy == 1 {
            let v = base.ray(label.vertex);
            col[0] = v.x;
            col[1] = v.y;
        }
        columns.insert(label, col);
    }
    for (r, label) in extra.iter().enumerate() {
        let row = 2 + r;
        let i = label.vertex;
        columns.get_mut(label).expect("label")[row] = 1;
        columns.get_mut(&Label::new(i, 1)).expect("label")[row] = -1;
        let e = axes.get(label).copied().unwrap_or(0);
        if e == 0 {
            continue;
        }
        let block = lower_block(base, i).ok_or(PuzzleError::NoOppositeRay { color: i })?;
        let v = base.ray(i);
        for beta in block {
            columns.get_mut(&Label::new(beta, 1)).expect("label")[row] =
                -e * v.det(base.ray(beta));
        }
    }
    CharMatrix::new(n, columns.into_iter().collect())
}

/// The standard-form matrix of a valid puzzle.
pub fn assemble_matrix(puzzle: &Puzzle) -> Result<CharMatrix, PuzzleError> {
    if !validate_puzzle(puzzle) {
        return Err(PuzzleError::InvalidPuzzle("puzzle does not validate".into()));
    }
    assemble_from_axes(&puzzle.signature, puzzle.base(), &puzzle.axes())
}

/// Decides a square `[p00, p10, p01, p11]` whose first move has color `i`
/// and second move color `j`: the 4-row standard form built from `p00` must
/// be non-singular over the double wedge and reproduce all four corners.
pub fn realizable_square(
    fans: [&PlaneFan; 4],
    colors: (usize, usize),
) -> Result<bool, PuzzleError> {
    let (i, j) = colors;
    let [p00, p10, p01, p11] = fans;
    let m = p00.len();
    if i == j || i == 0 || j == 0 || i > m || j > m {
        return Err(PuzzleError::NotASquare);
    }
    let e = is_edge(p00, p10, i).ok_or(PuzzleError::NotASquare)?;
    let f = is_edge(p00, p01, j).ok_or(PuzzleError::NotASquare)?;
    is_edge(p10, p11, j).ok_or(PuzzleError::NotASquare)?;
    is_edge(p01, p11, i).ok_or(PuzzleError::NotASquare)?;
    let mut j_sig = vec![1; m];
    j_sig[i - 1] = 2;
    j_sig[j - 1] = 2;
    let sig = WedgeSignature::new(j_sig)?;
    let axes = BTreeMap::from([(Label::new(i, 2), e), (Label::new(j, 2), f)]);
    let matrix = match assemble_from_axes(&sig, p00, &axes) {
        Ok(matrix) => matrix,
        Err(PuzzleError::NoOppositeRay { .. }) => return Ok(false),
        Err(err) => return Err(err),
    };
    if !check_nonsingular(&matrix, &WedgeComplex::build(&sig))? {
        return Ok(false);
    }
    let corner = |a: usize, b: usize| {
        let mut alpha = vec![1; m];
        alpha[i - 1] = a;
        alpha[j - 1] = b;
        alpha
    };
    for (alpha, expected) in [(corner(1, 1), p00), (corner(2, 1), p10), (corner(1, 2), p01), (corner(2, 2), p11)] {
        let fan = fan_at(&matrix, &alpha)?;
        if fan.normalize_basis() != expected.normalize_basis() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that every vertex is assigned, every edge is a shift with the
/// recorded parameter and every square of `G(J)` is realizable.
pub fn validate_puzzle(puzzle: &Puzzle) -> bool {
    let sig = &puzzle.signature;
    let m = sig.m();
    if puzzle.assignment.len() != sig.grid_vertices().len()
        || sig
            .grid_vertices()
            .iter()
            .any(|a| puzzle.assignment.get(a).is_none_or(|f| f.len() != m))
    {
        return false;
    }
    let mut expected = sig.grid_edges();
    expected.sort();
    if expected.len() != puzzle.edges.len() {
        return false;
    }
    for ((color, from, to), edge) in expected.iter().zip(&puzzle.edges) {
        if (edge.color, &edge.from, &edge.to) != (*color, from, to) {
            return false;
        }
        if is_edge(&puzzle.assignment[from], &puzzle.assignment[to], *color) != Some(edge.e) {
            return false;
        }
    }
    sig.grid_squares().iter().all(|((i, j), corners)| {
        let fans = corners.clone().map(|a| &puzzle.assignment[&a]);
        realizable_square(fans, (*i, *j)).unwrap_or(false)
    })
}

/// No edge joins equal fans.
pub fn is_irreducible(puzzle: &Puzzle) -> bool {
    puzzle.edges.iter().all(|e| e.e != 0)
}
