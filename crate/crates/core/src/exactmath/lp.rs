//! Exact two-phase simplex with Bland's rule, and the strict-inequality
//! feasibility test built on top of it.

use num_traits::{One, Signed, Zero};

use super::matrix::QMatrix;
use super::rational::{dot, recip, QVector, Rational};
use super::ExactError;

/// Mixed system of linear constraints over `dimension` free variables.
///
/// `equalities` mean `a·x = b`, `weak` mean `a·x <= b` and `strict` mean `a·x < b`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StrictLinearSystem {
    pub dimension: usize,
    pub equalities: Vec<(QVector, Rational)>,
    pub weak: Vec<(QVector, Rational)>,
    pub strict: Vec<(QVector, Rational)>,
}

impl StrictLinearSystem {
    pub fn new(dimension: usize) -> Self {
        Self {
            dimension,
            ..Self::default()
        }
    }

    pub fn equal(&mut self, a: QVector, b: Rational) -> &mut Self {
        self.equalities.push((a, b));
        self
    }

    pub fn at_most(&mut self, a: QVector, b: Rational) -> &mut Self {
        self.weak.push((a, b));
        self
    }

    pub fn less_than(&mut self, a: QVector, b: Rational) -> &mut Self {
        self.strict.push((a, b));
        self
    }

    fn check_dimensions(&self) -> Result<(), ExactError> {
        let rows = self.equalities.iter().chain(&self.weak).chain(&self.strict);
        for (a, _) in rows {
            if a.len() != self.dimension {
                return Err(ExactError::DimensionMismatch {
                    expected: self.dimension,
                    found: a.len(),
                });
            }
        }
        Ok(())
    }

    /// Substitutes `x` and checks every constraint exactly. Strict rows must
    /// hold with margin at least `margin` when one is given.
    pub fn is_satisfied_by(&self, x: &[Rational], margin: Option<&Rational>) -> bool {
        if x.len() != self.dimension {
            return false;
        }
        let eq_ok = self.equalities.iter().all(|(a, b)| &dot(a, x) == b);
        let weak_ok = self.weak.iter().all(|(a, b)| &dot(a, x) <= b);
        let strict_ok = self.strict.iter().all(|(a, b)| {
            let lhs = dot(a, x);
            match margin {
                Some(t) => &(lhs + t) <= b && t.is_positive(),
                None => &lhs < b,
            }
        });
        eq_ok && weak_ok && strict_ok
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Feasible,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityResult {
    pub verdict: Verdict,
    pub witness: Option<QVector>,
    pub slack: Option<Rational>,
}

impl FeasibilityResult {
    pub fn infeasible() -> Self {
        Self {
            verdict: Verdict::Infeasible,
            witness: None,
            slack: None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.verdict == Verdict::Feasible
    }
}

/// Decides whether some point satisfies every equality, weak and strict row.
///
/// Each strict row `a·x < b` becomes `a·x + t <= b`, the slack `t` is capped
/// at 1 and maximized; the system is feasible iff the optimum is positive.
/// The LP is solved through its dual, which has one row per variable
/// instead of one per constraint, and the witness is read off the tight
/// rows of the optimal dual basis.
pub fn strict_feasible(sys: &StrictLinearSystem) -> Result<FeasibilityResult, ExactError> {
    sys.check_dimensions()?;
    let n = sys.dimension;
    let (ne, nw, ns) = (sys.equalities.len(), sys.weak.len(), sys.strict.len());
    // dual columns: u+ (ne), u- (ne), v (nw), y (ns), z
    let width = 2 * ne + nw + ns + 1;
    let mut rows = vec![vec![Rational::zero(); width]; n + 1];
    let mut cost = vec![Rational::zero(); width];
    // primal row behind each dual column, as (a, coefficient of t, b)
    let mut primal: Vec<(&QVector, bool, &Rational)> = Vec::with_capacity(width);
    for (k, (a, b)) in sys.equalities.iter().enumerate() {
        for (j, v) in a.iter().enumerate() {
            rows[j][k] = v.clone();
            rows[j][ne + k] = -v.clone();
        }
        cost[k] = -b.clone();
        cost[ne + k] = b.clone();
    }
    for (a, b) in &sys.equalities {
        primal.push((a, false, b));
    }
    for (a, b) in &sys.equalities {
        primal.push((a, false, b));
    }
    for (k, (a, b)) in sys.weak.iter().enumerate() {
        let col = 2 * ne + k;
        for (j, v) in a.iter().enumerate() {
            rows[j][col] = v.clone();
        }
        cost[col] = -b.clone();
        primal.push((a, false, b));
    }
    for (k, (a, b)) in sys.strict.iter().enumerate() {
        let col = 2 * ne + nw + k;
        for (j, v) in a.iter().enumerate() {
            rows[j][col] = v.clone();
        }
        rows[n][col] = Rational::one();
        cost[col] = -b.clone();
        primal.push((a, true, b));
    }
    rows[n][width - 1] = Rational::one();
    cost[width - 1] = -Rational::one();
    let mut rhs = vec![Rational::zero(); n + 1];
    rhs[n] = Rational::one();

    let (value, basis) = match maximize_standard(rows, rhs, &cost)? {
        // the dual is feasible (z = 1), so an unbounded dual means no primal point
        LpOutcome::Unbounded => return Ok(FeasibilityResult::infeasible()),
        LpOutcome::Infeasible => return Err(ExactError::UnboundedAuxiliary),
        LpOutcome::Optimal { value, basis, .. } => (value, basis),
    };
    let t = -value;
    if !t.is_positive() {
        return Ok(FeasibilityResult {
            verdict: Verdict::Infeasible,
            witness: None,
            slack: Some(t),
        });
    }
    // complementary slackness: primal rows of basic dual columns are tight
    let mut tight: Vec<Vec<Rational>> = Vec::with_capacity(basis.len());
    for &j in &basis {
        let mut row = vec![Rational::zero(); n + 2];
        if j == width - 1 {
            row[n] = Rational::one();
            row[n + 1] = Rational::one();
        } else {
            let (a, has_t, b) = primal[j];
            row[..n].clone_from_slice(a);
            if has_t {
                row[n] = Rational::one();
            }
            row[n + 1] = b.clone();
        }
        tight.push(row);
    }
    let witness = solve_any(&tight, n + 1).map(|w| w[..n].to_vec());
    match witness {
        Some(x) if sys.is_satisfied_by(&x, Some(&t)) => Ok(FeasibilityResult {
            verdict: Verdict::Feasible,
            witness: Some(x),
            slack: Some(t),
        }),
        _ => strict_feasible_primal(sys),
    }
}

/// Some solution of the augmented system `[A | b]` with `cols` unknowns,
/// free variables set to zero.
fn solve_any(augmented: &[Vec<Rational>], cols: usize) -> Option<QVector> {
    let m = QMatrix::from_rows(augmented, cols + 1).ok()?;
    let (r, pivots) = m.rref();
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r.get(i, cols).clone();
    }
    Some(x)
}

/// The same decision solved directly on the primal tableau.
fn strict_feasible_primal(sys: &StrictLinearSystem) -> Result<FeasibilityResult, ExactError> {
    let n = sys.dimension;
    // columns: x+ (n), x- (n), t+, t-, one slack per inequality row
    let inequalities = sys.weak.len() + sys.strict.len() + 1;
    let t_plus = 2 * n;
    let t_minus = 2 * n + 1;
    let width = 2 * n + 2 + inequalities;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();

    let split = |a: &QVector| -> Vec<Rational> {
        let mut row = vec![Rational::zero(); width];
        for (j, v) in a.iter().enumerate() {
            if !v.is_zero() {
                row[j] = v.clone();
                row[n + j] = -v.clone();
            }
        }
        row
    };

    for (a, b) in &sys.equalities {
        rows.push(split(a));
        rhs.push(b.clone());
    }
    let mut slack_col = 2 * n + 2;
    for (a, b) in &sys.weak {
        let mut row = split(a);
        row[slack_col] = Rational::one();
        slack_col += 1;
        rows.push(row);
        rhs.push(b.clone());
    }
    for (a, b) in &sys.strict {
        let mut row = split(a);
        row[t_plus] = Rational::one();
        row[t_minus] = -Rational::one();
        row[slack_col] = Rational::one();
        slack_col += 1;
        rows.push(row);
        rhs.push(b.clone());
    }
    let mut cap = vec![Rational::zero(); width];
    cap[t_plus] = Rational::one();
    cap[t_minus] = -Rational::one();
    cap[slack_col] = Rational::one();
    rows.push(cap);
    rhs.push(Rational::one());

    let mut objective = vec![Rational::zero(); width];
    objective[t_plus] = Rational::one();
    objective[t_minus] = -Rational::one();

    match maximize_standard(rows, rhs, &objective)? {
        LpOutcome::Infeasible => Ok(FeasibilityResult::infeasible()),
        LpOutcome::Unbounded => Err(ExactError::UnboundedAuxiliary),
        LpOutcome::Optimal { point, value, .. } => {
            if !value.is_positive() {
                return Ok(FeasibilityResult {
                    verdict: Verdict::Infeasible,
                    witness: None,
                    slack: Some(value),
                });
            }
            let x: QVector = (0..n).map(|j| &point[j] - &point[n + j]).collect();
            Ok(FeasibilityResult {
                verdict: Verdict::Feasible,
                witness: Some(x),
                slack: Some(value),
            })
        }
    }
}

/// Minimizes `objective·z` subject to `A z = b`, `z >= 0`.
///
/// Returns `None` when infeasible and an error when unbounded below.
pub(crate) fn minimize_nonnegative(
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    objective: &[Rational],
) -> Result<Option<(QVector, Rational)>, ExactError> {
    if let Some(row) = a.iter().find(|r| r.len() != objective.len()) {
        return Err(ExactError::DimensionMismatch {
            expected: objective.len(),
            found: row.len(),
        });
    }
    if a.len() != b.len() {
        return Err(ExactError::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let c: QVector = objective.iter().map(|v| -v.clone()).collect();
    match maximize_standard(a, b, &c)? {
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(ExactError::PreconditionViolated(
            "objective is unbounded below".into(),
        )),
        LpOutcome::Optimal { point, value, .. } => Ok(Some((point, -value))),
    }
}

#[derive(Debug)]
enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal {
        point: QVector,
        value: Rational,
        basis: Vec<usize>,
    },
}

/// Dense tableau; the last entry of each row is the right-hand side.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// reduced costs for maximization; last entry is the objective value
    cost: Vec<Rational>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = recip(&self.rows[r][c]);
        if !inv.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
        }
        let support: Vec<usize> = self.rows[r]
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, _)| j)
            .collect();
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut Vec<Rational>| {
            let factor = row[c].clone();
            if factor.is_zero() {
                return;
            }
            for &j in &support {
                let delta = &factor * &pivot_row[j];
                row[j] -= delta;
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.basis[r] = c;
    }

    /// Runs the simplex method to optimality. `allowed` bounds the entering
    /// columns. Entering columns follow the most negative reduced cost; after
    /// a run of degenerate pivots Bland's rule takes over until the objective
    /// moves again, which rules out cycling.
    fn run(&mut self, allowed: usize) -> bool {
        let mut stalled = 0;
        let patience = self.rows.len() + 1;
        loop {
            let entering = if stalled > patience {
                (0..allowed).find(|&j| self.cost[j].is_negative())
            } else {
                (0..allowed)
                    .filter(|&j| self.cost[j].is_negative())
                    .min_by(|&a, &b| self.cost[a].cmp(&self.cost[b]).then(a.cmp(&b)))
            };
            let Some(c) = entering else {
                return true;
            };
            let last = self.width();
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[last] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, ratio)) => {
                    if ratio.is_zero() {
                        stalled += 1;
                    } else {
                        stalled = 0;
                    }
                    self.pivot(r, c)
                }
                None => return false,
            }
        }
    }
}

/// Maximizes `c·z` subject to `A z = b`, `z >= 0`.
fn maximize_standard(
    mut a: Vec<Vec<Rational>>,
    mut b: Vec<Rational>,
    c: &[Rational],
) -> Result<LpOutcome, ExactError> {
    let n = c.len();
    let m = a.len();
    for (row, rhs) in a.iter_mut().zip(b.iter_mut()) {
        if rhs.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            *rhs = -rhs.clone();
        }
    }

    // phase 1: one artificial per row, maximize -(sum of artificials)
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, rhs)) in a.into_iter().zip(b).enumerate() {
        let mut full = row;
        full.resize(width, Rational::zero());
        full[n + i] = Rational::one();
        full.push(rhs);
        rows.push(full);
    }
    let mut cost = vec![Rational::zero(); width + 1];
    for row in &rows {
        for (j, v) in row.iter().enumerate() {
            if j < n || j == width {
                cost[j] -= v;
            }
        }
    }
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        cost,
    };
    t.run(width);
    if t.cost[width].is_negative() {
        return Ok(LpOutcome::Infeasible);
    }

    // drive artificials out of the basis; drop redundant rows
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, j);
            } else {
                t.rows.remove(r);
                t.basis.remove(r);
                continue;
            }
        }
        r += 1;
    }
    for row in t.rows.iter_mut() {
        let rhs = row[width].clone();
        row.truncate(n);
        row.push(rhs);
    }

    // phase 2
    let mut cost: Vec<Rational> = c.iter().map(|v| -v.clone()).collect();
    cost.push(Rational::zero());
    for (row, &bvar) in t.rows.iter().zip(&t.basis) {
        let cb = &c[bvar];
        if cb.is_zero() {
            continue;
        }
        for (j, v) in row.iter().enumerate() {
            if !v.is_zero() {
                cost[j] += cb * v;
            }
        }
    }
    t.cost = cost;
    if !t.run(n) {
        return Ok(LpOutcome::Unbounded);
    }
    let mut point = vec![Rational::zero(); n];
    for (row, &bvar) in t.rows.iter().zip(&t.basis) {
        point[bvar] = row[n].clone();
    }
    Ok(LpOutcome::Optimal {
        point,
        value: t.cost[n].clone(),
        basis: t.basis,
    })
}
