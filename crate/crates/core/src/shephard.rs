//! Shephard diagrams of complete simplicial fans and two independent
//! projectivity tests: intersecting cofaces, and strictly convex support
//! functions.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactmath::{
    affine_dimension, dot, integer_det, kernel_basis, kernel_with_ones, minimize_nonnegative,
    primitive_integer_scaling, q, relint_contains, relint_intersection, strict_feasible,
    verify_barycentric, ExactError, QMatrix, QVector, Rational, StrictLinearSystem,
};
use crate::planefan::PlaneFan;
use crate::wedgepuzzle::{check_nonsingular, projection, CharMatrix, Label, WedgeComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShephardError {
    #[error("generators admit no positive relation, the fan is not complete")]
    NotComplete,
    #[error("some maximal cone is not unimodular")]
    NotNonSingular,
    #[error("unknown label {0}")]
    UnknownLabel(Label),
    #[error("ray {0} has no opposite ray")]
    NoOppositeRay(usize),
    #[error("vertex {0} does not have exactly two copies")]
    NotWedged(usize),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Labeled integer generators with the maximal cones of a simplicial fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialFan {
    dim: usize,
    labels: Vec<Label>,
    generators: Vec<Vec<i64>>,
    facets: Vec<Vec<Label>>,
}

impl SimplicialFan {
    pub fn new(
        dim: usize,
        generators: Vec<(Label, Vec<i64>)>,
        facets: Vec<Vec<Label>>,
    ) -> Result<Self, ShephardError> {
        let mut map = BTreeMap::new();
        for (l, g) in generators {
            if g.len() != dim {
                return Err(ShephardError::InvalidFan(format!(
                    "generator {l} has length {}, expected {dim}",
                    g.len()
                )));
            }
            if map.insert(l, g).is_some() {
                return Err(ShephardError::InvalidFan(format!("duplicate label {l}")));
            }
        }
        let (labels, generators): (Vec<Label>, Vec<Vec<i64>>) = map.into_iter().unzip();
        let mut sorted = Vec::with_capacity(facets.len());
        for mut f in facets {
            f.sort();
            if f.len() != dim {
                return Err(ShephardError::InvalidFan(format!(
                    "maximal cone of size {} in dimension {dim}",
                    f.len()
                )));
            }
            if let Some(l) = f.iter().find(|l| labels.binary_search(l).is_err()) {
                return Err(ShephardError::UnknownLabel(*l));
            }
            sorted.push(f);
        }
        sorted.sort();
        sorted.dedup();
        Ok(Self {
            dim,
            labels,
            generators,
            facets: sorted,
        })
    }

    /// Rays labeled `i_1`, maximal cones `{i, i+1}`.
    pub fn from_plane_fan(fan: &PlaneFan) -> Self {
        let m = fan.len();
        let labels: Vec<Label> = (1..=m).map(|i| Label::new(i, 1)).collect();
        let mut facets: Vec<Vec<Label>> = (0..m)
            .map(|i| {
                let mut f = vec![labels[i], labels[(i + 1) % m]];
                f.sort();
                f
            })
            .collect();
        facets.sort();
        Self {
            dim: 2,
            labels,
            generators: fan.rays().iter().map(|v| vec![v.x, v.y]).collect(),
            facets,
        }
    }

    pub fn from_char_matrix(m: &CharMatrix, k: &WedgeComplex) -> Result<Self, ShephardError> {
        if m.labels() != k.vertices.as_slice() {
            return Err(ShephardError::InvalidFan(
                "matrix columns do not match the complex".into(),
            ));
        }
        Self::new(
            m.n(),
            m.labeled_columns().map(|(l, c)| (l, c.to_vec())).collect(),
            k.facets.clone(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn facets(&self) -> &[Vec<Label>] {
        &self.facets
    }

    pub fn index_of(&self, label: Label) -> Result<usize, ShephardError> {
        self.labels
            .binary_search(&label)
            .map_err(|_| ShephardError::UnknownLabel(label))
    }

    fn generator(&self, label: Label) -> &[i64] {
        &self.generators[self.index_of(label).expect("known label")]
    }

    /// Every maximal cone is spanned by a lattice basis.
    pub fn is_nonsingular(&self) -> bool {
        self.facets.iter().all(|f| {
            let rows: Vec<Vec<i64>> = (0..self.dim)
                .map(|r| f.iter().map(|&l| self.generator(l)[r]).collect())
                .collect();
            integer_det(&rows).is_ok_and(|d| d.abs().is_one())
        })
    }

    /// Pairs of maximal cones sharing a wall, with the ray of each not in the other.
    pub fn walls(&self) -> Vec<(usize, usize, Label, Label)> {
        let mut out = Vec::new();
        for a in 0..self.facets.len() {
            for b in a + 1..self.facets.len() {
                let only_a: Vec<Label> = self.facets[a]
                    .iter()
                    .filter(|l| self.facets[b].binary_search(l).is_err())
                    .copied()
                    .collect();
                if only_a.len() == 1 {
                    let only_b = *self.facets[b]
                        .iter()
                        .find(|l| self.facets[a].binary_search(l).is_err())
                        .expect("facets of equal size");
                    out.push((a, b, only_a[0], only_b));
                }
            }
        }
        out
    }
}

/// Positive weights `c_i` with `Σ c_i·u_i = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveRelation {
    pub weights: Vec<Rational>,
}

impl PositiveRelation {
    /// Checks positivity and that the weighted generators sum to zero.
    pub fn verify(&self, generators: &[Vec<i64>]) -> bool {
        if self.weights.len() != generators.len() || self.weights.iter().any(|c| !c.is_positive()) {
            return false;
        }
        let dim = generators.first().map_or(0, Vec::len);
        (0..dim).all(|r| {
            generators
                .iter()
                .zip(&self.weights)
                .map(|(g, c)| c * q(g[r]))
                .fold(Rational::zero(), |acc, v| acc + v)
                .is_zero()
        })
    }
}

/// Weights `c ≥ 1` minimizing `Σ c_i` subject to `Σ c_i·u_i = 0`, rescaled
/// to coprime integers.
pub fn positive_relation(generators: &[Vec<i64>]) -> Result<PositiveRelation, ShephardError> {
    let m = generators.len();
    if m == 0 {
        return Err(ShephardError::NotComplete);
    }
    let dim = generators[0].len();
    // c = 1 + z with z >= 0: minimize sum z subject to U z = -U 1
    let a: Vec<QVector> = (0..dim)
        .map(|r| generators.iter().map(|g| q(g[r])).collect())
        .collect();
    let b: QVector = (0..dim)
        .map(|r| q(-generators.iter().map(|g| g[r]).sum::<i64>()))
        .collect();
    let (z, _) = minimize_nonnegative(a, b, &vec![Rational::one(); m])?
        .ok_or(ShephardError::NotComplete)?;
    let c: QVector = z.into_iter().map(|v| v + Rational::one()).collect();
    Ok(PositiveRelation {
        weights: primitive_integer_scaling(&c),
    })
}

/// Points `û_i ∈ Q^{m-n-1}` such that `U·[û | 1] = 0` for the weighted
/// generator matrix `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShephardDiagram {
    pub ambient_dim: usize,
    pub labels: Vec<Label>,
    pub points: Vec<QVector>,
    pub relation: PositiveRelation,
}

impl ShephardDiagram {
    pub fn point(&self, label: Label) -> Result<&QVector, ShephardError> {
        self.labels
            .binary_search(&label)
            .map(|k| &self.points[k])
            .map_err(|_| ShephardError::UnknownLabel(label))
    }

    /// The matrix with rows `(û_i, 1)`.
    pub fn lifted(&self) -> QMatrix {
        let rows: Vec<QVector> = self
            .points
            .iter()
            .map(|p| {
                let mut r = p.clone();
                r.push(Rational::one());
                r
            })
            .collect();
        QMatrix::from_rows(&rows, self.ambient_dim + 1).expect("uniform rows")
    }

    /// Checks the defining identities against `fan`: the lifted matrix has
    /// full column rank and is annihilated by the weighted generators.
    pub fn verify(&self, fan: &SimplicialFan) -> bool {
        let m = fan.labels.len();
        if self.labels != fan.labels
            || self.points.len() != m
            || self.ambient_dim + fan.dim + 1 != m
            || self.points.iter().any(|p| p.len() != self.ambient_dim)
            || !self.relation.verify(&fan.generators)
        {
            return false;
        }
        let lifted = self.lifted();
        if lifted.rank() != m - fan.dim {
            return false;
        }
        weighted_generators(fan, &self.relation)
            .mul(&lifted)
            .is_ok_and(|p| p.is_zero())
    }
}

fn weighted_generators(fan: &SimplicialFan, relation: &PositiveRelation) -> QMatrix {
    let cols: Vec<QVector> = fan
        .generators
        .iter()
        .zip(&relation.weights)
        .map(|(g, c)| g.iter().map(|&x| c * q(x)).collect())
        .collect();
    QMatrix::from_columns(&cols, fan.dim).expect("uniform generators")
}

/// A Shephard diagram of `fan` using the minimal positive relation.
pub fn shephard_diagram(fan: &SimplicialFan) -> Result<ShephardDiagram, ShephardError> {
    let relation = positive_relation(&fan.generators)?;
    shephard_diagram_with_relation(fan, relation)
}

/// A Shephard diagram of `fan` for a given positive relation.
pub fn shephard_diagram_with_relation(
    fan: &SimplicialFan,
    relation: PositiveRelation,
) -> Result<ShephardDiagram, ShephardError> {
    if !relation.verify(&fan.generators) {
        return Err(ShephardError::NotComplete);
    }
    let u = weighted_generators(fan, &relation);
    if u.rank() != fan.dim {
        return Err(ShephardError::InvalidFan("generators do not span".into()));
    }
    let b = kernel_with_ones(&u)?;
    let ambient_dim = b.cols() - 1;
    let points = (0..b.rows()).map(|r| b.row(r)[..ambient_dim].to_vec()).collect();
    Ok(ShephardDiagram {
        ambient_dim,
        labels: fan.labels.clone(),
        points,
        relation,
    })
}

/// Labels not in `cone`, as indices into the diagram.
pub fn coface_indices(diagram: &ShephardDiagram, cone: &[Label]) -> Result<Vec<usize>, ShephardError> {
    for &l in cone {
        diagram.point(l)?;
    }
    Ok((0..diagram.labels.len())
        .filter(|&k| !cone.contains(&diagram.labels[k]))
        .collect())
}

fn coface_points(diagram: &ShephardDiagram, cone: &[Label]) -> Result<Vec<QVector>, ShephardError> {
    Ok(coface_indices(diagram, cone)?
        .into_iter()
        .map(|k| diagram.points[k].clone())
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    InteriorPoint,
    SupportHeights,
    EmptyWitness,
}

/// Evidence for a polytopality verdict that can be re-checked exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopalityCertificate {
    pub kind: CertificateKind,
    /// a point of `S(Σ̂)`
    pub point: Option<QVector>,
    /// per maximal cone, weights writing `point` in its coface
    pub barycentric: Option<Vec<(Vec<Label>, QVector)>>,
    /// one height per ray, in label order
    pub heights: Option<Vec<Rational>>,
    /// optimal margin of the auxiliary LP; not positive for an empty witness
    pub slack: Option<Rational>,
}

impl PolytopalityCertificate {
    pub fn is_positive(&self) -> bool {
        self.kind != CertificateKind::EmptyWitness
    }

    fn empty(slack: Option<Rational>) -> Self {
        Self {
            kind: CertificateKind::EmptyWitness,
            point: None,
            barycentric: None,
            heights: None,
            slack,
        }
    }
}

/// `S(Σ̂)`, the intersection of the cofaces of the given maximal cones.
pub fn s_sigma(
    diagram: &ShephardDiagram,
    facets: &[Vec<Label>],
) -> Result<PolytopalityCertificate, ShephardError> {
    let families = facets
        .iter()
        .map(|f| coface_points(diagram, f))
        .collect::<Result<Vec<_>, _>>()?;
    let result = relint_intersection(&families, diagram.ambient_dim)?;
    if !result.is_feasible() {
        return Ok(PolytopalityCertificate::empty(result.feasibility.slack));
    }
    let barycentric = facets
        .iter()
        .cloned()
        .zip(result.barycentric.clone().expect("feasible"))
        .collect();
    Ok(PolytopalityCertificate {
        kind: CertificateKind::InteriorPoint,
        point: result.feasibility.witness.clone(),
        barycentric: Some(barycentric),
        heights: None,
        slack: result.feasibility.slack,
    })
}

/// Re-checks an interior-point certificate against every coface.
pub fn verify_interior_point(
    diagram: &ShephardDiagram,
    facets: &[Vec<Label>],
    cert: &PolytopalityCertificate,
) -> bool {
    let (Some(point), Some(bary)) = (&cert.point, &cert.barycentric) else {
        return false;
    };
    if bary.len() != facets.len() {
        return false;
    }
    facets.iter().zip(bary).all(|(f, (g, w))| {
        f == g
            && coface_points(diagram, f).is_ok_and(|pts| verify_barycentric(&pts, w, point))
    })
}

fn check_input(fan: &SimplicialFan) -> Result<(), ShephardError> {
    if !fan.is_nonsingular() {
        return Err(ShephardError::NotNonSingular);
    }
    Ok(())
}

/// Shephard's criterion: the fan is strongly polytopal iff `S(Σ̂) ≠ ∅`.
pub fn is_strongly_polytopal(
    fan: &SimplicialFan,
) -> Result<(bool, PolytopalityCertificate), ShephardError> {
    check_input(fan)?;
    let diagram = shephard_diagram(fan)?;
    let cert = s_sigma(&diagram, &fan.facets)?;
    Ok((cert.is_positive(), cert))
}

/// Coefficients writing the generator `r` in the basis of cone `facet`,
/// by Cramer's rule over the integers.
fn cone_coordinates(fan: &SimplicialFan, facet: &[Label], r: Label) -> QVector {
    let cols: Vec<&[i64]> = facet.iter().map(|&l| fan.generator(l)).collect();
    let target = fan.generator(r);
    let det_with = |replace: Option<usize>| {
        let rows: Vec<Vec<i64>> = (0..fan.dim)
            .map(|i| {
                (0..fan.dim)
                    .map(|k| if Some(k) == replace { target[i] } else { cols[k][i] })
                    .collect()
            })
            .collect();
        integer_det(&rows).expect("square")
    };
    let det = Rational::from(det_with(None));
    assert!(!det.is_zero(), "degenerate cone");
    (0..fan.dim)
        .map(|k| Rational::from(det_with(Some(k))) / &det)
        .collect()
}

/// One strict inequality per wall: the linear function agreeing with the
/// heights on one cone stays strictly below the height of the other
/// cone's extra ray.
fn support_system(fan: &SimplicialFan) -> StrictLinearSystem {
    let m = fan.labels.len();
    let mut sys = StrictLinearSystem::new(m);
    for (a, _, _, r) in fan.walls() {
        let facet = &fan.facets[a];
        let coords = cone_coordinates(fan, facet, r);
        let mut row = vec![Rational::zero(); m];
        for (l, c) in facet.iter().zip(coords) {
            row[fan.index_of(*l).expect("known")] += c;
        }
        row[fan.index_of(r).expect("known")] -= Rational::one();
        sys.less_than(row, Rational::zero());
    }
    sys
}

/// Decides whether a strictly convex piecewise linear function exists.
pub fn support_function_polytopal(
    fan: &SimplicialFan,
) -> Result<(bool, PolytopalityCertificate), ShephardError> {
    check_input(fan)?;
    positive_relation(&fan.generators)?;
    let sys = support_system(fan);
    let result = strict_feasible(&sys)?;
    if !result.is_feasible() {
        return Ok((false, PolytopalityCertificate::empty(result.slack)));
    }
    Ok((
        true,
        PolytopalityCertificate {
            kind: CertificateKind::SupportHeights,
            point: None,
            barycentric: None,
            heights: result.witness,
            slack: result.slack,
        },
    ))
}

/// Re-checks a support-heights certificate wall by wall.
pub fn verify_heights(fan: &SimplicialFan, heights: &[Rational]) -> bool {
    support_system(fan).is_satisfied_by(heights, None)
}

/// The Radon configuration of a plane fan with opposite rays `p` and `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadonData {
    pub color: usize,
    pub ell: usize,
    /// rays strictly on the counterclockwise side from `p` to `ℓ`
    pub a: Vec<usize>,
    /// rays strictly on the other side
    pub b: Vec<usize>,
    /// weighted heights `y_i` of the generators over the line `pℓ`
    pub y: Vec<Rational>,
    pub s: Rational,
    pub r: QVector,
    /// `R` recomputed from the `B` side as `-(1/s) Σ_B y_β β̂`
    pub r_from_b: QVector,
    /// affine functional `h(x) = w·x + c` vanishing on the hull of `A ∪ B`
    pub h_normal: QVector,
    pub h_offset: Rational,
    pub h_dimension: isize,
}

impl RadonData {
    pub fn h_value(&self, x: &[Rational]) -> Rational {
        dot(&self.h_normal, x) + &self.h_offset
    }
}

/// Radon data for the diagram of a plane fan, opposite pair at `color`.
pub fn radon_data(
    diagram: &ShephardDiagram,
    fan: &PlaneFan,
    color: usize,
) -> Result<RadonData, ShephardError> {
    let m = fan.len();
    if diagram.labels.len() != m {
        return Err(ShephardError::InvalidFan("diagram does not match the fan".into()));
    }
    let ell = fan
        .opposite_position(color)
        .ok_or(ShephardError::NoOppositeRay(color))?;
    let v = fan.ray(color);
    let y: Vec<Rational> = (1..=m)
        .map(|i| &diagram.relation.weights[i - 1] * q(v.det(fan.ray(i))))
        .collect();
    let a: Vec<usize> = (1..=m).filter(|&i| y[i - 1].is_positive()).collect();
    let b: Vec<usize> = (1..=m).filter(|&i| y[i - 1].is_negative()).collect();
    let dim = diagram.ambient_dim;
    let weighted_sum = |set: &[usize]| -> QVector {
        let mut acc = vec![Rational::zero(); dim];
        for &i in set {
            for (t, x) in acc.iter_mut().zip(&diagram.points[i - 1]) {
                *t += &y[i - 1] * x;
            }
        }
        acc
    };
    let s = a.iter().fold(Rational::zero(), |acc, &i| acc + &y[i - 1]);
    let r: QVector = weighted_sum(&a).into_iter().map(|x| x / &s).collect();
    let r_from_b: QVector = weighted_sum(&b).into_iter().map(|x| -x / &s).collect();
    let hull: Vec<QVector> = a
        .iter()
        .chain(&b)
        .map(|&i| diagram.points[i - 1].clone())
        .collect();
    // (w, c) with w·p + c = 0 on every hull point
    let rows: Vec<QVector> = hull
        .iter()
        .map(|p| {
            let mut r = p.clone();
            r.push(Rational::one());
            r
        })
        .collect();
    let system = QMatrix::from_rows(&rows, dim + 1)?;
    let kernel = kernel_basis(&system);
    let (h_normal, h_offset) = if kernel.cols() == 0 {
        (vec![Rational::zero(); dim], Rational::zero())
    } else {
        let col = kernel.column(0);
        (col[..dim].to_vec(), col[dim].clone())
    };
    Ok(RadonData {
        color,
        ell,
        a,
        b,
        y,
        s,
        r,
        r_from_b,
        h_normal,
        h_offset,
        h_dimension: affine_dimension(&hull),
    })
}

/// Outcome of the Radon checks on a plane fan with an opposite pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadonChecks {
    /// `Σ_A y α̂ + Σ_B y β̂ = 0`
    pub relation_holds: bool,
    /// both expressions for `R` agree
    pub r_consistent: bool,
    /// the open hulls of `A` and `B` meet, at `R` and nowhere else
    pub meets_exactly_at_r: bool,
    /// the hull of `A ∪ B` has dimension `m - 4`
    pub h_is_hyperplane: bool,
    /// `h(p̂)` and `h(ℓ̂)` are nonzero with the same sign
    pub same_side: bool,
}

impl RadonChecks {
    pub fn all(&self) -> bool {
        self.relation_holds
            && self.r_consistent
            && self.meets_exactly_at_r
            && self.h_is_hyperplane
            && self.same_side
    }
}

pub fn radon_checks(
    diagram: &ShephardDiagram,
    data: &RadonData,
) -> Result<RadonChecks, ShephardError> {
    let m = diagram.labels.len() as isize;
    let dim = diagram.ambient_dim;
    let pts = |set: &[usize]| -> Vec<QVector> {
        set.iter().map(|&i| diagram.points[i - 1].clone()).collect()
    };
    let (pa, pb) = (pts(&data.a), pts(&data.b));
    let relation_holds = (0..dim).all(|k| {
        data.a
            .iter()
            .chain(&data.b)
            .map(|&i| &data.y[i - 1] * &diagram.points[i - 1][k])
            .fold(Rational::zero(), |acc, v| acc + v)
            .is_zero()
    });
    let inter = relint_intersection(&[pa.clone(), pb.clone()], dim)?;
    let unique = affine_dimension(&pa) + affine_dimension(&pb) == data.h_dimension;
    let meets_exactly_at_r =
        inter.is_feasible() && inter.witness() == Some(&data.r) && unique;
    let one = data.h_value(&diagram.points[data.color - 1]);
    let ell = data.h_value(&diagram.points[data.ell - 1]);
    Ok(RadonChecks {
        relation_holds,
        r_consistent: data.r == data.r_from_b,
        meets_exactly_at_r,
        h_is_hyperplane: data.h_dimension == m - 4,
        same_side: !one.is_zero() && one.signum() == ell.signum(),
    })
}

/// Outcome of comparing a wedge diagram with the diagrams of its two projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeShephardReport {
    pub vertex: usize,
    /// `S(Σ̂)` is nonempty
    pub nonempty: bool,
    /// the cofaces of both projections have a common point
    pub joint_nonempty: bool,
    /// a witness of `S(Σ̂)` lies in every coface of both projections
    pub witness_reverified: bool,
    /// dropping copy `k` of the vertex leaves a Shephard diagram of the
    /// projection at that copy, for suitable positive weights
    pub projections_are_diagrams: [bool; 2],
}

impl WedgeShephardReport {
    pub fn holds(&self) -> bool {
        self.nonempty == self.joint_nonempty
            && (!self.nonempty || self.witness_reverified)
            && self.projections_are_diagrams.iter().all(|&b| b)
    }
}

/// Positive weights `c` making `points` a Shephard diagram of the generators.
fn admits_weights(generators: &[Vec<i64>], points: &[QVector]) -> Result<bool, ShephardError> {
    let m = generators.len();
    let dim = generators.first().map_or(0, Vec::len);
    let ambient = points.first().map_or(0, Vec::len);
    let lifted: Vec<QVector> = points
        .iter()
        .map(|p| {
            let mut r = p.clone();
            r.push(Rational::one());
            r
        })
        .collect();
    if QMatrix::from_rows(&lifted, ambient + 1)?.rank() != m - dim {
        return Ok(false);
    }
    let mut sys = StrictLinearSystem::new(m);
    for r in 0..dim {
        for k in 0..=ambient {
            sys.equal(
                (0..m).map(|i| q(generators[i][r]) * &lifted[i][k]).collect(),
                Rational::zero(),
            );
        }
    }
    for i in 0..m {
        let mut a = vec![Rational::zero(); m];
        a[i] = -Rational::one();
        sys.less_than(a, Rational::zero());
    }
    Ok(strict_feasible(&sys)?.is_feasible())
}

/// Checks `S(Σ̂) = S(Σ̂_1) ∩ S(Σ̂_2)` for a wedge at a vertex with two copies,
/// where `Σ̂_k` drops the point of copy `k` and belongs to the projection at
/// that copy.
pub fn verify_wedge_shephard(
    matrix: &CharMatrix,
    complex: &WedgeComplex,
    vertex: usize,
) -> Result<WedgeShephardReport, ShephardError> {
    if vertex == 0
        || vertex > complex.signature.m()
        || complex.signature.multiplicity(vertex) != 2
    {
        return Err(ShephardError::NotWedged(vertex));
    }
    let fan = SimplicialFan::from_char_matrix(matrix, complex)?;
    check_input(&fan)?;
    let diagram = shephard_diagram(&fan)?;
    let whole = s_sigma(&diagram, &fan.facets)?;

    let mut families: Vec<Vec<QVector>> = Vec::new();
    let mut per_projection: Vec<Vec<Vec<QVector>>> = Vec::new();
    let mut projections_are_diagrams = [false; 2];
    for copy in 1..=2 {
        let dropped = Label::new(vertex, copy);
        let proj = projection(matrix, dropped).map_err(|e| ShephardError::InvalidFan(e.to_string()))?;
        let sig = proj
            .signature()
            .map_err(|e| ShephardError::InvalidFan(e.to_string()))?;
        let pk = WedgeComplex::build(&sig);
        if !check_nonsingular(&proj, &pk).unwrap_or(false) {
            return Err(ShephardError::NotNonSingular);
        }
        // projected labels back to the labels of the wedge
        let lift = |l: Label| {
            if l.vertex == vertex && l.copy >= copy {
                Label::new(vertex, l.copy + 1)
            } else {
                l
            }
        };
        let kept: Vec<Label> = proj.labels().iter().map(|&l| lift(l)).collect();
        let points: Vec<QVector> = kept
            .iter()
            .map(|&l| diagram.point(l).cloned())
            .collect::<Result<_, _>>()?;
        projections_are_diagrams[copy - 1] = admits_weights(proj.columns(), &points)?;
        let mut cofaces = Vec::new();
        for facet in &pk.facets {
            let lifted: Vec<Label> = facet.iter().map(|&l| lift(l)).collect();
            let coface: Vec<QVector> = kept
                .iter()
                .filter(|l| !lifted.contains(l))
                .map(|&l| diagram.point(l).cloned())
                .collect::<Result<_, _>>()?;
            cofaces.push(coface);
        }
        families.extend(cofaces.iter().cloned());
        per_projection.push(cofaces);
    }
    let joint = relint_intersection(&families, diagram.ambient_dim)?;
    let witness_reverified = match &whole.point {
        Some(x) => {
            let mut ok = true;
            for family in per_projection.iter().flatten() {
                match relint_contains(family, x)? {
                    Some(w) if verify_barycentric(family, &w, x) => {}
                    _ => ok = false,
                }
            }
            ok
        }
        None => false,
    };
    Ok(WedgeShephardReport {
        vertex,
        nonempty: whole.is_positive(),
        joint_nonempty: joint.is_feasible(),
        witness_reverified,
        projections_are_diagrams,
    })
}

/// The affine dependency among `p̂_1, p̂_2, ℓ̂` and the Radon point `R` for a
/// wedge with two copies of `p` over a base fan where `p` and `ℓ` are opposite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfplaneRelation {
    pub r: QVector,
    /// rank of the lifted 4-point matrix; at most 3
    pub rank: usize,
    /// the unique relation `(c_{p_1}, c_{p_2}, c_ℓ, c_R)` when the rank is 3
    pub coefficients: Option<[Rational; 4]>,
}

impl HalfplaneRelation {
    /// Rank at most 3, and in a unique relation the two copies of `p` carry
    /// nonzero coefficients of opposite signs.
    pub fn holds(&self) -> bool {
        self.rank <= 3
            && self.coefficients.as_ref().is_none_or(|c| {
                !c[0].is_zero() && !c[1].is_zero() && c[0].signum() != c[1].signum()
            })
    }
}

/// `base` is the fan at the vertex keeping copy 1 of `p`; every other
/// vertex of the complex must have a single copy.
pub fn halfplane_relation(
    matrix: &CharMatrix,
    complex: &WedgeComplex,
    base: &PlaneFan,
    p: usize,
) -> Result<HalfplaneRelation, ShephardError> {
    let sig = &complex.signature;
    let m = sig.m();
    if base.len() != m
        || (1..=m).any(|i| sig.multiplicity(i) != if i == p { 2 } else { 1 })
    {
        return Err(ShephardError::NotWedged(p));
    }
    let ell = base.opposite_position(p).ok_or(ShephardError::NoOppositeRay(p))?;
    let fan = SimplicialFan::from_char_matrix(matrix, complex)?;
    let diagram = shephard_diagram(&fan)?;
    let v = base.ray(p);
    let side = |i: usize| v.det(base.ray(i)).signum();
    let a: Vec<usize> = (1..=m).filter(|&i| side(i) > 0).collect();
    let b: Vec<usize> = (1..=m).filter(|&i| side(i) < 0).collect();
    let point = |i: usize, k: usize| diagram.point(Label::new(i, k)).cloned();
    // the affine relation among A ∪ B, normalized positive on A
    let ab: Vec<QVector> = a
        .iter()
        .chain(&b)
        .map(|&i| point(i, 1))
        .collect::<Result<_, _>>()?;
    let lifted_ab = lift_columns(&ab)?;
    let kernel = kernel_basis(&lifted_ab);
    if kernel.cols() != 1 {
        return Err(ShephardError::InvalidFan(
            "points above and below the line do not have a unique affine relation".into(),
        ));
    }
    let mut y = kernel.column(0);
    if !y[0].is_positive() {
        y.iter_mut().for_each(|t| *t = -t.clone());
    }
    let s = y[..a.len()].iter().fold(Rational::zero(), |acc, v| acc + v);
    let dim = diagram.ambient_dim;
    let r: QVector = (0..dim)
        .map(|k| {
            a.iter()
                .enumerate()
                .map(|(j, _)| &y[j] * &ab[j][k])
                .fold(Rational::zero(), |acc, v| acc + v)
                / &s
        })
        .collect();
    let four = vec![point(p, 1)?, point(p, 2)?, point(ell, 1)?, r.clone()];
    let lifted = lift_columns(&four)?;
    let rank = lifted.rank();
    let rel = kernel_basis(&lifted);
    let coefficients = (rel.cols() == 1).then(|| {
        let c = rel.column(0);
        [c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()]
    });
    Ok(HalfplaneRelation {
        r,
        rank,
        coefficients,
    })
}

/// Matrix whose columns are `(p, 1)`.
fn lift_columns(points: &[QVector]) -> Result<QMatrix, ShephardError> {
    let dim = points.first().map_or(0, Vec::len);
    let cols: Vec<QVector> = points
        .iter()
        .map(|p| {
            let mut c = p.clone();
            c.push(Rational::one());
            c
        })
        .collect();
    Ok(QMatrix::from_columns(&cols, dim + 1)?)
}
