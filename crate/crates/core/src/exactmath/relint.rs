use num_traits::{One, Signed, Zero};

use super::lp::{strict_feasible, FeasibilityResult, StrictLinearSystem};
use super::matrix::{kernel_basis, QMatrix};
use super::rational::{dot, QVector, Rational};
use super::ExactError;

/// Outcome of a relative-interior intersection test.
///
/// When feasible, `barycentric[k]` holds strictly positive weights summing to
/// one that express the witness as a combination of the points of family `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelintResult {
    pub feasibility: FeasibilityResult,
    pub barycentric: Option<Vec<QVector>>,
}

impl RelintResult {
    pub fn is_feasible(&self) -> bool {
        self.feasibility.is_feasible()
    }

    pub fn witness(&self) -> Option<&QVector> {
        self.feasibility.witness.as_ref()
    }
}

/// How the barycentric coordinates of one family are expressed.
enum FamilyEncoding {
    /// affinely independent points: weights are `lambda_j(x) = L_j · (x, 1)`
    Independent {
        left_inverse: QMatrix,
        complement: Vec<QVector>,
    },
    /// general points: weights are explicit variables starting at `offset`
    Explicit { offset: usize, count: usize },
}

/// Decides whether the relative interiors of the convex hulls of all
/// `families` have a common point.
///
/// Uses `x ∈ relint conv(S)` iff `x = Σ λ_j p_j` with every `λ_j > 0` and
/// `Σ λ_j = 1`. For an affinely independent family the weights are unique
/// affine functions of `x`, so they are substituted instead of being carried
/// as variables.
pub fn relint_intersection(
    families: &[Vec<QVector>],
    dimension: usize,
) -> Result<RelintResult, ExactError> {
    for (k, family) in families.iter().enumerate() {
        if family.is_empty() {
            return Err(ExactError::EmptyFamily(k));
        }
        if let Some(p) = family.iter().find(|p| p.len() != dimension) {
            return Err(ExactError::DimensionMismatch {
                expected: dimension,
                found: p.len(),
            });
        }
    }

    let mut encodings = Vec::with_capacity(families.len());
    let mut extra = 0;
    for family in families {
        match independent_encoding(family, dimension)? {
            Some((left_inverse, complement)) => encodings.push(FamilyEncoding::Independent {
                left_inverse,
                complement,
            }),
            None => {
                encodings.push(FamilyEncoding::Explicit {
                    offset: dimension + extra,
                    count: family.len(),
                });
                extra += family.len();
            }
        }
    }

    let vars = dimension + extra;
    let mut sys = StrictLinearSystem::new(vars);
    let mut seen_strict = std::collections::BTreeSet::new();
    let mut seen_eq = std::collections::BTreeSet::new();
    for (family, enc) in families.iter().zip(&encodings) {
        match enc {
            FamilyEncoding::Independent {
                left_inverse,
                complement,
            } => {
                // (x, 1) must lie in the column span: N · (x, 1) = 0
                for row in complement {
                    let mut a = vec![Rational::zero(); vars];
                    a[..dimension].clone_from_slice(&row[..dimension]);
                    let b = -row[dimension].clone();
                    if seen_eq.insert((a.clone(), b.clone())) {
                        sys.equal(a, b);
                    }
                }
                // λ_j(x) > 0  <=>  -L_j[..d]·x < L_j[d]
                for j in 0..left_inverse.rows() {
                    let row = left_inverse.row(j);
                    let mut a = vec![Rational::zero(); vars];
                    for (i, v) in row[..dimension].iter().enumerate() {
                        a[i] = -v.clone();
                    }
                    let b = row[dimension].clone();
                    if seen_strict.insert((a.clone(), b.clone())) {
                        sys.less_than(a, b);
                    }
                }
            }
            FamilyEncoding::Explicit { offset, count } => {
                for i in 0..dimension {
                    let mut a = vec![Rational::zero(); vars];
                    a[i] = -Rational::one();
                    for (j, p) in family.iter().enumerate() {
                        a[offset + j] = p[i].clone();
                    }
                    sys.equal(a, Rational::zero());
                }
                let mut sum = vec![Rational::zero(); vars];
                for j in 0..*count {
                    sum[offset + j] = Rational::one();
                    let mut a = vec![Rational::zero(); vars];
                    a[offset + j] = -Rational::one();
                    sys.less_than(a, Rational::zero());
                }
                sys.equal(sum, Rational::one());
            }
        }
    }

    let result = strict_feasible(&sys)?;
    if !result.is_feasible() {
        return Ok(RelintResult {
            feasibility: result,
            barycentric: None,
        });
    }
    let full = result.witness.clone().expect("feasible witness");
    let x: QVector = full[..dimension].to_vec();
    let mut barycentric = Vec::with_capacity(families.len());
    for enc in &encodings {
        let weights = match enc {
            FamilyEncoding::Independent { left_inverse, .. } => {
                let mut xh = x.clone();
                xh.push(Rational::one());
                (0..left_inverse.rows())
                    .map(|j| dot(left_inverse.row(j), &xh))
                    .collect()
            }
            FamilyEncoding::Explicit { offset, count } => full[*offset..offset + count].to_vec(),
        };
        barycentric.push(weights);
    }
    Ok(RelintResult {
        feasibility: FeasibilityResult {
            verdict: result.verdict,
            witness: Some(x),
            slack: result.slack,
        },
        barycentric: Some(barycentric),
    })
}

/// For an affinely independent family returns a left inverse `L` of the
/// lifted point matrix `P = [p_j; 1]` and rows spanning the left null space of `P`.
fn independent_encoding(
    family: &[QVector],
    dimension: usize,
) -> Result<Option<(QMatrix, Vec<QVector>)>, ExactError> {
    let lifted: Vec<QVector> = family
        .iter()
        .map(|p| {
            let mut v = p.clone();
            v.push(Rational::one());
            v
        })
        .collect();
    let p = QMatrix::from_columns(&lifted, dimension + 1)?;
    if p.rank() < family.len() {
        return Ok(None);
    }
    let pt = p.transpose();
    let gram = pt.mul(&p)?;
    let inv = gram.inverse().expect("full column rank gram matrix is invertible");
    let left_inverse = inv.mul(&pt)?;
    let complement = kernel_basis(&pt).transpose().row_vectors();
    Ok(Some((left_inverse, complement)))
}

/// Barycentric weights certifying `x ∈ relint conv(points)`, if it is.
pub fn relint_contains(points: &[QVector], x: &QVector) -> Result<Option<QVector>, ExactError> {
    let r = relint_intersection(&[points.to_vec(), vec![x.clone()]], x.len())?;
    Ok(r.barycentric.map(|mut b| b.swap_remove(0)))
}

/// Checks a barycentric certificate: positive weights, summing to one, reproducing `x`.
pub fn verify_barycentric(points: &[QVector], weights: &[Rational], x: &[Rational]) -> bool {
    if points.len() != weights.len() || weights.iter().any(|w| !w.is_positive()) {
        return false;
    }
    let total = weights.iter().fold(Rational::zero(), |acc, v| acc + v);
    if !total.is_one() {
        return false;
    }
    (0..x.len()).all(|i| {
        let coord: Rational = points
            .iter()
            .zip(weights)
            .map(|(p, w)| &p[i] * w)
            .fold(Rational::zero(), |acc, v| acc + v);
        coord == x[i]
    })
}
