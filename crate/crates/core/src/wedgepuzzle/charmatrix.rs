use std::collections::BTreeMap;

use num_traits::Signed;

use crate::exactmath::integer_det;
use crate::planefan::{LatticeVector2, PlaneFan};

use super::{Label, PuzzleError, WedgeComplex, WedgeSignature};

/// Integer matrix with one labeled column per vertex of a wedged polygon.
/// Columns are kept in label order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharMatrix {
    n: usize,
    labels: Vec<Label>,
    columns: Vec<Vec<i64>>,
}

impl CharMatrix {
    pub fn new(n: usize, columns: Vec<(Label, Vec<i64>)>) -> Result<Self, PuzzleError> {
        let mut map = BTreeMap::new();
        for (label, v) in columns {
            if v.len() != n {
                return Err(PuzzleError::InvalidMatrix(format!(
                    "column {label} has length {}, expected {n}",
                    v.len()
                )));
            }
            if map.insert(label, v).is_some() {
                return Err(PuzzleError::InvalidMatrix(format!("duplicate column {label}")));
            }
        }
        let (labels, columns) = map.into_iter().unzip();
        Ok(Self { n, labels, columns })
    }

    /// The `2 × m` matrix of a plane fan, columns labeled `i_1`.
    pub fn from_fan(fan: &PlaneFan) -> Self {
        Self {
            n: 2,
            labels: (1..=fan.len()).map(|i| Label::new(i, 1)).collect(),
            columns: fan.rays().iter().map(|v| vec![v.x, v.y]).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn columns(&self) -> &[Vec<i64>] {
        &self.columns
    }

    pub fn labeled_columns(&self) -> impl Iterator<Item = (Label, &[i64])> {
        self.labels
            .iter()
            .copied()
            .zip(self.columns.iter().map(Vec::as_slice))
    }

    pub fn column(&self, label: Label) -> Option<&[i64]> {
        self.labels
            .binary_search(&label)
            .ok()
            .map(|k| self.columns[k].as_slice())
    }

    /// The multiplicities implied by the labels, which must be `i_1..i_{j_i}`
    /// for every `i` in `1..=m`.
    pub fn signature(&self) -> Result<WedgeSignature, PuzzleError> {
        let m = self.labels.last().map_or(0, |l| l.vertex);
        let mut j = vec![0; m];
        for l in &self.labels {
            j[l.vertex - 1] += 1;
        }
        let sig = WedgeSignature::new(j).map_err(|e| PuzzleError::LabelMismatch(e.to_string()))?;
        if sig.labels() != self.labels {
            return Err(PuzzleError::LabelMismatch(
                "copies must be numbered consecutively from 1".into(),
            ));
        }
        Ok(sig)
    }

    /// Reads a `2 × m` matrix with one column per vertex as a plane fan,
    /// mirroring a clockwise column order.
    pub fn to_plane_fan(&self) -> Result<PlaneFan, PuzzleError> {
        if self.n != 2 {
            return Err(PuzzleError::InvalidMatrix(format!(
                "a plane fan needs 2 rows, found {}",
                self.n
            )));
        }
        let vertices: Vec<usize> = self.labels.iter().map(|l| l.vertex).collect();
        if vertices != (1..=vertices.len()).collect::<Vec<_>>() {
            return Err(PuzzleError::InvalidMatrix(
                "a plane fan needs exactly one column per vertex".into(),
            ));
        }
        let rays = self
            .columns
            .iter()
            .map(|c| LatticeVector2::new(c[0], c[1]))
            .collect();
        Ok(PlaneFan::from_oriented_rays(rays)?)
    }

    /// Quotient by the ray of column `label`: unimodular row operations turn
    /// that column into a signed unit vector, then its row and the column are
    /// removed. Labels of the remaining columns are kept as they are.
    pub(crate) fn quotient(&self, label: Label) -> Result<Self, PuzzleError> {
        let c = self
            .labels
            .binary_search(&label)
            .map_err(|_| PuzzleError::InvalidLabel(label.to_string()))?;
        let mut rows: Vec<Vec<i128>> = (0..self.n)
            .map(|r| self.columns.iter().map(|col| col[r] as i128).collect())
            .collect();
        let pivot = loop {
            let nonzero: Vec<usize> = (0..self.n).filter(|&r| rows[r][c] != 0).collect();
            let Some(&p) = nonzero.iter().min_by_key(|&&r| rows[r][c].abs()) else {
                return Err(PuzzleError::InvalidMatrix(format!("column {label} is zero")));
            };
            if nonzero.len() == 1 {
                break p;
            }
            for &r in &nonzero {
                if r != p {
                    let factor = rows[r][c] / rows[p][c];
                    let pivot_row = rows[p].clone();
                    for (x, y) in rows[r].iter_mut().zip(pivot_row) {
                        *x -= factor * y;
                    }
                }
            }
        };
        if rows[pivot][c].abs() != 1 {
            return Err(PuzzleError::InvalidMatrix(format!(
                "column {label} is not primitive"
            )));
        }
        rows.remove(pivot);
        let mut columns = Vec::with_capacity(self.columns.len() - 1);
        let mut labels = Vec::with_capacity(self.labels.len() - 1);
        for (k, &l) in self.labels.iter().enumerate() {
            if k == c {
                continue;
            }
            let col = rows
                .iter()
                .map(|row| {
                    i64::try_from(row[k])
                        .map_err(|_| PuzzleError::InvalidMatrix("entry overflow".into()))
                })
                .collect::<Result<Vec<i64>, _>>()?;
            labels.push(l);
            columns.push(col);
        }
        Ok(Self {
            n: self.n - 1,
            labels,
            columns,
        })
    }
}

/// True iff every facet of `k` selects a square submatrix of determinant ±1.
pub fn check_nonsingular(m: &CharMatrix, k: &WedgeComplex) -> Result<bool, PuzzleError> {
    if m.labels != k.vertices {
        return Err(PuzzleError::LabelMismatch(format!(
            "matrix has {} columns, complex has {} vertices",
            m.labels.len(),
            k.vertices.len()
        )));
    }
    for facet in &k.facets {
        if facet.len() != m.n {
            return Ok(false);
        }
        let cols: Vec<&[i64]> = facet
            .iter()
            .map(|&l| m.column(l).expect("labels checked"))
            .collect();
        let rows: Vec<Vec<i64>> = (0..m.n).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        let det = integer_det(&rows).expect("square by construction");
        if !det.abs().is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Projection at copy `label`: the quotient by its column, giving a matrix
/// over the wedge with that copy removed. The remaining copies of the same
/// vertex are renumbered consecutively.
pub fn projection(m: &CharMatrix, label: Label) -> Result<CharMatrix, PuzzleError> {
    let siblings = m.labels.iter().filter(|l| l.vertex == label.vertex).count();
    if m.column(label).is_none() {
        return Err(PuzzleError::InvalidLabel(label.to_string()));
    }
    if siblings < 2 {
        return Err(PuzzleError::NotWedged(label));
    }
    let mut q = m.quotient(label)?;
    for l in q.labels.iter_mut() {
        if l.vertex == label.vertex && l.copy > label.copy {
            l.copy -= 1;
        }
    }
    Ok(q)
}

/// The plane fan at a vertex `alpha` of `G(J)`: quotient by every copy
/// except `alpha_i` of each vertex `i`.
pub fn fan_at(m: &CharMatrix, alpha: &[usize]) -> Result<PlaneFan, PuzzleError> {
    let dropped: Vec<Label> = m
        .labels
        .iter()
        .copied()
        .filter(|l| alpha.get(l.vertex - 1).is_some_and(|&a| a != l.copy))
        .collect();
    let mut q = m.clone();
    for l in dropped {
        q = q.quotient(l)?;
    }
    if q.labels.len() != alpha.len() {
        return Err(PuzzleError::LabelMismatch(format!(
            "vertex {alpha:?} does not select one copy per polygon vertex"
        )));
    }
    for l in q.labels.iter_mut() {
        l.copy = 1;
    }
    q.to_plane_fan()
}
