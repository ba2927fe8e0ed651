use std::fmt;

use dashu_int::IBig;
use num_traits::{One, Zero};

use super::rational::{q, recip, Rational};
use super::ExactError;

/// Dense row-major rational matrix. Zero rows or columns are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self, ExactError> {
        if data.len() != rows * cols {
            return Err(ExactError::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows; `cols` is only consulted when there are no rows.
    pub fn from_rows(rows: &[Vec<Rational>], cols: usize) -> Result<Self, ExactError> {
        let cols = rows.first().map_or(cols, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(ExactError::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row.iter().cloned());
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, ExactError> {
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| q(v)).collect())
            .collect();
        Self::from_rows(&rows, 0)
    }

    pub fn from_columns(columns: &[Vec<Rational>], rows: usize) -> Result<Self, ExactError> {
        let rows = columns.first().map_or(rows, |c| c.len());
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(ExactError::DimensionMismatch {
                    expected: rows,
                    found: col.len(),
                });
            }
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix, ExactError> {
        if self.cols != other.rows {
            return Err(ExactError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c) + a * b;
                        out.set(r, c, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn hstack(&self, other: &QMatrix) -> Result<QMatrix, ExactError> {
        if self.rows != other.rows {
            return Err(ExactError::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        Ok(out)
    }

    pub fn select_columns(&self, columns: &[usize]) -> QMatrix {
        let mut out = Self::zeros(self.rows, columns.len());
        for r in 0..self.rows {
            for (j, &c) in columns.iter().enumerate() {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(lead, p);
            let inv = recip(m.get(lead, c));
            for k in c..m.cols {
                let v = m.get(lead, k) * &inv;
                m.set(lead, k, v);
            }
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let factor = m.get(r, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for k in c..m.cols {
                    let pk = m.get(lead, k);
                    if pk.is_zero() {
                        continue;
                    }
                    let v = m.get(r, k) - &factor * pk;
                    m.set(r, k, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&QMatrix::identity(n)).ok()?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(r.select_columns(&cols))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// Basis of the right kernel, one basis vector per column.
pub fn kernel_basis(m: &QMatrix) -> QMatrix {
    let (r, pivots) = m.rref();
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    let mut k = QMatrix::zeros(m.cols(), free.len());
    for (j, &f) in free.iter().enumerate() {
        k.set(f, j, Rational::one());
        for (row, &p) in pivots.iter().enumerate() {
            let v = -r.get(row, f).clone();
            k.set(p, j, v);
        }
    }
    k
}

/// Kernel basis of `m` whose last column is the all-ones vector.
///
/// The remaining columns are the earliest kernel basis vectors that stay
/// independent of the ones column. Requires zero row sums.
pub fn kernel_with_ones(m: &QMatrix) -> Result<QMatrix, ExactError> {
    let n = m.cols();
    let ones = QMatrix::from_columns(&[vec![Rational::one(); n]], n)?;
    if !m.mul(&ones)?.is_zero() {
        return Err(ExactError::PreconditionViolated(
            "row sums are not zero; the all-ones vector is not in the kernel".into(),
        ));
    }
    let k = kernel_basis(m);
    let candidates = ones.hstack(&k)?;
    let (_, pivots) = candidates.rref();
    // pivot 0 is always the ones column
    let mut chosen: Vec<usize> = pivots.into_iter().filter(|&c| c != 0).collect();
    chosen.push(0);
    Ok(candidates.select_columns(&chosen))
}

/// True iff the two matrices have the same column space.
pub fn same_column_span(a: &QMatrix, b: &QMatrix) -> bool {
    if a.rows() != b.rows() {
        return false;
    }
    let ra = a.rank();
    ra == b.rank() && a.hstack(b).map(|s| s.rank() == ra).unwrap_or(false)
}

fn check_square(rows: &[Vec<i64>]) -> Result<usize, ExactError> {
    let n = rows.len();
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(ExactError::NotSquare {
            rows: n,
            cols: r.len(),
        });
    }
    Ok(n)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn integer_det(rows: &[Vec<i64>]) -> Result<IBig, ExactError> {
    check_square(rows)?;
    if let Some(d) = det_i128(rows) {
        return Ok(IBig::from(d));
    }
    let mut a: Vec<Vec<IBig>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| IBig::from(v)).collect())
        .collect();
    Ok(bareiss(&mut a))
}

fn bareiss(a: &mut [Vec<IBig>]) -> IBig {
    let n = a.len();
    if n == 0 {
        return IBig::ONE;
    }
    let mut sign = IBig::ONE;
    let mut prev = IBig::ONE;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return IBig::ZERO;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Bareiss over `i128`; `None` on overflow or a non-square input.
pub(crate) fn det_i128(rows: &[Vec<i64>]) -> Option<i128> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return None;
    }
    if n == 0 {
        return Some(1);
    }
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut sign: i128 = 1;
    let mut prev: i128 = 1;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let p = (k + 1..n).find(|&r| a[r][k] != 0)?;
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let lhs = a[i][j].checked_mul(a[k][k])?;
                let rhs = a[i][k].checked_mul(a[k][j])?;
                a[i][j] = lhs.checked_sub(rhs)? / prev;
            }
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

/// Affine rank (dimension of the affine hull) of a point set; -1 for the empty set.
pub fn affine_dimension(points: &[Vec<Rational>]) -> isize {
    let Some(first) = points.first() else {
        return -1;
    };
    let diffs: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    if diffs.is_empty() || first.is_empty() {
        return 0;
    }
    QMatrix::from_rows(&diffs, first.len())
        .map(|m| m.rank() as isize)
        .unwrap_or(0)
}
