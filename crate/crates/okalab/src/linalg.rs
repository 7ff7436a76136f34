//! Dense vectors and matrices over an exact field, with deterministic
//! Gaussian elimination.
//!
//! Rank, kernel bases, solving and inversion all reduce to one reduced
//! row-echelon pass. The pivot rule is fixed — columns left to right, first
//! nonzero entry from the top — so kernel bases and solution witnesses are
//! reproducible. Everything here is exact: there is no tolerance anywhere,
//! which is the whole point of running the geometry over Q(i).

use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Field, Ring};

/// Shape violations when building or combining matrices.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("matrix rows must be nonempty and of equal length")]
    Ragged,
    #[error("dimension mismatch: {0}")]
    Mismatch(String),
}

impl ShapeError {
    pub fn code(&self) -> &'static str {
        match self {
            ShapeError::Ragged => "ragged_matrix",
            ShapeError::Mismatch(_) => "dimension_mismatch",
        }
    }
}

/// A fixed-length column of scalars.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector<T>(pub Vec<T>);

impl<T> Vector<T> {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.0.iter()
    }
}

impl<T: Ring> Vector<T> {
    pub fn zeros(len: usize) -> Self {
        Vector(vec![T::zero(); len])
    }

    pub fn is_zero_vector(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn dot(&self, other: &Self) -> T {
        assert_eq!(self.len(), other.len(), "dot of unequal lengths");
        self.0
            .iter()
            .zip(&other.0)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn scaled(&self, c: &T) -> Self {
        Vector(self.0.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "sum of unequal lengths");
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }
}

impl<T> Index<usize> for Vector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T> IndexMut<usize> for Vector<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

impl<T> From<Vec<T>> for Vector<T> {
    fn from(v: Vec<T>) -> Self {
        Vector(v)
    }
}

/// A rectangular matrix stored as rows. Both dimensions are at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matrix<T> {
    rows: Vec<Vector<T>>,
}

impl<T: Ring> Matrix<T> {
    pub fn from_rows(rows: Vec<Vector<T>>) -> Result<Self, ShapeError> {
        let cols = match rows.first() {
            Some(r) if !r.is_empty() => r.len(),
            _ => return Err(ShapeError::Ragged),
        };
        if rows.iter().any(|r| r.len() != cols) {
            return Err(ShapeError::Ragged);
        }
        Ok(Matrix { rows })
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1);
        let rows = (0..n)
            .map(|i| {
                let mut row = Vector::zeros(n);
                row[i] = T::one();
                row
            })
            .collect();
        Matrix { rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn row(&self, i: usize) -> &Vector<T> {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vector<T>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &T {
        &self.rows[i][j]
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.ncols())
            .map(|j| Vector((0..self.nrows()).map(|i| self.rows[i][j].clone()).collect()))
            .collect();
        Matrix { rows }
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self, ShapeError> {
        if self.ncols() != other.nrows() {
            return Err(ShapeError::Mismatch(format!(
                "{}x{} times {}x{}",
                self.nrows(),
                self.ncols(),
                other.nrows(),
                other.ncols()
            )));
        }
        let rows = (0..self.nrows())
            .map(|i| {
                Vector(
                    (0..other.ncols())
                        .map(|j| {
                            (0..self.ncols()).fold(T::zero(), |acc, k| {
                                acc + self.rows[i][k].clone() * other.rows[k][j].clone()
                            })
                        })
                        .collect(),
                )
            })
            .collect();
        Ok(Matrix { rows })
    }

    pub fn mul_vector(&self, v: &Vector<T>) -> Result<Vector<T>, ShapeError> {
        if self.ncols() != v.len() {
            return Err(ShapeError::Mismatch(format!(
                "{}x{} times vector of length {}",
                self.nrows(),
                self.ncols(),
                v.len()
            )));
        }
        Ok(Vector(self.rows.iter().map(|r| r.dot(v)).collect()))
    }

    pub fn is_identity(&self) -> bool {
        self.nrows() == self.ncols()
            && self.rows.iter().enumerate().all(|(i, row)| {
                row.iter()
                    .enumerate()
                    .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
            })
    }
}

/// Reduced row-echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon<T> {
    pub matrix: Matrix<T>,
    /// Pivot column of row `i`, for `i < rank`.
    pub pivot_cols: Vec<usize>,
}

impl<T: Field> Matrix<T> {
    /// Reduced row-echelon form. Pivots are chosen deterministically:
    /// columns left to right, first nonzero entry scanning down.
    pub fn echelon(&self) -> Echelon<T> {
        let mut m = self.rows.clone();
        let (nrows, ncols) = (self.nrows(), self.ncols());
        let mut pivot_cols = Vec::new();
        let mut pivot_row = 0;
        for col in 0..ncols {
            if pivot_row == nrows {
                break;
            }
            let Some(src) = (pivot_row..nrows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(pivot_row, src);
            let inv = m[pivot_row][col].inv_checked().expect("nonzero pivot");
            m[pivot_row] = m[pivot_row].scaled(&inv);
            for r in 0..nrows {
                if r != pivot_row && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    let scaled = m[pivot_row].scaled(&factor);
                    m[r] = Vector(
                        m[r].iter()
                            .zip(scaled.iter())
                            .map(|(a, b)| a.clone() - b.clone())
                            .collect(),
                    );
                }
            }
            pivot_cols.push(col);
            pivot_row += 1;
        }
        Echelon {
            matrix: Matrix { rows: m },
            pivot_cols,
        }
    }

    /// Exact rank.
    pub fn rank(&self) -> usize {
        self.echelon().pivot_cols.len()
    }

    /// Deterministic basis of the right kernel `{v : m·v = 0}`. One basis
    /// vector per free column, unit in the free coordinate.
    pub fn kernel_basis(&self) -> Vec<Vector<T>> {
        let ech = self.echelon();
        let ncols = self.ncols();
        let mut basis = Vec::new();
        for free in 0..ncols {
            if ech.pivot_cols.contains(&free) {
                continue;
            }
            let mut v = Vector::zeros(ncols);
            v[free] = T::one();
            for (row, &pcol) in ech.pivot_cols.iter().enumerate() {
                v[pcol] = -ech.matrix.rows[row][free].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One exact solution of `m·x = b` (free variables set to zero), or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, b: &Vector<T>) -> Result<Option<Vector<T>>, ShapeError> {
        if b.len() != self.nrows() {
            return Err(ShapeError::Mismatch(format!(
                "matrix has {} rows but right-hand side has length {}",
                self.nrows(),
                b.len()
            )));
        }
        let ncols = self.ncols();
        let augmented = Matrix::from_rows(
            self.rows
                .iter()
                .zip(b.iter())
                .map(|(row, bi)| {
                    let mut entries = row.0.clone();
                    entries.push(bi.clone());
                    Vector(entries)
                })
                .collect(),
        )
        .expect("augmented rows are rectangular");
        let ech = augmented.echelon();
        if ech.pivot_cols.contains(&ncols) {
            return Ok(None); // pivot in the constant column: inconsistent
        }
        let mut x = Vector::zeros(ncols);
        for (row, &pcol) in ech.pivot_cols.iter().enumerate() {
            x[pcol] = ech.matrix.rows[row][ncols].clone();
        }
        Ok(Some(x))
    }

    /// Exact inverse, or `None` when singular. Non-square input is a usage
    /// error.
    pub fn inverse(&self) -> Result<Option<Matrix<T>>, ShapeError> {
        let n = self.nrows();
        if n != self.ncols() {
            return Err(ShapeError::Mismatch(format!(
                "inverse of non-square {}x{} matrix",
                n,
                self.ncols()
            )));
        }
        let augmented = Matrix::from_rows(
            self.rows
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let mut entries = row.0.clone();
                    entries.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
                    Vector(entries)
                })
                .collect(),
        )
        .expect("augmented rows are rectangular");
        let ech = augmented.echelon();
        if ech.pivot_cols != (0..n).collect::<Vec<_>>() {
            return Ok(None);
        }
        let rows = ech
            .matrix
            .rows
            .iter()
            .map(|row| Vector(row.0[n..].to_vec()))
            .collect();
        Ok(Some(Matrix { rows }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::GaussianRational;
    use num_traits::Zero;

    type Q = GaussianRational;
    type MatrixQ = Matrix<Q>;
    type VectorQ = Vector<Q>;

    fn v(entries: &[i64]) -> VectorQ {
        Vector(entries.iter().map(|&x| Q::from_int(x)).collect())
    }

    fn m(rows: &[&[i64]]) -> MatrixQ {
        Matrix::from_rows(rows.iter().map(|r| v(r)).collect()).unwrap()
    }

    /// Brute-force rank oracle: the largest size of a square submatrix with
    /// nonzero determinant, determinants by Laplace expansion. Independent of
    /// the elimination pipeline; only usable for small matrices.
    fn minor_rank(mat: &MatrixQ) -> usize {
        fn det(rows: &[Vec<Q>]) -> Q {
            let n = rows.len();
            if n == 1 {
                return rows[0][0].clone();
            }
            let mut acc = Q::zero();
            for (j, top) in rows[0].iter().enumerate() {
                if top.is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Q>> = rows[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = top.clone() * det(&minor);
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }

        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            let mut cur = Vec::new();
            fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if cur.len() == k {
                    out.push(cur.clone());
                    return;
                }
                for i in start..n {
                    cur.push(i);
                    rec(i + 1, n, k, cur, out);
                    cur.pop();
                }
            }
            rec(0, n, k, &mut cur, &mut out);
            out
        }

        let max = mat.nrows().min(mat.ncols());
        for size in (1..=max).rev() {
            for rsel in subsets(mat.nrows(), size) {
                for csel in subsets(mat.ncols(), size) {
                    let sub: Vec<Vec<Q>> = rsel
                        .iter()
                        .map(|&i| csel.iter().map(|&j| mat.entry(i, j).clone()).collect())
                        .collect();
                    if !det(&sub).is_zero() {
                        return size;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn rank_identity() {
        assert_eq!(MatrixQ::identity(3).rank(), 3);
    }

    #[test]
    fn rank_zero_matrix() {
        assert_eq!(m(&[&[0, 0, 0, 0, 0], &[0, 0, 0, 0, 0]]).rank(), 0);
    }

    #[test]
    fn rank_unit_square_rows() {
        // frozen against the minor-expansion oracle below
        let mat = m(&[&[1, 0, 0], &[0, 1, 0], &[1, 0, -1], &[0, 1, -1]]);
        assert_eq!(minor_rank(&mat), 3);
        assert_eq!(mat.rank(), 3);
    }

    #[test]
    fn rank_matches_minor_oracle_on_grid() {
        // deterministic sweep of small matrices with entries in {-1,0,1,2}
        let vals = [-1i64, 0, 1, 2];
        for a in vals {
            for b in vals {
                for c in vals {
                    for d in vals {
                        let mat = m(&[&[a, b], &[c, d], &[a + c, b + d]]);
                        assert_eq!(mat.rank(), minor_rank(&mat));
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(MatrixQ::identity(3).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_chain_rows() {
        let mat = m(&[
            &[1, -1, 0, 0, 0],
            &[0, 1, -1, 0, 0],
            &[0, 0, 1, -1, 0],
        ]);
        let basis = mat.kernel_basis();
        assert_eq!(basis, vec![v(&[1, 1, 1, 1, 0]), v(&[0, 0, 0, 0, 1])]);
        for vec in &basis {
            assert!(mat.mul_vector(vec).unwrap().is_zero_vector());
        }
    }

    #[test]
    fn kernel_single_row() {
        let mat = m(&[&[1, 1]]);
        assert_eq!(mat.kernel_basis(), vec![v(&[-1, 1])]);
    }

    #[test]
    fn rank_nullity() {
        let mat = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(mat.rank() + mat.kernel_basis().len(), mat.ncols());
    }

    #[test]
    fn solve_scalar() {
        let mat = m(&[&[2]]);
        let x = mat.solve(&v(&[1])).unwrap().unwrap();
        assert_eq!(x, Vector(vec![Q::from_ratio(1, 2)]));
    }

    #[test]
    fn solve_inconsistent() {
        let mat = m(&[&[1, 1], &[1, 1]]);
        assert_eq!(mat.solve(&v(&[0, 1])).unwrap(), None);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let mat = m(&[&[1, 1]]);
        assert!(mat.solve(&v(&[1, 2])).is_err());
    }

    #[test]
    fn inverse_identity() {
        let id = MatrixQ::identity(4);
        assert_eq!(id.inverse().unwrap().unwrap(), id);
    }

    #[test]
    fn inverse_unitriangular() {
        let mat = m(&[&[1, 1], &[0, 1]]);
        let inv = mat.inverse().unwrap().unwrap();
        assert_eq!(inv, m(&[&[1, -1], &[0, 1]]));
        assert!(inv.mat_mul(&mat).unwrap().is_identity());
    }

    #[test]
    fn inverse_singular() {
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse().unwrap(), None);
    }

    #[test]
    fn inverse_non_square_is_usage_error() {
        assert!(m(&[&[1, 2, 3], &[4, 5, 6]]).inverse().is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows = vec![v(&[1, 2]), v(&[1])];
        assert_eq!(MatrixQ::from_rows(rows), Err(ShapeError::Ragged));
        assert_eq!(MatrixQ::from_rows(vec![]), Err(ShapeError::Ragged));
    }
}
