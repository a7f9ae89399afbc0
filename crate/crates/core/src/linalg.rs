//! Dense exact linear algebra over the rationals.
//!
//! Everything downstream (Lefschetz decompositions, cohomology ranks,
//! pairing nondegeneracy) reduces to row reduction of small matrices with
//! `Scalar` entries. Pivoting is first-nonzero, so results are
//! deterministic for a fixed row/column order.

use num::traits::{One, Zero};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<Scalar>]) -> Self {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row length mismatch");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..self.cols {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !v[j].is_zero() {
                        acc += a.clone() * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul_mat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)].clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a.clone() * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b.clone();
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b.clone();
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form, returning `(rref, pivot_columns)`.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0usize;
        for col in 0..m.cols {
            let Some(pivot_row) = (rank..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(rank, pivot_row);
            let inv = {
                let p = m[(rank, col)].clone();
                Scalar::one() / p
            };
            for j in col..m.cols {
                let v = m[(rank, j)].clone() * &inv;
                m[(rank, j)] = v;
            }
            for r in 0..m.rows {
                if r == rank || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for j in col..m.cols {
                    let delta = m[(rank, j)].clone() * &factor;
                    m[(r, j)] -= delta;
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column, in column
    /// order. Free variable set to 1, others to 0.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut out = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(row, free)].clone();
            }
            out.push(v);
        }
        out
    }

    /// Transposes the matrix.
    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

/// Precomputed solver for `A x = y` with a fixed `A`, reused across many
/// right-hand sides. Stores the row-reduced augmented system.
#[derive(Debug, Clone)]
pub struct Solver {
    rref: Matrix,
    transform: Matrix,
    pivots: Vec<usize>,
    rows: usize,
    cols: usize,
}

impl Solver {
    pub fn new(a: &Matrix) -> Self {
        // Row-reduce [A | I]; the right block records the row operations.
        let mut aug = Matrix::zeros(a.rows, a.cols + a.rows);
        for i in 0..a.rows {
            for j in 0..a.cols {
                aug[(i, j)] = a[(i, j)].clone();
            }
            aug[(i, a.cols + i)] = Scalar::one();
        }
        let (red, pivots_all) = aug.rref();
        let pivots: Vec<usize> = pivots_all.into_iter().filter(|&c| c < a.cols).collect();
        let mut rref = Matrix::zeros(a.rows, a.cols);
        let mut transform = Matrix::zeros(a.rows, a.rows);
        for i in 0..a.rows {
            for j in 0..a.cols {
                rref[(i, j)] = red[(i, j)].clone();
            }
            for j in 0..a.rows {
                transform[(i, j)] = red[(i, a.cols + j)].clone();
            }
        }
        Solver {
            rref,
            transform,
            pivots,
            rows: a.rows,
            cols: a.cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Solves `A x = y`, free variables pinned to zero. `None` when `y` is
    /// outside the column span.
    pub fn solve(&self, y: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(y.len(), self.rows, "rhs length mismatch");
        let z = self.transform.mul_vec(y);
        // rows beyond the rank must read zero for consistency
        if z[self.rank()..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &col) in self.pivots.iter().enumerate() {
            x[col] = z[row].clone();
        }
        // With free variables at zero the residual is only zero when the
        // pivot columns alone span y; correct whenever A has full column
        // rank, which is how every solver in this crate is used.
        if self.rank() < self.cols {
            let reconstructed = self.rref.mul_vec(&x);
            if reconstructed != z {
                return None;
            }
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn m(rows: &[&[i64]]) -> Matrix {
        let cols = rows[0].len();
        Matrix::from_rows(
            cols,
            &rows
                .iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn rank_and_kernel_of_singular_matrix() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let kernel = a.kernel_basis();
        assert_eq!(kernel.len(), 1);
        for v in &kernel {
            assert!(a.mul_vec(v).iter().all(|s| s.is_zero()));
        }
    }

    #[test]
    fn solver_finds_exact_solutions() {
        let a = m(&[&[2, 0], &[0, 3], &[2, 3]]);
        let solver = Solver::new(&a);
        let x = solver.solve(&[int(4), int(9), int(13)]).unwrap();
        assert_eq!(x, vec![int(2), int(3)]);
        assert!(solver.solve(&[int(1), int(0), int(0)]).is_none());
    }

    #[test]
    fn solver_detects_inconsistency_with_free_columns() {
        let a = m(&[&[1, 1], &[2, 2]]);
        let solver = Solver::new(&a);
        assert!(solver.solve(&[int(1), int(2)]).is_some());
        assert!(solver.solve(&[int(1), int(3)]).is_none());
    }

    #[test]
    fn identity_round_trip() {
        let a = m(&[&[1, 2], &[3, 5]]);
        let solver = Solver::new(&a);
        for rhs in [[int(1), int(0)], [int(0), int(1)], [int(7), int(-2)]] {
            let x = solver.solve(&rhs).unwrap();
            assert_eq!(a.mul_vec(&x), rhs.to_vec());
        }
    }
}
