//! Dense exact linear algebra over the Gaussian rationals.

use num_traits::{One, Zero};

use crate::number::GaussRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussRational>,
}

/// Reduced row-echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![GaussRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GaussRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussRational>>) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Self { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[GaussRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, col)].inv().expect("nonzero pivot");
            for j in col..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i == r || m[(i, col)].is_zero() {
                    continue;
                }
                let f = m[(i, col)].clone();
                for j in col..m.cols {
                    let t = &f * &m[(r, j)];
                    m[(i, j)] -= &t;
                }
            }
            pivots.push(col);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    pub fn determinant(&self) -> GaussRational {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.clone();
        let mut det = GaussRational::one();
        for col in 0..m.cols {
            let Some(p) = (col..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                return GaussRational::zero();
            };
            if p != col {
                m.swap_rows(col, p);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det *= &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for i in col + 1..m.rows {
                if m[(i, col)].is_zero() {
                    continue;
                }
                let f = &m[(i, col)] * &inv;
                for j in col..m.cols {
                    let t = &f * &m[(col, j)];
                    m[(i, j)] -= &t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = GaussRational::one();
        }
        let e = aug.echelon();
        if e.pivots.len() < n || e.pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = e.matrix[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    pub fn mul_vec(&self, v: &[GaussRational]) -> Vec<GaussRational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(GaussRational::zero(), |acc, (a, b)| &acc + &(a * b)))
            .collect()
    }

    /// Indices of the first maximal set of linearly independent rows, scanning
    /// top to bottom.
    pub fn greedy_row_basis(&self) -> Vec<usize> {
        let mut basis: Vec<Vec<GaussRational>> = Vec::new();
        let mut pivot_cols: Vec<usize> = Vec::new();
        let mut chosen = Vec::new();
        for i in 0..self.rows {
            let mut v = self.row(i).to_vec();
            for (b, &pc) in basis.iter().zip(&pivot_cols) {
                if v[pc].is_zero() {
                    continue;
                }
                let f = v[pc].clone();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &(&f * y);
                }
            }
            if let Some(pc) = v.iter().position(|x| !x.is_zero()) {
                let inv = v[pc].inv().expect("nonzero");
                for x in v.iter_mut() {
                    *x = &*x * &inv;
                }
                basis.push(v);
                pivot_cols.push(pc);
                chosen.push(i);
            }
        }
        chosen
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|&i| cols.iter().map(|&j| self[(i, j)].clone()).collect()).collect())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = GaussRational;
    fn index(&self, (i, j): (usize, usize)) -> &GaussRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GaussRational {
        &mut self.data[i * self.cols + j]
    }
}

/// Outcome of solving `A·x = b`.
#[derive(Debug)]
pub(crate) enum LinearSolution {
    Inconsistent,
    /// A particular solution (free variables set to zero) and, per unknown,
    /// whether every solution agrees on it.
    Solved {
        x: Vec<GaussRational>,
        determined: Vec<bool>,
    },
}

pub(crate) fn solve_linear(a: &Matrix, b: &[GaussRational]) -> LinearSolution {
    assert_eq!(a.rows(), b.len());
    let n = a.cols();
    let mut aug = Matrix::zeros(a.rows(), n + 1);
    for i in 0..a.rows() {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let e = aug.echelon();
    if e.pivots.last() == Some(&n) {
        return LinearSolution::Inconsistent;
    }
    let mut x = vec![GaussRational::zero(); n];
    let mut determined = vec![false; n];
    let is_pivot: Vec<bool> = (0..n).map(|j| e.pivots.contains(&j)).collect();
    for (r, &pc) in e.pivots.iter().enumerate() {
        x[pc] = e.matrix[(r, n)].clone();
        determined[pc] = (0..n).all(|j| is_pivot[j] || e.matrix[(r, j)].is_zero());
    }
    LinearSolution::Solved { x, determined }
}
