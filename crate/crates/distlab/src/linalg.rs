//! Dense complex matrices with rank and nullspace computation, generic over
//! the floating-point scalar.

use crate::scalar::{Scalar, C};
use num_traits::{One, Zero};

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<F: Scalar> {
    pub nrows: usize,
    pub ncols: usize,
    data: Vec<C<F>>,
}

impl<F: Scalar> Mat<F> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Mat {
            nrows,
            ncols,
            data: vec![C::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C<F>>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols);
            data.extend(r);
        }
        Mat { nrows, ncols, data }
    }

    pub fn row(&self, i: usize) -> &[C<F>] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn matmul(&self, rhs: &Mat<F>) -> Mat<F> {
        assert_eq!(self.ncols, rhs.nrows);
        let mut out = Mat::zeros(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.ncols {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[C<F>]) -> Vec<C<F>> {
        assert_eq!(self.ncols, v.len());
        (0..self.nrows)
            .map(|i| {
                let mut acc = C::zero();
                for j in 0..self.ncols {
                    acc = acc + self[(i, j)] * v[j];
                }
                acc
            })
            .collect()
    }

    pub fn add_scaled(&mut self, rhs: &Mat<F>, c: C<F>) {
        assert_eq!(self.data.len(), rhs.data.len());
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a = *a + *b * c;
        }
    }

    pub fn scale(&mut self, c: C<F>) {
        for a in self.data.iter_mut() {
            *a = *a * c;
        }
    }

    pub fn trace(&self) -> C<F> {
        assert_eq!(self.nrows, self.ncols);
        (0..self.nrows).fold(C::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn pow(&self, mut e: u64) -> Mat<F> {
        assert_eq!(self.nrows, self.ncols);
        let mut base = self.clone();
        let mut acc = Mat::identity(self.nrows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&base);
            }
            base = base.matmul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn max_abs_diff(&self, rhs: &Mat<F>) -> F {
        assert_eq!(self.data.len(), rhs.data.len());
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(F::zero(), F::max)
    }

    /// Rank by Gaussian elimination with partial pivoting.
    pub fn rank(&self, tol: F) -> usize {
        let mut m = self.clone();
        m.row_echelon(tol).len()
    }

    /// Basis of the right nullspace `{x : A x = 0}`.
    pub fn nullspace(&self, tol: F) -> Vec<Vec<C<F>>> {
        let mut m = self.clone();
        let pivots = m.row_echelon(tol);
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let free_cols: Vec<usize> = (0..self.ncols)
            .filter(|c| !pivot_cols.contains(c))
            .collect();
        let mut basis = Vec::with_capacity(free_cols.len());
        for &fc in &free_cols {
            let mut x = vec![C::zero(); self.ncols];
            x[fc] = C::one();
            // Back-substitute in reverse pivot order.
            for &(r, pc) in pivots.iter().rev() {
                let mut acc: C<F> = C::zero();
                for j in (pc + 1)..self.ncols {
                    acc = acc + m[(r, j)] * x[j];
                }
                x[pc] = -acc / m[(r, pc)];
            }
            basis.push(x);
        }
        basis
    }

    /// Reduce in place; returns `(row, col)` of each pivot in order.
    fn row_echelon(&mut self, tol: F) -> Vec<(usize, usize)> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == self.nrows {
                break;
            }
            let (imax, vmax) = (r..self.nrows)
                .map(|i| (i, self[(i, c)].norm()))
                .fold((r, F::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
            if vmax <= tol {
                for i in r..self.nrows {
                    self[(i, c)] = C::zero();
                }
                continue;
            }
            self.swap_rows(r, imax);
            let one: C<F> = C::one();
            let inv_p: C<F> = one / self[(r, c)];
            for i in (r + 1)..self.nrows {
                let f: C<F> = self[(i, c)] * inv_p;
                if f.is_zero() {
                    continue;
                }
                self[(i, c)] = C::zero();
                for j in (c + 1)..self.ncols {
                    let v = self[(r, j)] * f;
                    self[(i, j)] = self[(i, j)] - v;
                }
            }
            pivots.push((r, c));
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.ncols {
            self.data.swap(a * self.ncols + j, b * self.ncols + j);
        }
    }
}

impl<F: Scalar> std::ops::Index<(usize, usize)> for Mat<F> {
    type Output = C<F>;
    fn index(&self, (i, j): (usize, usize)) -> &C<F> {
        &self.data[i * self.ncols + j]
    }
}

impl<F: Scalar> std::ops::IndexMut<(usize, usize)> for Mat<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<F> {
        &mut self.data[i * self.ncols + j]
    }
}
