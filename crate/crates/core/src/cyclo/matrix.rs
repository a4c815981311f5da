use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex;

use super::field::CyclotomicField;
use super::modular::rank_mod;
use super::num::CycNum;
use crate::error::{GesError, Result};
use crate::scalar::{ExactScalar, Real};

/// Dense row-major matrix over a single cyclotomic field.
#[derive(Clone, Debug, PartialEq)]
pub struct CycMatrix<T> {
    field: Arc<CyclotomicField>,
    rows: usize,
    cols: usize,
    entries: Vec<CycNum<T>>,
}

impl<T: ExactScalar> CycMatrix<T> {
    pub fn new(field: &Arc<CyclotomicField>, rows: usize, cols: usize, entries: Vec<CycNum<T>>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(GesError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| e.order() != field.order()) {
            return Err(GesError::FieldMismatch {
                left: field.order(),
                right: bad.order(),
            });
        }
        Ok(CycMatrix {
            field: field.clone(),
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(
        field: &Arc<CyclotomicField>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> CycNum<T>,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert_eq!(e.order(), field.order(), "entry from a different field");
                entries.push(e);
            }
        }
        CycMatrix {
            field: field.clone(),
            rows,
            cols,
            entries,
        }
    }

    /// Rows `0..rows`, columns `0..cols` of the order-`N` DFT matrix `[ω^{ij}]`.
    pub fn dft(field: &Arc<CyclotomicField>, rows: usize, cols: usize) -> Self {
        let n = field.order();
        Self::from_fn(field, rows, cols, |i, j| {
            CycNum::root_power(field, ((i as u64 * j as u64) % n) as i64)
        })
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNum<T> {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[CycNum<T>] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(&self.field, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(rows, &cols)
    }

    /// Multiplies column `j` by `factor`.
    pub fn scale_column(&mut self, j: usize, factor: &CycNum<T>) {
        for i in 0..self.rows {
            let idx = i * self.cols + j;
            self.entries[idx] = &self.entries[idx] * factor;
        }
    }

    /// Residue images of all entries, `None` if any entry has a denominator
    /// divisible by the modulus.
    pub fn residues(&self) -> Option<Vec<u64>> {
        self.entries.iter().map(|e| e.residue()).collect()
    }

    pub fn to_complex<R: Real>(&self) -> DMatrix<Complex<R>> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_complex())
    }

    fn to_rows(&self) -> Vec<Vec<CycNum<T>>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Exact determinant by Gaussian elimination over the field.
    pub fn det(&self) -> Result<CycNum<T>> {
        if self.rows != self.cols {
            return Err(GesError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = CycNum::one(&self.field);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Ok(CycNum::zero(&self.field));
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let inv = a[c][c].inverse().expect("pivot is nonzero");
            det = &det * &a[c][c];
            let (top, bottom) = a.split_at_mut(c + 1);
            let pivot_row = &top[c];
            for row in bottom.iter_mut() {
                if row[c].is_zero() {
                    continue;
                }
                let f = &row[c] * &inv;
                for j in c + 1..n {
                    if !pivot_row[j].is_zero() {
                        row[j] = &row[j] - &(&f * &pivot_row[j]);
                    }
                }
                row[c] = CycNum::zero(&self.field);
            }
        }
        Ok(det)
    }

    /// Exact rank by Gaussian elimination with exact zero tests.
    pub fn rank_by_elimination(&self) -> usize {
        let mut a = self.to_rows();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(p, rank);
            let inv = a[rank][c].inverse().expect("pivot is nonzero");
            let (top, bottom) = a.split_at_mut(rank + 1);
            let pivot_row = &top[rank];
            for row in bottom.iter_mut() {
                if row[c].is_zero() {
                    continue;
                }
                let f = &row[c] * &inv;
                for j in c + 1..self.cols {
                    if !pivot_row[j].is_zero() {
                        row[j] = &row[j] - &(&f * &pivot_row[j]);
                    }
                }
                row[c] = CycNum::zero(&self.field);
            }
            rank += 1;
        }
        rank
    }

    /// Exact rank. Full rank is certified from the modular image when
    /// possible (reduction can only lower rank); anything else falls back to
    /// exact elimination.
    pub fn rank(&self) -> usize {
        let full = self.rows.min(self.cols);
        if full == 0 {
            return 0;
        }
        if let Some(res) = self.residues() {
            let q = self.field.image().modulus();
            if rank_mod(q, self.rows, self.cols, &res) == full {
                return full;
            }
        }
        self.rank_by_elimination()
    }

    /// Exact singularity test for a square matrix.
    pub fn is_singular(&self) -> Result<bool> {
        if self.rows != self.cols {
            return Err(GesError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rank() < self.rows)
    }
}
