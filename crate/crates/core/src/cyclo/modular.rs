//! Elimination over `F_q` on residue images of cyclotomic matrices.

use crate::primes::Modulus;

/// Rank of a dense row-major residue matrix.
pub fn rank_mod(q: &Modulus, rows: usize, cols: usize, entries: &[u64]) -> usize {
    let mut echelon = Echelon::new(*q, cols);
    let mut rank = 0;
    for r in 0..rows {
        if echelon.push(&entries[r * cols..(r + 1) * cols]) {
            rank += 1;
            if rank == cols {
                break;
            }
        }
    }
    rank
}

/// Incrementally grown reduced row echelon basis over `F_q`.
///
/// Rows can be pushed and popped in stack order, which lets a depth-first
/// subset enumeration share the elimination work of common prefixes.
#[derive(Clone, Debug)]
pub struct Echelon {
    q: Modulus,
    cols: usize,
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    scratch: Vec<u64>,
}

impl Echelon {
    pub fn new(q: Modulus, cols: usize) -> Self {
        Echelon {
            q,
            cols,
            basis: Vec::new(),
            pivots: Vec::new(),
            scratch: vec![0; cols],
        }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Reduces `row` against the basis. Returns `false` (basis unchanged)
    /// when it lies in the span, otherwise appends it and returns `true`.
    pub fn push(&mut self, row: &[u64]) -> bool {
        debug_assert_eq!(row.len(), self.cols);
        let q = self.q;
        self.scratch.copy_from_slice(row);
        for (b, &c) in self.basis.iter().zip(&self.pivots) {
            let f = self.scratch[c];
            if f == 0 {
                continue;
            }
            for (x, &y) in self.scratch.iter_mut().zip(b.iter()).skip(c) {
                if y != 0 {
                    *x = q.sub(*x, q.mul(f, y));
                }
            }
        }
        let Some(pivot) = self.scratch.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = q.inv(self.scratch[pivot]).expect("nonzero pivot");
        let normalized: Vec<u64> = self.scratch.iter().map(|&x| q.mul(x, inv)).collect();
        self.basis.push(normalized);
        self.pivots.push(pivot);
        true
    }

    /// Tests independence without modifying the basis.
    pub fn is_independent(&mut self, row: &[u64]) -> bool {
        if self.push(row) {
            self.pop();
            true
        } else {
            false
        }
    }

    pub fn pop(&mut self) {
        self.basis.pop();
        self.pivots.pop();
    }
}
