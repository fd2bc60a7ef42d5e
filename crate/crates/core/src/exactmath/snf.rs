//! Smith normal form by elementary row and column operations.
//!
//! Each stage moves the nonzero entry of least absolute value to the pivot,
//! reduces its row and column by Euclidean division and repeats until both are
//! clear. If some remaining entry is not divisible by the pivot its row is
//! folded into the pivot row, which forces a smaller remainder on the next
//! pass; this yields the divisibility chain `d1 | d2 | ...`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::matrix::IntegerMatrix;

/// `U * A * V = S` with `U`, `V` unimodular and `S` diagonal.
///
/// `u_inv` is carried along so group generators (columns of `U^{-1}`) are
/// available without a second inversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntegerMatrix,
    pub u_inv: IntegerMatrix,
    pub v: IntegerMatrix,
    pub s: IntegerMatrix,
}

impl SnfDecomposition {
    /// Diagonal of `S`, all nonnegative.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }
}

struct Reducer {
    a: IntegerMatrix,
    u: Option<IntegerMatrix>,
    u_inv: Option<IntegerMatrix>,
    v: Option<IntegerMatrix>,
}

impl Reducer {
    /// row_i <- row_i - q * row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &BigInt) {
        sub_row(&mut self.a, i, t, q);
        if let Some(u) = self.u.as_mut() {
            sub_row(u, i, t, q);
        }
        if let Some(ui) = self.u_inv.as_mut() {
            // inverse op on the right: col_t <- col_t + q * col_i
            let neg = -q;
            sub_col(ui, t, i, &neg);
        }
    }

    /// col_j <- col_j - q * col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &BigInt) {
        sub_col(&mut self.a, j, t, q);
        if let Some(v) = self.v.as_mut() {
            sub_col(v, j, t, q);
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = self.u.as_mut() {
            u.swap_rows(i, j);
        }
        if let Some(ui) = self.u_inv.as_mut() {
            ui.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = self.v.as_mut() {
            v.swap_cols(i, j);
        }
    }

    fn negate_row(&mut self, t: usize) {
        negate_row(&mut self.a, t);
        if let Some(u) = self.u.as_mut() {
            negate_row(u, t);
        }
        if let Some(ui) = self.u_inv.as_mut() {
            for i in 0..ui.rows() {
                ui[(i, t)] = -&ui[(i, t)];
            }
        }
    }

    fn smallest_in(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, b)| ax < *b) {
                    let one = ax == BigInt::from(1);
                    best = Some(((i, j), ax));
                    if one {
                        return best.map(|b| b.0);
                    }
                }
            }
        }
        best.map(|b| b.0)
    }

    fn run(&mut self) {
        let (rows, cols) = (self.a.rows(), self.a.cols());
        for t in 0..rows.min(cols) {
            loop {
                let Some((pi, pj)) = self.smallest_in(t) else {
                    return;
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let pivot = self.a[(t, t)].clone();
                let mut dirty = false;
                for i in t + 1..rows {
                    if self.a[(i, t)].is_zero() {
                        continue;
                    }
                    let q = self.a[(i, t)].div_floor(&pivot);
                    self.row_sub(i, t, &q);
                    dirty |= !self.a[(i, t)].is_zero();
                }
                for j in t + 1..cols {
                    if self.a[(t, j)].is_zero() {
                        continue;
                    }
                    let q = self.a[(t, j)].div_floor(&pivot);
                    self.col_sub(j, t, &q);
                    dirty |= !self.a[(t, j)].is_zero();
                }
                if dirty {
                    continue;
                }
                let offender = (t + 1..rows).find(|&i| {
                    (t + 1..cols).any(|j| !self.a[(i, j)].is_multiple_of(&pivot))
                });
                match offender {
                    Some(i) => {
                        // row_t <- row_t + row_i
                        self.row_sub(t, i, &BigInt::from(-1));
                    }
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

fn sub_row(m: &mut IntegerMatrix, i: usize, t: usize, q: &BigInt) {
    for j in 0..m.cols() {
        if !m[(t, j)].is_zero() {
            let d = q * &m[(t, j)];
            m[(i, j)] -= d;
        }
    }
}

fn sub_col(m: &mut IntegerMatrix, j: usize, t: usize, q: &BigInt) {
    for i in 0..m.rows() {
        if !m[(i, t)].is_zero() {
            let d = q * &m[(i, t)];
            m[(i, j)] -= d;
        }
    }
}

fn negate_row(m: &mut IntegerMatrix, t: usize) {
    for j in 0..m.cols() {
        m[(t, j)] = -&m[(t, j)];
    }
}

pub fn smith_normal_form(a: &IntegerMatrix) -> SnfDecomposition {
    let mut r = Reducer {
        a: a.clone(),
        u: Some(IntegerMatrix::identity(a.rows())),
        u_inv: Some(IntegerMatrix::identity(a.rows())),
        v: Some(IntegerMatrix::identity(a.cols())),
    };
    r.run();
    SnfDecomposition {
        s: r.a,
        u: r.u.expect("tracked"),
        u_inv: r.u_inv.expect("tracked"),
        v: r.v.expect("tracked"),
    }
}

/// Diagonal of the Smith normal form without tracking transforms.
pub fn invariant_factors(a: &IntegerMatrix) -> Vec<BigInt> {
    let mut r = Reducer {
        a: a.clone(),
        u: None,
        u_inv: None,
        v: None,
    };
    r.run();
    (0..a.rows().min(a.cols())).map(|i| r.a[(i, i)].clone()).collect()
}
