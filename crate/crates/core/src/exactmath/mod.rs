//! Exact linear algebra over the integers and rationals.

mod circulant;
mod diophantine;
mod snf;

pub use circulant::{circulant_first_row, circulant_pinv_first_row, SpectralRow};
pub use diophantine::{crt_combine, solve_lin_diophantine, ResidueClass};
pub use snf::{invariant_factors, smith_normal_form, SnfDecomposition};

use std::cell::Cell;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{IntegerMatrix, RationalMatrix};

thread_local! {
    static PSEUDOINVERSE_CALLS: Cell<u64> = const { Cell::new(0) };
}

/// How many times [`pseudoinverse`] has run on the current thread.
pub fn pseudoinverse_calls() -> u64 {
    PSEUDOINVERSE_CALLS.with(Cell::get)
}

/// Moore-Penrose pseudoinverse of a connected-graph Laplacian, computed as
/// `(L + J/n)^{-1} - J/n` with `J` the all-ones matrix.
///
/// `L + J/n = (nL + J)/n`, so the inverse is `n * (nL + J)^{-1}` and the whole
/// computation stays on an integer matrix.
pub fn pseudoinverse(l: &IntegerMatrix) -> Result<RationalMatrix> {
    PSEUDOINVERSE_CALLS.with(|c| c.set(c.get() + 1));
    if !l.is_square() {
        return Err(Error::DimensionMismatch {
            expected: l.rows(),
            actual: l.cols(),
        });
    }
    let n = l.rows();
    if n == 0 {
        return Ok(RationalMatrix::zeros(0, 0));
    }
    let nb = BigInt::from(n);
    let mut shifted = IntegerMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            shifted[(i, j)] = &nb * &l[(i, j)] + 1u32;
        }
    }
    let (det, adj) = shifted.adjugate_inverse()?;
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let mut p = RationalMatrix::zeros(n, n);
    let shift = BigRational::new(1.into(), nb.clone());
    for i in 0..n {
        for j in 0..n {
            p[(i, j)] = BigRational::new(&nb * &adj[(i, j)], det.clone()) - &shift;
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{banana_subdivided, laplacian, square_cycle, wheel, Graph};

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn single_edge_pseudoinverse() {
        let g = Graph::from_edges(2, &[(0, 1, 1)]).unwrap();
        let p = pseudoinverse(&laplacian(&g)).unwrap();
        assert_eq!(p[(0, 0)], q(1, 4));
        assert_eq!(p[(0, 1)], q(-1, 4));
        assert_eq!(p[(1, 1)], q(1, 4));
    }

    #[test]
    fn square_cycle_seven_first_row() {
        let p = pseudoinverse(&laplacian(&square_cycle(7).unwrap())).unwrap();
        let want = [18, -1, -2, -6, -6, -2, -1].map(|x| q(x, 91));
        assert_eq!(p.row(0), &want[..]);
        for i in 0..7 {
            assert_eq!(p[(i, i)], q(18, 91));
        }
    }

    #[test]
    fn wheel_seven_entries() {
        let p = pseudoinverse(&laplacian(&wheel(7).unwrap())).unwrap();
        assert_eq!(p[(0, 0)], q(7, 64));
        assert_eq!(p[(1, 1)], q(571, 1856));
        assert_eq!(p[(1, 2)], q(59, 1856));
        assert_eq!(p[(1, 4)], q(-197, 1856));
    }

    #[test]
    fn moore_penrose_identities_small() {
        for g in [
            square_cycle(6).unwrap(),
            wheel(5).unwrap(),
            banana_subdivided(&[1, 1, 2]).unwrap(),
        ] {
            let l = laplacian(&g).to_rational();
            let p = pseudoinverse(&laplacian(&g)).unwrap();
            let lp = l.mul(&p).unwrap();
            let pl = p.mul(&l).unwrap();
            assert_eq!(lp.mul(&l).unwrap(), l);
            assert_eq!(pl.mul(&p).unwrap(), p);
            assert_eq!(lp.transpose(), lp);
            assert_eq!(pl.transpose(), pl);
        }
    }

    #[test]
    fn disconnected_shape_is_singular() {
        // Laplacian of two isolated vertices: rank 0, nL + J is rank 1.
        let l = IntegerMatrix::zeros(2, 2);
        assert_eq!(pseudoinverse(&l), Err(Error::Singular));
    }
}
