//! Spectral evaluation of the pseudoinverse of a circulant matrix.
//!
//! Eigenvalues of a circulant with first row `a` are `mu_j = sum_k a_k w^{jk}`
//! for `w = exp(2 pi i / n)`, and the first row of its pseudoinverse is
//! `b_i = (1/n) sum_j beta_j w^{-ij}` where `beta_j = 1/mu_j`, or 0 when
//! `mu_j = 0`. Evaluation uses binary fixed point on big integers with
//! `FRAC_BITS` fractional bits; this is an independent cross-check of the exact
//! rational pseudoinverse, not a replacement for it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;

const FRAC_BITS: usize = 320;

/// Fixed-point real `value * 2^-FRAC_BITS`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Fixed(BigInt);

impl Fixed {
    fn zero() -> Self {
        Fixed(BigInt::zero())
    }

    fn from_int(x: &BigInt) -> Self {
        Fixed(x << FRAC_BITS)
    }

    fn add(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 + &o.0)
    }

    fn sub(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 - &o.0)
    }

    fn mul(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 * &o.0) >> FRAC_BITS)
    }

    fn div(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 << FRAC_BITS) / &o.0)
    }

    fn div_int(&self, k: u64) -> Fixed {
        Fixed(&self.0 / BigInt::from(k))
    }

    fn to_rational(&self) -> BigRational {
        BigRational::new(self.0.clone(), BigInt::one() << FRAC_BITS)
    }
}

/// `atan(1/k)` by its alternating series.
fn atan_inv(k: u64) -> Fixed {
    let k2 = BigInt::from(k) * k;
    let mut power = (BigInt::one() << FRAC_BITS) / k; // 1/k^(2i+1)
    let mut sum = BigInt::zero();
    let mut i: u64 = 0;
    while !power.is_zero() {
        let term = &power / (2 * i + 1);
        if i.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &k2;
        i += 1;
    }
    Fixed(sum)
}

/// pi = 16 atan(1/5) - 4 atan(1/239)
fn pi() -> Fixed {
    let a = atan_inv(5).0 * 16;
    let b = atan_inv(239).0 * 4;
    Fixed(a - b)
}

/// `(cos x, sin x)` by Taylor series; intended for `|x| <= 2 pi`.
fn cos_sin(x: &Fixed) -> (Fixed, Fixed) {
    let mut cos = Fixed::from_int(&BigInt::one());
    let mut sin = Fixed::zero();
    let mut term = Fixed::from_int(&BigInt::one()); // x^k / k!
    let mut k: u64 = 0;
    loop {
        k += 1;
        term = term.mul(x).div_int(k);
        if term.0.is_zero() {
            break;
        }
        match k % 4 {
            1 => sin = sin.add(&term),
            2 => cos = cos.sub(&term),
            3 => sin = sin.sub(&term),
            _ => cos = cos.add(&term),
        }
    }
    (cos, sin)
}

#[derive(Clone, Debug)]
struct Complex {
    re: Fixed,
    im: Fixed,
}

impl Complex {
    fn zero() -> Self {
        Complex {
            re: Fixed::zero(),
            im: Fixed::zero(),
        }
    }

    fn add(&self, o: &Complex) -> Complex {
        Complex {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    fn mul(&self, o: &Complex) -> Complex {
        Complex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    fn scale(&self, k: &Fixed) -> Complex {
        Complex {
            re: self.re.mul(k),
            im: self.im.mul(k),
        }
    }

    fn norm_sqr(&self) -> Fixed {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    fn recip(&self) -> Complex {
        let d = self.norm_sqr();
        Complex {
            re: self.re.div(&d),
            im: Fixed(-&self.im.0).div(&d),
        }
    }
}

/// First row of a circulant pseudoinverse, evaluated spectrally.
#[derive(Clone, Debug)]
pub struct SpectralRow {
    /// Real parts of `b_0 .. b_{n-1}` as exact dyadic rationals.
    pub values: Vec<BigRational>,
    /// Largest `|Im b_i|`; zero up to rounding for real circulants.
    pub max_imaginary: BigRational,
    /// Number of eigenvalues treated as zero.
    pub zero_eigenvalues: usize,
}

impl SpectralRow {
    /// Largest `|values[i] - exact[i]|`.
    pub fn max_error(&self, exact: &[BigRational]) -> BigRational {
        self.values
            .iter()
            .zip(exact)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

/// Returns the first row of `m` after checking that row `i` is row 0 rotated
/// right by `i`.
pub fn circulant_first_row(m: &IntegerMatrix) -> Result<Vec<BigInt>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            actual: m.cols(),
        });
    }
    let n = m.rows();
    for i in 1..n {
        if (0..n).any(|j| m[(i, j)] != m[(0, (j + n - i) % n)]) {
            return Err(Error::NotCirculant(i));
        }
    }
    Ok(m.row(0).to_vec())
}

pub fn circulant_pinv_first_row(first_row: &[BigInt]) -> Result<SpectralRow> {
    let n = first_row.len();
    if n == 0 {
        return Err(Error::Domain("empty circulant row".into()));
    }
    let two_pi = Fixed(pi().0 * 2);
    let roots: Vec<Complex> = (0..n)
        .map(|m| {
            let theta = Fixed(&two_pi.0 * m / n);
            let (c, s) = cos_sin(&theta);
            Complex { re: c, im: s }
        })
        .collect();
    let coeffs: Vec<Fixed> = first_row.iter().map(Fixed::from_int).collect();

    // |mu| below 2^(-FRAC_BITS/2) counts as a zero eigenvalue.
    let zero_threshold = Fixed(BigInt::one());
    let mut betas = Vec::with_capacity(n);
    let mut zero_eigenvalues = 0;
    for j in 0..n {
        let mut mu = Complex::zero();
        for (k, a) in coeffs.iter().enumerate() {
            if !a.0.is_zero() {
                mu = mu.add(&roots[(j * k) % n].scale(a));
            }
        }
        if mu.norm_sqr() <= zero_threshold {
            zero_eigenvalues += 1;
            betas.push(Complex::zero());
        } else {
            betas.push(mu.recip());
        }
    }

    let mut values = Vec::with_capacity(n);
    let mut max_imaginary = BigRational::zero();
    for i in 0..n {
        let mut acc = Complex::zero();
        for (j, beta) in betas.iter().enumerate() {
            // w^{-ij} = w^{n - (ij mod n)}
            let idx = (n - (i * j) % n) % n;
            acc = acc.add(&beta.mul(&roots[idx]));
        }
        let re = acc.re.div_int(n as u64);
        let im = acc.im.div_int(n as u64);
        values.push(re.to_rational());
        max_imaginary = max_imaginary.max(im.to_rational().abs());
    }
    Ok(SpectralRow {
        values,
        max_imaginary,
        zero_eigenvalues,
    })
}
