//! `"p/q"` string form for rationals, used in every JSON schema.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn to_string(x: &BigRational) -> String {
    x.to_string()
}

pub fn parse(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let q: BigInt = q.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if q.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(p, q))
}

/// Representative of `x + Z` in `[0, 1)`.
pub fn fractional_part(x: &BigRational) -> BigRational {
    let (num, den) = (x.numer(), x.denom());
    BigRational::new(num.mod_floor(den), den.clone())
}

/// Least common multiple of the denominators (1 for an empty slice).
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(&x.denom().abs()))
}
