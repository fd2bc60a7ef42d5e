//! Pseudoinverse-free pairing on subdivided banana graphs.
//!
//! When `N = sum_i prod_{j != i} s_j` is a prime power `p^r` with every `s_i`
//! prime to `p`, the sandpile group of `B_s` is cyclic of order `N` and is
//! generated by `D = v0 - v1`. Pairing against `D` only needs an integer
//! potential `f` that rises by `b_i = prod_j s_j / s_i` along each edge of
//! branch `i`, walking toward `v1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{congruence_from_pairings, find_verified_lift, DlpSolution, Method, PairingValue, SolveOptions};
use crate::error::{Error, Result};
use crate::graphs::banana_subdivided;
use crate::sandpile::{Divisor, Sandpile};

/// Group order `p^r` and its prime factorization, once validated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BananaHypotheses {
    pub prime: u64,
    pub exponent: u32,
    pub order: BigInt,
}

impl BananaHypotheses {
    pub fn check(s: &[u64]) -> Result<Self> {
        let order = spanning_tree_sum(s);
        let n = order.to_u64().ok_or_else(|| {
            Error::HypothesisViolated(format!("order {order} too large to factor"))
        })?;
        let (prime, exponent) = prime_power(n).ok_or_else(|| {
            Error::HypothesisViolated(format!("group order {n} is not a prime power"))
        })?;
        if let Some(bad) = s.iter().find(|&&x| x % prime == 0) {
            return Err(Error::HypothesisViolated(format!(
                "branch length {bad} is divisible by {prime}"
            )));
        }
        Ok(BananaHypotheses {
            prime,
            exponent,
            order,
        })
    }
}

fn spanning_tree_sum(s: &[u64]) -> BigInt {
    let prod: BigInt = s.iter().map(|&x| BigInt::from(x)).product();
    s.iter().map(|&x| &prod / x).sum()
}

/// `(p, r)` with `n = p^r`, `r >= 1`.
fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = None;
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            p = Some(d);
            break;
        }
        d += 1;
    }
    let p = p.unwrap_or(n);
    let mut m = n;
    let mut r = 0;
    while m.is_multiple_of(p) {
        m /= p;
        r += 1;
    }
    (m == 1).then_some((p, r))
}

/// Potential on the vertices of `B_s` (same numbering as
/// [`banana_subdivided`]): `f(v1) = 0` and `f(v0) = -prod s_j`.
pub fn banana_potential(s: &[u64]) -> Result<Vec<BigInt>> {
    let g = banana_subdivided(s)?;
    let prod: BigInt = s.iter().map(|&x| BigInt::from(x)).product();
    let mut f = vec![BigInt::zero(); g.vertex_count()];
    f[0] = -&prod;
    let mut next = 2;
    for &len in s {
        let b = &prod / len;
        for k in 1..len {
            // k edges away from v0
            f[next] = -&prod + &b * k;
            next += 1;
        }
    }
    Ok(f)
}

/// `<D, d>` for `D = v0 - v1`, evaluated as `-(sum_v d(v) f(v)) / N mod 1`.
///
/// `L f = -N D`, so `P D = -f / N` up to a constant, which a degree-0 `d`
/// does not see.
pub fn banana_pairing(s: &[u64], f: &[BigInt], d: &Divisor) -> Result<PairingValue> {
    let hyp = BananaHypotheses::check(s)?;
    d.check_len(f.len())?;
    d.check_degree_zero()?;
    let dot: BigInt = d.values().iter().zip(f).map(|(a, b)| a * b).sum();
    Ok(PairingValue::new(&BigRational::new(-dot, hyp.order)))
}

/// Solves `(x c1)° = c2` on `B_s` using only the potential.
pub fn banana_solve(s: &[u64], c1: &Divisor, c2: &Divisor) -> Result<DlpSolution> {
    banana_solve_with(s, c1, c2, SolveOptions::default())
}

pub fn banana_solve_with(
    s: &[u64],
    c1: &Divisor,
    c2: &Divisor,
    opts: SolveOptions,
) -> Result<DlpSolution> {
    let hyp = BananaHypotheses::check(s)?;
    let f = banana_potential(s)?;
    let r1 = banana_pairing(s, &f, c1)?;
    let r2 = banana_pairing(s, &f, c2)?;
    debug_assert!(hyp.order.is_multiple_of(r1.denom()));
    let class = congruence_from_pairings(&r1, &r2)?;

    let sandpile = Sandpile::with_default_sink(banana_subdivided(s)?);
    let base = sandpile.divisor_to_config(c1)?;
    let target = sandpile.divisor_to_config(c2)?;
    let x = find_verified_lift(&sandpile, &base, &target, &class, opts.lift_cap)?;
    Ok(DlpSolution {
        residue_class: class,
        verified: x.is_some(),
        x,
        method: Method::Banana,
        pairings: vec![(r1, r2)],
    })
}
