use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `residue (mod modulus)` with `0 <= residue < modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueClass {
    #[serde(with = "crate::io::bigint_string")]
    residue: BigInt,
    #[serde(with = "crate::io::bigint_string")]
    modulus: BigInt,
}

impl ResidueClass {
    pub fn new(residue: impl Into<BigInt>, modulus: impl Into<BigInt>) -> Result<Self> {
        let modulus = modulus.into();
        if !modulus.is_positive() {
            return Err(Error::Domain(format!("modulus must be positive, got {modulus}")));
        }
        let residue = residue.into().mod_floor(&modulus);
        Ok(ResidueClass { residue, modulus })
    }

    pub fn residue(&self) -> &BigInt {
        &self.residue
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        x.mod_floor(&self.modulus) == self.residue
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus)
    }
}

/// Solves `c = a*x + m*y` for `x`, returned modulo `m / gcd(a, m)`.
pub fn solve_lin_diophantine(a: &BigInt, m: &BigInt, c: &BigInt) -> Result<ResidueClass> {
    if !m.is_positive() {
        return Err(Error::Domain(format!("modulus must be positive, got {m}")));
    }
    let eg = a.extended_gcd(m);
    let g = eg.gcd.abs();
    if g.is_zero() || !c.is_multiple_of(&g) {
        return Err(Error::Inconsistent(format!(
            "{c} = {a}x + {m}y has no integer solution"
        )));
    }
    // a*eg.x + m*eg.y = ±g
    let sign = if eg.gcd.is_negative() { -BigInt::one() } else { BigInt::one() };
    let modulus = m / &g;
    let x = sign * &eg.x * (c / &g);
    ResidueClass::new(x, modulus)
}

/// Chinese remainder theorem for arbitrary (not necessarily coprime) moduli.
pub fn crt_combine(classes: &[ResidueClass]) -> Result<ResidueClass> {
    let (first, rest) = classes
        .split_first()
        .ok_or_else(|| Error::Domain("crt_combine needs at least one class".into()))?;
    let mut acc = first.clone();
    for c in rest {
        // acc.residue + acc.modulus * t ≡ c.residue (mod c.modulus)
        let diff = &c.residue - &acc.residue;
        let step = solve_lin_diophantine(&acc.modulus, &c.modulus, &diff).map_err(|_| {
            Error::Inconsistent(format!("{acc} and {c} are incompatible"))
        })?;
        let lcm = acc.modulus.lcm(&c.modulus);
        acc = ResidueClass::new(&acc.residue + &acc.modulus * step.residue, lcm)?;
    }
    Ok(acc)
}
