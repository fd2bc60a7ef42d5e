//! Random DLP instances for testing and benchmarking.

use num_bigint::{BigUint, RandBigInt};
use num_traits::One;
use rand::Rng;

use super::DlpInstance;
use crate::error::Result;
use crate::sandpile::{Configuration, Sandpile};

/// Uniform stable configuration pushed into the recurrent set by adding the identity.
pub fn random_recurrent<R: Rng + ?Sized>(sandpile: &Sandpile, rng: &mut R) -> Result<Configuration> {
    let values = sandpile
        .nonsink_vertices()
        .iter()
        .map(|&v| rng.gen_range(0..sandpile.graph().degree(v)))
        .collect();
    let c = sandpile.configuration(values)?;
    sandpile.add(&c, &sandpile.identity())
}

/// Random recurrent `c1`, random `x` in `[2, order]`, and `c2 = (x c1)°`.
pub fn random_instance<R: Rng + ?Sized>(sandpile: &Sandpile, rng: &mut R) -> Result<(DlpInstance, BigUint)> {
    let order = sandpile.order().to_biguint().unwrap_or_else(BigUint::one);
    let two = BigUint::from(2u32);
    let x = if order < two {
        BigUint::one()
    } else {
        rng.gen_biguint_range(&two, &(order + 1u32))
    };
    let base = random_recurrent(sandpile, rng)?;
    let target = sandpile.scalar_multiple(&x, &base)?;
    Ok((DlpInstance::new(sandpile.clone(), base, target), x))
}
