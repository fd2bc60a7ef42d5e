//! Discrete logarithms in sandpile groups via the monodromy pairing.
//!
//! For degree-0 divisors the pairing `<d1, d2> = d1^T P d2 mod 1` (with `P`
//! the Laplacian pseudoinverse) is bilinear and nondegenerate on the group.
//! Pairing both `c1` and `c2` against each generator turns `x c1 = c2` into
//! one linear congruence per generator; the Chinese remainder theorem merges
//! them into a single residue class for `x`.

mod banana;
mod instance;

pub use banana::{banana_pairing, banana_potential, banana_solve, banana_solve_with, BananaHypotheses};
pub use instance::{random_instance, random_recurrent};

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{crt_combine, pseudoinverse, solve_lin_diophantine, ResidueClass};
use crate::matrix::RationalMatrix;
use crate::rational::{common_denominator, fractional_part};
use crate::sandpile::{Configuration, Divisor, Sandpile};

/// Default cap on the number of lifts `x + kM` tried during verification.
pub const DEFAULT_LIFT_CAP: u64 = 1_000_000;

/// A value of the pairing, normalized into `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairingValue(BigRational);

impl PairingValue {
    pub fn new(x: &BigRational) -> Self {
        PairingValue(fractional_part(x))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

impl fmt::Display for PairingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Pairing,
    Banana,
    BruteForce,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Pairing => "pairing",
            Method::Banana => "banana",
            Method::BruteForce => "brute_force",
        })
    }
}

/// Find `x` with `(x * base)° = target`.
#[derive(Clone, Debug)]
pub struct DlpInstance {
    pub sandpile: Sandpile,
    pub base: Configuration,
    pub target: Configuration,
    /// Generator divisors; derived from the Smith form when absent.
    pub generators: Option<Vec<Divisor>>,
}

impl DlpInstance {
    pub fn new(sandpile: Sandpile, base: Configuration, target: Configuration) -> Self {
        DlpInstance {
            sandpile,
            base,
            target,
            generators: None,
        }
    }

    pub fn with_generators(mut self, generators: Vec<Divisor>) -> Self {
        self.generators = Some(generators);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DlpSolution {
    /// `x` as determined by the pairings.
    pub residue_class: ResidueClass,
    /// Smallest lift of `residue_class` that passed verification.
    pub x: Option<BigUint>,
    pub verified: bool,
    pub method: Method,
    /// Pairing values `(r_{j,1}, r_{j,2})` per generator.
    pub pairings: Vec<(PairingValue, PairingValue)>,
}

impl DlpSolution {
    /// The verified lift, or the residue when verification failed.
    pub fn reported_x(&self) -> BigInt {
        match &self.x {
            Some(x) => BigInt::from(x.clone()),
            None => self.residue_class.residue().clone(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub lift_cap: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            lift_cap: DEFAULT_LIFT_CAP,
        }
    }
}

/// `d1^T P d2` reduced into `[0, 1)`.
pub fn monodromy_pairing(p: &RationalMatrix, d1: &Divisor, d2: &Divisor) -> Result<PairingValue> {
    let pd2 = pinv_apply(p, d2)?;
    pair_with(&pd2, d1)
}

/// `P d` for a degree-0 divisor `d`.
pub fn pinv_apply(p: &RationalMatrix, d: &Divisor) -> Result<Vec<BigRational>> {
    d.check_len(p.cols())?;
    d.check_degree_zero()?;
    p.mul_int_vec(d.values())
}

/// `d^T v mod 1` for a precomputed `v = P e`.
pub fn pair_with(pe: &[BigRational], d: &Divisor) -> Result<PairingValue> {
    d.check_len(pe.len())?;
    d.check_degree_zero()?;
    let mut acc = BigRational::zero();
    for (x, w) in d.values().iter().zip(pe) {
        if !x.is_zero() {
            acc += BigRational::from_integer(x.clone()) * w;
        }
    }
    Ok(PairingValue::new(&acc))
}

/// `a2 = a1 x + m y` where `m` is the common denominator of `r1` and `r2`.
pub(crate) fn congruence_from_pairings(r1: &PairingValue, r2: &PairingValue) -> Result<ResidueClass> {
    let m = common_denominator([r1.value(), r2.value()]);
    let scale = BigRational::from_integer(m.clone());
    let a1 = (r1.value() * &scale).to_integer();
    let a2 = (r2.value() * &scale).to_integer();
    solve_lin_diophantine(&a1, &m, &a2)
}

/// Searches `x = r, r + M, r + 2M, ...` (up to the group order, at most `cap`
/// steps) for a value with `(x * base)° = target`.
pub(crate) fn find_verified_lift(
    sandpile: &Sandpile,
    base: &Configuration,
    target: &Configuration,
    class: &ResidueClass,
    cap: u64,
) -> Result<Option<BigUint>> {
    let order = sandpile.order();
    let start = class.residue().to_biguint().expect("residue is nonnegative");
    let step = class.modulus().to_biguint().expect("modulus is positive");
    let mut current = sandpile.scalar_multiple(&start, base)?;
    let step_elem = sandpile.scalar_multiple(&step, base)?;
    let mut x = start;
    let order = order.to_biguint().unwrap_or_else(BigUint::one);
    let mut tried = 0u64;
    loop {
        if &current == target {
            return Ok(Some(x));
        }
        tried += 1;
        if tried >= cap.max(1) || x > order {
            return Ok(None);
        }
        current = sandpile.add(&current, &step_elem)?;
        x += &step;
    }
}

/// The pairing attack: pair `c1`, `c2` with every generator, solve the
/// resulting congruences, merge them by CRT and verify by stabilization.
pub fn shokrieh_solve(inst: &DlpInstance) -> Result<DlpSolution> {
    let p = pseudoinverse(&inst.sandpile.graph().laplacian())?;
    shokrieh_solve_with(inst, &p, SolveOptions::default())
}

/// Same as [`shokrieh_solve`] with a precomputed pseudoinverse.
pub fn shokrieh_solve_with(
    inst: &DlpInstance,
    p: &RationalMatrix,
    opts: SolveOptions,
) -> Result<DlpSolution> {
    let sp = &inst.sandpile;
    let generators = match &inst.generators {
        Some(g) => g.clone(),
        None => sp.group_structure().generators,
    };
    let c1 = sp.config_to_divisor(&inst.base);
    let c2 = sp.config_to_divisor(&inst.target);

    let mut pairings = Vec::with_capacity(generators.len());
    let mut classes = Vec::with_capacity(generators.len());
    for g in &generators {
        let pg = pinv_apply(p, g)?;
        let r1 = pair_with(&pg, &c1)?;
        let r2 = pair_with(&pg, &c2)?;
        classes.push(congruence_from_pairings(&r1, &r2)?);
        pairings.push((r1, r2));
    }
    let class = if classes.is_empty() {
        ResidueClass::new(0, 1)?
    } else {
        crt_combine(&classes)?
    };
    let x = find_verified_lift(sp, &inst.base, &inst.target, &class, opts.lift_cap)?;
    Ok(DlpSolution {
        residue_class: class,
        verified: x.is_some(),
        x,
        method: Method::Pairing,
        pairings,
    })
}

/// Least `k` in `1..=bound` with `k * base = target`, by repeated addition.
pub fn brute_force_dlp(inst: &DlpInstance, bound: u64) -> Result<Option<u64>> {
    let sp = &inst.sandpile;
    let base = sp.stabilize(inst.base.values())?;
    let mut current = base.clone();
    for k in 1..=bound {
        if current == inst.target {
            return Ok(Some(k));
        }
        current = sp.add(&current, &base)?;
    }
    Ok(None)
}

/// Brute force with the group order as the bound.
pub fn brute_force_default(inst: &DlpInstance) -> Result<Option<u64>> {
    let bound = inst
        .sandpile
        .order()
        .to_u64()
        .ok_or_else(|| Error::Domain("group too large for brute force".into()))?;
    brute_force_dlp(inst, bound)
}

pub fn verify_solution(inst: &DlpInstance, x: &BigUint) -> Result<bool> {
    Ok(inst.sandpile.scalar_multiple(x, &inst.base)? == inst.target)
}

/// Denominator check helper: every pairing value's denominator divides `order`.
pub fn denominator_divides(value: &PairingValue, order: &BigInt) -> bool {
    (order % value.denom().abs()).is_zero()
}
