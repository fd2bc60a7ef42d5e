//! Command-line grammar.

use std::ops::RangeInclusive;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sandpile_core::dlp::DEFAULT_LIFT_CAP;
use sandpile_core::Family;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "sandpile", version, about = "Sandpile groups and discrete logarithms via the monodromy pairing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariant factors, order and generators of a family member.
    Structure(StructureArgs),
    /// Solve a discrete logarithm instance read from a JSON file.
    Solve(SolveArgs),
    /// Time the pairing solver on seeded random instances.
    Bench(BenchArgs),
    /// Re-run the worked examples and table values.
    VerifyPaper(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    #[value(name = "square_cycle", alias = "square-cycle")]
    SquareCycle,
    Wheel,
    Banana,
}

impl FamilyName {
    /// `params` is `n` for cycles and wheels, `s1,s2,...` for bananas.
    pub fn with_params(self, params: &str) -> anyhow::Result<Family> {
        let single = || -> anyhow::Result<usize> {
            params.trim().parse().with_context(|| format!("expected a vertex count, got {params:?}"))
        };
        Ok(match self {
            FamilyName::SquareCycle => Family::SquareCycle(single()?),
            FamilyName::Wheel => Family::Wheel(single()?),
            FamilyName::Banana => Family::Banana(
                params
                    .split(',')
                    .map(|s| s.trim().parse::<u64>())
                    .collect::<Result<_, _>>()
                    .with_context(|| format!("expected branch lengths like 3,7,10, got {params:?}"))?,
            ),
        })
    }
}

#[derive(Debug, Args)]
pub struct StructureArgs {
    pub family: FamilyName,
    /// `7` for square_cycle/wheel, `3,7,10` for banana.
    pub params: String,
    #[arg(long)]
    pub sink: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolveMethod {
    Pairing,
    Banana,
    Brute,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Instance JSON: {"graph": ..., "c1": [...], "c2": [...], "generators": optional}.
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value = "pairing")]
    pub method: SolveMethod,
    /// Overrides the sink given in the instance file.
    #[arg(long)]
    pub sink: Option<usize>,
    /// JSON list of generator divisors, or a `structure` output.
    #[arg(long)]
    pub generators_file: Option<PathBuf>,
    /// Maximum number of lifts tried during verification.
    #[arg(long, default_value_t = DEFAULT_LIFT_CAP)]
    pub lift_cap: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Parity {
    #[default]
    All,
    Odd,
    Even,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    pub family: FamilyName,
    /// Inclusive size range such as `29..45`, or a single size.
    pub range: String,
    #[arg(value_enum, default_value = "all")]
    pub parity: Parity,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for independent trials.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

impl BenchArgs {
    pub fn sizes(&self) -> anyhow::Result<Vec<usize>> {
        let range = parse_range(&self.range)?;
        Ok(range
            .filter(|n| match self.parity {
                Parity::All => true,
                Parity::Odd => n % 2 == 1,
                Parity::Even => n % 2 == 0,
            })
            .collect())
    }
}

/// `a..b` and `a..=b` are both inclusive; a bare `a` is the range `a..=a`.
pub fn parse_range(text: &str) -> anyhow::Result<RangeInclusive<usize>> {
    let num = |s: &str| -> anyhow::Result<usize> {
        s.trim().parse().map_err(|_| anyhow!("bad size {s:?} in range {text:?}"))
    };
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let n = num(text)?;
            (n, n)
        }
    };
    if lo > hi {
        bail!("empty range {text:?}");
    }
    Ok(lo..=hi)
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Perturb one pseudoinverse entry before checking, as a negative control.
    #[arg(long)]
    pub inject_fault: bool,
}
