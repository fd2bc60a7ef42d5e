//! `bench`: solve seeded random instances across a range of sizes.
//!
//! Trial `t` at size `n` draws from ChaCha8 seeded with `--seed` on stream
//! `(n << 32) | t`, so results do not depend on `--jobs` or scheduling.

use std::time::Instant;

use anyhow::{bail, Context};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use sandpile_core::dlp::{random_instance, shokrieh_solve_with, SolveOptions};
use sandpile_core::exactmath::pseudoinverse;
use sandpile_core::sandpile::odd_wheel_generators;
use sandpile_core::{Divisor, Family, Graph, RationalMatrix, Sandpile};

use crate::args::{BenchArgs, FamilyName};
use crate::{CommandResult, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorSource {
    OddWheel,
    Smith,
}

#[derive(Debug, Serialize)]
pub struct Trial {
    pub trial: usize,
    pub x: String,
    pub solved_x: String,
    pub modulus: String,
    pub verified: bool,
    pub solve_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct Row {
    pub n: usize,
    pub order: String,
    pub generators: GeneratorSource,
    pub setup_ms: f64,
    pub median_ms: f64,
    pub mean_ms: f64,
    pub verified: usize,
    pub trials: Vec<Trial>,
}

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub family: FamilyName,
    pub seed: u64,
    pub rows: Vec<Row>,
}

struct Setup {
    n: usize,
    sandpile: Sandpile,
    pinv: RationalMatrix,
    generators: Vec<Divisor>,
    source: GeneratorSource,
    setup_ms: f64,
}

fn ms(started: Instant) -> f64 {
    started.elapsed().as_secs_f64() * 1e3
}

fn setup(family: FamilyName, n: usize) -> anyhow::Result<Setup> {
    let started = Instant::now();
    let fam = match family {
        FamilyName::Wheel => Family::Wheel(n),
        FamilyName::SquareCycle => Family::SquareCycle(n),
        FamilyName::Banana => bail!("bench takes a size range; banana graphs are parameterized by branch lengths"),
    };
    let sandpile = Sandpile::with_default_sink(Graph::from_family(&fam).with_context(|| format!("size {n}"))?);
    let pinv = pseudoinverse(&sandpile.graph().laplacian())?;
    let (generators, source) = if family == FamilyName::Wheel && n % 2 == 1 {
        let gens = odd_wheel_generators(&sandpile)?;
        (gens.iter().map(|g| sandpile.config_to_divisor(g)).collect(), GeneratorSource::OddWheel)
    } else {
        (sandpile.group_structure().generators, GeneratorSource::Smith)
    };
    Ok(Setup {
        n,
        sandpile,
        pinv,
        generators,
        source,
        setup_ms: ms(started),
    })
}

fn trial(s: &Setup, seed: u64, t: usize) -> anyhow::Result<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((s.n as u64) << 32) | t as u64);
    let (inst, x) = random_instance(&s.sandpile, &mut rng)?;
    let inst = inst.with_generators(s.generators.clone());
    let started = Instant::now();
    let sol = shokrieh_solve_with(&inst, &s.pinv, SolveOptions::default())?;
    let solve_ms = ms(started);
    Ok(Trial {
        trial: t,
        x: x.to_string(),
        solved_x: sol.reported_x().to_string(),
        modulus: sol.residue_class.modulus().to_string(),
        verified: sol.verified,
        solve_ms,
    })
}

fn median(xs: &mut [f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

pub fn bench(args: &BenchArgs) -> anyhow::Result<BenchReport> {
    let sizes = args.sizes()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.max(1))
        .build()
        .context("starting worker threads")?;
    pool.install(|| {
        let setups: Vec<Setup> = sizes
            .par_iter()
            .map(|&n| setup(args.family, n))
            .collect::<anyhow::Result<_>>()?;
        let jobs: Vec<(usize, usize)> = (0..setups.len())
            .flat_map(|i| (0..args.trials).map(move |t| (i, t)))
            .collect();
        let results: Vec<Trial> = jobs
            .par_iter()
            .map(|&(i, t)| trial(&setups[i], args.seed, t))
            .collect::<anyhow::Result<_>>()?;
        let mut results = results.into_iter();
        let rows = setups
            .iter()
            .map(|s| {
                let trials: Vec<Trial> = results.by_ref().take(args.trials).collect();
                let mut times: Vec<f64> = trials.iter().map(|t| t.solve_ms).collect();
                let mean_ms = if times.is_empty() { 0.0 } else { times.iter().sum::<f64>() / times.len() as f64 };
                Row {
                    n: s.n,
                    order: s.sandpile.order().to_string(),
                    generators: s.source,
                    setup_ms: s.setup_ms,
                    median_ms: median(&mut times),
                    mean_ms,
                    verified: trials.iter().filter(|t| t.verified).count(),
                    trials,
                }
            })
            .collect();
        Ok(BenchReport {
            family: args.family,
            seed: args.seed,
            rows,
        })
    })
}

pub fn run(args: &BenchArgs) -> anyhow::Result<CommandResult> {
    let report = bench(args)?;
    let all_verified = report.rows.iter().all(|r| r.verified == r.trials.len());
    let status = if all_verified { Status::Ok } else { Status::Unverified };
    let mut result = CommandResult::new(status, &report);
    for row in &report.rows {
        result.diagnostics.push(format!(
            "n={:<3} order={:<22} median {:.1} ms  mean {:.1} ms  verified {}/{}",
            row.n,
            row.order,
            row.median_ms,
            row.mean_ms,
            row.verified,
            row.trials.len()
        ));
    }
    Ok(result)
}
