//! `solve`: read an instance file and run one of the three solvers.

use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context};
use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::json;

use sandpile_core::dlp::{banana_solve_with, brute_force_default, shokrieh_solve_with, SolveOptions};
use sandpile_core::exactmath::pseudoinverse;
use sandpile_core::io::{parse_element, GraphSource, InstanceFile, SolutionRecord};
use sandpile_core::{DlpInstance, DlpSolution, Divisor, Error, Family, Method, Sandpile};

use crate::args::{SolveArgs, SolveMethod};
use crate::{CommandResult, Status};

pub fn run(args: &SolveArgs) -> anyhow::Result<CommandResult> {
    let text = fs::read_to_string(&args.instance)
        .with_context(|| format!("reading {}", args.instance.display()))?;
    let file: InstanceFile = serde_json::from_str(&text).context("instance does not match the schema")?;
    let generators = match &args.generators_file {
        Some(path) => Some(read_generators(path)?),
        None => file
            .generators
            .as_ref()
            .map(|g| g.iter().map(|d| d.values().to_vec()).collect()),
    };
    solve_file(&file, generators, args.method, args.sink, SolveOptions { lift_cap: args.lift_cap })
}

/// Accepts `[[...], ...]` or an object with a `generators` list.
fn read_generators(path: &Path) -> anyhow::Result<Vec<Vec<BigInt>>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum GeneratorFile {
        List(Vec<Divisor>),
        Described { generators: Vec<Divisor> },
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed: GeneratorFile = serde_json::from_str(&text).context("generators file does not match the schema")?;
    let list = match parsed {
        GeneratorFile::List(g) | GeneratorFile::Described { generators: g } => g,
    };
    Ok(list.into_iter().map(|d| d.values().to_vec()).collect())
}

/// A generator may be given as a full divisor or as a configuration.
fn generator_divisor(sandpile: &Sandpile, values: &[BigInt]) -> anyhow::Result<Divisor> {
    if values.len() == sandpile.vertex_count() {
        let d = Divisor::new(values.to_vec());
        d.check_degree_zero().context("generator divisor")?;
        Ok(d)
    } else {
        Ok(sandpile.config_to_divisor(&parse_element(sandpile, values)?))
    }
}

pub fn solve_file(
    file: &InstanceFile,
    generators: Option<Vec<Vec<BigInt>>>,
    method: SolveMethod,
    sink: Option<usize>,
    opts: SolveOptions,
) -> anyhow::Result<CommandResult> {
    let sandpile = file.graph.sandpile(sink)?;
    let base = parse_element(&sandpile, &file.c1).context("c1")?;
    let target = parse_element(&sandpile, &file.c2).context("c2")?;
    let mut inst = DlpInstance::new(sandpile.clone(), base, target);
    if let Some(gens) = generators {
        let divisors = gens
            .iter()
            .map(|g| generator_divisor(&sandpile, g))
            .collect::<anyhow::Result<Vec<_>>>()?;
        inst = inst.with_generators(divisors);
    }

    let started = Instant::now();
    let outcome = match method {
        SolveMethod::Pairing => {
            let p = pseudoinverse(&sandpile.graph().laplacian())?;
            shokrieh_solve_with(&inst, &p, opts)
        }
        SolveMethod::Banana => {
            let s = match &file.graph {
                GraphSource::Family { family: Family::Banana(s), .. } => s,
                _ => bail!("--method banana needs a banana family graph"),
            };
            if sandpile.sink() != sandpile.graph().default_sink() {
                bail!("--method banana uses the default sink {}", sandpile.graph().default_sink());
            }
            let c1 = sandpile.config_to_divisor(&inst.base);
            let c2 = sandpile.config_to_divisor(&inst.target);
            banana_solve_with(s, &c1, &c2, opts)
        }
        SolveMethod::Brute => return brute(&inst, started),
    };
    let elapsed_ms = started.elapsed().as_millis() as u64;
    match outcome {
        Ok(sol) => Ok(record(&sol, elapsed_ms)),
        Err(Error::Inconsistent(msg)) => Ok(CommandResult::new(
            Status::Inconsistent,
            json!({ "error": msg, "method": core_method(method), "verified": false }),
        )
        .with_diagnostic(format!("inconsistent: {msg}"))),
        Err(e) => Err(e.into()),
    }
}

fn core_method(m: SolveMethod) -> Method {
    match m {
        SolveMethod::Pairing => Method::Pairing,
        SolveMethod::Banana => Method::Banana,
        SolveMethod::Brute => Method::BruteForce,
    }
}

fn record(sol: &DlpSolution, elapsed_ms: u64) -> CommandResult {
    let rec = SolutionRecord {
        x: sol.reported_x(),
        modulus: sol.residue_class.modulus().clone(),
        verified: sol.verified,
        method: sol.method,
        elapsed_ms,
    };
    if sol.verified {
        CommandResult::ok(rec)
    } else {
        CommandResult::new(Status::Unverified, rec).with_diagnostic(format!(
            "no lift of {} passed verification",
            sol.residue_class
        ))
    }
}

fn brute(inst: &DlpInstance, started: Instant) -> anyhow::Result<CommandResult> {
    let found = brute_force_default(inst)?;
    let elapsed_ms = started.elapsed().as_millis() as u64;
    Ok(match found {
        Some(k) => CommandResult::ok(SolutionRecord {
            x: BigInt::from(k),
            modulus: inst.sandpile.order(),
            verified: true,
            method: Method::BruteForce,
            elapsed_ms,
        }),
        None => CommandResult::new(
            Status::Unverified,
            json!({ "error": "no exponent up to the group order", "method": Method::BruteForce, "verified": false }),
        ),
    })
}
