//! JSON schemas shared by the library and the command-line tool.
//!
//! Big integers are written as decimal strings (group orders exceed `2^63`);
//! divisors and configurations as plain integer arrays.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{Family, Graph};
use crate::sandpile::{Configuration, Divisor, Sandpile};

pub mod bigint_string {
    use num_bigint::BigInt;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Int(i64),
        }
        match Repr::deserialize(d)? {
            Repr::Str(s) => s.trim().parse().map_err(de::Error::custom),
            Repr::Int(i) => Ok(BigInt::from(i)),
        }
    }
}

/// Integer arrays: plain JSON numbers when they fit in `i64`, strings otherwise.
pub mod bigint_vec {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::ser::SerializeSeq;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            match x.to_i64() {
                Some(i) => seq.serialize_element(&i)?,
                None => seq.serialize_element(&x.to_string())?,
            }
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        Vec::<Repr>::deserialize(d)?
            .into_iter()
            .map(|r| match r {
                Repr::Int(i) => Ok(BigInt::from(i)),
                Repr::Str(s) => s.trim().parse().map_err(de::Error::custom),
            })
            .collect()
    }
}

/// Graph description: a named family or an explicit edge list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphSource {
    Family {
        #[serde(flatten)]
        family: Family,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sink: Option<usize>,
    },
    Explicit {
        vertices: usize,
        /// `[u, v, multiplicity]`
        edges: Vec<(usize, usize, u64)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sink: Option<usize>,
    },
}

impl GraphSource {
    pub fn build(&self) -> Result<Graph> {
        match self {
            GraphSource::Family { family, .. } => Graph::from_family(family),
            GraphSource::Explicit {
                vertices, edges, ..
            } => Graph::from_edges(*vertices, edges),
        }
    }

    pub fn sink(&self) -> Option<usize> {
        match self {
            GraphSource::Family { sink, .. } | GraphSource::Explicit { sink, .. } => *sink,
        }
    }

    /// Builds the sandpile; `override_sink` wins over the source's own sink,
    /// which wins over the family default.
    pub fn sandpile(&self, override_sink: Option<usize>) -> Result<Sandpile> {
        let graph = Arc::new(self.build()?);
        let sink = override_sink
            .or(self.sink())
            .unwrap_or_else(|| graph.default_sink());
        Sandpile::new(graph, sink)
    }
}

/// A DLP instance file. `c1` and `c2` are either configurations (one entry per
/// non-sink vertex) or full divisors (one entry per vertex).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub graph: GraphSource,
    #[serde(with = "bigint_vec")]
    pub c1: Vec<BigInt>,
    #[serde(with = "bigint_vec")]
    pub c2: Vec<BigInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Divisor>>,
}

/// Reads an integer array as a configuration on `sandpile`.
pub fn parse_element(sandpile: &Sandpile, values: &[BigInt]) -> Result<Configuration> {
    if values.len() == sandpile.vertex_count() {
        sandpile.divisor_to_config(&Divisor::new(values.to_vec()))
    } else if values.len() == sandpile.rank() {
        let mut full = Vec::with_capacity(sandpile.vertex_count());
        let mut it = values.iter();
        for v in 0..sandpile.vertex_count() {
            if v == sandpile.sink() {
                full.push(BigInt::from(0));
            } else {
                full.push(it.next().expect("length checked").clone());
            }
        }
        sandpile.divisor_to_config(&Divisor::new(full))
    } else {
        Err(Error::DimensionMismatch {
            expected: sandpile.vertex_count(),
            actual: values.len(),
        })
    }
}

/// Solver output as written to stdout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    #[serde(with = "bigint_string")]
    pub x: BigInt,
    #[serde(with = "bigint_string")]
    pub modulus: BigInt,
    pub verified: bool,
    pub method: crate::dlp::Method,
    pub elapsed_ms: u64,
}
