//! Chip configurations, stabilization and the sandpile group of a graph.

use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::smith_normal_form;
use crate::graphs::{reduced_laplacian, tree_count, Family, Graph};

/// Integer value on every vertex of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Divisor {
    #[serde(with = "crate::io::bigint_vec")]
    values: Vec<BigInt>,
}

impl Divisor {
    pub fn new(values: Vec<BigInt>) -> Self {
        Divisor { values }
    }

    pub fn from_i64(values: &[i64]) -> Self {
        Divisor {
            values: values.iter().map(|&x| x.into()).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        Divisor {
            values: vec![BigInt::zero(); n],
        }
    }

    /// `v0 - v1` style point difference.
    pub fn point_difference(n: usize, plus: usize, minus: usize) -> Self {
        let mut d = Self::zero(n);
        d.values[plus] += 1;
        d.values[minus] -= 1;
        d
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn degree(&self) -> BigInt {
        self.values.iter().sum()
    }

    pub fn add(&self, other: &Divisor) -> Result<Divisor> {
        self.check_len(other.len())?;
        Ok(Divisor {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, k: &BigInt) -> Divisor {
        Divisor {
            values: self.values.iter().map(|a| a * k).collect(),
        }
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.len() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: n,
                actual: self.len(),
            })
        }
    }

    pub fn check_degree_zero(&self) -> Result<()> {
        let deg = self.degree();
        if deg.is_zero() {
            Ok(())
        } else {
            Err(Error::NonzeroDegree(deg.to_string()))
        }
    }
}

/// Nonnegative chip counts on the non-sink vertices, in increasing vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Configuration {
    values: Vec<u64>,
    sink: usize,
}

impl Configuration {
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn total_chips(&self) -> u128 {
        self.values.iter().map(|&x| u128::from(x)).sum()
    }
}

/// Invariant factors (all > 1), matching generator divisors, and the order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescription {
    #[serde(rename = "factors", with = "crate::io::bigint_vec")]
    pub invariant_factors: Vec<BigInt>,
    #[serde(with = "crate::io::bigint_string")]
    pub order: BigInt,
    pub generators: Vec<Divisor>,
}

/// A connected graph with a designated sink: the setting for chip-firing.
#[derive(Clone, Debug)]
pub struct Sandpile {
    graph: Arc<Graph>,
    sink: usize,
    /// vertex -> position among non-sink vertices
    slot: Vec<Option<usize>>,
    nonsink: Vec<usize>,
    identity: Arc<OnceLock<Configuration>>,
}

impl PartialEq for Sandpile {
    fn eq(&self, other: &Self) -> bool {
        self.sink == other.sink && (Arc::ptr_eq(&self.graph, &other.graph) || self.graph == other.graph)
    }
}

impl Sandpile {
    pub fn new(graph: impl Into<Arc<Graph>>, sink: usize) -> Result<Self> {
        let graph = graph.into();
        graph.check_vertex(sink)?;
        let nonsink: Vec<usize> = (0..graph.vertex_count()).filter(|&v| v != sink).collect();
        let mut slot = vec![None; graph.vertex_count()];
        for (i, &v) in nonsink.iter().enumerate() {
            slot[v] = Some(i);
        }
        Ok(Sandpile {
            graph,
            sink,
            slot,
            nonsink,
            identity: Arc::new(OnceLock::new()),
        })
    }

    /// Uses the graph's default sink.
    pub fn with_default_sink(graph: impl Into<Arc<Graph>>) -> Self {
        let graph = graph.into();
        let sink = graph.default_sink();
        Self::new(graph, sink).expect("default sink is a vertex")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn shared_graph(&self) -> Arc<Graph> {
        Arc::clone(&self.graph)
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Number of non-sink vertices.
    pub fn rank(&self) -> usize {
        self.nonsink.len()
    }

    pub fn nonsink_vertices(&self) -> &[usize] {
        &self.nonsink
    }

    pub fn order(&self) -> BigInt {
        tree_count(&self.graph)
    }

    pub fn configuration(&self, values: Vec<u64>) -> Result<Configuration> {
        if values.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                actual: values.len(),
            });
        }
        Ok(Configuration {
            values,
            sink: self.sink,
        })
    }

    fn check(&self, c: &Configuration) -> Result<()> {
        if c.sink != self.sink || c.values.len() != self.rank() {
            return Err(Error::Mismatched);
        }
        Ok(())
    }

    /// Drops the sink entry; every other entry must be nonnegative.
    pub fn divisor_to_config(&self, d: &Divisor) -> Result<Configuration> {
        d.check_len(self.vertex_count())?;
        let values = self
            .nonsink
            .iter()
            .map(|&v| {
                let x = &d.values()[v];
                x.to_u64().ok_or_else(|| Error::NegativeEntry {
                    vertex: v,
                    value: x.to_i64().unwrap_or(i64::MIN),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.configuration(values)
    }

    /// Degree-0 divisor: the sink carries minus the total chip count.
    pub fn config_to_divisor(&self, c: &Configuration) -> Divisor {
        let mut values = vec![BigInt::zero(); self.vertex_count()];
        for (&v, &x) in self.nonsink.iter().zip(&c.values) {
            values[v] = BigInt::from(x);
        }
        values[self.sink] = -BigInt::from(c.total_chips());
        Divisor { values }
    }

    pub fn is_stable(&self, c: &Configuration) -> bool {
        self.nonsink
            .iter()
            .zip(&c.values)
            .all(|(&v, &x)| x < self.graph.degree(v))
    }

    /// Topples greedily in sweeps over the non-sink vertices until stable.
    /// Returns the stable configuration and how often each non-sink vertex fired.
    pub fn stabilize_with_firings(&self, values: &[u64]) -> Result<(Configuration, Vec<u128>)> {
        if values.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                actual: values.len(),
            });
        }
        let g = &*self.graph;
        // Chips never increase off the sink, so u128 cannot overflow here.
        let mut chips = vec![0u128; g.vertex_count()];
        for (&v, &x) in self.nonsink.iter().zip(values) {
            chips[v] = u128::from(x);
        }
        let mut fired = vec![0u128; g.vertex_count()];
        loop {
            let mut active = false;
            for &v in &self.nonsink {
                let d = u128::from(g.degree(v));
                if chips[v] >= d {
                    let t = chips[v] / d;
                    chips[v] -= t * d;
                    fired[v] += t;
                    active = true;
                    for &(w, m) in g.neighbors(v) {
                        chips[w] += t * u128::from(m);
                    }
                }
            }
            chips[self.sink] = 0;
            if !active {
                break;
            }
        }
        let out = self
            .nonsink
            .iter()
            .map(|&v| chips[v] as u64)
            .collect();
        let firings = self.nonsink.iter().map(|&v| fired[v]).collect();
        Ok((self.configuration(out)?, firings))
    }

    pub fn stabilize(&self, values: &[u64]) -> Result<Configuration> {
        self.stabilize_with_firings(values).map(|(c, _)| c)
    }

    pub fn add(&self, a: &Configuration, b: &Configuration) -> Result<Configuration> {
        self.check(a)?;
        self.check(b)?;
        let sum: Vec<u64> = a.values.iter().zip(&b.values).map(|(x, y)| x + y).collect();
        self.stabilize(&sum)
    }

    /// `(x * c)°` by double-and-add, which keeps intermediate piles small.
    pub fn scalar_multiple(&self, x: &BigUint, c: &Configuration) -> Result<Configuration> {
        self.check(c)?;
        let mut acc = self.configuration(vec![0; self.rank()])?;
        let mut base = self.stabilize(&c.values)?;
        let bits = x.bits();
        for i in 0..bits {
            if x.bit(i) {
                acc = self.add(&acc, &base)?;
            }
            if i + 1 < bits {
                base = self.add(&base, &base)?;
            }
        }
        Ok(acc)
    }

    pub fn max_stable(&self) -> Configuration {
        let values = self
            .nonsink
            .iter()
            .map(|&v| self.graph.degree(v) - 1)
            .collect();
        Configuration {
            values,
            sink: self.sink,
        }
    }

    /// The neutral recurrent element, `(2m - (2m)°)°` for `m` the maximal stable configuration.
    pub fn identity(&self) -> Configuration {
        self.identity
            .get_or_init(|| {
                let twice: Vec<u64> = self.max_stable().values.iter().map(|x| 2 * x).collect();
                let settled = self.stabilize(&twice).expect("sized");
                let diff: Vec<u64> = twice.iter().zip(&settled.values).map(|(a, b)| a - b).collect();
                self.stabilize(&diff).expect("sized")
            })
            .clone()
    }

    /// Dhar's burning test.
    pub fn is_recurrent(&self, c: &Configuration) -> Result<bool> {
        self.check(c)?;
        if let Some(pos) = self
            .nonsink
            .iter()
            .zip(&c.values)
            .position(|(&v, &x)| x >= self.graph.degree(v))
        {
            return Err(Error::Unstable(self.nonsink[pos]));
        }
        let g = &*self.graph;
        let n = g.vertex_count();
        let mut burnt = vec![false; n];
        let mut heat = vec![0u64; n]; // edges into the burnt set
        let mut queue = vec![self.sink];
        burnt[self.sink] = true;
        let mut count = 1;
        while let Some(v) = queue.pop() {
            for &(w, m) in g.neighbors(v) {
                if burnt[w] {
                    continue;
                }
                heat[w] += m;
                let slot = self.slot[w].expect("non-sink");
                if c.values[slot] + heat[w] >= g.degree(w) {
                    burnt[w] = true;
                    count += 1;
                    queue.push(w);
                }
            }
        }
        Ok(count == n)
    }

    /// Recurrent configuration in the class of a divisor (sink entry ignored).
    ///
    /// Negative entries are cleared by reverse firing (a vertex borrows one chip
    /// along each edge); by the least-action principle this terminates. The
    /// result is then moved into the recurrent set by adding the identity.
    pub fn recurrent_representative(&self, d: &Divisor) -> Result<Configuration> {
        d.check_len(self.vertex_count())?;
        let g = &*self.graph;
        let mut vals: Vec<BigInt> = d.values().to_vec();
        vals[self.sink] = BigInt::zero();
        loop {
            let mut active = false;
            for &v in &self.nonsink {
                if vals[v].is_negative() {
                    let deg = BigInt::from(g.degree(v));
                    let k = (-&vals[v] + &deg - 1u32) / &deg;
                    vals[v] += &k * &deg;
                    for &(w, m) in g.neighbors(v) {
                        vals[w] -= &k * m;
                    }
                    active = true;
                }
            }
            vals[self.sink] = BigInt::zero();
            if !active {
                break;
            }
        }
        let id = self.identity();
        let values = self
            .nonsink
            .iter()
            .zip(&id.values)
            .map(|(&v, &e)| {
                vals[v]
                    .to_u64()
                    .and_then(|x| x.checked_add(e))
                    .ok_or_else(|| Error::Domain("divisor entries too large".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        self.stabilize(&values)
    }

    /// Invariant factors and generators from the Smith form of the reduced Laplacian.
    ///
    /// With `U * Lr * V = S`, the map `z -> U z` identifies `Z^k / Lr Z^k` with
    /// `(+) Z/d_i`, so column `i` of `U^{-1}` generates the `d_i` summand.
    pub fn group_structure(&self) -> GroupDescription {
        let lr = reduced_laplacian(&self.graph, self.sink).expect("valid sink");
        let snf = smith_normal_form(&lr);
        let mut factors = Vec::new();
        let mut generators = Vec::new();
        for (i, d) in snf.diagonal().into_iter().enumerate() {
            if d <= BigInt::one() {
                continue;
            }
            let mut values = vec![BigInt::zero(); self.vertex_count()];
            let mut total = BigInt::zero();
            for (row, &v) in self.nonsink.iter().enumerate() {
                let x = snf.u_inv[(row, i)].clone();
                total += &x;
                values[v] = x;
            }
            values[self.sink] = -total;
            factors.push(d);
            generators.push(Divisor { values });
        }
        let order = factors.iter().product();
        GroupDescription {
            invariant_factors: factors,
            order,
            generators,
        }
    }
}

/// Closed-form generators of the sandpile group of `W_n` for odd `n = 2r + 1`.
///
/// Rim positions `1..=n` carry the labels `-r, ..., r`; `g` puts one chip on
/// `±r` and two elsewhere, and the second generator is `g` shifted one step
/// along the rim.
pub fn odd_wheel_generators(sandpile: &Sandpile) -> Result<[Configuration; 2]> {
    let n = match sandpile.graph().family() {
        Some(Family::Wheel(n)) if n % 2 == 1 => *n,
        _ => {
            return Err(Error::Domain(
                "closed-form generators exist for odd wheels only".into(),
            ))
        }
    };
    if sandpile.sink() != 0 {
        return Err(Error::Domain("closed-form wheel generators assume the hub is the sink".into()));
    }
    let mut g = vec![2u64; n];
    g[0] = 1;
    g[n - 1] = 1;
    let mut shifted = g.clone();
    shifted.rotate_right(1);
    Ok([sandpile.configuration(g)?, sandpile.configuration(shifted)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{banana_subdivided, square_cycle, wheel};

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn w7() -> Sandpile {
        Sandpile::with_default_sink(wheel(7).unwrap())
    }

    #[test]
    fn divisor_round_trip_on_wheel() {
        let s = w7();
        let c1 = s.configuration(vec![2, 2, 2, 0, 2, 2, 0]).unwrap();
        let d = s.config_to_divisor(&c1);
        assert_eq!(d, Divisor::from_i64(&[-10, 2, 2, 2, 0, 2, 2, 0]));
        assert_eq!(s.divisor_to_config(&d).unwrap(), c1);
        let g1 = s.configuration(vec![1, 2, 2, 2, 2, 2, 1]).unwrap();
        assert_eq!(s.config_to_divisor(&g1), Divisor::from_i64(&[-12, 1, 2, 2, 2, 2, 2, 1]));
        let zero = s.configuration(vec![0; 7]).unwrap();
        assert_eq!(s.config_to_divisor(&zero), Divisor::zero(8));
    }

    #[test]
    fn divisor_to_config_rejects_negative() {
        let s = w7();
        let d = Divisor::from_i64(&[0, 1, -1, 0, 0, 0, 0, 0]);
        assert!(matches!(s.divisor_to_config(&d), Err(Error::NegativeEntry { vertex: 2, .. })));
        assert!(s.divisor_to_config(&Divisor::zero(3)).is_err());
    }

    #[test]
    fn stable_input_unchanged() {
        let s = w7();
        let c = s.configuration(vec![2, 0, 1, 2, 2, 0, 1]).unwrap();
        assert_eq!(s.stabilize(c.values()).unwrap(), c);
    }

    #[test]
    fn worked_multiples() {
        let s = w7();
        let c1: Vec<u64> = vec![2, 2, 2, 0, 2, 2, 0];
        let times15: Vec<u64> = c1.iter().map(|x| 15 * x).collect();
        assert_eq!(s.stabilize(&times15).unwrap().values(), &[2, 2, 2, 1, 2, 2, 1]);

        let s = Sandpile::with_default_sink(square_cycle(7).unwrap());
        let c1 = s.configuration(vec![3, 3, 0, 3, 3, 0]).unwrap();
        assert_eq!(s.scalar_multiple(&big(20), &c1).unwrap().values(), &[3, 3, 3, 3, 1, 1]);
        let times20: Vec<u64> = c1.values().iter().map(|x| 20 * x).collect();
        assert_eq!(s.stabilize(&times20).unwrap().values(), &[3, 3, 3, 3, 1, 1]);
    }

    #[test]
    fn scalar_multiple_agrees_with_repeated_addition() {
        let s = w7();
        let g1 = s.configuration(vec![1, 2, 2, 2, 2, 2, 1]).unwrap();
        assert_eq!(s.add(&g1, &g1).unwrap(), s.scalar_multiple(&big(2), &g1).unwrap());
        let mut acc = g1.clone();
        for k in 2..40u64 {
            acc = s.add(&acc, &g1).unwrap();
            assert_eq!(acc, s.scalar_multiple(&big(k), &g1).unwrap());
        }
        assert_eq!(s.scalar_multiple(&big(1), &g1).unwrap(), g1);
    }

    #[test]
    fn identity_laws() {
        let edge = Sandpile::new(Graph::from_edges(2, &[(0, 1, 1)]).unwrap(), 1).unwrap();
        assert_eq!(edge.max_stable().values(), &[0]);
        assert_eq!(edge.identity().values(), &[0]);

        let k4 = Sandpile::with_default_sink(wheel(3).unwrap());
        let e = k4.identity();
        assert_eq!(k4.add(&e, &e).unwrap(), e);
        assert!(k4.is_recurrent(&e).unwrap());

        let s = w7();
        let g1 = s.configuration(vec![1, 2, 2, 2, 2, 2, 1]).unwrap();
        assert_eq!(s.add(&g1, &s.identity()).unwrap(), g1);
    }

    #[test]
    fn order_annihilates() {
        let s = Sandpile::with_default_sink(wheel(5).unwrap());
        let order = s.order().to_biguint().unwrap();
        let e = s.identity();
        for c in [s.max_stable(), s.configuration(vec![1, 2, 2, 0, 2]).unwrap()] {
            let rec = s.add(&c, &e).unwrap();
            assert_eq!(s.scalar_multiple(&order, &rec).unwrap(), e);
        }
    }

    #[test]
    fn burning_test() {
        let k4 = Sandpile::with_default_sink(wheel(3).unwrap());
        assert!(k4.is_recurrent(&k4.max_stable()).unwrap());
        assert!(!k4.is_recurrent(&k4.configuration(vec![0, 0, 0]).unwrap()).unwrap());
        let s = w7();
        let g1 = s.configuration(vec![1, 2, 2, 2, 2, 2, 1]).unwrap();
        assert!(s.is_recurrent(&g1).unwrap());
        let bad = s.configuration(vec![3, 0, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(s.is_recurrent(&bad), Err(Error::Unstable(1)));
    }

    #[test]
    fn identity_recurrent_across_families() {
        const BANANAS: [&[u64]; 4] = [&[2, 2], &[1, 1], &[3, 7, 10], &[1, 2, 3, 4]];
        let graphs = (5..=12)
            .map(|n| square_cycle(n).unwrap())
            .chain((3..=12).map(|n| wheel(n).unwrap()))
            .chain(BANANAS.iter().map(|s| banana_subdivided(s).unwrap()));
        for g in graphs {
            let s = Sandpile::with_default_sink(g);
            assert!(s.is_recurrent(&s.identity()).unwrap());
        }
    }

    #[test]
    fn mismatched_configurations() {
        let a = w7();
        let b = Sandpile::with_default_sink(square_cycle(9).unwrap());
        assert_eq!(a.add(&a.max_stable(), &b.max_stable()), Err(Error::Mismatched));
    }

    #[test]
    fn group_structures() {
        let s = Sandpile::with_default_sink(square_cycle(7).unwrap());
        let gd = s.group_structure();
        assert_eq!(gd.invariant_factors, vec![BigInt::from(13), BigInt::from(91)]);
        assert_eq!(gd.order, BigInt::from(1183));

        let gd = w7().group_structure();
        assert_eq!(gd.invariant_factors, vec![BigInt::from(29), BigInt::from(29)]);
        assert_eq!(gd.order, BigInt::from(841));

        let s = Sandpile::with_default_sink(banana_subdivided(&[3, 7, 10]).unwrap());
        let gd = s.group_structure();
        assert_eq!(gd.invariant_factors, vec![BigInt::from(121)]);
        for g in &gd.generators {
            g.check_degree_zero().unwrap();
        }
    }

    #[test]
    fn odd_wheel_generator_pair() {
        let s = w7();
        let [g1, g2] = odd_wheel_generators(&s).unwrap();
        assert_eq!(g1.values(), &[1, 2, 2, 2, 2, 2, 1]);
        assert_eq!(g2.values(), &[1, 1, 2, 2, 2, 2, 2]);
        let even = Sandpile::with_default_sink(wheel(8).unwrap());
        assert!(odd_wheel_generators(&even).is_err());
    }

    #[test]
    fn recurrent_representative_of_negative_divisor() {
        let s = w7();
        let g1 = s.configuration(vec![1, 2, 2, 2, 2, 2, 1]).unwrap();
        // -g1 + 29 g1 = 28 g1
        let neg = s.config_to_divisor(&g1).scale(&BigInt::from(-1));
        let rep = s.recurrent_representative(&neg).unwrap();
        assert!(s.is_recurrent(&rep).unwrap());
        assert_eq!(rep, s.scalar_multiple(&big(28), &g1).unwrap());
    }
}
