//! Random graph generators.
//!
//! Poisson models are realized as Erdős–Rényi graphs; every other model goes
//! through the urn (configuration) construction: draw a degree sequence with
//! even sum, pair the stubs uniformly, and drop self-loops and parallel edges.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::degree::{DegreeModel, ModelKind};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::{self, Stream};

/// Attempts allowed to draw a degree sequence with even sum.
pub const EVEN_SUM_ATTEMPTS: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct GenSpec {
    pub n: usize,
    pub model: DegreeModel,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(n: usize, model: DegreeModel, seed: u64) -> Self {
        Self { n, model, seed }
    }

    fn stream(&self) -> Stream {
        rng::stream(self.seed, &[rng::tag::GRAPH])
    }
}

/// Generate with the construction appropriate to the model family.
pub fn generate(spec: &GenSpec) -> Result<Graph> {
    match spec.model.kind() {
        ModelKind::Poisson { .. } => gen_erdos_renyi(spec),
        _ => gen_configuration(spec),
    }
}

/// `G(n, p)` with `p = z / (n - 1)`, using geometric skips over the pair index
/// space so the cost is linear in `n + m`.
pub fn gen_erdos_renyi(spec: &GenSpec) -> Result<Graph> {
    let ModelKind::Poisson { z } = *spec.model.kind() else {
        return Err(Error::InvalidParameter("Erdős–Rényi needs a Poisson model".into()));
    };
    let n = spec.n;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if n == 1 {
        return Ok(Graph::empty(1));
    }
    if z > (n - 1) as f64 {
        return Err(Error::InvalidParameter(format!("z={z} exceeds n-1={}", n - 1)));
    }
    let p = z / (n - 1) as f64;
    let mut rng = spec.stream();
    Graph::from_edges(n, erdos_renyi_edges(n, p, &mut rng))
}

fn erdos_renyi_edges(n: usize, p: f64, rng: &mut impl Rng) -> Vec<(NodeId, NodeId)> {
    let mut edges = Vec::new();
    if p <= 0.0 {
        return edges;
    }
    if p >= 1.0 {
        for v in 1..n {
            edges.extend((0..v).map(|w| (w, v)));
        }
        return edges;
    }
    let log_q = (1.0 - p).ln();
    let (mut v, mut w) = (1usize, -1i64);
    while v < n {
        let r: f64 = rng.gen();
        w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as usize, v));
        }
    }
    edges
}

/// Power-law graphs via the urn construction.
pub fn gen_power_law(spec: &GenSpec) -> Result<Graph> {
    if !matches!(spec.model.kind(), ModelKind::PowerLaw { .. }) {
        return Err(Error::InvalidParameter("power-law generator needs a power-law model".into()));
    }
    gen_configuration(spec)
}

/// Urn construction for any degree model.
pub fn gen_configuration(spec: &GenSpec) -> Result<Graph> {
    if spec.n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut rng = spec.stream();
    let degrees = sample_degree_sequence(&spec.model, spec.n, &mut rng)?;
    let pairs = pair_stubs(&degrees, &mut rng);
    simple_from_pairs(spec.n, &pairs)
}

/// I.i.d. degrees from the model, capped at `n - 1`, redrawn as a whole until
/// the sum is even.
pub fn sample_degree_sequence(model: &DegreeModel, n: usize, rng: &mut impl Rng) -> Result<Vec<usize>> {
    let table = model.table();
    let cap = table.len().min(n);
    let mut cdf = Vec::with_capacity(cap);
    let mut acc = 0.0;
    for &p in &table[..cap] {
        acc += p;
        cdf.push(acc);
    }
    if acc <= 0.0 {
        return Err(Error::InvalidParameter("no degree mass at or below n-1".into()));
    }
    let draw = |rng: &mut dyn rand::RngCore| -> usize {
        let u = rng.gen::<f64>() * acc;
        cdf.partition_point(|&c| c <= u).min(cap - 1)
    };
    for _ in 0..EVEN_SUM_ATTEMPTS {
        let seq: Vec<usize> = (0..n).map(|_| draw(rng)).collect();
        if seq.iter().sum::<usize>() % 2 == 0 {
            return Ok(seq);
        }
    }
    Err(Error::EvenSumExhausted(EVEN_SUM_ATTEMPTS))
}

/// Uniform pairing of stubs: shuffle the ball multiset and read off
/// consecutive pairs. The result realizes `degrees` exactly as a multigraph.
pub fn pair_stubs(degrees: &[usize], rng: &mut impl Rng) -> Vec<(NodeId, NodeId)> {
    let mut balls: Vec<NodeId> = degrees
        .iter()
        .enumerate()
        .flat_map(|(u, &d)| std::iter::repeat(u).take(d))
        .collect();
    assert!(balls.len() % 2 == 0, "stub count must be even");
    balls.shuffle(rng);
    balls.chunks_exact(2).map(|c| (c[0], c[1])).collect()
}

/// Drop self-loops and parallel edges.
pub fn simple_from_pairs(n: usize, pairs: &[(NodeId, NodeId)]) -> Result<Graph> {
    Graph::from_edges(n, pairs.iter().copied())
}

/// Urn construction from an explicit degree sequence.
pub fn configuration_from_degrees(degrees: &[usize], seed: u64) -> Result<Graph> {
    if degrees.iter().sum::<usize>() % 2 != 0 {
        return Err(Error::InvalidParameter("degree sum must be even".into()));
    }
    let mut rng = rng::stream(seed, &[rng::tag::GRAPH]);
    simple_from_pairs(degrees.len(), &pair_stubs(degrees, &mut rng))
}
