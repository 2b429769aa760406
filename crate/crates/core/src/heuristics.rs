//! Local choice rules and the dissemination subgraph they induce.
//!
//! Each node with at least one neighbor picks a first neighbor and, with
//! probability `alpha`, a second one that may repeat the first. Node `u`'s
//! picks are drawn from a private stream keyed by `(seed, u, epoch[u])`, so a
//! single row can be redrawn after a topology change without touching the
//! rest of the table.

use std::collections::BTreeSet;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::{self, Stream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Heuristic {
    /// Both picks uniform over the neighbors.
    Uniform,
    /// First pick uniform over the highest-degree neighbors, second pick
    /// proportional to neighbor degree.
    DegreeBased,
}

impl Heuristic {
    pub fn name(self) -> &'static str {
        match self {
            Heuristic::Uniform => "uniform",
            Heuristic::DegreeBased => "degree",
        }
    }
}

impl std::str::FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Heuristic::Uniform),
            "degree" | "degree-based" => Ok(Heuristic::DegreeBased),
            _ => Err(Error::InvalidParameter(format!("unknown heuristic {s:?}"))),
        }
    }
}

/// The raw picks of one node. `second` is present iff the node made two choices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Picks {
    pub first: NodeId,
    pub second: Option<NodeId>,
}

impl Picks {
    /// `c_u`.
    pub fn count(&self) -> usize {
        1 + self.second.is_some() as usize
    }

    /// `C_u` as a sorted list of one or two distinct ids.
    pub fn chosen(&self) -> Vec<NodeId> {
        match self.second {
            Some(s) if s != self.first => vec![self.first.min(s), self.first.max(s)],
            _ => vec![self.first],
        }
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.first == v || self.second == Some(v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChoiceTable {
    pub heuristic: Heuristic,
    pub alpha: f64,
    pub seed: u64,
    /// `None` for isolated nodes.
    pub rows: Vec<Option<Picks>>,
    /// Regeneration counter per node; bumped whenever a row is redrawn.
    pub epochs: Vec<u32>,
}

impl ChoiceTable {
    pub fn choice_count(&self, u: NodeId) -> usize {
        self.rows[u].map_or(0, |p| p.count())
    }

    pub fn chosen(&self, u: NodeId) -> Vec<NodeId> {
        self.rows[u].map_or_else(Vec::new, |p| p.chosen())
    }

    /// Check the table against `g`: ranges, adjacency, and `c_u = 0` iff degree 0.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.rows.len() != g.node_count() || self.epochs.len() != g.node_count() {
            return Err(Error::InconsistentTable("row count differs from node count".into()));
        }
        for (u, row) in self.rows.iter().enumerate() {
            match row {
                None if g.deg(u) == 0 => {}
                None => return Err(Error::InconsistentTable(format!("node {u} made no choice"))),
                Some(_) if g.deg(u) == 0 => {
                    return Err(Error::InconsistentTable(format!("isolated node {u} has choices")))
                }
                Some(p) => {
                    for v in p.chosen() {
                        if !g.has_edge(u, v) {
                            return Err(Error::InconsistentTable(format!(
                                "node {u} chose non-neighbor {v}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("alpha={alpha} outside (0, 1]")))
    }
}

fn row_stream(seed: u64, u: NodeId, epoch: u32) -> Stream {
    rng::stream(seed, &[rng::tag::CHOICE, u as u64, epoch as u64])
}

fn pick_uniform(g: &Graph, u: NodeId, rng: &mut impl Rng) -> NodeId {
    let nb = g.neighbors(u);
    nb[rng.gen_range(0..nb.len())]
}

fn pick_max_degree(g: &Graph, u: NodeId, rng: &mut impl Rng) -> NodeId {
    let nb = g.neighbors(u);
    let best = nb.iter().map(|&v| g.deg(v)).max().expect("non-isolated node");
    let tied: Vec<NodeId> = nb.iter().copied().filter(|&v| g.deg(v) == best).collect();
    tied[rng.gen_range(0..tied.len())]
}

fn pick_degree_proportional(g: &Graph, u: NodeId, rng: &mut impl Rng) -> NodeId {
    let nb = g.neighbors(u);
    let total: usize = nb.iter().map(|&v| g.deg(v)).sum();
    let mut target = rng.gen_range(0..total);
    for &v in nb {
        let d = g.deg(v);
        if target < d {
            return v;
        }
        target -= d;
    }
    unreachable!("target below total degree")
}

/// Draw the picks of node `u` from its own stream.
fn draw_row(g: &Graph, h: Heuristic, alpha: f64, seed: u64, u: NodeId, epoch: u32) -> Option<Picks> {
    if g.deg(u) == 0 {
        return None;
    }
    let mut rng = row_stream(seed, u, epoch);
    let first = match h {
        Heuristic::Uniform => pick_uniform(g, u, &mut rng),
        Heuristic::DegreeBased => pick_max_degree(g, u, &mut rng),
    };
    let second = rng.gen_bool(alpha).then(|| match h {
        Heuristic::Uniform => pick_uniform(g, u, &mut rng),
        Heuristic::DegreeBased => pick_degree_proportional(g, u, &mut rng),
    });
    Some(Picks { first, second })
}

/// Every node makes its choices; rows are independent and drawn in parallel.
pub fn make_choices(g: &Graph, h: Heuristic, alpha: f64, seed: u64) -> Result<ChoiceTable> {
    make_choices_with_epochs(g, h, alpha, seed, vec![0; g.node_count()])
}

pub fn make_choices_with_epochs(
    g: &Graph,
    h: Heuristic,
    alpha: f64,
    seed: u64,
    epochs: Vec<u32>,
) -> Result<ChoiceTable> {
    check_alpha(alpha)?;
    if epochs.len() != g.node_count() {
        return Err(Error::InvalidParameter("epoch vector length".into()));
    }
    let rows = (0..g.node_count())
        .into_par_iter()
        .with_min_len(256)
        .map(|u| draw_row(g, h, alpha, seed, u, epochs[u]))
        .collect();
    Ok(ChoiceTable {
        heuristic: h,
        alpha,
        seed,
        rows,
        epochs,
    })
}

/// `D`: edge `(u, v)` iff `v` is in `C_u` or `u` is in `C_v`.
pub fn build_subgraph(g: &Graph, t: &ChoiceTable) -> Result<Graph> {
    t.validate(g)?;
    let edges = t.rows.iter().enumerate().flat_map(|(u, row)| {
        row.iter()
            .flat_map(move |p| std::iter::once(p.first).chain(p.second))
            .map(move |v| (u, v))
    });
    Graph::from_edges(g.node_count(), edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeOp {
    Add,
    Remove,
}

#[derive(Clone, Debug)]
pub struct TopologyUpdate {
    pub graph: Graph,
    pub table: ChoiceTable,
    /// Rows that were redrawn, ascending.
    pub recomputed: Vec<NodeId>,
}

/// Apply an edge insertion or deletion to `g` and redraw only the affected
/// rows: the two endpoints, plus (degree-based rule) every neighbor of either
/// endpoint, whose degree-dependent picks may have changed.
pub fn local_update(
    g: &Graph,
    t: &ChoiceTable,
    edge: (NodeId, NodeId),
    op: EdgeOp,
) -> Result<TopologyUpdate> {
    t.validate(g)?;
    let (u, v) = edge;
    let updated = match op {
        EdgeOp::Add => g.with_edge(u, v)?,
        EdgeOp::Remove => g.without_edge(u, v)?,
    };
    let mut affected = BTreeSet::from([u, v]);
    if t.heuristic == Heuristic::DegreeBased {
        for w in [u, v] {
            affected.extend(g.neighbors(w));
            affected.extend(updated.neighbors(w));
        }
    }
    let mut table = t.clone();
    for &w in &affected {
        table.epochs[w] += 1;
        table.rows[w] = draw_row(&updated, t.heuristic, t.alpha, t.seed, w, table.epochs[w]);
    }
    Ok(TopologyUpdate {
        graph: updated,
        table,
        recomputed: affected.into_iter().collect(),
    })
}
