//! Flooding over the dissemination subgraph.
//!
//! The originator sends one copy on each of its edges in `D`; every other node
//! does the same when it first receives a copy. A copy on a directed edge
//! arrives with probability `gamma`; failed copies are still counted and are
//! never retransmitted.

use std::collections::VecDeque;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{ComponentLabeling, Graph, NodeId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisseminationOutcome {
    pub originator: NodeId,
    /// Reached nodes in order of first receipt; starts with the originator.
    pub reached: Vec<NodeId>,
    /// Transmissions attempted, echoes to the sender included.
    pub messages: u64,
    /// Sum over reached nodes of the hop count of the delivering path.
    pub distance_sum: u64,
}

impl DisseminationOutcome {
    pub fn reached_count(&self) -> usize {
        self.reached.len()
    }
}

pub fn disseminate(
    d: &Graph,
    originator: NodeId,
    gamma: f64,
    rng: &mut impl Rng,
) -> Result<DisseminationOutcome> {
    let n = d.node_count();
    if originator >= n {
        return Err(Error::NodeOutOfRange { node: originator, n });
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("gamma={gamma} outside [0, 1]")));
    }
    let lossless = gamma >= 1.0;
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    let mut reached = vec![originator];
    let mut messages = 0u64;
    let mut distance_sum = 0u64;
    dist[originator] = 0;
    queue.push_back(originator);
    while let Some(u) = queue.pop_front() {
        let next = dist[u] + 1;
        for &w in d.neighbors(u) {
            messages += 1;
            let delivered = lossless || rng.gen_bool(gamma);
            if delivered && dist[w] == u32::MAX {
                dist[w] = next;
                distance_sum += next as u64;
                reached.push(w);
                queue.push_back(w);
            }
        }
    }
    Ok(DisseminationOutcome {
        originator,
        reached,
        messages,
        distance_sum,
    })
}

/// Per-run ratios against the ambient graph, plus the graph-level mean degree.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricSample {
    /// Reached nodes over `|GCC_G|`.
    pub pn: f64,
    /// Messages over the spanning-tree cost `2(|GCC_G| - 1)`.
    pub pm: f64,
    /// Mean hop count to reached nodes in `D` over mean distance to `GCC_G` in `G`.
    pub pt: f64,
    /// Mean `D`-degree of the members of `GCC_G`.
    pub zd: f64,
}

/// Mean degree in `d` over the giant component of `g`.
pub fn giant_mean_degree(d: &Graph, labels_g: &ComponentLabeling) -> f64 {
    let members = labels_g.giant_members();
    if members.is_empty() {
        return 0.0;
    }
    members.iter().map(|&u| d.deg(u)).sum::<usize>() as f64 / members.len() as f64
}

/// Mean `G`-distance from `originator` to the other nodes of its component.
pub fn mean_distance(g: &Graph, originator: NodeId) -> Result<f64> {
    let dist = g.bfs_distances(originator)?;
    let (sum, count) = dist
        .iter()
        .flatten()
        .fold((0u64, 0usize), |(s, c), &d| (s + d as u64, c + 1));
    Ok(if count > 1 { sum as f64 / (count - 1) as f64 } else { 0.0 })
}

/// `(pn, pm, pt)` of one run. The mean `D`-path length excludes the
/// originator and is zero when nothing beyond it was reached.
pub fn run_ratios(
    g: &Graph,
    outcome: &DisseminationOutcome,
    labels_g: &ComponentLabeling,
) -> Result<(f64, f64, f64)> {
    let giant = labels_g.giant_size();
    if giant <= 1 {
        return Err(Error::DegenerateGiant(giant));
    }
    if !labels_g.in_giant(outcome.originator) {
        return Err(Error::InvalidParameter(format!(
            "originator {} outside GCC_G",
            outcome.originator
        )));
    }
    let pn = outcome.reached_count() as f64 / giant as f64;
    let pm = outcome.messages as f64 / (2.0 * (giant - 1) as f64);
    let others = outcome.reached_count() - 1;
    let mean_d = if others > 0 {
        outcome.distance_sum as f64 / others as f64
    } else {
        0.0
    };
    let pt = mean_d / mean_distance(g, outcome.originator)?;
    Ok((pn, pm, pt))
}

pub fn measure(
    g: &Graph,
    d: &Graph,
    outcome: &DisseminationOutcome,
    labels_g: &ComponentLabeling,
) -> Result<MetricSample> {
    let (pn, pm, pt) = run_ratios(g, outcome, labels_g)?;
    Ok(MetricSample {
        pn,
        pm,
        pt,
        zd: giant_mean_degree(d, labels_g),
    })
}
