//! Undirected simple graphs in compressed adjacency form.
//!
//! Both the ambient network `G` and the dissemination subgraph `D` are stored
//! as [`Graph`]. Neighbor lists are sorted by id so iteration order, and with
//! it every seeded sampling decision, is reproducible.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Immutable undirected simple graph on nodes `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    /// Build from an arbitrary edge list. Self-loops and repeated edges
    /// (in either orientation) are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut pairs = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::NodeOutOfRange { node: u.max(v), n });
            }
            if u != v {
                pairs.push((u, v));
                pairs.push((v, u));
            }
        }
        Ok(Self::from_directed_pairs(n, pairs))
    }

    /// `pairs` must hold both orientations of every edge.
    fn from_directed_pairs(n: usize, mut pairs: Vec<(NodeId, NodeId)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &pairs {
            offsets[u + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = pairs.into_iter().map(|(_, v)| v).collect();
        Self { offsets, targets }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    /// Degree of `u`; unchecked variant of [`Graph::degree`].
    #[inline]
    pub fn deg(&self, u: NodeId) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn degree(&self, u: NodeId) -> Result<usize> {
        self.check(u)?;
        Ok(self.deg(u))
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.node_count() && v < self.node_count() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|u| self.deg(u)).collect()
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.node_count() == other.node_count() && self.edges().all(|(u, v)| other.has_edge(u, v))
    }

    pub fn with_edge(&self, u: NodeId, v: NodeId) -> Result<Graph> {
        self.check(u)?;
        self.check(v)?;
        if u == v || self.has_edge(u, v) {
            return Err(Error::InvalidEdge(u, v));
        }
        Graph::from_edges(self.node_count(), self.edges().chain(std::iter::once((u, v))))
    }

    pub fn without_edge(&self, u: NodeId, v: NodeId) -> Result<Graph> {
        if !self.has_edge(u, v) {
            return Err(Error::InvalidEdge(u, v));
        }
        let (a, b) = (u.min(v), u.max(v));
        Graph::from_edges(
            self.node_count(),
            self.edges().filter(|&e| e != (a, b)),
        )
    }

    fn check(&self, u: NodeId) -> Result<()> {
        if u < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: u,
                n: self.node_count(),
            })
        }
    }

    /// Hop distances from `source`; `None` for unreachable nodes.
    pub fn bfs_distances(&self, source: NodeId) -> Result<Vec<Option<u32>>> {
        self.check(source)?;
        let mut dist = vec![u32::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u] + 1;
            for &w in self.neighbors(u) {
                if dist[w] == u32::MAX {
                    dist[w] = next;
                    queue.push_back(w);
                }
            }
        }
        Ok(dist
            .into_iter()
            .map(|d| (d != u32::MAX).then_some(d))
            .collect())
    }

    /// Connected components by iterative breadth-first search.
    pub fn components(&self) -> ComponentLabeling {
        let n = self.node_count();
        let mut component_id = vec![usize::MAX; n];
        let mut component_sizes = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if component_id[s] != usize::MAX {
                continue;
            }
            let id = component_sizes.len();
            component_id[s] = id;
            queue.push_back(s);
            let mut size = 0;
            while let Some(u) = queue.pop_front() {
                size += 1;
                for &w in self.neighbors(u) {
                    if component_id[w] == usize::MAX {
                        component_id[w] = id;
                        queue.push_back(w);
                    }
                }
            }
            component_sizes.push(size);
        }
        let giant_id = component_sizes
            .iter()
            .enumerate()
            .max_by(|(i, a), (j, b)| a.cmp(b).then(j.cmp(i)))
            .map(|(i, _)| i);
        ComponentLabeling {
            component_id,
            component_sizes,
            giant_id,
        }
    }

    /// Write the edge-list text format: `n m` then one `u v` line per edge, `u < v`.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{} {}", self.node_count(), self.edge_count())?;
        for (u, v) in self.edges() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }

    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Graph> {
        let mut lines = r.lines().enumerate();
        let parse_pair = |line: usize, s: &str| -> Result<(usize, usize)> {
            let mut it = s.split_ascii_whitespace();
            let mut next = || -> Result<usize> {
                it.next()
                    .ok_or_else(|| Error::Parse {
                        line,
                        msg: "expected two integers".into(),
                    })?
                    .parse()
                    .map_err(|e| Error::Parse {
                        line,
                        msg: format!("{e}"),
                    })
            };
            let a = next()?;
            let b = next()?;
            if it.next().is_some() {
                return Err(Error::Parse {
                    line,
                    msg: "trailing tokens".into(),
                });
            }
            Ok((a, b))
        };
        let (n, m) = match lines.next() {
            Some((i, l)) => parse_pair(i + 1, &l?)?,
            None => {
                return Err(Error::Parse {
                    line: 1,
                    msg: "missing header".into(),
                })
            }
        };
        let mut edges = Vec::with_capacity(m);
        for (i, l) in lines {
            let l = l?;
            if l.trim().is_empty() {
                continue;
            }
            let (u, v) = parse_pair(i + 1, &l)?;
            if u >= v || v >= n {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("edge ({u}, {v}) must satisfy u < v < n"),
                });
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        let g = Graph::from_edges(n, edges)?;
        if g.edge_count() != m {
            return Err(Error::Parse {
                line: 1,
                msg: "duplicate edges".into(),
            });
        }
        Ok(g)
    }
}

/// Connected-component labels of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentLabeling {
    pub component_id: Vec<usize>,
    pub component_sizes: Vec<usize>,
    /// Largest component, lowest id on ties; `None` only for the empty graph.
    pub giant_id: Option<usize>,
}

impl ComponentLabeling {
    pub fn giant_size(&self) -> usize {
        self.giant_id.map_or(0, |g| self.component_sizes[g])
    }

    pub fn in_giant(&self, u: NodeId) -> bool {
        self.giant_id == Some(self.component_id[u])
    }

    pub fn giant_members(&self) -> Vec<NodeId> {
        (0..self.component_id.len())
            .filter(|&u| self.in_giant(u))
            .collect()
    }

    pub fn size_of(&self, u: NodeId) -> usize {
        self.component_sizes[self.component_id[u]]
    }
}
