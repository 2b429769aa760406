//! Exact enumeration of uniform-rule choice configurations on small graphs.
#![allow(dead_code)]

use dsub::{Graph, NodeId};

/// Distinct chosen sets of one node with their probabilities. Ordered raw
/// picks are collapsed: `{v}` arises from one pick of `v` or two picks of `v`.
pub fn chosen_sets(g: &Graph, u: NodeId, alpha: f64) -> Vec<(Vec<NodeId>, f64)> {
    let nb = g.neighbors(u);
    let a = nb.len() as f64;
    if nb.is_empty() {
        return vec![(Vec::new(), 1.0)];
    }
    let mut out = Vec::new();
    for &v in nb {
        out.push((vec![v], (1.0 - alpha) / a + alpha / (a * a)));
    }
    for (i, &v) in nb.iter().enumerate() {
        for &w in &nb[i + 1..] {
            out.push((vec![v, w], 2.0 * alpha / (a * a)));
        }
    }
    out
}

/// Raw ordered picks of one node: `(first, second)` with probabilities.
pub fn raw_picks(g: &Graph, u: NodeId, alpha: f64) -> Vec<((NodeId, Option<NodeId>), f64)> {
    let nb = g.neighbors(u);
    let a = nb.len() as f64;
    let mut out = Vec::new();
    for &v in nb {
        out.push(((v, None), (1.0 - alpha) / a));
        for &w in nb {
            out.push(((v, Some(w)), alpha / (a * a)));
        }
    }
    out
}

fn component_sizes(n: usize, edges: &[(NodeId, NodeId)]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for &(u, v) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
        }
    }
    let mut size = vec![0; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        size[r] += 1;
    }
    (0..n).map(|x| size[find(&mut parent, x)]).collect()
}

/// Exact expected reach fraction `E|C_D(o)| / n` with the originator uniform
/// over all nodes of a connected graph.
pub fn exact_reach_fraction(g: &Graph, alpha: f64) -> f64 {
    let n = g.node_count();
    let per_node: Vec<Vec<(Vec<NodeId>, f64)>> = (0..n).map(|u| chosen_sets(g, u, alpha)).collect();
    let mut idx = vec![0usize; n];
    let mut total = 0.0;
    loop {
        let mut p = 1.0;
        let mut edges = Vec::new();
        for u in 0..n {
            let (set, pu) = &per_node[u][idx[u]];
            p *= pu;
            edges.extend(set.iter().map(|&v| (u, v)));
        }
        let sizes = component_sizes(n, &edges);
        total += p * sizes.iter().sum::<usize>() as f64 / (n * n) as f64;
        // Odometer increment.
        let mut k = 0;
        loop {
            if k == n {
                return total;
            }
            idx[k] += 1;
            if idx[k] < per_node[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Fixed corpus of 24 connected graphs on 2 to 6 nodes: paths, stars,
/// cycles, cliques and a few irregular shapes.
pub fn corpus() -> Vec<Graph> {
    let lists: Vec<(usize, Vec<(usize, usize)>)> = vec![
        (2, vec![(0, 1)]),
        (3, vec![(0, 1), (1, 2)]),
        (3, vec![(0, 1), (1, 2), (0, 2)]),
        (4, vec![(0, 1), (1, 2), (2, 3)]),
        (4, vec![(0, 1), (0, 2), (0, 3)]),
        (4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]),
        (4, vec![(0, 1), (1, 2), (2, 0), (2, 3)]),
        (4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]),
        (4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
        (5, vec![(0, 1), (1, 2), (2, 3), (3, 4)]),
        (5, vec![(0, 1), (0, 2), (0, 3), (0, 4)]),
        (5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]),
        (5, vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]),
        (5, vec![(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4)]),
        (5, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (2, 4)]),
        (5, vec![(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]),
        (6, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]),
        (6, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]),
        (6, vec![(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]),
        (6, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)]),
        (6, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3), (1, 4), (2, 5)]),
        (6, vec![(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]),
        (6, vec![(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 5)]),
        (6, vec![(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]),
    ];
    lists
        .into_iter()
        .map(|(n, e)| Graph::from_edges(n, e).expect("valid corpus graph"))
        .collect()
}

/// Monte Carlo estimate of the same reach fraction: a fresh `D` per trial,
/// originator uniform. Returns `(mean, standard error)`.
pub fn monte_carlo_reach(g: &Graph, alpha: f64, trials: usize, seed: u64) -> (f64, f64) {
    use dsub::dissemination::disseminate;
    use dsub::heuristics::{build_subgraph, make_choices, Heuristic};
    use rand::Rng;
    let n = g.node_count();
    let mut rng = dsub::rng::stream(seed, &[]);
    let (mut s, mut s2) = (0.0, 0.0);
    for t in 0..trials {
        let table = make_choices(g, Heuristic::Uniform, alpha, dsub::rng::derive(seed, &[t as u64])).unwrap();
        let d = build_subgraph(g, &table).unwrap();
        let o = rng.gen_range(0..n);
        let x = disseminate(&d, o, 1.0, &mut rng).unwrap().reached_count() as f64 / n as f64;
        s += x;
        s2 += x * x;
    }
    let m = s / trials as f64;
    let var = (s2 / trials as f64 - m * m) * trials as f64 / (trials - 1) as f64;
    (m, (var.max(0.0) / trials as f64).sqrt())
}

/// Largest absolute gap between the closed-form choice probabilities and
/// their values enumerated from raw picks, over all nodes and neighbors.
pub fn choice_formula_gap(g: &Graph, alpha: f64) -> f64 {
    let pi = dsub::analytics::ChoiceProbabilities::new(alpha);
    let mut worst: f64 = 0.0;
    let mut check = |x: f64, y: f64| worst = worst.max((x - y).abs());
    for u in 0..g.node_count() {
        let a = g.deg(u);
        let picks = raw_picks(g, u, alpha);
        check(picks.iter().map(|(_, p)| p).sum(), 1.0);
        let one: f64 = picks
            .iter()
            .filter(|((v, w), _)| w.map_or(true, |w| w == *v))
            .map(|(_, p)| p)
            .sum();
        check(one, pi.random_one(a));
        check(1.0 - one, pi.random_two(a));
        for &x in g.neighbors(u) {
            let others = |(v, w): &(NodeId, Option<NodeId>)| {
                let mut s = vec![*v];
                s.extend(*w);
                s.sort();
                s.dedup();
                s.retain(|&y| y != x);
                s.len()
            };
            let has_x = |(v, w): &(NodeId, Option<NodeId>)| *v == x || *w == Some(x);
            let mass = |f: &dyn Fn(&(NodeId, Option<NodeId>)) -> bool| -> f64 {
                picks.iter().filter(|(c, _)| f(c)).map(|(_, p)| p).sum()
            };
            for k in 0..=2 {
                check(mass(&|c| others(c) == k), pi.chosen(a, k));
            }
            if alpha < 1.0 {
                check(mass(&|c| c.1.is_none() && has_x(c)) / (1.0 - alpha), pi.not_chosen_single(a));
            }
            for k in 0..=1 {
                check(
                    mass(&|c| c.1.is_some() && has_x(c) && others(c) == k) / alpha,
                    pi.not_chosen_double(a, k),
                );
            }
            check(mass(&|c| has_x(c)), pi.reverse_pick(a));
        }
    }
    worst
}
