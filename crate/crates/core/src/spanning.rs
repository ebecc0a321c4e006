use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::SpanningError;
use crate::graph::{validate_graph, AffinityGraph};
use crate::quantity::Quantity;
use crate::tree::WeightedTree;

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        match self.rank[a].cmp(&self.rank[b]) {
            std::cmp::Ordering::Less => self.parent[a] = b,
            std::cmp::Ordering::Greater => self.parent[b] = a,
            std::cmp::Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
            }
        }
        true
    }
}

/// Minimum spanning tree over the edge distances (Kruskal). Ties are broken
/// by the lexicographic order of `(min endpoint, max endpoint)`. Edges are
/// returned as `(u, v)` with `u < v`, in the order they were accepted.
pub fn minimum_spanning_tree(graph: &AffinityGraph) -> Result<Vec<(usize, usize)>, SpanningError> {
    validate_graph(graph).map_err(SpanningError::Invalid)?;
    let n = graph.len();
    let mut edges: Vec<(f64, usize, usize)> =
        graph.edges().iter().map(|e| (e.distance, e.u.min(e.v), e.u.max(e.v))).collect();
    edges.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut sets = DisjointSets::new(n);
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    for (_, u, v) in edges {
        if sets.union(u, v) {
            out.push((u, v));
            if out.len() + 1 == n {
                break;
            }
        }
    }
    if out.len() + 1 < n {
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for v in 0..n {
            groups.entry(sets.find(v)).or_default().push(v);
        }
        let mut components: Vec<Vec<usize>> = groups.into_values().collect();
        components.sort();
        return Err(SpanningError::Disconnected(components));
    }
    Ok(out)
}

/// Where tree vertex weights come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum TreeWeights {
    /// Keep ω from the affinity graph.
    #[default]
    Inherit,
    /// ω(x) = sum of tree-edge flows at x.
    Recompute,
}

/// Vertex of maximum ω, lowest index on ties.
pub fn default_root(graph: &AffinityGraph) -> usize {
    let mut best = 0;
    for (v, w) in graph.omega().iter().enumerate() {
        if *w > graph.omega()[best] {
            best = v;
        }
    }
    best
}

/// Restrict the graph to `mst_edges` and root it.
pub fn build_weighted_tree(
    mst_edges: &[(usize, usize)],
    graph: &AffinityGraph,
    root: usize,
    weights: TreeWeights,
) -> Result<WeightedTree, SpanningError> {
    let flows: HashMap<(usize, usize), Quantity> =
        graph.edges().iter().map(|e| ((e.u.min(e.v), e.u.max(e.v)), e.flow)).collect();
    let mut edges = Vec::with_capacity(mst_edges.len());
    for &(u, v) in mst_edges {
        let flow = *flows
            .get(&(u.min(v), u.max(v)))
            .ok_or(crate::error::TreeError::EdgeOutOfRange(u, v))?;
        edges.push((u, v, flow));
    }
    let omega = match weights {
        TreeWeights::Inherit => graph.omega().to_vec(),
        TreeWeights::Recompute => {
            let mut w = vec![0i64; graph.len()];
            for &(u, v, f) in &edges {
                w[u] += f.raw();
                w[v] += f.raw();
            }
            w.into_iter().map(Quantity::from_raw).collect()
        }
    };
    Ok(WeightedTree::new(omega, graph.potentials().to_vec(), &edges, root, graph.quant_bits())?)
}
