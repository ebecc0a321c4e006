use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::TreeError;
use crate::graph::GraphViolation;
use crate::quantity::Quantity;

/// A rooted spanning tree with vertex weights ω, edge flows φ and potentials p.
///
/// Vertices are `0..n`. Every non-root vertex stores the flow of the edge to
/// its parent. `processing_order` lists children before parents and ends at
/// the root; it is the reverse of a breadth-first order from the root, with
/// neighbours visited in ascending index order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedTree {
    omega: Vec<Quantity>,
    potential: Vec<Quantity>,
    parent: Vec<Option<usize>>,
    parent_flow: Vec<Quantity>,
    adjacency: Vec<Vec<(usize, Quantity)>>,
    order: Vec<usize>,
    root: usize,
    quant_bits: u32,
}

impl WeightedTree {
    pub fn new(
        omega: Vec<Quantity>,
        potential: Vec<Quantity>,
        edges: &[(usize, usize, Quantity)],
        root: usize,
        quant_bits: u32,
    ) -> Result<Self, TreeError> {
        let n = omega.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if potential.len() != n {
            return Err(TreeError::LengthMismatch);
        }
        if root >= n {
            return Err(TreeError::RootOutOfRange { root, n });
        }
        if edges.len() != n - 1 {
            return Err(TreeError::EdgeCount { expected: n - 1, found: edges.len() });
        }
        if let Some(vertex) = omega.iter().position(|w| !w.is_positive()) {
            return Err(TreeError::Invalid(GraphViolation::NonpositiveWeight { vertex }));
        }
        if let Some(vertex) = potential.iter().position(|p| p.raw() < 0) {
            return Err(TreeError::Invalid(GraphViolation::NegativePotential { vertex }));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v, flow) in edges {
            if u >= n || v >= n {
                return Err(TreeError::EdgeOutOfRange(u, v));
            }
            if u == v {
                return Err(TreeError::Invalid(GraphViolation::SelfLoop { vertex: u }));
            }
            if !flow.is_positive() {
                return Err(TreeError::Invalid(GraphViolation::NonpositiveFlow { u, v }));
            }
            adjacency[u].push((v, flow));
            adjacency[v].push((u, flow));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(w, _)| w);
        }

        let mut parent = vec![None; n];
        let mut parent_flow = vec![Quantity::ZERO; n];
        let mut seen = vec![false; n];
        let mut bfs = Vec::with_capacity(n);
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(x) = queue.pop_front() {
            bfs.push(x);
            for &(y, flow) in &adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    parent_flow[y] = flow;
                    queue.push_back(y);
                }
            }
        }
        // n-1 edges and connected implies acyclic.
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(TreeError::NotSpanning(v));
        }
        bfs.reverse();
        Ok(WeightedTree { omega, potential, parent, parent_flow, adjacency, order: bfs, root, quant_bits })
    }

    /// Tree with integer weights (quantum 1). Handy for fixtures.
    pub fn from_integers(
        omega: &[i64],
        potential: &[i64],
        edges: &[(usize, usize, i64)],
        root: usize,
    ) -> Result<Self, TreeError> {
        let edges: Vec<_> = edges.iter().map(|&(u, v, f)| (u, v, Quantity::from_raw(f))).collect();
        Self::new(
            omega.iter().copied().map(Quantity::from_raw).collect(),
            potential.iter().copied().map(Quantity::from_raw).collect(),
            &edges,
            root,
            0,
        )
    }

    /// Same weights, different root.
    pub fn rerooted(&self, root: usize) -> Result<Self, TreeError> {
        Self::new(self.omega.clone(), self.potential.clone(), &self.edge_list(), root, self.quant_bits)
    }

    /// Same tree with new potentials.
    pub fn with_potentials(&self, potential: Vec<Quantity>) -> Result<Self, TreeError> {
        Self::new(self.omega.clone(), potential, &self.edge_list(), self.root, self.quant_bits)
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn quant_bits(&self) -> u32 {
        self.quant_bits
    }

    pub fn omega(&self) -> &[Quantity] {
        &self.omega
    }

    pub fn potentials(&self) -> &[Quantity] {
        &self.potential
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    /// Flow of the edge to the parent, zero at the root.
    pub fn parent_flow(&self, v: usize) -> Quantity {
        self.parent_flow[v]
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, Quantity)] {
        &self.adjacency[v]
    }

    /// Leaves-first order ending with the root.
    pub fn processing_order(&self) -> &[usize] {
        &self.order
    }

    /// `(child, parent, flow)` for every edge, in ascending child order.
    pub fn edge_list(&self) -> Vec<(usize, usize, Quantity)> {
        (0..self.len())
            .filter_map(|v| self.parent[v].map(|p| (v, p, self.parent_flow[v])))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path4(root: usize) -> WeightedTree {
        WeightedTree::from_integers(&[1; 4], &[0; 4], &[(0, 1, 1), (1, 2, 1), (2, 3, 1)], root).unwrap()
    }

    #[test]
    fn path_rooted_at_endpoint() {
        let t = path4(3);
        assert_eq!(t.processing_order(), &[0, 1, 2, 3]);
        assert_eq!(t.parent(3), None);
        assert_eq!(t.parent(0), Some(1));
    }

    #[test]
    fn star_leaves_precede_center() {
        let edges: Vec<_> = (1..6).map(|v| (0, v, 1)).collect();
        let t = WeightedTree::from_integers(&[1; 6], &[0; 6], &edges, 0).unwrap();
        assert_eq!(*t.processing_order().last().unwrap(), 0);
        assert_eq!(t.processing_order().len(), 6);
    }

    #[test]
    fn exactly_one_root() {
        let t = path4(1);
        assert_eq!(t.parents().iter().filter(|p| p.is_none()).count(), 1);
        assert_eq!(t.parents().iter().filter(|p| p.is_some()).count(), 3);
        let mut pos = [0; 4];
        for (i, &v) in t.processing_order().iter().enumerate() {
            pos[v] = i;
        }
        for v in 0..4 {
            if let Some(p) = t.parent(v) {
                assert!(pos[v] < pos[p]);
            }
        }
    }

    #[test]
    fn rejects_non_trees() {
        let cyc = WeightedTree::from_integers(&[1; 4], &[0; 4], &[(0, 1, 1), (1, 2, 1), (2, 0, 1)], 0);
        assert!(matches!(cyc, Err(TreeError::NotSpanning(3))));
        let short = WeightedTree::from_integers(&[1; 3], &[0; 3], &[(0, 1, 1)], 0);
        assert!(matches!(short, Err(TreeError::EdgeCount { .. })));
        let root = WeightedTree::from_integers(&[1; 2], &[0; 2], &[(0, 1, 1)], 5);
        assert!(matches!(root, Err(TreeError::RootOutOfRange { .. })));
        let neg = WeightedTree::from_integers(&[1; 2], &[0, -1], &[(0, 1, 1)], 0);
        assert!(matches!(neg, Err(TreeError::Invalid(GraphViolation::NegativePotential { vertex: 1 }))));
    }

    #[test]
    fn reroot_keeps_weights() {
        let t = path4(3);
        let r = t.rerooted(0).unwrap();
        assert_eq!(r.processing_order(), &[3, 2, 1, 0]);
        assert_eq!(r.omega(), t.omega());
        let mut a = t.edge_list().iter().map(|&(u, v, f)| (u.min(v), u.max(v), f)).collect::<Vec<_>>();
        let mut b = r.edge_list().iter().map(|&(u, v, f)| (u.min(v), u.max(v), f)).collect::<Vec<_>>();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}
