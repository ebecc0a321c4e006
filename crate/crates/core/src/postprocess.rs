//! Residue reduction: grow parts into adjacent residue subtrees while their
//! normalized flow stays within the optimal cost.

use std::cmp::Ordering;
use std::collections::VecDeque;

use serde::Serialize;

use crate::error::PostprocessError;
use crate::quantity::{format_rational, Rational};
use crate::solver::scaled::{AlphaScale, Threshold};
use crate::subpartition::{part_flows, set_flow, subpartition_cost, Subpartition};
use crate::tree::WeightedTree;

/// An edge joining a part to a residue element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BreakEdge {
    /// Endpoint inside the residue subtree (a start vertex).
    pub residue_end: usize,
    pub part_end: usize,
    pub part: usize,
}

/// A connected component of residue elements once break edges are removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueSubtree {
    pub vertices: Vec<usize>,
    pub start_vertices: Vec<usize>,
    pub break_edges: Vec<BreakEdge>,
}

impl ResidueSubtree {
    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

/// All residue subtrees, ordered by smallest vertex.
pub fn residue_subtrees(tree: &WeightedTree, sub: &Subpartition) -> Vec<ResidueSubtree> {
    let labels = sub.labels();
    let n = tree.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if labels[start].is_some() || seen[start] {
            continue;
        }
        let mut vertices = Vec::new();
        let mut break_edges = Vec::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(x) = stack.pop() {
            vertices.push(x);
            for &(y, _) in tree.neighbors(x) {
                match labels[y] {
                    Some(part) => break_edges.push(BreakEdge { residue_end: x, part_end: y, part }),
                    None if !seen[y] => {
                        seen[y] = true;
                        stack.push(y);
                    }
                    None => {}
                }
            }
        }
        vertices.sort_unstable();
        break_edges.sort_unstable();
        let mut start_vertices: Vec<usize> = break_edges.iter().map(|e| e.residue_end).collect();
        start_vertices.dedup();
        out.push(ResidueSubtree { vertices, start_vertices, break_edges });
    }
    out
}

/// Try to enlarge part `part` through `edge` into the residue subtree `subtree`.
///
/// The part and the start vertex are contracted into one root `s'`, and a
/// leaves-to-root pass over the subtree merges every accumulated set whose
/// potential minus its parent flow fits under `threshold` times its weight.
/// Each vertex starts with its scaled potential plus the flow of every edge
/// leaving the contracted subtree. The residue vertices collected at `s'` are
/// returned only if the enlarged part's normalized flow is at most
/// `threshold`; otherwise the result is empty.
pub fn absorb_subtree(
    tree: &WeightedTree,
    sub: &Subpartition,
    part: usize,
    edge: BreakEdge,
    subtree: &ResidueSubtree,
    threshold: &Rational,
    alpha: &Rational,
) -> Result<Vec<usize>, PostprocessError> {
    let members = sub.parts().get(part).ok_or(PostprocessError::PartOutOfRange(part))?;
    let s = edge.residue_end;
    let adjacent = tree.neighbors(s).iter().any(|&(y, _)| y == edge.part_end);
    if edge.part != part || !adjacent || members.binary_search(&edge.part_end).is_err() || !subtree.contains(s) {
        return Err(PostprocessError::NotBreakEdge(edge.part_end, s));
    }
    let scale = AlphaScale::new(alpha)?;
    let n = tree.len();

    // Local indexing: 0 is the contracted root s'.
    let mut local = vec![usize::MAX; n];
    let mut in_part = vec![false; n];
    for &v in members {
        in_part[v] = true;
    }
    let mut order = vec![s];
    let mut parent = vec![usize::MAX];
    let mut parent_flow = vec![0u128];
    local[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        for &(y, flow) in tree.neighbors(x) {
            if local[y] == usize::MAX && !in_part[y] && subtree.contains(y) {
                local[y] = order.len();
                order.push(y);
                parent.push(local[x]);
                parent_flow.push(scale.unit(flow.raw())?);
                queue.push_back(y);
            }
        }
    }

    let m = order.len();
    let mut weight = vec![0u128; m];
    let mut pot = vec![0u128; m];
    for (i, &x) in order.iter().enumerate() {
        weight[i] = scale.unit(tree.omega()[x].raw())?;
        pot[i] = scale.potential(tree.potentials()[x].raw())?;
    }
    for &v in members {
        weight[0] += scale.unit(tree.omega()[v].raw())?;
        pot[0] += scale.potential(tree.potentials()[v].raw())?;
    }
    // Edges leaving the contracted subtree.
    let in_contracted = |y: usize| in_part[y] || local[y] != usize::MAX;
    for (i, &x) in order.iter().enumerate() {
        for &(y, flow) in tree.neighbors(x) {
            if !in_contracted(y) {
                pot[i] += scale.unit(flow.raw())?;
            }
        }
    }
    // Boundary of the part itself. An edge from the part to a subtree vertex
    // other than s can only occur for a disconnected part; it is counted as
    // boundary and the exact check below settles the outcome.
    for &v in members {
        for &(y, flow) in tree.neighbors(v) {
            if !in_part[y] && y != s {
                pot[0] += scale.unit(flow.raw())?;
            }
        }
    }

    let cmp = Threshold::new(threshold);
    let mut joined = vec![false; m];
    joined[0] = true;
    let mut merged_into_parent = vec![false; m];
    for i in (1..m).rev() {
        let u = parent[i];
        let f = parent_flow[i];
        if cmp.compare(pot[i], weight[i], f) != Ordering::Greater {
            merged_into_parent[i] = true;
            pot[u] += pot[i];
            weight[u] += weight[i];
        } else {
            pot[u] += f;
        }
    }
    // BFS order: parents precede children.
    for i in 1..m {
        joined[i] = merged_into_parent[i] && joined[parent[i]];
    }
    let absorbed: Vec<usize> = {
        let mut v: Vec<usize> = (0..m).filter(|&i| joined[i]).map(|i| order[i]).collect();
        v.sort_unstable();
        v
    };

    let mut enlarged = members.clone();
    enlarged.extend_from_slice(&absorbed);
    if set_flow(tree, &enlarged, alpha) <= *threshold {
        Ok(absorbed)
    } else {
        Ok(Vec::new())
    }
}

/// Repeatedly absorb residue subtrees into adjacent parts, most loaded part
/// first, until a full sweep changes nothing. Cost stays at most `threshold`.
pub fn reduce_residue(
    tree: &WeightedTree,
    sub: &Subpartition,
    threshold: &Rational,
    alpha: &Rational,
) -> Result<Subpartition, PostprocessError> {
    let cost = subpartition_cost(tree, sub, alpha)?;
    if cost > *threshold {
        return Err(PostprocessError::CostAboveThreshold {
            cost: format_rational(&cost),
            threshold: format_rational(threshold),
        });
    }
    let mut current = sub.clone();
    'sweep: loop {
        if current.residue_number() == 0 {
            break;
        }
        let subtrees = residue_subtrees(tree, &current);
        let flows = part_flows(tree, &current, alpha)?;
        let mut by_flow: Vec<usize> = (0..current.k()).collect();
        by_flow.sort_by(|&a, &b| flows[b].cmp(&flows[a]).then(a.cmp(&b)));
        for &part in &by_flow {
            for c in &subtrees {
                for &edge in c.break_edges.iter().filter(|e| e.part == part) {
                    let absorbed = absorb_subtree(tree, &current, part, edge, c, threshold, alpha)?;
                    if !absorbed.is_empty() {
                        let mut grown = current.parts()[part].clone();
                        grown.extend(absorbed);
                        current.replace_part(part, grown);
                        continue 'sweep;
                    }
                }
            }
        }
        break;
    }
    Ok(current)
}

/// Give every residue vertex the label of its nearest part along tree edges
/// (hop count; ties to the lower part index). `None` when there are no parts.
pub fn complete_labeling(tree: &WeightedTree, sub: &Subpartition) -> Option<Vec<usize>> {
    if sub.k() == 0 {
        return None;
    }
    let mut label = sub.labels();
    let mut frontier: Vec<usize> = (0..tree.len()).filter(|&v| label[v].is_some()).collect();
    while !frontier.is_empty() {
        let mut next: Vec<usize> = Vec::new();
        let mut proposed: Vec<Option<usize>> = vec![None; tree.len()];
        for &x in &frontier {
            for &(y, _) in tree.neighbors(x) {
                if label[y].is_none() {
                    if proposed[y].is_none() {
                        next.push(y);
                    }
                    proposed[y] = Some(proposed[y].map_or(label[x].unwrap(), |p| p.min(label[x].unwrap())));
                }
            }
        }
        for &y in &next {
            label[y] = proposed[y];
        }
        frontier = next;
    }
    Some(label.into_iter().map(|l| l.expect("tree is connected")).collect())
}
