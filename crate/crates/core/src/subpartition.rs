use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{SolverError, SubpartitionError};
use crate::quantity::Rational;
use crate::tree::WeightedTree;

/// `k` pairwise-disjoint nonempty vertex sets over `0..n`. Vertices outside
/// every part are residue elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subpartition {
    n: usize,
    parts: Vec<Vec<usize>>,
}

impl Subpartition {
    /// Parts are kept in the given order; vertices inside each part are sorted.
    pub fn new(n: usize, parts: Vec<Vec<usize>>) -> Result<Self, SubpartitionError> {
        let mut owner = vec![false; n];
        let mut parts = parts;
        for (i, part) in parts.iter_mut().enumerate() {
            if part.is_empty() {
                return Err(SubpartitionError::EmptyPart(i));
            }
            part.sort_unstable();
            for &v in part.iter() {
                if v >= n {
                    return Err(SubpartitionError::VertexOutOfRange { vertex: v, n });
                }
                if std::mem::replace(&mut owner[v], true) {
                    return Err(SubpartitionError::Overlap(v));
                }
            }
        }
        Ok(Subpartition { n, parts })
    }

    /// Build from per-vertex part indices (`None` = residue). Parts that end up
    /// empty are rejected.
    pub fn from_labels(labels: &[Option<usize>], k: usize) -> Result<Self, SubpartitionError> {
        let mut parts = vec![Vec::new(); k];
        for (v, l) in labels.iter().enumerate() {
            if let Some(i) = *l {
                if i >= k {
                    return Err(SubpartitionError::EmptyPart(i));
                }
                parts[i].push(v);
            }
        }
        Self::new(labels.len(), parts)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    /// Part index of every vertex, `None` for residue elements.
    pub fn labels(&self) -> Vec<Option<usize>> {
        let mut labels = vec![None; self.n];
        for (i, part) in self.parts.iter().enumerate() {
            for &v in part {
                labels[v] = Some(i);
            }
        }
        labels
    }

    pub fn residue(&self) -> Vec<usize> {
        self.labels().iter().enumerate().filter(|(_, l)| l.is_none()).map(|(v, _)| v).collect()
    }

    pub fn residue_number(&self) -> usize {
        self.n - self.parts.iter().map(Vec::len).sum::<usize>()
    }

    /// Parts as sorted sets, in sorted order: equal for subpartitions that
    /// differ only by part order.
    pub fn canonical(&self) -> Vec<Vec<usize>> {
        let mut parts = self.parts.clone();
        parts.sort();
        parts
    }

    pub(crate) fn replace_part(&mut self, i: usize, part: Vec<usize>) {
        let mut part = part;
        part.sort_unstable();
        self.parts[i] = part;
    }
}

/// Integer pieces of a normalized flow `(φ(∂A) + α·p(A)) / ω(A)`, in quanta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FlowParts {
    pub boundary: i128,
    pub potential: i128,
    pub weight: i128,
}

impl FlowParts {
    pub fn value(&self, alpha: &Rational) -> Rational {
        let numer = Rational::from_integer(BigInt::from(self.boundary)) + alpha * BigInt::from(self.potential);
        numer / BigInt::from(self.weight)
    }
}

/// Boundary flow, potential and weight of every part.
pub fn part_flow_parts(tree: &WeightedTree, sub: &Subpartition) -> Result<Vec<FlowParts>, SolverError> {
    if sub.n() != tree.len() {
        return Err(SubpartitionError::SizeMismatch { expected: tree.len(), found: sub.n() }.into());
    }
    let labels = sub.labels();
    let mut acc = vec![FlowParts::default(); sub.k()];
    for (v, l) in labels.iter().enumerate() {
        if let Some(i) = *l {
            acc[i].weight += tree.omega()[v].raw() as i128;
            acc[i].potential += tree.potentials()[v].raw() as i128;
        }
    }
    for (child, parent, flow) in tree.edge_list() {
        let (a, b) = (labels[child], labels[parent]);
        if a != b {
            for i in [a, b].into_iter().flatten() {
                acc[i].boundary += flow.raw() as i128;
            }
        }
    }
    Ok(acc)
}

/// Normalized flow of each part under potential scale `alpha`.
pub fn part_flows(tree: &WeightedTree, sub: &Subpartition, alpha: &Rational) -> Result<Vec<Rational>, SolverError> {
    if alpha.is_negative() {
        return Err(SolverError::NegativeAlpha);
    }
    Ok(part_flow_parts(tree, sub)?.iter().map(|p| p.value(alpha)).collect())
}

/// `max_i (φ(∂A_i) + α·p(A_i)) / ω(A_i)`, exactly. Zero for an empty subpartition.
pub fn subpartition_cost(tree: &WeightedTree, sub: &Subpartition, alpha: &Rational) -> Result<Rational, SolverError> {
    Ok(part_flows(tree, sub, alpha)?.into_iter().max().unwrap_or_else(Rational::zero))
}

/// Normalized flow of an arbitrary vertex set.
pub fn set_flow(tree: &WeightedTree, set: &[usize], alpha: &Rational) -> Rational {
    let mut inside = vec![false; tree.len()];
    let mut parts = FlowParts::default();
    for &v in set {
        inside[v] = true;
        parts.weight += tree.omega()[v].raw() as i128;
        parts.potential += tree.potentials()[v].raw() as i128;
    }
    for (child, parent, flow) in tree.edge_list() {
        if inside[child] != inside[parent] {
            parts.boundary += flow.raw() as i128;
        }
    }
    parts.value(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn path(n: usize, pot: &[i64]) -> WeightedTree {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v, 1)).collect();
        WeightedTree::from_integers(&vec![1; n], pot, &edges, n - 1).unwrap()
    }

    #[test]
    fn balanced_path_cut() {
        let t = path(4, &[0; 4]);
        let s = Subpartition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(subpartition_cost(&t, &s, &Rational::one()).unwrap(), r(1, 2));
    }

    #[test]
    fn whole_tree_costs_nothing() {
        let t = path(5, &[0; 5]);
        let s = Subpartition::new(5, vec![(0..5).collect()]).unwrap();
        assert_eq!(subpartition_cost(&t, &s, &Rational::one()).unwrap(), r(0, 1));
    }

    #[test]
    fn potential_enters_scaled() {
        let t = path(3, &[0, 0, 10]);
        let s = Subpartition::new(3, vec![vec![0], vec![1, 2]]).unwrap();
        assert_eq!(subpartition_cost(&t, &s, &Rational::one()).unwrap(), r(11, 2));
        assert_eq!(subpartition_cost(&t, &s, &r(1, 10)).unwrap(), r(1, 1));
    }

    #[test]
    fn invalid_subpartitions() {
        assert_eq!(Subpartition::new(3, vec![vec![0, 1], vec![1]]), Err(SubpartitionError::Overlap(1)));
        assert_eq!(Subpartition::new(3, vec![vec![0], vec![]]), Err(SubpartitionError::EmptyPart(1)));
        assert!(matches!(Subpartition::new(3, vec![vec![3]]), Err(SubpartitionError::VertexOutOfRange { .. })));
        let t = path(3, &[0; 3]);
        let s = Subpartition::new(4, vec![vec![0]]).unwrap();
        assert!(subpartition_cost(&t, &s, &Rational::one()).is_err());
        let s = Subpartition::new(3, vec![vec![0]]).unwrap();
        assert_eq!(subpartition_cost(&t, &s, &r(-1, 2)), Err(SolverError::NegativeAlpha));
    }

    #[test]
    fn residue_bookkeeping() {
        let s = Subpartition::new(5, vec![vec![4, 0], vec![2]]).unwrap();
        assert_eq!(s.parts()[0], vec![0, 4]);
        assert_eq!(s.residue(), vec![1, 3]);
        assert_eq!(s.residue_number(), 2);
        assert_eq!(Subpartition::from_labels(&s.labels(), 2).unwrap(), s);
    }

    #[test]
    fn cost_is_max_of_independent_flows() {
        let t = path(6, &[3, 0, 1, 0, 2, 5]);
        let s = Subpartition::new(6, vec![vec![0, 1], vec![3], vec![5]]).unwrap();
        let alpha = r(1, 2);
        let independent = s.parts().iter().map(|p| set_flow(&t, p, &alpha)).max().unwrap();
        assert_eq!(subpartition_cost(&t, &s, &alpha).unwrap(), independent);
    }
}
