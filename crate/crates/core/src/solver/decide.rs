use std::cmp::Ordering;

use num_traits::Signed;

use super::scaled::{ScaledTree, Threshold, NO_PARENT};
use crate::error::SolverError;
use crate::quantity::Rational;
use crate::subpartition::Subpartition;
use crate::tree::WeightedTree;

/// Outcome of the linear-time decision pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    /// A k-subpartition of cost at most N, parts in discovery order.
    Yes(Subpartition),
    No,
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }

    pub fn certificate(self) -> Option<Subpartition> {
        match self {
            Decision::Yes(s) => Some(s),
            Decision::No => None,
        }
    }
}

/// Work counters of one decision pass.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecideStats {
    /// Vertices whose accumulated set was examined.
    pub visited: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Fate {
    Pending,
    Cut(usize),
    Merged,
    Dropped,
}

pub(crate) fn check_k(k: usize, n: usize) -> Result<(), SolverError> {
    if k < 2 || k > n {
        return Err(SolverError::KOutOfRange { k, n });
    }
    Ok(())
}

/// Decide whether some k-subpartition has `cost_{k,α} ≤ threshold`.
///
/// One leaves-to-root pass. Each vertex carries the set accumulated below it
/// together with its potential `P` (scaled potentials plus flows of edges
/// already cut away) and weight `W`; with `f` the flow to the parent (zero at
/// the root):
///
/// * `P + f ≤ N·W`: the set becomes a part and `f` joins the parent's potential;
/// * `P − f < N·W`: the set merges into the parent;
/// * otherwise the set is dropped into the residue and `f` joins the parent's potential.
///
/// The pass stops as soon as `k` parts exist.
pub fn decide_iso(tree: &WeightedTree, k: usize, threshold: &Rational, alpha: &Rational) -> Result<Decision, SolverError> {
    decide_iso_instrumented(tree, k, threshold, alpha).map(|(d, _)| d)
}

pub fn decide_iso_instrumented(
    tree: &WeightedTree,
    k: usize,
    threshold: &Rational,
    alpha: &Rational,
) -> Result<(Decision, DecideStats), SolverError> {
    check_k(k, tree.len())?;
    if threshold.is_negative() {
        return Err(SolverError::NegativeThreshold);
    }
    let scaled = ScaledTree::new(tree, alpha)?;
    let mut ws = Workspace::new(scaled.len());
    Ok(decide_scaled(&scaled, k, &Threshold::new(threshold), &mut ws))
}

/// Reusable buffers for repeated passes over one scaled tree.
pub(crate) struct Workspace {
    potential: Vec<u128>,
    weight: Vec<u128>,
    fate: Vec<Fate>,
}

impl Workspace {
    pub fn new(n: usize) -> Self {
        Workspace { potential: vec![0; n], weight: vec![0; n], fate: vec![Fate::Pending; n] }
    }
}

pub(crate) fn decide_scaled(
    tree: &ScaledTree,
    k: usize,
    threshold: &Threshold,
    ws: &mut Workspace,
) -> (Decision, DecideStats) {
    let n = tree.len();
    ws.potential.copy_from_slice(&tree.potential);
    ws.weight.copy_from_slice(&tree.weight);
    ws.fate.fill(Fate::Pending);

    let mut found = 0usize;
    let mut stats = DecideStats::default();
    for i in 0..n {
        if found == k {
            break;
        }
        stats.visited += 1;
        let parent = tree.parent_pos[i];
        let f = tree.flow[i];
        let (p, w) = (ws.potential[i], ws.weight[i]);
        if threshold.compare(p + f, w, 0) != Ordering::Greater {
            ws.fate[i] = Fate::Cut(found);
            found += 1;
            if parent != NO_PARENT {
                ws.potential[parent] += f;
            }
        } else if parent != NO_PARENT && threshold.compare(p, w, f) == Ordering::Less {
            ws.fate[i] = Fate::Merged;
            ws.potential[parent] += p;
            ws.weight[parent] += w;
        } else {
            ws.fate[i] = Fate::Dropped;
            if parent != NO_PARENT {
                ws.potential[parent] += f;
            }
        }
    }
    if found < k {
        return (Decision::No, stats);
    }

    // Parents precede children when walking positions backwards.
    let mut label: Vec<Option<usize>> = vec![None; n];
    let mut by_vertex: Vec<Option<usize>> = vec![None; n];
    for i in (0..n).rev() {
        label[i] = match ws.fate[i] {
            Fate::Cut(j) => Some(j),
            Fate::Merged => label[tree.parent_pos[i]],
            Fate::Pending | Fate::Dropped => None,
        };
        by_vertex[tree.vertex[i]] = label[i];
    }
    let sub = Subpartition::from_labels(&by_vertex, k).expect("every cut set is nonempty");
    (Decision::Yes(sub), stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subpartition::subpartition_cost;
    use num_traits::One;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn path4() -> WeightedTree {
        WeightedTree::from_integers(&[1; 4], &[0; 4], &[(0, 1, 1), (1, 2, 1), (2, 3, 1)], 3).unwrap()
    }

    #[test]
    fn path_at_one_half() {
        let d = decide_iso(&path4(), 2, &r(1, 2), &Rational::one()).unwrap();
        let s = d.certificate().unwrap();
        assert_eq!(s.canonical(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn path_at_one_third_is_no() {
        assert_eq!(decide_iso(&path4(), 2, &r(1, 3), &Rational::one()).unwrap(), Decision::No);
    }

    #[test]
    fn errors() {
        assert!(matches!(decide_iso(&path4(), 1, &r(1, 2), &Rational::one()), Err(SolverError::KOutOfRange { .. })));
        assert!(matches!(decide_iso(&path4(), 5, &r(1, 2), &Rational::one()), Err(SolverError::KOutOfRange { .. })));
        assert_eq!(decide_iso(&path4(), 2, &r(-1, 2), &Rational::one()), Err(SolverError::NegativeThreshold));
    }

    #[test]
    fn yes_certificates_are_sound_and_single_pass() {
        let t = WeightedTree::from_integers(
            &[3, 1, 4, 1, 5, 9, 2],
            &[0, 2, 0, 1, 0, 0, 3],
            &[(0, 1, 2), (1, 2, 1), (1, 3, 5), (0, 4, 1), (4, 5, 3), (4, 6, 2)],
            0,
        )
        .unwrap();
        for k in 2..=4 {
            for num in 0..40 {
                let n = r(num, 8);
                let (d, stats) = decide_iso_instrumented(&t, k, &n, &r(1, 2)).unwrap();
                assert!(stats.visited <= t.len());
                if let Decision::Yes(s) = d {
                    assert_eq!(s.k(), k);
                    assert!(subpartition_cost(&t, &s, &r(1, 2)).unwrap() <= n);
                }
            }
        }
    }
}
