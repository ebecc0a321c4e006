//! Brute-force ground truth for small trees.
//!
//! Every assignment of vertices to `{residue, part 1..k}` is enumerated once
//! up to part relabeling (parts are numbered by their smallest vertex), with
//! no pruning beyond "enough vertices left to open the remaining parts".

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::error::{OracleError, SolverError};
use crate::quantity::Rational;
use crate::solver::scaled::AlphaScale;
use crate::subpartition::Subpartition;
use crate::tree::WeightedTree;

/// Largest tree accepted by [`brute_force_miso`].
pub const MAX_ORACLE_VERTICES: usize = 13;
/// Largest tree accepted by [`exact_outlier_set`].
pub const MAX_OUTLIER_ORACLE_VERTICES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub value: Rational,
    /// Every minimizer, parts ordered by smallest vertex.
    pub minimizers: Vec<Subpartition>,
}

#[derive(Clone, Copy)]
struct Frac {
    num: u128,
    den: u128,
}

impl Frac {
    fn cmp(&self, other: &Frac) -> Ordering {
        match (self.num.checked_mul(other.den), other.num.checked_mul(self.den)) {
            (Some(a), Some(b)) => a.cmp(&b),
            _ => (BigInt::from(self.num) * BigInt::from(other.den)).cmp(&(BigInt::from(other.num) * BigInt::from(self.den))),
        }
    }

    fn to_rational(self) -> Rational {
        Rational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
}

struct Search<'a> {
    n: usize,
    k: usize,
    weight: Vec<u128>,
    potential: Vec<u128>,
    edges: &'a [(usize, usize, u128)],
    labels: Vec<Option<usize>>,
    best: Option<Frac>,
    minimizers: Vec<Vec<Option<usize>>>,
}

impl Search<'_> {
    fn cost(&self) -> Frac {
        let mut boundary = vec![0u128; self.k];
        let mut pot = vec![0u128; self.k];
        let mut weight = vec![0u128; self.k];
        for v in 0..self.n {
            if let Some(i) = self.labels[v] {
                pot[i] += self.potential[v];
                weight[i] += self.weight[v];
            }
        }
        for &(u, v, f) in self.edges {
            let (a, b) = (self.labels[u], self.labels[v]);
            if a != b {
                for i in [a, b].into_iter().flatten() {
                    boundary[i] += f;
                }
            }
        }
        let mut worst = Frac { num: boundary[0] + pot[0], den: weight[0] };
        for i in 1..self.k {
            let f = Frac { num: boundary[i] + pot[i], den: weight[i] };
            if f.cmp(&worst) == Ordering::Greater {
                worst = f;
            }
        }
        worst
    }

    fn run(&mut self, v: usize, opened: usize) {
        if self.k - opened > self.n - v {
            return;
        }
        if v == self.n {
            let c = self.cost();
            match self.best.map(|b| c.cmp(&b)) {
                None | Some(Ordering::Less) => {
                    self.best = Some(c);
                    self.minimizers.clear();
                    self.minimizers.push(self.labels.clone());
                }
                Some(Ordering::Equal) => self.minimizers.push(self.labels.clone()),
                Some(Ordering::Greater) => {}
            }
            return;
        }
        self.labels[v] = None;
        self.run(v + 1, opened);
        for i in 0..opened {
            self.labels[v] = Some(i);
            self.run(v + 1, opened);
        }
        if opened < self.k {
            self.labels[v] = Some(opened);
            self.run(v + 1, opened + 1);
        }
        self.labels[v] = None;
    }
}

/// Exact `MISO_{k,α}` and all of its minimizers by exhaustive enumeration.
pub fn brute_force_miso(tree: &WeightedTree, k: usize, alpha: &Rational) -> Result<OracleResult, OracleError> {
    let n = tree.len();
    if n > MAX_ORACLE_VERTICES {
        return Err(OracleError::TooLarge { n, max: MAX_ORACLE_VERTICES });
    }
    if k < 2 || k > n {
        return Err(SolverError::KOutOfRange { k, n }.into());
    }
    let scale = AlphaScale::new(alpha)?;
    let edges: Vec<(usize, usize, u128)> = tree
        .edge_list()
        .into_iter()
        .map(|(u, v, f)| scale.unit(f.raw()).map(|f| (u, v, f)))
        .collect::<Result<_, _>>()?;
    let weight = tree.omega().iter().map(|w| scale.unit(w.raw())).collect::<Result<_, _>>()?;
    let potential = tree.potentials().iter().map(|p| scale.potential(p.raw())).collect::<Result<_, _>>()?;
    let mut search = Search {
        n,
        k,
        weight,
        potential,
        edges: &edges,
        labels: vec![None; n],
        best: None,
        minimizers: Vec::new(),
    };
    search.run(0, 0);
    let value = search.best.expect("k ≤ n admits a k-subpartition").to_rational();
    let minimizers = search
        .minimizers
        .iter()
        .map(|l| Subpartition::from_labels(l, k).expect("enumeration opens every part"))
        .collect();
    Ok(OracleResult { value, minimizers })
}

/// Smallest residue number over all minimizers.
pub fn brute_force_min_residue(tree: &WeightedTree, k: usize, alpha: &Rational) -> Result<usize, OracleError> {
    let r = brute_force_miso(tree, k, alpha)?;
    Ok(r.minimizers.iter().map(Subpartition::residue_number).min().expect("at least one minimizer"))
}

/// Vertices that belong to no minimizer at `alpha` or at any grid value `β ≥ alpha`.
pub fn exact_outlier_set(
    tree: &WeightedTree,
    k: usize,
    alpha: &Rational,
    beta_grid: &[Rational],
) -> Result<Vec<usize>, OracleError> {
    let n = tree.len();
    if n > MAX_OUTLIER_ORACLE_VERTICES {
        return Err(OracleError::TooLarge { n, max: MAX_OUTLIER_ORACLE_VERTICES });
    }
    let mut betas: BTreeSet<Rational> = beta_grid.iter().filter(|b| *b >= alpha).cloned().collect();
    betas.insert(alpha.clone());
    let mut covered = vec![false; n];
    for beta in &betas {
        for m in brute_force_miso(tree, k, beta)?.minimizers {
            for part in m.parts() {
                for &v in part {
                    covered[v] = true;
                }
            }
        }
    }
    Ok((0..n).filter(|&v| !covered[v]).collect())
}
