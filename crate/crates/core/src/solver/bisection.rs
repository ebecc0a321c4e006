use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::decide::{check_k, decide_scaled, Decision, Workspace};
use super::scaled::{ScaledTree, Threshold};
use crate::error::SolverError;
use crate::quantity::{ceil_log2, Rational};
use crate::subpartition::{part_flows, subpartition_cost, Subpartition};
use crate::tree::WeightedTree;

/// Initial bracket `[α0, β0]` for the optimal cost and the number of halvings
/// needed before the bracket is narrower than the gap between any two
/// distinct normalized flows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    #[serde(serialize_with = "crate::serde_rational::serialize")]
    pub lower: Rational,
    #[serde(serialize_with = "crate::serde_rational::serialize")]
    pub upper: Rational,
    pub iterations: u64,
}

fn int(x: u128) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

pub(crate) fn bounds_of(s: &ScaledTree) -> SearchBounds {
    let lower = int(s.flow_min + s.potential_min) / int(s.weight_total);
    let upper = int(s.flow_total + s.potential_total) / int(s.weight_min);
    // Distinct ratios with integer denominators at most ω* differ by at
    // least 1/ω*²; halving until the width is at most half that suffices.
    let total = int(s.weight_total);
    let span = Rational::from_integer(BigInt::from(2)) * &total * &total * (&upper - &lower);
    SearchBounds { iterations: ceil_log2(&span).max(1), lower, upper }
}

/// Bracket and iteration count for `tree` under potential scale `alpha`.
pub fn search_bounds(tree: &WeightedTree, alpha: &Rational) -> Result<SearchBounds, SolverError> {
    Ok(bounds_of(&ScaledTree::new(tree, alpha)?))
}

/// Exact minimum of `cost_{k,α}` over k-subpartitions, with a minimizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisoSolution {
    pub value: Rational,
    pub minimizer: Subpartition,
    pub part_flows: Vec<Rational>,
    pub bounds: SearchBounds,
    /// Decision passes performed, including a final one when no midpoint was feasible.
    pub decisions: u64,
}

/// Bisection over `[α0, β0]` driven by the decision pass; the minimizer is
/// the certificate of the last feasible threshold.
pub fn solve_miso(tree: &WeightedTree, k: usize, alpha: &Rational) -> Result<MisoSolution, SolverError> {
    check_k(k, tree.len())?;
    let scaled = ScaledTree::new(tree, alpha)?;
    let bounds = bounds_of(&scaled);
    let mut ws = Workspace::new(scaled.len());
    let half = Rational::new(BigInt::one(), BigInt::from(2));

    let mut lo = bounds.lower.clone();
    let mut hi = bounds.upper.clone();
    let mut best: Option<Subpartition> = None;
    let mut decisions = 0;
    for _ in 0..bounds.iterations {
        let mid = (&lo + &hi) * &half;
        decisions += 1;
        match decide_scaled(&scaled, k, &Threshold::new(&mid), &mut ws).0 {
            Decision::Yes(s) => {
                best = Some(s);
                hi = mid;
            }
            Decision::No => lo = mid,
        }
    }
    let minimizer = match best {
        Some(s) => s,
        None => {
            decisions += 1;
            decide_scaled(&scaled, k, &Threshold::new(&hi), &mut ws)
                .0
                .certificate()
                .expect("every k-subpartition of singletons costs at most the upper bound")
        }
    };
    let value = subpartition_cost(tree, &minimizer, alpha)?;
    let flows = part_flows(tree, &minimizer, alpha)?;
    Ok(MisoSolution { value, minimizer, part_flows: flows, bounds, decisions })
}
