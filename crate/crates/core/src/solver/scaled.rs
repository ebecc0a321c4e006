//! Integer view of a tree under a fixed potential scale α = a/b.
//!
//! Multiplying ω and φ by `b` and p by `a` turns every normalized flow
//! `(φ(∂A) + α·p(A)) / ω(A)` into a ratio of integers without changing its
//! value, so the decision pass only ever compares integers against a
//! rational threshold.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive};

use crate::error::SolverError;
use crate::quantity::{rational_to_f64, Rational};
use crate::tree::WeightedTree;

pub(crate) const NO_PARENT: usize = usize::MAX;

/// Tree arrays laid out in processing order (position 0 is processed first,
/// the root is last).
#[derive(Debug, Clone)]
pub(crate) struct ScaledTree {
    pub vertex: Vec<usize>,
    pub parent_pos: Vec<usize>,
    pub flow: Vec<u128>,
    pub weight: Vec<u128>,
    pub potential: Vec<u128>,
    pub weight_total: u128,
    pub weight_min: u128,
    pub flow_total: u128,
    pub flow_min: u128,
    pub potential_total: u128,
    pub potential_min: u128,
}

fn to_u128(x: &BigInt) -> Result<u128, SolverError> {
    x.to_u128().ok_or(SolverError::Overflow)
}

impl ScaledTree {
    pub fn new(tree: &WeightedTree, alpha: &Rational) -> Result<Self, SolverError> {
        if alpha.is_negative() {
            return Err(SolverError::NegativeAlpha);
        }
        let a = to_u128(alpha.numer())?;
        let b = to_u128(alpha.denom())?;
        let n = tree.len();
        let order = tree.processing_order();
        let mut pos = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let scale = |raw: i64, by: u128| -> Result<u128, SolverError> {
            (raw as u128).checked_mul(by).ok_or(SolverError::Overflow)
        };
        let mut s = ScaledTree {
            vertex: order.to_vec(),
            parent_pos: Vec::with_capacity(n),
            flow: Vec::with_capacity(n),
            weight: Vec::with_capacity(n),
            potential: Vec::with_capacity(n),
            weight_total: 0,
            weight_min: u128::MAX,
            flow_total: 0,
            flow_min: if n > 1 { u128::MAX } else { 0 },
            potential_total: 0,
            potential_min: u128::MAX,
        };
        for &v in order {
            let w = scale(tree.omega()[v].raw(), b)?;
            let p = scale(tree.potentials()[v].raw(), a)?;
            let f = scale(tree.parent_flow(v).raw(), b)?;
            s.parent_pos.push(tree.parent(v).map_or(NO_PARENT, |u| pos[u]));
            s.weight.push(w);
            s.potential.push(p);
            s.flow.push(f);
            s.weight_total = s.weight_total.checked_add(w).ok_or(SolverError::Overflow)?;
            s.weight_min = s.weight_min.min(w);
            s.potential_total = s.potential_total.checked_add(p).ok_or(SolverError::Overflow)?;
            s.potential_min = s.potential_min.min(p);
            if tree.parent(v).is_some() {
                s.flow_total = s.flow_total.checked_add(f).ok_or(SolverError::Overflow)?;
                s.flow_min = s.flow_min.min(f);
            }
        }
        // Every accumulator in the decision pass is bounded by these totals.
        s.flow_total
            .checked_add(s.potential_total)
            .and_then(|x| x.checked_mul(2))
            .ok_or(SolverError::Overflow)?;
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.vertex.len()
    }
}

/// Integer factors `(a, b)` of a nonnegative scale `α = a/b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct AlphaScale {
    pub numer: u128,
    pub denom: u128,
}

impl AlphaScale {
    pub fn new(alpha: &Rational) -> Result<Self, SolverError> {
        if alpha.is_negative() {
            return Err(SolverError::NegativeAlpha);
        }
        Ok(AlphaScale { numer: to_u128(alpha.numer())?, denom: to_u128(alpha.denom())? })
    }

    /// Scaled weight or flow: `b·x`.
    pub fn unit(&self, raw: i64) -> Result<u128, SolverError> {
        (raw as u128).checked_mul(self.denom).ok_or(SolverError::Overflow)
    }

    /// Scaled potential: `a·p`.
    pub fn potential(&self, raw: i64) -> Result<u128, SolverError> {
        (raw as u128).checked_mul(self.numer).ok_or(SolverError::Overflow)
    }
}

/// A rational threshold N with a floating-point shadow for fast comparisons.
#[derive(Debug, Clone)]
pub(crate) struct Threshold {
    numer: BigInt,
    denom: BigInt,
    approx: f64,
}

impl Threshold {
    pub fn new(value: &Rational) -> Self {
        Threshold { numer: value.numer().clone(), denom: value.denom().clone(), approx: rational_to_f64(value) }
    }

    /// Sign of `lhs − (N·w + add)`.
    ///
    /// The float comparison is trusted only when the relative gap exceeds its
    /// worst-case rounding error by many orders of magnitude; everything else
    /// falls through to exact big-integer arithmetic.
    #[inline]
    pub fn compare(&self, lhs: u128, w: u128, add: u128) -> Ordering {
        if self.approx.is_finite() {
            let l = lhs as f64;
            let r = self.approx.mul_add(w as f64, add as f64);
            let gap = l - r;
            if gap.abs() > 1e-9 * l.max(r) {
                return if gap > 0.0 { Ordering::Greater } else { Ordering::Less };
            }
        }
        self.compare_exact(lhs, w, add)
    }

    #[cold]
    pub fn compare_exact(&self, lhs: u128, w: u128, add: u128) -> Ordering {
        let big = |x: u128| BigInt::from_biguint(Sign::Plus, x.into());
        let left = big(lhs) * &self.denom;
        let right = &self.numer * big(w) + big(add) * &self.denom;
        left.cmp(&right)
    }
}
