//! Outlier profiles: residue number as a step function of the potential scale.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::PostprocessError;
use crate::postprocess::reduce_residue;
use crate::quantity::{rational_to_f64, Rational};
use crate::solver::solve_miso;
use crate::subpartition::Subpartition;
use crate::tree::WeightedTree;

/// Post-processed minimizer at one potential scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSample {
    pub alpha: Rational,
    pub value: Rational,
    pub subpartition: Subpartition,
}

impl ResidueSample {
    pub fn residue_count(&self) -> usize {
        self.subpartition.residue_number()
    }
}

/// Solve at `alpha` and reduce the residue of the minimizer.
pub fn residue_at(tree: &WeightedTree, k: usize, alpha: &Rational) -> Result<ResidueSample, PostprocessError> {
    let sol = solve_miso(tree, k, alpha)?;
    let reduced = reduce_residue(tree, &sol.minimizer, &sol.value, alpha)?;
    Ok(ResidueSample { alpha: alpha.clone(), value: sol.value, subpartition: reduced })
}

/// A maximal α-range on which the recorded residue count is constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileInterval {
    #[serde(skip)]
    pub low: Rational,
    #[serde(skip)]
    pub high: Rational,
    pub alpha_low: f64,
    pub alpha_high: f64,
    pub residue_count: usize,
    pub sm: f64,
    /// The count dropped when entering this interval.
    pub non_monotone: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutlierProfile {
    pub k: usize,
    pub alpha_max: Rational,
    pub epsilon: Rational,
    pub sigma_s: f64,
    pub intervals: Vec<ProfileInterval>,
    /// Every evaluated scale in increasing order.
    pub samples: Vec<ResidueSample>,
}

/// `exp(−low/σ_s) − exp(−high/σ_s)`.
pub fn interval_measure(low: f64, high: f64, sigma_s: f64) -> f64 {
    if high <= low {
        return 0.0;
    }
    (-low / sigma_s).exp() - (-high / sigma_s).exp()
}

/// Residue profile on `[0, alpha_max]`, with every change of the count
/// bracketed to width at most `epsilon`.
///
/// A segment whose end counts agree is not searched further. A change is
/// placed at the midpoint of its final bracket.
///
/// # Panics
/// If `alpha_max`, `epsilon` or `sigma_s` is not positive.
pub fn outlier_profile(
    tree: &WeightedTree,
    k: usize,
    alpha_max: &Rational,
    epsilon: &Rational,
    sigma_s: f64,
) -> Result<OutlierProfile, PostprocessError> {
    assert!(alpha_max.is_positive() && epsilon.is_positive() && sigma_s > 0.0);
    let mut samples: BTreeMap<Rational, ResidueSample> = BTreeMap::new();
    let zero = Rational::zero();
    samples.insert(zero.clone(), residue_at(tree, k, &zero)?);
    samples.insert(alpha_max.clone(), residue_at(tree, k, alpha_max)?);
    let half = Rational::new(BigInt::one(), BigInt::from(2));

    let mut pending = vec![(zero, alpha_max.clone())];
    while let Some((a, b)) = pending.pop() {
        if samples[&a].residue_count() == samples[&b].residue_count() || &b - &a <= *epsilon {
            continue;
        }
        let mid = (&a + &b) * &half;
        let s = residue_at(tree, k, &mid)?;
        samples.insert(mid.clone(), s);
        pending.push((mid.clone(), b));
        pending.push((a, mid));
    }

    let samples: Vec<ResidueSample> = samples.into_values().collect();
    let mut intervals: Vec<ProfileInterval> = Vec::new();
    let mut low = Rational::zero();
    for w in samples.windows(2) {
        let (c0, c1) = (w[0].residue_count(), w[1].residue_count());
        if c0 != c1 {
            let cut = (&w[0].alpha + &w[1].alpha) * &half;
            push_interval(&mut intervals, low, cut.clone(), c0, sigma_s);
            low = cut;
        }
    }
    let last = samples.last().expect("two endpoint samples").residue_count();
    push_interval(&mut intervals, low, alpha_max.clone(), last, sigma_s);
    Ok(OutlierProfile {
        k,
        alpha_max: alpha_max.clone(),
        epsilon: epsilon.clone(),
        sigma_s,
        intervals,
        samples,
    })
}

fn push_interval(out: &mut Vec<ProfileInterval>, low: Rational, high: Rational, count: usize, sigma_s: f64) {
    let (lo, hi) = (rational_to_f64(&low), rational_to_f64(&high));
    let non_monotone = out.last().is_some_and(|p| p.residue_count > count);
    out.push(ProfileInterval {
        alpha_low: lo,
        alpha_high: hi,
        sm: interval_measure(lo, hi, sigma_s),
        low,
        high,
        residue_count: count,
        non_monotone,
    });
}

/// Index of the interval with the largest `sm` (earliest on ties) and its lower end.
pub fn select_alpha_star(profile: &OutlierProfile) -> (usize, Rational) {
    let mut best = 0;
    for (i, iv) in profile.intervals.iter().enumerate() {
        if iv.sm > profile.intervals[best].sm {
            best = i;
        }
    }
    (best, profile.intervals[best].low.clone())
}

/// Vertices that are residue at every sampled `β ≥ alpha` (at the largest
/// sample when `alpha` exceeds all of them). This approximates the set of
/// vertices meeting no minimizer for any `β ≥ alpha`.
pub fn outlier_set(profile: &OutlierProfile, alpha: &Rational) -> Vec<usize> {
    let mut chosen: Vec<&ResidueSample> = profile.samples.iter().filter(|s| s.alpha >= *alpha).collect();
    if chosen.is_empty() {
        chosen.extend(profile.samples.last());
    }
    let Some(first) = chosen.first() else {
        return Vec::new();
    };
    let n = first.subpartition.n();
    let mut hits = vec![0usize; n];
    for s in &chosen {
        for v in s.subpartition.residue() {
            hits[v] += 1;
        }
    }
    (0..n).filter(|&v| hits[v] == chosen.len()).collect()
}

/// Outlier set on an explicit grid: residue at `alpha` and at every grid value above it.
pub fn outlier_set_on_grid(
    tree: &WeightedTree,
    k: usize,
    alpha: &Rational,
    grid: &[Rational],
) -> Result<Vec<usize>, PostprocessError> {
    let mut betas: Vec<&Rational> = grid.iter().filter(|b| *b >= alpha).collect();
    betas.push(alpha);
    let mut out: Option<Vec<bool>> = None;
    for beta in betas {
        let s = residue_at(tree, k, beta)?;
        let labels = s.subpartition.labels();
        let acc = out.get_or_insert_with(|| vec![true; labels.len()]);
        for (v, l) in labels.iter().enumerate() {
            acc[v] &= l.is_none();
        }
    }
    Ok(out.unwrap_or_default().iter().enumerate().filter(|(_, &r)| r).map(|(v, _)| v).collect())
}

/// Scale at which the largest potential matches the lightest tree edge:
/// `min φ / max p`. One when every potential is zero.
pub fn natural_alpha_start(tree: &WeightedTree) -> Rational {
    let p_max = tree.potentials().iter().map(|p| p.raw()).max().unwrap_or(0);
    let f_min = tree.edge_list().iter().map(|e| e.2.raw()).min().unwrap_or(0);
    if p_max <= 0 || f_min <= 0 {
        return Rational::one();
    }
    Rational::new(BigInt::from(f_min), BigInt::from(p_max))
}

/// Upper end for a profile: double from `start` (default
/// [`natural_alpha_start`]) until the residue count is positive and unchanged
/// over two consecutive doublings. Gives up after `max_doublings` and returns
/// the last scale tried. Returns `start` at once when every potential is zero.
pub fn auto_alpha_max(
    tree: &WeightedTree,
    k: usize,
    start: Option<&Rational>,
    max_doublings: u32,
) -> Result<Rational, PostprocessError> {
    let two = Rational::from_integer(BigInt::from(2));
    let mut alpha = start.cloned().unwrap_or_else(|| natural_alpha_start(tree));
    assert!(alpha.is_positive());
    if tree.potentials().iter().all(|p| p.raw() == 0) {
        return Ok(alpha);
    }
    let mut history = vec![residue_at(tree, k, &alpha)?.residue_count()];
    for _ in 0..max_doublings {
        alpha = &alpha * &two;
        history.push(residue_at(tree, k, &alpha)?.residue_count());
        if let [.., a, b, c] = history[..] {
            if a > 0 && a == b && b == c {
                break;
            }
        }
    }
    Ok(alpha)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRecord {
    pub alpha: f64,
    pub residue_count: usize,
}

/// Serializable summary of a profile with its selected scale and outliers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileDocument {
    pub k: usize,
    pub sigma_s: f64,
    pub epsilon: f64,
    pub alpha_max: f64,
    pub intervals: Vec<ProfileInterval>,
    pub alpha_star: f64,
    pub interval_star: usize,
    pub outliers: Vec<usize>,
    pub samples: Vec<SampleRecord>,
}

impl ProfileDocument {
    pub fn new(profile: &OutlierProfile) -> Self {
        let (star, alpha_star) = select_alpha_star(profile);
        ProfileDocument {
            k: profile.k,
            sigma_s: profile.sigma_s,
            epsilon: rational_to_f64(&profile.epsilon),
            alpha_max: rational_to_f64(&profile.alpha_max),
            intervals: profile.intervals.clone(),
            alpha_star: rational_to_f64(&alpha_star),
            interval_star: star,
            outliers: outlier_set(profile, &alpha_star),
            samples: profile
                .samples
                .iter()
                .map(|s| SampleRecord { alpha: rational_to_f64(&s.alpha), residue_count: s.residue_count() })
                .collect(),
        }
    }
}
