//! Misclassification rate under the best one-to-one cluster/class matching.

use std::collections::BTreeMap;

use pathfinding::matrix::Matrix;
use pathfinding::prelude::kuhn_munkres;
use serde::Serialize;

use crate::error::EvalError;

/// Predicted label of a residue point.
pub const RESIDUE_LABEL: i64 = -1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub rate: f64,
    pub errors: usize,
    pub total: usize,
    /// `(cluster, class)` pairs of the optimal matching.
    pub mapping: Vec<(i64, String)>,
}

/// Fraction of points whose cluster, mapped injectively to a class, differs
/// from the truth. Residue points (negative labels) and points of unmatched
/// clusters always count as errors.
pub fn misclassification<T: AsRef<str>>(predicted: &[i64], truth: &[T]) -> Result<EvalReport, EvalError> {
    if predicted.len() != truth.len() {
        return Err(EvalError::LengthMismatch { predicted: predicted.len(), truth: truth.len() });
    }
    if predicted.is_empty() {
        return Err(EvalError::Empty);
    }
    let clusters: Vec<i64> = {
        let mut c: Vec<i64> = predicted.iter().copied().filter(|&c| c >= 0).collect();
        c.sort_unstable();
        c.dedup();
        c
    };
    let classes: Vec<&str> = {
        let mut c: Vec<&str> = truth.iter().map(AsRef::as_ref).collect();
        c.sort_unstable();
        c.dedup();
        c
    };
    let mut counts: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for (p, t) in predicted.iter().zip(truth) {
        if let Ok(i) = clusters.binary_search(p) {
            let j = classes.binary_search(&t.as_ref()).expect("class collected above");
            *counts.entry((i, j)).or_default() += 1;
        }
    }
    // Square matrix; padding rows and columns match nothing.
    let size = clusters.len().max(classes.len());
    let mut m = Matrix::new(size, size, 0i64);
    for (&(i, j), &c) in &counts {
        m[(i, j)] = c;
    }
    let (matched, assignment) = if size == 0 { (0, Vec::new()) } else { kuhn_munkres(&m) };
    let mapping = assignment
        .iter()
        .enumerate()
        .filter(|&(i, &j)| i < clusters.len() && j < classes.len())
        .map(|(i, &j)| (clusters[i], classes[j].to_string()))
        .collect();
    let total = predicted.len();
    let errors = total - matched as usize;
    Ok(EvalReport { rate: errors as f64 / total as f64, errors, total, mapping })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_labels() {
        let r = misclassification(&[0, 1, 1, 2], &["0", "1", "1", "2"]).unwrap();
        assert_eq!(r.rate, 0.0);
    }

    #[test]
    fn permuted_labels() {
        let r = misclassification(&[2, 0, 0, 1], &["a", "b", "b", "c"]).unwrap();
        assert_eq!(r.errors, 0);
        assert!(r.mapping.contains(&(2, "a".to_string())));
    }

    #[test]
    fn one_wrong() {
        assert_eq!(misclassification(&[0, 0, 1, 1], &["a", "a", "b", "a"]).unwrap().rate, 0.25);
    }

    #[test]
    fn residue_and_extra_clusters_count() {
        assert_eq!(misclassification(&[-1, 0, 1, 2], &["a", "a", "b", "b"]).unwrap().errors, 2);
        assert_eq!(misclassification(&[-1, -1], &["a", "b"]).unwrap().errors, 2);
    }

    #[test]
    fn fewer_clusters_than_classes() {
        assert_eq!(misclassification(&[0, 0, 0], &["a", "b", "c"]).unwrap().errors, 2);
    }

    #[test]
    fn errors() {
        assert!(matches!(misclassification(&[0], &["a", "b"]), Err(EvalError::LengthMismatch { .. })));
        assert!(matches!(misclassification::<&str>(&[], &[]), Err(EvalError::Empty)));
    }
}
