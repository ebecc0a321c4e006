use serde::{Deserialize, Serialize};

use crate::error::DataError;

/// Feature vectors in `R^d`, with optional ground-truth class labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSet {
    points: Vec<Vec<f64>>,
    labels: Option<Vec<String>>,
    dim: usize,
}

impl DataSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self, DataError> {
        let first = points.first().ok_or(DataError::NoPoints)?;
        let dim = first.len();
        if dim == 0 {
            return Err(DataError::ZeroDimension);
        }
        for (row, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(DataError::DimensionMismatch { row, expected: dim, found: p.len() });
            }
            if let Some(col) = p.iter().position(|c| !c.is_finite()) {
                return Err(DataError::NotFinite { row, col });
            }
        }
        Ok(DataSet { points, labels: None, dim })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, DataError> {
        if labels.len() != self.points.len() {
            return Err(DataError::LabelCount { labels: labels.len(), points: self.points.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// One-dimensional convenience constructor.
    pub fn from_scalars(values: &[f64]) -> Result<Self, DataError> {
        Self::new(values.iter().map(|&v| vec![v]).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Rescale every coordinate to `[0, 1]` column-wise. Constant columns map to 0.
    pub fn min_max_normalized(&self) -> DataSet {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in &self.points {
            for (j, &c) in p.iter().enumerate() {
                lo[j] = lo[j].min(c);
                hi[j] = hi[j].max(c);
            }
        }
        let points = self
            .points
            .iter()
            .map(|p| {
                p.iter()
                    .enumerate()
                    .map(|(j, &c)| if hi[j] > lo[j] { (c - lo[j]) / (hi[j] - lo[j]) } else { 0.0 })
                    .collect()
            })
            .collect();
        DataSet { points, labels: self.labels.clone(), dim: self.dim }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(DataSet::new(vec![]).unwrap_err(), DataError::NoPoints);
        assert_eq!(DataSet::new(vec![vec![]]).unwrap_err(), DataError::ZeroDimension);
        assert!(matches!(
            DataSet::new(vec![vec![1.0, 2.0], vec![1.0]]),
            Err(DataError::DimensionMismatch { row: 1, .. })
        ));
        assert!(DataSet::new(vec![vec![f64::NAN]]).is_err());
        let d = DataSet::from_scalars(&[1.0, 2.0]).unwrap();
        assert!(d.clone().with_labels(vec!["a".into()]).is_err());
        assert!(d.with_labels(vec!["a".into(), "b".into()]).is_ok());
    }

    #[test]
    fn normalization() {
        let d = DataSet::new(vec![vec![0.0, 5.0], vec![2.0, 5.0], vec![1.0, 5.0]]).unwrap();
        let n = d.min_max_normalized();
        assert_eq!(n.points(), &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 0.0]]);
    }
}
