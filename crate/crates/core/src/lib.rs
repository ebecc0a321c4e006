//! Clustering by the isoperimetric number of weighted trees.
//!
//! The pipeline builds an affinity graph over a point set, takes a minimum
//! spanning tree of its distances, and solves the min-max isoperimetric
//! subpartition problem on that tree exactly. Residue vertices that do not
//! fit any part are either absorbed by a post-processing pass or reported as
//! outliers.
//!
//! ```
//! use isotree::pipeline::{cluster, PipelineConfig};
//! use isotree::DataSet;
//!
//! let data = DataSet::from_scalars(&[0.0, 1.0, 10.0, 11.0])?;
//! let out = cluster(&data, &PipelineConfig::new(2, 1.0))?;
//! assert_eq!(out.subpartition.canonical(), vec![vec![0, 1], vec![2, 3]]);
//! assert_eq!(out.residue_number(), 0);
//! # Ok::<(), isotree::Error>(())
//! ```

pub mod affinity;
pub mod data;
pub mod error;
pub mod eval;
pub mod graph;
pub mod oracle;
pub mod outlier;
pub mod pipeline;
pub mod postprocess;
pub mod quantity;
mod serde_rational;
pub mod solver;
pub mod spanning;
pub mod subpartition;
pub mod tree;

pub use data::DataSet;
pub use error::Error;
pub use eval::{misclassification, EvalReport};
pub use graph::{AffinityGraph, GraphEdge, ScalingMode};
pub use outlier::{OutlierProfile, ProfileDocument};
pub use pipeline::{cluster, ClusterOutcome, ClusterSummary, PipelineConfig, ProfileConfig};
pub use quantity::{Quantity, Quantizer, Rational};
pub use solver::{decide_iso, solve_miso, Decision, MisoSolution, SearchBounds};
pub use subpartition::Subpartition;
pub use tree::WeightedTree;
