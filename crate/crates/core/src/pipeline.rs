//! End-to-end clustering: affinity graph, spanning tree, exact solve,
//! residue reduction and optional label completion.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::affinity::{global_affinity, local_affinity, mean_distance_potential, quantize_potentials, Kernel, KernelForm, LocalScale};
use crate::data::DataSet;
use crate::error::{Error, SolverError, TreeError};
use crate::graph::AffinityGraph;
use crate::outlier::{auto_alpha_max, outlier_profile, OutlierProfile};
use crate::postprocess::{complete_labeling, reduce_residue};
use crate::quantity::{rational_to_f64, Quantizer, Rational, DEFAULT_QUANT_BITS};
use crate::solver::{solve_miso, MisoSolution, SearchBounds};
use crate::spanning::{build_weighted_tree, default_root, minimum_spanning_tree, TreeWeights};
use crate::subpartition::{part_flows, Subpartition};
use crate::tree::WeightedTree;

/// Edge set of the affinity graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Scaling {
    /// Complete graph with one kernel width.
    Global,
    /// Symmetric ν-nearest-neighbour graph.
    Local { nu: usize, scale: LocalScale },
}

/// Vertex potentials before scaling by α.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Potentials {
    #[default]
    Zero,
    /// Mean distance to all points.
    MeanDistance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub k: usize,
    pub scaling: Scaling,
    pub kernel: KernelForm,
    pub sigma: f64,
    pub potentials: Potentials,
    pub alpha: Rational,
    pub postprocess: bool,
    pub complete_labels: bool,
    pub quant_bits: u32,
    pub root: Option<usize>,
    pub tree_weights: TreeWeights,
    /// Min-max normalize every feature before building the graph.
    pub normalize: bool,
}

impl PipelineConfig {
    pub fn new(k: usize, sigma: f64) -> Self {
        PipelineConfig {
            k,
            scaling: Scaling::Global,
            kernel: KernelForm::default(),
            sigma,
            potentials: Potentials::Zero,
            alpha: Rational::zero(),
            postprocess: true,
            complete_labels: false,
            quant_bits: DEFAULT_QUANT_BITS,
            root: None,
            tree_weights: TreeWeights::Inherit,
            normalize: false,
        }
    }
}

/// Graph and rooted spanning tree for `data`.
pub fn build_tree(data: &DataSet, config: &PipelineConfig) -> Result<(AffinityGraph, WeightedTree), Error> {
    let normalized;
    let data = if config.normalize {
        normalized = data.min_max_normalized();
        &normalized
    } else {
        data
    };
    let quantizer = Quantizer::new(config.quant_bits)?;
    let kernel = Kernel::new(config.kernel, config.sigma)?;
    let mut graph = match config.scaling {
        Scaling::Global => global_affinity(data, kernel, quantizer)?,
        Scaling::Local { nu, scale } => local_affinity(data, nu, kernel, scale, quantizer)?,
    };
    if config.potentials == Potentials::MeanDistance {
        graph.set_potentials(quantize_potentials(&mean_distance_potential(data), quantizer)?);
    }
    let mst = minimum_spanning_tree(&graph)?;
    let root = match config.root {
        Some(r) if r >= graph.len() => return Err(TreeError::RootOutOfRange { root: r, n: graph.len() }.into()),
        Some(r) => r,
        None => default_root(&graph),
    };
    let tree = build_weighted_tree(&mst, &graph, root, config.tree_weights)?;
    Ok((graph, tree))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterOutcome {
    pub tree: WeightedTree,
    pub solution: MisoSolution,
    /// The minimizer after residue reduction (or the raw one when disabled).
    pub subpartition: Subpartition,
    pub part_flows: Vec<Rational>,
    /// Cluster index per point; [`crate::eval::RESIDUE_LABEL`] for residue
    /// unless labels were completed.
    pub labels: Vec<i64>,
}

impl ClusterOutcome {
    pub fn residue_number(&self) -> usize {
        self.subpartition.residue_number()
    }

    pub fn summary(&self) -> ClusterSummary {
        ClusterSummary {
            n: self.labels.len(),
            k: self.subpartition.k(),
            value: self.solution.value.clone(),
            value_approx: rational_to_f64(&self.solution.value),
            residue_number: self.residue_number(),
            raw_residue_number: self.solution.minimizer.residue_number(),
            part_sizes: self.subpartition.parts().iter().map(Vec::len).collect(),
            part_flows: self.part_flows.clone(),
            bounds: self.solution.bounds.clone(),
            decisions: self.solution.decisions,
        }
    }
}

/// Serializable digest of a [`ClusterOutcome`]; fractions are `"n/d"` strings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterSummary {
    pub n: usize,
    pub k: usize,
    #[serde(serialize_with = "crate::serde_rational::serialize")]
    pub value: Rational,
    pub value_approx: f64,
    pub residue_number: usize,
    /// Residue number before post-processing.
    pub raw_residue_number: usize,
    pub part_sizes: Vec<usize>,
    #[serde(serialize_with = "crate::serde_rational::serialize_vec")]
    pub part_flows: Vec<Rational>,
    pub bounds: SearchBounds,
    pub decisions: u64,
}

/// Cluster the points of `data` into `config.k` parts.
pub fn cluster(data: &DataSet, config: &PipelineConfig) -> Result<ClusterOutcome, Error> {
    if config.alpha.is_negative() {
        return Err(SolverError::NegativeAlpha.into());
    }
    let (_, tree) = build_tree(data, config)?;
    cluster_tree(tree, config)
}

/// Steps after tree construction, on a ready tree.
pub fn cluster_tree(tree: WeightedTree, config: &PipelineConfig) -> Result<ClusterOutcome, Error> {
    let solution = solve_miso(&tree, config.k, &config.alpha)?;
    let subpartition = if config.postprocess {
        reduce_residue(&tree, &solution.minimizer, &solution.value, &config.alpha)?
    } else {
        solution.minimizer.clone()
    };
    let flows = part_flows(&tree, &subpartition, &config.alpha)?;
    let labels = match config.complete_labels.then(|| complete_labeling(&tree, &subpartition)).flatten() {
        Some(full) => full.into_iter().map(|l| l as i64).collect(),
        None => subpartition
            .labels()
            .into_iter()
            .map(|l| l.map_or(crate::eval::RESIDUE_LABEL, |i| i as i64))
            .collect(),
    };
    Ok(ClusterOutcome { tree, solution, subpartition, part_flows: flows, labels })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileConfig {
    pub sigma_s: f64,
    pub epsilon: Rational,
    /// `None`: choose by [`auto_alpha_max`].
    pub alpha_max: Option<Rational>,
}

/// Outlier profile of `data` under mean-distance potentials.
pub fn profile(data: &DataSet, config: &PipelineConfig, pc: &ProfileConfig) -> Result<(WeightedTree, OutlierProfile), Error> {
    let mut config = config.clone();
    config.potentials = Potentials::MeanDistance;
    let (_, tree) = build_tree(data, &config)?;
    let alpha_max = match &pc.alpha_max {
        Some(a) => a.clone(),
        None => auto_alpha_max(&tree, config.k, None, 40)?,
    };
    let prof = outlier_profile(&tree, config.k, &alpha_max, &pc.epsilon, pc.sigma_s)?;
    Ok((tree, prof))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collinear_pairs() {
        let data = DataSet::from_scalars(&[0.0, 1.0, 10.0, 11.0]).unwrap();
        let out = cluster(&data, &PipelineConfig::new(2, 1.0)).unwrap();
        assert_eq!(out.residue_number(), 0);
        assert_eq!(out.subpartition.canonical(), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(out.labels[0], out.labels[1]);
        assert_ne!(out.labels[1], out.labels[2]);
    }

    #[test]
    fn bad_root_is_rejected() {
        let data = DataSet::from_scalars(&[0.0, 1.0]).unwrap();
        let mut c = PipelineConfig::new(2, 1.0);
        c.root = Some(5);
        assert!(cluster(&data, &c).is_err());
    }

    #[test]
    fn completion_labels_everything() {
        let data = DataSet::from_scalars(&[0.0, 0.1, 0.2, 5.0, 5.1, 20.0]).unwrap();
        let mut c = PipelineConfig::new(3, 1.0);
        c.complete_labels = true;
        let out = cluster(&data, &c).unwrap();
        assert!(out.labels.iter().all(|&l| l >= 0));
    }

    #[test]
    fn coincident_points_flat_profile() {
        let data = DataSet::new(vec![vec![1.0, 1.0]; 5]).unwrap();
        let pc = ProfileConfig {
            sigma_s: 0.5,
            epsilon: Rational::new(1.into(), 100.into()),
            alpha_max: Some(Rational::from_integer(2.into())),
        };
        let (_, prof) = profile(&data, &PipelineConfig::new(2, 1.0), &pc).unwrap();
        assert_eq!(prof.intervals.len(), 1);
    }
}
