//! Affinity graphs from raw feature vectors.

use serde::{Deserialize, Serialize};

use crate::data::DataSet;
use crate::error::AffinityError;
use crate::graph::{AffinityGraph, GraphEdge, ScalingMode};
use crate::quantity::{Quantity, Quantizer};

/// Shape of the similarity kernel applied to a Euclidean distance `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum KernelForm {
    /// `exp(−d / 2σ²)`
    HalfSquareWidth,
    /// `exp(−d / σ)`
    #[default]
    Exponential,
    /// `exp(−d² / 2σ²)`
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    pub form: KernelForm,
    pub sigma: f64,
}

impl Kernel {
    pub fn new(form: KernelForm, sigma: f64) -> Result<Self, AffinityError> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(AffinityError::BadSigma(sigma));
        }
        Ok(Kernel { form, sigma })
    }

    pub fn flow(&self, d: f64) -> f64 {
        let s = self.sigma;
        match self.form {
            KernelForm::HalfSquareWidth => (-d / (2.0 * s * s)).exp(),
            KernelForm::Exponential => (-d / s).exp(),
            KernelForm::Gaussian => (-d * d / (2.0 * s * s)).exp(),
        }
    }
}

/// How flows are scaled on a ν-nearest-neighbour graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum LocalScale {
    /// The shared kernel on every retained edge.
    #[default]
    Shared,
    /// Per-point scale σ_i = distance to the ν-th neighbour;
    /// `φ = exp(−d² / σ_i σ_j)`.
    SelfTuning,
}

pub fn pairwise_distance(a: &[f64], b: &[f64]) -> Result<f64, AffinityError> {
    if a.len() != b.len() {
        return Err(AffinityError::DimensionMismatch(a.len(), b.len()));
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
}

fn distances(data: &DataSet) -> Vec<Vec<f64>> {
    let n = data.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = pairwise_distance(data.point(i), data.point(j)).expect("dataset has uniform dimension");
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    d
}

fn assemble(
    n: usize,
    pairs: Vec<(usize, usize, f64, f64)>,
    quantizer: Quantizer,
    scaling: ScalingMode,
) -> Result<AffinityGraph, AffinityError> {
    let mut edges = Vec::with_capacity(pairs.len());
    for (u, v, flow, distance) in pairs {
        edges.push(GraphEdge { u, v, flow: quantizer.quantize(flow)?, distance });
    }
    // ω(x) = Σ φ over incident edges, summed in ascending edge order.
    let mut omega = vec![0i64; n];
    for e in &edges {
        omega[e.u] += e.flow.raw();
        omega[e.v] += e.flow.raw();
    }
    Ok(AffinityGraph {
        omega: omega.into_iter().map(Quantity::from_raw).collect(),
        potential: vec![Quantity::ZERO; n],
        edges,
        scaling,
        quant_bits: quantizer.bits(),
    })
}

/// Complete graph with flows from `kernel` and ω(x) the sum of flows at x
/// (self-similarity excluded).
pub fn global_affinity(data: &DataSet, kernel: Kernel, quantizer: Quantizer) -> Result<AffinityGraph, AffinityError> {
    let n = data.len();
    if n < 2 {
        return Err(AffinityError::TooFewPoints(n));
    }
    let d = distances(data);
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j, kernel.flow(d[i][j]), d[i][j]));
        }
    }
    assemble(n, pairs, quantizer, ScalingMode::Global { sigma: kernel.sigma })
}

/// Indices of the `nu` nearest other points of each point; ties to the lower index.
pub fn nearest_neighbours(data: &DataSet, nu: usize) -> Result<Vec<Vec<usize>>, AffinityError> {
    let n = data.len();
    if nu < 1 || nu >= n {
        return Err(AffinityError::BadNu { nu, n });
    }
    let d = distances(data);
    Ok((0..n)
        .map(|i| {
            let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            others.sort_by(|&a, &b| d[i][a].total_cmp(&d[i][b]).then(a.cmp(&b)));
            others.truncate(nu);
            others
        })
        .collect())
}

/// Symmetric ν-nearest-neighbour graph: `xy` is an edge when either endpoint
/// lists the other among its ν nearest.
pub fn local_affinity(
    data: &DataSet,
    nu: usize,
    kernel: Kernel,
    scale: LocalScale,
    quantizer: Quantizer,
) -> Result<AffinityGraph, AffinityError> {
    let n = data.len();
    if n < 2 {
        return Err(AffinityError::TooFewPoints(n));
    }
    let knn = nearest_neighbours(data, nu)?;
    let mut keep = vec![Vec::new(); n];
    for (i, list) in knn.iter().enumerate() {
        for &j in list {
            keep[i.min(j)].push(i.max(j));
        }
    }
    let sigma_i: Vec<f64> = knn
        .iter()
        .enumerate()
        .map(|(i, list)| pairwise_distance(data.point(i), data.point(*list.last().unwrap())).unwrap())
        .collect();
    let mut pairs = Vec::new();
    for (u, list) in keep.iter_mut().enumerate() {
        list.sort_unstable();
        list.dedup();
        for &v in list.iter() {
            let d = pairwise_distance(data.point(u), data.point(v))?;
            let flow = match scale {
                LocalScale::Shared => kernel.flow(d),
                LocalScale::SelfTuning => {
                    let denom = sigma_i[u] * sigma_i[v];
                    if denom > 0.0 {
                        (-d * d / denom).exp()
                    } else {
                        1.0
                    }
                }
            };
            pairs.push((u, v, flow, d));
        }
    }
    assemble(n, pairs, quantizer, ScalingMode::Local { nu })
}

/// `p(x) = (1/n) Σ_y ‖x − y‖`, including the zero term `y = x`.
pub fn mean_distance_potential(data: &DataSet) -> Vec<f64> {
    let n = data.len();
    let d = distances(data);
    d.iter().map(|row| row.iter().sum::<f64>() / n as f64).collect()
}

/// Quantize real potentials onto the graph's grid.
pub fn quantize_potentials(values: &[f64], quantizer: Quantizer) -> Result<Vec<Quantity>, AffinityError> {
    Ok(values.iter().map(|&p| quantizer.quantize(p)).collect::<Result<_, _>>()?)
}
