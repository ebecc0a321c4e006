use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::quantity::Quantity;

/// An undirected edge carrying a similarity flow and a distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub u: usize,
    pub v: usize,
    pub flow: Quantity,
    pub distance: f64,
}

/// How the edge set and flows were derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ScalingMode {
    Global { sigma: f64 },
    Local { nu: usize },
    /// Assembled by hand (fixtures, tests).
    Explicit,
}

/// Similarity graph `(G, ω, φ, p)` with quantized weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffinityGraph {
    pub(crate) omega: Vec<Quantity>,
    pub(crate) potential: Vec<Quantity>,
    pub(crate) edges: Vec<GraphEdge>,
    pub(crate) scaling: ScalingMode,
    pub(crate) quant_bits: u32,
}

/// First broken invariant found by [`validate_graph`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphViolation {
    LengthMismatch { weights: usize, potentials: usize },
    NonpositiveWeight { vertex: usize },
    NegativePotential { vertex: usize },
    NonpositiveFlow { u: usize, v: usize },
    NegativeDistance { u: usize, v: usize },
    EdgeOutOfRange { u: usize, v: usize },
    SelfLoop { vertex: usize },
    ParallelEdge { u: usize, v: usize },
}

impl fmt::Display for GraphViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GraphViolation::LengthMismatch { weights, potentials } => {
                write!(f, "{weights} vertex weights but {potentials} potentials")
            }
            GraphViolation::NonpositiveWeight { vertex } => write!(f, "nonpositive weight at vertex {vertex}"),
            GraphViolation::NegativePotential { vertex } => write!(f, "negative potential at vertex {vertex}"),
            GraphViolation::NonpositiveFlow { u, v } => write!(f, "nonpositive flow on edge ({u}, {v})"),
            GraphViolation::NegativeDistance { u, v } => write!(f, "negative distance on edge ({u}, {v})"),
            GraphViolation::EdgeOutOfRange { u, v } => write!(f, "edge ({u}, {v}) references a missing vertex"),
            GraphViolation::SelfLoop { vertex } => write!(f, "self-loop at vertex {vertex}"),
            GraphViolation::ParallelEdge { u, v } => write!(f, "parallel edge ({u}, {v})"),
        }
    }
}

impl AffinityGraph {
    /// Assemble a graph from raw parts. Nothing is checked; see [`validate_graph`].
    pub fn from_parts(
        omega: Vec<Quantity>,
        potential: Vec<Quantity>,
        edges: Vec<GraphEdge>,
        quant_bits: u32,
    ) -> Self {
        AffinityGraph { omega, potential, edges, scaling: ScalingMode::Explicit, quant_bits }
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn omega(&self) -> &[Quantity] {
        &self.omega
    }

    pub fn potentials(&self) -> &[Quantity] {
        &self.potential
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn scaling(&self) -> ScalingMode {
        self.scaling
    }

    pub fn quant_bits(&self) -> u32 {
        self.quant_bits
    }

    /// Replace every potential. Lengths must match.
    pub fn set_potentials(&mut self, potential: Vec<Quantity>) {
        assert_eq!(potential.len(), self.omega.len(), "one potential per vertex");
        self.potential = potential;
    }
}

/// Check every structural invariant of an affinity graph and report the first failure.
pub fn validate_graph(graph: &AffinityGraph) -> Result<(), GraphViolation> {
    let n = graph.omega.len();
    if graph.potential.len() != n {
        return Err(GraphViolation::LengthMismatch { weights: n, potentials: graph.potential.len() });
    }
    if let Some(vertex) = graph.omega.iter().position(|w| !w.is_positive()) {
        return Err(GraphViolation::NonpositiveWeight { vertex });
    }
    if let Some(vertex) = graph.potential.iter().position(|p| p.raw() < 0) {
        return Err(GraphViolation::NegativePotential { vertex });
    }
    let mut seen = HashSet::with_capacity(graph.edges.len());
    for e in &graph.edges {
        let (u, v) = (e.u, e.v);
        if u >= n || v >= n {
            return Err(GraphViolation::EdgeOutOfRange { u, v });
        }
        if u == v {
            return Err(GraphViolation::SelfLoop { vertex: u });
        }
        if !e.flow.is_positive() {
            return Err(GraphViolation::NonpositiveFlow { u, v });
        }
        if e.distance.is_nan() || e.distance < 0.0 {
            return Err(GraphViolation::NegativeDistance { u, v });
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(GraphViolation::ParallelEdge { u, v });
        }
    }
    Ok(())
}
