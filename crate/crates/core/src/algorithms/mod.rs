//! Whole-graph algorithms driven by the neighbor oracle.

mod bfs;
mod components;
mod cycles;
mod shape;

pub use bfs::{bfs_layers, BfsResult, UNVISITED};
pub use components::{component_labels, components, components_in_order, ComponentLabels, Components};
pub use cycles::{default_cap, girth, girth_from_roots, shortest_cycle_through, GirthMode, GirthReport, GirthValue};
pub use shape::{lemma22_shape_check, ShapeCheck, ShapeViolation};

use serde::Serialize;

use crate::graph::ImplicitGraph;

/// Sweeps above this order are skipped by [`edge_count`].
pub const SWEEP_LIMIT: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EdgeCount {
    /// `q^{n+1}`.
    pub formula: u64,
    /// Oracle sweep over all points, when the graph is small enough.
    pub swept: Option<u64>,
}

pub fn edge_count(graph: &ImplicitGraph) -> EdgeCount {
    EdgeCount {
        formula: graph.edge_count(),
        swept: (graph.order() <= SWEEP_LIMIT).then(|| graph.swept_edge_count()),
    }
}
