use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::budget::Budget;
use crate::graph::{ImplicitGraph, VertexId};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Components {
    pub count: u64,
    /// Component orders, ascending.
    pub sizes: Vec<u64>,
}

/// Per-vertex component labels, numbered in order of least member id.
#[derive(Debug, Clone)]
pub struct ComponentLabels {
    pub labels: Vec<u32>,
    pub sizes: Vec<u64>,
}

fn sweep(
    graph: &ImplicitGraph,
    roots: impl IntoIterator<Item = VertexId>,
    mut on_vertex: impl FnMut(VertexId, usize),
) -> Vec<u64> {
    let mut seen = FixedBitSet::with_capacity(graph.order() as usize);
    let mut stack = Vec::new();
    let mut scratch = vec![0; 2 * graph.dimension()];
    let mut sizes = Vec::new();
    for root in roots {
        if seen.put(root as usize) {
            continue;
        }
        let label = sizes.len();
        let mut size = 0;
        stack.push(root);
        while let Some(x) = stack.pop() {
            size += 1;
            on_vertex(x, label);
            graph.for_each_neighbor(x, &mut scratch, |_, y| {
                if !seen.put(y as usize) {
                    stack.push(y);
                }
            });
        }
        sizes.push(size);
    }
    sizes
}

fn check(graph: &ImplicitGraph, budget: &Budget, extra: u64) -> Result<()> {
    // visited bits plus a worst-case traversal stack
    budget.check("component sweep", graph.order(), 8 + extra)?;
    Ok(())
}

pub fn components(graph: &ImplicitGraph, budget: &Budget) -> Result<Components> {
    components_in_order(graph, 0..graph.order(), budget)
}

/// Same as [`components`] but starting traversals from `roots` in the given
/// order; `roots` must cover every vertex id.
pub fn components_in_order(
    graph: &ImplicitGraph,
    roots: impl IntoIterator<Item = VertexId>,
    budget: &Budget,
) -> Result<Components> {
    check(graph, budget, 0)?;
    let mut sizes = sweep(graph, roots, |_, _| {});
    sizes.sort_unstable();
    Ok(Components {
        count: sizes.len() as u64,
        sizes,
    })
}

pub fn component_labels(graph: &ImplicitGraph, budget: &Budget) -> Result<ComponentLabels> {
    check(graph, budget, 4)?;
    let mut labels = vec![u32::MAX; graph.order() as usize];
    let sizes = sweep(graph, 0..graph.order(), |v, label| labels[v as usize] = label as u32);
    Ok(ComponentLabels { labels, sizes })
}
