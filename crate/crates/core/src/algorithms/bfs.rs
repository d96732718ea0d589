use crate::budget::Budget;
use crate::graph::{ImplicitGraph, Vertex, VertexId};
use crate::Result;

/// Distance sentinel for vertices not reached.
pub const UNVISITED: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct BfsResult {
    pub root: VertexId,
    /// Indexed by vertex id.
    pub dist: Vec<u32>,
    pub layer_sizes: Vec<u64>,
    pub parent: Option<Vec<VertexId>>,
}

impl BfsResult {
    pub fn distance(&self, id: VertexId) -> Option<u32> {
        match self.dist[id as usize] {
            UNVISITED => None,
            d => Some(d),
        }
    }
}

/// Breadth-first layering from `root`, exact up to `max_depth`.
pub fn bfs_layers(
    graph: &ImplicitGraph,
    root: &Vertex,
    max_depth: u32,
    with_parents: bool,
    budget: &Budget,
) -> Result<BfsResult> {
    let root = graph.encode(root)?;
    let per_vertex = if with_parents { 4 + 8 + 8 } else { 4 + 8 };
    budget.check("breadth-first search", graph.order(), per_vertex)?;

    let order = graph.order() as usize;
    let mut dist = vec![UNVISITED; order];
    let mut parent = with_parents.then(|| vec![VertexId::MAX; order]);
    let mut scratch = vec![0; 2 * graph.dimension()];
    let mut layer = vec![root];
    let mut next = Vec::new();
    let mut layer_sizes = vec![1];
    dist[root as usize] = 0;
    if let Some(p) = parent.as_mut() {
        p[root as usize] = root;
    }
    let mut depth = 0;
    while depth < max_depth && !layer.is_empty() {
        for &x in &layer {
            graph.for_each_neighbor(x, &mut scratch, |_, y| {
                if dist[y as usize] == UNVISITED {
                    dist[y as usize] = depth + 1;
                    if let Some(p) = parent.as_mut() {
                        p[y as usize] = x;
                    }
                    next.push(y);
                }
            });
        }
        if next.is_empty() {
            break;
        }
        layer_sizes.push(next.len() as u64);
        std::mem::swap(&mut layer, &mut next);
        next.clear();
        depth += 1;
    }
    Ok(BfsResult {
        root,
        dist,
        layer_sizes,
        parent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::Family;
    use crate::graph::Side;

    #[test]
    fn a43_first_layers() {
        let g = ImplicitGraph::family(Family::A, 4, 3).unwrap();
        let r = bfs_layers(&g, &g.origin(), 2, false, &Budget::unlimited()).unwrap();
        assert_eq!(r.layer_sizes, vec![1, 3, 6]);
    }

    #[test]
    fn parity_and_regular_first_layer() {
        for (family, n, q) in [(Family::D, 4, 3), (Family::A, 5, 4), (Family::D, 3, 5)] {
            let g = ImplicitGraph::family(family, n, q).unwrap();
            let root = g.decode(7).unwrap();
            let r = bfs_layers(&g, &root, u32::MAX, true, &Budget::unlimited()).unwrap();
            assert_eq!(r.layer_sizes[1], q);
            for id in 0..g.order() {
                if let Some(d) = r.distance(id) {
                    assert_eq!(d % 2 == 0, g.side_of(id) == Side::Point);
                    if d > 0 {
                        let p = r.parent.as_ref().unwrap()[id as usize];
                        assert_eq!(r.dist[p as usize] + 1, d);
                    }
                }
            }
        }
    }

    #[test]
    fn over_budget() {
        let g = ImplicitGraph::family(Family::D, 4, 3).unwrap();
        let err = bfs_layers(&g, &g.origin(), 3, false, &Budget::new(100)).unwrap_err();
        assert!(err.is_resource_refusal());
    }
}
