//! Layer shapes around the origin of `A(n, q)`.
//!
//! At distance `j` (`2 <= j <= n`) from `(0)` every vertex is a line when `j`
//! is odd and a point when `j` is even, its coordinates past position `j` are
//! zero and coordinate `j - 1` is nonzero.

use serde::Serialize;

use super::bfs::bfs_layers;
use crate::budget::Budget;
use crate::equations::Family;
use crate::graph::{ImplicitGraph, Side, VertexId};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ShapeViolation {
    WrongSide,
    /// 1-based index of a nonzero coordinate past the distance.
    NonzeroTail(usize),
    /// Coordinate `j - 1` is zero.
    ZeroLead,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ShapeCheck {
    Ok {
        /// Number of vertices checked at each distance `2..=max_j`.
        checked: Vec<u64>,
    },
    Counterexample {
        vertex: VertexId,
        distance: u32,
        violation: ShapeViolation,
    },
}

impl ShapeCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, ShapeCheck::Ok { .. })
    }
}

/// Checks every vertex at distance `2..=max_j` from the origin; reports the
/// least offending id.
pub fn lemma22_shape_check(graph: &ImplicitGraph, max_j: usize, budget: &Budget) -> Result<ShapeCheck> {
    if graph.label() != Family::A {
        return Err(Error::invalid("the layer-shape check applies to the A family only"));
    }
    let n = graph.dimension();
    if max_j > n {
        return Err(Error::invalid(format!("max_j = {max_j} exceeds n = {n}")));
    }
    let bfs = bfs_layers(graph, &graph.origin(), max_j as u32, false, budget)?;
    let mut checked = vec![0; max_j.saturating_sub(1)];
    let mut coords = vec![0; n];
    for id in 0..graph.order() {
        let Some(d) = bfs.distance(id) else { continue };
        let j = d as usize;
        if j < 2 || j > max_j {
            continue;
        }
        let side = graph.decode_into(id, &mut coords);
        let expected = if j % 2 == 1 { Side::Line } else { Side::Point };
        let violation = if side != expected {
            Some(ShapeViolation::WrongSide)
        } else if let Some(k) = (j..n).find(|&k| coords[k] != 0) {
            Some(ShapeViolation::NonzeroTail(k + 1))
        } else if coords[j - 2] == 0 {
            Some(ShapeViolation::ZeroLead)
        } else {
            None
        };
        if let Some(violation) = violation {
            return Ok(ShapeCheck::Counterexample {
                vertex: id,
                distance: d,
                violation,
            });
        }
        checked[j - 2] += 1;
    }
    Ok(ShapeCheck::Ok { checked })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holds_on_small_a_graphs() {
        let b = Budget::unlimited();
        for (n, q) in [(2, 3), (3, 4), (6, 3), (5, 5)] {
            let g = ImplicitGraph::family(Family::A, n, q).unwrap();
            let r = lemma22_shape_check(&g, n, &b).unwrap();
            assert!(r.is_ok(), "A({n},{q}): {r:?}");
        }
    }

    #[test]
    fn a2_second_layer_count() {
        let g = ImplicitGraph::family(Family::A, 2, 5).unwrap();
        let r = lemma22_shape_check(&g, 2, &Budget::unlimited()).unwrap();
        // points (x, ax) with x != 0
        assert_eq!(r, ShapeCheck::Ok { checked: vec![20] });
    }

    #[test]
    fn fails_on_d_family_shape() {
        // D(5,3) relabelled as A must break the pattern somewhere
        let field = crate::field::Field::with_order(3).unwrap();
        let sys = crate::equations::builtin_system(Family::D, 5).unwrap();
        let g = ImplicitGraph::new(&field, sys, Family::A).unwrap();
        assert!(!lemma22_shape_check(&g, 5, &Budget::unlimited()).unwrap().is_ok());
    }

    #[test]
    fn rejects_other_families() {
        let g = ImplicitGraph::family(Family::D, 4, 3).unwrap();
        assert!(lemma22_shape_check(&g, 4, &Budget::unlimited()).is_err());
        let a = ImplicitGraph::family(Family::A, 4, 3).unwrap();
        assert!(lemma22_shape_check(&a, 5, &Budget::unlimited()).is_err());
    }
}
