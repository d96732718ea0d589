//! Turán-number bounds for graphs without short cycles, and how the
//! components of a constructed graph compare against the lower bound.
//!
//! For `ex(N, C_{2k+1})`, the largest edge count of an `N`-vertex graph with
//! no cycle of length at most `2k + 1`:
//!
//! ```text
//! N^{1 + 2/(3k - 3 + ε)} / 2^{1 + 1/k}  <=  ex  <=  N^{1 + 1/k} / 2^{1 + 1/k} + N/2
//! ```
//!
//! with `ε = 1` for even `k` and `0` for odd `k`.

use serde::Serialize;

use crate::algorithms::{component_labels, girth_from_roots, GirthValue};
use crate::budget::Budget;
use crate::graph::{ImplicitGraph, VertexId};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TuranBound {
    pub n: u64,
    pub k: u32,
    pub epsilon: u32,
    pub lower: f64,
    pub upper: f64,
}

pub fn turan_bounds(n: u64, k: u32) -> Result<TuranBound> {
    if n < 2 {
        return Err(Error::invalid(format!("vertex count must be at least 2, got {n}")));
    }
    if k < 2 {
        return Err(Error::invalid(format!("k must be at least 2, got {k}")));
    }
    let epsilon = u32::from(k.is_multiple_of(2));
    let nf = n as f64;
    let kf = f64::from(k);
    let scale = 2f64.powf(1.0 + 1.0 / kf);
    let lower = nf.powf(1.0 + 2.0 / f64::from(3 * k - 3 + epsilon)) / scale;
    let upper = nf.powf(1.0 + 1.0 / kf) / scale + nf / 2.0;
    Ok(TuranBound {
        n,
        k,
        epsilon,
        lower,
        upper,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentRow {
    /// Components are numbered by their least vertex id.
    pub index: usize,
    pub order: u64,
    pub size: u64,
    pub girth: GirthValue,
    /// `(g - 2) / 2`, when the girth is exact and at least 6.
    pub k: Option<u32>,
    pub lower_bound: Option<f64>,
    /// `size / lower_bound`.
    pub ratio: Option<f64>,
    /// Every vertex has `q` distinct neighbors.
    pub regular: bool,
}

/// One row per connected component, bounds evaluated at the component's
/// own order with `2k + 1 = g - 1`.
pub fn component_report(graph: &ImplicitGraph, cap: u32, budget: &Budget) -> Result<Vec<ComponentRow>> {
    let labels = component_labels(graph, budget)?;
    let count = labels.sizes.len();
    let mut roots: Vec<Vec<VertexId>> = vec![Vec::new(); count];
    let mut degree_sum = vec![0u64; count];
    let mut regular = vec![true; count];
    let q = graph.q();
    let mut scratch = vec![0; 2 * graph.dimension()];
    let mut nbrs = Vec::with_capacity(q as usize);
    for id in 0..graph.order() {
        let c = labels.labels[id as usize] as usize;
        if id < graph.side_size() {
            roots[c].push(id);
        }
        nbrs.clear();
        graph.for_each_neighbor(id, &mut scratch, |_, w| nbrs.push(w));
        nbrs.sort_unstable();
        nbrs.dedup();
        degree_sum[c] += nbrs.len() as u64;
        regular[c] &= nbrs.len() as u64 == q;
    }

    let mut rows = Vec::with_capacity(count);
    for c in 0..count {
        let girth = girth_from_roots(graph, &roots[c], cap, budget)?.value;
        let order = labels.sizes[c];
        let size = degree_sum[c] / 2;
        let k = girth.exact().filter(|&g| g >= 6).map(|g| (g - 2) / 2);
        let lower_bound = match k {
            Some(k) if order >= 2 => Some(turan_bounds(order, k)?.lower),
            _ => None,
        };
        rows.push(ComponentRow {
            index: c,
            order,
            size,
            girth,
            k,
            lower_bound,
            ratio: lower_bound.map(|lb| size as f64 / lb),
            regular: regular[c],
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::Family;

    #[test]
    fn spot_values() {
        let b = turan_bounds(100, 2).unwrap();
        assert_eq!(b.epsilon, 1);
        assert!((b.lower - 353.553_390_593_273_8).abs() < 1e-9);
        assert!((b.upper - 403.553_390_593_273_8).abs() < 1e-9);
        let b = turan_bounds(64, 3).unwrap();
        assert_eq!(b.epsilon, 0);
        // 64^{4/3} = 2^8
        assert!((b.lower - 256.0 / 2f64.powf(4.0 / 3.0)).abs() < 1e-9);
        assert!((b.lower - 101.594).abs() < 1e-3);
    }

    #[test]
    fn domain_errors() {
        assert!(turan_bounds(1, 2).is_err());
        assert!(turan_bounds(100, 1).is_err());
    }

    #[test]
    fn monotone_in_n_and_ordered() {
        for k in 2..8 {
            let mut prev = turan_bounds(2, k).unwrap();
            assert!(prev.lower <= prev.upper);
            for n in 3..2000 {
                let b = turan_bounds(n, k).unwrap();
                assert!(b.lower > prev.lower && b.upper > prev.upper);
                assert!(b.lower <= b.upper);
                prev = b;
            }
        }
    }

    #[test]
    fn d23_single_component() {
        let g = ImplicitGraph::family(Family::D, 2, 3).unwrap();
        let rows = component_report(&g, 12, &Budget::unlimited()).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert_eq!((r.order, r.size, r.girth), (18, 27, GirthValue::Exact(6)));
        assert_eq!(r.k, Some(2));
        // 18^{3/2} / 2^{3/2} = 27 exactly
        assert!((r.ratio.unwrap() - 1.0).abs() < 1e-12);
        assert!(r.regular);
    }

    #[test]
    fn d63_rows_per_component() {
        let g = ImplicitGraph::family(Family::D, 6, 3).unwrap();
        let rows = component_report(&g, 20, &Budget::unlimited()).unwrap();
        assert!(rows.len() > 1);
        for r in &rows {
            assert!(r.regular);
            assert_eq!(2 * r.size, 3 * r.order);
            assert!(r.ratio.unwrap() >= 1.0);
        }
    }

    #[test]
    fn capped_girth_marks_bounds_not_applicable() {
        // D(6,2) is 2-regular; its cycles are all longer than 6
        let g = ImplicitGraph::family(Family::D, 6, 2).unwrap();
        let rows = component_report(&g, 6, &Budget::unlimited()).unwrap();
        for r in rows {
            assert_eq!(r.girth, GirthValue::AtLeast(6));
            assert_eq!((r.k, r.lower_bound, r.ratio), (None, None, None));
        }
    }
}
