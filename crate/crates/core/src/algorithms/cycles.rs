//! Shortest cycles through a vertex and girth.
//!
//! A BFS from the root stamps every vertex with the depth-1 vertex it
//! descends from. An edge between two vertices with different stamps closes
//! a cycle through the root of length `d(x) + d(y) + 1`, and the smallest such
//! edge is exactly the shortest cycle through the root. Edges inside one
//! branch close cycles that avoid the root and are ignored.

use std::fmt;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::budget::Budget;
use crate::graph::{ImplicitGraph, Vertex, VertexId};
use crate::{Error, Result};

const NO_BRANCH: u32 = u32::MAX;

/// Roots per parallel batch in a full girth scan. Each batch searches with
/// the cap fixed by the batches before it, so results do not depend on the
/// worker count.
const ROOT_BATCH: usize = 256;

/// Scratch bytes per vertex: stamp, distance, branch, parent.
const SCRATCH_BYTES: u64 = 4 + 4 + 4 + 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GirthValue {
    Exact(u32),
    /// No cycle shorter than the cap exists.
    AtLeast(u32),
}

impl GirthValue {
    /// The exact value, or the cap for a lower bound.
    pub fn bound(self) -> u32 {
        match self {
            GirthValue::Exact(g) | GirthValue::AtLeast(g) => g,
        }
    }

    pub fn exact(self) -> Option<u32> {
        match self {
            GirthValue::Exact(g) => Some(g),
            GirthValue::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for GirthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GirthValue::Exact(g) => write!(f, "{g}"),
            GirthValue::AtLeast(c) => write!(f, ">={c}"),
        }
    }
}

/// Exact values serialize as numbers, lower bounds as `">=N"`.
impl Serialize for GirthValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GirthValue::Exact(g) => s.serialize_u32(*g),
            GirthValue::AtLeast(_) => s.serialize_str(&self.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GirthReport {
    pub value: GirthValue,
    /// Cycle vertices in order; consecutive entries (and last, first) are adjacent.
    pub witness: Option<Vec<VertexId>>,
    /// Vertices discovered over all searches.
    pub scanned: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GirthMode {
    /// Minimum over every point root.
    Full,
    /// Only the origin; valid when points are equivalent under automorphisms.
    SingleSource,
}

/// `2n + 8`: one even step past the largest bound of interest.
pub fn default_cap(n: usize) -> u32 {
    2 * n as u32 + 8
}

fn check_cap(cap: u32) -> Result<()> {
    if cap < 4 || cap % 2 == 1 {
        return Err(Error::invalid(format!("cycle cap must be even and at least 4, got {cap}")));
    }
    Ok(())
}

struct Scratch {
    stamp: Vec<u32>,
    epoch: u32,
    dist: Vec<u32>,
    branch: Vec<u32>,
    parent: Vec<VertexId>,
    queue: Vec<VertexId>,
    coords: Vec<u32>,
}

struct Found {
    len: u32,
    witness: Vec<VertexId>,
}

impl Scratch {
    fn new(graph: &ImplicitGraph) -> Self {
        let order = graph.order() as usize;
        Scratch {
            stamp: vec![0; order],
            epoch: 0,
            dist: vec![0; order],
            branch: vec![0; order],
            parent: vec![0; order],
            queue: Vec::new(),
            coords: vec![0; 2 * graph.dimension()],
        }
    }

    fn path_to_root(&self, mut v: VertexId, root: VertexId) -> Vec<VertexId> {
        let mut out = vec![v];
        while v != root {
            v = self.parent[v as usize];
            out.push(v);
        }
        out
    }

    /// Shortest cycle through `root` with length below `cap`, if any.
    fn search(&mut self, graph: &ImplicitGraph, root: VertexId, cap: u32) -> (Option<Found>, u64) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        let r = root as usize;
        self.stamp[r] = epoch;
        self.dist[r] = 0;
        self.branch[r] = NO_BRANCH;
        self.parent[r] = root;
        self.queue.clear();
        self.queue.push(root);

        let mut best: Option<(u32, VertexId, VertexId)> = None;
        let mut start = 0;
        let mut depth: u32 = 0;
        let Scratch {
            stamp,
            dist,
            branch,
            parent,
            queue,
            coords,
            ..
        } = self;
        while start < queue.len() && 2 * depth + 1 < cap {
            let end = queue.len();
            for i in start..end {
                let x = queue[i];
                let (bx, px) = (branch[x as usize], parent[x as usize]);
                graph.for_each_neighbor(x, coords, |first, y| {
                    let yi = y as usize;
                    if y == px || y == root {
                        return;
                    }
                    if stamp[yi] != epoch {
                        stamp[yi] = epoch;
                        dist[yi] = depth + 1;
                        branch[yi] = if depth == 0 { first } else { bx };
                        parent[yi] = x;
                        queue.push(y);
                    } else if branch[yi] != bx {
                        let len = depth + dist[yi] + 1;
                        if len < cap && best.is_none_or(|b| len < b.0) {
                            best = Some((len, x, y));
                        }
                    }
                });
            }
            if best.is_some() {
                break;
            }
            start = end;
            depth += 1;
        }
        let scanned = self.queue.len() as u64;
        let found = best.map(|(len, x, y)| {
            let mut witness = self.path_to_root(x, root);
            witness.reverse();
            let mut tail = self.path_to_root(y, root);
            tail.pop();
            witness.extend(tail);
            debug_assert_eq!(witness.len() as u32, len);
            Found { len, witness }
        });
        (found, scanned)
    }
}

fn report(found: Option<Found>, scanned: u64, cap: u32) -> GirthReport {
    match found {
        Some(f) => GirthReport {
            value: GirthValue::Exact(f.len),
            witness: Some(f.witness),
            scanned,
        },
        None => GirthReport {
            value: GirthValue::AtLeast(cap),
            witness: None,
            scanned,
        },
    }
}

/// Length of the shortest cycle through `v`, or `AtLeast(cap)` when every
/// cycle through `v` has length `cap` or more.
pub fn shortest_cycle_through(
    graph: &ImplicitGraph,
    v: &Vertex,
    cap: u32,
    budget: &Budget,
) -> Result<GirthReport> {
    check_cap(cap)?;
    let root = graph.encode(v)?;
    budget.check("cycle search", graph.order(), SCRATCH_BYTES)?;
    let (found, scanned) = Scratch::new(graph).search(graph, root, cap);
    Ok(report(found, scanned, cap))
}

/// Girth below `cap`. In `Full` mode every point is a root and the witness
/// comes from the least root id attaining the minimum.
pub fn girth(graph: &ImplicitGraph, cap: u32, mode: GirthMode, budget: &Budget) -> Result<GirthReport> {
    check_cap(cap)?;
    if mode == GirthMode::SingleSource {
        return shortest_cycle_through(graph, &graph.origin(), cap, budget);
    }
    let roots: Vec<VertexId> = (0..graph.side_size()).collect();
    girth_from_roots(graph, &roots, cap, budget)
}

/// Shortest cycle through any of `roots`; the witness comes from the
/// earliest root in the slice attaining the minimum.
pub fn girth_from_roots(
    graph: &ImplicitGraph,
    roots: &[VertexId],
    cap: u32,
    budget: &Budget,
) -> Result<GirthReport> {
    check_cap(cap)?;
    let workers = rayon::current_num_threads() as u64;
    budget.check("girth scan", graph.order(), SCRATCH_BYTES * workers)?;

    let pool: Mutex<Vec<Scratch>> = Mutex::new(Vec::new());
    let mut best: Option<Found> = None;
    let mut scanned = 0;
    for batch in roots.chunks(ROOT_BATCH) {
        let batch_cap = best.as_ref().map_or(cap, |b| b.len);
        let results: Vec<(Option<Found>, u64)> = batch
            .par_iter()
            .map(|&root| {
                let taken = pool.lock().unwrap().pop();
                let mut scratch = taken.unwrap_or_else(|| Scratch::new(graph));
                let out = scratch.search(graph, root, batch_cap);
                pool.lock().unwrap().push(scratch);
                out
            })
            .collect();
        for (found, n) in results {
            scanned += n;
            if let Some(f) = found {
                if best.as_ref().is_none_or(|b| f.len < b.len) {
                    best = Some(f);
                }
            }
        }
    }
    Ok(report(best, scanned, cap))
}
