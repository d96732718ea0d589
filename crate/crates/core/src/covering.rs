//! Coordinate-selection maps between graphs and covering-map verification.
//!
//! A map sends `(x_1, ..., x_n)` to `(x_{i_1}, ..., x_{i_m})` on either side,
//! with `i_1 = 1`. It is a covering when it is onto and maps every
//! neighborhood bijectively onto the neighborhood of the image.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::equations::Family;
use crate::graph::{ImplicitGraph, Vertex, VertexId};
use crate::{Error, Result};

/// Source order limit for exhaustive verification.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GraphDescriptor {
    pub family: Family,
    pub n: usize,
    pub q: u64,
}

impl GraphDescriptor {
    pub fn new(family: Family, n: usize, q: u64) -> Self {
        GraphDescriptor { family, n, q }
    }

    pub fn of(graph: &ImplicitGraph) -> Self {
        GraphDescriptor::new(graph.label(), graph.dimension(), graph.q())
    }

    /// Builds a built-in family graph over the default field.
    pub fn build(&self) -> Result<ImplicitGraph> {
        Ok(ImplicitGraph::family(self.family, self.n, self.q)?)
    }
}

impl fmt::Display for GraphDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.family, self.n, self.q)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoordinateMap {
    pub source: GraphDescriptor,
    pub target: GraphDescriptor,
    /// 1-based source coordinate for each target coordinate.
    pub index_map: Vec<usize>,
}

impl CoordinateMap {
    pub fn new(source: GraphDescriptor, target: GraphDescriptor, index_map: Vec<usize>) -> Result<Self> {
        if source.q != target.q {
            return Err(Error::invalid("source and target must share the field"));
        }
        if index_map.len() != target.n || target.n > source.n {
            return Err(Error::invalid(format!(
                "index map of length {} cannot send dimension {} to {}",
                index_map.len(),
                source.n,
                target.n
            )));
        }
        if index_map.first() != Some(&1) {
            return Err(Error::invalid("index map must keep the first coordinate in place"));
        }
        if index_map.iter().any(|&i| i == 0 || i > source.n) {
            return Err(Error::invalid("index map entries must lie in 1..=n"));
        }
        if index_map.iter().collect::<HashSet<_>>().len() != index_map.len() {
            return Err(Error::invalid("index map entries must be distinct"));
        }
        Ok(CoordinateMap {
            source,
            target,
            index_map,
        })
    }

    pub fn apply(&self, v: &Vertex) -> Result<Vertex> {
        if v.coords.len() != self.source.n {
            return Err(Error::invalid(format!(
                "vertex has {} coordinates, map expects {}",
                v.coords.len(),
                self.source.n
            )));
        }
        Ok(Vertex {
            side: v.side,
            coords: self.index_map.iter().map(|&i| v.coords[i - 1]).collect(),
        })
    }

    /// The zero-padded preimage of a target vertex.
    pub fn preimage(&self, w: &Vertex) -> Vertex {
        let mut coords = vec![0; self.source.n];
        for (t, &i) in self.index_map.iter().enumerate() {
            coords[i - 1] = w.coords[t];
        }
        Vertex {
            side: w.side,
            coords,
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &CoordinateMap) -> Result<CoordinateMap> {
        if self.target != next.source {
            return Err(Error::invalid(format!(
                "cannot compose: {} is not {}",
                self.target, next.source
            )));
        }
        CoordinateMap::new(
            self.source,
            next.target,
            next.index_map.iter().map(|&i| self.index_map[i - 1]).collect(),
        )
    }

    fn apply_id(&self, src: &ImplicitGraph, tgt: &ImplicitGraph, id: VertexId, buf: &mut [u32], out: &mut [u32]) -> VertexId {
        let side = src.decode_into(id, buf);
        for (t, &i) in self.index_map.iter().enumerate() {
            out[t] = buf[i - 1];
        }
        tgt.encode_coords(side, out)
    }
}

/// Truncation to the first `m` coordinates of the same family.
pub fn projection_map(family: Family, n: usize, m: usize, q: u64) -> Result<CoordinateMap> {
    if m < 2 || m > n {
        return Err(Error::invalid(format!("projection needs 2 <= m <= n, got m = {m}, n = {n}")));
    }
    CoordinateMap::new(
        GraphDescriptor::new(family, n, q),
        GraphDescriptor::new(family, m, q),
        (1..=m).collect(),
    )
}

/// `D(2k+1, q) -> A(k+2, q)` keeping coordinates `1, 2, 3, 5, ..., 2k+1`.
pub fn lemma21_map(k: usize, q: u64) -> Result<CoordinateMap> {
    if k < 1 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let mut index_map = vec![1, 2];
    index_map.extend((1..=k).map(|j| 2 * j + 1));
    CoordinateMap::new(
        GraphDescriptor::new(Family::D, 2 * k + 1, q),
        GraphDescriptor::new(Family::A, k + 2, q),
        index_map,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

impl Default for Policy {
    fn default() -> Self {
        Policy::Sampled {
            count: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum Violation {
    /// No source vertex maps onto `target`.
    NotSurjective { target: VertexId },
    /// A neighbor of `source` maps outside the neighborhood of its image.
    EdgeNotPreserved {
        source: VertexId,
        neighbor: VertexId,
        image: VertexId,
    },
    /// Two neighbors of `source` share an image.
    NotInjective {
        source: VertexId,
        neighbor: VertexId,
        image: VertexId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CoverVerdict {
    Pass {
        sources_checked: u64,
        targets_checked: u64,
    },
    Fail {
        certificate: Violation,
    },
}

impl CoverVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, CoverVerdict::Pass { .. })
    }
}

fn check_local(
    map: &CoordinateMap,
    src: &ImplicitGraph,
    tgt: &ImplicitGraph,
    id: VertexId,
    scratch: &mut Scratch,
) -> Option<Violation> {
    let image = map.apply_id(src, tgt, id, &mut scratch.buf, &mut scratch.out);
    scratch.expected.clear();
    tgt.for_each_neighbor(image, &mut scratch.tgt_nbr, |_, w| scratch.expected.push(w));
    scratch.expected.sort_unstable();
    scratch.images.clear();
    let mut nbrs = std::mem::take(&mut scratch.nbrs);
    nbrs.clear();
    src.for_each_neighbor(id, &mut scratch.src_nbr, |_, u| nbrs.push(u));
    let mut failure = None;
    for &u in &nbrs {
        let w = map.apply_id(src, tgt, u, &mut scratch.buf, &mut scratch.out);
        if scratch.expected.binary_search(&w).is_err() {
            failure = Some(Violation::EdgeNotPreserved {
                source: id,
                neighbor: u,
                image: w,
            });
            break;
        }
        if scratch.images.contains(&w) {
            failure = Some(Violation::NotInjective {
                source: id,
                neighbor: u,
                image: w,
            });
            break;
        }
        scratch.images.push(w);
    }
    scratch.nbrs = nbrs;
    failure
}

struct Scratch {
    buf: Vec<u32>,
    out: Vec<u32>,
    src_nbr: Vec<u32>,
    tgt_nbr: Vec<u32>,
    expected: Vec<VertexId>,
    images: Vec<VertexId>,
    nbrs: Vec<VertexId>,
}

impl Scratch {
    fn new(src: &ImplicitGraph, tgt: &ImplicitGraph) -> Self {
        Scratch {
            buf: vec![0; src.dimension()],
            out: vec![0; tgt.dimension()],
            src_nbr: vec![0; 2 * src.dimension()],
            tgt_nbr: vec![0; 2 * tgt.dimension()],
            expected: Vec::new(),
            images: Vec::new(),
            nbrs: Vec::new(),
        }
    }
}

/// Verifies that `map` is a covering from `source` onto `target`. The
/// certificate on failure names the least offending vertex id.
pub fn verify_covering(
    map: &CoordinateMap,
    source: &ImplicitGraph,
    target: &ImplicitGraph,
    policy: Policy,
) -> Result<CoverVerdict> {
    let (sd, td) = (GraphDescriptor::of(source), GraphDescriptor::of(target));
    if (sd.n, sd.q) != (map.source.n, map.source.q) || (td.n, td.q) != (map.target.n, map.target.q) {
        return Err(Error::invalid(format!(
            "map {} -> {} does not match graphs {sd} -> {td}",
            map.source, map.target
        )));
    }
    if source.field() != target.field() {
        return Err(Error::invalid("source and target must use the same field"));
    }

    let (sources, targets): (Vec<VertexId>, Option<Vec<VertexId>>) = match policy {
        Policy::Exhaustive => {
            if source.order() > EXHAUSTIVE_LIMIT {
                return Err(Error::SizeLimit {
                    what: "exhaustive covering check".into(),
                    size: source.order(),
                    limit: EXHAUSTIVE_LIMIT,
                });
            }
            ((0..source.order()).collect(), None)
        }
        Policy::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut s: Vec<VertexId> = (0..count).map(|_| rng.random_range(0..source.order())).collect();
            let mut t: Vec<VertexId> = (0..count).map(|_| rng.random_range(0..target.order())).collect();
            s.sort_unstable();
            s.dedup();
            t.sort_unstable();
            t.dedup();
            (s, Some(t))
        }
    };

    // (a) surjectivity
    let targets_checked = match &targets {
        None => {
            let mut hit = fixedbitset::FixedBitSet::with_capacity(target.order() as usize);
            let mut scratch = Scratch::new(source, target);
            for &id in &sources {
                hit.insert(map.apply_id(source, target, id, &mut scratch.buf, &mut scratch.out) as usize);
            }
            if let Some(missing) = hit.zeroes().next() {
                return Ok(CoverVerdict::Fail {
                    certificate: Violation::NotSurjective {
                        target: missing as VertexId,
                    },
                });
            }
            target.order()
        }
        Some(ts) => {
            for &t in ts {
                let w = target.decode(t)?;
                let pre = map.preimage(&w);
                if map.apply(&pre)? != w || source.check_vertex(&pre).is_err() {
                    return Ok(CoverVerdict::Fail {
                        certificate: Violation::NotSurjective { target: t },
                    });
                }
            }
            ts.len() as u64
        }
    };

    // (b) local bijectivity
    let failure = sources
        .par_iter()
        .map_init(
            || Scratch::new(source, target),
            |scratch, &id| check_local(map, source, target, id, scratch),
        )
        .find_map_first(|v| v);
    Ok(match failure {
        Some(certificate) => CoverVerdict::Fail { certificate },
        None => CoverVerdict::Pass {
            sources_checked: sources.len() as u64,
            targets_checked,
        },
    })
}

/// Builds both graphs from the map's descriptors and verifies.
pub fn verify_builtin_covering(map: &CoordinateMap, policy: Policy) -> Result<CoverVerdict> {
    let source = map.source.build()?;
    let target = map.target.build()?;
    verify_covering(map, &source, &target, policy)
}

/// Maps a closed walk of the source into the target and returns the length
/// of the shortest cycle in the subgraph the image walk traces out.
pub fn image_cycle_length(
    map: &CoordinateMap,
    source: &ImplicitGraph,
    target: &ImplicitGraph,
    walk: &[VertexId],
) -> Result<Option<u32>> {
    let image: Vec<VertexId> = walk
        .iter()
        .map(|&id| {
            let v = map.apply(&source.decode(id)?)?;
            Ok(target.encode(&v)?)
        })
        .collect::<Result<_>>()?;
    let mut adj: HashMap<VertexId, HashSet<VertexId>> = HashMap::new();
    for i in 0..image.len() {
        let (a, b) = (image[i], image[(i + 1) % image.len()]);
        if !target.neighbor_ids(a).contains(&b) {
            return Err(Error::invalid(format!("image walk steps along a non-edge {a} - {b}")));
        }
        adj.entry(a).or_default().insert(b);
        adj.entry(b).or_default().insert(a);
    }
    // shortest cycle through each edge = 1 + distance with the edge removed
    let mut best: Option<u32> = None;
    for (&u, nbrs) in &adj {
        for &w in nbrs {
            let mut dist: HashMap<VertexId, u32> = HashMap::from([(u, 0)]);
            let mut queue = VecDeque::from([u]);
            while let Some(x) = queue.pop_front() {
                for &y in &adj[&x] {
                    if (x == u && y == w) || dist.contains_key(&y) {
                        continue;
                    }
                    dist.insert(y, dist[&x] + 1);
                    queue.push_back(y);
                }
            }
            if let Some(d) = dist.get(&w) {
                best = Some(best.map_or(d + 1, |b| b.min(d + 1)));
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{girth, GirthMode};
    use crate::budget::Budget;

    #[test]
    fn lemma21_index_maps() {
        assert_eq!(lemma21_map(1, 3).unwrap().index_map, vec![1, 2, 3]);
        assert_eq!(lemma21_map(2, 3).unwrap().index_map, vec![1, 2, 3, 5]);
        assert_eq!(lemma21_map(3, 7).unwrap().index_map, vec![1, 2, 3, 5, 7]);
        let m = lemma21_map(2, 3).unwrap();
        assert_eq!(m.source, GraphDescriptor::new(Family::D, 5, 3));
        assert_eq!(m.target, GraphDescriptor::new(Family::A, 4, 3));
        assert!(lemma21_map(0, 3).is_err());
    }

    #[test]
    fn projection_maps() {
        assert_eq!(projection_map(Family::D, 5, 3, 3).unwrap().index_map, vec![1, 2, 3]);
        assert_eq!(projection_map(Family::A, 7, 2, 4).unwrap().index_map, vec![1, 2]);
        let id = projection_map(Family::A, 4, 4, 3).unwrap();
        let v = Vertex::line(vec![1, 2, 0, 2]);
        assert_eq!(id.apply(&v).unwrap(), v);
        assert!(projection_map(Family::A, 4, 5, 3).is_err());
        assert!(projection_map(Family::A, 4, 1, 3).is_err());
    }

    #[test]
    fn apply_examples() {
        let m = lemma21_map(2, 5).unwrap();
        assert_eq!(m.apply(&Vertex::origin(5)).unwrap(), Vertex::origin(4));
        let v = Vertex::point(vec![1, 2, 3, 4, 0]);
        assert_eq!(m.apply(&v).unwrap(), Vertex::point(vec![1, 2, 3, 0]));
        assert!(m.apply(&Vertex::origin(4)).is_err());
        assert_eq!(m.apply(&m.preimage(&Vertex::line(vec![4, 3, 2, 1]))).unwrap(), Vertex::line(vec![4, 3, 2, 1]));
    }

    #[test]
    fn map_validation() {
        let d5 = GraphDescriptor::new(Family::D, 5, 3);
        let a4 = GraphDescriptor::new(Family::A, 4, 3);
        assert!(CoordinateMap::new(d5, a4, vec![2, 1, 3, 5]).is_err());
        assert!(CoordinateMap::new(d5, a4, vec![1, 2, 2, 5]).is_err());
        assert!(CoordinateMap::new(d5, a4, vec![1, 2, 3, 6]).is_err());
        assert!(CoordinateMap::new(d5, a4, vec![1, 2, 3]).is_err());
        assert!(CoordinateMap::new(d5, GraphDescriptor::new(Family::A, 4, 5), vec![1, 2, 3, 5]).is_err());
    }

    #[test]
    fn lemma21_is_a_covering() {
        let m = lemma21_map(2, 3).unwrap();
        let v = verify_builtin_covering(&m, Policy::Exhaustive).unwrap();
        assert_eq!(
            v,
            CoverVerdict::Pass {
                sources_checked: 2 * 243,
                targets_checked: 2 * 81
            }
        );
    }

    #[test]
    fn tampered_map_fails() {
        let m = CoordinateMap::new(
            GraphDescriptor::new(Family::D, 5, 3),
            GraphDescriptor::new(Family::A, 4, 3),
            vec![1, 2, 3, 4],
        )
        .unwrap();
        let v = verify_builtin_covering(&m, Policy::Exhaustive).unwrap();
        assert!(!v.passed());
        let sampled = verify_builtin_covering(&m, Policy::default()).unwrap();
        assert_eq!(sampled, v, "both policies find the least failing vertex");
    }

    #[test]
    fn wrong_target_family_fails() {
        // the identity-like selection from D(4,3) to A(4,3) is not a covering
        let m = CoordinateMap::new(
            GraphDescriptor::new(Family::D, 4, 3),
            GraphDescriptor::new(Family::A, 4, 3),
            vec![1, 2, 3, 4],
        )
        .unwrap();
        assert!(!verify_builtin_covering(&m, Policy::Exhaustive).unwrap().passed());
    }

    #[test]
    fn composition_is_a_covering() {
        let k = 2;
        let first = lemma21_map(k, 3).unwrap();
        for m in 2..=k + 2 {
            let composed = first.then(&projection_map(Family::A, k + 2, m, 3).unwrap()).unwrap();
            assert_eq!(composed.index_map, first.index_map[..m].to_vec());
            assert!(verify_builtin_covering(&composed, Policy::Exhaustive).unwrap().passed());
        }
        assert!(projection_map(Family::D, 5, 3, 3).unwrap().then(&first).is_err());
    }

    #[test]
    fn cycle_images_contain_shorter_cycles() {
        let m = lemma21_map(2, 3).unwrap();
        let src = m.source.build().unwrap();
        let tgt = m.target.build().unwrap();
        let b = Budget::unlimited();
        for root in [0u64, 17, 100, 242] {
            let r = crate::algorithms::shortest_cycle_through(&src, &src.decode(root).unwrap(), 20, &b).unwrap();
            let cycle = r.witness.unwrap();
            let len = image_cycle_length(&m, &src, &tgt, &cycle).unwrap().unwrap();
            assert!(len as usize <= cycle.len());
        }
        let gs = girth(&src, 20, GirthMode::Full, &b).unwrap().value.bound();
        let gt = girth(&tgt, 20, GirthMode::Full, &b).unwrap().value.bound();
        assert!(gs >= gt);
    }
}
