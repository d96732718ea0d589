//! The implicit bipartite graph of an equation system over GF(q).
//!
//! Points and lines are both `F_q^n`. Nothing is stored: neighbors are
//! produced on demand by forward substitution, one coordinate per equation.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equations::{builtin_system, CompiledSystem, EquationSystem, Family, SystemError};
use crate::field::{Field, FieldError};

/// Vertex ids must stay below this bound.
pub const MAX_ORDER: u64 = 1 << 63;

pub type VertexId = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Point,
    Line,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Point => Side::Line,
            Side::Line => Side::Point,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub side: Side,
    pub coords: Vec<u32>,
}

impl Vertex {
    pub fn point(coords: Vec<u32>) -> Self {
        Vertex {
            side: Side::Point,
            coords,
        }
    }

    pub fn line(coords: Vec<u32>) -> Self {
        Vertex {
            side: Side::Line,
            coords,
        }
    }

    /// The all-zero point `(0)`.
    pub fn origin(n: usize) -> Self {
        Vertex::point(vec![0; n])
    }
}

/// `(a, b, ...)` for points, `[a, b, ...]` for lines, using integer codes.
impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self
            .coords
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",");
        match self.side {
            Side::Point => write!(f, "({body})"),
            Side::Line => write!(f, "[{body}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph with 2*{q}^{n} vertices exceeds the 2^63 id space")]
    TooLarge { q: u64, n: usize },
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("vertex has {found} coordinates, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("coordinate {code} is not a field element")]
    Coordinate { code: u32 },
    #[error("vertex id {id} out of range 0..{order}")]
    IdOutOfRange { id: VertexId, order: u64 },
    #[error("adjacency takes a point and a line, in that order")]
    Sides,
}

/// `Γ_q(f_2, ..., f_n)`, backed by a neighbor oracle.
#[derive(Debug, Clone)]
pub struct ImplicitGraph {
    family: Family,
    system: EquationSystem,
    compiled: CompiledSystem,
    n: usize,
    q: u64,
    /// `q^n`: number of points, and the id offset of the lines.
    side_size: u64,
}

impl ImplicitGraph {
    pub fn new(field: &Field, system: EquationSystem, family: Family) -> Result<Self, GraphError> {
        system.validate().map_err(SystemError::from)?;
        let n = system.dimension();
        let q = field.order();
        let side_size = u32::try_from(n)
            .ok()
            .and_then(|e| q.checked_pow(e))
            .filter(|s| s.checked_mul(2).is_some_and(|o| o < MAX_ORDER))
            .ok_or(GraphError::TooLarge { q, n })?;
        Ok(ImplicitGraph {
            family,
            compiled: CompiledSystem::new(&system, field),
            system,
            n,
            q,
            side_size,
        })
    }

    pub fn builtin(family: Family, n: usize, field: &Field) -> Result<Self, GraphError> {
        Self::new(field, builtin_system(family, n)?, family)
    }

    /// Shorthand for a built-in family over the default field of order `q`.
    pub fn family(family: Family, n: usize, q: u64) -> Result<Self, GraphError> {
        Self::builtin(family, n, &Field::with_order(q)?)
    }

    pub fn label(&self) -> Family {
        self.family
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn field(&self) -> &Field {
        self.compiled.field()
    }

    pub fn system(&self) -> &EquationSystem {
        &self.system
    }

    pub fn compiled(&self) -> &CompiledSystem {
        &self.compiled
    }

    /// Number of points (equally, of lines): `q^n`.
    pub fn side_size(&self) -> u64 {
        self.side_size
    }

    /// `2 q^n`.
    pub fn order(&self) -> u64 {
        2 * self.side_size
    }

    /// `q^{n+1}` by regularity.
    pub fn edge_count(&self) -> u64 {
        self.side_size * self.q
    }

    pub fn origin(&self) -> Vertex {
        Vertex::origin(self.n)
    }

    pub fn check_vertex(&self, v: &Vertex) -> Result<(), GraphError> {
        if v.coords.len() != self.n {
            return Err(GraphError::Dimension {
                expected: self.n,
                found: v.coords.len(),
            });
        }
        match v.coords.iter().find(|&&c| !self.field().contains(c)) {
            Some(&code) => Err(GraphError::Coordinate { code }),
            None => Ok(()),
        }
    }

    /// Forward substitution: writes into `out` the coordinates of the unique
    /// neighbor of `(side, coords)` whose first coordinate is `x`.
    #[inline]
    pub fn neighbor_coords(&self, side: Side, coords: &[u32], x: u32, out: &mut [u32]) {
        let f = self.field();
        out[0] = x;
        for j in 2..=self.n {
            let rhs = match side {
                Side::Point => self.compiled.eval_unchecked(j, coords, out),
                Side::Line => self.compiled.eval_unchecked(j, out, coords),
            };
            out[j - 1] = f.sub(rhs, coords[j - 1]);
        }
    }

    pub fn neighbor_by_first_coord(&self, v: &Vertex, x: u32) -> Vertex {
        let mut out = vec![0; self.n];
        self.neighbor_coords(v.side, &v.coords, x, &mut out);
        Vertex {
            side: v.side.other(),
            coords: out,
        }
    }

    /// All `q` neighbors, ordered by their first coordinate.
    pub fn neighbors(&self, v: &Vertex) -> Vec<Vertex> {
        self.field()
            .elements()
            .map(|x| self.neighbor_by_first_coord(v, x))
            .collect()
    }

    /// Whether every equation `p_j + l_j = f_j` holds.
    pub fn adjacent(&self, p: &Vertex, l: &Vertex) -> Result<bool, GraphError> {
        if p.side != Side::Point || l.side != Side::Line {
            return Err(GraphError::Sides);
        }
        self.check_vertex(p)?;
        self.check_vertex(l)?;
        let f = self.field();
        Ok((2..=self.n).all(|j| {
            f.add(p.coords[j - 1], l.coords[j - 1])
                == self.compiled.eval_unchecked(j, &p.coords, &l.coords)
        }))
    }

    #[inline]
    pub fn encode_coords(&self, side: Side, coords: &[u32]) -> VertexId {
        let code = coords
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.q + u64::from(c));
        match side {
            Side::Point => code,
            Side::Line => code + self.side_size,
        }
    }

    /// Inverse of [`encode_coords`](Self::encode_coords); `id` must be in range.
    #[inline]
    pub fn decode_into(&self, id: VertexId, coords: &mut [u32]) -> Side {
        let (side, mut code) = if id < self.side_size {
            (Side::Point, id)
        } else {
            (Side::Line, id - self.side_size)
        };
        for c in coords.iter_mut() {
            *c = (code % self.q) as u32;
            code /= self.q;
        }
        side
    }

    pub fn encode(&self, v: &Vertex) -> Result<VertexId, GraphError> {
        self.check_vertex(v)?;
        Ok(self.encode_coords(v.side, &v.coords))
    }

    pub fn decode(&self, id: VertexId) -> Result<Vertex, GraphError> {
        if id >= self.order() {
            return Err(GraphError::IdOutOfRange {
                id,
                order: self.order(),
            });
        }
        let mut coords = vec![0; self.n];
        let side = self.decode_into(id, &mut coords);
        Ok(Vertex { side, coords })
    }

    pub fn side_of(&self, id: VertexId) -> Side {
        if id < self.side_size {
            Side::Point
        } else {
            Side::Line
        }
    }

    /// Calls `visit(x, neighbor_id)` for every neighbor of `id`, in order of
    /// first coordinate. `scratch` must hold at least `2n` entries.
    #[inline]
    pub fn for_each_neighbor(
        &self,
        id: VertexId,
        scratch: &mut [u32],
        mut visit: impl FnMut(u32, VertexId),
    ) {
        let (coords, out) = scratch.split_at_mut(self.n);
        let side = self.decode_into(id, coords);
        let other = side.other();
        for x in 0..self.q as u32 {
            self.neighbor_coords(side, coords, x, &mut out[..self.n]);
            visit(x, self.encode_coords(other, &out[..self.n]));
        }
    }

    pub fn neighbor_ids(&self, id: VertexId) -> Vec<VertexId> {
        let mut scratch = vec![0; 2 * self.n];
        let mut out = Vec::with_capacity(self.q as usize);
        self.for_each_neighbor(id, &mut scratch, |_, w| out.push(w));
        out
    }

    /// Every edge as `(point id, line id)`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let mut scratch = vec![0; 2 * self.n];
        (0..self.side_size).flat_map(move |p| {
            let mut lines = Vec::with_capacity(self.q as usize);
            self.for_each_neighbor(p, &mut scratch, |_, l| lines.push(l));
            lines.sort_unstable();
            lines.into_iter().map(move |l| (p, l))
        })
    }

    /// Counts edges by sweeping every point's neighborhood.
    pub fn swept_edge_count(&self) -> u64 {
        let mut scratch = vec![0; 2 * self.n];
        let mut total = 0;
        for p in 0..self.side_size {
            self.for_each_neighbor(p, &mut scratch, |_, _| total += 1);
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn graph(family: Family, n: usize, q: u64) -> ImplicitGraph {
        ImplicitGraph::family(family, n, q).unwrap()
    }

    #[test]
    fn orders() {
        let g = graph(Family::D, 2, 3);
        assert_eq!(g.order(), 18);
        assert_eq!(g.neighbors(&g.origin()).len(), 3);
        assert_eq!(graph(Family::A, 4, 5).order(), 1250);
        assert_eq!(graph(Family::D, 6, 2).order(), 128);
    }

    #[test]
    fn too_large_is_refused() {
        assert!(matches!(
            ImplicitGraph::family(Family::D, 9, 999_999_937),
            Err(GraphError::TooLarge { .. })
        ));
        assert!(ImplicitGraph::family(Family::A, 61, 2).is_ok());
        assert!(ImplicitGraph::family(Family::A, 62, 2).is_err());
    }

    #[test]
    fn origin_neighbors_in_a() {
        for n in 2..7 {
            let g = graph(Family::A, n, 3);
            for a in 0..3 {
                let mut expect = vec![0; n];
                expect[0] = a;
                assert_eq!(g.neighbor_by_first_coord(&g.origin(), a), Vertex::line(expect));
            }
        }
    }

    #[test]
    fn second_layer_shape_in_a() {
        let g = graph(Family::A, 5, 3);
        for a in 0..3 {
            let mut line = vec![0; 5];
            line[0] = a;
            let line = Vertex::line(line);
            for x in 1..3 {
                let w = g.neighbor_by_first_coord(&line, x);
                assert_eq!(w, Vertex::point(vec![x, (a * x) % 3, 0, 0, 0]));
            }
        }
    }

    #[test]
    fn a33_worked_example() {
        let g = graph(Family::A, 3, 3);
        let v = Vertex::point(vec![1, 1, 1]);
        assert_eq!(g.neighbor_by_first_coord(&v, 2), Vertex::line(vec![2, 1, 0]));
        assert_eq!(g.adjacent(&v, &Vertex::line(vec![2, 1, 0])), Ok(true));
        assert_eq!(g.adjacent(&v, &Vertex::line(vec![2, 1, 1])), Ok(false));
    }

    #[test]
    fn d23_origin_neighbors() {
        let g = graph(Family::D, 2, 3);
        let got: Vec<Vertex> = g.neighbors(&g.origin());
        let want: Vec<Vertex> = (0..3).map(|a| Vertex::line(vec![a, 0])).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn adjacency_errors() {
        let g = graph(Family::D, 3, 3);
        let p = g.origin();
        assert_eq!(g.adjacent(&p, &p), Err(GraphError::Sides));
        let l = Vertex::line(vec![0, 0, 0]);
        assert_eq!(g.adjacent(&l, &p), Err(GraphError::Sides));
        assert!(g.adjacent(&p, &Vertex::line(vec![0, 0])).is_err());
        assert!(g.adjacent(&p, &Vertex::line(vec![0, 0, 7])).is_err());
    }

    #[test]
    fn encoding_examples() {
        let g = graph(Family::D, 4, 3);
        assert_eq!(g.encode(&g.origin()), Ok(0));
        assert_eq!(g.encode(&Vertex::line(vec![0; 4])), Ok(81));
        assert_eq!(g.encode(&Vertex::point(vec![1, 2, 0, 0])), Ok(7));
        assert!(matches!(g.decode(162), Err(GraphError::IdOutOfRange { .. })));
    }

    #[test]
    fn edges_sorted_and_counted() {
        let g = graph(Family::D, 2, 3);
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges.len(), 27);
        assert!(edges.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g.swept_edge_count(), g.edge_count());
        let d33 = graph(Family::D, 3, 3);
        assert_eq!(d33.swept_edge_count(), 81);
        assert_eq!(graph(Family::A, 4, 5).edge_count(), 3125);
    }

    #[test]
    fn custom_system_regular_and_symmetric() {
        let sys = crate::equations::parse_system("p2 + l2 = p1*l1^2 + 1\np3 + l3 = p2*l1 - l2*p1^3").unwrap();
        let field = Field::with_order(5).unwrap();
        let g = ImplicitGraph::new(&field, sys, Family::Custom).unwrap();
        for id in 0..g.order() {
            let nbrs = g.neighbor_ids(id);
            assert_eq!(nbrs.iter().collect::<HashSet<_>>().len(), 5);
            for w in nbrs {
                assert!(g.neighbor_ids(w).contains(&id));
            }
        }
    }
}
