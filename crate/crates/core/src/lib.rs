//! Algebraically defined bipartite graphs over finite fields.
//!
//! The graphs here have two copies of `F_q^n` as vertex classes (points and
//! lines) and an edge relation given by a triangular polynomial system
//! `p_j + l_j = f_j(p_1, l_1, ..., p_{j-1}, l_{j-1})`. The two built-in
//! families are `D(n, q)` and `A(n, q)`.
//!
//! ```
//! use adg_core::prelude::*;
//!
//! let g = ImplicitGraph::family(Family::D, 3, 3).unwrap();
//! let report = girth(&g, default_cap(3), GirthMode::Full, &Budget::unlimited()).unwrap();
//! assert_eq!(report.value, GirthValue::Exact(8));
//! ```

pub mod algorithms;
pub mod budget;
pub mod cli;
pub mod covering;
pub mod equations;
pub mod extremal;
pub mod field;
pub mod graph;
pub mod repro;
pub mod spectral;

use thiserror::Error;

pub use budget::{Budget, OverBudget};
pub use equations::Family;
pub use field::Field;
pub use graph::{ImplicitGraph, Side, Vertex, VertexId};

pub mod prelude {
    pub use crate::algorithms::{
        bfs_layers, components, default_cap, girth, lemma22_shape_check, shortest_cycle_through,
        GirthMode, GirthReport, GirthValue, ShapeCheck,
    };
    pub use crate::budget::Budget;
    pub use crate::covering::{lemma21_map, projection_map, verify_covering, CoordinateMap, Policy};
    pub use crate::equations::{builtin_system, parse_system, EquationSystem, Family};
    pub use crate::extremal::{turan_bounds, TuranBound};
    pub use crate::field::Field;
    pub use crate::spectral::{check_2sqrtq, lambda2, Method, SpectralOptions, SpectralReport};
    pub use crate::graph::{ImplicitGraph, Side, Vertex, VertexId};
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] field::FieldError),
    #[error(transparent)]
    System(#[from] equations::SystemError),
    #[error(transparent)]
    Parse(#[from] equations::ParseError),
    #[error(transparent)]
    Eval(#[from] equations::EvalError),
    #[error(transparent)]
    Graph(#[from] graph::GraphError),
    #[error(transparent)]
    OverBudget(#[from] OverBudget),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("{what} is limited to {limit} vertices, instance has {size}")]
    SizeLimit { what: String, size: u64, limit: u64 },
    #[error("eigensolver stopped after {iterations} iterations with residual {residual:e}")]
    NotConverged { iterations: usize, residual: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Errors caused by instance size rather than bad input.
    pub fn is_resource_refusal(&self) -> bool {
        matches!(
            self,
            Error::OverBudget(_) | Error::SizeLimit { .. } | Error::Graph(graph::GraphError::TooLarge { .. })
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
