//! Contrast subgraphs between two groups of graphs over a shared vertex set.
//!
//! Group summaries are built from per-subject graphs, their difference is reduced to an
//! objective over vertex subsets, and that objective is maximized by a semidefinite
//! relaxation with randomized rounding followed by local search. The resulting vertex sets
//! feed a two-feature classification pipeline.

pub mod cli;
pub mod contrast;
pub mod error;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod pipeline;
pub mod solver;
pub mod summary;

pub use contrast::{
    extract, extract_symmetric, resolve_alpha, AlphaKind, AlphaSpec, ContrastResult, Variant,
};
pub use error::{Error, Result};
pub use graph::{GraphGroup, Label, ObservationGraph, TimeSeriesMatrix, VertexId};
pub use matrix::SymMatrix;
pub use solver::{solve, GoqcInstance, Method, SolverConfig, SolverTrace};
pub use summary::{build_difference, build_summary, DifferenceGraph, SummaryGraph, SummaryMode};
