//! Proper conflict-free (PCF) list coloring of sparse graphs.
//!
//! A coloring is PCF when it is proper and every non-isolated vertex sees
//! some color exactly once among its neighbors. This crate provides:
//!
//! - [`solver`]: an exact backtracking PCF list-coloring solver, `chi_pcf`
//!   and a choosability refuter;
//! - [`patterns`]: a catalog of reducible configurations and a matcher;
//! - [`colorer`]: a constructive colorer that repeatedly finds a
//!   configuration, deletes part of it, colors the rest recursively and
//!   extends the coloring by bounded local search;
//! - [`discharging`]: thread decomposition and charge bookkeeping for
//!   planar graphs of girth at least 12;
//! - [`generators`]: certified random instances of K4-minor-free,
//!   outer-1-planar and planar girth-12 graphs.

pub mod acceptance;
pub mod batch;
pub mod class;
pub mod colorer;
pub mod coloring;
pub mod discharging;
pub mod generators;
pub mod graph;
pub mod io;
pub mod patterns;
pub mod smallgraphs;
pub mod solver;

pub use class::{ClassCertificate, GraphClass};
pub use coloring::{Color, Coloring, ListAssignment};
pub use graph::{Girth, Graph, GraphError, VertexId};
