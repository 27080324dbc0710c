//! Label propagation community detection.
//!
//! A [`Graph`] is clustered by repeatedly moving each node to the label
//! that scores best among its neighbors under a [`Rule`]. The
//! [`Propagator`] drives the iteration under a chosen update schedule,
//! tie policy and stopping criterion; [`objectives`] measures the result
//! and [`pipelines`] composes runs into consensus, hierarchical and
//! overlapping detection.

pub mod engine;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod objectives;
pub mod partition;
pub mod pipelines;
pub mod rules;

pub use engine::{
    run, run_from, run_many, Convergence, Propagator, RunConfig, RunResult, Schedule, TiePolicy,
};
pub use error::{Error, Result};
pub use graph::{Graph, GraphBuilder};
pub use partition::{Coloring, Cover, Partition};
pub use rules::Rule;
