//! Exact kernelization for the maximum weight independent set problem.
//!
//! A [`WeightedGraph`] is reduced by a configurable set of exact reduction
//! rules ([`reductions`]) driven by the [`scheduler`]. Every applied rule is
//! recorded in a [`ReductionTrace`], which maps any solution of the kernel back
//! to a solution of the input of weight `kernel weight + offset`.

pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod reductions;
pub mod scheduler;
pub mod solver;
pub mod trace;

pub use error::{FormatError, GraphError, LiftError, ReduceError, SolveError};
pub use scheduler::{parse_rule_list, reduce, try_rule, verify_kernel, KernelResult, ReducerConfig, Stats, VerifyReport};
pub use graph::{VertexId, VertexSet, Weight, WeightedGraph};
pub use trace::{Lift, ReductionTrace, Rule, Solution, TraceEvent};
