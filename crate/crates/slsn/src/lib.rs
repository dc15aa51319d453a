//! Solvers and instance generators for the shallow-light Steiner network
//! problem: pick a minimum-cost edge set in which every demand pair is joined
//! by a path no longer than a global bound `L`.

pub mod approx;
pub mod classifier;
pub mod error;
pub mod exact_const;
pub mod gadgets;
pub mod graph;
pub mod io;
mod guess;
pub mod random;
pub mod oracle;
pub mod rational;
pub mod star_dst;

pub use error::{Result, SlsnError};
pub use graph::{
    DemandGraph, Edge, EdgeId, Path, SlsnInstance, Solution, VertexId, WeightedGraph,
};
pub use rational::Rational;
