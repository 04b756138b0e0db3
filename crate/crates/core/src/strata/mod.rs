//! Stable graphs, decorated strata classes and the graph sums that produce them.

pub mod decorated;
pub mod givental;
pub mod graph;
pub mod integrate;
pub mod pushforward;
pub mod weighting;

pub use decorated::{BoundaryDivisor, DecoratedClass, DecoratedGraph, Divisor, HalfEdge, KappaMonomial};
pub use graph::{enumerate_stable_graphs, StableGraph};
