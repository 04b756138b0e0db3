//! Exact arithmetic primitives shared by every other module.

pub mod interp;
pub mod matrix;
pub mod partition;
pub mod polynomial;
pub mod rational;
pub mod series;

pub use matrix::{QMatrix, SeriesMatrix};
pub use partition::{count_partitions, partitions, partitions_max_parts, Partition};
pub use polynomial::Polynomial;
pub use rational::{factorial, int, parse_rational, rat, Rational};
pub use series::Series;
