pub mod algebra;
pub mod error;
pub mod frobenius;
pub mod genus0;
pub mod relations;
pub mod rmatrix;
pub mod strata;
pub mod verify;
pub mod witten;

pub use error::{Error, Result};
