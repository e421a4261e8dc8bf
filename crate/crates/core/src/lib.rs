//! Exact arithmetic for cyclotomic numbers, generalized Jacobi sums, their composition
//! laws and the algebraic varieties cut out by them.

pub mod arith;
pub mod cli;
pub mod composition;
pub mod cyclo;
pub mod error;
pub mod cyclotomy;
pub mod dickson;
pub mod finite_field;
pub mod linalg;
pub mod rational;
pub mod report;
pub mod sweep;
pub mod variety;

pub use cyclo::{CyclotomicElement, GaloisIndex};
pub use error::{Error, Result};
pub use rational::Rat;
