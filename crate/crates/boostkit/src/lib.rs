#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod clifford;
pub mod dirac_grid;
pub mod error;
pub mod linalg;
pub mod moments;
pub mod pauli;
pub mod report;

pub use error::{Error, Result};
