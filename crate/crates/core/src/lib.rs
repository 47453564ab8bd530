//! Computational toolkit for p-DG cyclotomic nilHecke algebras, their
//! two-block modules, and the small quantum sl2 tensor products they categorify.

pub mod cache;
pub mod catsl2;
pub mod cli;
pub mod coeff;
pub mod combinatorics;
pub mod decat;
pub mod error;
pub mod homs;
pub mod linalg;
pub mod modules;
pub mod nilhecke;
pub mod poly;
pub mod quiver;
pub mod suite;

pub use error::{Error, Result};
