//! Momentum-space analysis of massless spin-½ wave equations: solution
//! subspaces, subsidiary conditions, and their behaviour under P, C, T and
//! proper Lorentz transformations.

#![allow(clippy::needless_range_loop)]

pub mod audit;
pub mod cli;
pub mod clifford;
pub mod eqdsl;
pub mod equations;
pub mod error;
pub mod kinematics;
pub mod subspaces;
pub mod svd;
pub mod symmetries;

pub use error::{Error, Result};
