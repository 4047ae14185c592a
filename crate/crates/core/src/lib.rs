//! Minimal Complexity Machine classifiers trained by integrating a projected
//! primal-dual dynamical system to the optimum of the underlying LP.

pub mod bench;
pub mod cli;
pub mod data;
pub mod dynamics;
pub mod error;
pub mod lp;
pub mod mcm;

pub use error::{Error, Result};
