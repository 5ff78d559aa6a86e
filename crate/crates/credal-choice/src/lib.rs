//! Exact decision making with sets of probabilities on finite spaces.

pub mod axioms;
pub mod choice;
pub mod error;
pub mod independence;
pub mod io;
pub mod lp;
pub mod marginals;
pub mod model;
pub mod posi;
pub mod previsions;
pub mod rational;
pub mod sampling;
pub mod verify;

pub use error::{Error, Result};
pub use rational::Rat;
