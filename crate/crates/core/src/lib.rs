//! Hidden-pointer chasing: instances, phase protocols, lower-bound reductions
//! to graph problems, exact verifiers and a finite information-theory toolkit.

pub mod error;
pub mod info_theory;
pub mod instances;
pub mod protocols;
pub mod reductions;
pub mod rng;
pub mod verifiers;

pub use error::{Error, Result};
