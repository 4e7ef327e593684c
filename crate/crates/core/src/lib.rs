pub mod cli;
pub mod cross;
pub mod error;
pub mod extend;
pub mod extremal;
pub mod geometry;
pub mod lemma_lab;
pub mod sampling;

pub use error::{Error, Result};
