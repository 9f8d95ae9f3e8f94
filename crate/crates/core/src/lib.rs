pub mod algebra;
pub mod error;
pub mod generators;
pub mod instance;
pub mod matrix;
pub mod module;
pub mod operators;
pub mod suite;
pub mod theorem;
pub mod verifier;

pub use error::{Error, Result};
