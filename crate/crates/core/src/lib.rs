pub mod arith;
pub mod dynamics;
pub mod error;
pub mod map;
pub mod monodromy;
pub mod ramification;
pub mod reduction;

pub use error::{Error, Result};
