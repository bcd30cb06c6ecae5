pub mod arith;
pub mod asymptotics;
pub mod error;
pub mod number_field;
pub mod weighted_space;
pub mod enumeration;

pub use error::{Error, Result};
