//! File formats, wall-clock solving and the benchmark harness built on
//! [`misro_core`].

pub mod bench;
pub mod dzn;
mod error;
pub mod json;
pub mod solve;

pub use self::error::Error;
pub use misro_core as core;

pub type Result<T, E = Error> = std::result::Result<T, E>;
