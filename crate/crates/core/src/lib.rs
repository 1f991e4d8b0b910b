pub mod circuit;
pub mod dynamics;
pub mod metrics;
pub mod effective;
pub mod optimize;
pub mod pulses;
pub mod error;
pub mod experiments;
pub mod qcore;

pub use error::{Error, Result};
