//! Tamper-resilient quantum public-key encryption with classical
//! ciphertexts, simulated on sparse state vectors.

pub mod base;
pub mod cli;
pub mod detect;
pub mod games;
mod error;
pub mod params;
pub mod primitives;
pub mod pure;
pub mod scheme;
pub mod transforms;
pub mod wire;

pub use error::{Error, Result};
pub use params::{Profile, ProfileName};
pub use scheme::Qpke;
