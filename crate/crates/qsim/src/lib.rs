//! Sparse pure-state simulation for states whose support is a handful of
//! computational basis strings spread over wide, named registers.
//!
//! The operations are the ones a protocol over such states needs: building
//! superpositions, reversibly evaluating classical functions into ancillas,
//! phase flips, computational and Hadamard-basis measurements, and unitaries
//! confined to a small subspace. [`dense`] holds a brute-force reference for
//! cross-checking on small widths.

pub mod bits;
pub mod dense;
pub mod dist;
mod error;
pub mod gf2;
mod hadamard;
mod layout;
pub mod rng;
mod state;
mod subspace;

pub use bits::{bits, BitString};
pub use dist::OutcomeDistribution;
pub use error::QsimError;
pub use hadamard::{Measurement, EXACT_ENUMERATION_BITS, HADAMARD_SUPPORT_CAP};
pub use layout::RegisterLayout;
pub use rng::DetRng;
pub use state::{SparseState, DEFAULT_SUPPORT_CAP, NORM_TOLERANCE, PRUNE_THRESHOLD};
pub use subspace::SubspaceUnitary;

pub use nalgebra::DMatrix;
pub use num_complex::Complex64;
