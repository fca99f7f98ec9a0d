//! Quantum dynamics under fundamental time and length uncertainties.
//!
//! The crate evolves density operators with the energy-basis dephasing
//! induced by an imperfect clock, runs the global echo protocol that
//! separates coherent superpositions from classical mixtures, and evaluates
//! when fundamental length uncertainty makes the two indistinguishable
//! (an *event*).
//!
//! All operations are pure functions of their inputs.

pub mod clock;
pub mod decoherence;
pub mod echo;
pub mod error;
pub mod events;
pub mod magnitude;
pub mod planck;
pub mod qcore;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
pub use magnitude::Magnitude;
