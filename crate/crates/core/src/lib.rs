//! Dispersion-enhanced rotation sensing: Sagnac phases with medium drag,
//! ring-cavity splitting with an intra-cavity dispersive medium, a numeric
//! transmission-spectrum solver, and quantum-noise-limited sensitivity.
//!
//! Frequencies are angular (rad/s) throughout.

pub mod constants;
pub mod cubic;
pub mod dispersion;
pub mod error;
pub mod resonator;
pub mod sagnac;
pub mod sensitivity;
pub mod spectrum;

pub use error::{Error, Result};
