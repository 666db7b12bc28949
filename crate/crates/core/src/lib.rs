//! Collective spontaneous emission and entanglement decay of two identical
//! two-level atoms in front of a perfectly conducting mirror.
//!
//! All rates are in units of the free-space single-atom rate γ₀, lengths in
//! units of c/ω₀ and times in units of 1/ω₀ (or 1/γ₀ for dynamics).

pub mod cli;
pub mod correlators;
pub mod dynamics;
pub mod error;
pub mod oracle;
pub mod params;
pub mod rates;

pub use error::{Error, Result};
pub use params::{Boundary, GeometryConfig, InitialState, PolarizationAxis};
pub use rates::{Provenance, RateSet};
