//! Exact sequential-measurement statistics for classical stochastic games
//! with more than one complete set of states.
//!
//! The crate is organised around four layers:
//!
//! - [`measure`]: configurations, p-states, event filtering, sequential and
//!   conditional probabilities, reachability.
//! - [`compat`]: the three value-pair compatibility criteria (non-disturbance,
//!   ignored measurement, order exchange), repeatability, sharpness,
//!   interference, and a randomized search for systems separating the criteria.
//! - [`quantum`]: the projector/density-operator counterpart and a numerical
//!   check that each criterion coincides with projector commutativity.
//! - [`catalog`]: the card-deck and urn systems, random table systems, and the
//!   JSON system format.
//!
//! All classical probabilities are exact [`Rational`]s.

pub mod catalog;
pub mod compat;
pub mod error;
pub mod measure;
pub mod quantum;
pub mod rational;
pub mod seed;

pub use error::{Error, Result};
pub use rational::Rational;
