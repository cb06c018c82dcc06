//! Switching analysis for quasi-simple heteroclinic networks with real
//! eigenvalues.
//!
//! Which finite heteroclinic paths can be followed by trajectories starting
//! arbitrarily close to a network is decided in logarithmic coordinates,
//! where cusp-shaped regions near the origin become polyhedral cones:
//!
//! * [`network`]: network model, validation, cycles and global classification
//! * [`cone`]: near-origin feasibility with witnesses and certificates
//! * [`cusp`]: thin/thick power regions and their intersection rules
//! * [`maps`]: local and global maps, composition along paths
//! * [`switching`]: counting criteria, depth bounds, followable enumeration
//! * [`sim`]: vector fields realizing the example networks and itinerary checks

pub mod acceptance;
pub mod cli;
pub mod cone;
pub mod cusp;
pub mod error;
pub mod fixtures;
pub mod maps;
pub mod network;
pub mod report;
pub mod sim;
pub mod switching;

pub use error::{Error, Result};
