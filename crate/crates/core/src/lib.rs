//! Selective unboundedness analyses for vector addition systems with states.
//!
//! The crate decides boundedness, place and simultaneous unboundedness,
//! termination, reversal-boundedness (plain and thresholded), nonregularity
//! and strong promptness, both through Karp–Miller trees and through a
//! bounded search for witness runs.

pub mod analyses;
pub mod coverability;
pub mod io;
pub mod model;
pub mod properties;
pub mod reductions;
