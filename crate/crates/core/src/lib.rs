//! Two-robot evacuation from a unit disk when one robot may crash.
//!
//! Both robots start at the center with unit speed. A crashed robot stops for
//! good; the survivor may carry it at a slower pace (cost `α` per unit
//! distance). Evacuation ends when the second robot reaches the hidden exit.

pub mod analysis;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod model;
pub mod simulator;
pub mod strategies;
pub mod validation;

pub use error::{Error, Result};
