//! Nielsen classes, Hurwitz braid orbits, and Modular Tower levels for
//! finite groups.

pub mod braid;
pub mod error;
pub mod geometry;
pub mod group;
pub mod lift;
pub mod nielsen;
pub mod tower;
mod pool;

pub use error::{Error, Result};
