//! Reflection and transmission of plane waves by two parallel chiral and/or
//! chiral-nihility layers, and the field around the focus of a large
//! paraboloidal reflector built from such layers.

pub mod cli;
pub mod config;
pub mod error;
pub mod maslov;
pub mod media;
pub mod planar;
pub mod presets;
pub mod sweep;

pub use error::{Error, Result};
pub use {nalgebra, num_complex};
