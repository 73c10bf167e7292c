//! Morley-type virtual elements for the steady Navier–Stokes equations in
//! stream-function form on general polygonal meshes.

pub mod assembly;
pub mod cli;
pub mod crouzeix_raviart;
pub mod error;
pub mod exact;
pub mod mesh;
pub mod morley;
pub mod postprocess;
pub mod quadrature;
pub mod solver;

pub use error::{Error, MeshError, Result};
