//! Random simplicial complexes, their exact invariants, and seeded Monte
//! Carlo experiments around their phase transitions.

pub mod collapse;
pub mod complex;
pub mod error;
pub mod geometry;
pub mod homology;
pub mod lab;
pub mod linalg;
pub mod models;
pub mod persistence;
pub mod rng;
pub mod scx;
pub mod snf;
pub mod spectral;
pub mod theory;

pub use complex::{FVector, Simplex, SimplicialComplex, Vertex};
pub use error::{Error, Result};
pub use linalg::Domain;
pub use rng::RngSeed;
