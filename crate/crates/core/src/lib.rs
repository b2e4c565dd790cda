//! Perturbation duality for vector optimization over polyhedral cones in
//! low dimension, evaluated exactly on finite sample grids.

pub mod cone_order;
pub mod error;
pub mod farkas;
pub mod fixtures;
pub mod linalg;
pub mod lp;
pub mod mappings;
pub mod perturbation;
pub mod scalar_fl;
pub mod weak_sets;

pub use error::{Error, Result};
