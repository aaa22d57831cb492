//! Bredon homology and cohomology of `D_2p` representation spheres.

pub mod abelian;
pub mod burnside;
pub mod closed_form;
pub mod cw;
pub mod error;
pub mod group;
pub mod gset;
pub mod homology;
pub mod mackey;
pub mod matrix;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
