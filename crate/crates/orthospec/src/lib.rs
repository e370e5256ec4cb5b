//! Local spectral data for orthogonal groups attached to integral quadratic
//! lattices, and numerical checks of the archimedean integrals that feed
//! the central-value spectral measure.

pub mod error;
pub mod quad;
pub mod special;
pub mod quadlat;
pub mod rootdata;
pub mod lfactors;
pub mod par;
pub mod plancherel;
pub mod specmeasure;
pub mod archforms;
pub mod cli;

pub use error::{Error, Result};
