//! Universal factorial Schur functions over the Lazard ring.

pub mod cli;
pub mod combinat;
pub mod duals;
pub mod error;
pub mod fgl;
pub mod int;
pub mod lazard;
pub mod localization;
pub mod series;
pub mod sympoly;
pub mod uschur;
pub mod verify;

pub use error::{Error, Result};
pub use int::Int;
