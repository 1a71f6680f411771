//! Idealization rings, derivation-twisted subrings and exact checks of their
//! structure on truncated models.

pub mod algebra;
pub mod derivations;
pub mod dvr;
pub mod dsl;
pub mod error;
pub mod extensions;
pub mod idealization;
pub mod twisted;

pub use error::{Error, Result};
