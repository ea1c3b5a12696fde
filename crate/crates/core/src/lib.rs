//! Enumerative invariants of quiver moduli.
//!
//! The invariants live in a graded Lie algebra built from a vertex algebra on
//! the homology of the moduli stack of representations. Everything is exact
//! rational arithmetic on Chern-class polynomial rings.

pub mod charclass;
pub mod cli;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod memo;
pub mod par;
pub mod quiver;
pub mod rational;
pub mod stability;
pub mod vertexalg;
pub mod wallcoeff;

pub use error::{Error, Result};
