//! Finite-window laboratory for Ramsey-theoretic set classes.
//!
//! Every infinite notion handled here (thick, syndetic, piecewise syndetic,
//! IP, J-sets, essential-set certificates, sum subsystems) is decided on an
//! explicit finite window or within an explicit search budget. Each answer
//! records which direction of the verdict carries over to the infinite
//! statement.

pub mod builder;
pub mod chain;
pub mod error;
pub mod family;
pub mod properties;
pub mod semigroup;
pub mod setexpr;
pub mod structures;
pub mod window;

pub use error::{Error, Result};
pub use setexpr::SetExpr;
pub use window::WindowSet;
