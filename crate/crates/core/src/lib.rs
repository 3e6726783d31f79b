//! Finitely presented functors on module categories over finite-dimensional
//! algebras over small prime fields, computed exactly.

pub mod algebra;
pub mod correspond;
pub mod error;
pub mod exactla;
pub mod modcat;
pub mod monoidal;
pub mod funcat;
pub mod presets;
pub mod suites;

pub use error::{Error, Result};
