//! Exact computations around nodal hypersurface sections.
//!
//! * [`linalg`]: rationals and dense matrices with exact rank, kernel and
//!   row-echelon routines.
//! * [`monodromy`]: Picard-Lefschetz logarithms, the CKS complex and the stalk
//!   cohomology of the intersection cohomology complex at a nodal point.
//! * [`points`]: whether a node set imposes independent conditions on
//!   degree-`d` forms, plus the linear checks on the dual space.
//! * [`bott`]: line-bundle cohomology on `P^n`, Koszul and Eagon-Northcott
//!   resolutions, and the `h^1` vanishing chase.
//! * [`reports`]: the reproduction tables.
//! * [`cli`]: argument parsing and dispatch shared by the binary and bindings.

pub mod bott;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod monodromy;
pub mod points;
pub mod reports;

pub use error::{Error, Result};
pub use linalg::{RatMatrix, Rational};
