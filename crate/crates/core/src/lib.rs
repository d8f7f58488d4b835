//! Variational B-spline / configuration-interaction structure of helium-like
//! ions, with density-based information and entanglement measures.

// `!(x > y)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angular;
pub mod ci;
pub mod delta;
pub mod density;
pub mod entanglement;
pub mod info;
pub mod labels;
pub mod bspline;
pub mod error;
pub mod linalg;
pub mod orbitals;
pub mod pipeline;

pub use error::{Error, Result};
