//! Radial B-spline basis: knot sequences, Cox–de Boor evaluation and
//! piecewise Gauss–Legendre quadrature over the breakpoint intervals.

mod basis;
mod knots;
mod quadrature;

pub use basis::{BSplineBasis, LocalDerivatives, LocalSplines, SplineTable, TableRow};
pub use knots::{KnotKind, KnotSequence};
pub use quadrature::{gauss_legendre, legendre_p, QuadratureRule};
