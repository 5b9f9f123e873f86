//! Discrete isothermic nets in R^4 ≅ H: quaternionic cross ratios, the
//! hexahedron construction, Christoffel and Darboux transforms, Bianchi
//! permutability and discrete constant mean curvature nets.

// `!(residual <= tol)` is how NaN residuals fail a check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod christoffel;
pub mod cmc;
pub mod crossratio;
pub mod darboux;
pub mod error;
pub mod hexa;
pub mod io;
pub mod lattice;
pub mod quat;

pub use crossratio::{cross_ratio, CrossRatioValue};
pub use error::{Error, Result, VertexIndex};
pub use lattice::{DualIndex, LatticeWindow, Net};
pub use quat::Quaternion;
