//! Quaternionic Möbius geometry on the conformal 4-sphere and the
//! transformation theory of isothermic surfaces built on it.

// `!(x > tol)` is used deliberately so that NaN fails every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod frames;
pub mod grid;
pub mod minkowski;
pub mod projective;
pub mod qlinalg;
pub mod quat;
pub mod transforms;

pub use error::{Error, Result};
pub use grid::{EdgeForm, GridDomain, GridMap};
pub use minkowski::HermForm;
pub use projective::HPoint;
pub use qlinalg::{QMat2, QVec2};
pub use quat::Quaternion;
