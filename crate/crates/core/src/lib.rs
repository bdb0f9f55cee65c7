//! Arithmetic and local dynamics of regular polynomial endomorphisms of the affine plane.

pub mod error;
pub mod curves;
pub mod exactnum;
pub mod green;
pub mod heights;
pub mod infinity;
pub mod localdyn;
pub mod maps;
pub mod polyalg;

pub use error::{Error, Result};
pub use exactnum::Rational;
