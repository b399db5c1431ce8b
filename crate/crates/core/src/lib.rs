#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod convdual;
pub mod dfinite;
pub mod error;
pub mod kernel;
pub mod moments;
pub mod polyalg;
pub mod prony;
pub mod quad;
pub mod scalar;
pub mod signals;

pub use error::{Error, Result, Stage, Warning};
pub use moments::{FourierMeasurements, MomentSequence, Provenance};
pub use num_complex::Complex64;
pub use polyalg::{DenseMatrix, Polynomial};
