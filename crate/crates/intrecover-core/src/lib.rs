//! Recovery of integer images from a minimal set of 2D DFT coefficients.
//!
//! Frequencies are grouped into equivalence classes under multiplication by units; one
//! coefficient per class determines an integer image. Recovery walks the classes in
//! divisor order and solves each length-`D` subsignal as a shortest-vector problem.
//!
//! ```
//! use intrecover_core::{numtheory, sampling};
//! assert_eq!(sampling::count_classes(4, 6), 12);
//! assert_eq!(numtheory::totient(30), 8);
//! ```
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod inversion;
pub mod lattice;
pub mod numtheory;
pub mod real;
pub mod sampling;
pub mod transform;

pub use error::Error;
pub use real::{Complex, Double2, Double3, Double4, MultiFloat, Real};
pub use transform::{Grid, IntImage, PrecisionContext, Tier};
