//! Quaternionic S-polyregular Bargmann analysis.
//!
//! The crate is `no_std` (it needs `alloc`) and covers the algebraic and
//! numerical layer: quaternion arithmetic in slice form, quaternionic Hermite
//! polynomials, truncated S-polyregular series with their star products,
//! Gaussian quadrature on lines, slices and the sphere of imaginary units,
//! reproducing kernels, Segal-Bargmann transforms and the spectral theory of
//! the slice operator `-∂_s ∂̄_s + q̄ ∂̄_s`.
//!
//! IO, configuration and the command line live in the `qslice-cli` crate.

#![no_std]

extern crate alloc;

pub mod bargmann;
pub mod error;
pub mod kernels;
pub mod poly;
pub mod quad;
pub mod quat;
pub mod scalar;
pub mod series;
pub mod spectral;

pub use error::{Error, Result};
pub use quat::{ImaginaryUnit, PolarForm, Quaternion, SliceForm};
pub use scalar::{Exact, Scalar};
pub use series::{PolySliceSeries, RightPolySeries, SliceSeries};
