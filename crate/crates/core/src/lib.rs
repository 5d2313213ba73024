//! Square-function operators characterizing W^{1,p} on sampled periodic grids.
//!
//! Everything here is `no_std` + `alloc`: fields, Fourier multipliers, sphere
//! and ball means, odd averaging kernels, discrete scale quadrature, power
//! weights and maximal functions. IO and experiment orchestration live in the
//! `sqfn` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod averaging;
pub mod error;
pub mod fft;
pub mod field;
pub mod maximal;
pub mod quadrature;
pub mod special;
pub mod spectral;
pub mod squarefn;
pub mod weights;

pub use averaging::{KernelKind, KernelSpec, Omega, ScaleGrid};
pub use error::{Error, Result};
pub use field::{Generator, GridSpec, ScalarField, VectorField};
pub use spectral::{RadialProfile, Spectrum};
pub use squarefn::ScaleFamily;
pub use weights::WeightSpec;
