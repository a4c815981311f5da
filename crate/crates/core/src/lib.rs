//! Nonorthogonal unextendible product bases from prime-order DFT matrices,
//! with exact and numerical certification that their orthocomplement is a
//! genuinely entangled subspace.

pub mod construct;
pub mod cyclo;
pub mod error;
pub mod exactverify;
pub mod io;
pub mod numcert;
pub mod partition;
pub mod primes;
pub mod scalar;

use nalgebra::DMatrix;
use num_complex::Complex;
use num_rational::BigRational;

pub use construct::{ConstructionParams, Nupb, Scale};
pub use error::{GesError, Result};
pub use partition::Bipartition;

/// Exact element of `Q(ω)`.
pub type Cyc = cyclo::CycNum<BigRational>;
pub type CycMat = cyclo::CycMatrix<BigRational>;

pub type CMat64 = DMatrix<Complex<f64>>;
pub type CMat32 = DMatrix<Complex<f32>>;
pub type GesBasis64 = numcert::GesBasis<f64>;
pub type GesBasis32 = numcert::GesBasis<f32>;
pub type BiproductSearch64 = numcert::BiproductSearch<f64>;
