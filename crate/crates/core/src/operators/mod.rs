//! Structured blur operators.
//!
//! A [`Psf`] together with a [`BoundaryCondition`] defines a [`BlurOperator`]
//! whose forward and adjoint products cost `O(n^2 log n)` through padded FFT
//! convolution. The generating function of the PSF is sampled by
//! [`sample_symbol`] (direct summation) and [`bccb_eigenvalues`] (FFT of the
//! first circulant column); both produce the same [`SymbolGrid`].

mod blur;
mod psf;
mod symbol;

pub use blur::{
    apply_flip, materialize_dense, materialize_dense_with_cap, BlurOperator, BoundaryCondition,
    Flipped, DEFAULT_DENSE_CAP,
};
pub use psf::Psf;
pub use symbol::{bccb_eigenvalues, sample_symbol, SymbolGrid};
