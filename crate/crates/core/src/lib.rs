//! Flip-and-precondition Krylov deblurring.
//!
//! Blurring operators with zero, periodic or reflective boundary conditions,
//! circulant and sparsity preconditioners, Krylov solvers used as iterative
//! regularization (MINRES, GMRES, FGMRES, LSQR, FLSQR), dense spectral
//! studies of the flipped system `Y A`, and test-problem construction.

pub mod error;
mod fft;
pub mod grid;
pub mod linear;
pub mod operators;
pub mod preconditioners;
pub mod problems;
pub mod solvers;
pub mod spectral;

pub use error::{Error, Result};
pub use grid::ImageGrid;
pub use linear::{Identity, LinearMap};
