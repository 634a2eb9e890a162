//! Orthogonal polynomials on the unit ball, the closed-form Fourier transform
//! of their tanh-mapped weight family, the biorthogonal `D` family obtained
//! from it by Parseval's identity, and quadrature oracles that check every
//! identity numerically.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod ball;
pub mod classical;
pub mod dfamily;
pub mod error;
pub mod hypergeometric;
pub mod quadrature;
pub mod report;
pub mod special;
pub mod tanh_family;
pub mod verify;

pub use error::{Error, Result};
pub use special::ComplexValue;
