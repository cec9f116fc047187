//! Numerical tools for the Orlicz space of radial `H^1(R^2)` functions:
//! Trudinger-Moser integrals, the Luxemburg norm, the Lions concentration
//! families, scale/profile decomposition of bounded sequences and a radial
//! Klein-Gordon solver.
//!
//! Radial functions are stored in the logarithmic variable `s = -log r`,
//! where the three basic integrals become
//!
//! ```text
//! ||u||_2^2      = 2 pi int v(s)^2 e^{-2s} ds
//! ||grad u||_2^2 = 2 pi int v'(s)^2 ds
//! int (e^{|u/l|^2} - 1) dx = 2 pi int (e^{|v/l|^2} - 1) e^{-2s} ds
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod decomposition;
pub mod error;
pub mod inequalities;
pub mod lions;
pub mod orlicz;
pub mod quadrature;
pub mod radial;
pub mod verify;
pub mod wave;

pub use error::{Error, Result};
pub use lions::{Profile, ScaledBubble};
pub use orlicz::{orlicz_norm, tm_integral, OrliczConfig};
pub use radial::{LogGrid, NormReport, RadialFunction};
