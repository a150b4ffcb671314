//! Numerical toolkit for mean values of multiplicative functions over
//! friable (smooth) integers.
//!
//! The crate has three layers:
//!
//! * **Special functions** — solutions of the delay-differential equations
//!   that govern friable averages (Dickman-type functions, their
//!   convolution powers, and the oscillating kernels attached to negative
//!   zeta powers), the saddle-point roots ξ and ζ₀, and the decay envelope
//!   R_κ ([`dde`], [`saddle`], [`hires`]).
//! * **Coefficient machinery** — truncated power-series arithmetic, the
//!   entire function I(s), the Laplace transform of the Dickman function,
//!   Stieltjes-type coefficients of s·ζ(1+s), and the expansion
//!   coefficients a_j, a_j*, c_j ([`series`], [`euler`]).
//! * **Exact oracles and expansions** — a smallest-prime-factor sieve with
//!   exact friable sums, the convolution approximant, moment integrals,
//!   and the asymptotic expansions compared against the exact values
//!   ([`sieve`], [`funcs`], [`sums`], [`asym`]).

pub mod cheb;
pub mod dde;
pub mod error;
pub mod hires;
pub mod ksum;
pub mod quadrature;
pub mod saddle;
pub mod series;
pub mod specfun;

pub use error::{Error, Result};
pub use ksum::NeumaierSum;
