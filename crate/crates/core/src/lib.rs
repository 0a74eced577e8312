//! A workbench for additive prime problems with fractional exponents.
//!
//! The crate has two halves that share one vocabulary:
//!
//! * an **exact half** ([`ratcore`], [`exppair`], [`certify`]) that works in
//!   arbitrary-precision rationals: the van der Corput exponent-pair calculus,
//!   affine exponent inequalities in the parameters `c` and `theta`, and a
//!   certifier that derives the admissible range of the exponent `c` for the
//!   four-prime Diophantine inequality `|p1^c + p2^c + p3^c + p4^c - N| < eps`;
//! * a **numerical half** ([`kernel`], [`sums`], [`solver`]) that checks the
//!   analytic ingredients at desk scale: the smoothing kernel and its
//!   transform bounds, the exponential sums `S`, `U`, `T` and the integral
//!   `I`, and an actual search for prime quadruple solutions.
//!
//! The [`cli`] module exposes everything as subcommands of a single binary.

pub mod certify;
pub mod cli;
pub mod exppair;
pub mod kernel;
pub mod ratcore;
pub mod solver;
pub mod sums;
