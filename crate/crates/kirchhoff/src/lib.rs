//! Numerical laboratory for the L²-constrained minimization of Kirchhoff-type
//! energies
//!
//! ```text
//!   d_β(p) = inf { E_p^β(u) : u ∈ H¹(R^N), ∫ V u² < ∞, ∫ u² = 1 },
//!
//!   E_p^β(u) = (a/2)∫|∇u|² + (b/4)(∫|∇u|²)² + (1/2)∫V u² - (β/(p+2))∫|u|^{p+2},
//! ```
//!
//! with a, b > 0, β > 0, an optional trapping potential V ≥ 0, and
//! 0 < p ≤ p* = 8/N in dimensions N = 1..4. The crate computes ground states
//! of the associated scalar field equation by shooting ([`groundstate`]),
//! evaluates every explicit existence threshold ([`thresholds`]), minimizes
//! the energy on the L² sphere by a normalized semi-implicit gradient flow
//! ([`minimize`]), and drives p ↗ p* sweeps that exhibit the blow-up scaling
//! laws and concentration at the potential minimum ([`blowup`]).
//!
//! Start with the runnable examples (`cargo run --example ground_state`, …)
//! or the `kirchhoff` binary, whose `verify` subcommand runs the full
//! acceptance battery from [`verify`].

// `!(x > 0)` guards deliberately treat NaN as out of range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blowup;
pub mod cli;
pub mod energy;
pub mod error;
pub mod grid;
pub mod groundstate;
pub mod interp;
pub mod minimize;
pub mod thresholds;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{Field, Grid, GridKind, GridSpec};
