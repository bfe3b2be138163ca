//! Acceleration radiation from two-level atoms falling radially into a
//! Schwarzschild black hole through a mode-selecting cavity.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: unit system, horizon thermodynamics, tortoise coordinate,
//!   near-horizon Rindler acceleration.
//! - [`trajectory`]: closed-form and integrated infall worldlines, uniformly
//!   accelerated worldlines and the Rindler map.
//! - [`excitation`]: excitation/absorption probabilities by regulated
//!   oscillatory quadrature and by the Planck-factor closed form.
//! - [`master_equation`]: coarse-grained photon-number dynamics of one field
//!   mode, its thermal steady state and detailed balance.
//! - [`entropy`]: von Neumann entropy, entropy flux and the entropy/area law.
//! - [`config`], [`scenario`], [`output`]: the `hbar-sim` command line
//!   pipeline.
//!
//! Internally every computation runs in the dimensionless system where
//! lengths are measured in units of the gravitational radius `r_g`, times in
//! `r_g / c` and angular frequencies in `c / r_g`. SI quantities enter only
//! through [`constants`] and [`geometry::UnitSystem`].

// `!(x > 0.0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod constants;
pub mod entropy;
pub mod error;
pub mod excitation;
pub mod geometry;
pub mod master_equation;
pub mod ode;
pub mod output;
pub mod quadrature;
pub mod scenario;
pub mod special;
pub mod trajectory;

pub use error::{Error, Result};

/// Version string embedded in report provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
