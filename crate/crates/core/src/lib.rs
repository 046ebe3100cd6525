//! Exact generating series of Gromov-Witten invariants for Kähler surfaces
//! with positive geometric genus.
//!
//! The crate is organized bottom-up: [`exact_arith`] for rationals and
//! divisor sums, [`grading`] for classes and dimension counts, [`series`]
//! for the truncated series container, [`spin_parity`] and
//! [`lattice_covers`] for the two cover censuses, and [`surface_model`]
//! for assembling a surface's series. [`verify`] runs every closed form
//! against its brute-force census.

pub mod error;
pub mod exact_arith;
pub mod grading;
pub mod lattice_covers;
pub mod series;
pub mod spin_parity;
pub mod surface_model;
pub mod verify;

pub use error::{Error, Result};
pub use exact_arith::Rational;
pub use series::{Coefficient, GwSeries};
pub use surface_model::{assemble_gw_series, AssemblyOptions, Limits, SurfaceDescriptor};
