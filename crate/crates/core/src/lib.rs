//! Exact symbolic engine for motivic height zeta functions of split smooth
//! projective toric varieties over the function field of a genus-0 curve.
//!
//! The coefficient ring is `Z[L, L^-1]` ([`LefschetzLaurent`]). On top of it
//! sit the character calculus and Poisson formula ([`char_poisson`]), fan
//! combinatorics ([`toric`]), motivic Euler products ([`euler`]), cone
//! ℒ-functions ([`cone_zeta`]) and the height zeta assembly
//! ([`height_zeta`]). [`fq`] provides finite-field point counts used as an
//! independent oracle, and [`verify`] bundles the seeded consistency suites.

pub mod char_poisson;
pub mod coeff;
pub mod cone_zeta;
pub mod error;
pub mod euler;
pub mod fq;
pub mod height_zeta;
pub mod lattice;
pub mod toric;
pub mod verify;

pub use coeff::{CompletionElement, CurveData, GradedMonomial, GradedSeries, LefschetzLaurent, Truncation, VirtualDim};
pub use error::{Error, Result};
