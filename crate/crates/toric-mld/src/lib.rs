//! Exact computation of minimal log discrepancies for toric log pairs.
//!
//! A toric log pair is a fan Δ in a lattice N ≅ Z^n together with a rational
//! boundary coefficient b_i ∈ [0, 1] on every ray. The crate computes, in
//! exact arbitrary-precision arithmetic:
//!
//! * per-orbit and closed-point minimal log discrepancies, with a lattice
//!   point witnessing each minimum,
//! * the mld spectrum and stratification of the pair,
//! * the singularity classification (log canonical / klt / canonical /
//!   terminal) with violating cones,
//! * crepant witnesses and smooth resolutions by stellar subdivision,
//! * a companion combinatorial model for normal-crossings pairs, and
//! * a seeded property-verification harness for the structural theorems
//!   the computations rely on (semicontinuity, boundedness, smoothness
//!   criterion, resolution agreement, product additivity).
//!
//! There is no floating point anywhere; every equality the test suite
//! asserts is exact.

pub mod cli;
pub mod cone;
pub mod error;
pub mod fan;
pub mod files;
pub mod lattice;
pub mod logpair;
pub mod snc;
pub mod verify;

pub use cone::{BoxPoints, Cone};
pub use error::{Error, Result};
pub use fan::{Fan, Subdivision};
pub use lattice::{Int, LatticeVector, LinearForm, Rational};
pub use logpair::{Classification, MldReport, OrbitMld, ToricLogPair};
pub use snc::{MldValue, SncPair, SncPoint};
