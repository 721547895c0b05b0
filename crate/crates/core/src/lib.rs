//! Exact computation of ellipsoidal superpotentials and the machinery around
//! them: Reeb spectra and lattice paths of ellipsoids, stationary descendant
//! augmentations, L∞ cobordism maps between ellipsoid algebras, and the
//! infinitesimal jump counts that make the superpotential piecewise constant
//! in the ellipsoid shape.
//!
//! The bar-complex engine ([`linf`]) and [`dual::Dual`] are generic over the
//! coefficient field ([`Scalar`]). Everything that must decide equalities
//! (tables, integrality, jump loci) runs over [`Rational`].

pub mod dual;
pub mod error;
pub mod exact;
pub mod jumps;
pub mod linf;
pub mod oracle;
pub mod orbits;
pub mod rounding;
pub mod scalar;
pub mod sft;
pub mod superpotential;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Arbitrary-precision rational, always reduced.
pub type Rational = num_rational::BigRational;
/// Rational with an infinitesimal coefficient.
pub type DualRational = dual::Dual<Rational>;

pub use exact::{format_rational, parse_rational, rat, LatticePoint, Permutation};
pub use orbits::{OrbitId, Side, Spectrum, SpectrumParams};
