//! Exact computer algebra for resolution of singularities at desk scale:
//! polynomials and Gröbner bases over `Q` and `F_p`, couples and Rees
//! algebras, Diff-saturation, blow-up charts, the satellite invariants, the
//! τ-invariant, an equivalence falsifier and the γ-driven resolution loop.

pub mod chart_geometry;
pub mod diff_ops;
pub mod equivalence_lab;
pub mod error;
pub mod exact_poly;
pub mod rees_core;
pub mod resolution_driver;
pub mod satellite_invariants;
pub mod tau_ridge;

pub use error::{Error, Result};
pub use exact_poly::{Field, FieldSpec, Poly, PrimeField, Rationals};

/// Polynomials over the rationals.
pub type QPoly = Poly<Rationals>;
/// Polynomials over a prime field.
pub type FpPoly = Poly<PrimeField>;
