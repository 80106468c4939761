//! Exact polynomial arithmetic over `Q` and `F_p`.
//!
//! Everything downstream is built on [`Poly`], the Hasse operators in
//! [`hasse`] and the Gröbner engine in [`groebner`].

pub mod field;
pub mod groebner;
pub mod hasse;
pub mod linalg;
pub mod monomial;
pub mod parse;
pub mod poly;

pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use groebner::{
    eliminate, groebner_basis, ideal_is_trivial, ideal_member, ideals_equal, krull_dimension, radical_member,
    saturate, GroebnerBasis,
};
pub use hasse::{binomial, hasse_derivative, ideal_order_at_point, order_at_point, taylor_coefficient, taylor_shift, Order};
pub use linalg::{rank, row_reduce};
pub use monomial::{multi_indices, Monomial, MonomialOrder};
pub use parse::{format_poly, parse_point, parse_poly, parse_scalar};
pub use poly::{product, Point, Poly};
