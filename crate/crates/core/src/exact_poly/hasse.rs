//! Hasse derivatives, the Taylor shift `x -> x + T`, and orders at points.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::field::Field;
use super::monomial::Monomial;
use super::poly::Poly;
use crate::error::{Error, Result};

/// An order in `N ∪ {∞}`; `Infinite` sorts above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(d) => Some(d),
            Order::Infinite => None,
        }
    }

    pub fn at_least(self, b: u32) -> bool {
        self >= Order::Finite(b)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(d) => write!(f, "{d}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// `C(n, k)` computed in the field by Pascal's rule.
pub fn binomial<K: Field>(field: &K, n: u32, k: u32) -> K::Elem {
    if k > n {
        return field.zero();
    }
    let k = k.min(n - k) as usize;
    let mut row = vec![field.zero(); k + 1];
    row[0] = field.one();
    for i in 1..=n as usize {
        for j in (1..=k.min(i)).rev() {
            row[j] = field.add(&row[j], &row[j - 1]);
        }
    }
    row[k].clone()
}

/// `Δ^α(f)`: the coefficient of `T^α` in `f(x + T)`.
pub fn hasse_derivative<K: Field>(f: &Poly<K>, alpha: &Monomial) -> Result<Poly<K>> {
    if alpha.nvars() != f.nvars() {
        return Err(Error::Argument(format!(
            "multi-index has {} entries, polynomial has {} variables",
            alpha.nvars(),
            f.nvars()
        )));
    }
    let field = f.field();
    let terms = f.terms().iter().filter(|(m, _)| alpha.divides(m)).map(|(m, c)| {
        let mut coeff = c.clone();
        for (&b, &a) in m.exponents().iter().zip(alpha.exponents()) {
            if a > 0 {
                coeff = field.mul(&coeff, &binomial(field, b, a));
            }
        }
        (m.div(alpha), coeff)
    });
    Ok(Poly::from_terms(field, f.nvars(), terms))
}

/// `f(x_1 + T_1, ..., x_n + T_n)` in `2n` variables `(x_1..x_n, T_1..T_n)`.
pub fn taylor_shift<K: Field>(f: &Poly<K>) -> Poly<K> {
    let n = f.nvars();
    let field = f.field();
    let images: Vec<Poly<K>> = (0..n)
        .map(|i| &Poly::var(field, 2 * n, i) + &Poly::var(field, 2 * n, n + i))
        .collect();
    f.substitute(&images)
}

/// Coefficient of `T^α` in a polynomial over `(x, T)`, as a polynomial in `x`.
pub fn taylor_coefficient<K: Field>(shifted: &Poly<K>, alpha: &Monomial) -> Poly<K> {
    let n = alpha.nvars();
    assert_eq!(shifted.nvars(), 2 * n, "expected a polynomial in doubled variables");
    let terms = shifted
        .terms()
        .iter()
        .filter(|(m, _)| (0..n).all(|i| m.exponent(n + i) == alpha.exponent(i)))
        .map(|(m, c)| (Monomial::from_exponents(&m.exponents()[..n]), c.clone()));
    Poly::from_terms(shifted.field(), n, terms)
}

/// Order of `f` at a rational point.
pub fn order_at_point<K: Field>(f: &Poly<K>, x: &[K::Elem]) -> Order {
    match f.translate(x).lowest_degree() {
        Some(d) => Order::Finite(d),
        None => Order::Infinite,
    }
}

/// Order of the ideal generated by `gens` at a rational point.
pub fn ideal_order_at_point<K: Field>(gens: &[Poly<K>], x: &[K::Elem]) -> Order {
    gens.iter().map(|g| order_at_point(g, x)).min().unwrap_or(Order::Infinite)
}
