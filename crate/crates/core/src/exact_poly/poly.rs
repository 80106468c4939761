//! Sparse multivariate polynomials with exact coefficients.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::Field;
use super::monomial::{Monomial, MonomialOrder};

/// A polynomial in `nvars` variables over `K`.
///
/// Terms are stored without zero coefficients, sorted decreasingly in
/// degree-reverse-lexicographic order, so structural equality is equality of
/// polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<K: Field> {
    field: K,
    nvars: usize,
    terms: Vec<(Monomial, K::Elem)>,
}

/// A rational point given by its coordinates.
pub type Point<K> = Vec<<K as Field>::Elem>;

impl<K: Field> Poly<K> {
    pub fn zero(field: &K, nvars: usize) -> Self {
        Poly { field: field.clone(), nvars, terms: Vec::new() }
    }

    pub fn constant(field: &K, nvars: usize, c: K::Elem) -> Self {
        Self::monomial(field, Monomial::one(nvars), c)
    }

    pub fn one(field: &K, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    pub fn from_i64(field: &K, nvars: usize, c: i64) -> Self {
        Self::constant(field, nvars, field.from_i64(c))
    }

    /// The coordinate function `x_i`.
    pub fn var(field: &K, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        Self::monomial(field, Monomial::var(nvars, i, 1), field.one())
    }

    pub fn monomial(field: &K, m: Monomial, c: K::Elem) -> Self {
        let nvars = m.nvars();
        if field.is_zero(&c) {
            Self::zero(field, nvars)
        } else {
            Poly { field: field.clone(), nvars, terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary terms, merging repeated monomials.
    pub fn from_terms(field: &K, nvars: usize, terms: impl IntoIterator<Item = (Monomial, K::Elem)>) -> Self {
        let mut acc: HashMap<Monomial, K::Elem> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            match acc.get_mut(&m) {
                Some(v) => *v = field.add(v, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        terms.sort_by(|a, b| MonomialOrder::DegRevLex.cmp(&b.0, &a.0));
        Poly { field: field.clone(), nvars, terms }
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in decreasing degrevlex order.
    pub fn terms(&self) -> &[(Monomial, K::Elem)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.is_constant()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.field.is_one(&self.terms[0].1)
    }

    pub fn constant_term(&self) -> K::Elem {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => self.field.zero(),
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> K::Elem {
        self.terms
            .binary_search_by(|(t, _)| MonomialOrder::DegRevLex.cmp(m, t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| self.field.zero())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    /// Lowest degree of a term; `None` for the zero polynomial.
    pub fn lowest_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).min()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max().unwrap_or(0)
    }

    /// Largest `k` such that `x_var^k` divides the polynomial (0 for zero).
    pub fn var_valuation(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(var)).min().unwrap_or(0)
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).cloned().collect(),
        }
    }

    /// The lowest-degree homogeneous part (zero for zero).
    pub fn lowest_form(&self) -> Self {
        match self.lowest_degree() {
            Some(d) => self.homogeneous_part(d),
            None => self.clone(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|(t, _)| t.degree() == m.degree()),
        }
    }

    /// Leading term in degrevlex order.
    pub fn leading(&self) -> Option<&(Monomial, K::Elem)> {
        self.terms.first()
    }

    /// Indices of the variables that occur.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.iter().any(|(m, _)| m.exponent(i) > 0)).collect()
    }

    pub fn scale(&self, c: &K::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(&self.field, self.nvars);
        }
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), self.field.mul(a, c))).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &K::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(&self.field, self.nvars);
        }
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.mul(mono), self.field.mul(a, c))).collect(),
        }
    }

    /// Scales so that the leading coefficient is one; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => {
                let ci = self.field.inv(c).expect("nonzero leading coefficient");
                self.scale(&ci)
            }
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field, self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, point: &[K::Elem]) -> K::Elem {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t = f.mul(&t, &point[i]);
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Substitutes `x_i -> images[i]`; the result lives in the ring of the images.
    pub fn substitute(&self, images: &[Poly<K>]) -> Poly<K> {
        assert_eq!(images.len(), self.nvars, "substitution arity mismatch");
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut cache: Vec<Vec<Poly<K>>> = images.iter().map(|g| vec![Poly::one(&self.field, target), g.clone()]).collect();
        let mut acc = Poly::zero(&self.field, target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&self.field, target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let powers = &mut cache[i];
                while powers.len() <= e as usize {
                    let next = &powers[powers.len() - 1] * &powers[1];
                    powers.push(next);
                }
                t = &t * &powers[e as usize];
            }
            acc = &acc + &t;
        }
        acc
    }

    /// `f(x + a)`: moves the point `a` to the origin.
    pub fn translate(&self, a: &[K::Elem]) -> Poly<K> {
        assert_eq!(a.len(), self.nvars, "point dimension mismatch");
        if a.iter().all(|c| self.field.is_zero(c)) {
            return self.clone();
        }
        let images: Vec<_> = (0..self.nvars)
            .map(|i| &Poly::var(&self.field, self.nvars, i) + &Poly::constant(&self.field, self.nvars, a[i].clone()))
            .collect();
        self.substitute(&images)
    }

    /// Moves variable `i` to index `map[i]` in a ring with `nvars` variables.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Poly<K> {
        assert_eq!(map.len(), self.nvars, "embedding arity mismatch");
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = Monomial::one(nvars);
            for (i, &x) in m.exponents().iter().enumerate() {
                e.exponents_mut()[map[i]] += x;
            }
            (e, c.clone())
        });
        Poly::from_terms(&self.field, nvars, terms)
    }

    /// Appends `extra` variables after the existing ones.
    pub fn extend(&self, extra: usize) -> Poly<K> {
        let map: Vec<usize> = (0..self.nvars).collect();
        self.embed(self.nvars + extra, &map)
    }

    /// Exact division by `x_var^k`; `None` if it does not divide.
    pub fn div_var_power(&self, var: usize, k: u32) -> Option<Poly<K>> {
        if k == 0 {
            return Some(self.clone());
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if m.exponent(var) < k {
                return None;
            }
            let mut q = m.clone();
            q.exponents_mut()[var] -= k;
            terms.push((q, c.clone()));
        }
        // Dividing by a monomial preserves the relative degrevlex order.
        Some(Poly { field: self.field.clone(), nvars: self.nvars, terms })
    }

    /// Exact division by a monomial; `None` if it does not divide.
    pub fn div_monomial(&self, mono: &Monomial) -> Option<Poly<K>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.checked_div(mono)?, c.clone()));
        }
        Some(Poly { field: self.field.clone(), nvars: self.nvars, terms })
    }

    /// Sets `x_var = value`, keeping the ring.
    pub fn specialize(&self, var: usize, value: &K::Elem) -> Poly<K> {
        let f = &self.field;
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = m.clone();
            let k = e.exponent(var);
            e.exponents_mut()[var] = 0;
            let mut t = c.clone();
            for _ in 0..k {
                t = f.mul(&t, value);
            }
            (e, t)
        });
        Poly::from_terms(f, self.nvars, terms)
    }

    /// A deterministic total order on polynomials of one ring: by terms in
    /// degrevlex order, then by rendered coefficients.
    pub fn canonical_cmp(&self, other: &Poly<K>) -> Ordering {
        for ((ma, ca), (mb, cb)) in self.terms.iter().zip(other.terms.iter()) {
            let o = MonomialOrder::DegRevLex.cmp(ma, mb).then_with(|| self.field.render(ca).cmp(&self.field.render(cb)));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }

    fn merge(&self, other: &Poly<K>, negate_other: bool) -> Poly<K> {
        assert_eq!(self.nvars, other.nvars, "ring mismatch");
        let f = &self.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let fix = |c: &K::Elem| if negate_other { f.neg(c) } else { c.clone() };
        while i < self.terms.len() && j < other.terms.len() {
            let (a, ca) = &self.terms[i];
            let (b, cb) = &other.terms[j];
            match MonomialOrder::DegRevLex.cmp(a, b) {
                Ordering::Greater => {
                    out.push((a.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b.clone(), fix(cb)));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = if negate_other { f.sub(ca, cb) } else { f.add(ca, cb) };
                    if !f.is_zero(&s) {
                        out.push((a.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), fix(c))));
        Poly { field: f.clone(), nvars: self.nvars, terms: out }
    }
}

impl<K: Field> Add for &Poly<K> {
    type Output = Poly<K>;
    fn add(self, rhs: &Poly<K>) -> Poly<K> {
        self.merge(rhs, false)
    }
}

impl<K: Field> Sub for &Poly<K> {
    type Output = Poly<K>;
    fn sub(self, rhs: &Poly<K>) -> Poly<K> {
        self.merge(rhs, true)
    }
}

impl<K: Field> Neg for &Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        let f = &self.field;
        Poly {
            field: f.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect(),
        }
    }
}

impl<K: Field> Mul for &Poly<K> {
    type Output = Poly<K>;
    fn mul(self, rhs: &Poly<K>) -> Poly<K> {
        assert_eq!(self.nvars, rhs.nvars, "ring mismatch");
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f, self.nvars);
        }
        if rhs.terms.len() == 1 {
            return self.mul_monomial(&rhs.terms[0].0, &rhs.terms[0].1);
        }
        if self.terms.len() == 1 {
            return rhs.mul_monomial(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: HashMap<Monomial, K::Elem> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let m = a.mul(b);
                let c = f.mul(ca, cb);
                match acc.get_mut(&m) {
                    Some(v) => *v = f.add(v, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !f.is_zero(c)).collect();
        terms.sort_by(|a, b| MonomialOrder::DegRevLex.cmp(&b.0, &a.0));
        Poly { field: f.clone(), nvars: self.nvars, terms }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<K: Field> $tr for Poly<K> {
            type Output = Poly<K>;
            fn $m(self, rhs: Poly<K>) -> Poly<K> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Product of a list of polynomials in a ring with `nvars` variables.
pub fn product<K: Field>(field: &K, nvars: usize, factors: &[Poly<K>]) -> Poly<K> {
    factors.iter().fold(Poly::one(field, nvars), |acc, f| &acc * f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::field::{PrimeField, Rationals};

    fn x(n: usize, i: usize) -> Poly<Rationals> {
        Poly::var(&Rationals, n, i)
    }

    #[test]
    fn arithmetic_identities() {
        let (a, b) = (x(2, 0), x(2, 1));
        let s = &a + &b;
        let sq = &s * &s;
        let two_ab = (&a * &b).scale(&Rationals.from_i64(2));
        let expected = &(&(&a * &a) + &two_ab) + &(&b * &b);
        assert_eq!(sq, expected);
        assert_eq!(s.pow(2), sq);
        assert!((&s - &s).is_zero());
    }

    #[test]
    fn square_of_sum_in_char_two() {
        let f = PrimeField::new(2).unwrap();
        let s = &Poly::var(&f, 2, 0) + &Poly::var(&f, 2, 1);
        assert_eq!(s.pow(2), &Poly::var(&f, 2, 0).pow(2) + &Poly::var(&f, 2, 1).pow(2));
    }

    #[test]
    fn translate_and_evaluate() {
        // (y-1)^2 - x^3 moved by (0,1) gives y^2 - x^3.
        let n = 2;
        let one = Poly::one(&Rationals, n);
        let f = &(&x(n, 1) - &one).pow(2) - &x(n, 0).pow(3);
        let g = f.translate(&[Rationals.from_i64(0), Rationals.from_i64(1)]);
        assert_eq!(g, &x(n, 1).pow(2) - &x(n, 0).pow(3));
        assert_eq!(f.eval(&[Rationals.from_i64(0), Rationals.from_i64(1)]), Rationals.zero());
    }

    #[test]
    fn exact_division_by_variable_power() {
        let n = 2;
        let f = &x(n, 0).pow(3) * &(&x(n, 1) + &Poly::one(&Rationals, n));
        assert_eq!(f.var_valuation(0), 3);
        assert!(f.div_var_power(0, 4).is_none());
        let q = f.div_var_power(0, 3).unwrap();
        assert_eq!(q, &x(n, 1) + &Poly::one(&Rationals, n));
    }

    #[test]
    fn embed_reorders_variables() {
        let f = &x(2, 0) * &x(2, 1).pow(2);
        let g = f.embed(3, &[2, 0]);
        assert_eq!(g, &x(3, 2) * &x(3, 0).pow(2));
    }

    #[test]
    fn coefficient_lookup() {
        let f = &x(2, 0).pow(2) + &x(2, 1).scale(&Rationals.from_i64(5));
        assert_eq!(f.coefficient(&Monomial::from_exponents(&[0, 1])), Rationals.from_i64(5));
        assert_eq!(f.coefficient(&Monomial::from_exponents(&[1, 1])), Rationals.zero());
    }
}
