#![allow(dead_code)]

use proptest::prelude::*;
use rees_core::exact_poly::{Field, Monomial, Poly, PrimeField, Rationals};

/// Raw polynomial data: exponent vectors and small integer coefficients.
pub type RawPoly = Vec<(Vec<u32>, i64)>;

pub fn raw_poly(nvars: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = RawPoly> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, nvars), -4i64..=4), 1..=max_terms)
}

pub fn build<K: Field>(field: &K, nvars: usize, raw: &RawPoly) -> Poly<K> {
    Poly::from_terms(
        field,
        nvars,
        raw.iter().map(|(e, c)| (Monomial::from_exponents(e), field.from_i64(*c))),
    )
}

pub fn fp(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

pub fn q() -> Rationals {
    Rationals
}

/// All points of `F_p^n`.
pub fn all_points(field: &PrimeField, n: usize) -> Vec<Vec<u64>> {
    let p = field.modulus();
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for pt in &out {
            for c in 0..p {
                let mut q = pt.clone();
                q.push(c);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// `ν_x(f)` by expanding every term as a product of binomials `(x_i + T_i)`,
/// independent of the library's Taylor and Hasse code. `None` for `f = 0`.
pub fn brute_order<K: Field>(f: &Poly<K>, x: &[K::Elem]) -> Option<u32> {
    let n = f.nvars();
    let field = f.field();
    let mut acc = Poly::zero(field, n);
    for (m, c) in f.terms() {
        let mut t = Poly::constant(field, n, c.clone());
        for i in 0..n {
            let lin = &Poly::var(field, n, i) + &Poly::constant(field, n, x[i].clone());
            for _ in 0..m.exponent(i) {
                t = &t * &lin;
            }
        }
        acc = &acc + &t;
    }
    acc.terms().iter().map(|(m, _)| m.degree()).min()
}

/// Brute-force singular locus of weighted generators: points of `F_p^n`
/// where every `ν_x(f_i) ≥ n_i`.
pub fn brute_sing(field: &PrimeField, n: usize, gens: &[(Poly<PrimeField>, u32)]) -> Vec<Vec<u64>> {
    all_points(field, n)
        .into_iter()
        .filter(|x| gens.iter().all(|(f, w)| brute_order(f, x).map_or(true, |o| o >= *w)))
        .collect()
}

/// Points of `F_p^n` in a locus.
pub fn locus_points(locus: &rees_core::rees_core::Locus<PrimeField>, field: &PrimeField) -> Vec<Vec<u64>> {
    all_points(field, locus.nvars()).into_iter().filter(|x| locus.contains_point(x)).collect()
}

/// A seeded random polynomial with small exponents and coefficients.
pub fn random_poly<K: Field, R: rand::Rng>(rng: &mut R, field: &K, n: usize, max_exp: u32, max_terms: usize) -> Poly<K> {
    loop {
        let terms = rng.gen_range(1..=max_terms);
        let f = Poly::from_terms(
            field,
            n,
            (0..terms).map(|_| {
                let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=max_exp)).collect();
                (Monomial::from_exponents(&e), field.from_i64(rng.gen_range(-3..=3)))
            }),
        );
        if !f.is_zero() {
            return f;
        }
    }
}

/// A seeded random Rees algebra: 1 to 3 generators of weight 1 to 3.
pub fn random_rees<K: Field, R: rand::Rng>(rng: &mut R, field: &K, n: usize) -> rees_core::rees_core::ReesAlgebra<K> {
    let k = rng.gen_range(1..=3);
    let gens = (0..k).map(|_| (random_poly(rng, field, n, 3, 3), rng.gen_range(1..=3))).collect();
    rees_core::rees_core::ReesAlgebra::new(field, n, gens).unwrap()
}

pub fn seeded(seed: u64) -> rand_chacha::ChaCha8Rng {
    <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed)
}

/// Names `x1..xn`.
pub fn var_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}
