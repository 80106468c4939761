//! Buchberger's algorithm with the Gebauer–Möller criteria, and the ideal
//! queries built on it: membership, radical membership, saturation,
//! elimination and Krull dimension.

use std::cmp::Ordering;

use super::field::Field;
use super::monomial::{Monomial, MonomialOrder};
use super::poly::Poly;

/// Terms sorted decreasingly in a fixed monomial order.
#[derive(Clone, Debug)]
struct OPoly<K: Field> {
    terms: Vec<(Monomial, K::Elem)>,
}

impl<K: Field> OPoly<K> {
    fn from_poly(p: &Poly<K>, order: MonomialOrder) -> Self {
        let mut terms = p.terms().to_vec();
        if order != MonomialOrder::DegRevLex {
            terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        }
        OPoly { terms }
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn make_monic(&mut self, field: &K) {
        if let Some((_, c)) = self.terms.first() {
            if !field.is_one(c) {
                let ci = field.inv(c).expect("nonzero");
                for t in &mut self.terms {
                    t.1 = field.mul(&t.1, &ci);
                }
            }
        }
    }

    /// `self - c * m * g`, merging in `order`.
    fn sub_scaled(&self, field: &K, order: MonomialOrder, c: &K::Elem, m: &Monomial, g: &OPoly<K>, skip_first: usize) -> OPoly<K> {
        let a = &self.terms[skip_first..];
        let mut out = Vec::with_capacity(a.len() + g.terms.len());
        let (mut i, mut j) = (0, skip_first);
        while i < a.len() && j < g.terms.len() {
            let gm = g.terms[j].0.mul(m);
            match order.cmp(&a[i].0, &gm) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((gm, field.neg(&field.mul(c, &g.terms[j].1))));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = field.sub(&a[i].1, &field.mul(c, &g.terms[j].1));
                    if !field.is_zero(&v) {
                        out.push((gm, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        while j < g.terms.len() {
            out.push((g.terms[j].0.mul(m), field.neg(&field.mul(c, &g.terms[j].1))));
            j += 1;
        }
        OPoly { terms: out }
    }

    fn to_poly(&self, field: &K, nvars: usize) -> Poly<K> {
        Poly::from_terms(field, nvars, self.terms.iter().cloned())
    }
}

/// Full reduction of `f` modulo monic divisors `basis`; returns the remainder.
fn reduce<K: Field>(field: &K, order: MonomialOrder, f: &OPoly<K>, basis: &[&OPoly<K>]) -> OPoly<K> {
    let mut rem: Vec<(Monomial, K::Elem)> = Vec::new();
    let mut cur = f.clone();
    while !cur.is_zero() {
        let (lm, lc) = cur.terms[0].clone();
        match basis.iter().find(|g| g.lm().divides(&lm)) {
            Some(g) => {
                let m = lm.div(g.lm());
                // Leading terms cancel exactly; skip them in the merge.
                cur = cur.sub_scaled(field, order, &lc, &m, g, 1);
            }
            None => {
                rem.push((lm, lc));
                cur.terms.remove(0);
            }
        }
    }
    OPoly { terms: rem }
}

/// A reduced Gröbner basis in a fixed monomial order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<K: Field> {
    field: K,
    nvars: usize,
    order: MonomialOrder,
    basis: Vec<OPoly<K>>,
}

impl<K: Field> GroebnerBasis<K> {
    /// Computes the reduced basis of the ideal generated by `gens`.
    pub fn new(field: &K, nvars: usize, gens: &[Poly<K>], order: MonomialOrder) -> Self {
        let mut polys: Vec<OPoly<K>> = Vec::new();
        for g in gens {
            assert_eq!(g.nvars(), nvars, "generator ring mismatch");
            if g.is_zero() {
                continue;
            }
            if g.is_unit() {
                return GroebnerBasis { field: field.clone(), nvars, order, basis: vec![OPoly::from_poly(&Poly::one(field, nvars), order)] };
            }
            let mut p = OPoly::from_poly(g, order);
            p.make_monic(field);
            polys.push(p);
        }
        let basis = buchberger(field, order, polys);
        GroebnerBasis { field: field.clone(), nvars, order, basis }
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    /// Basis elements, monic, sorted by decreasing leading monomial.
    pub fn polys(&self) -> Vec<Poly<K>> {
        self.basis.iter().map(|p| p.to_poly(&self.field, self.nvars)).collect()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().map(|p| p.lm().clone()).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].lm().is_one()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.basis.is_empty()
    }

    /// Normal form of `f`.
    pub fn reduce(&self, f: &Poly<K>) -> Poly<K> {
        let refs: Vec<&OPoly<K>> = self.basis.iter().collect();
        reduce(&self.field, self.order, &OPoly::from_poly(f, self.order), &refs).to_poly(&self.field, self.nvars)
    }

    pub fn contains(&self, f: &Poly<K>) -> bool {
        self.reduce(f).is_zero()
    }

    /// Krull dimension of the quotient ring; `None` for the unit ideal.
    pub fn dimension(&self) -> Option<usize> {
        if self.is_unit() {
            return None;
        }
        let supports: Vec<u64> = self
            .basis
            .iter()
            .map(|p| p.lm().support().fold(0u64, |acc, i| acc | 1 << i))
            .collect();
        let mut best = 0;
        for s in 0u64..(1u64 << self.nvars) {
            let size = s.count_ones() as usize;
            if size > best && supports.iter().all(|&m| m & !s != 0) {
                best = size;
            }
        }
        Some(best)
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

fn buchberger<K: Field>(field: &K, order: MonomialOrder, input: Vec<OPoly<K>>) -> Vec<OPoly<K>> {
    let mut polys: Vec<OPoly<K>> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    for p in input {
        let refs: Vec<&OPoly<K>> = active.iter().map(|&k| &polys[k]).collect();
        let mut r = reduce(field, order, &p, &refs);
        if r.is_zero() {
            continue;
        }
        r.make_monic(field);
        insert(&mut polys, &mut active, &mut pairs, r);
        if polys[*active.last().unwrap()].lm().is_one() {
            return vec![polys[*active.last().unwrap()].clone()];
        }
    }
    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&pairs[a], &pairs[b]);
                pa.lcm.degree().cmp(&pb.lcm.degree()).then_with(|| order.cmp(&pa.lcm, &pb.lcm))
            })
            .unwrap();
        let pair = pairs.swap_remove(best);
        let s = spoly(field, order, &polys[pair.i], &polys[pair.j], &pair.lcm);
        let refs: Vec<&OPoly<K>> = active.iter().map(|&k| &polys[k]).collect();
        let mut r = reduce(field, order, &s, &refs);
        if r.is_zero() {
            continue;
        }
        r.make_monic(field);
        if r.lm().is_one() {
            return vec![r];
        }
        insert(&mut polys, &mut active, &mut pairs, r);
    }
    // Minimalize and interreduce.
    let mut minimal: Vec<OPoly<K>> = Vec::new();
    let mut cands: Vec<&OPoly<K>> = active.iter().map(|&k| &polys[k]).collect();
    cands.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    for c in cands {
        if !minimal.iter().any(|m| m.lm().divides(c.lm())) {
            minimal.push(c.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<&OPoly<K>> = minimal.iter().enumerate().filter(|(t, _)| *t != k).map(|(_, p)| p).collect();
        let head: OPoly<K> = OPoly { terms: vec![minimal[k].terms[0].clone()] };
        let tail: OPoly<K> = OPoly { terms: minimal[k].terms[1..].to_vec() };
        let mut r = reduce(field, order, &tail, &others);
        let mut terms = head.terms;
        terms.append(&mut r.terms);
        reduced.push(OPoly { terms });
    }
    reduced.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
    reduced
}

fn spoly<K: Field>(field: &K, order: MonomialOrder, f: &OPoly<K>, g: &OPoly<K>, lcm: &Monomial) -> OPoly<K> {
    let mf = lcm.div(f.lm());
    let mg = lcm.div(g.lm());
    let scaled_f = OPoly { terms: f.terms[1..].iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect() };
    let g_tail = OPoly { terms: g.terms[1..].to_vec() };
    if g_tail.is_zero() {
        return scaled_f;
    }
    if scaled_f.is_zero() {
        return OPoly { terms: g_tail.terms.iter().map(|(m, c)| (m.mul(&mg), field.neg(c))).collect() };
    }
    scaled_f.sub_scaled(field, order, &field.one(), &mg, &g_tail, 0)
}

/// Gebauer–Möller update after adding `h`.
fn insert<K: Field>(
    polys: &mut Vec<OPoly<K>>,
    active: &mut Vec<usize>,
    pairs: &mut Vec<Pair>,
    h: OPoly<K>,
) {
    let hk = polys.len();
    let hlm = h.lm().clone();
    polys.push(h);

    let cands: Vec<Pair> = active.iter().map(|&g| Pair { i: g, j: hk, lcm: polys[g].lm().lcm(&hlm) }).collect();
    // Chain criterion among the new pairs.
    let mut kept: Vec<&Pair> = Vec::new();
    for (a, p) in cands.iter().enumerate() {
        let coprime = polys[p.i].lm().coprime(&hlm);
        let dominated = cands.iter().enumerate().any(|(b, q)| {
            b != a && q.lcm.divides(&p.lcm) && (q.lcm != p.lcm || b < a)
        });
        if coprime || !dominated {
            kept.push(p);
        }
    }
    let mut fresh: Vec<Pair> = Vec::new();
    for p in kept {
        if !polys[p.i].lm().coprime(&hlm) && !fresh.iter().any(|q: &Pair| q.lcm == p.lcm) {
            fresh.push(Pair { i: p.i, j: p.j, lcm: p.lcm.clone() });
        }
    }
    // Drop old pairs made redundant by h.
    pairs.retain(|p| {
        !(hlm.divides(&p.lcm) && polys[p.i].lm().lcm(&hlm) != p.lcm && polys[p.j].lm().lcm(&hlm) != p.lcm)
    });
    pairs.extend(fresh);
    active.retain(|&g| !hlm.divides(polys[g].lm()));
    active.push(hk);
}

/// Reduced Gröbner basis as polynomials.
pub fn groebner_basis<K: Field>(gens: &[Poly<K>], order: MonomialOrder) -> Vec<Poly<K>> {
    match gens.first() {
        None => Vec::new(),
        Some(g) => GroebnerBasis::new(g.field(), g.nvars(), gens, order).polys(),
    }
}

/// Ring data for possibly empty generator lists.
fn ring<K: Field>(f: &Poly<K>) -> (K, usize) {
    (f.field().clone(), f.nvars())
}

/// `f ∈ (gens)`.
pub fn ideal_member<K: Field>(f: &Poly<K>, gens: &[Poly<K>]) -> bool {
    if f.is_zero() {
        return true;
    }
    let (field, n) = ring(f);
    GroebnerBasis::new(&field, n, gens, MonomialOrder::DegRevLex).contains(f)
}

/// `1 ∈ (gens)`.
pub fn ideal_is_trivial<K: Field>(gens: &[Poly<K>]) -> bool {
    match gens.first() {
        None => false,
        Some(g) => GroebnerBasis::new(g.field(), g.nvars(), gens, MonomialOrder::DegRevLex).is_unit(),
    }
}

/// `f ∈ √(gens)`, via `1 ∈ (gens) + (1 - t f)` with a fresh variable `t`.
pub fn radical_member<K: Field>(f: &Poly<K>, gens: &[Poly<K>]) -> bool {
    if f.is_zero() {
        return true;
    }
    let (field, n) = ring(f);
    let mut ext: Vec<Poly<K>> = gens.iter().map(|g| g.extend(1)).collect();
    let t = Poly::var(&field, n + 1, n);
    ext.push(&Poly::one(&field, n + 1) - &(&t * &f.extend(1)));
    GroebnerBasis::new(&field, n + 1, &ext, MonomialOrder::DegRevLex).is_unit()
}

/// Radical membership that first tries small powers against a precomputed basis.
pub fn radical_member_with<K: Field>(f: &Poly<K>, gb: &GroebnerBasis<K>, gens: &[Poly<K>]) -> bool {
    if gb.is_unit() {
        return true;
    }
    let mut p = f.clone();
    for _ in 0..3 {
        if gb.contains(&p) {
            return true;
        }
        p = &p * f;
    }
    radical_member(f, gens)
}

/// `(gens) : g^∞`, computed by eliminating `t` from `(gens) + (1 - t g)`.
pub fn saturate<K: Field>(gens: &[Poly<K>], g: &Poly<K>) -> Vec<Poly<K>> {
    let (field, n) = ring(g);
    if g.is_unit() {
        return groebner_basis(gens, MonomialOrder::DegRevLex);
    }
    let mut ext: Vec<Poly<K>> = gens.iter().map(|p| p.extend(1)).collect();
    let t = Poly::var(&field, n + 1, n);
    ext.push(&Poly::one(&field, n + 1) - &(&t * &g.extend(1)));
    let gb = GroebnerBasis::new(&field, n + 1, &ext, MonomialOrder::Elimination(1 << n));
    let kept: Vec<Poly<K>> = gb
        .polys()
        .into_iter()
        .filter(|p| p.degree_in(n) == 0)
        .map(|p| p.embed(n, &(0..n).chain(std::iter::once(0)).collect::<Vec<_>>()))
        .collect();
    groebner_basis(&kept, MonomialOrder::DegRevLex)
}

/// Generators of `(gens) ∩ k[x_i : i ∉ vars]`, still written in all variables.
pub fn eliminate<K: Field>(field: &K, nvars: usize, gens: &[Poly<K>], vars: &[usize]) -> Vec<Poly<K>> {
    let mask = vars.iter().fold(0u64, |m, &i| m | 1 << i);
    let gb = GroebnerBasis::new(field, nvars, gens, MonomialOrder::Elimination(mask));
    gb.polys().into_iter().filter(|p| vars.iter().all(|&v| p.degree_in(v) == 0)).collect()
}

/// Mutual containment of ideals, via reduced bases.
pub fn ideals_equal<K: Field>(field: &K, nvars: usize, a: &[Poly<K>], b: &[Poly<K>]) -> bool {
    let ga = GroebnerBasis::new(field, nvars, a, MonomialOrder::DegRevLex);
    let gb = GroebnerBasis::new(field, nvars, b, MonomialOrder::DegRevLex);
    ga.polys() == gb.polys()
}

/// Krull dimension of `k[x]/(gens)`; `None` when the ideal is the unit ideal.
pub fn krull_dimension<K: Field>(field: &K, nvars: usize, gens: &[Poly<K>]) -> Option<usize> {
    GroebnerBasis::new(field, nvars, gens, MonomialOrder::DegRevLex).dimension()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::field::{PrimeField, Rationals};
    use crate::exact_poly::parse::parse_poly;

    fn q(text: &str) -> Poly<Rationals> {
        parse_poly(&Rationals, &["x", "y", "z"], text).unwrap()
    }

    fn qs(texts: &[&str]) -> Vec<Poly<Rationals>> {
        texts.iter().map(|t| q(t)).collect()
    }

    /// Remainder of naive multivariate division, independent of the basis code.
    fn division_remainder(f: &Poly<Rationals>, divisors: &[Poly<Rationals>]) -> Poly<Rationals> {
        let mut p = f.clone();
        let mut r = Poly::zero(&Rationals, f.nvars());
        while !p.is_zero() {
            let (lm, lc) = p.leading().unwrap().clone();
            let mut divided = false;
            for d in divisors {
                let (dm, dc) = d.leading().unwrap();
                if let Some(m) = lm.checked_div(dm) {
                    let c = Rationals.div(&lc, dc).unwrap();
                    p = &p - &d.mul_monomial(&m, &c);
                    divided = true;
                    break;
                }
            }
            if !divided {
                let t = Poly::monomial(&Rationals, lm, lc);
                r = &r + &t;
                p = &p - &t;
            }
        }
        r
    }

    #[test]
    fn basis_examples() {
        assert_eq!(groebner_basis(&qs(&["x", "y"]), MonomialOrder::DegRevLex), qs(&["x", "y"]));
        assert_eq!(groebner_basis(&qs(&["x^2 - 1", "x - 1"]), MonomialOrder::DegRevLex), qs(&["x - 1"]));
        assert_eq!(groebner_basis(&qs(&["1 + x", "x"]), MonomialOrder::DegRevLex), qs(&["1"]));
        assert!(groebner_basis::<Rationals>(&[], MonomialOrder::DegRevLex).is_empty());
    }

    #[test]
    fn division_oracle_agrees_on_examples() {
        // x^2 - 1 = (x + 1)(x - 1) leaves no remainder on division by x - 1.
        assert!(division_remainder(&q("x^2 - 1"), &qs(&["x - 1"])).is_zero());
        // y^2 = (y^2 - x^3) + x^2 * x, an explicit membership certificate.
        let cert = &q("y^2 - x^3") + &(&q("x^2") * &q("x"));
        assert_eq!(cert, q("y^2"));
        let gb = groebner_basis(&qs(&["y^2 - x^3", "x"]), MonomialOrder::DegRevLex);
        assert!(division_remainder(&q("y^2"), &gb).is_zero());
    }

    #[test]
    fn membership_examples() {
        assert!(!ideal_member(&q("x"), &qs(&["x^2"])));
        assert!(radical_member(&q("x"), &qs(&["x^2"])));
        assert!(ideal_is_trivial(&qs(&["x", "1 - x"])));
        assert!(radical_member(&q("y"), &qs(&["y^2 - x^3", "x"])));
        assert!(!radical_member(&q("y"), &qs(&["y^2 - x^3"])));
    }

    #[test]
    fn basis_is_fixed_point_and_generates_same_ideal() {
        let gens = qs(&["x^2*y - z", "x*y^2 - x", "y*z - x^3"]);
        let gb = groebner_basis(&gens, MonomialOrder::DegRevLex);
        assert_eq!(groebner_basis(&gb, MonomialOrder::DegRevLex), gb);
        for g in &gens {
            assert!(ideal_member(g, &gb));
        }
        for g in &gb {
            assert!(ideal_member(g, &gens));
            assert!(division_remainder(g, &gb).is_zero());
        }
    }

    #[test]
    fn lex_basis_of_twisted_cubic() {
        let gens = qs(&["y - x^2", "z - x^3"]);
        let gb = groebner_basis(&gens, MonomialOrder::Lex);
        assert!(gb.iter().any(|p| *p == q("x^2 - y") || *p == q("y - x^2").monic()));
        let elim = eliminate(&Rationals, 3, &gens, &[0]);
        // y^3 - z^2 generates the elimination ideal.
        assert!(elim.iter().any(|p| *p == q("y^3 - z^2") || *p == q("z^2 - y^3")));
    }

    #[test]
    fn saturation_removes_component() {
        // (x*y, y^2) : x^inf = (y)
        let sat = saturate(&qs(&["x*y", "y^2"]), &q("x"));
        assert_eq!(sat, qs(&["y"]));
        // x - 1 is a unit at the origin, so the origin survives.
        assert_eq!(saturate(&qs(&["x", "y"]), &q("x - 1")), qs(&["x", "y"]));
        assert_eq!(saturate(&qs(&["x - 1", "y"]), &q("x - 1")), qs(&["1"]));
    }

    #[test]
    fn dimension_counts() {
        assert_eq!(krull_dimension(&Rationals, 3, &qs(&["x", "y"])), Some(1));
        assert_eq!(krull_dimension(&Rationals, 3, &qs(&["x*y"])), Some(2));
        assert_eq!(krull_dimension(&Rationals, 3, &[]), Some(3));
        assert_eq!(krull_dimension(&Rationals, 3, &qs(&["x", "x - 1"])), None);
        assert_eq!(krull_dimension(&Rationals, 3, &qs(&["x^2", "x*y", "y^2", "z^3"])), Some(0));
    }

    #[test]
    fn prime_field_basis() {
        let f = PrimeField::new(2).unwrap();
        let p = |t: &str| parse_poly(&f, &["x", "y"], t).unwrap();
        // In char 2, (x + y)^2 = x^2 + y^2.
        assert!(ideal_member(&p("x^2 + y^2"), &[p("x + y")]));
        assert!(radical_member(&p("x + y"), &[p("x^2 + y^2")]));
    }
}
