//! Exceptional factorization, the satellite functions w-ord and t, the simple
//! objects built from their maxima, and the combinatorial resolver for the
//! monomial case.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::chart_geometry::{blowup, BasicObject, DivisorOrigin, Hypersurface};
use crate::diff_ops::diff_extend_ideal;
use crate::error::{Error, Result};
use crate::exact_poly::{ideal_order_at_point, order_at_point, Field, Monomial, Order, Poly};
use crate::rees_core::{normalize_gens, sing_couple, Couple, Locus, Rational, ReesAlgebra};

/// One exceptional factor `I(H)^{b_i}` peeled off an ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorExponent {
    pub name: String,
    pub var: usize,
    pub b: u32,
}

/// `J = ∏ I(H_i)^{b_i} · J̄` with `J̄` not divisible by any `I(H_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredTransform<K: Field> {
    pub exponents: Vec<FactorExponent>,
    pub residual: Vec<Poly<K>>,
    field: K,
    nvars: usize,
}

impl<K: Field> FactoredTransform<K> {
    pub fn monomial(&self) -> Monomial {
        let mut e = vec![0; self.nvars];
        for f in &self.exponents {
            e[f.var] += f.b;
        }
        Monomial::from_exponents(&e)
    }

    /// Generators of `∏ I(H_i)^{b_i} · J̄`.
    pub fn remultiply(&self) -> Vec<Poly<K>> {
        let m = self.monomial();
        normalize_gens(self.residual.iter().map(|g| g.mul_monomial(&m, &self.field.one())))
    }

    pub fn exponent_sum(&self) -> u32 {
        self.exponents.iter().map(|f| f.b).sum()
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
}

/// Factors `J` along the coordinate hypersurfaces in `divisors` that meet the
/// chart; `b_i` is the least power of `x_i` over the generators.
pub fn factor_exceptional<K: Field>(j: &[Poly<K>], divisors: &[Hypersurface]) -> FactoredTransform<K> {
    let first = j.first().expect("ideal is nonzero");
    let (field, nvars) = (first.field().clone(), first.nvars());
    let mut exponents = Vec::new();
    let mut mono = vec![0u32; nvars];
    for h in divisors {
        let Some(v) = h.var else { continue };
        if exponents.iter().any(|f: &FactorExponent| f.var == v) {
            continue;
        }
        let b = j.iter().map(|g| g.var_valuation(v)).min().unwrap_or(0);
        mono[v] = b;
        exponents.push(FactorExponent { name: h.name.clone(), var: v, b });
    }
    let m = Monomial::from_exponents(&mono);
    let residual = normalize_gens(j.iter().map(|g| g.div_monomial(&m).expect("minimal valuation divides")));
    let ft = FactoredTransform { exponents, residual, field, nvars };
    debug_assert_eq!(ft.remultiply(), normalize_gens(j.to_vec()));
    ft
}

fn order_value(o: Order, b: u32) -> Rational {
    match o {
        Order::Finite(d) => Rational::new(d as i64, b as i64),
        Order::Infinite => unreachable!("residual ideal is nonzero"),
    }
}

fn check_singular<K: Field>(ft: &FactoredTransform<K>, b: u32, x: &[K::Elem]) -> Result<()> {
    if !ideal_order_at_point(&ft.remultiply(), x).at_least(b) {
        return Err(Error::Argument("point is not in the singular locus".into()));
    }
    Ok(())
}

/// `w-ord(x) = ν_x(J̄) / b`.
pub fn w_ord<K: Field>(ft: &FactoredTransform<K>, b: u32, x: &[K::Elem]) -> Result<Rational> {
    check_singular(ft, b, x)?;
    Ok(order_value(ideal_order_at_point(&ft.residual, x), b))
}

/// The functions `exp_i(x) = b_i / b` for `x ∈ H_i`, else `0`.
pub fn exceptional_weights<K: Field>(ft: &FactoredTransform<K>, b: u32, x: &[K::Elem]) -> Vec<(String, Rational)> {
    ft.exponents
        .iter()
        .map(|f| {
            let on = ft.field.is_zero(&x[f.var]);
            (f.name.clone(), if on { Rational::new(f.b as i64, b as i64) } else { Rational::from_integer(0) })
        })
        .collect()
}

/// Split of `E` into old (`E⁻`) and new hypersurfaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TState {
    pub s0: usize,
    pub e_minus: Vec<String>,
}

/// `(w-ord, n)`, ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TValue {
    pub w: Rational,
    pub n: u32,
}

impl fmt::Display for TValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.w, self.n)
    }
}

impl Serialize for TValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Step at which a hypersurface was created; boundary components count as 0.
pub fn born_step(h: &Hypersurface) -> usize {
    match h.origin {
        DivisorOrigin::Boundary => 0,
        DivisorOrigin::Exceptional(s) => s,
    }
}

fn lookup<'a>(divisors: &'a [Hypersurface], name: &str) -> Option<&'a Hypersurface> {
    divisors.iter().find(|h| h.name == name)
}

/// `t(x) = (w-ord(x), #{H ∈ E⁻ present in the chart : x ∈ H})`.
pub fn t_value<K: Field>(
    ts: &TState,
    ft: &FactoredTransform<K>,
    b: u32,
    x: &[K::Elem],
    divisors: &[Hypersurface],
) -> Result<TValue> {
    let couple = Couple::new(&ft.field, ft.nvars, ft.remultiply(), b)?;
    let domain = Locus::whole(&ft.field, ft.nvars);
    match max_w_ord(&couple, ft, &domain) {
        Some(m) if m.d > 0 => {}
        _ => return Err(Error::State("t is undefined in the monomial case".into())),
    }
    let w = w_ord(ft, b, x)?;
    let n = ts
        .e_minus
        .iter()
        .filter_map(|name| lookup(divisors, name))
        .filter(|h| h.var.is_some_and(|v| ft.field.is_zero(&x[v])))
        .count() as u32;
    Ok(TValue { w, n })
}

/// Smallest `r` with `values[r] = … = values[last]`; `0` for an empty list.
pub fn birth_index<T: PartialEq>(values: &[T]) -> usize {
    let Some(last) = values.last() else { return 0 };
    let mut r = values.len() - 1;
    while r > 0 && values[r - 1] == *last {
        r -= 1;
    }
    r
}

/// First index where max w-ord reaches 0, if any.
pub fn monomial_birth_index(words: &[Rational]) -> Option<usize> {
    words.iter().position(|w| *w == Rational::from_integer(0))
}

/// `(J″, b″)`: `(J̄, d)` when `d ≥ b`, else `(J^d + J̄^b, b d)`.
pub fn simple_from_word<K: Field>(jbar: &[Poly<K>], j: &[Poly<K>], b: u32, d_num: u32) -> Result<Couple<K>> {
    if d_num == 0 {
        return Err(Error::State("max w-ord is 0: monomial case".into()));
    }
    let first = j.first().ok_or_else(|| Error::Argument("ideal must be nonzero".into()))?;
    let (field, n) = (first.field().clone(), first.nvars());
    if d_num >= b {
        return Couple::new(&field, n, jbar.to_vec(), d_num);
    }
    let power = |gens: &[Poly<K>], k: u32| -> Result<Vec<Poly<K>>> {
        ReesAlgebra::new(&field, n, gens.iter().map(|g| (g.clone(), 1)).collect())?.degree_part(k)
    };
    let mut gens = power(j, d_num)?;
    gens.extend(power(jbar, b)?);
    Couple::new(&field, n, gens, b * d_num)
}

/// `ℋ_h(m) = ∏_{F ⊆ E⁻, |F| = h} Σ_{H ∈ F} I(H)^m`; the unit ideal for `h = 0`.
pub fn h_product<K: Field>(field: &K, nvars: usize, e_minus: &[Hypersurface], h: usize, m: u32) -> Result<Vec<Poly<K>>> {
    if h > e_minus.len() {
        return Err(Error::Argument(format!("h = {h} exceeds #E⁻ = {}", e_minus.len())));
    }
    if h == 0 {
        return Ok(vec![Poly::one(field, nvars)]);
    }
    let polys: Vec<Poly<K>> = e_minus.iter().map(|x| x.poly(field, nvars).pow(m)).collect();
    let mut acc = vec![Poly::one(field, nvars)];
    for subset in subsets(e_minus.len(), h) {
        let factor: Vec<&Poly<K>> = subset.iter().map(|&i| &polys[i]).collect();
        let mut next = Vec::with_capacity(acc.len() * factor.len());
        for a in &acc {
            for f in &factor {
                next.push(a * *f);
            }
        }
        acc = normalize_gens(next);
        if acc.len() > crate::rees_core::PRODUCT_CAP {
            return Err(Error::Resource("ℋ_h has too many generators".into()));
        }
    }
    Ok(acc)
}

fn subsets(k: usize, h: usize) -> Vec<Vec<usize>> {
    (0u64..1 << k).filter(|m| m.count_ones() as usize == h).map(|m| (0..k).filter(|i| m >> i & 1 == 1).collect()).collect()
}

/// `(J′, b′) = (J″ + ℋ_h(b″), b″)`, with `J′ = J″` when `h = 0`.
pub fn simple_from_t<K: Field>(j_dd: &Couple<K>, e_minus: &[Hypersurface], t: TValue, b: u32) -> Result<Couple<K>> {
    let scaled = t.w * Rational::from_integer(b as i64);
    if !scaled.is_integer() || scaled <= Rational::from_integer(0) {
        return Err(Error::State(format!("t = {t} is not of the form (d/{b}, h) with d ≥ 1")));
    }
    let d = scaled.to_integer() as u32;
    let m = if d >= b { d } else { b * d };
    if j_dd.b() != m {
        return Err(Error::Argument(format!("expected (J″, {m}), got weight {}", j_dd.b())));
    }
    if t.n == 0 {
        return Ok(j_dd.clone());
    }
    let mut gens = j_dd.ideal().to_vec();
    gens.extend(h_product(j_dd.field(), j_dd.nvars(), e_minus, t.n as usize, m)?);
    Couple::new(j_dd.field(), j_dd.nvars(), gens, m)
}

/// The maximum of w-ord on `Sing(J, b) ∩ domain` and where it is attained.
#[derive(Clone, Debug)]
pub struct MaxWord<K: Field> {
    /// `b · max w-ord`.
    pub d: u32,
    pub value: Rational,
    pub locus: Locus<K>,
}

/// Max w-ord via `V(Diff^{b-1} J) ∩ V(Diff^{d-1} J̄) ∩ domain ≠ ∅`;
/// `None` when the singular locus misses the domain.
pub fn max_w_ord<K: Field>(j: &Couple<K>, ft: &FactoredTransform<K>, domain: &Locus<K>) -> Option<MaxWord<K>> {
    let sing = sing_couple(j).intersect(domain);
    if sing.is_empty() {
        return None;
    }
    let bound = ft.residual.iter().filter_map(|g| g.total_degree()).min().unwrap_or(0);
    let mut best = MaxWord { d: 0, value: Rational::from_integer(0), locus: sing.clone() };
    for d in 1..=bound {
        let level = Locus::new(j.field(), j.nvars(), diff_extend_ideal(&ft.residual, d - 1));
        let l = sing.intersect(&level);
        if l.is_empty() {
            break;
        }
        best = MaxWord { d, value: Rational::new(d as i64, j.b() as i64), locus: l };
    }
    Some(best)
}

/// Max t and its locus inside the max-w-ord locus.
#[derive(Clone, Debug)]
pub struct MaxT<K: Field> {
    pub t: TValue,
    pub word: MaxWord<K>,
    pub locus: Locus<K>,
}

/// `h` is the largest number of `E⁻` hypersurfaces through a point of the
/// max-w-ord locus, found with `V(ℋ_h(1))`.
pub fn max_t<K: Field>(
    j: &Couple<K>,
    ft: &FactoredTransform<K>,
    e_minus: &[Hypersurface],
    domain: &Locus<K>,
) -> Result<Option<MaxT<K>>> {
    let Some(word) = max_w_ord(j, ft, domain) else { return Ok(None) };
    if word.d == 0 {
        return Err(Error::State("t is undefined in the monomial case".into()));
    }
    let present: Vec<Hypersurface> = e_minus.iter().filter(|h| h.is_present()).cloned().collect();
    for h in (1..=present.len()).rev() {
        let hh = h_product(j.field(), j.nvars(), &present, h, 1)?;
        let l = word.locus.intersect(&Locus::new(j.field(), j.nvars(), hh));
        if !l.is_empty() {
            return Ok(Some(MaxT { t: TValue { w: word.value, n: h as u32 }, locus: l, word }));
        }
    }
    let locus = word.locus.clone();
    Ok(Some(MaxT { t: TValue { w: word.value, n: 0 }, word, locus }))
}

/// One blow-up chosen by the Γ-rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialStep {
    pub chart: String,
    pub center: Vec<String>,
    pub depth: usize,
}

/// Output of [`monomial_resolve`]: the blow-ups in depth-first chart order and
/// the final charts, each with empty singular locus.
#[derive(Clone, Debug)]
pub struct MonomialResolution<K: Field> {
    pub steps: Vec<MonomialStep>,
    pub leaves: Vec<BasicObject<K>>,
    pub max_depth: usize,
    /// `Σ b_i` at the start.
    pub exponent_sum: u32,
}

/// Γ-rule: among sets `F` of hypersurfaces with `Σ_F b_i ≥ b` whose
/// intersection meets the chart, take the fewest; then the largest `Σ b_i`;
/// then the lexicographically largest index tuple, latest first.
pub fn gamma_rule_center<K: Field>(b: &BasicObject<K>, ft: &FactoredTransform<K>, weight: u32) -> Option<Vec<usize>> {
    let field = b.field();
    let n = b.nvars();
    let entries: Vec<(usize, &FactorExponent)> = ft
        .exponents
        .iter()
        .filter(|f| f.b > 0)
        .map(|f| (b.divisors.iter().position(|h| h.name == f.name).unwrap_or(usize::MAX), f))
        .collect();
    let mut best: Option<(usize, u32, Vec<usize>, Vec<usize>)> = None;
    for size in 1..=entries.len() {
        for subset in subsets(entries.len(), size) {
            let total: u32 = subset.iter().map(|&i| entries[i].1.b).sum();
            if total < weight {
                continue;
            }
            let vars: Vec<usize> = subset.iter().map(|&i| entries[i].1.var).collect();
            let meets = !Locus::new(field, n, vars.iter().map(|&v| Poly::var(field, n, v)).collect())
                .with_inverted(&b.opens)
                .is_empty();
            if !meets {
                continue;
            }
            let mut idx: Vec<usize> = subset.iter().map(|&i| entries[i].0).collect();
            idx.sort_unstable_by(|a, b| b.cmp(a));
            let better = match &best {
                None => true,
                Some((s, t, bi, _)) => (size, *t, bi).cmp(&(*s, total, &idx)) == Ordering::Less
                    || (size == *s && total == *t && idx > *bi),
            };
            if better {
                best = Some((size, total, idx, vars));
            }
        }
        if best.is_some() {
            break;
        }
    }
    best.map(|(_, _, _, mut vars)| {
        vars.sort_unstable();
        vars
    })
}

fn monomial_factorization<K: Field>(b: &BasicObject<K>) -> Result<(Couple<K>, FactoredTransform<K>)> {
    let couple = b.payload.to_couple()?;
    let present: Vec<Hypersurface> = b.present_divisors().cloned().collect();
    let ft = factor_exceptional(couple.ideal(), &present);
    Ok((couple, ft))
}

fn is_monomial_case<K: Field>(b: &BasicObject<K>, couple: &Couple<K>, ft: &FactoredTransform<K>) -> bool {
    let domain = Locus::whole(b.field(), b.nvars()).with_inverted(&b.opens);
    max_w_ord(couple, ft, &domain).map_or(true, |m| m.d == 0)
}

/// Resolves an object in the monomial case with Γ-rule centers, chart by
/// chart. Each path has at most `Σ b_i` blow-ups; exceeding that is reported
/// as an invariant violation.
pub fn monomial_resolve<K: Field>(b: &BasicObject<K>) -> Result<MonomialResolution<K>> {
    let (couple, ft) = monomial_factorization(b)?;
    if !is_monomial_case(b, &couple, &ft) {
        return Err(Error::State("object is not in the monomial case".into()));
    }
    let mut out = MonomialResolution { steps: Vec::new(), leaves: Vec::new(), max_depth: 0, exponent_sum: ft.exponent_sum() };
    resolve_rec(b, 0, ft.exponent_sum() as usize, &mut out)?;
    Ok(out)
}

fn resolve_rec<K: Field>(b: &BasicObject<K>, depth: usize, bound: usize, out: &mut MonomialResolution<K>) -> Result<()> {
    out.max_depth = out.max_depth.max(depth);
    if b.sing().is_empty() {
        out.leaves.push(b.clone());
        return Ok(());
    }
    if depth >= bound {
        return Err(Error::Invariant(format!("Γ-rule did not finish within {bound} blow-ups in chart {}", b.label())));
    }
    let (couple, ft) = monomial_factorization(b)?;
    if !is_monomial_case(b, &couple, &ft) {
        return Err(Error::Invariant(format!("chart {} left the monomial case", b.label())));
    }
    let center = gamma_rule_center(b, &ft, couple.b())
        .ok_or_else(|| Error::Invariant(format!("no Γ-rule center in chart {}", b.label())))?;
    out.steps.push(MonomialStep {
        chart: b.label().to_string(),
        center: center.iter().map(|&v| b.names()[v].clone()).collect(),
        depth: depth + 1,
    });
    for child in blowup(b, &center)? {
        resolve_rec(&child, depth + 1, bound, out)?;
    }
    Ok(())
}

/// Order of a single polynomial divided by `b`, as used by w-ord at a point.
pub fn weighted_order<K: Field>(f: &Poly<K>, b: u32, x: &[K::Elem]) -> Rational {
    order_value(order_at_point(f, x), b)
}
