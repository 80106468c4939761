//! Couples `(J, b)`, Rees algebras given by weighted generators, singular
//! loci, `⊙`, normalization to one weight, and the order function.

use num_integer::Integer;
use num_rational::Rational64;

use crate::diff_ops::diff_extend_ideal;
use crate::error::{Error, Result};
use crate::exact_poly::groebner::radical_member_with;
use crate::exact_poly::{
    format_poly, ideal_is_trivial, order_at_point, parse_poly, product, radical_member, saturate, Field,
    GroebnerBasis, MonomialOrder, Order, Poly,
};

/// Exact rational values of the order functions.
pub type Rational = Rational64;

/// Cap on the number of products materialized for one degree part.
pub const PRODUCT_CAP: usize = 10_000;

/// Drops zeros, makes every generator monic, sorts and removes duplicates.
pub fn normalize_gens<K: Field>(gens: impl IntoIterator<Item = Poly<K>>) -> Vec<Poly<K>> {
    let mut out: Vec<Poly<K>> = gens.into_iter().filter(|g| !g.is_zero()).map(|g| g.monic()).collect();
    out.sort_by(|a, b| a.canonical_cmp(b));
    out.dedup();
    out
}

fn check_ring<K: Field>(field: &K, nvars: usize, p: &Poly<K>) -> Result<()> {
    if p.nvars() != nvars || p.field() != field {
        return Err(Error::Argument(format!(
            "generator lives in a ring with {} variables over {}, expected {} over {}",
            p.nvars(),
            p.field().spec(),
            nvars,
            field.spec()
        )));
    }
    Ok(())
}

/// A nonzero ideal with a positive weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Couple<K: Field> {
    field: K,
    nvars: usize,
    ideal: Vec<Poly<K>>,
    b: u32,
}

impl<K: Field> Couple<K> {
    pub fn new(field: &K, nvars: usize, ideal: Vec<Poly<K>>, b: u32) -> Result<Self> {
        if b == 0 {
            return Err(Error::Argument("couple weight must be at least 1".into()));
        }
        for g in &ideal {
            check_ring(field, nvars, g)?;
        }
        let ideal = normalize_gens(ideal);
        if ideal.is_empty() {
            return Err(Error::Argument("couple ideal must be nonzero".into()));
        }
        Ok(Couple { field: field.clone(), nvars, ideal, b })
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ideal(&self) -> &[Poly<K>] {
        &self.ideal
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    /// `(J^k, k b)`.
    pub fn power(&self, k: u32) -> Result<Couple<K>> {
        let rees = ReesAlgebra::new(&self.field, self.nvars, self.ideal.iter().map(|g| (g.clone(), 1)).collect())?;
        Couple::new(&self.field, self.nvars, rees.degree_part(k)?, k * self.b)
    }
}

/// One generator `f W^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedPoly<K: Field> {
    pub poly: Poly<K>,
    pub weight: u32,
}

/// The subalgebra of `O[W]` generated by finitely many `f_i W^{n_i}`.
///
/// Generators are kept monic, sorted by weight and then by term order, with
/// duplicates removed, so equal generator lists compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReesAlgebra<K: Field> {
    field: K,
    nvars: usize,
    gens: Vec<WeightedPoly<K>>,
}

impl<K: Field> ReesAlgebra<K> {
    pub fn new(field: &K, nvars: usize, gens: Vec<(Poly<K>, u32)>) -> Result<Self> {
        let mut out = Vec::with_capacity(gens.len());
        for (p, n) in gens {
            check_ring(field, nvars, &p)?;
            if n == 0 {
                return Err(Error::Argument("generator weights must be at least 1".into()));
            }
            if p.is_zero() {
                return Err(Error::Argument("Rees algebra generators must be nonzero".into()));
            }
            out.push(WeightedPoly { poly: p.monic(), weight: n });
        }
        out.sort_by(|a, b| a.weight.cmp(&b.weight).then_with(|| a.poly.canonical_cmp(&b.poly)));
        out.dedup();
        Ok(ReesAlgebra { field: field.clone(), nvars, gens: out })
    }

    /// The algebra `O` in degree zero only.
    pub fn empty(field: &K, nvars: usize) -> Self {
        ReesAlgebra { field: field.clone(), nvars, gens: Vec::new() }
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[WeightedPoly<K>] {
        &self.gens
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn max_weight(&self) -> u32 {
        self.gens.iter().map(|g| g.weight).max().unwrap_or(0)
    }

    pub fn weighted(&self) -> Vec<(Poly<K>, u32)> {
        self.gens.iter().map(|g| (g.poly.clone(), g.weight)).collect()
    }

    /// Generators of `I_n`: all products of generators of total weight exactly `n`.
    pub fn degree_part(&self, n: u32) -> Result<Vec<Poly<K>>> {
        if n == 0 {
            return Ok(vec![Poly::one(&self.field, self.nvars)]);
        }
        let count = self.product_count(n);
        if count > PRODUCT_CAP as u128 {
            return Err(Error::Resource(format!("degree part {n} needs {count} products, cap is {PRODUCT_CAP}")));
        }
        let mut out = Vec::new();
        let one = Poly::one(&self.field, self.nvars);
        self.collect_products(0, n, &one, &mut out)?;
        Ok(normalize_gens(out))
    }

    /// Number of exponent vectors `a` with `Σ a_i n_i = n`.
    pub fn product_count(&self, n: u32) -> u128 {
        let mut ways = vec![0u128; n as usize + 1];
        ways[0] = 1;
        for g in &self.gens {
            for k in g.weight as usize..=n as usize {
                ways[k] = ways[k].saturating_add(ways[k - g.weight as usize]);
            }
        }
        ways[n as usize]
    }

    fn collect_products(&self, start: usize, left: u32, acc: &Poly<K>, out: &mut Vec<Poly<K>>) -> Result<()> {
        if left == 0 {
            out.push(acc.clone());
            return Ok(());
        }
        for i in start..self.gens.len() {
            let g = &self.gens[i];
            if g.weight <= left {
                let next = acc * &g.poly;
                self.collect_products(i, left - g.weight, &next, out)?;
            }
        }
        Ok(())
    }

    /// `f W^n ∈ G`.
    pub fn contains(&self, f: &Poly<K>, n: u32) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        let part = self.degree_part(n)?;
        Ok(GroebnerBasis::new(&self.field, self.nvars, &part, MonomialOrder::DegRevLex).contains(f))
    }

    pub fn render<S: AsRef<str>>(&self, names: &[S]) -> String {
        let items: Vec<String> =
            self.gens.iter().map(|g| format!("({}, {})", format_poly(&g.poly, names), g.weight)).collect();
        format!("rees{{ gens: [{}] }}", items.join(", "))
    }
}

impl<K: Field> Couple<K> {
    pub fn render<S: AsRef<str>>(&self, names: &[S]) -> String {
        let items: Vec<String> = self.ideal.iter().map(|g| format_poly(g, names)).collect();
        format!("couple{{ gens: [{}], b: {} }}", items.join(", "), self.b)
    }
}

/// A locally closed set `V(defining) \ V(∏ inverted)`.
///
/// With no inverted polynomials this is the closed set `V(defining)`. The
/// inverted list records principal-open restrictions along a local sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Locus<K: Field> {
    field: K,
    nvars: usize,
    defining: Vec<Poly<K>>,
    inverted: Vec<Poly<K>>,
}

impl<K: Field> Locus<K> {
    pub fn new(field: &K, nvars: usize, defining: Vec<Poly<K>>) -> Self {
        Locus { field: field.clone(), nvars, defining: normalize_gens(defining), inverted: Vec::new() }
    }

    pub fn with_inverted(mut self, inverted: &[Poly<K>]) -> Self {
        self.inverted.extend(inverted.iter().filter(|g| !g.is_unit()).cloned());
        self.inverted = normalize_gens(std::mem::take(&mut self.inverted));
        self
    }

    pub fn whole(field: &K, nvars: usize) -> Self {
        Self::new(field, nvars, Vec::new())
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn defining(&self) -> &[Poly<K>] {
        &self.defining
    }

    pub fn inverted(&self) -> &[Poly<K>] {
        &self.inverted
    }

    fn open_product(&self) -> Poly<K> {
        product(&self.field, self.nvars, &self.inverted)
    }

    pub fn contains_point(&self, x: &[K::Elem]) -> bool {
        self.defining.iter().all(|f| self.field.is_zero(&f.eval(x)))
            && self.inverted.iter().all(|g| !self.field.is_zero(&g.eval(x)))
    }

    /// Emptiness over the algebraic closure.
    pub fn is_empty(&self) -> bool {
        if self.inverted.is_empty() {
            ideal_is_trivial(&self.defining)
        } else {
            radical_member(&self.open_product(), &self.defining)
        }
    }

    /// `self ⊆ other`, decided by radical membership.
    pub fn subset_of(&self, other: &Locus<K>) -> bool {
        let g = self.open_product();
        let gb = GroebnerBasis::new(&self.field, self.nvars, &self.defining, MonomialOrder::DegRevLex);
        if gb.is_unit() {
            return true;
        }
        let closed = other.defining.iter().all(|f| radical_member_with(&(f * &g), &gb, &self.defining));
        if !closed {
            return false;
        }
        if other.inverted.is_empty() {
            return true;
        }
        let mut gens = self.defining.clone();
        gens.push(other.open_product());
        radical_member(&g, &gens)
    }

    pub fn same_as(&self, other: &Locus<K>) -> bool {
        self.subset_of(other) && other.subset_of(self)
    }

    pub fn intersect(&self, other: &Locus<K>) -> Locus<K> {
        let mut defining = self.defining.clone();
        defining.extend(other.defining.iter().cloned());
        Locus::new(&self.field, self.nvars, defining).with_inverted(&[self.inverted.clone(), other.inverted.clone()].concat())
    }

    /// Reduced basis of the ideal of the closure, `(defining) : (∏ inverted)^∞`.
    pub fn closure_ideal(&self) -> Vec<Poly<K>> {
        if self.inverted.is_empty() {
            return GroebnerBasis::new(&self.field, self.nvars, &self.defining, MonomialOrder::DegRevLex).polys();
        }
        if self.defining.is_empty() {
            return Vec::new();
        }
        saturate(&self.defining, &self.open_product())
    }

    /// The preimage under the projection forgetting `extra` appended variables.
    pub fn extend(&self, extra: usize) -> Locus<K> {
        Locus {
            field: self.field.clone(),
            nvars: self.nvars + extra,
            defining: self.defining.iter().map(|p| p.extend(extra)).collect(),
            inverted: self.inverted.iter().map(|p| p.extend(extra)).collect(),
        }
    }
}

/// `Sing(J, b) = V(Diff^{b-1}(J))`.
pub fn sing_couple<K: Field>(c: &Couple<K>) -> Locus<K> {
    Locus::new(&c.field, c.nvars, diff_extend_ideal(&c.ideal, c.b - 1))
}

/// `Sing(G) = ∩ V(Diff^{n_i - 1}(f_i))`.
pub fn sing_rees<K: Field>(g: &ReesAlgebra<K>) -> Locus<K> {
    let mut defining = Vec::new();
    for w in &g.gens {
        defining.extend(diff_extend_ideal(std::slice::from_ref(&w.poly), w.weight - 1));
    }
    Locus::new(&g.field, g.nvars, defining)
}

/// `G1 ⊙ G2`: the algebra generated by both generator lists.
pub fn odot<K: Field>(g1: &ReesAlgebra<K>, g2: &ReesAlgebra<K>) -> Result<ReesAlgebra<K>> {
    if g1.nvars != g2.nvars || g1.field != g2.field {
        return Err(Error::Argument("⊙ needs algebras over the same ring".into()));
    }
    let mut gens = g1.weighted();
    gens.extend(g2.weighted());
    ReesAlgebra::new(&g1.field, g1.nvars, gens)
}

/// `G_{(J,b)} = O[J W^b]`, generated by `g W^b` for the generators `g` of `J`.
pub fn rees_from_couple<K: Field>(c: &Couple<K>) -> ReesAlgebra<K> {
    ReesAlgebra::new(&c.field, c.nvars, c.ideal.iter().map(|g| (g.clone(), c.b)).collect())
        .expect("couple generators are nonzero with positive weight")
}

/// `(I_b, b)` with `b` the lcm of the generator weights.
pub fn normalize_to_couple<K: Field>(g: &ReesAlgebra<K>) -> Result<Couple<K>> {
    if g.is_empty() {
        return Err(Error::Argument("cannot normalize the empty algebra".into()));
    }
    let b = g.gens.iter().fold(1u32, |acc, w| acc.lcm(&w.weight));
    Couple::new(&g.field, g.nvars, g.degree_part(b)?, b)
}

/// `min ν_x(f_i) / n_i`; `None` (infinite) for the empty algebra.
pub fn ord_rees<K: Field>(g: &ReesAlgebra<K>, x: &[K::Elem]) -> Option<Rational> {
    g.gens
        .iter()
        .map(|w| match order_at_point(&w.poly, x) {
            Order::Finite(d) => Rational::new(d as i64, w.weight as i64),
            Order::Infinite => unreachable!("generators are nonzero"),
        })
        .min()
}

/// `ν_x(J) / b`.
pub fn ord_couple<K: Field>(c: &Couple<K>, x: &[K::Elem]) -> Rational {
    let d = c.ideal.iter().filter_map(|g| order_at_point(g, x).finite()).min().expect("couple ideal is nonzero");
    Rational::new(d as i64, c.b as i64)
}

/// Probe-based simplicity: `ord = 1` at every probe point.
///
/// This only inspects the supplied points; it cannot certify the whole
/// singular locus.
pub fn is_simple<K: Field>(g: &ReesAlgebra<K>, probes: &[Vec<K::Elem>]) -> Result<bool> {
    let sing = sing_rees(g);
    for x in probes {
        if !sing.contains_point(x) {
            return Err(Error::Argument("probe point is not in the singular locus".into()));
        }
    }
    Ok(probes.iter().all(|x| {
        ord_rees(g, x) == Some(Rational::from_integer(1))
            && g.gens.iter().any(|w| order_at_point(&w.poly, x) == Order::Finite(w.weight))
    }))
}

/// A couple or a Rees algebra attached to a basic object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload<K: Field> {
    Couple(Couple<K>),
    Rees(ReesAlgebra<K>),
}

impl<K: Field> Payload<K> {
    pub fn field(&self) -> &K {
        match self {
            Payload::Couple(c) => &c.field,
            Payload::Rees(g) => &g.field,
        }
    }

    pub fn nvars(&self) -> usize {
        match self {
            Payload::Couple(c) => c.nvars,
            Payload::Rees(g) => g.nvars,
        }
    }

    /// Generators with their weights; a couple contributes every `g` at weight `b`.
    pub fn weighted(&self) -> Vec<(Poly<K>, u32)> {
        match self {
            Payload::Couple(c) => c.ideal.iter().map(|g| (g.clone(), c.b)).collect(),
            Payload::Rees(g) => g.weighted(),
        }
    }

    pub fn sing(&self) -> Locus<K> {
        match self {
            Payload::Couple(c) => sing_couple(c),
            Payload::Rees(g) => sing_rees(g),
        }
    }

    pub fn ord_at(&self, x: &[K::Elem]) -> Option<Rational> {
        match self {
            Payload::Couple(c) => Some(ord_couple(c, x)),
            Payload::Rees(g) => ord_rees(g, x),
        }
    }

    /// The couple itself, or the normalization of an algebra.
    pub fn to_couple(&self) -> Result<Couple<K>> {
        match self {
            Payload::Couple(c) => Ok(c.clone()),
            Payload::Rees(g) => normalize_to_couple(g),
        }
    }

    pub fn to_rees(&self) -> ReesAlgebra<K> {
        match self {
            Payload::Couple(c) => rees_from_couple(c),
            Payload::Rees(g) => g.clone(),
        }
    }

    /// Rebuilds the payload from transformed generators, keeping its kind.
    ///
    /// `map` receives each generator with its weight and returns the image.
    pub fn map_generators(&self, mut map: impl FnMut(&Poly<K>, u32) -> Result<Poly<K>>) -> Result<Payload<K>> {
        match self {
            Payload::Couple(c) => {
                let ideal = c.ideal.iter().map(|g| map(g, c.b)).collect::<Result<Vec<_>>>()?;
                Ok(Payload::Couple(Couple::new(&c.field, c.nvars, ideal, c.b)?))
            }
            Payload::Rees(g) => {
                let gens = g.gens.iter().map(|w| Ok((map(&w.poly, w.weight)?, w.weight))).collect::<Result<Vec<_>>>()?;
                Ok(Payload::Rees(ReesAlgebra::new(&g.field, g.nvars, gens)?))
            }
        }
    }

    /// Pull-back to `V × A^extra`: the same generators in more variables.
    pub fn extend(&self, extra: usize) -> Payload<K> {
        match self {
            Payload::Couple(c) => Payload::Couple(Couple {
                field: c.field.clone(),
                nvars: c.nvars + extra,
                ideal: c.ideal.iter().map(|g| g.extend(extra)).collect(),
                b: c.b,
            }),
            Payload::Rees(g) => Payload::Rees(ReesAlgebra {
                field: g.field.clone(),
                nvars: g.nvars + extra,
                gens: g.gens.iter().map(|w| WeightedPoly { poly: w.poly.extend(extra), weight: w.weight }).collect(),
            }),
        }
    }

    /// Applies a ring map `x_i -> images[i]` to every generator.
    pub fn substitute(&self, images: &[Poly<K>]) -> Result<Payload<K>> {
        let n = images.first().map(|p| p.nvars()).unwrap_or(self.nvars());
        match self {
            Payload::Couple(c) => {
                Ok(Payload::Couple(Couple::new(&c.field, n, c.ideal.iter().map(|g| g.substitute(images)).collect(), c.b)?))
            }
            Payload::Rees(g) => Ok(Payload::Rees(ReesAlgebra::new(
                &g.field,
                n,
                g.gens.iter().map(|w| (w.poly.substitute(images), w.weight)).collect(),
            )?)),
        }
    }

    pub fn render<S: AsRef<str>>(&self, names: &[S]) -> String {
        match self {
            Payload::Couple(c) => c.render(names),
            Payload::Rees(g) => g.render(names),
        }
    }
}

/// Splits on top-level commas, returning each piece with its byte offset.
fn split_top(text: &str, base: usize) -> Result<Vec<(usize, &str)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse { pos: base + i, msg: format!("unbalanced `{c}`") });
                }
            }
            ',' if depth == 0 => {
                out.push((base + start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse { pos: base + text.len(), msg: "unclosed bracket".into() });
    }
    if !text[start..].trim().is_empty() || !out.is_empty() {
        out.push((base + start, &text[start..]));
    }
    Ok(out)
}

/// Strips `open ... close` around a trimmed piece.
fn delimited(text: &str, base: usize, open: char, close: char) -> Result<(usize, &str)> {
    let lead = text.len() - text.trim_start().len();
    let t = text.trim();
    if !t.starts_with(open) || !t.ends_with(close) || t.len() < 2 {
        return Err(Error::Parse { pos: base + lead, msg: format!("expected `{open} ... {close}`") });
    }
    Ok((base + lead + 1, &t[1..t.len() - 1]))
}

fn parse_weight(text: &str, pos: usize) -> Result<u32> {
    text.trim()
        .parse::<u32>()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Parse { pos, msg: format!("expected a positive integer weight, found `{}`", text.trim()) })
}

/// Parses `couple{ gens: [...], b: 2 }` or `rees{ gens: [(f, n), ...] }`.
pub fn parse_payload<K: Field>(field: &K, vars: &[&str], text: &str) -> Result<Payload<K>> {
    let lead = text.len() - text.trim_start().len();
    let t = text.trim();
    let (kind, rest) = if let Some(r) = t.strip_prefix("couple") {
        ("couple", r)
    } else if let Some(r) = t.strip_prefix("rees") {
        ("rees", r)
    } else {
        return Err(Error::Parse { pos: lead, msg: "expected `couple{...}` or `rees{...}`".into() });
    };
    let (body_pos, body) = delimited(rest, lead + kind.len(), '{', '}')?;
    let mut gens_text = None;
    let mut b = None;
    for (pos, field_text) in split_top(body, body_pos)? {
        let (key, value) = field_text
            .split_once(':')
            .ok_or_else(|| Error::Parse { pos, msg: "expected `key: value`".into() })?;
        let vpos = pos + key.len() + 1;
        match key.trim() {
            "gens" => gens_text = Some((vpos, value)),
            "b" if kind == "couple" => b = Some(parse_weight(value, vpos)?),
            other => return Err(Error::Parse { pos, msg: format!("unknown field `{other}` in {kind}") }),
        }
    }
    let (gpos, gtext) = gens_text.ok_or_else(|| Error::Parse { pos: body_pos, msg: "missing `gens`".into() })?;
    let (lpos, list) = delimited(gtext, gpos, '[', ']')?;
    let items = split_top(list, lpos)?;
    let poly_at = |pos: usize, s: &str| {
        parse_poly(field, vars, s).map_err(|e| match e {
            Error::Parse { pos: p, msg } => Error::Parse { pos: pos + p, msg },
            other => other,
        })
    };
    let n = vars.len();
    if kind == "couple" {
        let b = b.ok_or_else(|| Error::Parse { pos: body_pos, msg: "missing `b`".into() })?;
        let ideal = items.iter().map(|&(p, s)| poly_at(p, s)).collect::<Result<Vec<_>>>()?;
        return Ok(Payload::Couple(Couple::new(field, n, ideal, b)?));
    }
    let mut gens = Vec::new();
    for (pos, item) in items {
        let (ipos, inner) = delimited(item, pos, '(', ')')?;
        let parts = split_top(inner, ipos)?;
        if parts.len() != 2 {
            return Err(Error::Parse { pos: ipos, msg: "expected `(poly, weight)`".into() });
        }
        gens.push((poly_at(parts[0].0, parts[0].1)?, parse_weight(parts[1].1, parts[1].0)?));
    }
    Ok(Payload::Rees(ReesAlgebra::new(field, n, gens)?))
}
