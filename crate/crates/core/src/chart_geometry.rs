//! Affine charts, divisor bookkeeping, blow-ups at coordinate centers,
//! controlled transforms, and the pull-backs used by local sequences.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_poly::{format_poly, rank, Field, Monomial, Poly};
use crate::rees_core::{Locus, Payload};

/// An affine chart in the blow-up tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub label: String,
    pub names: Vec<String>,
}

pub const ROOT_LABEL: &str = "root";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisorOrigin {
    Boundary,
    /// Created by the blow-up with this 1-based step index.
    Exceptional(usize),
}

/// A hypersurface of `E`. In every chart it is a coordinate hyperplane
/// `V(x_var)` or does not meet the chart at all (`var == None`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypersurface {
    pub name: String,
    pub var: Option<usize>,
    pub origin: DivisorOrigin,
}

impl Hypersurface {
    pub fn is_present(&self) -> bool {
        self.var.is_some()
    }

    pub fn is_exceptional(&self) -> bool {
        matches!(self.origin, DivisorOrigin::Exceptional(_))
    }

    /// Defining polynomial in the chart; the unit when absent.
    pub fn poly<K: Field>(&self, field: &K, nvars: usize) -> Poly<K> {
        match self.var {
            Some(v) => Poly::var(field, nvars, v),
            None => Poly::one(field, nvars),
        }
    }
}

/// Exponent `c_i` of an exceptional hypersurface in the total transform.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentEntry {
    pub hypersurface: String,
    pub step: usize,
    pub c: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepKind {
    Blowup { center: Vec<String>, chart_var: String },
    Restrict { g: String },
    TimesAffine { m: usize },
    LinearChange { images: Vec<String> },
}

/// One step of the local sequence leading to a chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    #[serde(flatten)]
    pub kind: StepKind,
    pub chart: String,
    pub exponents: Vec<ExponentEntry>,
    pub payload: String,
}

/// A chart with an attached couple or algebra and a divisor `E`.
///
/// Besides the visible data the object remembers where it came from: the
/// original payload, the images of the original coordinates, and the
/// exceptional monomial `M` with `σ*(f) = M^n · f_k` for every weight-`n`
/// generator. This makes the total-transform factorization checkable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicObject<K: Field> {
    pub chart: Chart,
    pub payload: Payload<K>,
    pub divisors: Vec<Hypersurface>,
    /// Inverted polynomials of principal-open restrictions.
    pub opens: Vec<Poly<K>>,
    pub history: Vec<StepRecord>,
    origin: Payload<K>,
    coords: Vec<Poly<K>>,
    unit_monomial: Monomial,
    exceptional_count: usize,
}

impl<K: Field> BasicObject<K> {
    /// A fresh object; `boundary` lists the variables whose hyperplanes form `E`.
    pub fn new(names: Vec<String>, payload: Payload<K>, boundary: &[usize]) -> Result<Self> {
        let n = payload.nvars();
        if names.len() != n {
            return Err(Error::Argument(format!("{} names for {} variables", names.len(), n)));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::Argument(format!("duplicate variable name `{a}`")));
            }
        }
        let mut divisors = Vec::new();
        for (k, &v) in boundary.iter().enumerate() {
            if v >= n || boundary[..k].contains(&v) {
                return Err(Error::Argument(format!("bad boundary variable index {v}")));
            }
            divisors.push(Hypersurface { name: names[v].clone(), var: Some(v), origin: DivisorOrigin::Boundary });
        }
        let field = payload.field().clone();
        Ok(BasicObject {
            chart: Chart { label: ROOT_LABEL.to_string(), names },
            origin: payload.clone(),
            coords: (0..n).map(|i| Poly::var(&field, n, i)).collect(),
            payload,
            divisors,
            opens: Vec::new(),
            history: Vec::new(),
            unit_monomial: Monomial::one(n),
            exceptional_count: 0,
        })
    }

    pub fn field(&self) -> &K {
        self.payload.field()
    }

    pub fn nvars(&self) -> usize {
        self.payload.nvars()
    }

    pub fn names(&self) -> &[String] {
        &self.chart.names
    }

    pub fn label(&self) -> &str {
        &self.chart.label
    }

    /// Number of steps in the local sequence so far.
    pub fn step_count(&self) -> usize {
        self.history.len()
    }

    pub fn sing(&self) -> Locus<K> {
        self.payload.sing().with_inverted(&self.opens)
    }

    /// Hypersurfaces of `E` that meet this chart.
    pub fn present_divisors(&self) -> impl Iterator<Item = &Hypersurface> {
        self.divisors.iter().filter(|h| h.is_present())
    }

    /// Variables carrying an exceptional hypersurface.
    pub fn exceptional_vars(&self) -> Vec<usize> {
        self.divisors.iter().filter(|h| h.is_exceptional()).filter_map(|h| h.var).collect()
    }

    /// Exceptional monomial per unit weight.
    pub fn unit_monomial(&self) -> &Monomial {
        &self.unit_monomial
    }

    /// Images of the original coordinates in this chart.
    pub fn coordinate_images(&self) -> &[Poly<K>] {
        &self.coords
    }

    pub fn original_payload(&self) -> &Payload<K> {
        &self.origin
    }

    pub fn render_payload(&self) -> String {
        self.payload.render(&self.chart.names)
    }

    fn record(&mut self, kind: StepKind) {
        let exponents = self.exponent_entries();
        self.history.push(StepRecord {
            step: self.history.len() + 1,
            kind,
            chart: self.chart.label.clone(),
            exponents,
            payload: self.render_payload(),
        });
    }

    fn exponent_entries(&self) -> Vec<ExponentEntry> {
        let scale = match &self.payload {
            Payload::Couple(c) => c.b(),
            Payload::Rees(_) => 1,
        };
        self.divisors
            .iter()
            .filter_map(|h| match (h.var, h.origin) {
                (Some(v), DivisorOrigin::Exceptional(step)) => {
                    Some(ExponentEntry { hypersurface: h.name.clone(), step, c: scale * self.unit_monomial.exponent(v) })
                }
                _ => None,
            })
            .collect()
    }
}

/// Validates a coordinate center given by variable indices.
fn check_center<K: Field>(b: &BasicObject<K>, center: &[usize]) -> Result<()> {
    if center.is_empty() {
        return Err(Error::Argument("center must use at least one variable".into()));
    }
    for (k, &v) in center.iter().enumerate() {
        if v >= b.nvars() || center[..k].contains(&v) {
            return Err(Error::Argument(format!("bad center variable index {v}")));
        }
    }
    let field = b.field();
    let y = Locus::new(field, b.nvars(), center.iter().map(|&v| Poly::var(field, b.nvars(), v)).collect())
        .with_inverted(&b.opens);
    if !y.subset_of(&b.sing()) {
        return Err(Error::Argument("center is not contained in the singular locus".into()));
    }
    Ok(())
}

/// Blow-up at `V(x_i : i ∈ center)`, one object per standard chart.
///
/// A coordinate center meets the coordinate hyperplanes of `E` with normal
/// crossings automatically, so only containment in `Sing` is checked.
pub fn blowup<K: Field>(b: &BasicObject<K>, center: &[usize]) -> Result<Vec<BasicObject<K>>> {
    check_center(b, center)?;
    let field = b.field().clone();
    let n = b.nvars();
    let step = b.step_count() + 1;
    let center_names: Vec<String> = center.iter().map(|&v| b.chart.names[v].clone()).collect();
    let mut out = Vec::with_capacity(center.len());
    for &j in center {
        let xj = Poly::var(&field, n, j);
        let images: Vec<Poly<K>> = (0..n)
            .map(|i| {
                let xi = Poly::var(&field, n, i);
                if i != j && center.contains(&i) {
                    &xi * &xj
                } else {
                    xi
                }
            })
            .collect();
        let payload = b.payload.map_generators(|f, w| {
            f.substitute(&images).div_var_power(j, w).ok_or_else(|| {
                Error::Invariant(format!("x_{j}^{w} does not divide a transformed generator of weight {w}"))
            })
        })?;
        let mut mono = b.unit_monomial.clone();
        let moved: u32 = center.iter().filter(|&&i| i != j).map(|&i| mono.exponent(i)).sum();
        let mut exps = mono.exponents().to_vec();
        exps[j] += moved + 1;
        mono = Monomial::from_exponents(&exps);

        let mut divisors: Vec<Hypersurface> = b
            .divisors
            .iter()
            .map(|h| Hypersurface { var: if h.var == Some(j) { None } else { h.var }, ..h.clone() })
            .collect();
        let count = b.exceptional_count + 1;
        divisors.push(Hypersurface { name: format!("H{count}"), var: Some(j), origin: DivisorOrigin::Exceptional(step) });

        let mut child = BasicObject {
            chart: Chart { label: format!("{}:{}", b.chart.label, b.chart.names[j]), names: b.chart.names.clone() },
            payload,
            divisors,
            opens: b.opens.iter().map(|g| g.substitute(&images)).collect(),
            history: b.history.clone(),
            origin: b.origin.clone(),
            coords: b.coords.iter().map(|c| c.substitute(&images)).collect(),
            unit_monomial: mono,
            exceptional_count: count,
        };
        child.record(StepKind::Blowup { center: center_names.clone(), chart_var: b.chart.names[j].clone() });
        out.push(child);
    }
    Ok(out)
}

/// Restriction to the principal open `D(g)`.
pub fn restrict<K: Field>(b: &BasicObject<K>, g: &Poly<K>) -> Result<BasicObject<K>> {
    if g.is_zero() {
        return Err(Error::Argument("cannot restrict to D(0)".into()));
    }
    if g.nvars() != b.nvars() {
        return Err(Error::Argument("restriction polynomial lives in another ring".into()));
    }
    let mut out = b.clone();
    if !g.is_unit() {
        out.opens.push(g.monic());
    }
    out.record(StepKind::Restrict { g: format_poly(g, &b.chart.names) });
    Ok(out)
}

/// Pull-back to `V × A^m`; new variables are appended.
pub fn times_affine<K: Field>(b: &BasicObject<K>, m: usize) -> Result<BasicObject<K>> {
    if m == 0 {
        return Err(Error::Argument("times_affine needs m ≥ 1".into()));
    }
    let n = b.nvars();
    let field = b.field().clone();
    let mut names = b.chart.names.clone();
    let mut k = 1;
    while names.len() < n + m {
        let cand = format!("a{k}");
        if !names.contains(&cand) {
            names.push(cand);
        }
        k += 1;
    }
    let mut coords: Vec<Poly<K>> = b.coords.iter().map(|c| c.extend(m)).collect();
    coords.extend((n..n + m).map(|i| Poly::var(&field, n + m, i)));
    let mut exps = b.unit_monomial.exponents().to_vec();
    exps.extend(std::iter::repeat(0).take(m));
    let mut out = BasicObject {
        chart: Chart { label: b.chart.label.clone(), names },
        payload: b.payload.extend(m),
        divisors: b.divisors.clone(),
        opens: b.opens.iter().map(|g| g.extend(m)).collect(),
        history: b.history.clone(),
        origin: b.origin.extend(m),
        coords,
        unit_monomial: Monomial::from_exponents(&exps),
        exceptional_count: b.exceptional_count,
    };
    out.record(StepKind::TimesAffine { m });
    Ok(out)
}

/// An affine change of coordinates `x_i -> images[i]` fixing every variable
/// that carries a hypersurface of `E`.
pub fn linear_change<K: Field>(b: &BasicObject<K>, images: &[Poly<K>]) -> Result<BasicObject<K>> {
    let n = b.nvars();
    let field = b.field().clone();
    if images.len() != n || images.iter().any(|p| p.nvars() != n) {
        return Err(Error::Argument("need one image per variable in the same ring".into()));
    }
    if images.iter().any(|p| p.total_degree().unwrap_or(0) > 1) {
        return Err(Error::Argument("coordinate change must be affine".into()));
    }
    let jac: Vec<Vec<K::Elem>> = images
        .iter()
        .map(|p| (0..n).map(|i| p.coefficient(&Monomial::var(n, i, 1))).collect())
        .collect();
    if rank(&field, &jac) != n {
        return Err(Error::Argument("coordinate change is not invertible".into()));
    }
    for v in b.present_divisors().filter_map(|h| h.var) {
        if images[v] != Poly::var(&field, n, v) {
            return Err(Error::Argument(format!("coordinate change moves the divisor variable {}", b.chart.names[v])));
        }
    }
    if !b.unit_monomial.is_one() && b.unit_monomial.support().any(|v| images[v] != Poly::var(&field, n, v)) {
        return Err(Error::Argument("coordinate change moves an exceptional variable".into()));
    }
    let mut out = b.clone();
    out.payload = b.payload.substitute(images)?;
    out.opens = b.opens.iter().map(|g| g.substitute(images)).collect();
    out.coords = b.coords.iter().map(|c| c.substitute(images)).collect();
    out.record(StepKind::LinearChange { images: images.iter().map(|p| format_poly(p, &b.chart.names)).collect() });
    Ok(out)
}

/// Exponents `c_i` of the exceptional hypersurfaces present in the chart,
/// after checking that re-multiplication reproduces the pulled-back payload.
///
/// For a couple `(J, b)` these satisfy `J O = ∏ I(H_i)^{c_i} · J_k`; for an
/// algebra they are per unit weight, so a weight-`n` generator carries
/// `∏ I(H_i)^{n c_i}`.
pub fn total_transform_exponents<K: Field>(b: &BasicObject<K>) -> Result<Vec<ExponentEntry>> {
    check_total_transform(b)?;
    Ok(b.exponent_entries())
}

/// `σ*(f) = M^n · f_k` generator-wise, up to the canonical normalization.
pub fn check_total_transform<K: Field>(b: &BasicObject<K>) -> Result<()> {
    let field = b.field();
    let n = b.nvars();
    let pulled = b.origin.substitute(&b.coords)?;
    let mono = |w: u32| {
        let exps: Vec<u32> = b.unit_monomial.exponents().iter().map(|e| e * w).collect();
        Monomial::from_exponents(&exps)
    };
    let remultiplied = b.payload.map_generators(|f, w| Ok(f.mul_monomial(&mono(w), &field.one())))?;
    if pulled.weighted() != remultiplied.weighted() || pulled.nvars() != n {
        return Err(Error::Invariant(format!(
            "total transform mismatch in chart {}: pulled back {} but re-multiplied {}",
            b.chart.label,
            pulled.render(&b.chart.names),
            remultiplied.render(&b.chart.names)
        )));
    }
    Ok(())
}
