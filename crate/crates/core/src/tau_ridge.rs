//! Initial ideals at a point, their graded Diff-closure, the translation
//! subspace `L_C` of the tangent cone and the τ-invariant.
//!
//! Tangent variables `X_i` share indices with the chart variables `x_i`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_poly::{format_poly, hasse_derivative, ideal_member, multi_indices, rank, row_reduce, Field, Monomial, Poly};
use crate::rees_core::{normalize_gens, sing_rees, ReesAlgebra};

/// A homogeneous ideal in the tangent variables, generators tagged by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialIdeal<K: Field> {
    field: K,
    nvars: usize,
    generators: Vec<(Poly<K>, u32)>,
}

impl<K: Field> InitialIdeal<K> {
    /// Rejects generators that are not homogeneous of their tagged degree.
    pub fn new(field: &K, nvars: usize, gens: Vec<(Poly<K>, u32)>) -> Result<Self> {
        for (f, d) in &gens {
            if f.is_zero() || !f.is_homogeneous() || f.total_degree() != Some(*d) {
                return Err(Error::Argument(format!("generator is not homogeneous of degree {d}")));
            }
        }
        let mut generators: Vec<(Poly<K>, u32)> = gens.into_iter().map(|(f, d)| (f.monic(), d)).collect();
        generators.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.canonical_cmp(&b.0)));
        generators.dedup();
        Ok(InitialIdeal { field: field.clone(), nvars, generators })
    }

    pub fn generators(&self) -> &[(Poly<K>, u32)] {
        &self.generators
    }

    pub fn polys(&self) -> Vec<Poly<K>> {
        self.generators.iter().map(|g| g.0.clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Drops generators lying in the ideal of the others, highest degree first.
    pub fn minimal(&self) -> Self {
        let mut keep = self.generators.clone();
        let mut i = keep.len();
        while i > 0 {
            i -= 1;
            let others: Vec<Poly<K>> = keep.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, g)| g.0.clone()).collect();
            if !others.is_empty() && ideal_member(&keep[i].0, &others) {
                keep.remove(i);
            }
        }
        InitialIdeal { field: self.field.clone(), nvars: self.nvars, generators: keep }
    }

    /// Renders with upper-cased chart names.
    pub fn render<S: AsRef<str>>(&self, names: &[S]) -> String {
        let upper: Vec<String> = names.iter().map(|s| s.as_ref().to_uppercase()).collect();
        let gens: Vec<String> = self.generators.iter().map(|(f, _)| format_poly(f, &upper)).collect();
        format!("({})", gens.join(", "))
    }
}

/// Initial forms at `x` of the generators `(f, n)` with `ν_x(f) = n`.
pub fn initial_ideal<K: Field>(g: &ReesAlgebra<K>, x: &[K::Elem]) -> Result<InitialIdeal<K>> {
    if !sing_rees(g).contains_point(x) {
        return Err(Error::Argument("point is not in the singular locus".into()));
    }
    let gens = g
        .gens()
        .iter()
        .filter_map(|w| {
            let form = w.poly.translate(x).homogeneous_part(w.weight);
            (!form.is_zero()).then_some((form, w.weight))
        })
        .collect();
    InitialIdeal::new(g.field(), g.nvars(), gens)
}

/// Smallest homogeneous ideal containing `ideal` and closed under `Γ̄^α` for
/// `|α|` below the degree; returned with redundant generators removed.
pub fn graded_diff_closure<K: Field>(ideal: &InitialIdeal<K>) -> InitialIdeal<K> {
    let n = ideal.nvars;
    let mut all: Vec<(Poly<K>, u32)> = ideal.generators.clone();
    let mut frontier = all.clone();
    while let Some((f, d)) = frontier.pop() {
        for alpha in multi_indices(n, d.saturating_sub(1), None) {
            if alpha.is_one() {
                continue;
            }
            let h = hasse_derivative(&f, &alpha).expect("multi-index arity matches");
            if h.is_zero() {
                continue;
            }
            let entry = (h.monic(), d - alpha.degree());
            if !all.contains(&entry) {
                all.push(entry.clone());
                frontier.push(entry);
            }
        }
    }
    let closed = InitialIdeal::new(&ideal.field, n, all).expect("Hasse derivatives of forms are forms");
    closed.minimal()
}

/// Output of [`ridge_and_tau`].
#[derive(Clone, Debug)]
pub struct RidgeResult<K: Field> {
    pub closure: InitialIdeal<K>,
    /// Row-reduced linear forms cutting out `L_C`.
    pub linear_forms: Vec<Poly<K>>,
    /// Closure generators of the form `ℓ^{p^e}`, whose roots `ℓ` were used.
    pub additive: Vec<Poly<K>>,
    /// Closure generators ignored when extracting `L_C`.
    pub flagged: Vec<Poly<K>>,
    pub tau: usize,
}

#[derive(Serialize)]
pub struct RidgeReport {
    pub tau: usize,
    pub linear_forms: Vec<String>,
    pub additive: Vec<String>,
    pub flagged_generators: Vec<String>,
    pub closure: String,
}

impl<K: Field> RidgeResult<K> {
    pub fn report<S: AsRef<str>>(&self, names: &[S]) -> RidgeReport {
        let upper: Vec<String> = names.iter().map(|s| s.as_ref().to_uppercase()).collect();
        let show = |v: &[Poly<K>]| v.iter().map(|f| format_poly(f, &upper)).collect();
        RidgeReport {
            tau: self.tau,
            linear_forms: show(&self.linear_forms),
            additive: show(&self.additive),
            flagged_generators: show(&self.flagged),
            closure: self.closure.render(names),
        }
    }

    /// Coefficient rows of the linear forms.
    pub fn rows(&self) -> Vec<Vec<K::Elem>> {
        self.linear_forms.iter().map(linear_row).collect()
    }
}

fn linear_row<K: Field>(f: &Poly<K>) -> Vec<K::Elem> {
    (0..f.nvars()).map(|i| f.coefficient(&Monomial::var(f.nvars(), i, 1))).collect()
}

/// `ℓ` with `f = ℓ^q`, when `f = Σ c_i X_i^q` and the field has the roots.
fn additive_root<K: Field>(f: &Poly<K>, q: u32) -> Option<Poly<K>> {
    let field = f.field();
    let n = f.nvars();
    let mut terms = Vec::new();
    for (m, c) in f.terms() {
        let mut support = m.support();
        let i = support.next()?;
        if support.next().is_some() || m.exponent(i) != q {
            return None;
        }
        terms.push((Monomial::var(n, i, 1), field.frobenius_root(c, q as u64)?));
    }
    Some(Poly::from_terms(field, n, terms))
}

fn characteristic_power(p: u64, d: u32) -> bool {
    if p == 0 || d < 2 {
        return false;
    }
    let mut q = p;
    while q < d as u64 {
        q *= p;
    }
    q == d as u64
}

/// Closure of the initial ideal, the subspace `L_C` and `τ = codim L_C`.
pub fn ridge_and_tau<K: Field>(g: &ReesAlgebra<K>, x: &[K::Elem]) -> Result<RidgeResult<K>> {
    let closure = graded_diff_closure(&initial_ideal(g, x)?);
    let field = closure.field.clone();
    let p = field.characteristic();
    let (mut rows, mut additive, mut flagged) = (Vec::new(), Vec::new(), Vec::new());
    for (f, d) in &closure.generators {
        if *d == 1 {
            rows.push(linear_row(f));
        } else if let Some(root) = characteristic_power(p, *d).then(|| additive_root(f, *d)).flatten() {
            rows.push(linear_row(&root));
            additive.push(f.clone());
        } else {
            flagged.push(f.clone());
        }
    }
    row_reduce(&field, &mut rows);
    let n = closure.nvars;
    let linear_forms = normalize_gens(rows.iter().map(|r| {
        Poly::from_terms(&field, n, r.iter().enumerate().map(|(i, c)| (Monomial::var(n, i, 1), c.clone())))
    }));
    let tau = linear_forms.len();
    Ok(RidgeResult { closure, linear_forms, additive, flagged, tau })
}

/// `τ ≥ e` at every probe.
pub fn codim_type_at_least<K: Field>(g: &ReesAlgebra<K>, e: usize, probes: &[Vec<K::Elem>]) -> Result<bool> {
    for x in probes {
        if ridge_and_tau(g, x)?.tau < e {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `L_C ∩ ker dβ = 0` for the projection forgetting `fiber_vars`: the forms
/// cutting `L_C`, restricted to the fiber columns, have rank `|fiber_vars|`.
pub fn transversal<K: Field>(g: &ReesAlgebra<K>, x: &[K::Elem], fiber_vars: &[usize]) -> Result<bool> {
    let ridge = ridge_and_tau(g, x)?;
    let restricted: Vec<Vec<K::Elem>> =
        ridge.rows().iter().map(|r| fiber_vars.iter().map(|&v| r[v].clone()).collect()).collect();
    Ok(fiber_vars.is_empty() || rank(&ridge.closure.field, &restricted) == fiber_vars.len())
}
