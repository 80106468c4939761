//! The γ loop: per chart, max t at level 0, descent through elimination
//! algebras supplied by a provider table, center selection, blow-up.
//!
//! Level `e ≥ 1` carries the algebra `G_{α1..αe}`. Its singular locus is the
//! center when it is cut out by `e` coordinates; when every component has
//! higher codimension the loop descends with the provider entry for
//! `(chart, e)`. A level keeps its algebra, transformed and re-saturated,
//! while the value that produced it does not change.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chart_geometry::{blowup, check_total_transform, total_transform_exponents, BasicObject, ExponentEntry, Hypersurface};
use crate::diff_ops::{algebra_contains, diff_saturate, is_relative_diff_algebra};
use crate::error::{Error, Result};
use crate::exact_poly::{
    eliminate, format_poly, groebner_basis, krull_dimension, Field, FieldSpec, MonomialOrder, Poly,
};
use crate::rees_core::{
    normalize_to_couple, odot, parse_payload, rees_from_couple, sing_rees, Couple, Locus, Rational, ReesAlgebra,
};
use crate::satellite_invariants::{
    birth_index, born_step, factor_exceptional, max_t, max_w_ord, monomial_resolve, simple_from_t, simple_from_word,
    FactoredTransform, MaxT, MaxWord, TValue,
};
use crate::tau_ridge::transversal;

/// One coordinate of γ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GammaEntry {
    Value(TValue),
    /// Unvisited level; the largest element.
    Infinity,
}

/// `(α_1, ..., α_d)` padded with `∞`, compared lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaValue(pub Vec<GammaEntry>);

impl GammaValue {
    pub fn padded(alphas: &[TValue], d: usize) -> Self {
        let mut v: Vec<GammaEntry> = alphas.iter().map(|a| GammaEntry::Value(*a)).collect();
        v.resize(d.max(alphas.len()), GammaEntry::Infinity);
        GammaValue(v)
    }
}

impl fmt::Display for GammaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|e| match e {
                GammaEntry::Value(t) => t.to_string(),
                GammaEntry::Infinity => "∞".to_string(),
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Elimination data for one `(chart, level)`: the fiber of a coordinate
/// projection and the algebra on the remaining coordinates, written in the
/// chart's variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProviderEntry<K: Field> {
    pub fiber: Vec<usize>,
    pub elimination: ReesAlgebra<K>,
}

#[derive(Clone, Debug, Default)]
pub struct Provider<K: Field> {
    entries: BTreeMap<(String, usize), ProviderEntry<K>>,
}

impl<K: Field> Provider<K> {
    pub fn new() -> Self {
        Provider { entries: BTreeMap::new() }
    }

    pub fn insert(&mut self, chart: &str, level: usize, entry: ProviderEntry<K>) -> Result<()> {
        if level == 0 {
            return Err(Error::Provider("level 0 uses the identity; entries start at level 1".into()));
        }
        if entry.fiber.is_empty() {
            return Err(Error::Provider(format!("empty fiber for ({chart}, {level})")));
        }
        let touches = entry.elimination.gens().iter().any(|g| g.poly.variables().iter().any(|v| entry.fiber.contains(v)));
        if touches {
            return Err(Error::Provider(format!("elimination algebra for ({chart}, {level}) involves a fiber variable")));
        }
        self.entries.insert((chart.to_string(), level), entry);
        Ok(())
    }

    pub fn get(&self, chart: &str, level: usize) -> Option<&ProviderEntry<K>> {
        self.entries.get(&(chart.to_string(), level))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Provider table as stored in JSON.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProviderFile {
    pub entries: Vec<ProviderFileEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProviderFileEntry {
    pub chart: String,
    pub level: usize,
    pub fiber: Vec<String>,
    /// Payload text, e.g. `rees{ gens: [(x^3, 2)] }`.
    pub elimination: String,
}

impl ProviderFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Provider(format!("bad provider table: {e}")))
    }

    pub fn build<K: Field>(&self, field: &K, names: &[String]) -> Result<Provider<K>> {
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut out = Provider::new();
        for e in &self.entries {
            let fiber = e
                .fiber
                .iter()
                .map(|f| names.iter().position(|n| n == f).ok_or_else(|| Error::Provider(format!("unknown fiber variable `{f}`"))))
                .collect::<Result<Vec<_>>>()?;
            let elimination = parse_payload(field, &refs, &e.elimination)?.to_rees();
            out.insert(&e.chart, e.level, ProviderEntry { fiber, elimination })?;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProviderSource {
    Path(String),
    Inline(ProviderFile),
}

/// Input file of the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub field: String,
    pub vars: Vec<String>,
    pub payload: String,
    /// Variables whose hyperplanes form the initial `E`.
    #[serde(rename = "E", default)]
    pub e: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provider: Option<ProviderSource>,
    /// Second payload for the equivalence falsifier.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<String>,
    /// Default probe point for `tau`, comma separated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Argument(format!("bad scenario: {e}")))
    }

    pub fn field_spec(&self) -> Result<FieldSpec> {
        FieldSpec::parse(&self.field)
    }

    fn boundary(&self) -> Result<Vec<usize>> {
        self.e
            .iter()
            .map(|h| self.vars.iter().position(|v| v == h).ok_or_else(|| Error::Argument(format!("E names unknown variable `{h}`"))))
            .collect()
    }

    fn object_with<K: Field>(&self, field: &K, text: &str) -> Result<BasicObject<K>> {
        let refs: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        let payload = parse_payload(field, &refs, text)?;
        BasicObject::new(self.vars.clone(), payload, &self.boundary()?)
    }

    pub fn object<K: Field>(&self, field: &K) -> Result<BasicObject<K>> {
        self.object_with(field, &self.payload)
    }

    pub fn compare_object<K: Field>(&self, field: &K) -> Result<Option<BasicObject<K>>> {
        self.compare.as_ref().map(|t| self.object_with(field, t)).transpose()
    }

    /// The provider table, reading a path relative to `base_dir`.
    pub fn provider_file(&self, base_dir: &Path) -> Result<Option<ProviderFile>> {
        match &self.provider {
            None => Ok(None),
            Some(ProviderSource::Inline(p)) => Ok(Some(p.clone())),
            Some(ProviderSource::Path(p)) => {
                let text = std::fs::read_to_string(base_dir.join(p))
                    .map_err(|e| Error::Provider(format!("cannot read provider table {p}: {e}")))?;
                ProviderFile::from_json(&text).map(Some)
            }
        }
    }
}

/// Outcome of one elimination condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EliminationDiagnostics {
    pub probes: usize,
    pub checks: Vec<Check>,
}

impl EliminationDiagnostics {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.passed)
    }
}

fn render_point<K: Field>(field: &K, x: &[K::Elem]) -> String {
    let parts: Vec<String> = x.iter().map(|c| field.render(c)).collect();
    format!("({})", parts.join(","))
}

/// Points of `{0,1}^n` on `locus`.
pub fn grid_probes<K: Field>(locus: &Locus<K>) -> Vec<Vec<K::Elem>> {
    let field = locus.field();
    let n = locus.nvars();
    (0u64..1 << n)
        .map(|m| (0..n).map(|i| if m >> i & 1 == 1 { field.one() } else { field.zero() }).collect::<Vec<_>>())
        .filter(|x| locus.contains_point(x))
        .collect()
}

/// The checkable conditions on an elimination entry for `g`: transversal
/// projection, relative Diff-algebra, pull-back containment, image of the
/// singular locus, and injectivity on the singular locus at probe points.
pub fn elimination_checks<K: Field>(
    g: &ReesAlgebra<K>,
    entry: &ProviderEntry<K>,
    opens: &[Poly<K>],
) -> Result<EliminationDiagnostics> {
    let field = g.field();
    let n = g.nvars();
    let sing = sing_rees(g).with_inverted(opens);
    let probes = grid_probes(&sing);
    let mut checks = Vec::new();

    let mut witness = None;
    for x in &probes {
        if !transversal(g, x, &entry.fiber)? {
            witness = Some(render_point(field, x));
            break;
        }
    }
    checks.push(Check { name: "transversal", passed: witness.is_none(), witness });

    let relative = entry.fiber.len() < n && is_relative_diff_algebra(g, &entry.fiber)?;
    checks.push(Check { name: "relative_diff", passed: relative, witness: None });

    let contained = algebra_contains(g, &entry.elimination)?;
    checks.push(Check { name: "pullback_contained", passed: contained, witness: None });

    let image = sing.subset_of(&sing_rees(&entry.elimination));
    checks.push(Check { name: "sing_image", passed: image, witness: None });

    let mut witness = None;
    for x in &probes {
        let mut gens = sing.defining().to_vec();
        gens.extend(
            (0..n)
                .filter(|i| !entry.fiber.contains(i))
                .map(|i| &Poly::var(field, n, i) - &Poly::constant(field, n, x[i].clone())),
        );
        let over = Locus::new(field, n, gens).with_inverted(opens);
        let point = Locus::new(field, n, (0..n).map(|i| &Poly::var(field, n, i) - &Poly::constant(field, n, x[i].clone())).collect());
        if !over.same_as(&point) {
            witness = Some(render_point(field, x));
            break;
        }
    }
    checks.push(Check { name: "injective_on_sing", passed: witness.is_none(), witness });
    Ok(EliminationDiagnostics { probes: probes.len(), checks })
}

/// Terminal state of a chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ChartStatus {
    Resolved,
    EMonomial { level: usize },
    Budget,
    ProviderGap { level: usize },
    InvalidProvider { level: usize, check: String, witness: Option<String> },
    Obstruction { level: usize, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartOutcome {
    pub chart: String,
    #[serde(flatten)]
    pub status: ChartStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelRecord {
    pub level: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub fiber: Vec<String>,
    pub max_word: String,
    pub max_t: String,
    pub s0: usize,
    #[serde(rename = "E_minus")]
    pub e_minus: Vec<String>,
    pub reused: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKindTag {
    Gamma,
    Monomial,
}

/// One blow-up of the trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    pub chart: String,
    pub kind: StepKindTag,
    pub center: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center_level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_word: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_t: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    #[serde(rename = "E_minus")]
    pub e_minus: Vec<String>,
    pub exponents: Vec<ExponentEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<LevelRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OverallStatus {
    Resolved,
    EMonomial,
    Budget,
    ProviderGap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionTrace {
    pub field: String,
    pub blowups: usize,
    pub status: OverallStatus,
    pub steps: Vec<TraceStep>,
    pub charts: Vec<ChartOutcome>,
}

/// The satellite data of one γ step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SatelliteRecord {
    pub step: usize,
    pub chart: String,
    pub max_word: Option<String>,
    pub max_t: Option<String>,
    #[serde(rename = "E_minus")]
    pub e_minus: Vec<String>,
    pub exponents: Vec<ExponentEntry>,
}

impl ResolutionTrace {
    pub fn satellite_records(&self) -> Vec<SatelliteRecord> {
        self.steps
            .iter()
            .map(|s| SatelliteRecord {
                step: s.step,
                chart: s.chart.clone(),
                max_word: s.max_word.clone(),
                max_t: s.max_t.clone(),
                e_minus: s.e_minus.clone(),
                exponents: s.exponents.clone(),
            })
            .collect()
    }

    /// 0 resolved or e-monomial, 2 budget, 3 provider gap or obstruction.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            OverallStatus::Resolved | OverallStatus::EMonomial => 0,
            OverallStatus::Budget => 2,
            OverallStatus::ProviderGap => 3,
        }
    }

    /// Max w-ord values at level 0 of the γ steps taken in `chart` and its ancestors.
    pub fn word_path(&self, chart: &str) -> Vec<String> {
        self.steps
            .iter()
            .filter(|s| s.kind == StepKindTag::Gamma && (chart == s.chart || chart.starts_with(&format!("{}:", s.chart))))
            .filter_map(|s| s.max_word.clone())
            .collect()
    }
}

/// Everything computed at one level of one γ step.
#[derive(Clone, Debug)]
pub struct LevelDetail<K: Field> {
    pub level: usize,
    pub fiber: Vec<usize>,
    pub couple: Couple<K>,
    pub factored: FactoredTransform<K>,
    pub domain: Locus<K>,
    pub e_minus: Vec<Hypersurface>,
    pub word: MaxWord<K>,
    pub t: MaxT<K>,
    pub j_dd: Couple<K>,
    pub j_d: Couple<K>,
}

/// The object and level data behind one processed chart state.
#[derive(Clone, Debug)]
pub struct StepDetail<K: Field> {
    pub chart: String,
    pub object: BasicObject<K>,
    pub levels: Vec<LevelDetail<K>>,
    pub center: Option<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct Resolution<K: Field> {
    pub trace: ResolutionTrace,
    pub details: Vec<StepDetail<K>>,
    /// Final charts with empty singular locus.
    pub leaves: Vec<BasicObject<K>>,
}

#[derive(Clone, Debug)]
struct Level<K: Field> {
    birth: usize,
    alpha: TValue,
    algebra: ReesAlgebra<K>,
    /// Max w-ord of this level's elimination couple, per step since `birth`.
    words: Vec<Rational>,
}

#[derive(Clone, Debug)]
struct PathState<K: Field> {
    obj: BasicObject<K>,
    words: Vec<Rational>,
    last_t: Option<TValue>,
    levels: Vec<Level<K>>,
}

enum Processed<K: Field> {
    Terminal(ChartStatus, StepDetail<K>),
    Monomial,
    Center { center: Vec<usize>, step: TraceStep, detail: StepDetail<K>, state: PathState<K> },
}

enum CenterClass {
    Center(Vec<usize>),
    Descend,
    Obstruction(String),
}

fn classify<K: Field>(sing: &Locus<K>, e: usize, names: &[String]) -> CenterClass {
    let field = sing.field();
    let n = sing.nvars();
    let ideal = sing.closure_ideal();
    let gb = groebner_basis(&ideal, MonomialOrder::DegRevLex);
    let coordinate: Option<Vec<usize>> = gb
        .iter()
        .map(|p| match p.terms() {
            [(m, _)] if m.degree() == 1 => m.support().next(),
            _ => None,
        })
        .collect();
    if let Some(mut vars) = coordinate {
        if vars.len() == e {
            vars.sort_unstable();
            return CenterClass::Center(vars);
        }
    }
    let codim = n - krull_dimension(field, n, &ideal).unwrap_or(0);
    if codim > e {
        return CenterClass::Descend;
    }
    let shown: Vec<String> = gb.iter().map(|p| format_poly(p, names)).collect();
    CenterClass::Obstruction(format!(
        "singular locus V({}) has codimension {codim} but is not cut out by {e} coordinates",
        shown.join(", ")
    ))
}

/// Controlled transform of an algebra in the chart of `x_j`.
fn transform_algebra<K: Field>(g: &ReesAlgebra<K>, center: &[usize], j: usize) -> Result<ReesAlgebra<K>> {
    let field = g.field();
    let n = g.nvars();
    let xj = Poly::var(field, n, j);
    let images: Vec<Poly<K>> = (0..n)
        .map(|i| {
            let xi = Poly::var(field, n, i);
            if i != j && center.contains(&i) {
                &xi * &xj
            } else {
                xi
            }
        })
        .collect();
    let gens = g
        .weighted()
        .into_iter()
        .map(|(f, w)| {
            let image = f.substitute(&images).div_var_power(j, w).ok_or_else(|| {
                Error::Invariant("center is not inside the singular locus of a level algebra".into())
            })?;
            Ok((image, w))
        })
        .collect::<Result<Vec<_>>>()?;
    let gens = gens.into_iter().filter(|(f, _)| !f.is_zero()).collect();
    Ok(diff_saturate(&ReesAlgebra::new(field, n, gens)?))
}

fn names_of(hs: &[Hypersurface]) -> Vec<String> {
    hs.iter().map(|h| h.name.clone()).collect()
}

fn process<K: Field>(mut state: PathState<K>, provider: &Provider<K>, step_index: usize, out: &mut Resolution<K>) -> Result<Processed<K>> {
    let obj = state.obj.clone();
    let label = obj.label().to_string();
    let names = obj.names().to_vec();
    let field = obj.field().clone();
    let n = obj.nvars();
    let mut detail = StepDetail { chart: label.clone(), object: obj.clone(), levels: Vec::new(), center: None };
    if obj.sing().is_empty() {
        out.leaves.push(obj);
        return Ok(Processed::Terminal(ChartStatus::Resolved, detail));
    }
    check_total_transform(&obj)?;
    let step = obj.step_count();

    // Level 0: the couple itself, exceptional factors only.
    let couple = obj.payload.to_couple()?;
    let exceptional: Vec<Hypersurface> = obj.present_divisors().filter(|h| h.is_exceptional()).cloned().collect();
    let ft = factor_exceptional(couple.ideal(), &exceptional);
    if ft.remultiply() != crate::rees_core::normalize_gens(couple.ideal().to_vec()) {
        return Err(Error::Invariant(format!("factorization does not re-multiply in chart {label}")));
    }
    let domain = Locus::whole(&field, n).with_inverted(&obj.opens);
    let word = max_w_ord(&couple, &ft, &domain)
        .ok_or_else(|| Error::Invariant(format!("empty singular locus in chart {label} after a nonempty check")))?;
    if word.d == 0 {
        return Ok(Processed::Monomial);
    }
    state.words.push(word.value);
    let s0 = birth_index(&state.words);
    let e_minus: Vec<Hypersurface> = obj.present_divisors().filter(|h| born_step(h) <= s0).cloned().collect();
    let mt = max_t(&couple, &ft, &e_minus, &domain)?.expect("singular locus is nonempty");
    if let Some(prev) = state.last_t {
        if mt.t > prev {
            return Err(Error::Invariant(format!("max t rose from {prev} to {} in chart {label}", mt.t)));
        }
    }
    state.last_t = Some(mt.t);
    let j_dd = simple_from_word(&ft.residual, couple.ideal(), couple.b(), word.d)?;
    let j_d = simple_from_t(&j_dd, &e_minus, mt.t, couple.b())?;
    let mut records = vec![LevelRecord {
        level: 0,
        fiber: Vec::new(),
        max_word: word.value.to_string(),
        max_t: mt.t.to_string(),
        s0,
        e_minus: names_of(&e_minus),
        reused: state.levels.first().is_some_and(|l| l.alpha == mt.t),
    }];
    if !records[0].reused {
        state.levels = vec![Level { birth: step, alpha: mt.t, algebra: diff_saturate(&rees_from_couple(&j_d)), words: Vec::new() }];
    }
    let top = TraceSummary { max_word: word.value.to_string(), max_t: mt.t.to_string(), e_minus: names_of(&e_minus) };
    detail.levels.push(LevelDetail {
        level: 0,
        fiber: Vec::new(),
        couple,
        factored: ft,
        domain,
        e_minus,
        word,
        t: mt,
        j_dd,
        j_d,
    });

    let mut e = 1;
    loop {
        let g = state.levels[e - 1].algebra.clone();
        let sing = sing_rees(&g).with_inverted(&obj.opens);
        if sing.is_empty() {
            return Err(Error::Invariant(format!("level {e} algebra has empty singular locus in chart {label}")));
        }
        match classify(&sing, e, &names) {
            CenterClass::Center(center) => {
                state.levels.truncate(e);
                let alphas: Vec<TValue> = state.levels.iter().map(|l| l.alpha).collect();
                let record = TraceStep {
                    step: step_index,
                    chart: label.clone(),
                    kind: StepKindTag::Gamma,
                    center: center.iter().map(|&v| names[v].clone()).collect(),
                    center_level: Some(e),
                    max_word: Some(top.max_word),
                    max_t: Some(top.max_t),
                    gamma: Some(GammaValue::padded(&alphas, n).to_string()),
                    e_minus: top.e_minus,
                    exponents: total_transform_exponents(&obj)?,
                    levels: records,
                };
                detail.center = Some(center.clone());
                return Ok(Processed::Center { center, step: record, detail, state });
            }
            CenterClass::Obstruction(reason) => {
                return Ok(Processed::Terminal(ChartStatus::Obstruction { level: e, reason }, detail));
            }
            CenterClass::Descend => {}
        }
        let Some(entry) = provider.get(&label, e) else {
            return Ok(Processed::Terminal(ChartStatus::ProviderGap { level: e }, detail));
        };
        let diag = elimination_checks(&g, entry, &obj.opens)?;
        if let Some(failed) = diag.first_failure() {
            let status = ChartStatus::InvalidProvider { level: e, check: failed.name.to_string(), witness: failed.witness.clone() };
            return Ok(Processed::Terminal(status, detail));
        }
        let fiber = entry.fiber.clone();
        let couple_e = normalize_to_couple(&entry.elimination)?;
        let projected = eliminate(&field, n, &sing.closure_ideal(), &fiber);
        let base_opens: Vec<Poly<K>> =
            obj.opens.iter().filter(|p| !p.variables().iter().any(|v| fiber.contains(v))).cloned().collect();
        let domain_e = Locus::new(&field, n, projected).with_inverted(&base_opens);
        let birth = state.levels[e - 1].birth;
        let factor_set: Vec<Hypersurface> = obj
            .present_divisors()
            .filter(|h| born_step(h) > birth && !fiber.contains(&h.var.expect("present")))
            .cloned()
            .collect();
        let ft_e = factor_exceptional(couple_e.ideal(), &factor_set);
        let word_e = max_w_ord(&couple_e, &ft_e, &domain_e).ok_or_else(|| {
            Error::Provider(format!("elimination algebra for ({label}, {e}) is regular on the projected singular locus"))
        })?;
        if word_e.d == 0 {
            return Ok(Processed::Terminal(ChartStatus::EMonomial { level: e }, detail));
        }
        state.levels[e - 1].words.push(word_e.value);
        let s0_e = birth + birth_index(&state.levels[e - 1].words);
        let e_minus_e: Vec<Hypersurface> = factor_set.iter().filter(|h| born_step(h) <= s0_e).cloned().collect();
        let mt_e = max_t(&couple_e, &ft_e, &e_minus_e, &domain_e)?.expect("projected locus is nonempty");
        let j_dd_e = simple_from_word(&ft_e.residual, couple_e.ideal(), couple_e.b(), word_e.d)?;
        let j_d_e = simple_from_t(&j_dd_e, &e_minus_e, mt_e.t, couple_e.b())?;
        let reused = state.levels.get(e).is_some_and(|l| l.alpha == mt_e.t);
        records.push(LevelRecord {
            level: e,
            fiber: fiber.iter().map(|&v| names[v].clone()).collect(),
            max_word: word_e.value.to_string(),
            max_t: mt_e.t.to_string(),
            s0: s0_e,
            e_minus: names_of(&e_minus_e),
            reused,
        });
        if !reused {
            state.levels.truncate(e);
            let algebra = diff_saturate(&odot(&g, &rees_from_couple(&j_d_e))?);
            state.levels.push(Level { birth: step, alpha: mt_e.t, algebra, words: Vec::new() });
        }
        detail.levels.push(LevelDetail {
            level: e,
            fiber,
            couple: couple_e,
            factored: ft_e,
            domain: domain_e,
            e_minus: e_minus_e,
            word: word_e,
            t: mt_e,
            j_dd: j_dd_e,
            j_d: j_d_e,
        });
        e += 1;
    }
}

struct TraceSummary {
    max_word: String,
    max_t: String,
    e_minus: Vec<String>,
}

/// Runs the γ loop over all charts, depth first in chart label order, with
/// at most `max_steps` blow-ups in total.
pub fn resolve<K: Field>(root: &BasicObject<K>, provider: &Provider<K>, max_steps: usize) -> Result<Resolution<K>> {
    if max_steps == 0 {
        return Err(Error::Argument("max_steps must be at least 1".into()));
    }
    let mut out = Resolution {
        trace: ResolutionTrace {
            field: root.field().spec().to_string(),
            blowups: 0,
            status: OverallStatus::Resolved,
            steps: Vec::new(),
            charts: Vec::new(),
        },
        details: Vec::new(),
        leaves: Vec::new(),
    };
    let mut stack = vec![PathState { obj: root.clone(), words: Vec::new(), last_t: None, levels: Vec::new() }];
    while let Some(state) = stack.pop() {
        let obj = state.obj.clone();
        let label = obj.label().to_string();
        match process(state, provider, out.trace.blowups + 1, &mut out)? {
            Processed::Terminal(status, detail) => {
                out.details.push(detail);
                out.trace.charts.push(ChartOutcome { chart: label, status });
            }
            Processed::Monomial => {
                let res = monomial_resolve(&obj)?;
                if out.trace.blowups + res.steps.len() > max_steps {
                    out.trace.charts.push(ChartOutcome { chart: label, status: ChartStatus::Budget });
                    continue;
                }
                let exponents = total_transform_exponents(&obj)?;
                for s in res.steps {
                    out.trace.blowups += 1;
                    out.trace.steps.push(TraceStep {
                        step: out.trace.blowups,
                        chart: s.chart,
                        kind: StepKindTag::Monomial,
                        center: s.center,
                        center_level: None,
                        max_word: None,
                        max_t: None,
                        gamma: None,
                        e_minus: Vec::new(),
                        exponents: exponents.clone(),
                        levels: Vec::new(),
                    });
                }
                for leaf in res.leaves {
                    out.trace.charts.push(ChartOutcome { chart: leaf.label().to_string(), status: ChartStatus::Resolved });
                    out.leaves.push(leaf);
                }
            }
            Processed::Center { center, step, detail, state } => {
                out.details.push(detail);
                if out.trace.blowups >= max_steps {
                    out.trace.charts.push(ChartOutcome { chart: label, status: ChartStatus::Budget });
                    continue;
                }
                out.trace.blowups += 1;
                out.trace.steps.push(step);
                let mut children = Vec::new();
                for (child, &j) in blowup(&obj, &center)?.into_iter().zip(&center) {
                    let levels = state
                        .levels
                        .iter()
                        .map(|l| Ok(Level { algebra: transform_algebra(&l.algebra, &center, j)?, ..l.clone() }))
                        .collect::<Result<Vec<_>>>()?;
                    children.push(PathState { obj: child, words: state.words.clone(), last_t: state.last_t, levels });
                }
                children.sort_by(|a, b| a.obj.label().cmp(b.obj.label()));
                stack.extend(children.into_iter().rev());
            }
        }
    }
    let statuses: Vec<&ChartStatus> = out.trace.charts.iter().map(|c| &c.status).collect();
    out.trace.status = if statuses.iter().any(|s| {
        matches!(s, ChartStatus::ProviderGap { .. } | ChartStatus::InvalidProvider { .. } | ChartStatus::Obstruction { .. })
    }) {
        OverallStatus::ProviderGap
    } else if statuses.iter().any(|s| matches!(s, ChartStatus::Budget)) {
        OverallStatus::Budget
    } else if statuses.iter().any(|s| matches!(s, ChartStatus::EMonomial { .. })) {
        OverallStatus::EMonomial
    } else {
        OverallStatus::Resolved
    };
    Ok(out)
}

/// Builds the object and provider of a scenario and resolves it.
pub fn resolve_scenario<K: Field>(
    field: &K,
    scenario: &Scenario,
    provider: Option<&ProviderFile>,
    max_steps: usize,
) -> Result<Resolution<K>> {
    let obj = scenario.object(field)?;
    let provider = match provider {
        Some(p) => p.build(field, &scenario.vars)?,
        None => Provider::new(),
    };
    resolve(&obj, &provider, max_steps)
}
