//! A bounded falsifier for weak equivalence, and the order and τ checks that
//! weak equivalence forces.
//!
//! Nothing here can certify equivalence: the search only reports either a
//! witness sequence or how many nodes it explored without finding one.

use serde::Serialize;

use crate::chart_geometry::{blowup, restrict, times_affine, BasicObject};
use crate::error::{Error, Result};
use crate::exact_poly::{format_poly, Field, Poly};
use crate::rees_core::Locus;
use crate::tau_ridge::ridge_and_tau;

pub const DEFAULT_DEPTH: usize = 2;
pub const DEFAULT_BUDGET: usize = 500;

/// One transformation applied to both objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FuzzStep<K: Field> {
    /// Blow-up at `V(x_i : i ∈ center)`, continuing in the chart of `center[chart]`.
    Blowup { center: Vec<usize>, chart: usize },
    /// Restriction to `D(g)`.
    Restrict(Poly<K>),
    TimesAffine,
}

impl<K: Field> FuzzStep<K> {
    pub fn describe<S: AsRef<str>>(&self, names: &[S]) -> String {
        match self {
            FuzzStep::Blowup { center, chart } => {
                let c: Vec<&str> = center.iter().map(|&v| names[v].as_ref()).collect();
                format!("blowup V({}) chart {}", c.join(","), names[center[*chart]].as_ref())
            }
            FuzzStep::Restrict(g) => format!("restrict D({})", format_poly(g, names)),
            FuzzStep::TimesAffine => "times_affine 1".to_string(),
        }
    }
}

/// Result of [`weak_equiv_fuzz`].
#[derive(Clone, Debug)]
pub enum FuzzOutcome<K: Field> {
    /// A step list after which the singular loci differ.
    Witness { steps: Vec<FuzzStep<K>>, descriptions: Vec<String> },
    /// No discrepancy among `explored` nodes; `exhausted` when the budget cut the search.
    NoViolation { explored: usize, exhausted: bool },
}

#[derive(Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FuzzReport {
    Witness { steps: Vec<String> },
    NoViolation { explored: usize, budget_exhausted: bool },
}

impl<K: Field> FuzzOutcome<K> {
    pub fn is_witness(&self) -> bool {
        matches!(self, FuzzOutcome::Witness { .. })
    }

    pub fn report(&self) -> FuzzReport {
        match self {
            FuzzOutcome::Witness { descriptions, .. } => FuzzReport::Witness { steps: descriptions.clone() },
            FuzzOutcome::NoViolation { explored, exhausted } => {
                FuzzReport::NoViolation { explored: *explored, budget_exhausted: *exhausted }
            }
        }
    }
}

fn same_sing<K: Field>(a: &BasicObject<K>, b: &BasicObject<K>) -> bool {
    a.sing().same_as(&b.sing())
}

/// Applies one step to both objects; `None` when the step does not apply.
fn apply_pair<K: Field>(
    pair: &(BasicObject<K>, BasicObject<K>),
    step: &FuzzStep<K>,
) -> Result<Option<(BasicObject<K>, BasicObject<K>)>> {
    let one = |b: &BasicObject<K>| -> Result<Option<BasicObject<K>>> {
        match step {
            FuzzStep::Blowup { center, chart } => match blowup(b, center) {
                Ok(mut charts) => Ok(Some(charts.swap_remove(*chart))),
                Err(Error::Argument(_)) => Ok(None),
                Err(e) => Err(e),
            },
            FuzzStep::Restrict(g) => restrict(b, g).map(Some),
            FuzzStep::TimesAffine => times_affine(b, 1).map(Some),
        }
    };
    Ok(match (one(&pair.0)?, one(&pair.1)?) {
        (Some(a), Some(b)) => Some((a, b)),
        _ => None,
    })
}

/// Candidate steps at a node, in a fixed order.
fn candidates<K: Field>(pair: &(BasicObject<K>, BasicObject<K>)) -> Vec<FuzzStep<K>> {
    let b = &pair.0;
    let field = b.field();
    let n = b.nvars();
    let sing = b.sing();
    let mut out = Vec::new();
    if !sing.is_empty() {
        for mask in 1u64..1 << n {
            let center: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let gens = center.iter().map(|&v| Poly::var(field, n, v)).collect();
            let c = Locus::new(field, n, gens).with_inverted(&b.opens);
            if c.is_empty() || !c.subset_of(&sing) || !c.subset_of(&pair.1.sing()) {
                continue;
            }
            for chart in 0..center.len() {
                out.push(FuzzStep::Blowup { center: center.clone(), chart });
            }
        }
    }
    for v in 0..n {
        let x = Poly::var(field, n, v);
        let one = Poly::one(field, n);
        for g in [x.clone(), &x - &one, &x + &one] {
            out.push(FuzzStep::Restrict(g));
        }
    }
    out.push(FuzzStep::TimesAffine);
    out
}

/// Depth-first search over local sequences of at most `depth` steps, in
/// candidate order, comparing singular loci at every node.
pub fn weak_equiv_fuzz<K: Field>(
    b1: &BasicObject<K>,
    b2: &BasicObject<K>,
    depth: usize,
    budget: usize,
) -> Result<FuzzOutcome<K>> {
    if b1.names() != b2.names() || b1.field() != b2.field() {
        return Err(Error::Argument("objects must live on the same chart".into()));
    }
    let mut explored = 0;
    let mut path = Vec::new();
    let mut names = Vec::new();
    let root = (b1.clone(), b2.clone());
    match search(&root, depth, budget, &mut explored, &mut path, &mut names)? {
        true => Ok(FuzzOutcome::Witness { steps: path, descriptions: names }),
        false => Ok(FuzzOutcome::NoViolation { explored, exhausted: explored >= budget }),
    }
}

fn search<K: Field>(
    pair: &(BasicObject<K>, BasicObject<K>),
    depth: usize,
    budget: usize,
    explored: &mut usize,
    path: &mut Vec<FuzzStep<K>>,
    names: &mut Vec<String>,
) -> Result<bool> {
    if *explored >= budget {
        return Ok(false);
    }
    *explored += 1;
    if !same_sing(&pair.0, &pair.1) {
        return Ok(true);
    }
    if depth == 0 {
        return Ok(false);
    }
    for step in candidates(pair) {
        let Some(child) = apply_pair(pair, &step)? else { continue };
        path.push(step.clone());
        names.push(step.describe(pair.0.names()));
        if search(&child, depth - 1, budget, explored, path, names)? {
            return Ok(true);
        }
        path.pop();
        names.pop();
        if *explored >= budget {
            break;
        }
    }
    Ok(false)
}

/// Replays a step list; true iff the final singular loci differ.
pub fn replay_witness<K: Field>(b1: &BasicObject<K>, b2: &BasicObject<K>, steps: &[FuzzStep<K>]) -> Result<bool> {
    let mut pair = (b1.clone(), b2.clone());
    for step in steps {
        pair = apply_pair(&pair, step)?.ok_or_else(|| Error::Invariant("witness step does not apply".into()))?;
    }
    Ok(!same_sing(&pair.0, &pair.1))
}

fn check_probe<K: Field>(b: &BasicObject<K>, x: &[K::Elem]) -> Result<()> {
    if x.len() != b.nvars() {
        return Err(Error::Argument("probe dimension mismatch".into()));
    }
    Ok(())
}

/// Equal order functions at every probe (`None` off the singular locus).
pub fn ord_consequence_check<K: Field>(b1: &BasicObject<K>, b2: &BasicObject<K>, probes: &[Vec<K::Elem>]) -> Result<bool> {
    for x in probes {
        check_probe(b1, x)?;
        check_probe(b2, x)?;
        if b1.payload.ord_at(x) != b2.payload.ord_at(x) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Equal τ at every probe; probes must be singular for both objects.
pub fn tau_consequence_check<K: Field>(b1: &BasicObject<K>, b2: &BasicObject<K>, probes: &[Vec<K::Elem>]) -> Result<bool> {
    let (g1, g2) = (b1.payload.to_rees(), b2.payload.to_rees());
    for x in probes {
        check_probe(b1, x)?;
        check_probe(b2, x)?;
        if ridge_and_tau(&g1, x)?.tau != ridge_and_tau(&g2, x)?.tau {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff_ops::diff_saturate;
    use crate::exact_poly::Rationals;
    use crate::rees_core::{parse_payload, Payload};

    fn object(vars: &[&str], text: &str) -> BasicObject<Rationals> {
        let payload = parse_payload(&Rationals, vars, text).unwrap();
        BasicObject::new(vars.iter().map(|s| s.to_string()).collect(), payload, &[]).unwrap()
    }

    fn origin(n: usize) -> Vec<num_rational::BigRational> {
        vec![Rationals.zero(); n]
    }

    #[test]
    fn power_pair_survives() {
        let xy = ["x", "y"];
        let a = object(&xy, "couple{ gens: [y^2 - x^3], b: 2 }");
        let b = object(&xy, "couple{ gens: [(y^2 - x^3)^2], b: 4 }");
        let out = weak_equiv_fuzz(&a, &b, 2, DEFAULT_BUDGET).unwrap();
        assert!(!out.is_witness(), "{:?}", serde_json::to_string(&out.report()).unwrap());
        assert!(ord_consequence_check(&a, &b, &[origin(2)]).unwrap());
    }

    #[test]
    fn saturation_pair_survives() {
        let xy = ["x", "y"];
        let a = object(&xy, "couple{ gens: [y^2 - x^3], b: 2 }");
        let mut b = a.clone();
        b.payload = Payload::Rees(diff_saturate(&a.payload.to_rees()));
        let out = weak_equiv_fuzz(&a, &b, 2, DEFAULT_BUDGET).unwrap();
        assert!(!out.is_witness());
        assert!(tau_consequence_check(&a, &b, &[origin(2)]).unwrap());
    }

    #[test]
    fn different_loci_give_an_immediate_witness() {
        let xy = ["x", "y"];
        let out = weak_equiv_fuzz(&object(&xy, "couple{ gens: [x], b: 1 }"), &object(&xy, "couple{ gens: [y], b: 1 }"), 2, 10)
            .unwrap();
        match out {
            FuzzOutcome::Witness { steps, .. } => assert!(steps.is_empty()),
            _ => panic!("expected a witness"),
        }
    }

    #[test]
    fn orders_separate_the_engineered_pair() {
        let xy = ["x", "y"];
        let a = object(&xy, "couple{ gens: [x^2], b: 2 }");
        let b = object(&xy, "couple{ gens: [x^3], b: 2 }");
        assert!(!ord_consequence_check(&a, &b, &[origin(2)]).unwrap());
        let out = weak_equiv_fuzz(&a, &b, 2, DEFAULT_BUDGET).unwrap();
        let FuzzOutcome::Witness { steps, descriptions } = out else { panic!("expected a witness") };
        assert_eq!(steps.len(), 2, "{descriptions:?}");
        assert!(replay_witness(&a, &b, &steps).unwrap());
        let line = object(&xy, "couple{ gens: [x], b: 1 }");
        assert!(ord_consequence_check(&a, &line, &[origin(2)]).unwrap());
    }

    #[test]
    fn tau_examples() {
        let xyz = ["x", "y", "z"];
        let a = object(&xyz, "couple{ gens: [x*y], b: 1 }");
        let b = object(&xyz, "couple{ gens: [x*y, z], b: 1 }");
        assert!(!tau_consequence_check(&a, &b, &[origin(3)]).unwrap());
        assert!(tau_consequence_check(&a, &a, &[origin(3)]).unwrap());
    }
}
