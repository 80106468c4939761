//! Differential extension of ideals, Diff-saturation of Rees algebras, the
//! Diff-algebra predicates and bounded equality of graded algebras.

use crate::error::{Error, Result};
use crate::exact_poly::{hasse_derivative, ideals_equal, multi_indices, Field, GroebnerBasis, MonomialOrder, Poly};
use crate::rees_core::{normalize_gens, ReesAlgebra};

/// `Diff^s(J)`: generated by `Δ^α(g)` for the generators `g` and `|α| ≤ s`.
pub fn diff_extend_ideal<K: Field>(gens: &[Poly<K>], s: u32) -> Vec<Poly<K>> {
    diff_extend_along(gens, s, None)
}

/// Like [`diff_extend_ideal`] with `α` supported on `vars` (all when `None`).
pub fn diff_extend_along<K: Field>(gens: &[Poly<K>], s: u32, vars: Option<&[usize]>) -> Vec<Poly<K>> {
    let mut out = Vec::new();
    for g in gens {
        let Some(deg) = g.total_degree() else { continue };
        for alpha in multi_indices(g.nvars(), s.min(deg), vars) {
            out.push(hasse_derivative(g, &alpha).expect("multi-index matches the ring"));
        }
    }
    normalize_gens(out)
}

/// Generators of the degree-`n` part `I_n`.
pub fn algebra_degree_part<K: Field>(g: &ReesAlgebra<K>, n: u32) -> Result<Vec<Poly<K>>> {
    if n == 0 {
        return Err(Error::Argument("degree parts are indexed from 1".into()));
    }
    g.degree_part(n)
}

/// `G(G)`, the smallest Diff-algebra containing `g`.
pub fn diff_saturate<K: Field>(g: &ReesAlgebra<K>) -> ReesAlgebra<K> {
    saturate_along(g, None)
}

/// Saturation under the operators `Δ^α` with `α` supported on `vars`.
pub fn diff_saturate_along<K: Field>(g: &ReesAlgebra<K>, vars: &[usize]) -> ReesAlgebra<K> {
    saturate_along(g, Some(vars))
}

fn saturate_along<K: Field>(g: &ReesAlgebra<K>, vars: Option<&[usize]>) -> ReesAlgebra<K> {
    // Candidates Δ^α(f) W^k with 1 ≤ k ≤ n - |α|, one pass over the generators.
    let mut candidates: Vec<(Poly<K>, u32)> = Vec::new();
    for w in g.gens() {
        let deg = w.poly.total_degree().unwrap_or(0);
        for alpha in multi_indices(g.nvars(), (w.weight - 1).min(deg), vars) {
            let d = hasse_derivative(&w.poly, &alpha).expect("multi-index matches the ring");
            if d.is_zero() {
                continue;
            }
            let d = d.monic();
            for k in 1..=w.weight - alpha.degree() {
                candidates.push((d.clone(), k));
            }
        }
    }
    candidates.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.canonical_cmp(&b.0)));
    candidates.dedup();

    let mut kept = g.weighted();
    for (d, k) in candidates {
        if kept.iter().any(|(p, n)| *n == k && *p == d) {
            continue;
        }
        let partial = ReesAlgebra::new(g.field(), g.nvars(), kept.clone()).expect("valid generators");
        // A resource error only means we could not prove redundancy.
        if partial.contains(&d, k).unwrap_or(false) {
            continue;
        }
        kept.push((d, k));
    }
    ReesAlgebra::new(g.field(), g.nvars(), kept).expect("valid generators")
}

fn diff_closed<K: Field>(g: &ReesAlgebra<K>, vars: Option<&[usize]>) -> Result<bool> {
    // Leibniz reduces the check to generators.
    let mut bases: Vec<Option<GroebnerBasis<K>>> = vec![None; g.max_weight() as usize + 1];
    let mut member = |f: &Poly<K>, k: u32| -> Result<bool> {
        if f.is_zero() || k == 0 {
            return Ok(true);
        }
        let slot = &mut bases[k as usize];
        if slot.is_none() {
            let part = g.degree_part(k)?;
            *slot = Some(GroebnerBasis::new(g.field(), g.nvars(), &part, MonomialOrder::DegRevLex));
        }
        Ok(slot.as_ref().expect("filled").contains(f))
    };
    for w in g.gens() {
        if !member(&w.poly, w.weight - 1)? {
            return Ok(false);
        }
        let deg = w.poly.total_degree().unwrap_or(0);
        for alpha in multi_indices(g.nvars(), (w.weight - 1).min(deg), vars) {
            let d = hasse_derivative(&w.poly, &alpha).expect("multi-index matches the ring");
            if !member(&d, w.weight - alpha.degree())? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Δ^α(I_n) ⊆ I_{n-|α|}` for all `|α| < n`, and `I_{n+1} ⊆ I_n`.
pub fn is_diff_algebra<K: Field>(g: &ReesAlgebra<K>) -> Result<bool> {
    diff_closed(g, None)
}

/// The Diff-algebra check with operators along `fiber_vars` only.
pub fn is_relative_diff_algebra<K: Field>(g: &ReesAlgebra<K>, fiber_vars: &[usize]) -> Result<bool> {
    if fiber_vars.is_empty() || fiber_vars.len() >= g.nvars() || fiber_vars.iter().any(|&v| v >= g.nvars()) {
        return Err(Error::Argument("fiber variables must be a nonempty proper subset".into()));
    }
    diff_closed(g, Some(fiber_vars))
}

/// Equality of the degree parts `I_n` for `1 ≤ n ≤ max_n`.
pub fn algebras_equal_up_to<K: Field>(g1: &ReesAlgebra<K>, g2: &ReesAlgebra<K>, max_n: u32) -> Result<bool> {
    if g1.nvars() != g2.nvars() || g1.field() != g2.field() {
        return Err(Error::Argument("algebras live over different rings".into()));
    }
    for n in 1..=max_n {
        if !ideals_equal(g1.field(), g1.nvars(), &g1.degree_part(n)?, &g2.degree_part(n)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `small ⊆ big`, exact: every generator of `small` is a member of `big`.
pub fn algebra_contains<K: Field>(big: &ReesAlgebra<K>, small: &ReesAlgebra<K>) -> Result<bool> {
    for w in small.gens() {
        if !big.contains(&w.poly, w.weight)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::{parse_poly, PrimeField, Rationals};
    use crate::rees_core::{sing_rees, Locus};

    fn poly<K: Field>(f: &K, text: &str) -> Poly<K> {
        parse_poly(f, &["x", "y", "z"], text).unwrap()
    }

    fn rees<K: Field>(f: &K, gens: &[(&str, u32)]) -> ReesAlgebra<K> {
        ReesAlgebra::new(f, 3, gens.iter().map(|(t, n)| (poly(f, t), *n)).collect()).unwrap()
    }

    fn polys<K: Field>(f: &K, texts: &[&str]) -> Vec<Poly<K>> {
        normalize_gens(texts.iter().map(|t| poly(f, t)))
    }

    #[test]
    fn differential_extension_examples() {
        let q = Rationals;
        let e = diff_extend_ideal(&polys(&q, &["x^2"]), 1);
        assert!(ideals_equal(&q, 3, &e, &polys(&q, &["x"])));
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(diff_extend_ideal(&polys(&f2, &["x^2"]), 1), polys(&f2, &["x^2"]));
        let cusp = diff_extend_ideal(&polys(&q, &["y^2 - x^3"]), 1);
        assert!(ideals_equal(&q, 3, &cusp, &polys(&q, &["y^2 - x^3", "y", "x^2"])));
        assert_eq!(diff_extend_ideal(&polys(&q, &["y^2 - x^3"]), 0), polys(&q, &["y^2 - x^3"]));
        assert_eq!(diff_extend_along(&polys(&q, &["y^2 - x^3"]), 1, Some(&[1])), polys(&q, &["x^3 - y^2", "y"]));
    }

    #[test]
    fn saturation_examples() {
        let q = Rationals;
        let x = rees(&q, &[("x", 1)]);
        assert_eq!(diff_saturate(&x), x);

        let cusp = rees(&q, &[("y^2 - x^3", 2)]);
        let sat = diff_saturate(&cusp);
        let expected = rees(&q, &[("y^2 - x^3", 2), ("y^2 - x^3", 1), ("y", 1), ("x^2", 1)]);
        assert!(algebras_equal_up_to(&sat, &expected, 4).unwrap());
        assert!(is_diff_algebra(&sat).unwrap());

        let f3 = PrimeField::new(3).unwrap();
        let sat3 = diff_saturate(&rees(&f3, &[("y^2 - x^3", 2)]));
        let expected3 = rees(&f3, &[("y^2 - x^3", 2), ("y^2 - x^3", 1), ("y", 1)]);
        assert!(algebras_equal_up_to(&sat3, &expected3, 4).unwrap());
        assert!(!sat3.contains(&poly(&f3, "x^2"), 1).unwrap());
    }

    #[test]
    fn diff_algebra_predicate() {
        let q = Rationals;
        assert!(!is_diff_algebra(&rees(&q, &[("y^2 - x^3", 2)])).unwrap());
        assert!(!is_diff_algebra(&rees(&q, &[("x", 1), ("x", 2)])).unwrap());
        assert!(is_diff_algebra(&rees(&q, &[("x", 1), ("y", 1)])).unwrap());
        assert!(is_diff_algebra(&diff_saturate(&rees(&q, &[("x*y", 2), ("z^3", 3)]))).unwrap());
    }

    #[test]
    fn degree_part_examples() {
        let q = Rationals;
        assert_eq!(algebra_degree_part(&rees(&q, &[("x", 1)]), 3).unwrap(), polys(&q, &["x^3"]));
        assert_eq!(algebra_degree_part(&rees(&q, &[("x", 1), ("y", 2)]), 2).unwrap(), polys(&q, &["x^2", "y"]));
        assert_eq!(algebra_degree_part(&rees(&q, &[("x", 2), ("y", 3)]), 5).unwrap(), polys(&q, &["x*y"]));
        assert!(algebra_degree_part(&rees(&q, &[("x", 1)]), 0).is_err());
    }

    #[test]
    fn bounded_equality_examples() {
        let q = Rationals;
        let g = rees(&q, &[("y^2 - x^3", 2), ("x*z", 1)]);
        assert!(algebras_equal_up_to(&g, &g, 4).unwrap());
        assert!(!algebras_equal_up_to(&rees(&q, &[("x", 1)]), &rees(&q, &[("x^2", 2)]), 2).unwrap());
        let s = diff_saturate(&g);
        assert!(algebras_equal_up_to(&s, &diff_saturate(&s), 4).unwrap());
        assert!(algebra_contains(&s, &g).unwrap());
        assert!(!algebra_contains(&g, &s).unwrap());
    }

    #[test]
    fn relative_diff_algebras() {
        let q = Rationals;
        // x^3 W is needed: Δ_y of (y^2 - x^3) W^2 gives y W, and the generator
        // itself must lie in I_1.
        let rel = rees(&q, &[("y", 1), ("x^3", 1), ("y^2 - x^3", 2)]);
        assert!(is_relative_diff_algebra(&rel, &[1]).unwrap());
        assert!(!is_diff_algebra(&rel).unwrap());
        assert!(!is_relative_diff_algebra(&rees(&q, &[("y", 1), ("y^2 - x^3", 2)]), &[1]).unwrap());
        assert!(!is_relative_diff_algebra(&rees(&q, &[("y^2 - x^3", 2)]), &[1]).unwrap());
        let abs = diff_saturate(&rees(&q, &[("y^2 - x^3", 2), ("z^2", 2)]));
        for fiber in [vec![0], vec![1], vec![2], vec![0, 2], vec![1, 2]] {
            assert!(is_relative_diff_algebra(&abs, &fiber).unwrap(), "{fiber:?}");
        }
        assert!(is_relative_diff_algebra(&abs, &[]).is_err());
        assert!(is_relative_diff_algebra(&abs, &[0, 1, 2]).is_err());
        let along = diff_saturate_along(&rees(&q, &[("y^2 - x^3", 2)]), &[1]);
        assert!(is_relative_diff_algebra(&along, &[1]).unwrap());
    }

    #[test]
    fn saturation_keeps_the_singular_locus() {
        let q = Rationals;
        for g in [rees(&q, &[("y^2 - x^3", 2)]), rees(&q, &[("x^2 - y^2*z", 2)]), rees(&q, &[("x*y", 2), ("z^3", 3)])] {
            let a: Locus<Rationals> = sing_rees(&g);
            assert!(a.same_as(&sing_rees(&diff_saturate(&g))));
        }
    }
}
