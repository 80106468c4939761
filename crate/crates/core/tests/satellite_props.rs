mod common;

use common::*;
use proptest::prelude::*;
use rees_core::chart_geometry::*;
use rees_core::exact_poly::{Monomial, Poly};
use rees_core::rees_core::{normalize_gens, ord_couple, Couple, Payload};
use rees_core::satellite_invariants::*;
use rees_core::Field;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn factorization_remultiplies(raws in prop::collection::vec(raw_poly(3, 3, 3), 1..=3), shift in prop::collection::vec(0u32..3, 3)) {
        let qq = q();
        let m = Monomial::from_exponents(&shift);
        let j: Vec<_> = raws.iter().map(|r| build(&qq, 3, r)).filter(|f| !f.is_zero())
            .map(|f| f.mul_monomial(&m, &qq.one())).collect();
        prop_assume!(!j.is_empty());
        let divisors: Vec<_> = (0..3).map(|v| Hypersurface { name: format!("H{}", v + 1), var: Some(v), origin: DivisorOrigin::Exceptional(v + 1) }).collect();
        let ft = factor_exceptional(&j, &divisors);
        prop_assert_eq!(ft.remultiply(), normalize_gens(j.clone()));
        for (v, f) in ft.exponents.iter().enumerate() {
            prop_assert!(f.b >= shift[v]);
            prop_assert!(ft.residual.iter().any(|g| g.var_valuation(v) == 0));
        }
    }

    #[test]
    fn word_never_exceeds_order(seed in any::<u64>(), b in 1u32..=2) {
        let f5 = fp(5);
        let mut rng = seeded(seed);
        let f = random_poly(&mut rng, &f5, 2, 3, 3);
        let x = Poly::var(&f5, 2, 0);
        let j = vec![&(&x * &x) * &f];
        let couple = Couple::new(&f5, 2, j.clone(), b).unwrap();
        let h = Hypersurface { name: "H1".into(), var: Some(0), origin: DivisorOrigin::Exceptional(1) };
        let ft = factor_exceptional(&j, &[h]);
        for pt in brute_sing(&f5, 2, &[(j[0].clone(), b)]) {
            let w = w_ord(&ft, b, &pt).unwrap();
            prop_assert!(w <= ord_couple(&couple, &pt));
            let oracle = brute_order(&ft.residual[0], &pt).unwrap();
            prop_assert_eq!(w, num_rational::Rational64::new(oracle as i64, b as i64));
        }
    }

    #[test]
    fn monomial_objects_resolve_within_bound(a in 0u32..4, c in 0u32..4, b in 1u32..=3) {
        prop_assume!(a + c >= b);
        let qq = q();
        let f = Poly::monomial(&qq, Monomial::from_exponents(&[a, c]), qq.one());
        let obj = BasicObject::new(var_names(2), Payload::Couple(Couple::new(&qq, 2, vec![f], b).unwrap()), &[0, 1]).unwrap();
        let res = monomial_resolve(&obj).unwrap();
        prop_assert!(res.max_depth as u32 <= a + c);
        for leaf in &res.leaves {
            prop_assert!(leaf.sing().is_empty());
            check_total_transform(leaf).unwrap();
        }
        let again = monomial_resolve(&obj).unwrap();
        prop_assert_eq!(res.steps, again.steps);
    }

    #[test]
    fn birth_index_points_at_last_change(words in prop::collection::vec(0i64..3, 1..8)) {
        let s0 = birth_index(&words);
        let last = *words.last().unwrap();
        prop_assert!(words[s0..].iter().all(|&w| w == last));
        prop_assert!(s0 == 0 || words[s0 - 1] != last);
    }
}
