mod common;

use common::*;
use proptest::prelude::*;
use rees_core::diff_ops::*;
use rees_core::rees_core::*;

fn small_algebra(seed: u64) -> ReesAlgebra<rees_core::PrimeField> {
    let f5 = fp(5);
    let mut rng = seeded(seed);
    let k = 1 + (seed % 2) as usize;
    let gens = (0..k).map(|i| (random_poly(&mut rng, &f5, 2, 3, 2), 1 + i as u32)).collect();
    ReesAlgebra::new(&f5, 2, gens).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn saturation_contains_input_and_is_closed(seed in any::<u64>()) {
        let g = small_algebra(seed);
        let sat = diff_saturate(&g);
        prop_assert!(algebra_contains(&sat, &g).unwrap());
        prop_assert!(is_diff_algebra(&sat).unwrap());
    }

    #[test]
    fn saturation_is_idempotent(seed in any::<u64>()) {
        let sat = diff_saturate(&small_algebra(seed));
        let again = diff_saturate(&sat);
        prop_assert!(algebras_equal_up_to(&sat, &again, sat.max_weight()).unwrap());
    }

    #[test]
    fn saturation_keeps_sing(seed in any::<u64>()) {
        let f5 = fp(5);
        let g = small_algebra(seed);
        let sat = diff_saturate(&g);
        prop_assert!(sing_rees(&sat).same_as(&sing_rees(&g)));
        prop_assert_eq!(locus_points(&sing_rees(&sat), &f5), brute_sing(&f5, 2, &g.weighted()));
    }

    #[test]
    fn relative_saturation_is_relative(seed in any::<u64>(), v in 0usize..2) {
        let g = small_algebra(seed);
        let rel = diff_saturate_along(&g, &[v]);
        prop_assert!(is_relative_diff_algebra(&rel, &[v]).unwrap());
        prop_assert!(algebra_contains(&diff_saturate(&g), &rel).unwrap());
    }
}
