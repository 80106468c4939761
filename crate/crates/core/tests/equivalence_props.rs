mod common;

use common::*;
use proptest::prelude::*;
use rees_core::chart_geometry::BasicObject;
use rees_core::equivalence_lab::*;
use rees_core::exact_poly::{Monomial, Poly};
use rees_core::rees_core::{Couple, Payload};
use rees_core::{Field, Rationals};

fn couple_object(f: Poly<Rationals>, b: u32) -> BasicObject<Rationals> {
    let payload = Payload::Couple(Couple::new(&q(), 2, vec![f], b).unwrap());
    BasicObject::new(var_names(2), payload, &[]).unwrap()
}

fn x_power(a: u32, c: u32) -> Poly<Rationals> {
    Poly::monomial(&q(), Monomial::from_exponents(&[a, c]), q().one())
}

fn probes() -> Vec<Vec<num_rational::BigRational>> {
    [[0, 0], [1, 0], [0, 1], [-1, 1]].iter().map(|p| p.iter().map(|&c| q().from_i64(c)).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn squaring_a_couple_is_never_separated(raw in raw_poly(2, 3, 3), b in 1u32..=2) {
        let f = build(&q(), 2, &raw);
        prop_assume!(!f.is_zero());
        let a = couple_object(f.clone(), b);
        let sq = couple_object(f.pow(2), 2 * b);
        prop_assert!(!weak_equiv_fuzz(&a, &sq, 1, 60).unwrap().is_witness());
        prop_assert!(ord_consequence_check(&a, &sq, &probes()).unwrap());
    }

    #[test]
    fn witnesses_replay(a in 2u32..=4, c in 2u32..=4, y in 0u32..2) {
        prop_assume!(a != c);
        let one = couple_object(x_power(a, y), 2);
        let two = couple_object(x_power(c, y), 2);
        let out = weak_equiv_fuzz(&one, &two, 2, DEFAULT_BUDGET).unwrap();
        let FuzzOutcome::Witness { steps, .. } = out else {
            return Err(TestCaseError::fail("expected a witness"));
        };
        prop_assert!(replay_witness(&one, &two, &steps).unwrap());
        prop_assert!(!ord_consequence_check(&one, &two, &probes()).unwrap());
    }
}
