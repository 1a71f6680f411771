use nagata_core::algebra::{Field, LocalFraction};
use nagata_core::twisted::{Answer, Scenario};
use nagata_core::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f5() -> Field {
    Field::prime(5).unwrap()
}

fn scenario(precision: usize) -> Scenario {
    Scenario::goodearl_lenagan(f5(), precision).unwrap()
}

/// A polynomial in the variables of the base ring `k[x, y]`.
fn base_text() -> impl Strategy<Value = String> {
    prop::collection::vec((1i64..5, 0u32..4, 0u32..3), 1..4).prop_map(|terms| {
        terms
            .iter()
            .map(|(c, a, b)| format!("{c}*x^{a}*y^{b}"))
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

fn answer(sc: &Scenario, f: &LocalFraction) -> Option<Answer> {
    match sc.membership(f) {
        Ok(v) => Some(v.answer),
        Err(Error::Indeterminate(_)) | Err(Error::PrecisionExhausted(_)) => None,
        Err(e) => panic!("{f}: {e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn base_elements_are_members(text in base_text(), shift in 0u32..3) {
        let sc = scenario(24);
        let f = sc.element(&text).unwrap();
        let verdict = sc.membership(&f).unwrap();
        prop_assert_eq!(verdict.answer, Answer::Yes);
        prop_assert!(verdict.derivative.is_zero());
        // A unit of A in the denominator does not change anything.
        let g = sc.element(&format!("({text})/(1 + x^{shift}*y)")).unwrap();
        prop_assert_eq!(sc.membership(&g).unwrap().answer, Answer::Yes);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn members_are_closed_under_ring_operations(seed in any::<u64>()) {
        let sc = scenario(24);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs = sc.sample_member_pairs(3, &mut rng).unwrap();
        for (f, g) in pairs {
            for h in [f.try_add(&g).unwrap(), f.try_mul(&g).unwrap(), f.try_sub(&g).unwrap()] {
                prop_assert_ne!(answer(&sc, &h), Some(Answer::No), "{} from {} and {}", h, f, g);
            }
        }
    }

    #[test]
    fn verdicts_are_stable_under_more_precision(seed in any::<u64>(), extra in 1usize..12) {
        let (low, high) = (scenario(16), scenario(16 + extra));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for f in low.sample_elements(6, &mut rng) {
            if let Some(a) = answer(&low, &f) {
                if a != Answer::Indeterminate {
                    prop_assert_eq!(answer(&high, &f), Some(a), "{}", f);
                }
            }
        }
    }

    #[test]
    fn larger_lattices_give_larger_rings(seed in any::<u64>(), t in -4i64..4, gap in 0i64..4) {
        let tight = scenario(24).with_threshold(Some(t));
        let loose = scenario(24).with_threshold(Some(t - gap));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for f in tight.sample_elements(6, &mut rng) {
            if answer(&tight, &f) == Some(Answer::Yes) {
                prop_assert_eq!(answer(&loose, &f), Some(Answer::Yes), "{}", f);
            }
            if answer(&loose, &f) == Some(Answer::No) {
                prop_assert_eq!(answer(&tight, &f), Some(Answer::No), "{}", f);
            }
        }
    }

    #[test]
    fn intermediate_lattices_are_recovered(seed in any::<u64>(), t in -4i64..=0) {
        let sc = scenario(24);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = sc.sample_elements(8, &mut rng);
        let report = sc.intermediate_correspondence(Some(t), &samples).unwrap();
        prop_assert!(report.pass, "{:?}", report);
        prop_assert_eq!(report.recovered, Some(t));
        prop_assert!(report.contains_base_members);
    }

    #[test]
    fn kq_generators_depend_only_on_valuation(
        v in 1u32..10,
        unit in 1i64..5,
        tail in base_text(),
    ) {
        let sc = scenario(24);
        let plain = sc.kq_generators(&sc.element(&format!("x^{v}")).unwrap()).unwrap();
        let a = sc.element(&format!("x^{v}*({unit} + x*({tail}) + y*({tail}))")).unwrap();
        let report = sc.kq_generators(&a).unwrap();
        prop_assert_eq!(report.valuation, v as i64);
        prop_assert_eq!(&report, &plain);
    }
}

#[test]
fn twist_variable_alone_fails_only_below_the_lattice() {
    let sc = scenario(24);
    let z = sc.element("Z").unwrap();
    assert_eq!(sc.membership(&z).unwrap().answer, Answer::Yes);
    let zx = sc.element("Z/x").unwrap();
    assert_eq!(sc.membership(&zx).unwrap().answer, Answer::No);
    let loose = scenario(24).with_threshold(Some(-1));
    assert_eq!(loose.membership(&zx).unwrap().answer, Answer::Yes);
}
