use nagata_core::algebra::matrix::{add_vectors, Subspace};
use nagata_core::algebra::{Field, FiniteAlgebra, FiniteModule, LocalModel, RingElement, Scalar, TruncatedSeries, Vector};
use nagata_core::idealization::{IdealizationElement, IdealizationModel};
use proptest::prelude::*;

fn f5() -> Field {
    Field::prime(5).unwrap()
}

#[derive(Clone, Copy, Debug)]
enum ModuleKind {
    Free(usize),
    MaxIdeal,
    FreePlusMaxIdeal,
}

fn base(degree: u32) -> FiniteAlgebra {
    let names = ["X".to_string(), "Y".to_string()];
    FiniteAlgebra::truncated_polynomial(f5(), &names, degree).unwrap()
}

fn module(alg: &FiniteAlgebra, kind: ModuleKind) -> FiniteModule {
    let max_ideal = LocalModel::identify(alg.clone()).unwrap().max_ideal().clone();
    match kind {
        ModuleKind::Free(r) => FiniteModule::free(alg, r),
        ModuleKind::MaxIdeal => FiniteModule::from_ideal(alg, &max_ideal).unwrap(),
        ModuleKind::FreePlusMaxIdeal => FiniteModule::free(alg, 1)
            .direct_sum(&FiniteModule::from_ideal(alg, &max_ideal).unwrap())
            .unwrap(),
    }
}

fn kinds() -> impl Strategy<Value = ModuleKind> {
    prop_oneof![
        (0usize..3).prop_map(ModuleKind::Free),
        Just(ModuleKind::MaxIdeal),
        Just(ModuleKind::FreePlusMaxIdeal),
    ]
}

fn model(degree: u32, kind: ModuleKind) -> IdealizationModel {
    let a = base(degree);
    let m = module(&a, kind);
    IdealizationModel::new(a, m).unwrap()
}

fn vector(coords: &[i64], n: usize) -> Vector {
    coords.iter().cycle().take(n).map(|&c| f5().from_i64(c)).collect()
}

fn coords() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..3, 1..40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn model_is_a_commutative_ring(
        degree in 1u32..3,
        kind in kinds(),
        (a, b, c) in (coords(), coords(), coords()),
    ) {
        let r = model(degree, kind);
        let n = r.dim();
        let (a, b, c) = (vector(&a, n), vector(&b, n), vector(&c, n));
        prop_assert_eq!(r.star_mul(&a, &b), r.star_mul(&b, &a));
        prop_assert_eq!(
            r.star_mul(&r.star_mul(&a, &b), &c),
            r.star_mul(&a, &r.star_mul(&b, &c))
        );
        prop_assert_eq!(
            r.star_mul(&a, &add_vectors(&b, &c)),
            add_vectors(&r.star_mul(&a, &b), &r.star_mul(&a, &c))
        );
        prop_assert_eq!(r.star_mul(r.algebra().one(), &a), a);
    }

    #[test]
    fn product_follows_the_pair_rule(
        degree in 1u32..3,
        kind in kinds(),
        (a, b) in (coords(), coords()),
    ) {
        let r = model(degree, kind);
        let n = r.dim();
        let (u, v) = (vector(&a, n), vector(&b, n));
        let ((a1, l1), (a2, l2)) = (r.split(&u), r.split(&v));
        let ring = r.base().mul(&a1, &a2);
        let module = add_vectors(&r.module().act(&a1, &l2), &r.module().act(&a2, &l1));
        prop_assert_eq!(r.star_mul(&u, &v), r.pair(&ring, &module).unwrap());
    }

    #[test]
    fn module_part_squares_to_zero(degree in 1u32..3, kind in kinds(), (a, b) in (coords(), coords())) {
        let r = model(degree, kind);
        let m = r.module().dim();
        let zero = r.base().zero_vector();
        let u = r.pair(&zero, &vector(&a, m)).unwrap();
        let v = r.pair(&zero, &vector(&b, m)).unwrap();
        prop_assert!(r.star_mul(&u, &v).iter().all(Scalar::is_zero));
        let ideal = r.module_ideal();
        prop_assert_eq!(ideal.dim(), m);
        prop_assert!(r.algebra().is_ideal(&ideal));
        prop_assert_eq!(r.algebra().product_span(&ideal, &ideal).dim(), 0);
    }

    #[test]
    fn ideal_span_is_a_closure(
        degree in 1u32..3,
        kind in kinds(),
        gens in prop::collection::vec(coords(), 0..4),
        extra in coords(),
    ) {
        let r = model(degree, kind);
        let n = r.dim();
        let gens: Vec<Vector> = gens.iter().map(|g| vector(g, n)).collect();
        let span = r.ideal_span(&gens);
        for g in &gens {
            prop_assert!(span.contains(g));
        }
        prop_assert!(r.algebra().is_ideal(&span));
        prop_assert_eq!(r.ideal_span(span.basis()), span.clone());
        let mut more = gens.clone();
        more.push(vector(&extra, n));
        prop_assert!(r.ideal_span(&more).contains_space(&span));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn embedding_dimension_adds_minimal_generators(degree in 1u32..4, kind in kinds()) {
        let a = base(degree);
        let m = module(&a, kind);
        let local = LocalModel::identify(a.clone()).unwrap();
        let fibre = m.dim() - m.ideal_times_module(local.max_ideal()).dim();
        prop_assert_eq!(local.minimal_generators(&m).unwrap(), fibre);
        let r = IdealizationModel::new(a, m).unwrap();
        prop_assert_eq!(
            r.embedding_dimension().unwrap(),
            local.embedding_dimension().unwrap() + fibre
        );
    }
}

fn series(c: &[i64]) -> TruncatedSeries {
    let s: Vec<Scalar> = c.iter().map(|&x| f5().from_i64(x)).collect();
    TruncatedSeries::from_coeffs(f5(), 6, &s)
}

fn pair() -> impl Strategy<Value = IdealizationElement<TruncatedSeries>> {
    (coords(), coords(), coords())
        .prop_map(|(a, l1, l2)| IdealizationElement::new(series(&a), vec![series(&l1), series(&l2)]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn series_pairs_form_a_ring((a, b, c) in (pair(), pair(), pair())) {
        let ab = a.star_mul(&b).unwrap();
        prop_assert_eq!(&ab, &b.star_mul(&a).unwrap());
        prop_assert_eq!(ab.star_mul(&c).unwrap(), a.star_mul(&b.star_mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.star_mul(&b.try_add(&c).unwrap()).unwrap(),
            ab.try_add(&a.star_mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(ab.ring_part(), &(a.ring_part() * b.ring_part()));
        let pure = IdealizationElement::new(a.ring_part().zero_like(), a.module_part().clone());
        prop_assert!(pure.star_mul(&pure).unwrap().is_zero_element());
        prop_assert_eq!(a.one_like().star_mul(&a).unwrap(), a.clone());
    }
}

#[test]
fn zero_module_gives_back_the_base() {
    let a = base(2);
    let r = IdealizationModel::new(a.clone(), FiniteModule::zero(&a)).unwrap();
    assert_eq!(r.dim(), a.dim());
    assert_eq!(r.module_ideal(), Subspace::zero(f5(), a.dim()));
}
