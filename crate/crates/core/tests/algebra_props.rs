use nagata_core::algebra::{
    linear_solve, smith_normal_form, EuclideanRing, Field, Matrix, Polynomial, RingElement, Scalar,
    TruncatedSeries, UniPoly, Valuation,
};
use nagata_core::algebra::poly::vars;
use proptest::prelude::*;

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::prime(5).unwrap()),
        Just(Field::prime(2_147_483_647).unwrap()),
        Just(Field::Rational),
    ]
}

fn scalar(field: Field) -> impl Strategy<Value = Scalar> {
    (-40i64..40, 1i64..7).prop_map(move |(n, d)| {
        field
            .fraction(n, d)
            .unwrap_or_else(|_| field.from_i64(n))
    })
}

fn poly2(field: Field) -> impl Strategy<Value = Polynomial> {
    let v = vars(&["x", "y"]);
    prop::collection::vec(((0u32..4, 0u32..4), -5i64..5), 0..6).prop_map(move |terms| {
        Polynomial::from_terms(
            field,
            &v,
            terms.into_iter().map(|((a, b), c)| (vec![a, b], field.from_i64(c))),
        )
    })
}

fn unipoly(field: Field, max_len: usize) -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-4i64..5, 0..max_len).prop_map(move |c| UniPoly::from_i64s(field, &c))
}

fn f5() -> Field {
    Field::prime(5).unwrap()
}

/// Laplace expansion along the first row.
fn det<T: RingElement>(m: &[Vec<T>]) -> T {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut acc = m[0][0].zero_like();
    for j in 0..m.len() {
        let minor: Vec<Vec<T>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, e)| e.clone()).collect())
            .collect();
        let term = m[0][j].times(&det(&minor));
        acc = if j % 2 == 0 { acc.plus(&term) } else { acc.minus(&term) };
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

/// Rank over a domain: size of the largest nonvanishing minor.
fn minor_rank<T: RingElement>(rows: &[Vec<T>]) -> usize {
    let (n, m) = (rows.len(), rows[0].len());
    (1..=n.min(m))
        .rev()
        .find(|&k| {
            subsets(n, k).iter().any(|r| {
                subsets(m, k).iter().any(|c| {
                    let sub: Vec<Vec<T>> =
                        r.iter().map(|&i| c.iter().map(|&j| rows[i][j].clone()).collect()).collect();
                    !det(&sub).is_zero_element()
                })
            })
        })
        .unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms(
        (a, b, c) in fields().prop_flat_map(|f| (scalar(f), scalar(f), scalar(f)))
    ) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        match a.inv() {
            Some(i) => prop_assert!((&a * &i).is_one()),
            None => prop_assert!(a.is_zero()),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn polynomial_ring_axioms(
        (a, b, c) in fields().prop_flat_map(|f| (poly2(f), poly2(f), poly2(f)))
    ) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if let (Some(da), Some(db)) = (a.total_degree(), b.total_degree()) {
            prop_assert_eq!((&a * &b).total_degree(), Some(da + db));
        }
    }

    #[test]
    fn division_reconstructs_the_dividend((a, b) in (poly2(f5()), poly2(f5()))) {
        match a.div_rem(&b) {
            Ok((q, r)) => {
                prop_assert_eq!(&(&q * &b) + &r, a);
                let (lead, _) = b.leading_term().unwrap();
                for (m, _) in r.terms() {
                    prop_assert!(!lead.divides(m));
                }
            }
            Err(_) => prop_assert!(b.is_zero()),
        }
    }

    #[test]
    fn unit_series_invert(
        head in 1i64..5,
        tail in prop::collection::vec(-4i64..5, 0..12),
        precision in 1usize..16,
    ) {
        let field = f5();
        let mut coeffs = vec![field.from_i64(head)];
        coeffs.extend(tail.iter().map(|&c| field.from_i64(c)));
        let a = TruncatedSeries::from_coeffs(field, precision, &coeffs);
        let inv = a.invert().unwrap();
        prop_assert_eq!(&a * &inv, TruncatedSeries::one(field, precision));
    }

    #[test]
    fn nonunit_series_do_not_invert(tail in prop::collection::vec(-4i64..5, 0..8)) {
        let field = f5();
        let mut coeffs = vec![field.zero()];
        coeffs.extend(tail.iter().map(|&c| field.from_i64(c)));
        let a = TruncatedSeries::from_coeffs(field, 8, &coeffs);
        prop_assert!(a.invert().is_err());
    }

    #[test]
    fn unipoly_smith_form_is_certified(
        rows in 1usize..4,
        cols in 1usize..4,
        entries in prop::collection::vec(unipoly(f5(), 3), 9),
    ) {
        let data: Vec<Vec<UniPoly>> =
            (0..rows).map(|i| (0..cols).map(|j| entries[i * 3 + j].clone()).collect()).collect();
        let m = Matrix::from_rows(data.clone(), UniPoly::zero(f5())).unwrap();
        let s = smith_normal_form(&m).unwrap();
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert!(s.u.mul(&s.u_inv).unwrap().is_identity());
        prop_assert!(s.v.mul(&s.v_inv).unwrap().is_identity());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!(w[1].div_rem(&w[0]).unwrap().1.is_zero());
            }
        }
        for d in s.invariant_factors() {
            prop_assert!(d.leading_coefficient().unwrap().is_one());
        }
        prop_assert_eq!(s.rank(), minor_rank(&data));
    }

    #[test]
    fn truncated_smith_form_is_certified(
        entries in prop::collection::vec(prop::collection::vec(-2i64..3, 0..6), 6),
    ) {
        let field = f5();
        let series = |c: &Vec<i64>| {
            let s: Vec<Scalar> = c.iter().map(|&x| field.from_i64(x)).collect();
            TruncatedSeries::from_coeffs(field, 6, &s)
        };
        let data: Vec<Vec<TruncatedSeries>> =
            (0..2).map(|i| (0..3).map(|j| series(&entries[i * 3 + j])).collect()).collect();
        let m = Matrix::from_rows(data, TruncatedSeries::zero(field, 6)).unwrap();
        let s = smith_normal_form(&m).unwrap();
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert!(s.verify(&m).unwrap());
        let vals: Vec<Option<i64>> = s.diagonal().iter().map(|d| match d.valuation() {
            Valuation::Exact(v) => Some(v),
            _ => None,
        }).collect();
        // Valuations increase along the diagonal, zeros last.
        for w in vals.windows(2) {
            match (w[0], w[1]) {
                (Some(a), Some(b)) => prop_assert!(a <= b),
                (None, Some(_)) => prop_assert!(false, "zero before nonzero: {:?}", vals),
                _ => {}
            }
        }
        for d in s.invariant_factors() {
            prop_assert_eq!(d.normalizing_unit().0, TruncatedSeries::one(field, 6));
        }
    }

    #[test]
    fn linear_solve_is_exact(
        (rows, cols) in (1usize..5, 1usize..5),
        entries in prop::collection::vec(-3i64..4, 16),
        target in prop::collection::vec(-3i64..4, 4),
        field in fields(),
    ) {
        let data: Vec<Vec<Scalar>> = (0..rows)
            .map(|i| (0..cols).map(|j| field.from_i64(entries[i * 4 + j])).collect())
            .collect();
        let m = Matrix::from_rows(data.clone(), field.zero()).unwrap();
        let b: Vec<Scalar> = target[..rows].iter().map(|&t| field.from_i64(t)).collect();
        let sol = linear_solve(&m, &b).unwrap();
        let rank = minor_rank(&data);
        prop_assert_eq!(sol.kernel.len(), cols - rank);
        for k in &sol.kernel {
            prop_assert!(m.mul_vec(k).unwrap().iter().all(Scalar::is_zero));
        }
        let augmented: Vec<Vec<Scalar>> =
            data.iter().zip(&b).map(|(r, t)| r.iter().chain([t]).cloned().collect()).collect();
        match sol.solution {
            Some(v) => prop_assert_eq!(m.mul_vec(&v).unwrap(), b),
            None => prop_assert!(minor_rank(&augmented) > rank),
        }
    }
}
