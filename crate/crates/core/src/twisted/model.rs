//! The finite model `S/(x^m, y^(d+1)) ⋆ K/x^m K` and the map
//! `r ↦ (r, D(r))` into it.

use crate::algebra::finite::{monomial_label, FiniteAlgebra, FiniteModule, Vector};
use crate::algebra::fraction::LocalFraction;
use crate::algebra::matrix::{Matrix, Subspace};
use crate::algebra::series::TruncatedSeries;
use crate::error::{Error, Result};
use crate::idealization::IdealizationModel;

use super::{Answer, Scenario};

#[derive(Clone, Debug)]
pub struct QuotientModel {
    level: u32,
    exps: Vec<Vec<u32>>,
    model: IdealizationModel,
    lattice_start: i64,
}

impl QuotientModel {
    /// The model at level `m`. The formal variables are cut off above
    /// degree `d`, which needs `(d+1)·val(y) ≥ m` for every formal `y`.
    pub fn new(sc: &Scenario, m: u32) -> Result<Self> {
        let d = sc.y_degree();
        if m == 0 {
            return Err(Error::Precondition("level must be positive".into()));
        }
        if m as usize >= sc.precision() {
            return Err(Error::PrecisionExhausted(format!("level {m} at precision {}", sc.precision())));
        }
        let v0 = sc.threshold().ok_or_else(|| Error::Precondition("K = K_C has no finite quotient model".into()))?;
        let field = sc.field();
        let mut names = vec![sc.series_var().to_string()];
        let mut bounds = vec![m];
        for y in sc.formal_vars() {
            let val = sc.image(y).expect("formal variable").valuation();
            if val.at_least(m.div_ceil(d + 1) as i64) != Some(true) {
                return Err(Error::Precondition(format!(
                    "degree bound {d} too small for level {m}: {y}^{} does not vanish modulo x^{m}",
                    d + 1
                )));
            }
            names.push(y.to_string());
            bounds.push(d + 1);
        }
        let mut exps: Vec<Vec<u32>> = vec![vec![]];
        for &b in &bounds {
            exps = exps
                .into_iter()
                .flat_map(|e| {
                    (0..b).map(move |k| {
                        let mut e2 = e.clone();
                        e2.push(k);
                        e2
                    })
                })
                .collect();
        }
        let base = FiniteAlgebra::monomial_box(field, &names, &bounds)?;
        debug_assert!(exps.iter().enumerate().all(|(i, e)| base.labels()[i] == monomial_label(&names, e)));
        let n = sc.precision();
        let x = sc.image(sc.series_var()).expect("series variable").clone();
        let formal: Vec<TruncatedSeries> = sc.formal_vars().iter().map(|y| sc.image(y).expect("formal").clone()).collect();
        let action = exps
            .iter()
            .map(|e| {
                let mut s = TruncatedSeries::one(field, n);
                for _ in 0..e[0] {
                    s = &s * &x;
                }
                for (y, &k) in formal.iter().zip(&e[1..]) {
                    for _ in 0..k {
                        s = &s * y;
                    }
                }
                let mut a = Matrix::zeros(m as usize, m as usize, field.zero());
                for c in 0..m as usize {
                    for r in c..m as usize {
                        a[(r, c)] = s.coefficient(r - c);
                    }
                }
                a
            })
            .collect();
        let labels = (0..m as i64).map(|c| format!("x^{}", v0 + c)).collect();
        let module = FiniteModule::from_action(field, labels, action)?;
        let model = IdealizationModel::new(base, module)?;
        Ok(QuotientModel {
            level: m,
            exps,
            model,
            lattice_start: v0,
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn model(&self) -> &IdealizationModel {
        &self.model
    }

    pub fn ring_dim(&self) -> usize {
        self.model.base().dim()
    }

    pub fn lattice_dim(&self) -> usize {
        self.model.module().dim()
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    /// The image of `f ∈ S` in `S/(x^m, y^(d+1))`.
    pub fn ring_image(&self, sc: &Scenario, f: &LocalFraction) -> Result<Vector> {
        let (e, num, den) = sc.split(f)?;
        let base = self.model.base();
        let to_vec = |parts: &std::collections::BTreeMap<Vec<u32>, TruncatedSeries>| -> Result<Vector> {
            let mut v = base.zero_vector();
            for (b, s) in parts {
                let shifted = s.shift_down(e).map_err(|err| match err {
                    Error::NotInvertible(m) => Error::NotInRing(m),
                    other => other,
                })?;
                if shifted.precision() < self.level as usize {
                    return Err(Error::PrecisionExhausted(format!(
                        "level {} needs precision {} after removing x^{e}",
                        self.level,
                        self.level as usize + e
                    )));
                }
                for a in 0..self.level {
                    let mut key = vec![a];
                    key.extend_from_slice(b);
                    if let Some(i) = self.exps.iter().position(|x| x == &key) {
                        v[i] = &v[i] + &shifted.coefficient(a as usize);
                    }
                }
            }
            Ok(v)
        };
        let n = to_vec(&num)?;
        let d = to_vec(&den)?;
        let inv = base
            .inverse(&d)
            .ok_or_else(|| Error::NonUnitDenominator(format!("{} is not a unit modulo x^{}", f.denominator(), self.level)))?;
        Ok(base.mul(&n, &inv))
    }

    /// The class of the embedded `D(f)` in `K/x^m K`; requires `D(f) ∈ K`.
    pub fn lattice_image(&self, sc: &Scenario, f: &LocalFraction) -> Result<Vector> {
        let (_, series) = sc.derivative_series(f)?;
        match series {
            None => Ok(self.model.module().zero_vector()),
            Some(s) => s.window(self.lattice_start, self.lattice_start + self.level as i64),
        }
    }

    /// `f(r) = (r, D(r))` for a member `r` of `R`.
    pub fn image(&self, sc: &Scenario, r: &LocalFraction) -> Result<Vector> {
        let v = sc.membership(r)?;
        match v.answer {
            Answer::Yes => {}
            Answer::No => return Err(Error::NotAMember(format!("{r} is not in R"))),
            Answer::Indeterminate => {
                return Err(Error::Indeterminate(format!("membership of {r} at precision {}", sc.precision())))
            }
        }
        self.model.pair(&self.ring_image(sc, r)?, &self.lattice_image(sc, r)?)
    }

    /// `(ideal of the ring part generated by ring_gens) ⊕ K/x^m K`.
    pub fn ring_ideal_plus_lattice(&self, ring_gens: &[Vector]) -> Subspace {
        let base = self.model.base();
        let span = base.ideal_span(ring_gens);
        let nb = base.dim();
        let total = self.dim();
        let mut out = Subspace::zero(base.field(), total);
        for b in span.basis() {
            let mut v = b.clone();
            v.extend(std::iter::repeat(base.field().zero()).take(total - nb));
            out.insert(&v);
        }
        out.sum(&self.model.module_ideal())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::Field;

    fn gl() -> Scenario {
        Scenario::goodearl_lenagan(Field::Prime(5), 24).unwrap()
    }

    fn labelled(q: &QuotientModel, v: &[crate::algebra::scalar::Scalar]) -> Vec<String> {
        q.model()
            .algebra()
            .labels()
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(l, c)| format!("{c}{l}"))
            .collect()
    }

    #[test]
    fn images_at_level_one() {
        let sc = gl();
        let q = QuotientModel::new(&sc, 1).unwrap();
        assert_eq!(q.dim(), 7 + 1);
        let z = q.image(&sc, &sc.element("Z").unwrap()).unwrap();
        assert_eq!(labelled(&q, &z), vec!["1(0,x^0)"]);
        let y = q.image(&sc, &sc.element("y").unwrap()).unwrap();
        assert_eq!(labelled(&q, &y), vec!["1(y,0)"]);
        let x = q.image(&sc, &sc.element("x").unwrap()).unwrap();
        assert!(x.iter().all(|c| c.is_zero()));
        let one = q.image(&sc, &sc.element("1").unwrap()).unwrap();
        assert_eq!(&one, q.model().algebra().one());
    }

    #[test]
    fn z_squared_maps_to_zero_mod_x() {
        let sc = gl();
        let q = QuotientModel::new(&sc, 1).unwrap();
        let z = q.image(&sc, &sc.element("Z").unwrap()).unwrap();
        let zz = q.image(&sc, &sc.element("Z^2").unwrap()).unwrap();
        assert_eq!(q.model().star_mul(&z, &z), zz);
        assert!(zz.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn non_members_rejected() {
        let sc = gl();
        let q = QuotientModel::new(&sc, 1).unwrap();
        assert!(matches!(q.image(&sc, &sc.element("Z/x").unwrap()), Err(Error::NotAMember(_))));
    }

    #[test]
    fn degree_bound_must_cover_level() {
        let sc = gl().with_y_degree(0);
        assert!(QuotientModel::new(&sc, 2).is_ok());
        assert!(matches!(QuotientModel::new(&sc, 3), Err(Error::Precondition(_))));
    }
}
