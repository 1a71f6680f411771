//! Local idealization models `k[t]_N/N² ⋆ (k[t]/N)^e` at finitely many
//! maximal ideals `N` of a univariate polynomial ring over a finite field.

use serde::Serialize;

use crate::algebra::finite::{FiniteAlgebra, FiniteModule, LocalModel};
use crate::algebra::matrix::unit_vector;
use crate::algebra::scalar::Field;
use crate::algebra::unipoly::UniPoly;
use crate::error::{Error, Result};
use crate::idealization::IdealizationModel;

pub const MAX_PRIMES: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct GlobalStableSpec {
    field: Field,
    variable: String,
    primes: Vec<UniPoly>,
    ranks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeReport {
    pub prime: String,
    pub rank: usize,
    pub embedding_dimension: usize,
    pub expected: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GlobalStableReport {
    pub pass: bool,
    pub primes: Vec<PrimeReport>,
}

impl GlobalStableSpec {
    /// Primes are given by generators; each must be irreducible and the
    /// generators pairwise non-associate.
    pub fn new(field: Field, variable: &str, primes: Vec<UniPoly>, ranks: Vec<usize>) -> Result<Self> {
        if !matches!(field, Field::Prime(_)) {
            return Err(Error::UnsupportedBase("the base field must be finite".into()));
        }
        if primes.len() != ranks.len() {
            return Err(Error::DimensionMismatch {
                expected: primes.len(),
                found: ranks.len(),
            });
        }
        if primes.is_empty() || primes.len() > MAX_PRIMES {
            return Err(Error::Precondition(format!("between 1 and {MAX_PRIMES} primes are supported")));
        }
        let mut monic: Vec<UniPoly> = Vec::new();
        for g in &primes {
            if g.field() != field {
                return Err(Error::FieldMismatch);
            }
            if !g.is_irreducible()? {
                return Err(Error::NotMaximal(format!("({}) is not a maximal ideal", g.display_in(variable))));
            }
            let m = g.monic();
            if monic.contains(&m) {
                return Err(Error::Precondition(format!("prime ({}) listed twice", g.display_in(variable))));
            }
            monic.push(m);
        }
        Ok(GlobalStableSpec {
            field,
            variable: variable.to_string(),
            primes: monic,
            ranks,
        })
    }

    pub fn primes(&self) -> &[UniPoly] {
        &self.primes
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// The local model at the `i`-th prime.
    pub fn local_model(&self, i: usize) -> Result<LocalModel> {
        let g = &self.primes[i];
        let deg = g.degree().expect("irreducible");
        let base = FiniteAlgebra::univariate_quotient(&g.times_self(), &self.variable)?;
        let g_vec: Vec<_> = (0..base.dim()).map(|k| g.coefficient(k)).collect();
        let ideal = base.ideal_span(std::slice::from_ref(&g_vec));
        let piece = FiniteModule::from_ideal(&base, &ideal)?;
        let mut module = FiniteModule::zero(&base);
        for _ in 0..self.ranks[i] {
            module = module.direct_sum(&piece)?;
        }
        let m = IdealizationModel::new(base.clone(), module)?;
        let total = m.dim();
        let mut gens = vec![m.pair(&g_vec, &m.module().zero_vector())?];
        gens.extend((base.dim()..total).map(|k| unit_vector(self.field, total, k)));
        LocalModel::with_max_ideal(m.algebra().clone(), &gens, deg)
    }
}

trait Square {
    fn times_self(&self) -> Self;
}

impl Square for UniPoly {
    fn times_self(&self) -> Self {
        use crate::algebra::ring::RingElement;
        self.times(self)
    }
}

/// Embedding dimension of each local model, expected to be `e + 1`.
pub fn global_stable_instance(spec: &GlobalStableSpec) -> Result<GlobalStableReport> {
    let mut primes = Vec::new();
    for i in 0..spec.primes.len() {
        let emb = spec.local_model(i)?.embedding_dimension()?;
        primes.push(PrimeReport {
            prime: spec.primes[i].display_in(&spec.variable),
            rank: spec.ranks[i],
            embedding_dimension: emb,
            expected: spec.ranks[i] + 1,
        });
    }
    Ok(GlobalStableReport {
        pass: primes.iter().all(|p| p.embedding_dimension == p.expected),
        primes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Field {
        Field::Prime(5)
    }

    fn linear(a: i64) -> UniPoly {
        UniPoly::from_i64s(f5(), &[-a, 1])
    }

    #[test]
    fn three_primes() {
        let spec = GlobalStableSpec::new(f5(), "t", vec![linear(0), linear(1), linear(2)], vec![1, 2, 3]).unwrap();
        let r = global_stable_instance(&spec).unwrap();
        assert!(r.pass);
        let dims: Vec<usize> = r.primes.iter().map(|p| p.embedding_dimension).collect();
        assert_eq!(dims, vec![2, 3, 4]);
    }

    #[test]
    fn rank_zero_and_quadratic_prime() {
        let irreducible = UniPoly::from_i64s(f5(), &[2, 0, 1]);
        let spec = GlobalStableSpec::new(f5(), "t", vec![linear(0), irreducible], vec![0, 2]).unwrap();
        let r = global_stable_instance(&spec).unwrap();
        let dims: Vec<usize> = r.primes.iter().map(|p| p.embedding_dimension).collect();
        assert_eq!(dims, vec![1, 3]);
    }

    #[test]
    fn invalid_specs() {
        let reducible = UniPoly::from_i64s(f5(), &[-1, 0, 1]);
        assert!(matches!(
            GlobalStableSpec::new(f5(), "t", vec![reducible], vec![1]),
            Err(Error::NotMaximal(_))
        ));
        assert!(GlobalStableSpec::new(f5(), "t", vec![linear(1), linear(1).scale(&f5().from_i64(2))], vec![1, 1]).is_err());
        assert!(GlobalStableSpec::new(Field::Rational, "t", vec![], vec![]).is_err());
        assert!(GlobalStableSpec::new(f5(), "t", vec![linear(1)], vec![]).is_err());
    }
}
