//! Fractions `p/q` in a localization of a polynomial ring at a prime
//! generated by a subset of the variables.

use std::fmt;

use super::poly::{Monomial, Polynomial, Vars};
use super::ring::RingElement;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct LocalFraction {
    num: Polynomial,
    den: Polynomial,
    /// Indices of the variables generating the prime; empty means the
    /// fraction field.
    prime: Vec<usize>,
}

impl LocalFraction {
    pub fn new(num: Polynomial, den: Polynomial, prime: &[usize]) -> Result<Self> {
        num.check_compatible(&den)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(&i) = prime.iter().find(|&&i| i >= num.vars().len()) {
            return Err(Error::UnsupportedPrime(format!("variable index {i} out of range")));
        }
        let mut prime = prime.to_vec();
        prime.sort_unstable();
        prime.dedup();
        let out = LocalFraction { num, den, prime }.normalized();
        if !out.prime.is_empty() && !outside_prime(&out.den, &out.prime) {
            return Err(Error::NonUnitDenominator(format!("{} lies in the prime", out.den)));
        }
        Ok(out)
    }

    /// Localization data given by variable names; names that are not
    /// variables are rejected.
    pub fn prime_indices(vars: &Vars, names: &[String]) -> Result<Vec<usize>> {
        names
            .iter()
            .map(|n| {
                vars.iter()
                    .position(|v| v == n)
                    .ok_or_else(|| Error::UnsupportedPrime(format!("'{n}' is not a variable; only primes generated by variables are supported")))
            })
            .collect()
    }

    pub fn from_poly(p: Polynomial, prime: &[usize]) -> Self {
        let one = Polynomial::one(p.field(), p.vars());
        LocalFraction::new(p, one, prime).expect("unit denominator")
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn prime(&self) -> &[usize] {
        &self.prime
    }

    pub fn field(&self) -> Field {
        self.num.field()
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial this fraction equals, if the denominator is constant.
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        self.den.is_constant().then(|| {
            let inv = self.den.constant_term().inv().expect("nonzero");
            self.num.scale(&inv)
        })
    }

    fn check(&self, other: &Self) -> Result<()> {
        self.num.check_compatible(&other.num)?;
        if self.prime != other.prime {
            return Err(Error::RingMismatch("fractions localized at different primes".into()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Ok(LocalFraction {
            num,
            den: &self.den * &other.den,
            prime: self.prime.clone(),
        }
        .normalized())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(LocalFraction {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
            prime: self.prime.clone(),
        }
        .normalized())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.negated())
    }

    /// Inverse inside the localization; fails when the numerator is in the prime.
    pub fn inverse(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        LocalFraction::new(self.den.clone(), self.num.clone(), &self.prime)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.try_mul(&other.inverse()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        LocalFraction {
            num: self.num.pow(e),
            den: self.den.pow(e),
            prime: self.prime.clone(),
        }
        .normalized()
    }

    /// Same fraction read in the fraction field (prime data dropped).
    pub fn in_fraction_field(&self) -> Self {
        LocalFraction {
            num: self.num.clone(),
            den: self.den.clone(),
            prime: vec![],
        }
    }

    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            self.den = Polynomial::one(self.num.field(), self.num.vars());
            return self;
        }
        let g = monomial_gcd(&self.num, &self.den);
        if g.degree() > 0 {
            for (i, &e) in g.0.iter().enumerate() {
                if e > 0 {
                    self.num = self.num.div_var_power(i, e);
                    self.den = self.den.div_var_power(i, e);
                }
            }
        }
        let lc = self.den.leading_term().map(|(_, c)| c.clone()).expect("nonzero");
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero");
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
        self
    }
}

fn outside_prime(den: &Polynomial, prime: &[usize]) -> bool {
    den.terms().any(|(m, _)| prime.iter().all(|&i| m.0[i] == 0))
}

fn monomial_gcd(a: &Polynomial, b: &Polynomial) -> Monomial {
    let n = a.vars().len();
    let mut g: Option<Vec<u32>> = None;
    for (m, _) in a.terms().chain(b.terms()) {
        g = Some(match g {
            None => m.0.clone(),
            Some(cur) => cur.iter().zip(&m.0).map(|(x, y)| *x.min(y)).collect(),
        });
    }
    Monomial(g.unwrap_or_else(|| vec![0; n]))
}

impl PartialEq for LocalFraction {
    fn eq(&self, other: &Self) -> bool {
        self.num.vars() == other.num.vars()
            && self.num.field() == other.num.field()
            && &self.num * &other.den == &other.num * &self.den
    }
}

impl RingElement for LocalFraction {
    fn zero_like(&self) -> Self {
        LocalFraction::from_poly(Polynomial::zero(self.field(), self.vars()), &self.prime)
    }
    fn one_like(&self) -> Self {
        LocalFraction::from_poly(Polynomial::one(self.field(), self.vars()), &self.prime)
    }
    fn scalar_like(&self, c: &Scalar) -> Self {
        LocalFraction::from_poly(Polynomial::constant(self.field(), self.vars(), c.clone()), &self.prime)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.try_add(rhs).expect("compatible fractions")
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.try_sub(rhs).expect("compatible fractions")
    }
    fn times(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("compatible fractions")
    }
    fn negated(&self) -> Self {
        LocalFraction {
            num: -&self.num,
            den: self.den.clone(),
            prime: self.prime.clone(),
        }
    }
    fn is_zero_element(&self) -> bool {
        self.num.is_zero()
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.check(other).is_ok()
    }
}

impl fmt::Display for LocalFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Polynomial| {
            if p.num_terms() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        if self.den.is_constant() && self.den.constant_term().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::vars;

    fn setup() -> (Field, Vars) {
        (Field::Prime(5), vars(&["x", "y", "Z"]))
    }

    #[test]
    fn cross_multiplication_equality() {
        let (f, v) = setup();
        let x = Polynomial::var(f, &v, 0);
        let y = Polynomial::var(f, &v, 1);
        let one = Polynomial::one(f, &v);
        let a = LocalFraction::new(&x * &y, &(&one + &x) * &x, &[0, 1]).unwrap();
        let b = LocalFraction::new(y.clone(), &one + &x, &[0, 1]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.denominator(), b.denominator());
    }

    #[test]
    fn denominator_in_prime_rejected() {
        let (f, v) = setup();
        let x = Polynomial::var(f, &v, 0);
        let one = Polynomial::one(f, &v);
        assert!(matches!(
            LocalFraction::new(one.clone(), x.clone(), &[0, 1]),
            Err(Error::NonUnitDenominator(_))
        ));
        assert!(LocalFraction::new(one, x, &[]).is_ok());
    }

    #[test]
    fn non_variable_prime_rejected() {
        let (_, v) = setup();
        assert!(matches!(
            LocalFraction::prime_indices(&v, &["x+y".to_string()]),
            Err(Error::UnsupportedPrime(_))
        ));
    }

    #[test]
    fn arithmetic_round_trip() {
        let (f, v) = setup();
        let z = Polynomial::var(f, &v, 2);
        let one = Polynomial::one(f, &v);
        let a = LocalFraction::new(one.clone(), &one + &z, &[0, 1, 2]).unwrap();
        let back = a.try_mul(&LocalFraction::from_poly(&one + &z, &[0, 1, 2])).unwrap();
        assert_eq!(back, a.one_like());
        assert_eq!(a.try_sub(&a).unwrap(), a.zero_like());
    }
}
