//! Sparse multivariate polynomials over a [`Field`], graded-lex ordered.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::ring::RingElement;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then lexicographically with the first variable most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn quotient(&self, divisor: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&divisor.0).map(|(a, b)| a - b).collect())
    }

    fn product(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub type Vars = Arc<[String]>;

pub fn vars<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    vars: Vars,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(field: Field, vars: &Vars) -> Self {
        Polynomial {
            field,
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: Field, vars: &Vars, c: Scalar) -> Self {
        let mut p = Self::zero(field, vars);
        p.add_term(Monomial::one(vars.len()), c);
        p
    }

    pub fn one(field: Field, vars: &Vars) -> Self {
        Self::constant(field, vars, field.one())
    }

    pub fn var(field: Field, vars: &Vars, index: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[index] = 1;
        Self::monomial(field, vars, e, field.one())
    }

    pub fn var_named(field: Field, vars: &Vars, name: &str) -> Result<Self> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Self::var(field, vars, i))
    }

    pub fn monomial(field: Field, vars: &Vars, exponents: Vec<u32>, c: Scalar) -> Self {
        assert_eq!(exponents.len(), vars.len(), "exponent vector length");
        let mut p = Self::zero(field, vars);
        p.add_term(Monomial(exponents), c);
        p
    }

    pub fn from_terms(field: Field, vars: &Vars, terms: impl IntoIterator<Item = (Vec<u32>, Scalar)>) -> Self {
        let mut p = Self::zero(field, vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&vec![0; self.vars.len()])
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Scalar {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms.keys().map(|m| m.0[index]).max().unwrap_or(0)
    }

    /// Leading term under graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut p = Self::zero(self.field, &self.vars);
        if c.is_zero() {
            return p;
        }
        p.terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        p
    }

    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Self {
        let mut p = Self::zero(self.field, &self.vars);
        if c.is_zero() {
            return p;
        }
        p.terms = self.terms.iter().map(|(n, a)| (n.product(m), a * c)).collect();
        p
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field, &self.vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial(&self, index: usize) -> Self {
        let mut p = Self::zero(self.field, &self.vars);
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e == 0 {
                continue;
            }
            let mut d = m.clone();
            d.0[index] -= 1;
            p.add_term(d, c * &self.field.from_i64(e as i64));
        }
        p
    }

    /// Multivariate division with remainder by a list of divisors
    /// (graded-lex). For a single univariate divisor this is long division.
    pub fn reduce(&self, divisors: &[Polynomial]) -> Result<(Vec<Polynomial>, Polynomial)> {
        for d in divisors {
            self.check_compatible(d)?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
        }
        let mut quotients = vec![Self::zero(self.field, &self.vars); divisors.len()];
        let mut remainder = Self::zero(self.field, &self.vars);
        let mut p = self.clone();
        while let Some((lm, lc)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            let mut divided = false;
            for (d, q) in divisors.iter().zip(quotients.iter_mut()) {
                let (dm, dc) = d.leading_term().expect("nonzero divisor");
                if dm.divides(&lm) {
                    let m = lm.quotient(dm);
                    let c = lc.checked_div(dc)?;
                    q.add_term(m.clone(), c.clone());
                    p = &p - &d.mul_term(&m, &c);
                    divided = true;
                    break;
                }
            }
            if !divided {
                p.terms.remove(&lm);
                remainder.add_term(lm, lc);
            }
        }
        Ok((quotients, remainder))
    }

    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let (mut q, r) = self.reduce(std::slice::from_ref(divisor))?;
        Ok((q.pop().expect("one quotient"), r))
    }

    /// Largest `e` with `var^e` dividing every term.
    pub fn var_valuation(&self, index: usize) -> u32 {
        self.terms.keys().map(|m| m.0[index]).min().unwrap_or(0)
    }

    /// Exact division by `var^e`; panics if some term has a smaller exponent.
    pub fn div_var_power(&self, index: usize, e: u32) -> Self {
        let mut p = Self::zero(self.field, &self.vars);
        for (m, c) in &self.terms {
            let mut d = m.clone();
            d.0[index] = d.0[index].checked_sub(e).expect("var power divides");
            p.terms.insert(d, c.clone());
        }
        p
    }

    /// Groups terms by their exponents in `indices`. Each coefficient is a
    /// polynomial (same variable list) free of those variables.
    pub fn split_by(&self, indices: &[usize]) -> BTreeMap<Vec<u32>, Polynomial> {
        let mut out: BTreeMap<Vec<u32>, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<u32> = indices.iter().map(|&i| m.0[i]).collect();
            let mut rest = m.clone();
            for &i in indices {
                rest.0[i] = 0;
            }
            out.entry(key)
                .or_insert_with(|| Self::zero(self.field, &self.vars))
                .add_term(rest, c.clone());
        }
        out
    }

    /// Substitutes `images[i]` for variable `i`.
    pub fn evaluate<R: RingElement>(&self, images: &[R], one: &R) -> R {
        assert_eq!(images.len(), self.vars.len(), "one image per variable");
        let mut powers: Vec<Vec<R>> = images.iter().map(|_| vec![one.clone()]).collect();
        let mut acc = one.zero_like();
        for (m, c) in &self.terms {
            let mut t = one.scalar_like(c);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().expect("nonempty").times(&images[i]);
                    powers[i].push(next);
                }
                t = t.times(&powers[i][e as usize]);
            }
            acc = acc.plus(&t);
        }
        acc
    }

    /// Re-expresses the polynomial over a different variable list containing
    /// every variable that actually occurs.
    pub fn with_vars(&self, target: &Vars) -> Result<Self> {
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| target.iter().position(|t| t == v))
            .collect();
        let mut p = Self::zero(self.field, target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| Error::UnknownVariable(self.vars[i].clone()))?;
                e[j] += k;
            }
            p.add_term(Monomial(e), c.clone());
        }
        Ok(p)
    }

    /// Variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.vars.len()).filter(|&i| self.degree_in(i) > 0).collect()
    }

    pub fn check_compatible(&self, other: &Polynomial) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.vars != other.vars {
            return Err(Error::RingMismatch(format!(
                "variables ({}) vs ({})",
                self.vars.join(","),
                other.vars.join(",")
            )));
        }
        Ok(())
    }

    fn assert_compatible(&self, other: &Polynomial) {
        if let Err(e) = self.check_compatible(other) {
            panic!("polynomial arithmetic across rings: {e}");
        }
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.assert_compatible(rhs);
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.assert_compatible(rhs);
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), -c);
        }
        p
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.assert_compatible(rhs);
        let mut p = Polynomial::zero(self.field, &self.vars);
        for (m, a) in &self.terms {
            for (n, b) in &rhs.terms {
                p.add_term(m.product(n), a * b);
            }
        }
        p
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-self.field.one())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl RingElement for Polynomial {
    fn zero_like(&self) -> Self {
        Polynomial::zero(self.field, &self.vars)
    }
    fn one_like(&self) -> Self {
        Polynomial::one(self.field, &self.vars)
    }
    fn scalar_like(&self, c: &Scalar) -> Self {
        Polynomial::constant(self.field, &self.vars, c.clone())
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn is_zero_element(&self) -> bool {
        self.is_zero()
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.check_compatible(other).is_ok()
    }
}

pub(crate) fn write_monomial(f: &mut fmt::Formatter<'_>, vars: &[String], m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (v, &e) in vars.iter().zip(&m.0) {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{v}")?;
        } else {
            write!(f, "{v}^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.degree() == 0 {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    if matches!(abs, Scalar::Rational(ref q) if !q.is_integer()) {
                        write!(f, "({abs})*")?;
                    } else {
                        write!(f, "{abs}*")?;
                    }
                }
                write_monomial(f, &self.vars, m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(field: Field, names: &[&str]) -> (Field, Vars) {
        (field, vars(names))
    }

    #[test]
    fn difference_of_squares() {
        let (f, v) = ring(Field::Rational, &["x", "y"]);
        let x = Polynomial::var(f, &v, 0);
        let y = Polynomial::var(f, &v, 1);
        let lhs = &(&x + &y) * &(&x - &y);
        let rhs = &(&x * &x) - &(&y * &y);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.to_string(), "x^2 - y^2");
    }

    #[test]
    fn long_division_over_f5() {
        let (f, v) = ring(Field::Prime(5), &["x"]);
        let x = Polynomial::var(f, &v, 0);
        let one = Polynomial::one(f, &v);
        let a = &x.pow(3) + &one;
        let b = &x + &one;
        let (q, r) = a.div_rem(&b).unwrap();
        // x^2 - x + 1 == x^2 + 4x + 1 over F5
        let expected = Polynomial::from_terms(f, &v, [(vec![2], f.one()), (vec![1], f.from_i64(4)), (vec![0], f.one())]);
        assert_eq!(q, expected);
        assert!(r.is_zero());
    }

    #[test]
    fn additive_identity() {
        let (f, v) = ring(Field::Rational, &["x", "y"]);
        let p = &Polynomial::var(f, &v, 0).pow(2) + &Polynomial::var(f, &v, 1);
        assert_eq!(&p + &Polynomial::zero(f, &v), p);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let (f, v) = ring(Field::Rational, &["x"]);
        let x = Polynomial::var(f, &v, 0);
        assert_eq!(x.div_rem(&Polynomial::zero(f, &v)), Err(Error::DivisionByZero));
    }

    #[test]
    fn grlex_leading_term() {
        let (f, v) = ring(Field::Rational, &["x", "y"]);
        let p = Polynomial::from_terms(f, &v, [(vec![3, 0], f.one()), (vec![1, 3], f.one()), (vec![0, 1], f.one())]);
        assert_eq!(p.leading_term().unwrap().0, &Monomial(vec![1, 3]));
    }

    #[test]
    fn multivariate_reduction_reconstructs() {
        let (f, v) = ring(Field::Rational, &["x", "y"]);
        let x = Polynomial::var(f, &v, 0);
        let y = Polynomial::var(f, &v, 1);
        let a = &(&x.pow(2) * &y) + &y.pow(3);
        let b = &(&x * &y) - &Polynomial::one(f, &v);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
    }

    #[test]
    fn partial_derivative_and_char_p() {
        let (f, v) = ring(Field::Prime(3), &["t"]);
        let t = Polynomial::var(f, &v, 0);
        assert!(t.pow(3).partial(0).is_zero());
        let (q, v2) = ring(Field::Rational, &["x", "Z"]);
        let z = Polynomial::var(q, &v2, 1);
        assert_eq!(z.pow(2).partial(1), z.scale(&q.from_i64(2)));
    }

    #[test]
    fn split_by_formal_variable() {
        let (f, v) = ring(Field::Rational, &["x", "y", "Z"]);
        let x = Polynomial::var(f, &v, 0);
        let y = Polynomial::var(f, &v, 1);
        let z = Polynomial::var(f, &v, 2);
        let p = &(&(&x * &y) * &z) + &z;
        let parts = p.split_by(&[1]);
        assert_eq!(parts[&vec![1]], &x * &z);
        assert_eq!(parts[&vec![0]], z);
    }
}
