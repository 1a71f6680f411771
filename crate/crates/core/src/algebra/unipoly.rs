//! Dense univariate polynomials `k[x]`, the Euclidean ring behind Smith forms.

use std::fmt;

use super::ring::RingElement;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    /// Little-endian; no trailing zeros.
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn zero(field: Field) -> Self {
        UniPoly { field, coeffs: vec![] }
    }

    pub fn constant(field: Field, c: Scalar) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field, field.one())
    }

    pub fn x(field: Field) -> Self {
        Self::from_coeffs(field, vec![field.zero(), field.one()])
    }

    pub fn from_coeffs(field: Field, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn from_i64s(field: Field, coeffs: &[i64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coefficient(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Self {
        match self.leading_coefficient().and_then(Scalar::inv) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_coeffs(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn div_rem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let lc_inv = divisor
            .leading_coefficient()
            .ok_or(Error::DivisionByZero)?
            .inv()
            .expect("nonzero leading coefficient");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(self.field), self.clone()));
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * d);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::from_coeffs(self.field, quot), Self::from_coeffs(self.field, rem)))
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    /// Irreducibility over a prime field by trial division with every monic
    /// polynomial of degree at most half the degree.
    pub fn is_irreducible(&self) -> Result<bool> {
        let p = match self.field {
            Field::Prime(p) => p,
            Field::Rational => {
                return match self.degree() {
                    Some(1) => Ok(true),
                    _ => Err(Error::UnsupportedBase(
                        "irreducibility over Q is only decided for linear polynomials".into(),
                    )),
                }
            }
        };
        let n = match self.degree() {
            None | Some(0) => return Ok(false),
            Some(n) => n,
        };
        for d in 1..=n / 2 {
            let count = (p as u128).pow(d as u32);
            if count > 1 << 20 {
                return Err(Error::UnsupportedBase(format!("trial division over F{p} in degree {d}")));
            }
            for idx in 0..count as u64 {
                let mut coeffs = Vec::with_capacity(d + 1);
                let mut k = idx;
                for _ in 0..d {
                    coeffs.push(self.field.from_i64((k % p) as i64));
                    k /= p;
                }
                coeffs.push(self.field.one());
                let cand = UniPoly::from_coeffs(self.field, coeffs);
                if self.div_rem(&cand)?.1.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(match (i, c.is_one()) {
                (0, _) => c.to_string(),
                (_, true) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        parts.join(" + ")
    }
}

impl RingElement for UniPoly {
    fn zero_like(&self) -> Self {
        Self::zero(self.field)
    }
    fn one_like(&self) -> Self {
        Self::one(self.field)
    }
    fn scalar_like(&self, c: &Scalar) -> Self {
        Self::constant(self.field, c.clone())
    }
    fn plus(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::from_coeffs(self.field, (0..n).map(|i| &self.coefficient(i) + &rhs.coefficient(i)).collect())
    }
    fn minus(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::from_coeffs(self.field, (0..n).map(|i| &self.coefficient(i) - &rhs.coefficient(i)).collect())
    }
    fn times(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::from_coeffs(self.field, out)
    }
    fn negated(&self) -> Self {
        self.scale(&-self.field.one())
    }
    fn is_zero_element(&self) -> bool {
        self.is_zero()
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.field == other.field
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_reconstructs() {
        let f = Field::Rational;
        let a = UniPoly::from_i64s(f, &[1, 0, 0, 1]);
        let b = UniPoly::from_i64s(f, &[1, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, UniPoly::from_i64s(f, &[1, -1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn irreducibility_over_f5() {
        let f = Field::Prime(5);
        // x^2 + 2 has no roots mod 5 (squares are 0,1,4).
        assert!(UniPoly::from_i64s(f, &[2, 0, 1]).is_irreducible().unwrap());
        // x^2 - 1 = (x-1)(x+1)
        assert!(!UniPoly::from_i64s(f, &[-1, 0, 1]).is_irreducible().unwrap());
        assert!(UniPoly::from_i64s(f, &[-2, 1]).is_irreducible().unwrap());
    }

    #[test]
    fn gcd_is_monic() {
        let f = Field::Rational;
        let a = UniPoly::from_i64s(f, &[0, 2, 2]); // 2x(x+1)
        let b = UniPoly::from_i64s(f, &[0, 0, 3]); // 3x^2
        assert_eq!(a.gcd(&b), UniPoly::x(f));
    }
}
