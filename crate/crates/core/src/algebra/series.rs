//! Univariate power series truncated at `x^N`, and their Laurent shifts.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use super::ring::RingElement;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Order of vanishing. A truncation that is zero as far as it is known
/// reports `AtLeast(precision)`, never an infinite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Valuation {
    Exact(i64),
    AtLeast(i64),
}

impl Valuation {
    /// `Some(v >= bound)` when decidable from what is known.
    pub fn at_least(&self, bound: i64) -> Option<bool> {
        match *self {
            Valuation::Exact(v) => Some(v >= bound),
            Valuation::AtLeast(n) if n >= bound => Some(true),
            Valuation::AtLeast(_) => None,
        }
    }

    pub fn exact(&self) -> Option<i64> {
        match *self {
            Valuation::Exact(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match *self {
            Valuation::Exact(v) => serde_json::Value::from(v),
            Valuation::AtLeast(n) => serde_json::Value::String(format!(">= {n}")),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(n) => write!(f, "≥ {n}"),
        }
    }
}

/// `c_0 + c_1 x + … + c_{N-1} x^{N-1}` modulo `x^N`. Doubles as an element
/// of the ring `k[x]/(x^N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl TruncatedSeries {
    pub fn zero(field: Field, precision: usize) -> Self {
        TruncatedSeries {
            field,
            coeffs: vec![field.zero(); precision],
        }
    }

    pub fn one(field: Field, precision: usize) -> Self {
        Self::monomial(field, precision, 0, field.one())
    }

    pub fn variable(field: Field, precision: usize) -> Self {
        Self::monomial(field, precision, 1, field.one())
    }

    pub fn monomial(field: Field, precision: usize, order: usize, c: Scalar) -> Self {
        let mut s = Self::zero(field, precision);
        if order < precision {
            s.coeffs[order] = c;
        }
        s
    }

    /// Coefficients beyond `precision` are dropped; missing ones are zero.
    pub fn from_coeffs(field: Field, precision: usize, coeffs: &[Scalar]) -> Self {
        let mut s = Self::zero(field, precision);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c.clone();
        }
        s
    }

    /// The lacunary series `Σ_{i≥1} x^{(step·i)!}`.
    pub fn liouville(field: Field, precision: usize, step: u32) -> Self {
        let mut s = Self::zero(field, precision);
        let step = step.max(1) as u64;
        let mut i = 1u64;
        loop {
            let order = (1..=step * i).try_fold(1u64, |acc, k| acc.checked_mul(k));
            match order {
                Some(o) if (o as usize) < precision => {
                    s.coeffs[o as usize] = &s.coeffs[o as usize] + &field.one();
                }
                _ => break,
            }
            i += 1;
        }
        s
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coefficient(&self, order: usize) -> Scalar {
        self.coeffs.get(order).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(v) => Valuation::Exact(v as i64),
            None => Valuation::AtLeast(self.precision() as i64),
        }
    }

    fn check_precision(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.precision() != other.precision() {
            return Err(Error::PrecisionMismatch {
                left: self.precision(),
                right: other.precision(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_precision(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_precision(other)?;
        Ok(self * other)
    }

    /// Multiplicative inverse modulo `x^N`; requires valuation zero.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.coefficient(0);
        let inv0 = c0
            .inv()
            .ok_or_else(|| Error::NotInvertible(format!("series of valuation {}", self.valuation())))?;
        let n = self.precision();
        let mut out = vec![self.field.zero(); n];
        if n == 0 {
            return Ok(self.clone());
        }
        out[0] = inv0.clone();
        for k in 1..n {
            let mut acc = self.field.zero();
            for j in 1..=k {
                acc = &acc + &(&self.coeffs[j] * &out[k - j]);
            }
            out[k] = -&(&acc * &inv0);
        }
        Ok(TruncatedSeries {
            field: self.field,
            coeffs: out,
        })
    }

    /// Multiplication by `x^k` (precision kept, top coefficients dropped).
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.precision();
        let mut s = Self::zero(self.field, n);
        for i in 0..n.saturating_sub(k) {
            s.coeffs[i + k] = self.coeffs[i].clone();
        }
        s
    }

    /// Exact division by `x^k`. The result is known to precision `N - k`.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k > self.precision() {
            return Err(Error::PrecisionExhausted(format!(
                "dividing by x^{k} at precision {}",
                self.precision()
            )));
        }
        if self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(Error::NotInvertible(format!("x^{k} does not divide the series")));
        }
        Ok(TruncatedSeries {
            field: self.field,
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// Reduces the precision to `n ≤ N`.
    pub fn truncate(&self, n: usize) -> Self {
        TruncatedSeries {
            field: self.field,
            coeffs: self.coeffs[..n.min(self.precision())].to_vec(),
        }
    }

    /// Pads with zero coefficients up to precision `n`. Only meaningful for
    /// series known to be polynomials of degree `< N`.
    pub fn pad(&self, n: usize) -> Self {
        let mut s = Self::zero(self.field, n.max(self.precision()));
        for (slot, c) in s.coeffs.iter_mut().zip(&self.coeffs) {
            *slot = c.clone();
        }
        s
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        TruncatedSeries {
            field: self.field,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Sum of the terms of degree `≤ d`.
    pub fn head(&self, d: usize) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.iter_mut().skip(d + 1) {
            *c = self.field.zero();
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coeffs.iter().map(Scalar::to_json).collect())
    }
}

impl<'a> Add<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.precision(), rhs.precision(), "series precision mismatch");
        TruncatedSeries {
            field: self.field,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.precision(), rhs.precision(), "series precision mismatch");
        TruncatedSeries {
            field: self.field,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.precision(), rhs.precision(), "series precision mismatch");
        let n = self.precision();
        let mut out = vec![self.field.zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        TruncatedSeries {
            field: self.field,
            coeffs: out,
        }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            field: self.field,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl RingElement for TruncatedSeries {
    fn zero_like(&self) -> Self {
        Self::zero(self.field, self.precision())
    }
    fn one_like(&self) -> Self {
        Self::one(self.field, self.precision())
    }
    fn scalar_like(&self, c: &Scalar) -> Self {
        Self::monomial(self.field, self.precision(), 0, c.clone())
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
        self.check_precision(other).is_ok()
    }
}

fn write_series_terms(f: &mut fmt::Formatter<'_>, coeffs: &[Scalar], offset: i64, var: &str) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let order = offset + i as i64;
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        match (order, c.is_one()) {
            (0, _) => write!(f, "{c}")?,
            (1, true) => write!(f, "{var}")?,
            (1, false) => write!(f, "{c}*{var}")?,
            (o, true) => write!(f, "{var}^{o}")?,
            (o, false) => write!(f, "{c}*{var}^{o}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_series_terms(f, &self.coeffs, 0, "x")?;
        write!(f, " + O(x^{})", self.precision())
    }
}

/// `x^shift · body`, known modulo `x^(shift + body.precision())`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    shift: i64,
    body: TruncatedSeries,
}

impl LaurentSeries {
    pub fn new(shift: i64, body: TruncatedSeries) -> Self {
        LaurentSeries { shift, body }
    }

    pub fn from_series(s: TruncatedSeries) -> Self {
        Self::new(0, s)
    }

    pub fn field(&self) -> Field {
        self.body.field()
    }

    /// Exclusive bound on the orders whose coefficients are known.
    pub fn absolute_precision(&self) -> i64 {
        self.shift + self.body.precision() as i64
    }

    pub fn valuation(&self) -> Valuation {
        match self.body.valuation() {
            Valuation::Exact(v) => Valuation::Exact(self.shift + v),
            Valuation::AtLeast(_) => Valuation::AtLeast(self.absolute_precision()),
        }
    }

    /// `None` when `order` lies beyond the known precision.
    pub fn coefficient(&self, order: i64) -> Option<Scalar> {
        if order >= self.absolute_precision() {
            return None;
        }
        if order < self.shift {
            return Some(self.field().zero());
        }
        Some(self.body.coefficient((order - self.shift) as usize))
    }

    /// Coefficients of orders `lo..hi`.
    pub fn window(&self, lo: i64, hi: i64) -> Result<Vec<Scalar>> {
        (lo..hi)
            .map(|o| {
                self.coefficient(o).ok_or_else(|| {
                    Error::PrecisionExhausted(format!(
                        "coefficient of x^{o} requested, known below x^{}",
                        self.absolute_precision()
                    ))
                })
            })
            .collect()
    }

    /// `num / den` with `den` of exactly known valuation.
    pub fn quotient(num: &TruncatedSeries, den: &TruncatedSeries) -> Result<Self> {
        let v = match den.valuation() {
            Valuation::Exact(v) => v as usize,
            Valuation::AtLeast(n) => {
                return Err(Error::Indeterminate(format!("denominator vanishes modulo x^{n}")))
            }
        };
        let unit = den.shift_down(v)?;
        let inv = unit.invert()?;
        let body = &num.truncate(unit.precision()) * &inv;
        Ok(LaurentSeries {
            shift: -(v as i64),
            body,
        })
    }

    pub fn mul(&self, other: &LaurentSeries) -> LaurentSeries {
        let n = self.body.precision().min(other.body.precision());
        LaurentSeries {
            shift: self.shift + other.shift,
            body: &self.body.truncate(n) * &other.body.truncate(n),
        }
    }

    pub fn add(&self, other: &LaurentSeries) -> LaurentSeries {
        let shift = self.shift.min(other.shift);
        let top = self.absolute_precision().min(other.absolute_precision());
        let len = (top - shift).max(0) as usize;
        let coeffs: Vec<Scalar> = (shift..shift + len as i64)
            .map(|o| &self.coefficient(o).expect("in range") + &other.coefficient(o).expect("in range"))
            .collect();
        LaurentSeries {
            shift,
            body: TruncatedSeries::from_coeffs(self.field(), len, &coeffs),
        }
    }

    pub fn scale(&self, c: &Scalar) -> LaurentSeries {
        LaurentSeries {
            shift: self.shift,
            body: self.body.scale(c),
        }
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_series_terms(f, self.body.coeffs(), self.shift, "x")?;
        write!(f, " + O(x^{})", self.absolute_precision())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_by_leading_term() {
        let f = Field::Rational;
        let s = TruncatedSeries::from_coeffs(f, 8, &[f.zero(), f.zero(), f.zero(), f.one(), f.zero(), f.one()]);
        assert_eq!(s.valuation(), Valuation::Exact(3));
    }

    #[test]
    fn zero_truncation_reports_sentinel() {
        let s = TruncatedSeries::zero(Field::Rational, 8);
        assert_eq!(s.valuation(), Valuation::AtLeast(8));
        assert_eq!(s.valuation().to_string(), "≥ 8");
    }

    #[test]
    fn geometric_inverse() {
        let f = Field::Rational;
        let a = TruncatedSeries::from_coeffs(f, 4, &[f.one(), f.from_i64(-1)]);
        let inv = a.invert().unwrap();
        assert_eq!(inv, TruncatedSeries::from_coeffs(f, 4, &[f.one(), f.one(), f.one(), f.one()]));
        assert_eq!(&inv * &a, TruncatedSeries::one(f, 4));
    }

    #[test]
    fn invert_positive_valuation_fails() {
        let x = TruncatedSeries::variable(Field::Rational, 4);
        assert!(matches!(x.invert(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn precision_mismatch_is_reported() {
        let f = Field::Rational;
        let a = TruncatedSeries::one(f, 4);
        let b = TruncatedSeries::one(f, 5);
        assert_eq!(a.try_add(&b), Err(Error::PrecisionMismatch { left: 4, right: 5 }));
    }

    #[test]
    fn liouville_terms() {
        let f = Field::Prime(5);
        let z = TruncatedSeries::liouville(f, 24, 1);
        let support: Vec<usize> = (0..24).filter(|&i| !z.coefficient(i).is_zero()).collect();
        assert_eq!(support, vec![1, 2, 6]);
        let y = TruncatedSeries::liouville(f, 32, 2);
        let support: Vec<usize> = (0..32).filter(|&i| !y.coefficient(i).is_zero()).collect();
        assert_eq!(support, vec![2, 24]);
    }

    #[test]
    fn laurent_quotient_of_z_by_x() {
        let f = Field::Prime(5);
        let z = TruncatedSeries::liouville(f, 24, 1);
        let x = TruncatedSeries::variable(f, 24);
        let one = TruncatedSeries::one(f, 24);
        let q = LaurentSeries::quotient(&one, &x).unwrap();
        assert_eq!(q.valuation(), Valuation::Exact(-1));
        let zx = LaurentSeries::quotient(&z, &x).unwrap();
        assert_eq!(zx.valuation(), Valuation::Exact(0));
        assert_eq!(zx.coefficient(5), Some(f.one()));
        assert_eq!(zx.absolute_precision(), 22);
    }
}
