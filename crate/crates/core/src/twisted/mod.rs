//! Subrings `R = S ∩ D⁻¹(K)` of a ring `S` embedded in truncated power
//! series, cut out by a derivation `D` and a valuation lattice `K`.
//!
//! Elements are fractions in the variables of `S`. The series variable is
//! sent to `x`, every formal variable to a lacunary series, and the twist
//! variable (the one `D` does not kill) to its declared image.

mod checks;
mod global;
mod model;

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

pub use checks::{
    AlphaReport, AlphaWitness, AnalyticReport, AssocPrimeReport, ClosureReport, CorrespondenceReport, KqReport,
    OneCaseReport,
};
pub use global::{global_stable_instance, GlobalStableReport, GlobalStableSpec, PrimeReport};
pub use model::QuotientModel;

use crate::algebra::fraction::LocalFraction;
use crate::algebra::poly::Polynomial;
use crate::algebra::presentation::RingPresentation;
use crate::algebra::scalar::{Field, Scalar};
use crate::algebra::series::{LaurentSeries, TruncatedSeries, Valuation};
use crate::derivations::DerivationSpec;
use crate::dsl::expr::parse_fraction;
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: usize = 24;
pub const DEFAULT_Y_DEGREE: u32 = 6;
pub const DEFAULT_MAX_EXPONENT: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Indeterminate,
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Indeterminate => "indeterminate",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MembershipVerdict {
    pub element: LocalFraction,
    pub answer: Answer,
    /// Valuation of the embedded derivative; `None` when the derivative is
    /// identically zero.
    pub valuation: Option<Valuation>,
    pub derivative: LocalFraction,
}

impl MembershipVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "element": self.element.to_string(),
            "answer": self.answer,
            "valuation": self.valuation.as_ref().map(Valuation::to_json),
            "derivative": self.derivative.to_string(),
        })
    }
}

/// The data of a twisted subring together with its truncation parameters.
#[derive(Clone, Debug)]
pub struct Scenario {
    field: Field,
    precision: usize,
    ring: RingPresentation,
    derivation: DerivationSpec,
    series_var: usize,
    twist_var: usize,
    formal_vars: Vec<usize>,
    images: Vec<TruncatedSeries>,
    /// The constant `D(Z)`.
    slope: Scalar,
    /// Lower valuation bound defining `K`; `None` means `K = K_C`.
    threshold: Option<i64>,
    y_degree: u32,
    max_exponent: u32,
}

/// Valuation data of an element of `S`: `f = (num/x^e) / (den/x^e)` with
/// the second factor a unit of `S`.
struct SplitForm {
    shift: usize,
    num: SeriesTerms,
    den: SeriesTerms,
}

/// Series coefficients keyed by the exponents of the formal variables.
pub(crate) type SeriesTerms = BTreeMap<Vec<u32>, TruncatedSeries>;

impl Scenario {
    /// `A = k[x,y]_(x,y)`, `S = A[Z]` with `Z ↦ Σ x^(i!)`, `y ↦ Σ x^((2i)!)`,
    /// `D = ∂/∂Z` and `K = {val ≥ 0}`.
    pub fn goodearl_lenagan(field: Field, precision: usize) -> Result<Self> {
        let a = RingPresentation::polynomial(field, &["x", "y"])?.localize(&["x", "y"])?;
        let s = a.adjoin("Z", TruncatedSeries::liouville(field, precision, 1))?;
        let d = DerivationSpec::partial(s, "Z")?;
        Scenario::new(d, "x", Some(0), &BTreeMap::new())
    }

    /// Builds a scenario from a derivation on a ring with one explicitly
    /// embedded variable. The derivation must send that variable to a
    /// nonzero constant and kill every other variable. Formal variables
    /// without an entry in `formal_images` get lacunary series.
    pub fn new(
        derivation: DerivationSpec,
        series_var: &str,
        threshold: Option<i64>,
        formal_images: &BTreeMap<String, TruncatedSeries>,
    ) -> Result<Self> {
        let ring = derivation.domain().clone();
        let field = ring.field();
        if !ring.relations().is_empty() {
            return Err(Error::Precondition("scenario rings must be free of relations".into()));
        }
        let vars = ring.vars().clone();
        let series_var = vars
            .iter()
            .position(|v| v == series_var)
            .ok_or_else(|| Error::UnknownVariable(series_var.to_string()))?;
        let moving: Vec<usize> = (0..vars.len()).filter(|&i| !derivation.images()[i].is_zero()).collect();
        let twist_var = match moving.as_slice() {
            [i] => *i,
            _ => {
                return Err(Error::InvalidDerivation(format!(
                    "exactly one variable must have a nonzero image, found {}",
                    moving.len()
                )))
            }
        };
        let image = &derivation.images()[twist_var];
        if !image.is_constant() {
            return Err(Error::InvalidDerivation(format!("image {image} of {} is not a constant", vars[twist_var])));
        }
        let slope = image.constant_term();
        if twist_var == series_var {
            return Err(Error::InvalidDerivation("the series variable must be killed".into()));
        }
        let twist_image = ring.images().get(&vars[twist_var]).cloned().ok_or_else(|| {
            Error::Precondition(format!("variable {} has no series image", vars[twist_var]))
        })?;
        let precision = twist_image.precision();
        if precision < 2 {
            return Err(Error::Precondition("precision must be at least 2".into()));
        }
        for name in formal_images.keys() {
            if !ring.has_var(name) {
                return Err(Error::UnknownVariable(name.clone()));
            }
        }
        let mut formal_vars = Vec::new();
        let mut images = Vec::with_capacity(vars.len());
        for (i, name) in vars.iter().enumerate() {
            let img = if i == series_var {
                TruncatedSeries::variable(field, precision)
            } else if i == twist_var {
                twist_image.clone()
            } else {
                formal_vars.push(i);
                let k = formal_vars.len() as u32;
                match formal_images.get(name).or_else(|| ring.images().get(name)) {
                    Some(s) => s.clone(),
                    None => TruncatedSeries::liouville(field, precision, 2 * k),
                }
            };
            if img.field() != field {
                return Err(Error::FieldMismatch);
            }
            if img.precision() != precision {
                return Err(Error::PrecisionMismatch {
                    left: precision,
                    right: img.precision(),
                });
            }
            if img.valuation().at_least(1) != Some(true) {
                return Err(Error::Precondition(format!("image of {name} must have positive valuation")));
            }
            images.push(img);
        }
        Ok(Scenario {
            field,
            precision,
            ring,
            derivation,
            series_var,
            twist_var,
            formal_vars,
            images,
            slope,
            threshold,
            y_degree: DEFAULT_Y_DEGREE,
            max_exponent: DEFAULT_MAX_EXPONENT,
        })
    }

    pub fn with_threshold(mut self, threshold: Option<i64>) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn with_y_degree(mut self, d: u32) -> Self {
        self.y_degree = d;
        self
    }

    pub fn with_max_exponent(mut self, m: u32) -> Self {
        self.max_exponent = m.max(1);
        self
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn ring(&self) -> &RingPresentation {
        &self.ring
    }

    pub fn derivation(&self) -> &DerivationSpec {
        &self.derivation
    }

    pub fn threshold(&self) -> Option<i64> {
        self.threshold
    }

    pub fn y_degree(&self) -> u32 {
        self.y_degree
    }

    pub fn max_exponent(&self) -> u32 {
        self.max_exponent
    }

    pub fn series_var(&self) -> &str {
        &self.ring.vars()[self.series_var]
    }

    pub fn twist_var(&self) -> &str {
        &self.ring.vars()[self.twist_var]
    }

    pub fn formal_vars(&self) -> Vec<&str> {
        self.formal_vars.iter().map(|&i| self.ring.vars()[i].as_str()).collect()
    }

    pub fn image(&self, name: &str) -> Option<&TruncatedSeries> {
        self.ring.vars().iter().position(|v| v == name).map(|i| &self.images[i])
    }

    pub fn slope(&self) -> &Scalar {
        &self.slope
    }

    /// Parses an element written in the variables of `S`.
    pub fn element(&self, text: &str) -> Result<LocalFraction> {
        parse_fraction(text, self.field, self.ring.vars())
    }

    pub fn from_poly(&self, p: Polynomial) -> LocalFraction {
        LocalFraction::from_poly(p, &[])
    }

    pub(crate) fn x_power(&self, e: i64) -> LocalFraction {
        let x = self.var(self.series_var);
        if e >= 0 {
            self.from_poly(x.pow(e as u32))
        } else {
            LocalFraction::new(Polynomial::one(self.field, self.ring.vars()), x.pow((-e) as u32), &[]).expect("nonzero")
        }
    }

    pub(crate) fn series_var_index(&self) -> usize {
        self.series_var
    }

    pub(crate) fn twist_var_index(&self) -> usize {
        self.twist_var
    }

    pub(crate) fn formal_var_indices(&self) -> &[usize] {
        &self.formal_vars
    }

    pub(crate) fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(self.field, self.ring.vars(), i)
    }

    pub(crate) fn conform(&self, f: &LocalFraction) -> Result<LocalFraction> {
        if f.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        if f.vars() == self.ring.vars() && f.prime().is_empty() {
            return Ok(f.clone());
        }
        let num = f.numerator().with_vars(self.ring.vars())?;
        let den = f.denominator().with_vars(self.ring.vars())?;
        LocalFraction::new(num, den, &[])
    }

    pub fn embed_poly(&self, p: &Polynomial) -> Result<TruncatedSeries> {
        let p = p.with_vars(self.ring.vars())?;
        Ok(p.evaluate(&self.images, &TruncatedSeries::one(self.field, self.precision)))
    }

    /// The image of a fraction in truncated Laurent series.
    pub fn embed(&self, f: &LocalFraction) -> Result<LaurentSeries> {
        let f = self.conform(f)?;
        LaurentSeries::quotient(&self.embed_poly(f.numerator())?, &self.embed_poly(f.denominator())?)
    }

    fn split_poly(&self, p: &Polynomial) -> Result<BTreeMap<Vec<u32>, TruncatedSeries>> {
        p.split_by(&self.formal_vars)
            .into_iter()
            .map(|(b, c)| Ok((b, self.embed_poly(&c)?)))
            .collect()
    }

    fn split_form(&self, f: &LocalFraction) -> Result<SplitForm> {
        let den = self.split_poly(f.denominator())?;
        let mut shift = i64::MAX;
        for s in den.values() {
            match s.valuation() {
                Valuation::Exact(v) => shift = shift.min(v),
                Valuation::AtLeast(_) => {
                    return Err(Error::Indeterminate(format!(
                        "a coefficient of the denominator of {f} vanishes modulo x^{}",
                        self.precision
                    )))
                }
            }
        }
        let zero_key = vec![0u32; self.formal_vars.len()];
        let d0 = den.get(&zero_key).map(|s| s.valuation().exact());
        if d0 != Some(Some(shift)) {
            return Err(Error::NonUnitDenominator(format!("{} is not a unit of S", f.denominator())));
        }
        let num = self.split_poly(f.numerator())?;
        for s in num.values() {
            match s.valuation() {
                Valuation::Exact(v) if v < shift => {
                    return Err(Error::NotInRing(format!("{f} has a pole of order {} along x", shift - v)))
                }
                Valuation::AtLeast(b) if b < shift => {
                    return Err(Error::Indeterminate(format!(
                        "cannot decide whether {f} lies in S at precision {}",
                        self.precision
                    )))
                }
                _ => {}
            }
        }
        Ok(SplitForm {
            shift: shift as usize,
            num,
            den,
        })
    }

    /// Fails with [`Error::NotInRing`] when `f` is not an element of `S`.
    pub fn check_in_s(&self, f: &LocalFraction) -> Result<()> {
        self.split_form(&self.conform(f)?).map(|_| ())
    }

    pub fn in_s(&self, f: &LocalFraction) -> bool {
        self.check_in_s(f).is_ok()
    }

    /// The embedded derivative, or `None` when `D(f)` is identically zero.
    pub fn derivative_series(&self, f: &LocalFraction) -> Result<(LocalFraction, Option<LaurentSeries>)> {
        let f = self.conform(f)?;
        let d = self.derivation.derive_fraction(&f)?;
        if d.is_zero() {
            return Ok((d, None));
        }
        let series = self.embed(&d)?;
        Ok((d, Some(series)))
    }

    /// Decides whether `f ∈ S` lies in `R = S ∩ D⁻¹(K)`.
    pub fn membership(&self, f: &LocalFraction) -> Result<MembershipVerdict> {
        self.membership_at(f, self.threshold)
    }

    pub(crate) fn membership_at(&self, f: &LocalFraction, threshold: Option<i64>) -> Result<MembershipVerdict> {
        let f = self.conform(f)?;
        self.split_form(&f)?;
        let (derivative, series) = self.derivative_series(&f)?;
        let valuation = series.map(|s| s.valuation());
        let answer = match (&valuation, threshold) {
            (None, _) | (_, None) => Answer::Yes,
            (Some(Valuation::Exact(v)), Some(t)) => {
                if *v >= t {
                    Answer::Yes
                } else {
                    Answer::No
                }
            }
            (Some(Valuation::AtLeast(b)), Some(t)) => {
                if *b >= t {
                    Answer::Yes
                } else {
                    Answer::Indeterminate
                }
            }
        };
        Ok(MembershipVerdict {
            element: f,
            answer,
            valuation,
            derivative,
        })
    }

    /// An element `s ∈ S` with `D(s) = x^(-k)`: `x^(-k)·Z/λ` when `k ≤ 0`,
    /// and `(Z − p)/(λ·x^k)` with `p` the degree-`k` head of the image of
    /// `Z` otherwise.
    pub fn shift_element(&self, k: i64) -> Result<LocalFraction> {
        if k >= self.precision as i64 {
            return Err(Error::PrecisionExhausted(format!(
                "a witness with pole order {k} needs precision above {}",
                self.precision
            )));
        }
        let inv = self.slope.inv().expect("nonzero slope");
        let z = self.var(self.twist_var).scale(&inv);
        if k <= 0 {
            return Ok(self.from_poly(&z * &self.var(self.series_var).pow((-k) as u32)));
        }
        let head = self.images[self.twist_var].head(k as usize);
        let tail = &self.images[self.twist_var] - &head;
        if tail.valuation().at_least(k) != Some(true) {
            return Err(Error::WitnessNotFound(format!("image of Z minus its head has valuation below {k}")));
        }
        let x = self.var(self.series_var);
        let p = Polynomial::from_terms(
            self.field,
            self.ring.vars(),
            head.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| {
                let mut e = vec![0u32; self.ring.vars().len()];
                e[self.series_var] = i as u32;
                (e, c * &inv)
            }),
        );
        LocalFraction::new(&z - &p, x.pow(k as u32), &[])
    }

    /// A random element of `S`: a sparse polynomial of total degree at most 3
    /// divided by `x^e`, `e ≤ 2`, drawn until it lies in `S`.
    pub fn sample_element<R: Rng + ?Sized>(&self, rng: &mut R) -> LocalFraction {
        let n = self.ring.vars().len();
        loop {
            let terms = rng.gen_range(1..=4);
            let mut p = Polynomial::zero(self.field, self.ring.vars());
            for _ in 0..terms {
                let mut exps = vec![0u32; n];
                let deg = rng.gen_range(0..=3);
                for _ in 0..deg {
                    exps[rng.gen_range(0..n)] += 1;
                }
                let c = self.field.random(rng, 3);
                p = &p + &Polynomial::monomial(self.field, self.ring.vars(), exps, c);
            }
            if p.is_zero() {
                continue;
            }
            let e = rng.gen_range(0..=2u32);
            let f = LocalFraction::new(p, self.var(self.series_var).pow(e), &[]).expect("nonzero");
            if self.in_s(&f) {
                return f;
            }
        }
    }

    pub fn sample_elements<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<LocalFraction> {
        (0..count).map(|_| self.sample_element(rng)).collect()
    }

    /// Random pairs of members of `R`, drawn from [`Scenario::sample_element`].
    pub fn sample_member_pairs<R: Rng + ?Sized>(
        &self,
        count: usize,
        rng: &mut R,
    ) -> Result<Vec<(LocalFraction, LocalFraction)>> {
        let mut pool = Vec::new();
        let mut attempts = 0;
        while pool.len() < 2 * count {
            attempts += 1;
            if attempts > 200 * count.max(1) {
                return Err(Error::WitnessNotFound("too few members among random samples".into()));
            }
            let f = self.sample_element(rng);
            if self.membership(&f)?.answer == Answer::Yes {
                pool.push(f);
            }
        }
        Ok(pool.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect())
    }

    pub(crate) fn split(&self, f: &LocalFraction) -> Result<(usize, SeriesTerms, SeriesTerms)> {
        let s = self.split_form(&self.conform(f)?)?;
        Ok((s.shift, s.num, s.den))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "field": self.field.to_string(),
            "precision": self.precision,
            "variables": self.ring.vars().to_vec(),
            "series_var": self.series_var(),
            "twist_var": self.twist_var(),
            "images": self.ring.vars().iter().zip(&self.images)
                .map(|(v, s)| (v.clone(), s.to_json()))
                .collect::<serde_json::Map<_, _>>(),
            "threshold": self.threshold,
            "y_degree": self.y_degree,
            "max_exponent": self.max_exponent,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl() -> Scenario {
        Scenario::goodearl_lenagan(Field::Prime(5), 24).unwrap()
    }

    #[test]
    fn images_follow_lacunary_series() {
        let sc = gl();
        let z = sc.image("Z").unwrap();
        let nonzero: Vec<usize> = (0..24).filter(|&i| !z.coefficient(i).is_zero()).collect();
        assert_eq!(nonzero, vec![1, 2, 6]);
        let y = sc.image("y").unwrap();
        let nonzero: Vec<usize> = (0..24).filter(|&i| !y.coefficient(i).is_zero()).collect();
        assert_eq!(nonzero, vec![2]);
    }

    #[test]
    fn z_over_x_is_not_a_member() {
        let sc = gl();
        let v = sc.membership(&sc.element("Z/x").unwrap()).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.valuation, Some(Valuation::Exact(-1)));
    }

    #[test]
    fn z_squared_over_x_is_a_member() {
        let sc = gl();
        let v = sc.membership(&sc.element("Z^2/x").unwrap()).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        assert_eq!(v.valuation, Some(Valuation::Exact(0)));
    }

    #[test]
    fn kernel_elements_are_members() {
        let sc = gl();
        let v = sc.membership(&sc.element("x^3*y").unwrap()).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        assert!(v.valuation.is_none());
        assert!(v.derivative.is_zero());
    }

    #[test]
    fn elements_outside_s() {
        let sc = gl();
        assert!(matches!(sc.membership(&sc.element("1/x").unwrap()), Err(Error::NotInRing(_))));
        assert!(matches!(sc.membership(&sc.element("1/y").unwrap()), Err(Error::NonUnitDenominator(_))));
        assert!(sc.in_s(&sc.element("x/Z").unwrap()));
        assert!(sc.in_s(&sc.element("1/(1 + Z)").unwrap()));
    }

    #[test]
    fn vanishing_embedding_is_indeterminate() {
        let sc = gl();
        let f = sc.element("3*Z^2 - x*Z - y*Z - x^6*Z").unwrap();
        let v = sc.membership(&f).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        assert_eq!(v.valuation, Some(Valuation::AtLeast(24)));
        let v = sc.clone().with_threshold(Some(30)).membership(&f).unwrap();
        assert_eq!(v.answer, Answer::Indeterminate);
    }

    #[test]
    fn shift_elements_have_prescribed_derivative() {
        let sc = gl();
        for k in -2..6 {
            let s = sc.shift_element(k).unwrap();
            assert!(sc.in_s(&s), "{s}");
            let (d, _) = sc.derivative_series(&s).unwrap();
            assert_eq!(d, sc.x_power(-k));
        }
        assert_eq!(sc.shift_element(1).unwrap(), sc.element("(Z - x)/x").unwrap());
        assert!(matches!(sc.shift_element(24), Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn threshold_controls_verdicts() {
        let sc = gl().with_threshold(Some(-1));
        assert_eq!(sc.membership(&sc.element("Z/x").unwrap()).unwrap().answer, Answer::Yes);
        let sc = sc.with_threshold(None);
        assert_eq!(sc.membership(&sc.element("Z/x^1").unwrap()).unwrap().answer, Answer::Yes);
    }

    #[test]
    fn constructor_validation() {
        let f = Field::Prime(5);
        let a = RingPresentation::polynomial(f, &["x", "y"]).unwrap();
        let s = a.adjoin("Z", TruncatedSeries::liouville(f, 24, 1)).unwrap();
        let d = DerivationSpec::partial(s.clone(), "y").unwrap();
        assert!(Scenario::new(d, "x", Some(0), &BTreeMap::new()).is_err());
        let d = DerivationSpec::partial(s.clone(), "Z").unwrap();
        assert!(matches!(Scenario::new(d.clone(), "w", Some(0), &BTreeMap::new()), Err(Error::UnknownVariable(_))));
        let bad = BTreeMap::from([("y".to_string(), TruncatedSeries::one(f, 24))]);
        assert!(Scenario::new(d, "x", Some(0), &bad).is_err());
    }
}
