//! Derivations given by the images of the ring variables, extended by
//! additivity, the Leibniz rule and the quotient rule, and the Jacobian
//! presentation of Kähler differentials.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::fraction::LocalFraction;
use crate::algebra::poly::Polynomial;
use crate::algebra::presentation::RingPresentation;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct DerivationSpec {
    domain: RingPresentation,
    /// Image of each variable, in variable order.
    images: Vec<Polynomial>,
    /// Generators of the subring the derivation is meant to kill.
    linearity_base: Vec<Polynomial>,
}

/// Outcome of [`DerivationSpec::check_linearity`].
#[derive(Clone, Debug, PartialEq)]
pub struct LinearityReport {
    pub pass: bool,
    pub witness: Option<Polynomial>,
    pub checked: usize,
}

impl DerivationSpec {
    /// Variables absent from `images` are sent to zero. The images must be
    /// compatible with the domain's relations.
    pub fn new(
        domain: RingPresentation,
        images: &BTreeMap<String, Polynomial>,
        linearity_base: Vec<Polynomial>,
    ) -> Result<Self> {
        let vars = domain.vars().clone();
        for name in images.keys() {
            if !domain.has_var(name) {
                return Err(Error::UnknownVariable(name.clone()));
            }
        }
        let images = vars
            .iter()
            .map(|v| match images.get(v) {
                Some(p) => p.with_vars(&vars),
                None => Ok(Polynomial::zero(domain.field(), &vars)),
            })
            .collect::<Result<Vec<_>>>()?;
        let linearity_base = linearity_base
            .into_iter()
            .map(|p| p.with_vars(&vars))
            .collect::<Result<Vec<_>>>()?;
        let spec = DerivationSpec {
            domain,
            images,
            linearity_base,
        };
        for rel in spec.domain.relations() {
            let d = spec.derive_raw(rel);
            let (_, r) = d.reduce(spec.domain.relations())?;
            if !r.is_zero() {
                return Err(Error::InvalidDerivation(format!(
                    "image of relation {rel} is {d}, not zero modulo the relations"
                )));
            }
        }
        Ok(spec)
    }

    /// `∂/∂name`, meant to be linear over the remaining variables.
    pub fn partial(domain: RingPresentation, name: &str) -> Result<Self> {
        let one = Polynomial::one(domain.field(), domain.vars());
        let base = domain
            .vars()
            .iter()
            .filter(|v| v.as_str() != name)
            .map(|v| domain.variable(v))
            .collect::<Result<Vec<_>>>()?;
        DerivationSpec::new(domain, &BTreeMap::from([(name.to_string(), one)]), base)
    }

    pub fn domain(&self) -> &RingPresentation {
        &self.domain
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn image_of(&self, name: &str) -> Option<&Polynomial> {
        self.domain.vars().iter().position(|v| v == name).map(|i| &self.images[i])
    }

    pub fn linearity_base(&self) -> &[Polynomial] {
        &self.linearity_base
    }

    fn derive_raw(&self, f: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(f.field(), f.vars());
        for (i, img) in self.images.iter().enumerate() {
            if img.is_zero() {
                continue;
            }
            let p = f.partial(i);
            if !p.is_zero() {
                out = &out + &(&p * img);
            }
        }
        out
    }

    pub fn derive(&self, f: &Polynomial) -> Result<Polynomial> {
        let f = self.conform(f)?;
        Ok(self.derive_raw(&f))
    }

    /// Quotient rule `D(u/v) = (v·D(u) − u·D(v)) / v²`.
    pub fn derive_fraction(&self, f: &LocalFraction) -> Result<LocalFraction> {
        let u = self.conform(f.numerator())?;
        let v = self.conform(f.denominator())?;
        let num = &(&v * &self.derive_raw(&u)) - &(&u * &self.derive_raw(&v));
        LocalFraction::new(num, &v * &v, f.prime())
    }

    fn conform(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.field() != self.domain.field() {
            return Err(Error::FieldMismatch);
        }
        f.with_vars(self.domain.vars()).map_err(|_| {
            let unknown = f
                .support()
                .into_iter()
                .map(|i| f.vars()[i].clone())
                .find(|n| !self.domain.has_var(n))
                .unwrap_or_default();
            Error::UnknownVariable(unknown)
        })
    }

    /// Checks that the base generators and their pairwise products are killed.
    pub fn check_linearity(&self) -> Result<LinearityReport> {
        if self.linearity_base.is_empty() {
            return Err(Error::Precondition("linearity base is empty".into()));
        }
        let mut samples: Vec<Polynomial> = self.linearity_base.clone();
        for (i, a) in self.linearity_base.iter().enumerate() {
            for b in &self.linearity_base[i..] {
                samples.push(a * b);
            }
        }
        for (k, s) in samples.iter().enumerate() {
            if !self.derive_raw(s).is_zero() {
                return Ok(LinearityReport {
                    pass: false,
                    witness: Some(s.clone()),
                    checked: k + 1,
                });
            }
        }
        Ok(LinearityReport {
            pass: true,
            witness: None,
            checked: samples.len(),
        })
    }
}

impl fmt::Display for DerivationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .domain
            .vars()
            .iter()
            .zip(&self.images)
            .filter(|(_, p)| !p.is_zero())
            .map(|(v, p)| format!("D({v}) = {p}"))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// `Ω_{S/A}` presented by the differentials of the variables of `S` outside
/// `A`, modulo the Jacobian rows of the relations.
#[derive(Clone, Debug, PartialEq)]
pub struct KahlerPresentation {
    domain: RingPresentation,
    /// Indices of the variables whose differentials generate.
    generator_vars: Vec<usize>,
    relations: Vec<Vec<Polynomial>>,
}

impl KahlerPresentation {
    pub fn generators(&self) -> Vec<String> {
        self.generator_vars
            .iter()
            .map(|&i| format!("d{}", self.domain.vars()[i]))
            .collect()
    }

    pub fn relations(&self) -> &[Vec<Polynomial>] {
        &self.relations
    }

    /// Whether the presented module is visibly free (no relations).
    pub fn is_free(&self) -> bool {
        self.relations.iter().all(|r| r.iter().all(Polynomial::is_zero))
    }

    /// The derivation `α ∘ d` where `α(dv_i) = alpha[i]`. `α` must kill every
    /// relation row modulo the relations of the domain.
    pub fn factor_through(&self, alpha: &[Polynomial]) -> Result<DerivationSpec> {
        if alpha.len() != self.generator_vars.len() {
            return Err(Error::DimensionMismatch {
                expected: self.generator_vars.len(),
                found: alpha.len(),
            });
        }
        let vars = self.domain.vars();
        let images: BTreeMap<String, Polynomial> = self
            .generator_vars
            .iter()
            .zip(alpha)
            .map(|(&i, a)| (vars[i].clone(), a.clone()))
            .collect();
        let base = (0..vars.len())
            .filter(|i| !self.generator_vars.contains(i))
            .map(|i| Polynomial::var(self.domain.field(), vars, i))
            .collect();
        DerivationSpec::new(self.domain.clone(), &images, base)
    }

    /// The `α` with `D = α ∘ d`, for a derivation killing the base.
    pub fn universal_map(&self, d: &DerivationSpec) -> Result<Vec<Polynomial>> {
        if d.domain() != &self.domain {
            return Err(Error::RingMismatch("derivation on a different ring".into()));
        }
        for i in (0..self.domain.vars().len()).filter(|i| !self.generator_vars.contains(i)) {
            if !d.images()[i].is_zero() {
                return Err(Error::InvalidDerivation(format!(
                    "D does not kill the base variable {}",
                    self.domain.vars()[i]
                )));
            }
        }
        Ok(self.generator_vars.iter().map(|&i| d.images()[i].clone()).collect())
    }
}

pub fn kahler_presentation<S: AsRef<str>>(domain: &RingPresentation, base_vars: &[S]) -> Result<KahlerPresentation> {
    let vars = domain.vars();
    for b in base_vars {
        if !domain.has_var(b.as_ref()) {
            return Err(Error::UnknownVariable(b.as_ref().to_string()));
        }
    }
    let generator_vars: Vec<usize> = (0..vars.len())
        .filter(|&i| !base_vars.iter().any(|b| b.as_ref() == vars[i]))
        .collect();
    let relations = domain
        .relations()
        .iter()
        .map(|r| generator_vars.iter().map(|&i| r.partial(i)).collect())
        .collect();
    Ok(KahlerPresentation {
        domain: domain.clone(),
        generator_vars,
        relations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::Field;

    fn xyz(field: Field) -> RingPresentation {
        RingPresentation::polynomial(field, &["x", "y", "Z"]).unwrap()
    }

    #[test]
    fn derivative_of_square() {
        let s = xyz(Field::Prime(5));
        let d = DerivationSpec::partial(s.clone(), "Z").unwrap();
        let z = s.variable("Z").unwrap();
        assert_eq!(d.derive(&z.pow(2)).unwrap(), z.scale(&Field::Prime(5).from_i64(2)));
        let c = Polynomial::constant(s.field(), s.vars(), s.field().from_i64(3));
        assert!(d.derive(&c).unwrap().is_zero());
    }

    #[test]
    fn quotient_rule_on_inverse() {
        let f = Field::Rational;
        let s = RingPresentation::polynomial(f, &["x", "Z"]).unwrap().localize(&["x"]).unwrap();
        let d = DerivationSpec::partial(s.clone(), "Z").unwrap();
        let prime = s.prime_indices().unwrap();
        let z = s.variable("Z").unwrap();
        let one = Polynomial::one(f, s.vars());
        let inv = LocalFraction::new(one.clone(), z.clone(), &prime).unwrap();
        let expected = LocalFraction::new(-&one, z.pow(2), &prime).unwrap();
        assert_eq!(d.derive_fraction(&inv).unwrap(), expected);
        let prod = inv.try_mul(&LocalFraction::from_poly(z, &prime)).unwrap();
        assert!(d.derive_fraction(&prod).unwrap().is_zero());
    }

    #[test]
    fn unknown_variable() {
        let s = xyz(Field::Rational);
        let d = DerivationSpec::partial(s, "Z").unwrap();
        let w = Polynomial::var_named(Field::Rational, &crate::algebra::poly::vars(&["w"]), "w").unwrap();
        assert!(matches!(d.derive(&w), Err(Error::UnknownVariable(n)) if n == "w"));
    }

    #[test]
    fn linearity_checks() {
        let s = xyz(Field::Rational);
        let x = s.variable("x").unwrap();
        let z = s.variable("Z").unwrap();
        let dz = DerivationSpec::partial(s.clone(), "Z").unwrap();
        assert!(dz.check_linearity().unwrap().pass);
        let one = Polynomial::one(Field::Rational, s.vars());
        let dx = DerivationSpec::new(s.clone(), &BTreeMap::from([("x".into(), one.clone())]), vec![x.clone()]).unwrap();
        assert_eq!(dx.check_linearity().unwrap().witness, Some(x.clone()));
        let dz2 = DerivationSpec::new(s, &BTreeMap::from([("Z".into(), one)]), vec![x.clone(), &x * &z]).unwrap();
        assert_eq!(dz2.check_linearity().unwrap().witness, Some(&x * &z));
    }

    #[test]
    fn incompatible_relation_rejected() {
        let f = Field::Rational;
        let a = RingPresentation::polynomial(f, &["x", "Z"]).unwrap();
        let z = a.variable("Z").unwrap();
        let x = a.variable("x").unwrap();
        let s = a.with_relation(&z.pow(2) - &x).unwrap();
        let one = Polynomial::one(f, s.vars());
        // D(Z^2 - x) = 2Z, nonzero modulo Z^2 - x.
        assert!(matches!(
            DerivationSpec::new(s, &BTreeMap::from([("Z".into(), one)]), vec![]),
            Err(Error::InvalidDerivation(_))
        ));
    }

    #[test]
    fn kahler_of_square_root() {
        let f = Field::Rational;
        let a = RingPresentation::polynomial(f, &["x", "Z"]).unwrap();
        let z = a.variable("Z").unwrap();
        let x = a.variable("x").unwrap();
        let s = a.with_relation(&z.pow(2) - &x).unwrap();
        let k = kahler_presentation(&s, &["x"]).unwrap();
        assert_eq!(k.generators(), vec!["dZ"]);
        assert_eq!(k.relations(), &[vec![z.scale(&f.from_i64(2))]]);
        let poly = kahler_presentation(&a, &["x"]).unwrap();
        assert!(poly.is_free());
        assert!(kahler_presentation(&a, &["x", "Z"]).unwrap().generators().is_empty());
    }

    #[test]
    fn factoring_recovers_derivation() {
        let s = xyz(Field::Prime(5));
        let d = DerivationSpec::partial(s.clone(), "Z").unwrap();
        let k = kahler_presentation(&s, &["x", "y"]).unwrap();
        let alpha = k.universal_map(&d).unwrap();
        let back = k.factor_through(&alpha).unwrap();
        assert_eq!(back.images(), d.images());
    }
}
