//! Descriptions of finitely presented rings: variables, relations,
//! localization at a variable-generated prime, and series images.

use std::collections::BTreeMap;

use super::fraction::LocalFraction;
use super::poly::{vars, Polynomial, Vars};
use super::scalar::Field;
use super::series::TruncatedSeries;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct RingPresentation {
    field: Field,
    vars: Vars,
    relations: Vec<Polynomial>,
    /// Variables generating the prime at which the ring is localized.
    local_at: Option<Vec<String>>,
    /// Variables sent to explicit power series.
    images: BTreeMap<String, TruncatedSeries>,
    /// Number of leading variables coming from the base ring this one was
    /// built from by adjoining.
    base_vars: usize,
    /// Generators of a subring of the polynomial ring on `vars`; `None`
    /// means the whole ring.
    generators: Option<Vec<Polynomial>>,
}

impl RingPresentation {
    pub fn polynomial<S: AsRef<str>>(field: Field, names: &[S]) -> Result<Self> {
        let v = vars(names);
        for (i, n) in v.iter().enumerate() {
            if n.is_empty() || v[..i].contains(n) {
                return Err(Error::Precondition(format!("variable '{n}' is empty or repeated")));
            }
        }
        Ok(RingPresentation {
            field,
            vars: v.clone(),
            relations: vec![],
            local_at: None,
            images: BTreeMap::new(),
            base_vars: v.len(),
            generators: None,
        })
    }

    pub fn localize<S: AsRef<str>>(&self, at: &[S]) -> Result<Self> {
        let names: Vec<String> = at.iter().map(|s| s.as_ref().to_string()).collect();
        LocalFraction::prime_indices(&self.vars, &names)?;
        let mut out = self.clone();
        out.local_at = Some(names);
        Ok(out)
    }

    /// Adjoins a variable with a series image; the localization, if any, is
    /// extended to the new variable.
    pub fn adjoin(&self, name: &str, image: TruncatedSeries) -> Result<Self> {
        if self.generators.is_some() {
            return Err(Error::Precondition("cannot adjoin to a subring presentation".into()));
        }
        if self.vars.iter().any(|v| v == name) {
            return Err(Error::Precondition(format!("variable '{name}' already present")));
        }
        if image.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let mut names: Vec<String> = self.vars.to_vec();
        names.push(name.to_string());
        let v = vars(&names);
        let relations = self
            .relations
            .iter()
            .map(|r| r.with_vars(&v))
            .collect::<Result<Vec<_>>>()?;
        let mut images = self.images.clone();
        images.insert(name.to_string(), image);
        let local_at = self.local_at.as_ref().map(|p| {
            let mut p = p.clone();
            p.push(name.to_string());
            p
        });
        Ok(RingPresentation {
            field: self.field,
            vars: v,
            relations,
            local_at,
            images,
            base_vars: self.vars.len(),
            generators: None,
        })
    }

    /// The subring generated over the field by `gens`.
    pub fn subring(&self, gens: Vec<Polynomial>) -> Result<Self> {
        let gens = gens
            .into_iter()
            .map(|g| g.with_vars(&self.vars))
            .collect::<Result<Vec<_>>>()?;
        let mut out = self.clone();
        out.generators = Some(gens);
        Ok(out)
    }

    /// Ring generators: the subring generators, or else the variables.
    pub fn ring_generators(&self) -> Vec<Polynomial> {
        match &self.generators {
            Some(g) => g.clone(),
            None => (0..self.vars.len()).map(|i| Polynomial::var(self.field, &self.vars, i)).collect(),
        }
    }

    pub fn is_subring(&self) -> bool {
        self.generators.is_some()
    }

    pub fn with_relation(&self, rel: Polynomial) -> Result<Self> {
        let rel = rel.with_vars(&self.vars)?;
        let mut out = self.clone();
        out.relations.push(rel);
        Ok(out)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn local_at(&self) -> Option<&[String]> {
        self.local_at.as_deref()
    }

    pub fn images(&self) -> &BTreeMap<String, TruncatedSeries> {
        &self.images
    }

    pub fn base_var_count(&self) -> usize {
        self.base_vars
    }

    pub fn prime_indices(&self) -> Result<Vec<usize>> {
        match &self.local_at {
            Some(p) => LocalFraction::prime_indices(&self.vars, p),
            None => Ok(vec![]),
        }
    }

    pub fn variable(&self, name: &str) -> Result<Polynomial> {
        Polynomial::var_named(self.field, &self.vars, name)
    }

    pub fn has_var(&self, name: &str) -> bool {
        self.vars.iter().any(|v| v == name)
    }
}
