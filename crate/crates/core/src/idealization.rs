//! The idealization `A ⋆ M`: pairs `(a, ℓ)` multiplied by
//! `(a₁,ℓ₁)(a₂,ℓ₂) = (a₁a₂, a₁ℓ₂ + a₂ℓ₁)`.

use std::fmt;

use crate::algebra::finite::{FiniteAlgebra, FiniteModule, LocalModel, Vector};
use crate::algebra::matrix::Subspace;
use crate::algebra::ring::RingElement;
use crate::algebra::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Elements of a module over the ring `R`.
pub trait ModuleElement<R: RingElement>: Clone + PartialEq + fmt::Debug {
    fn module_zero(&self) -> Self;
    fn module_add(&self, other: &Self) -> Self;
    fn module_scale(&self, r: &R) -> Self;
    fn is_module_zero(&self) -> bool;
    fn same_module(&self, other: &Self) -> bool;
}

/// Coordinates in the free module `R^n`.
impl<R: RingElement> ModuleElement<R> for Vec<R> {
    fn module_zero(&self) -> Self {
        self.iter().map(R::zero_like).collect()
    }
    fn module_add(&self, other: &Self) -> Self {
        self.iter().zip(other).map(|(a, b)| a.plus(b)).collect()
    }
    fn module_scale(&self, r: &R) -> Self {
        self.iter().map(|a| r.times(a)).collect()
    }
    fn is_module_zero(&self) -> bool {
        self.iter().all(R::is_zero_element)
    }
    fn same_module(&self, other: &Self) -> bool {
        self.len() == other.len() && self.iter().zip(other).all(|(a, b)| a.same_ring(b))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdealizationElement<R, M = Vec<R>> {
    ring_part: R,
    module_part: M,
}

impl<R: RingElement, M: ModuleElement<R>> IdealizationElement<R, M> {
    pub fn new(ring_part: R, module_part: M) -> Self {
        IdealizationElement { ring_part, module_part }
    }

    pub fn ring_part(&self) -> &R {
        &self.ring_part
    }

    pub fn module_part(&self) -> &M {
        &self.module_part
    }

    pub fn compatible(&self, other: &Self) -> bool {
        self.ring_part.same_ring(&other.ring_part) && self.module_part.same_module(&other.module_part)
    }

    pub fn star_mul(&self, other: &Self) -> Result<Self> {
        if !self.compatible(other) {
            return Err(Error::RingMismatch("idealization elements from different rings".into()));
        }
        Ok(IdealizationElement {
            ring_part: self.ring_part.times(&other.ring_part),
            module_part: other
                .module_part
                .module_scale(&self.ring_part)
                .module_add(&self.module_part.module_scale(&other.ring_part)),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if !self.compatible(other) {
            return Err(Error::RingMismatch("idealization elements from different rings".into()));
        }
        Ok(IdealizationElement {
            ring_part: self.ring_part.plus(&other.ring_part),
            module_part: self.module_part.module_add(&other.module_part),
        })
    }
}

impl<R: RingElement, M: ModuleElement<R>> RingElement for IdealizationElement<R, M> {
    fn zero_like(&self) -> Self {
        IdealizationElement::new(self.ring_part.zero_like(), self.module_part.module_zero())
    }
    fn one_like(&self) -> Self {
        IdealizationElement::new(self.ring_part.one_like(), self.module_part.module_zero())
    }
    fn scalar_like(&self, c: &Scalar) -> Self {
        IdealizationElement::new(self.ring_part.scalar_like(c), self.module_part.module_zero())
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.try_add(rhs).expect("same idealization")
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negated())
    }
    fn times(&self, rhs: &Self) -> Self {
        self.star_mul(rhs).expect("same idealization")
    }
    fn negated(&self) -> Self {
        let minus_one = self.ring_part.one_like().negated();
        IdealizationElement::new(self.ring_part.negated(), self.module_part.module_scale(&minus_one))
    }
    fn is_zero_element(&self) -> bool {
        self.ring_part.is_zero_element() && self.module_part.is_module_zero()
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.compatible(other)
    }
}

impl<R: fmt::Display, M: fmt::Debug> fmt::Display for IdealizationElement<R, M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {:?})", self.ring_part, self.module_part)
    }
}

/// A finite-dimensional model of `A ⋆ M`: coordinates are the base basis
/// followed by the module basis.
#[derive(Clone, Debug)]
pub struct IdealizationModel {
    base: FiniteAlgebra,
    module: FiniteModule,
    ring: FiniteAlgebra,
}

impl IdealizationModel {
    pub fn new(base: FiniteAlgebra, module: FiniteModule) -> Result<Self> {
        let ring = base.idealize(&module)?;
        Ok(IdealizationModel { base, module, ring })
    }

    pub fn base(&self) -> &FiniteAlgebra {
        &self.base
    }

    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    pub fn pair(&self, ring_part: &[Scalar], module_part: &[Scalar]) -> Result<Vector> {
        if ring_part.len() != self.base.dim() || module_part.len() != self.module.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.base.dim() + self.module.dim(),
                found: ring_part.len() + module_part.len(),
            });
        }
        Ok(ring_part.iter().chain(module_part).cloned().collect())
    }

    pub fn split(&self, v: &[Scalar]) -> (Vector, Vector) {
        let n = self.base.dim();
        (v[..n].to_vec(), v[n..].to_vec())
    }

    pub fn star_mul(&self, u: &[Scalar], v: &[Scalar]) -> Vector {
        self.ring.mul(u, v)
    }

    /// The `k`-span of the ideal generated by `gens`.
    pub fn ideal_span(&self, gens: &[Vector]) -> Subspace {
        self.ring.ideal_span(gens)
    }

    /// The square-zero ideal `0 ⋆ M`.
    pub fn module_ideal(&self) -> Subspace {
        let n = self.base.dim();
        let gens: Vec<Vector> = (0..self.module.dim()).map(|k| self.ring.basis_vector(n + k)).collect();
        Subspace::spanned_by(self.field(), self.dim(), &gens)
    }

    pub fn quotient_model(&self, ideal: &Subspace) -> Result<FiniteAlgebra> {
        self.ring.quotient(ideal)
    }

    pub fn local_model(&self) -> Result<LocalModel> {
        LocalModel::identify(self.ring.clone())
    }

    pub fn embedding_dimension(&self) -> Result<usize> {
        self.local_model()?.embedding_dimension()
    }
}

/// `k[X,Y]_(X,Y) ⋆ (free of rank n)`, reduced modulo `𝔪³`.
pub fn plane_idealization(field: Field, rank: usize) -> Result<LocalModel> {
    let names = ["X".to_string(), "Y".to_string()];
    let base = FiniteAlgebra::truncated_polynomial(field, &names, 2)?;
    let module = FiniteModule::free(&base, rank);
    IdealizationModel::new(base, module)?.local_model()?.truncate(3)
}
