use std::fmt;

use super::scalar::Scalar;

/// Minimal commutative-ring interface shared by the element types that the
/// generic constructions (idealization pairs, Smith form, matrices) work over.
///
/// Elements carry their own ring context (field, variable names, precision),
/// so constants are produced relative to an existing element.
pub trait RingElement: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn scalar_like(&self, c: &Scalar) -> Self;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn is_zero_element(&self) -> bool;

    /// Whether `self` and `other` live in the same ring.
    fn same_ring(&self, _other: &Self) -> bool {
        true
    }
}

impl RingElement for Scalar {
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn scalar_like(&self, c: &Scalar) -> Self {
        c.clone()
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
        self.field() == other.field()
    }
}
