//! Exact arithmetic: fields, polynomials, fractions, truncated series,
//! linear algebra, Smith forms and finite-dimensional algebras.

pub mod finite;
pub mod fraction;
pub mod matrix;
pub mod poly;
pub mod presentation;
pub mod ring;
pub mod scalar;
pub mod series;
pub mod snf;
pub mod unipoly;

pub use finite::{FiniteAlgebra, FiniteModule, LocalModel, Vector};
pub use fraction::LocalFraction;
pub use matrix::{linear_solve, LinearSolution, Matrix, Subspace};
pub use poly::{Monomial, Polynomial, Vars};
pub use presentation::RingPresentation;
pub use ring::RingElement;
pub use scalar::{Field, Scalar};
pub use series::{LaurentSeries, TruncatedSeries, Valuation};
pub use snf::{smith_normal_form, EuclideanRing, Smith};
pub use unipoly::UniPoly;
