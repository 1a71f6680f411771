//! Dense matrices over a ring, exact Gaussian elimination over a field and
//! reduced-echelon subspaces of `k^n`.

use std::fmt;
use std::ops::{Index, IndexMut};

use super::ring::RingElement;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Rectangular matrix. `zero` records the base ring so that empty shapes
/// still know where their entries live.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
    zero: T,
}

impl<T: RingElement> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize, zero: T) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![zero.clone(); rows * cols],
            zero,
        }
    }

    pub fn identity(n: usize, zero: T) -> Self {
        let mut m = Self::zeros(n, n, zero);
        for i in 0..n {
            m[(i, i)] = m.zero.one_like();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>, zero: T) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            for e in &row {
                if !e.same_ring(&zero) {
                    return Err(Error::RingMismatch("matrix entry outside the base ring".into()));
                }
            }
            entries.extend(row);
        }
        Ok(Matrix {
            rows: n,
            cols,
            entries,
            zero,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn zero(&self) -> &T {
        &self.zero
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, self.zero.clone());
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols, self.zero.clone());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero_element() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero_element() {
                        out[(i, j)] = out[(i, j)].plus(&a.times(b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(self.zero.clone(), |acc, (a, b)| acc.plus(&a.times(b)))
            })
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(T::is_zero_element)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = &self[(i, j)];
                    if i == j {
                        *e == self.zero.one_like()
                    } else {
                        e.is_zero_element()
                    }
                })
            })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] += factor * row[source]`
    pub fn add_row_multiple(&mut self, target: usize, source: usize, factor: &T) {
        for j in 0..self.cols {
            let delta = factor.times(&self[(source, j)]);
            self[(target, j)] = self[(target, j)].plus(&delta);
        }
    }

    /// `col[target] += factor * col[source]`
    pub fn add_col_multiple(&mut self, target: usize, source: usize, factor: &T) {
        for i in 0..self.rows {
            let delta = self[(i, source)].times(factor);
            self[(i, target)] = self[(i, target)].plus(&delta);
        }
    }

    pub fn scale_row(&mut self, i: usize, factor: &T) {
        for j in 0..self.cols {
            self[(i, j)] = self[(i, j)].times(factor);
        }
    }

    pub fn scale_col(&mut self, j: usize, factor: &T) {
        for i in 0..self.rows {
            self[(i, j)] = self[(i, j)].times(factor);
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.entries[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.entries[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.entries[i * self.cols + j].to_string())
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Result of [`linear_solve`]: one particular solution (if any) and a basis
/// of the kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution {
    pub solution: Option<Vec<Scalar>>,
    pub kernel: Vec<Vec<Scalar>>,
}

/// Solves `m · v = target` exactly.
pub fn linear_solve(m: &Matrix<Scalar>, target: &[Scalar]) -> Result<LinearSolution> {
    if target.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: target.len(),
        });
    }
    let field = m.zero().field();
    let (n, k) = (m.rows(), m.cols());
    // Augmented elimination.
    let mut a: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(target[i].clone());
            r
        })
        .collect();
    let pivots = rref_in_place(&mut a, k);
    let consistent = a
        .iter()
        .skip(pivots.len())
        .all(|row| row[k].is_zero());
    let solution = consistent.then(|| {
        let mut v = vec![field.zero(); k];
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = a[r][k].clone();
        }
        v
    });
    let kernel = kernel_from_rref(&a, &pivots, k, field);
    Ok(LinearSolution { solution, kernel })
}

pub fn rank(m: &Matrix<Scalar>) -> usize {
    let mut a = m.to_rows();
    rref_in_place(&mut a, m.cols()).len()
}

/// Row-reduces the first `cols` columns; returns pivot columns in order.
fn rref_in_place(a: &mut [Vec<Scalar>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("nonzero pivot");
        for e in a[r].iter_mut() {
            *e = &*e * &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (e, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *e = &*e - &(&f * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn kernel_from_rref(a: &[Vec<Scalar>], pivots: &[usize], cols: usize, field: Field) -> Vec<Vec<Scalar>> {
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![field.zero(); cols];
            v[fc] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&a[r][fc];
            }
            v
        })
        .collect()
}

/// A subspace of `k^n` held as a reduced row-echelon basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    /// Rows in RREF; `pivots[i]` is the pivot column of `rows[i]`.
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.dim() == other.dim() && self.contains_space(other)
    }
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            rows: vec![],
            pivots: vec![],
        }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        let mut s = Self::zero(field, ambient);
        for i in 0..ambient {
            s.insert(&unit_vector(field, ambient, i));
        }
        s
    }

    pub fn spanned_by<'a>(field: Field, ambient: usize, vectors: impl IntoIterator<Item = &'a Vec<Scalar>>) -> Self {
        let mut s = Self::zero(field, ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient, "vector length");
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (e, r) in w.iter_mut().zip(row) {
                if !r.is_zero() {
                    *e = &*e - &(&f * r);
                }
            }
        }
        w
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().expect("nonzero");
        for e in w.iter_mut() {
            *e = &*e * &inv;
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (e, n) in row.iter_mut().zip(&w) {
                if !n.is_zero() {
                    *e = &*e - &(&f * n);
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, w);
        self.pivots.insert(at, p);
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r);
        }
        s
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // Solve Σ a_i u_i = Σ b_j w_j.
        let (n, m) = (self.dim(), other.dim());
        let mut out = Subspace::zero(self.field, self.ambient);
        if n == 0 || m == 0 {
            return out;
        }
        let mut mat = Matrix::zeros(self.ambient, n + m, self.field.zero());
        for (i, u) in self.rows.iter().enumerate() {
            for (r, c) in u.iter().enumerate() {
                mat[(r, i)] = c.clone();
            }
        }
        for (j, w) in other.rows.iter().enumerate() {
            for (r, c) in w.iter().enumerate() {
                mat[(r, n + j)] = -c;
            }
        }
        let sol = linear_solve(&mat, &vec![self.field.zero(); self.ambient]).expect("shapes agree");
        for k in sol.kernel {
            let v = combine(self.field, self.ambient, &self.rows, &k[..n]);
            out.insert(&v);
        }
        out
    }

    /// Indices of the standard basis vectors completing this subspace (the
    /// non-pivot columns), so that `k^n = self ⊕ span(e_j : j ∈ complement)`.
    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Coordinates of `v` modulo this subspace, along [`complement_indices`](Self::complement_indices).
    pub fn quotient_coordinates(&self, v: &[Scalar]) -> Vec<Scalar> {
        let r = self.reduce(v);
        self.complement_indices().into_iter().map(|c| r[c].clone()).collect()
    }
}

pub fn unit_vector(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

pub fn combine(field: Field, n: usize, vectors: &[Vec<Scalar>], coeffs: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![field.zero(); n];
    for (v, c) in vectors.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, e) in out.iter_mut().zip(v) {
            if !e.is_zero() {
                *o = &*o + &(c * e);
            }
        }
    }
    out
}

pub fn add_vectors(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vectors(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vector(a: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    a.iter().map(|x| x * c).collect()
}

pub fn is_zero_vector(a: &[Scalar]) -> bool {
    a.iter().all(Scalar::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> Matrix<Scalar> {
        let f = Field::Rational;
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| f.from_i64(v)).collect()).collect(),
            f.zero(),
        )
        .unwrap()
    }

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Field::Rational.from_i64(x)).collect()
    }

    #[test]
    fn identity_system() {
        let m = Matrix::identity(3, Field::Rational.zero());
        let s = linear_solve(&m, &v(&[1, 0, 0])).unwrap();
        assert_eq!(s.solution, Some(v(&[1, 0, 0])));
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn rank_one_system() {
        let m = q(&[&[1, 1], &[2, 2]]);
        let s = linear_solve(&m, &v(&[1, 2])).unwrap();
        assert_eq!(s.solution, Some(v(&[1, 0])));
        assert_eq!(s.kernel, vec![v(&[-1, 1])]);
        let none = linear_solve(&m, &v(&[1, 3])).unwrap();
        assert_eq!(none.solution, None);
    }

    #[test]
    fn dimension_mismatch() {
        let m = q(&[&[1, 1], &[2, 2]]);
        assert!(matches!(linear_solve(&m, &v(&[1])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn subspace_intersection_and_sum() {
        let f = Field::Rational;
        let a = Subspace::spanned_by(f, 3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::spanned_by(f, 3, &[v(&[0, 1, 1]), v(&[1, 1, 0])]);
        let i = a.intersection(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&v(&[1, 1, 0])));
        assert_eq!(a.sum(&b).dim(), 3);
    }

    #[test]
    fn quotient_coordinates_vanish_on_subspace() {
        let f = Field::Rational;
        let a = Subspace::spanned_by(f, 3, &[v(&[1, 1, 0])]);
        assert!(is_zero_vector(&a.quotient_coordinates(&v(&[2, 2, 0]))));
        assert_eq!(a.complement_indices(), vec![1, 2]);
    }
}
