//! Smith normal form over Euclidean rings, with unimodular certificates.

use super::matrix::Matrix;
use super::ring::RingElement;
use super::series::{TruncatedSeries, Valuation};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

pub trait EuclideanRing: RingElement {
    /// Euclidean size; `None` for zero.
    fn norm(&self) -> Option<u64>;
    /// `a = q·b + r` with `r = 0` or `norm(r) < norm(b)`.
    fn euclid_div(&self, b: &Self) -> Result<(Self, Self)>;
    /// A unit `u` (with its inverse) such that `u·self` is the canonical
    /// associate: monic for polynomials, a bare power of `x` for truncations.
    fn normalizing_unit(&self) -> (Self, Self);
}

impl EuclideanRing for UniPoly {
    fn norm(&self) -> Option<u64> {
        self.degree().map(|d| d as u64)
    }

    fn euclid_div(&self, b: &Self) -> Result<(Self, Self)> {
        self.div_rem(b)
    }

    fn normalizing_unit(&self) -> (Self, Self) {
        match self.leading_coefficient() {
            Some(lc) => {
                let inv = lc.inv().expect("nonzero");
                (self.scalar_like(&inv), self.scalar_like(lc))
            }
            None => (self.one_like(), self.one_like()),
        }
    }

}

/// Arithmetic in `k[x]/(x^N)`: every nonzero element is `x^v · unit`.
impl EuclideanRing for TruncatedSeries {
    fn norm(&self) -> Option<u64> {
        match self.valuation() {
            Valuation::Exact(v) => Some(v as u64),
            Valuation::AtLeast(_) => None,
        }
    }

    fn euclid_div(&self, b: &Self) -> Result<(Self, Self)> {
        let vb = b.norm().ok_or(Error::DivisionByZero)? as usize;
        let n = self.precision();
        match self.norm() {
            None => Ok((self.zero_like(), self.zero_like())),
            Some(va) if va as usize >= vb => {
                let a1 = self.shift_down(vb)?.pad(n);
                let u = b.shift_down(vb)?.pad(n);
                let q = &a1 * &u.invert()?;
                Ok((q, self.zero_like()))
            }
            Some(_) => Ok((self.zero_like(), self.clone())),
        }
    }

    fn normalizing_unit(&self) -> (Self, Self) {
        match self.norm() {
            Some(v) => {
                let u = self.shift_down(v as usize).expect("valuation").pad(self.precision());
                (u.invert().expect("unit"), u)
            }
            None => (self.one_like(), self.one_like()),
        }
    }
}

/// `u · m · v = d` with `u_inv`, `v_inv` the inverses of `u`, `v`.
#[derive(Clone, Debug)]
pub struct Smith<T> {
    pub u: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
    pub u_inv: Matrix<T>,
    pub v_inv: Matrix<T>,
}

impl<T: EuclideanRing> Smith<T> {
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<T> {
        self.diagonal().into_iter().filter(|e| !e.is_zero_element()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Checks `u·m·v = d`, the inverse pairs and the divisibility chain.
    pub fn verify(&self, m: &Matrix<T>) -> Result<bool> {
        let prod = self.u.mul(m)?.mul(&self.v)?;
        let uu = self.u.mul(&self.u_inv)?;
        let vv = self.v.mul(&self.v_inv)?;
        Ok(prod == self.d && uu.is_identity() && vv.is_identity() && self.is_diagonal_chain()?)
    }

    fn is_diagonal_chain(&self) -> Result<bool> {
        for i in 0..self.d.rows() {
            for j in 0..self.d.cols() {
                if i != j && !self.d[(i, j)].is_zero_element() {
                    return Ok(false);
                }
            }
        }
        let diag = self.diagonal();
        for w in diag.windows(2) {
            if w[0].is_zero_element() {
                if !w[1].is_zero_element() {
                    return Ok(false);
                }
                continue;
            }
            if !w[1].euclid_div(&w[0])?.1.is_zero_element() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

struct Work<T> {
    a: Matrix<T>,
    u: Matrix<T>,
    u_inv: Matrix<T>,
    v: Matrix<T>,
    v_inv: Matrix<T>,
}

impl<T: EuclideanRing> Work<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// `row t += f · row s`
    fn add_row(&mut self, t: usize, s: usize, f: &T) {
        self.a.add_row_multiple(t, s, f);
        self.u.add_row_multiple(t, s, f);
        self.u_inv.add_col_multiple(s, t, &f.negated());
    }

    /// `col t += f · col s`
    fn add_col(&mut self, t: usize, s: usize, f: &T) {
        self.a.add_col_multiple(t, s, f);
        self.v.add_col_multiple(t, s, f);
        self.v_inv.add_row_multiple(s, t, &f.negated());
    }

    fn scale_row(&mut self, i: usize, unit: &T, inv: &T) {
        self.a.scale_row(i, unit);
        self.u.scale_row(i, unit);
        self.u_inv.scale_col(i, inv);
    }
}

pub fn smith_normal_form<T: EuclideanRing>(m: &Matrix<T>) -> Result<Smith<T>> {
    let (rows, cols) = (m.rows(), m.cols());
    let zero = m.zero().clone();
    let mut w = Work {
        a: m.clone(),
        u: Matrix::identity(rows, zero.clone()),
        u_inv: Matrix::identity(rows, zero.clone()),
        v: Matrix::identity(cols, zero.clone()),
        v_inv: Matrix::identity(cols, zero),
    };
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(u64, usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if let Some(n) = w.a[(i, j)].norm() {
                        if best.map_or(true, |(b, _, _)| n < b) {
                            best = Some((n, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                return finish(w);
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let pivot = w.a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if w.a[(i, t)].is_zero_element() {
                    continue;
                }
                let (q, r) = w.a[(i, t)].euclid_div(&pivot)?;
                w.add_row(i, t, &q.negated());
                clean &= r.is_zero_element();
            }
            for j in t + 1..cols {
                if w.a[(t, j)].is_zero_element() {
                    continue;
                }
                let (q, r) = w.a[(t, j)].euclid_div(&pivot)?;
                w.add_col(j, t, &q.negated());
                clean &= r.is_zero_element();
            }
            if !clean {
                continue;
            }
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !w.a[(i, j)].euclid_div(&pivot)?.1.is_zero_element() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = pivot.one_like();
                    w.add_row(t, i, &one);
                }
                None => {
                    let (unit, inv) = pivot.normalizing_unit();
                    w.scale_row(t, &unit, &inv);
                    break;
                }
            }
        }
    }
    finish(w)
}

fn finish<T: EuclideanRing>(w: Work<T>) -> Result<Smith<T>> {
    Ok(Smith {
        u: w.u,
        d: w.a,
        v: w.v,
        u_inv: w.u_inv,
        v_inv: w.v_inv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::Field;

    fn px(c: &[i64]) -> UniPoly {
        UniPoly::from_i64s(Field::Rational, c)
    }

    fn mat(rows: Vec<Vec<UniPoly>>) -> Matrix<UniPoly> {
        Matrix::from_rows(rows, UniPoly::zero(Field::Rational)).unwrap()
    }

    #[test]
    fn already_diagonal() {
        let m = mat(vec![vec![px(&[0, 1]), px(&[])], vec![px(&[]), px(&[0, 0, 1])]]);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.d, m);
        assert!(s.u.is_identity() && s.v.is_identity());
    }

    #[test]
    fn invariant_factors_of_small_matrix() {
        let x = px(&[0, 1]);
        let m = mat(vec![vec![x.clone(), x.clone()], vec![x.clone(), px(&[0, 0, 1])]]);
        let s = smith_normal_form(&m).unwrap();
        assert!(s.verify(&m).unwrap());
        // x and x(x-1) = x^2 - x
        assert_eq!(s.invariant_factors(), vec![x, px(&[0, -1, 1])]);
    }

    #[test]
    fn zero_matrix() {
        let m = Matrix::zeros(2, 3, UniPoly::zero(Field::Rational));
        let s = smith_normal_form(&m).unwrap();
        assert!(s.d.is_zero());
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn truncated_base() {
        let f = Field::Prime(5);
        let n = 8;
        let t = TruncatedSeries::variable(f, n);
        let one = TruncatedSeries::one(f, n);
        let u = &one + &t;
        let m = Matrix::from_rows(
            vec![vec![&t * &u, &t * &t], vec![t.clone(), t.clone()]],
            TruncatedSeries::zero(f, n),
        )
        .unwrap();
        let s = smith_normal_form(&m).unwrap();
        assert!(s.verify(&m).unwrap());
        assert_eq!(s.d[(0, 0)], t);
    }
}
