//! Finite-dimensional commutative algebras given by structure constants,
//! modules over them, and local models with an identified maximal ideal.

use std::collections::HashMap;

use super::matrix::{is_zero_vector, linear_solve, unit_vector, Matrix, Subspace};
use super::scalar::{Field, Scalar};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

pub type Vector = Vec<Scalar>;

/// A commutative unital algebra `k^n` with sparse structure constants.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    field: Field,
    labels: Vec<String>,
    one: Vector,
    /// `table[i][j]` is `e_i · e_j` as sparse coordinates.
    table: Vec<Vec<Vec<(usize, Scalar)>>>,
    /// Algebra generators over `k` (the unit is implicit).
    generators: Vec<Vector>,
}

pub fn monomial_label(names: &[String], exps: &[u32]) -> String {
    let parts: Vec<String> = names
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(n, &e)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn sparse(v: &[Scalar]) -> Vec<(usize, Scalar)> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

impl FiniteAlgebra {
    /// Builds an algebra from dense products `products[i][j] = e_i · e_j`.
    pub fn from_products(
        field: Field,
        labels: Vec<String>,
        one: Vector,
        products: &[Vec<Vector>],
        generators: Vec<Vector>,
    ) -> Result<Self> {
        let n = labels.len();
        let shape_ok = one.len() == n
            && products.len() == n
            && products.iter().all(|r| r.len() == n && r.iter().all(|v| v.len() == n))
            && generators.iter().all(|g| g.len() == n);
        if !shape_ok {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: products.len(),
            });
        }
        let table = products.iter().map(|r| r.iter().map(|v| sparse(v)).collect()).collect();
        Ok(FiniteAlgebra {
            field,
            labels,
            one,
            table,
            generators,
        })
    }

    /// `k[vars]` modulo the monomials outside `exps`. The exponent set must be
    /// closed under division and contain the constant monomial.
    pub fn monomial(field: Field, names: &[String], exps: Vec<Vec<u32>>) -> Result<Self> {
        let index: HashMap<Vec<u32>, usize> = exps.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let zero_exp = vec![0u32; names.len()];
        if !index.contains_key(&zero_exp) || exps.iter().any(|e| e.len() != names.len()) {
            return Err(Error::NotFiniteDimensional(
                "monomial basis must contain 1 and match the variable count".into(),
            ));
        }
        for e in &exps {
            for i in 0..e.len() {
                if e[i] > 0 {
                    let mut d = e.clone();
                    d[i] -= 1;
                    if !index.contains_key(&d) {
                        return Err(Error::NotFiniteDimensional(
                            "monomial basis is not closed under division".into(),
                        ));
                    }
                }
            }
        }
        let n = exps.len();
        let mut table = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in i..n {
                let s: Vec<u32> = exps[i].iter().zip(&exps[j]).map(|(a, b)| a + b).collect();
                if let Some(&k) = index.get(&s) {
                    table[i][j] = vec![(k, field.one())];
                    table[j][i] = vec![(k, field.one())];
                }
            }
        }
        let generators = (0..names.len())
            .filter_map(|v| {
                let mut e = zero_exp.clone();
                e[v] = 1;
                index.get(&e).map(|&k| unit_vector(field, n, k))
            })
            .collect();
        Ok(FiniteAlgebra {
            field,
            labels: exps.iter().map(|e| monomial_label(names, e)).collect(),
            one: unit_vector(field, n, index[&zero_exp]),
            table,
            generators,
        })
    }

    /// `k[vars]/(vars)^(max_degree+1)`.
    pub fn truncated_polynomial(field: Field, names: &[String], max_degree: u32) -> Result<Self> {
        let mut exps = vec![vec![]];
        for _ in names {
            exps = exps
                .into_iter()
                .flat_map(|e: Vec<u32>| {
                    let used: u32 = e.iter().sum();
                    (0..=max_degree - used).map(move |k| {
                        let mut e2 = e.clone();
                        e2.push(k);
                        e2
                    })
                })
                .collect();
        }
        exps.sort_by_key(|e| (e.iter().sum::<u32>(), std::cmp::Reverse(e.clone())));
        Self::monomial(field, names, exps)
    }

    /// `k[vars]/(v_1^{b_1}, …, v_n^{b_n})`.
    pub fn monomial_box(field: Field, names: &[String], bounds: &[u32]) -> Result<Self> {
        if names.len() != bounds.len() || bounds.contains(&0) {
            return Err(Error::NotFiniteDimensional("box bounds must be positive, one per variable".into()));
        }
        let mut exps = vec![vec![]];
        for &b in bounds {
            exps = exps
                .into_iter()
                .flat_map(|e: Vec<u32>| {
                    (0..b).map(move |k| {
                        let mut e2 = e.clone();
                        e2.push(k);
                        e2
                    })
                })
                .collect();
        }
        Self::monomial(field, names, exps)
    }

    /// `k[t]/(g)` with basis `1, t, …, t^{deg g - 1}`.
    pub fn univariate_quotient(g: &UniPoly, var: &str) -> Result<Self> {
        let field = g.field();
        let d = match g.degree() {
            Some(d) if d > 0 => d,
            _ => return Err(Error::NotFiniteDimensional("quotient by a constant".into())),
        };
        let basis: Vec<UniPoly> = (0..d)
            .map(|i| {
                let mut c = vec![field.zero(); i + 1];
                c[i] = field.one();
                UniPoly::from_coeffs(field, c)
            })
            .collect();
        let coords = |p: &UniPoly| -> Result<Vector> {
            let r = p.div_rem(g)?.1;
            Ok((0..d).map(|i| r.coefficient(i)).collect())
        };
        let mut products = vec![vec![vec![]; d]; d];
        for i in 0..d {
            for j in 0..d {
                use super::ring::RingElement;
                products[i][j] = coords(&basis[i].times(&basis[j]))?;
            }
        }
        let labels = (0..d)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            })
            .collect();
        let gens = if d > 1 {
            vec![unit_vector(field, d, 1)]
        } else {
            vec![]
        };
        Self::from_products(field, labels, unit_vector(field, d, 0), &products, gens)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn one(&self) -> &Vector {
        &self.one
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn zero_vector(&self) -> Vector {
        vec![self.field.zero(); self.dim()]
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        unit_vector(self.field, self.dim(), i)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn element(&self, label: &str) -> Option<Vector> {
        self.index_of(label).map(|i| self.basis_vector(i))
    }

    pub fn mul(&self, u: &[Scalar], v: &[Scalar]) -> Vector {
        let mut out = self.zero_vector();
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &self.table[i][j] {
                    out[*k] = &out[*k] + &(&ab * c);
                }
            }
        }
        out
    }

    pub fn pow(&self, u: &[Scalar], mut e: u64) -> Vector {
        let mut base = u.to_vec();
        let mut acc = self.one.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Matrix of `v ↦ u·v`; column `j` is `u · e_j`.
    pub fn multiplication_matrix(&self, u: &[Scalar]) -> Matrix<Scalar> {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n, self.field.zero());
        for j in 0..n {
            let col = self.mul(u, &self.basis_vector(j));
            for (i, c) in col.into_iter().enumerate() {
                m[(i, j)] = c;
            }
        }
        m
    }

    pub fn inverse(&self, u: &[Scalar]) -> Option<Vector> {
        let m = self.multiplication_matrix(u);
        linear_solve(&m, &self.one).ok()?.solution
    }

    pub fn is_unit(&self, u: &[Scalar]) -> bool {
        self.inverse(u).is_some()
    }

    pub fn is_nilpotent(&self, u: &[Scalar]) -> bool {
        let mut p = u.to_vec();
        let mut k = 1;
        while k < self.dim().max(1) {
            p = self.mul(&p, &p);
            k *= 2;
        }
        is_zero_vector(&p)
    }

    fn multipliers(&self) -> Vec<Vector> {
        if self.generators.is_empty() {
            (0..self.dim()).map(|i| self.basis_vector(i)).collect()
        } else {
            self.generators.clone()
        }
    }

    fn saturate(&self, mut space: Subspace, mut pending: Vec<Vector>) -> Subspace {
        let mults = self.multipliers();
        while let Some(v) = pending.pop() {
            for g in &mults {
                let w = self.mul(g, &v);
                if space.insert(&w) {
                    pending.push(w);
                }
            }
        }
        space
    }

    /// The ideal generated by `gens`, as a subspace.
    pub fn ideal_span(&self, gens: &[Vector]) -> Subspace {
        let mut space = Subspace::zero(self.field, self.dim());
        let mut pending = vec![];
        for g in gens {
            if space.insert(g) {
                pending.push(g.clone());
            }
        }
        self.saturate(space, pending)
    }

    /// The `k`-subalgebra generated by `gens`.
    pub fn subalgebra_span(&self, gens: &[Vector]) -> Subspace {
        let mut space = Subspace::zero(self.field, self.dim());
        space.insert(&self.one);
        let mut pending = vec![self.one.clone()];
        while let Some(v) = pending.pop() {
            for g in gens {
                let w = self.mul(g, &v);
                if space.insert(&w) {
                    pending.push(w);
                }
            }
        }
        space
    }

    pub fn is_ideal(&self, space: &Subspace) -> bool {
        let mults = self.multipliers();
        space
            .basis()
            .iter()
            .all(|b| mults.iter().all(|g| space.contains(&self.mul(g, b))))
    }

    /// `span{a·b : a ∈ A, b ∈ B}`.
    pub fn product_span(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut out = Subspace::zero(self.field, self.dim());
        for u in a.basis() {
            for v in b.basis() {
                out.insert(&self.mul(u, v));
            }
        }
        out
    }

    /// The quotient by an ideal. Its basis is the ideal's complement
    /// coordinates, so elements project via `ideal.quotient_coordinates`.
    pub fn quotient(&self, ideal: &Subspace) -> Result<FiniteAlgebra> {
        if !self.is_ideal(ideal) {
            return Err(Error::Precondition("subspace is not an ideal".into()));
        }
        let keep = ideal.complement_indices();
        let proj = |v: &Vector| ideal.quotient_coordinates(v);
        let products: Vec<Vec<Vector>> = keep
            .iter()
            .map(|&i| {
                keep.iter()
                    .map(|&j| {
                        let p: Vector = {
                            let mut w = self.zero_vector();
                            for (k, c) in &self.table[i][j] {
                                w[*k] = c.clone();
                            }
                            w
                        };
                        proj(&p)
                    })
                    .collect()
            })
            .collect();
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        let gens = self
            .generators
            .iter()
            .map(&proj)
            .filter(|g| !is_zero_vector(g))
            .collect();
        FiniteAlgebra::from_products(self.field, labels, proj(&self.one), &products, gens)
    }

    /// The subalgebra generated by `gens`, as an algebra in its own right,
    /// together with its span inside `self`. Its basis is the echelon basis
    /// of the span.
    pub fn subalgebra(&self, gens: &[Vector]) -> Result<(FiniteAlgebra, Subspace)> {
        let span = self.subalgebra_span(gens);
        let basis = span.basis().to_vec();
        let coords = |v: &Vector| {
            span.coordinates(v)
                .ok_or_else(|| Error::Precondition("subspace is not closed under multiplication".into()))
        };
        let mut products = Vec::with_capacity(basis.len());
        for u in &basis {
            let mut row = Vec::with_capacity(basis.len());
            for v in &basis {
                row.push(coords(&self.mul(u, v))?);
            }
            products.push(row);
        }
        let labels = span.pivots().iter().map(|&p| self.labels[p].clone()).collect();
        let gen_coords = gens.iter().map(coords).collect::<Result<Vec<_>>>()?;
        let alg = FiniteAlgebra::from_products(self.field, labels, coords(&self.one)?, &products, gen_coords)?;
        Ok((alg, span))
    }

    /// `self ⋆ module`: the idealization, with basis `(e_i, 0)` then `(0, f_k)`.
    pub fn idealize(&self, module: &FiniteModule) -> Result<FiniteAlgebra> {
        if module.action.len() != self.dim() || module.field != self.field {
            return Err(Error::RingMismatch("module is not over this algebra".into()));
        }
        let (n, m) = (self.dim(), module.dim());
        let total = n + m;
        let mut table = vec![vec![Vec::new(); total]; total];
        for (i, row) in self.table.iter().enumerate() {
            table[i][..n].clone_from_slice(row);
            for k in 0..m {
                let col: Vec<(usize, Scalar)> = (0..m)
                    .filter_map(|r| {
                        let c = &module.action[i][(r, k)];
                        (!c.is_zero()).then(|| (n + r, c.clone()))
                    })
                    .collect();
                table[i][n + k] = col.clone();
                table[n + k][i] = col;
            }
        }
        let mut labels: Vec<String> = self.labels.iter().map(|l| format!("({l},0)")).collect();
        labels.extend(module.labels.iter().map(|l| format!("(0,{l})")));
        let embed = |v: &Vector| {
            let mut w = v.clone();
            w.extend(std::iter::repeat(self.field.zero()).take(m));
            w
        };
        let mut generators: Vec<Vector> = self.multipliers().iter().map(embed).collect();
        generators.extend((0..m).map(|k| unit_vector(self.field, total, n + k)));
        Ok(FiniteAlgebra {
            field: self.field,
            labels,
            one: embed(&self.one),
            table,
            generators,
        })
    }
}

/// A finite-dimensional module over a [`FiniteAlgebra`], stored by the
/// action matrix of every algebra basis element.
#[derive(Clone, Debug)]
pub struct FiniteModule {
    field: Field,
    labels: Vec<String>,
    action: Vec<Matrix<Scalar>>,
}

impl FiniteModule {
    pub fn from_action(field: Field, labels: Vec<String>, action: Vec<Matrix<Scalar>>) -> Result<Self> {
        let m = labels.len();
        if let Some(bad) = action.iter().find(|a| a.rows() != m || a.cols() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: bad.rows(),
            });
        }
        Ok(FiniteModule { field, labels, action })
    }

    pub fn zero(alg: &FiniteAlgebra) -> Self {
        FiniteModule {
            field: alg.field,
            labels: vec![],
            action: vec![Matrix::zeros(0, 0, alg.field.zero()); alg.dim()],
        }
    }

    /// `alg^rank`.
    pub fn free(alg: &FiniteAlgebra, rank: usize) -> Self {
        let n = alg.dim();
        let m = n * rank;
        let action = (0..n)
            .map(|i| {
                let mi = alg.multiplication_matrix(&alg.basis_vector(i));
                let mut a = Matrix::zeros(m, m, alg.field.zero());
                for r in 0..rank {
                    for p in 0..n {
                        for q in 0..n {
                            a[(r * n + p, r * n + q)] = mi[(p, q)].clone();
                        }
                    }
                }
                a
            })
            .collect();
        let labels = (0..rank)
            .flat_map(|r| alg.labels.iter().map(move |l| format!("{l}·e{}", r + 1)))
            .collect();
        FiniteModule {
            field: alg.field,
            labels,
            action,
        }
    }

    /// An ideal of `alg` viewed as a module.
    pub fn from_ideal(alg: &FiniteAlgebra, ideal: &Subspace) -> Result<Self> {
        if !alg.is_ideal(ideal) {
            return Err(Error::Precondition("subspace is not an ideal".into()));
        }
        let basis = ideal.basis();
        let m = basis.len();
        let action = (0..alg.dim())
            .map(|i| {
                let mut a = Matrix::zeros(m, m, alg.field.zero());
                for (k, b) in basis.iter().enumerate() {
                    let img = alg.mul(&alg.basis_vector(i), b);
                    let c = ideal.coordinates(&img).expect("ideal");
                    for (r, v) in c.into_iter().enumerate() {
                        a[(r, k)] = v;
                    }
                }
                a
            })
            .collect();
        let labels = ideal.pivots().iter().map(|&p| alg.labels[p].clone()).collect();
        Ok(FiniteModule {
            field: alg.field,
            labels,
            action,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn zero_vector(&self) -> Vector {
        vec![self.field.zero(); self.dim()]
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        unit_vector(self.field, self.dim(), i)
    }

    pub fn act(&self, a: &[Scalar], v: &[Scalar]) -> Vector {
        let mut out = self.zero_vector();
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let img = self.action[i].mul_vec(v).expect("module vector length");
            for (o, w) in out.iter_mut().zip(img) {
                if !w.is_zero() {
                    *o = &*o + &(c * &w);
                }
            }
        }
        out
    }

    pub fn submodule_span(&self, alg: &FiniteAlgebra, gens: &[Vector]) -> Subspace {
        let mut space = Subspace::zero(self.field, self.dim());
        let mut pending = vec![];
        for g in gens {
            if space.insert(g) {
                pending.push(g.clone());
            }
        }
        let mults = alg.multipliers();
        while let Some(v) = pending.pop() {
            for g in &mults {
                let w = self.act(g, &v);
                if space.insert(&w) {
                    pending.push(w);
                }
            }
        }
        space
    }

    pub fn is_submodule(&self, alg: &FiniteAlgebra, space: &Subspace) -> bool {
        let mults = alg.multipliers();
        space
            .basis()
            .iter()
            .all(|b| mults.iter().all(|g| space.contains(&self.act(g, b))))
    }

    /// `span{a·v : a ∈ ideal, v ∈ self}`.
    pub fn ideal_times_module(&self, ideal: &Subspace) -> Subspace {
        let mut out = Subspace::zero(self.field, self.dim());
        for a in ideal.basis() {
            for k in 0..self.dim() {
                out.insert(&self.act(a, &self.basis_vector(k)));
            }
        }
        out
    }

    pub fn quotient(&self, alg: &FiniteAlgebra, sub: &Subspace) -> Result<FiniteModule> {
        if !self.is_submodule(alg, sub) {
            return Err(Error::Precondition("subspace is not a submodule".into()));
        }
        let keep = sub.complement_indices();
        let m = keep.len();
        let action = self
            .action
            .iter()
            .map(|a| {
                let mut q = Matrix::zeros(m, m, self.field.zero());
                for (k, &src) in keep.iter().enumerate() {
                    let col: Vector = (0..self.dim()).map(|r| a[(r, src)].clone()).collect();
                    for (r, v) in sub.quotient_coordinates(&col).into_iter().enumerate() {
                        q[(r, k)] = v;
                    }
                }
                q
            })
            .collect();
        Ok(FiniteModule {
            field: self.field,
            labels: keep.iter().map(|&i| self.labels[i].clone()).collect(),
            action,
        })
    }

    pub fn direct_sum(&self, other: &FiniteModule) -> Result<FiniteModule> {
        if self.action.len() != other.action.len() || self.field != other.field {
            return Err(Error::RingMismatch("modules over different algebras".into()));
        }
        let (a, b) = (self.dim(), other.dim());
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(x, y)| {
                let mut m = Matrix::zeros(a + b, a + b, self.field.zero());
                for i in 0..a {
                    for j in 0..a {
                        m[(i, j)] = x[(i, j)].clone();
                    }
                }
                for i in 0..b {
                    for j in 0..b {
                        m[(a + i, a + j)] = y[(i, j)].clone();
                    }
                }
                m
            })
            .collect();
        let mut labels: Vec<String> = self.labels.iter().map(|l| format!("{l}⊕0")).collect();
        labels.extend(other.labels.iter().map(|l| format!("0⊕{l}")));
        Ok(FiniteModule {
            field: self.field,
            labels,
            action,
        })
    }
}

/// A local finite-dimensional algebra with its maximal ideal.
#[derive(Clone, Debug)]
pub struct LocalModel {
    algebra: FiniteAlgebra,
    max_ideal: Subspace,
    residue_degree: usize,
}

impl LocalModel {
    /// Takes the span of the nilpotent basis elements as the maximal ideal;
    /// every other basis element must be a unit, and the span must be an
    /// ideal of codimension one.
    pub fn identify(algebra: FiniteAlgebra) -> Result<Self> {
        let mut nil = Subspace::zero(algebra.field, algebra.dim());
        for i in 0..algebra.dim() {
            let e = algebra.basis_vector(i);
            if algebra.is_nilpotent(&e) {
                nil.insert(&e);
            } else if !algebra.is_unit(&e) {
                return Err(Error::NotLocal(format!(
                    "basis element {} is neither a unit nor nilpotent",
                    algebra.labels[i]
                )));
            }
        }
        if algebra.dim() == 0 {
            return Err(Error::NotLocal("zero algebra".into()));
        }
        if nil.dim() + 1 != algebra.dim() || !algebra.is_ideal(&nil) {
            return Err(Error::NotLocal(format!(
                "nilpotent basis elements span a subspace of codimension {}",
                algebra.dim() - nil.dim()
            )));
        }
        Ok(LocalModel {
            algebra,
            max_ideal: nil,
            residue_degree: 1,
        })
    }

    /// Uses the ideal generated by `gens` as the maximal ideal. The ideal
    /// must consist of nilpotents and have codimension `residue_degree`;
    /// maximality itself (the quotient being a field) is the caller's claim.
    pub fn with_max_ideal(algebra: FiniteAlgebra, gens: &[Vector], residue_degree: usize) -> Result<Self> {
        let m = algebra.ideal_span(gens);
        if let Some(b) = m.basis().iter().find(|b| !algebra.is_nilpotent(b)) {
            return Err(Error::NotLocal(format!("ideal contains a non-nilpotent element {b:?}")));
        }
        if algebra.dim() - m.dim() != residue_degree || residue_degree == 0 {
            return Err(Error::NotMaximal(format!(
                "quotient has dimension {}, expected residue degree {residue_degree}",
                algebra.dim() - m.dim()
            )));
        }
        Ok(LocalModel {
            algebra,
            max_ideal: m,
            residue_degree,
        })
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn max_ideal(&self) -> &Subspace {
        &self.max_ideal
    }

    pub fn residue_degree(&self) -> usize {
        self.residue_degree
    }

    /// `𝔪^k` (with `𝔪^0` the whole algebra).
    pub fn max_ideal_power(&self, k: u32) -> Subspace {
        if k == 0 {
            return Subspace::full(self.algebra.field, self.algebra.dim());
        }
        let mut p = self.max_ideal.clone();
        for _ in 1..k {
            p = self.algebra.product_span(&p, &self.max_ideal);
        }
        p
    }

    fn over_residue(&self, dim: usize) -> Result<usize> {
        if dim % self.residue_degree != 0 {
            return Err(Error::Precondition(format!(
                "dimension {dim} is not a multiple of the residue degree {}",
                self.residue_degree
            )));
        }
        Ok(dim / self.residue_degree)
    }

    /// `dim 𝔪/𝔪²` over the residue field.
    pub fn embedding_dimension(&self) -> Result<usize> {
        let m2 = self.max_ideal_power(2);
        self.over_residue(self.max_ideal.dim() - m2.dim())
    }

    /// `dim M/𝔪M` over the residue field.
    pub fn minimal_generators(&self, module: &FiniteModule) -> Result<usize> {
        let mm = module.ideal_times_module(&self.max_ideal);
        self.over_residue(module.dim() - mm.dim())
    }

    /// The model modulo `𝔪^k`.
    pub fn truncate(&self, k: u32) -> Result<LocalModel> {
        let mk = self.max_ideal_power(k);
        let algebra = self.algebra.quotient(&mk)?;
        let mut m = Subspace::zero(algebra.field, algebra.dim());
        for b in self.max_ideal.basis() {
            m.insert(&mk.quotient_coordinates(b));
        }
        Ok(LocalModel {
            algebra,
            max_ideal: m,
            residue_degree: self.residue_degree,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn truncated_polynomial_dimension() {
        let a = FiniteAlgebra::truncated_polynomial(Field::Prime(5), &names(&["x", "y"]), 2).unwrap();
        assert_eq!(a.dim(), 6);
        let x = a.element("x").unwrap();
        let y = a.element("y").unwrap();
        assert_eq!(a.mul(&x, &y), a.element("x*y").unwrap());
        assert!(is_zero_vector(&a.mul(&a.mul(&x, &y), &x)));
    }

    #[test]
    fn local_invariants_of_plane() {
        let a = FiniteAlgebra::truncated_polynomial(Field::Rational, &names(&["x", "y"]), 2).unwrap();
        let l = LocalModel::identify(a).unwrap();
        assert_eq!(l.embedding_dimension().unwrap(), 2);
    }

    #[test]
    fn cusp_subalgebra() {
        let f = Field::Rational;
        let amb = FiniteAlgebra::monomial_box(f, &names(&["t"]), &[7]).unwrap();
        let t2 = amb.element("t^2").unwrap();
        let t3 = amb.element("t^3").unwrap();
        let (sub, _) = amb.subalgebra(&[t2, t3]).unwrap();
        assert_eq!(sub.dim(), 6);
        let l = LocalModel::identify(sub).unwrap();
        assert_eq!(l.embedding_dimension().unwrap(), 2);
    }

    #[test]
    fn non_local_rejected() {
        // k[t]/(t^2 - t) = k × k
        let g = UniPoly::from_i64s(Field::Rational, &[0, -1, 1]);
        let a = FiniteAlgebra::univariate_quotient(&g, "t").unwrap();
        assert!(matches!(LocalModel::identify(a), Err(Error::NotLocal(_))));
    }

    #[test]
    fn quotient_of_idealization() {
        let f = Field::Prime(5);
        let a = FiniteAlgebra::monomial_box(f, &names(&["t"]), &[2]).unwrap();
        let m = FiniteModule::free(&a, 1);
        let r = a.idealize(&m).unwrap();
        let ideal = r.ideal_span(&[r.basis_vector(2)]);
        assert_eq!(ideal.dim(), 2);
        let q = r.quotient(&ideal).unwrap();
        assert_eq!(q.dim(), 2);
    }

    #[test]
    fn minimal_generators_of_free_module() {
        let a = FiniteAlgebra::truncated_polynomial(Field::Rational, &names(&["x"]), 3).unwrap();
        let l = LocalModel::identify(a.clone()).unwrap();
        let m = FiniteModule::free(&a, 3);
        assert_eq!(l.minimal_generators(&m).unwrap(), 3);
    }
}
