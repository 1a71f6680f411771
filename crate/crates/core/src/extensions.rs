//! Ring extensions `A ⊆ S` modelled inside a truncated polynomial algebra:
//! analyticity along the powers of an element `c`, the quadratic
//! condition, contraction and extension of ideals, and the
//! generator bound for contracted ideals.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::finite::{FiniteAlgebra, Vector};
use crate::algebra::fraction::LocalFraction;
use crate::algebra::matrix::{is_zero_vector, linear_solve, rank, sub_vectors, Matrix, Subspace};
use crate::algebra::poly::{vars, Polynomial, Vars};
use crate::algebra::presentation::RingPresentation;
use crate::algebra::scalar::{Field, Scalar};
use crate::algebra::series::Valuation;
use crate::dsl::expr::parse_expr;
use crate::error::{Error, Result};
use crate::twisted::Scenario;

/// Default depth for quantifiers over the powers of `c`.
pub const DEFAULT_MAX_EXPONENT: u32 = 3;

/// `A ⊆ S` as subalgebras of `k[vars]/(x^L, y^(d+1), …)`, where `x` is the
/// variable of `c` and explicitly embedded variables are replaced by their
/// series, truncated to polynomials in `x`.
#[derive(Clone, Debug)]
pub struct ExtensionInstance {
    field: Field,
    ambient: FiniteAlgebra,
    ambient_vars: Vars,
    exps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    series_var: usize,
    source_vars: Vars,
    /// Image in the ambient ring of every source variable.
    substitution: Vec<Polynomial>,
    small: Subspace,
    big: Subspace,
    c: Vector,
    c_degree: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Small,
    Big,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalyticityReport {
    pub pass: bool,
    pub exponent: u32,
    pub divisible: bool,
    pub torsion_free: bool,
    pub small_quotient_dim: usize,
    pub big_quotient_dim: usize,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadraticReport {
    pub pass: bool,
    pub pairs_checked: usize,
    pub witness: Option<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContractExtendReport {
    pub side: Side,
    /// Least `j` with `c^j` in the ideal.
    pub power: u32,
    pub ideal_dim: usize,
    pub image_dim: usize,
    pub round_trip: bool,
    pub image: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorBoundReport {
    pub pass: bool,
    pub generators: Vec<String>,
    pub bound: usize,
    pub power: u32,
    pub quasilocal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeCorrespondenceReport {
    pub pass: bool,
    pub small_quotient_dim: usize,
    pub big_quotient_dim: usize,
}

impl ExtensionInstance {
    /// Builds the instance from generators given over the ambient variables.
    /// `bounds[i]` is the number of powers of variable `i` kept.
    pub fn from_generators(
        field: Field,
        names: &[String],
        bounds: &[u32],
        small_gens: &[Polynomial],
        big_gens: &[Polynomial],
        c: &Polynomial,
    ) -> Result<Self> {
        let ambient_vars = vars(names);
        let subst: Vec<Polynomial> = (0..names.len()).map(|i| Polynomial::var(field, &ambient_vars, i)).collect();
        Self::build(field, ambient_vars.clone(), bounds, ambient_vars, subst, small_gens, big_gens, c)
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        field: Field,
        ambient_vars: Vars,
        bounds: &[u32],
        source_vars: Vars,
        substitution: Vec<Polynomial>,
        small_gens: &[Polynomial],
        big_gens: &[Polynomial],
        c: &Polynomial,
    ) -> Result<Self> {
        let names: Vec<String> = ambient_vars.to_vec();
        let ambient = FiniteAlgebra::monomial_box(field, &names, bounds)?;
        let mut exps: Vec<Vec<u32>> = vec![vec![]];
        for &b in bounds {
            exps = exps
                .into_iter()
                .flat_map(|e| {
                    (0..b).map(move |k| {
                        let mut e2 = e.clone();
                        e2.push(k);
                        e2
                    })
                })
                .collect();
        }
        let index = exps.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let c_amb = c.with_vars(&source_vars)?.evaluate(&substitution, &Polynomial::one(field, &ambient_vars));
        let support = c_amb.support();
        let series_var = match support.as_slice() {
            [i] => *i,
            _ => return Err(Error::Precondition(format!("{c} must be a nonconstant polynomial in one variable"))),
        };
        let mut inst = ExtensionInstance {
            field,
            ambient,
            ambient_vars,
            exps,
            index,
            series_var,
            source_vars,
            substitution,
            small: Subspace::zero(field, 0),
            big: Subspace::zero(field, 0),
            c: vec![],
            c_degree: c_amb.degree_in(series_var),
        };
        let to_vecs = |gens: &[Polynomial]| gens.iter().map(|g| inst.to_vector(g)).collect::<Result<Vec<_>>>();
        let small_v = to_vecs(small_gens)?;
        let big_v = to_vecs(big_gens)?;
        inst.c = inst.to_vector(c)?;
        inst.small = inst.ambient.subalgebra_span(&small_v);
        inst.big = inst.ambient.subalgebra_span(&big_v);
        if !inst.big.contains_space(&inst.small) {
            return Err(Error::Precondition("the small ring is not contained in the big ring".into()));
        }
        if !inst.small.contains(&inst.c) {
            return Err(Error::Precondition(format!("{c} is not in the small ring")));
        }
        inst.check_nonzerodivisor()?;
        Ok(inst)
    }

    /// Builds the instance from two presentations; variables with series
    /// images are replaced by the image truncated below `x^(N/2)`, where `x`
    /// is the variable of `c`.
    pub fn from_presentations(
        small: &RingPresentation,
        big: &RingPresentation,
        c: &Polynomial,
        precision: usize,
        y_degree: u32,
    ) -> Result<Self> {
        let field = big.field();
        if small.field() != field {
            return Err(Error::FieldMismatch);
        }
        for v in small.vars().iter() {
            if !big.has_var(v) {
                return Err(Error::Precondition(format!("variable {v} of the small ring is missing from the big ring")));
            }
        }
        let c_big = c.with_vars(big.vars())?;
        let cvars = c_big.support();
        let series_name = match cvars.as_slice() {
            [i] => big.vars()[*i].clone(),
            _ => return Err(Error::Precondition(format!("{c} must be a polynomial in one variable"))),
        };
        let level = (precision / 2).max(2) as u32;
        let names: Vec<String> = big.vars().iter().filter(|v| !big.images().contains_key(*v)).cloned().collect();
        let ambient_vars = vars(&names);
        let bounds: Vec<u32> = names.iter().map(|n| if *n == series_name { level } else { y_degree + 1 }).collect();
        let xi = names.iter().position(|n| *n == series_name).expect("series variable");
        let substitution = big
            .vars()
            .iter()
            .map(|v| match big.images().get(v) {
                Some(s) => {
                    if s.precision() < level as usize {
                        return Err(Error::PrecisionExhausted(format!("image of {v} known below x^{}", s.precision())));
                    }
                    Ok(Polynomial::from_terms(
                        field,
                        &ambient_vars,
                        (0..level as usize).map(|k| {
                            let mut e = vec![0u32; names.len()];
                            e[xi] = k as u32;
                            (e, s.coefficient(k))
                        }),
                    ))
                }
                None => Polynomial::var_named(field, &ambient_vars, v),
            })
            .collect::<Result<Vec<_>>>()?;
        let small_gens = small
            .ring_generators()
            .into_iter()
            .map(|g| g.with_vars(big.vars()))
            .collect::<Result<Vec<_>>>()?;
        Self::build(
            field,
            ambient_vars,
            &bounds,
            big.vars().clone(),
            substitution,
            &small_gens,
            &big.ring_generators(),
            &c_big,
        )
    }

    /// `A = k[x, y]`-model inside `S = A[Z]`-model, with `c = x`.
    pub fn from_scenario(sc: &Scenario) -> Result<Self> {
        let ring = sc.ring();
        let base_names: Vec<String> = ring
            .vars()
            .iter()
            .filter(|v| v.as_str() != sc.twist_var())
            .cloned()
            .collect();
        let small = RingPresentation::polynomial(sc.field(), &base_names)?;
        let c = Polynomial::var_named(sc.field(), small.vars(), sc.series_var())?;
        let mut big = RingPresentation::polynomial(sc.field(), &base_names)?;
        big = big.adjoin(sc.twist_var(), sc.image(sc.twist_var()).expect("twist image").clone())?;
        Self::from_presentations(&small, &big, &c, sc.precision(), sc.y_degree())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> &FiniteAlgebra {
        &self.ambient
    }

    pub fn small(&self) -> &Subspace {
        &self.small
    }

    pub fn big(&self) -> &Subspace {
        &self.big
    }

    /// Number of powers of the variable of `c` kept in the model.
    pub fn level(&self) -> u32 {
        self.exps.iter().map(|e| e[self.series_var]).max().unwrap_or(0) + 1
    }

    /// Reads a polynomial in the source variables as an ambient vector;
    /// monomials outside the box vanish.
    pub fn to_vector(&self, p: &Polynomial) -> Result<Vector> {
        let p = p.with_vars(&self.source_vars)?;
        let q = p.evaluate(&self.substitution, &Polynomial::one(self.field, &self.ambient_vars));
        let mut v = self.ambient.zero_vector();
        for (m, c) in q.terms() {
            if let Some(&i) = self.index.get(&m.0) {
                v[i] = &v[i] + c;
            }
        }
        Ok(v)
    }

    pub fn to_polynomial(&self, v: &[Scalar]) -> Polynomial {
        Polynomial::from_terms(
            self.field,
            &self.ambient_vars,
            v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (self.exps[i].clone(), c.clone())),
        )
    }

    /// Parses a polynomial written in the source variables.
    pub fn element(&self, text: &str) -> Result<Vector> {
        let p = parse_expr(text)?.to_polynomial(self.field, &self.source_vars)?;
        self.to_vector(&p)
    }

    pub fn c_power(&self, e: u32) -> Vector {
        self.ambient.pow(&self.c, e as u64)
    }

    /// `span{g·b : g ∈ gens, b ∈ ring}`; for a subalgebra `ring` this is the
    /// ideal of `ring` generated by `gens`.
    fn times_ring(&self, gens: &[Vector], ring: &Subspace) -> Subspace {
        let mut out = Subspace::zero(self.field, self.ambient.dim());
        for g in gens {
            for b in ring.basis() {
                out.insert(&self.ambient.mul(g, b));
            }
        }
        out
    }

    fn check_nonzerodivisor(&self) -> Result<()> {
        let top = self.level().saturating_sub(self.c_degree);
        let low: Vec<usize> = (0..self.exps.len()).filter(|&i| self.exps[i][self.series_var] < top).collect();
        let rows: Vec<Vec<Scalar>> = low
            .iter()
            .map(|&i| self.ambient.mul(&self.c, &self.ambient.basis_vector(i)))
            .collect();
        if rows.is_empty() {
            return Err(Error::PrecisionExhausted("no room for the multiplication by c".into()));
        }
        let m = Matrix::from_rows(rows, self.field.zero())?;
        if rank(&m) != low.len() {
            return Err(Error::Precondition("c is a zero divisor in the truncated model".into()));
        }
        Ok(())
    }

    /// `S = A + c^m S` and `A ∩ c^m S = c^m A` in the model, plus the
    /// resulting equality of `dim A/c^m A` and `dim S/c^m S`.
    pub fn is_c_analytic(&self, m: u32) -> Result<AnalyticityReport> {
        if self.level() <= m * self.c_degree {
            return Err(Error::PrecisionExhausted(format!(
                "model keeps {} powers, c^{m} needs more than {}",
                self.level(),
                m * self.c_degree
            )));
        }
        let cm = self.c_power(m);
        let cm_big = self.times_ring(std::slice::from_ref(&cm), &self.big);
        let cm_small = self.times_ring(&[cm], &self.small);
        let mut witness = None;
        let covered = self.small.sum(&cm_big);
        let divisible = match self.big.basis().iter().find(|b| !covered.contains(b)) {
            Some(b) => {
                witness = Some(self.to_polynomial(b).to_string());
                false
            }
            None => true,
        };
        let meet = self.small.intersection(&cm_big);
        let torsion_free = match meet.basis().iter().find(|b| !cm_small.contains(b)) {
            Some(b) => {
                witness.get_or_insert(self.to_polynomial(b).to_string());
                false
            }
            None => true,
        };
        let small_q = self.small.dim() - cm_small.dim();
        let big_q = self.big.dim() - cm_big.dim();
        Ok(AnalyticityReport {
            pass: divisible && torsion_free && small_q == big_q,
            exponent: m,
            divisible,
            torsion_free,
            small_quotient_dim: small_q,
            big_quotient_dim: big_q,
            witness,
        })
    }

    fn ideal_of(&self, gens: &[Vector], side: Side) -> Subspace {
        match side {
            Side::Small => self.times_ring(gens, &self.small),
            Side::Big => self.times_ring(gens, &self.big),
        }
    }

    fn least_c_power(&self, ideal: &Subspace, max_exponent: u32) -> Result<u32> {
        (1..=max_exponent)
            .find(|&j| ideal.contains(&self.c_power(j)))
            .ok_or_else(|| Error::IdealMissesMultiplicativeSet(format!("no power c^j with j ≤ {max_exponent} in the ideal")))
    }

    fn check_side(&self, gens: &[Vector], side: Side) -> Result<()> {
        let ring = match side {
            Side::Small => &self.small,
            Side::Big => &self.big,
        };
        if gens.iter().any(|g| !ring.contains(g)) {
            return Err(Error::NotInRing(format!("ideal generators must lie in the {side} ring")));
        }
        Ok(())
    }

    /// Extension `IS` of an ideal of `A`, or contraction `J ∩ A` of an
    /// ideal of `S`, with the round trip back to the original ideal.
    pub fn contract_extend(&self, gens: &[Vector], side: Side, max_exponent: u32) -> Result<ContractExtendReport> {
        self.check_side(gens, side)?;
        let ideal = self.ideal_of(gens, side);
        let power = self.least_c_power(&ideal, max_exponent)?;
        let (image, back) = match side {
            Side::Small => {
                let ext = self.times_ring(ideal.basis(), &self.big);
                let back = ext.intersection(&self.small);
                (ext, back)
            }
            Side::Big => {
                let con = ideal.intersection(&self.small);
                let back = self.times_ring(con.basis(), &self.big);
                (con, back)
            }
        };
        Ok(ContractExtendReport {
            side,
            power,
            ideal_dim: ideal.dim(),
            image_dim: image.dim(),
            round_trip: back == ideal,
            image: image.basis().iter().map(|b| self.to_polynomial(b).to_string()).collect(),
        })
    }

    /// Generators of `J ∩ A` for an ideal `J = (x_1, …, x_n)` of `S`
    /// containing `γ = c^e`: writes `x_i = a_i + γ²s_i` with `a_i ∈ J ∩ A`
    /// and returns `a_1, …, a_n, γ²`; with `quasilocal`, `γ²` is dropped
    /// once `(a_i)A + 𝔪(J ∩ A) = J ∩ A` is verified.
    pub fn generator_bound(&self, gens: &[Vector], quasilocal: bool, max_exponent: u32) -> Result<GeneratorBoundReport> {
        self.check_side(gens, Side::Big)?;
        let ideal = self.ideal_of(gens, Side::Big);
        let e = self.least_c_power(&ideal, max_exponent)?;
        if !self.is_c_analytic(2 * e)?.pass {
            return Err(Error::Precondition(format!("the extension is not analytic along c^{}", 2 * e)));
        }
        let contracted = ideal.intersection(&self.small);
        let gamma2 = self.c_power(2 * e);
        let gamma2_big = self.times_ring(std::slice::from_ref(&gamma2), &self.big);
        let mut columns: Vec<Vector> = contracted.basis().to_vec();
        columns.extend(gamma2_big.basis().iter().cloned());
        let n = self.ambient.dim();
        let mat = Matrix::from_rows(
            (0..n).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect(),
            self.field.zero(),
        )?;
        let mut parts = Vec::new();
        for g in gens {
            let sol = linear_solve(&mat, g)?
                .solution
                .ok_or_else(|| Error::DecompositionNotFound(format!("{} ∉ (J ∩ A) + γ²S", self.to_polynomial(g))))?;
            let mut a = self.ambient.zero_vector();
            for (c, col) in sol.iter().zip(&columns).take(contracted.dim()) {
                if !c.is_zero() {
                    for (slot, v) in a.iter_mut().zip(col) {
                        *slot = &*slot + &(c * v);
                    }
                }
            }
            let rest = sub_vectors(g, &a);
            if !gamma2_big.contains(&rest) || !contracted.contains(&a) || !self.small.contains(&a) {
                return Err(Error::DecompositionNotFound("decomposition failed verification".into()));
            }
            parts.push(a);
        }
        let mut out = parts.clone();
        out.push(gamma2);
        if self.ideal_of(&out, Side::Small) != contracted {
            return Ok(GeneratorBoundReport {
                pass: false,
                generators: out.iter().map(|v| self.to_polynomial(v).to_string()).collect(),
                bound: gens.len() + 1,
                power: e,
                quasilocal,
            });
        }
        if quasilocal {
            let m_small = self.small_maximal_ideal();
            let m_j = self.ambient_product(&m_small, &contracted);
            let generated = self.ideal_of(&parts, Side::Small);
            if generated.sum(&m_j) == contracted {
                out = parts;
            }
        }
        out.retain(|v| !is_zero_vector(v));
        let bound = if quasilocal { gens.len() } else { gens.len() + 1 };
        Ok(GeneratorBoundReport {
            pass: out.len() <= bound && self.ideal_of(&out, Side::Small) == contracted,
            generators: out.iter().map(|v| self.to_polynomial(v).to_string()).collect(),
            bound,
            power: e,
            quasilocal,
        })
    }

    /// Elements of `A` without constant term.
    fn small_maximal_ideal(&self) -> Subspace {
        let one = self.index[&vec![0u32; self.ambient_vars.len()]];
        let mut no_const = Subspace::zero(self.field, self.ambient.dim());
        for i in 0..self.ambient.dim() {
            if i != one {
                no_const.insert(&self.ambient.basis_vector(i));
            }
        }
        self.small.intersection(&no_const)
    }

    fn ambient_product(&self, a: &Subspace, b: &Subspace) -> Subspace {
        self.ambient.product_span(a, b)
    }

    /// For an ideal `P` of `A` meeting `C`: the map `A/P → S/PS` is a
    /// bijection and respects the multiplication tables.
    pub fn prime_correspondence_check(&self, gens: &[Vector], max_exponent: u32) -> Result<PrimeCorrespondenceReport> {
        self.check_side(gens, Side::Small)?;
        let p = self.ideal_of(gens, Side::Small);
        self.least_c_power(&p, max_exponent)?;
        let ps = self.times_ring(p.basis(), &self.big);
        let small_q = self.small.dim() - p.dim();
        let big_q = self.big.dim() - ps.dim();
        let injective = ps.intersection(&self.small) == p;
        let mut reps: Subspace = ps.clone();
        let mut basis = Vec::new();
        for b in self.small.basis() {
            if reps.insert(b) {
                basis.push(b.clone());
            }
        }
        let mut tables_agree = true;
        for u in &basis {
            for v in &basis {
                let prod = self.ambient.mul(u, v);
                if !self.small.contains(&prod) || !self.small.sum(&ps).contains(&prod) {
                    tables_agree = false;
                }
            }
        }
        Ok(PrimeCorrespondenceReport {
            pass: injective && small_q == big_q && tables_agree,
            small_quotient_dim: small_q,
            big_quotient_dim: big_q,
        })
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Small => "small",
            Side::Big => "big",
        })
    }
}

/// A subring `R ⊆ S` given through operations on `S` and a linear map on
/// `S` whose kernel, on the elements considered, is `R`.
pub trait SubringOracle {
    type Elem: Clone + fmt::Display;
    fn field(&self) -> Field;
    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    /// Images of `elems` under one linear map vanishing exactly on `R`.
    fn obstructions(&self, elems: &[Self::Elem]) -> Result<Vec<Vector>>;
    /// Elements of `R` spanning it within the bounds of the model.
    fn small_family(&self) -> Result<Vec<Self::Elem>>;
}

impl SubringOracle for ExtensionInstance {
    type Elem = ShownVector;

    fn field(&self) -> Field {
        self.field
    }

    fn multiply(&self, a: &ShownVector, b: &ShownVector) -> Result<ShownVector> {
        Ok(self.shown(self.ambient.mul(&a.coords, &b.coords)))
    }

    fn obstructions(&self, elems: &[ShownVector]) -> Result<Vec<Vector>> {
        Ok(elems.iter().map(|e| self.small.quotient_coordinates(&e.coords)).collect())
    }

    fn small_family(&self) -> Result<Vec<ShownVector>> {
        Ok(self.small.basis().iter().map(|b| self.shown(b.clone())).collect())
    }
}

/// An ambient vector with its polynomial rendering.
#[derive(Clone, Debug, PartialEq)]
pub struct ShownVector {
    pub coords: Vector,
    text: String,
}

impl fmt::Display for ShownVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl ExtensionInstance {
    pub fn shown(&self, coords: Vector) -> ShownVector {
        let text = self.to_polynomial(&coords).to_string();
        ShownVector { coords, text }
    }

    pub fn shown_element(&self, text: &str) -> Result<ShownVector> {
        Ok(self.shown(self.element(text)?))
    }
}

impl SubringOracle for Scenario {
    type Elem = LocalFraction;

    fn field(&self) -> Field {
        Scenario::field(self)
    }

    fn multiply(&self, a: &LocalFraction, b: &LocalFraction) -> Result<LocalFraction> {
        a.try_mul(b)
    }

    /// Coefficients of the embedded `D(f)` below the lattice bound.
    fn obstructions(&self, elems: &[LocalFraction]) -> Result<Vec<Vector>> {
        let v0 = self
            .threshold()
            .ok_or_else(|| Error::Precondition("K = K_C: every element of S is in R".into()))?;
        let mut series = Vec::with_capacity(elems.len());
        let mut lo = v0;
        for f in elems {
            self.check_in_s(f)?;
            let (_, s) = self.derivative_series(f)?;
            if let Some(l) = &s {
                match l.valuation() {
                    Valuation::Exact(v) => lo = lo.min(v),
                    Valuation::AtLeast(b) if b < v0 => {
                        return Err(Error::PrecisionExhausted(format!("D({f}) is unknown below x^{v0}")))
                    }
                    Valuation::AtLeast(_) => {}
                }
            }
            series.push(s);
        }
        series
            .into_iter()
            .map(|s| match s {
                None => Ok(vec![self.field().zero(); (v0 - lo) as usize]),
                Some(l) => l.window(lo, v0),
            })
            .collect()
    }

    fn small_family(&self) -> Result<Vec<LocalFraction>> {
        self.analytic_family(2)
    }
}

/// `st ∈ sR + tR + R` for each sampled pair, decided by solving
/// `Φ(st) = Φ(s·r) + Φ(t·r')` over the small family.
pub fn is_quadratic<O: SubringOracle>(oracle: &O, pairs: &[(O::Elem, O::Elem)]) -> Result<QuadraticReport> {
    let family = oracle.small_family()?;
    for (k, (s, t)) in pairs.iter().enumerate() {
        let mut elems = vec![oracle.multiply(s, t)?];
        for r in &family {
            elems.push(oracle.multiply(s, r)?);
        }
        for r in &family {
            elems.push(oracle.multiply(t, r)?);
        }
        let obs = oracle.obstructions(&elems)?;
        let rows = obs[0].len();
        let solvable = if rows == 0 {
            true
        } else {
            let mat = Matrix::from_rows(
                (0..rows).map(|r| obs[1..].iter().map(|c| c[r].clone()).collect()).collect(),
                oracle.field().zero(),
            )?;
            linear_solve(&mat, &obs[0])?.solution.is_some()
        };
        if !solvable {
            return Ok(QuadraticReport {
                pass: false,
                pairs_checked: k + 1,
                witness: Some((s.to_string(), t.to_string())),
            });
        }
    }
    Ok(QuadraticReport {
        pass: true,
        pairs_checked: pairs.len(),
        witness: None,
    })
}
