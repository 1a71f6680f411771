//! Finitely generated submodules of `V^n` for the discrete valuation ring
//! `V = k[t]_(t)`, handled modulo `t^N`; plus stability of ideals and
//! minimal generator counts over finite local algebras.

use serde::Serialize;

use crate::algebra::finite::{FiniteAlgebra, FiniteModule, LocalModel, Vector};
use crate::algebra::matrix::{is_zero_vector, Matrix, Subspace};
use crate::algebra::poly::{vars, Polynomial, Vars};
use crate::algebra::scalar::{Field, Scalar};
use crate::algebra::series::{TruncatedSeries, Valuation};
use crate::algebra::snf::{smith_normal_form, Smith};
use crate::dsl::expr::parse_expr;
use crate::error::{Error, Result};

/// Upper bound on the number of candidate elements tried by
/// [`is_stable_ideal`].
pub const MAX_STABILITY_CANDIDATES: usize = 20_000;

/// `k[t]_(t)` modulo `t^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct DvrModel {
    field: Field,
    precision: usize,
    uniformizer: String,
}

/// The submodule of `V^n` generated by the given vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct DvrModule {
    model: DvrModel,
    ambient: usize,
    generators: Vec<Vec<TruncatedSeries>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankReport {
    pub rank: usize,
    /// Valuations of the invariant factors.
    pub invariant_valuations: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreenessReport {
    pub pass: bool,
    pub exponent: usize,
    pub rank: usize,
    pub quotient_dim: usize,
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityReport {
    pub pass: bool,
    pub witness: Option<String>,
    pub candidates_tried: usize,
    /// Whether every candidate in the search space was tried.
    pub exhaustive: bool,
    pub square_dim: usize,
}

impl DvrModel {
    pub fn new(field: Field, precision: usize, uniformizer: &str) -> Result<Self> {
        if precision < 2 {
            return Err(Error::Precondition("precision must be at least 2".into()));
        }
        Ok(DvrModel {
            field,
            precision,
            uniformizer: uniformizer.to_string(),
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn uniformizer(&self) -> &str {
        &self.uniformizer
    }

    fn vars(&self) -> Vars {
        vars(&[self.uniformizer.as_str()])
    }

    pub fn zero(&self) -> TruncatedSeries {
        TruncatedSeries::zero(self.field, self.precision)
    }

    /// `t^k`, zero once `k ≥ N`.
    pub fn t_power(&self, k: usize) -> TruncatedSeries {
        if k >= self.precision {
            return self.zero();
        }
        TruncatedSeries::monomial(self.field, self.precision, k, self.field.one())
    }

    /// Reads an element written in the uniformizer; the denominator must
    /// be a unit of `V`.
    pub fn element(&self, text: &str) -> Result<TruncatedSeries> {
        let frac = parse_expr(text)?.to_fraction(self.field, &self.vars(), &[0])?;
        let num = self.series_of(frac.numerator());
        let den = self.series_of(frac.denominator());
        Ok(&num * &den.invert().map_err(|_| Error::NonUnitDenominator(text.to_string()))?)
    }

    fn series_of(&self, p: &Polynomial) -> TruncatedSeries {
        let mut coeffs = vec![self.field.zero(); self.precision];
        for (m, c) in p.terms() {
            if let Some(slot) = coeffs.get_mut(m.0[0] as usize) {
                *slot = c.clone();
            }
        }
        TruncatedSeries::from_coeffs(self.field, self.precision, &coeffs)
    }

    pub fn show(&self, s: &TruncatedSeries) -> String {
        Polynomial::from_terms(
            self.field,
            &self.vars(),
            s.coeffs().iter().enumerate().map(|(i, c)| (vec![i as u32], c.clone())),
        )
        .to_string()
    }
}

impl DvrModule {
    pub fn new(model: DvrModel, ambient: usize, generators: Vec<Vec<TruncatedSeries>>) -> Result<Self> {
        for g in &generators {
            if g.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: g.len(),
                });
            }
            if g.iter().any(|c| c.field() != model.field || c.precision() != model.precision) {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(DvrModule {
            model,
            ambient,
            generators,
        })
    }

    /// Parses each generator from its coordinate expressions.
    pub fn parse(model: DvrModel, ambient: usize, generators: &[Vec<&str>]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|g| g.iter().map(|c| model.element(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(model, ambient, gens)
    }

    /// `V^n` itself.
    pub fn free(model: DvrModel, rank: usize) -> Self {
        let gens = (0..rank)
            .map(|i| (0..rank).map(|j| if i == j { model.t_power(0) } else { model.zero() }).collect())
            .collect();
        DvrModule {
            model,
            ambient: rank,
            generators: gens,
        }
    }

    pub fn model(&self) -> &DvrModel {
        &self.model
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[Vec<TruncatedSeries>] {
        &self.generators
    }

    /// Generators as the columns of an `n × g` matrix.
    fn matrix(&self) -> Result<Matrix<TruncatedSeries>> {
        let rows = (0..self.ambient)
            .map(|i| self.generators.iter().map(|g| g[i].clone()).collect())
            .collect();
        if self.generators.is_empty() {
            return Ok(Matrix::zeros(self.ambient, 0, self.model.zero()));
        }
        Matrix::from_rows(rows, self.model.zero())
    }

    fn smith(&self) -> Result<Smith<TruncatedSeries>> {
        smith_normal_form(&self.matrix()?)
    }

    /// The rank `r = dim K/tK`, read off the Smith form of the generators.
    pub fn tffr_rank(&self) -> Result<RankReport> {
        if self.generators.is_empty() || self.ambient == 0 {
            return Ok(RankReport {
                rank: 0,
                invariant_valuations: vec![],
            });
        }
        let s = self.smith()?;
        let invariant_valuations = s
            .invariant_factors()
            .iter()
            .map(|d| match d.valuation() {
                Valuation::Exact(v) => v as usize,
                Valuation::AtLeast(_) => unreachable!("invariant factors are nonzero"),
            })
            .collect::<Vec<_>>();
        Ok(RankReport {
            rank: invariant_valuations.len(),
            invariant_valuations,
        })
    }

    /// Coordinates of `v ∈ (V/t^N)^n` in `k^(nN)`.
    fn flatten(&self, v: &[TruncatedSeries]) -> Vector {
        v.iter().flat_map(|c| c.coeffs().iter().cloned()).collect()
    }

    fn shifted(&self, v: &[TruncatedSeries], k: usize) -> Vec<TruncatedSeries> {
        let tk = self.model.t_power(k);
        v.iter().map(|c| c * &tk).collect()
    }

    /// `k`-span of `t^j·g` over the generators and `j ≥ from`.
    fn span_from(&self, gens: &[Vec<TruncatedSeries>], from: usize) -> Subspace {
        let mut out = Subspace::zero(self.model.field, self.ambient * self.model.precision);
        for g in gens {
            for j in from..self.model.precision {
                out.insert(&self.flatten(&self.shifted(g, j)));
            }
        }
        out
    }

    /// `K/t^m K` is free over `V/t^m` of rank `tffr_rank(K)`: the Smith
    /// basis of `K` and its multiples by `1, …, t^(m-1)` span the quotient,
    /// whose dimension is exactly `r·m`.
    pub fn quotient_freeness(&self, m: usize) -> Result<FreenessReport> {
        if m == 0 {
            return Err(Error::Precondition("the exponent must be at least 1".into()));
        }
        let rank = self.tffr_rank()?;
        let max_v = rank.invariant_valuations.iter().copied().max().unwrap_or(0);
        if m + max_v > self.model.precision {
            return Err(Error::PrecisionExhausted(format!(
                "t^{m} times an invariant factor of valuation {max_v} is below t^{}",
                self.model.precision
            )));
        }
        let basis: Vec<Vec<TruncatedSeries>> = if rank.rank == 0 {
            vec![]
        } else {
            let s = self.smith()?;
            let diag = s.diagonal();
            (0..rank.rank)
                .map(|i| (0..self.ambient).map(|r| &s.u_inv[(r, i)] * &diag[i]).collect())
                .collect()
        };
        let k_full = self.span_from(&self.generators, 0);
        let k_deep = self.span_from(&self.generators, m);
        let mut covered = k_deep.clone();
        for b in &basis {
            for j in 0..m {
                covered.insert(&self.flatten(&self.shifted(b, j)));
            }
        }
        let quotient_dim = k_full.dim() - k_deep.dim();
        let pass = covered == k_full && quotient_dim == rank.rank * m;
        Ok(FreenessReport {
            pass,
            exponent: m,
            rank: rank.rank,
            quotient_dim,
            basis: basis.iter().map(|b| b.iter().map(|c| self.model.show(c)).collect()).collect(),
        })
    }
}

/// `I² = iI` for some `i ∈ I`, searched among the generators and their
/// linear combinations with small coefficients (every coefficient of a
/// field with at most 25 elements).
pub fn is_stable_ideal(alg: &FiniteAlgebra, gens: &[Vector]) -> Result<StabilityReport> {
    let ideal = alg.ideal_span(gens);
    if ideal.dim() == 0 {
        return Err(Error::Precondition("the ideal must be nonzero".into()));
    }
    let square = alg.product_span(&ideal, &ideal);
    let field = alg.field();
    let coefficient_set: Vec<Scalar> = match field {
        Field::Prime(p) if p <= 25 => (0..p as i64).map(|c| field.from_i64(c)).collect(),
        _ => [0, 1, -1, 2, -2].iter().map(|&c| field.from_i64(c)).collect(),
    };
    let works = |i: &Vector| {
        let mut prod = Subspace::zero(field, alg.dim());
        for b in ideal.basis() {
            prod.insert(&alg.mul(i, b));
        }
        prod == square
    };
    let gens: Vec<&Vector> = gens.iter().filter(|g| !is_zero_vector(g)).collect();
    let mut tried = 0;
    for g in &gens {
        tried += 1;
        if works(g) {
            return Ok(stable(alg, g, tried, square.dim()));
        }
    }
    let q = coefficient_set.len();
    let total = (q as u128).checked_pow(gens.len() as u32).unwrap_or(u128::MAX);
    let exhaustive = total <= MAX_STABILITY_CANDIDATES as u128;
    let mut counter = vec![0usize; gens.len()];
    loop {
        let mut k = 0;
        while k < counter.len() {
            counter[k] += 1;
            if counter[k] < q {
                break;
            }
            counter[k] = 0;
            k += 1;
        }
        if k == counter.len() || tried >= MAX_STABILITY_CANDIDATES {
            break;
        }
        if counter.iter().filter(|&&c| c != 0).count() < 2 {
            continue;
        }
        let mut cand = alg.zero_vector();
        for (g, &c) in gens.iter().zip(&counter) {
            let coef = &coefficient_set[c];
            for (slot, v) in cand.iter_mut().zip(g.iter()) {
                *slot = &*slot + &(coef * v);
            }
        }
        tried += 1;
        if works(&cand) {
            return Ok(stable(alg, &cand, tried, square.dim()));
        }
    }
    Ok(StabilityReport {
        pass: false,
        witness: None,
        candidates_tried: tried,
        exhaustive,
        square_dim: square.dim(),
    })
}

fn stable(alg: &FiniteAlgebra, i: &Vector, tried: usize, square_dim: usize) -> StabilityReport {
    StabilityReport {
        pass: true,
        witness: Some(show_vector(alg, i)),
        candidates_tried: tried,
        exhaustive: false,
        square_dim,
    }
}

/// A vector in basis labels, like `2*t^2 + t^3`.
pub fn show_vector(alg: &FiniteAlgebra, v: &[Scalar]) -> String {
    let terms: Vec<String> = alg
        .labels()
        .iter()
        .zip(v)
        .filter(|(_, c)| !c.is_zero())
        .map(|(l, c)| match (c.is_one(), l.as_str()) {
            (_, "1") => c.to_string(),
            (true, _) => l.clone(),
            (false, _) => format!("{c}*{l}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// `dim M/𝔪M` over the residue field of a local model.
pub fn minimal_generators(local: &LocalModel, module: &FiniteModule) -> Result<usize> {
    local.minimal_generators(module)
}
