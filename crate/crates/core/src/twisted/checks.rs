//! Structural checks on a [`Scenario`]: ring closure of the member set, the
//! isomorphism `S/R → K_C/K`, the analytic isomorphism `R → S ⋆ K` modulo
//! powers of `x`, ideal images, intermediate rings, `K/aK` and an
//! associated-prime witness.

use serde::Serialize;

use crate::algebra::fraction::LocalFraction;
use crate::algebra::matrix::{linear_solve, rank, Matrix, Subspace};
use crate::algebra::poly::Polynomial;
use crate::algebra::series::Valuation;
use crate::error::{Error, Result};

use super::model::QuotientModel;
use super::{Answer, Scenario};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosureReport {
    pub pass: bool,
    pub pairs_checked: usize,
    pub pairs_skipped: usize,
    /// `(f, g, failing combination)` for the first failure.
    pub counterexample: Option<(String, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaWitness {
    pub depth: i64,
    pub element: String,
    pub derivative: String,
    pub tail_valuation: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaReport {
    pub pass: bool,
    pub witnesses: Vec<AlphaWitness>,
    pub injectivity_samples: usize,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalyticReport {
    pub pass: bool,
    pub level: u32,
    pub family_size: usize,
    /// Dimension of the image of the family, i.e. of the `R/x^m R` model.
    pub ring_dim: usize,
    pub s_dim: usize,
    pub k_dim: usize,
    pub kernel_dim: usize,
    pub hom_pairs: usize,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OneCaseReport {
    pub pass: bool,
    pub level: u32,
    pub image_ideal_dim: usize,
    pub target_dim: usize,
    pub model_dim: usize,
    pub hypothesis_samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrespondenceReport {
    pub pass: bool,
    pub threshold: Option<i64>,
    pub recovered: Option<i64>,
    pub samples: usize,
    pub members: usize,
    pub contains_base_members: bool,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KqReport {
    pub valuation: i64,
    pub dim: usize,
    pub generators: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssocPrimeReport {
    pub witness: String,
    pub derivative_valuation: i64,
    /// Sampled generators `g` of the maximal ideal with the verdict on `s·g`.
    pub products: Vec<(String, Answer)>,
}

impl Scenario {
    fn require_determinate(&self, f: &LocalFraction) -> Result<Answer> {
        match self.membership(f)?.answer {
            Answer::Indeterminate => Err(Error::Indeterminate(format!(
                "membership of {f} at precision {}",
                self.precision()
            ))),
            a => Ok(a),
        }
    }

    /// Sums and products of member pairs are members; pairs with a
    /// non-member are skipped.
    pub fn ring_closure_check(&self, samples: &[(LocalFraction, LocalFraction)]) -> Result<ClosureReport> {
        let mut checked = 0;
        let mut skipped = 0;
        for (f, g) in samples {
            if self.require_determinate(f)? != Answer::Yes || self.require_determinate(g)? != Answer::Yes {
                skipped += 1;
                continue;
            }
            checked += 1;
            for h in [f.try_add(g)?, f.try_mul(g)?] {
                if self.require_determinate(&h)? != Answer::Yes {
                    return Ok(ClosureReport {
                        pass: false,
                        pairs_checked: checked,
                        pairs_skipped: skipped,
                        counterexample: Some((f.to_string(), g.to_string(), h.to_string())),
                    });
                }
            }
        }
        Ok(ClosureReport {
            pass: true,
            pairs_checked: checked,
            pairs_skipped: skipped,
            counterexample: None,
        })
    }

    /// Surjectivity of `s + R ↦ D(s) + K` onto the classes of
    /// `x^(v₀-1), …, x^(v₀-j_max)`, and on `samples` the agreement of
    /// "`D(s)` has no terms below `v₀`" with the membership verdict.
    pub fn alpha_iso_check(&self, j_max: u32, samples: &[LocalFraction]) -> Result<AlphaReport> {
        let v0 = self.require_threshold()?;
        let mut witnesses = Vec::new();
        let mut failure = None;
        for j in 1..=j_max as i64 {
            let k = j - v0;
            let s = self.shift_element(k)?;
            if !self.in_s(&s) {
                failure.get_or_insert(format!("witness {s} is not in S"));
            }
            let (d, _) = self.derivative_series(&s)?;
            if d != self.x_power(-k) {
                failure.get_or_insert(format!("D({s}) = {d}, expected x^{}", -k));
            }
            if self.require_determinate(&s)? != Answer::No {
                failure.get_or_insert(format!("witness {s} lies in R"));
            }
            let tail = if k > 0 {
                let head = self.image(self.twist_var()).expect("twist image").head(k as usize);
                (self.image(self.twist_var()).expect("twist image") - &head).valuation()
            } else {
                self.image(self.twist_var()).expect("twist image").valuation()
            };
            witnesses.push(AlphaWitness {
                depth: j,
                element: s.to_string(),
                derivative: d.to_string(),
                tail_valuation: tail.to_string(),
            });
        }
        for s in samples {
            let verdict = self.require_determinate(s)?;
            let (_, series) = self.derivative_series(s)?;
            let zero_class = match series {
                None => true,
                Some(l) => match l.valuation() {
                    Valuation::Exact(v) => l.window(v.min(v0), v0)?.iter().all(|c| c.is_zero()),
                    Valuation::AtLeast(b) => b >= v0,
                },
            };
            if zero_class != (verdict == Answer::Yes) {
                failure.get_or_insert(format!("class of D({s}) disagrees with membership {verdict}"));
            }
        }
        Ok(AlphaReport {
            pass: failure.is_none(),
            witnesses,
            injectivity_samples: samples.len(),
            failure,
        })
    }

    fn require_threshold(&self) -> Result<i64> {
        self.threshold()
            .ok_or_else(|| Error::Precondition("K = K_C: the lattice is not proper".into()))
    }

    /// Members spanning the level-`m` model: `x^a·y^β`, `x^a·s` with
    /// `D(s) = x^(v₀)`, and `Z^k/x^(k-1)`.
    pub(crate) fn analytic_family(&self, m: u32) -> Result<Vec<LocalFraction>> {
        let v0 = self.require_threshold()?;
        let d = self.y_degree();
        let nf = self.formal_vars().len();
        let mut out = Vec::new();
        let mut betas: Vec<Vec<u32>> = vec![vec![]];
        for _ in 0..nf {
            betas = betas
                .into_iter()
                .flat_map(|b| {
                    (0..=d).map(move |k| {
                        let mut b2 = b.clone();
                        b2.push(k);
                        b2
                    })
                })
                .collect();
        }
        let formal = self.formal_var_indices();
        for a in 0..m {
            for b in &betas {
                let mut e = vec![0u32; self.ring().vars().len()];
                e[self.series_var_index()] = a;
                for (&i, &k) in formal.iter().zip(b) {
                    e[i] = k;
                }
                out.push(self.from_poly(Polynomial::monomial(self.field(), self.ring().vars(), e, self.field().one())));
            }
        }
        let s = self.shift_element(-v0)?;
        for a in 0..m as i64 {
            out.push(s.try_mul(&self.x_power(a))?);
        }
        let z = self.from_poly(self.var(self.twist_var_index()));
        for k in 2..=self.max_exponent().max(2) as i64 {
            let f = z.pow(k as u32).try_mul(&self.x_power(1 - k))?;
            if self.in_s(&f) && self.require_determinate(&f)? == Answer::Yes {
                out.push(f);
            }
        }
        Ok(out)
    }

    /// Checks that `r ↦ (r, D(r))` induces an isomorphism from the
    /// `R/x^m R` model onto `S/x^m S ⋆ K/x^m K`: multiplicativity on all
    /// pairs of a spanning family, surjectivity, and that every kernel
    /// combination is divisible by `x^m` inside `R`.
    pub fn analytic_iso_check(&self, m: u32) -> Result<AnalyticReport> {
        let q = QuotientModel::new(self, m)?;
        let family = self.analytic_family(m)?;
        let images = family.iter().map(|r| q.image(self, r)).collect::<Result<Vec<_>>>()?;
        let mut failure = None;
        let mut hom_pairs = 0;
        for i in 0..family.len() {
            for j in i..family.len() {
                let prod = family[i].try_mul(&family[j])?;
                hom_pairs += 1;
                match q.image(self, &prod) {
                    Ok(v) => {
                        if v != q.model().star_mul(&images[i], &images[j]) {
                            failure.get_or_insert(format!("f({prod}) differs from f({})⋆f({})", family[i], family[j]));
                        }
                    }
                    Err(Error::NotAMember(_)) => {
                        failure.get_or_insert(format!("product {prod} of members is not a member"));
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        let field = self.field();
        let cols = Matrix::from_rows(
            (0..q.dim()).map(|r| images.iter().map(|v| v[r].clone()).collect()).collect(),
            field.zero(),
        )?;
        let ring_dim = rank(&cols);
        let kernel = linear_solve(&cols, &vec![field.zero(); q.dim()])?.kernel;
        let xm = self.x_power(-(m as i64));
        for k in &kernel {
            let mut r = self.from_poly(Polynomial::zero(field, self.ring().vars()));
            for (c, f) in k.iter().zip(&family) {
                if !c.is_zero() {
                    r = r.try_add(&f.try_mul(&self.from_poly(Polynomial::constant(field, self.ring().vars(), c.clone())))?)?;
                }
            }
            let quotient = r.try_mul(&xm)?;
            let ok = self.in_s(&quotient) && self.require_determinate(&quotient)? == Answer::Yes;
            if !ok {
                failure.get_or_insert(format!("kernel element {r} is not in x^{m}·R"));
            }
        }
        let (s_dim, k_dim) = (q.ring_dim(), q.lattice_dim());
        if ring_dim != s_dim + k_dim {
            failure.get_or_insert(format!("image has dimension {ring_dim}, model has {}", s_dim + k_dim));
        }
        Ok(AnalyticReport {
            pass: failure.is_none(),
            level: m,
            family_size: family.len(),
            ring_dim,
            s_dim,
            k_dim,
            kernel_dim: kernel.len(),
            hom_pairs,
            failure,
        })
    }

    /// Elements of `S` multiplied against ideal generators when sampling
    /// `IS ∩ R`.
    fn s_family(&self) -> Result<Vec<LocalFraction>> {
        let mut out = vec![self.element("1")?];
        for i in 0..self.ring().vars().len() {
            out.push(self.from_poly(self.var(i)));
        }
        for k in 1..=2 {
            out.push(self.shift_element(k)?);
            out.push(self.shift_element(k - 1)?.try_mul(&self.x_power(-1))?);
        }
        let z = self.from_poly(self.var(self.twist_var_index()));
        out.push(z.pow(2).try_mul(&self.x_power(-1))?);
        out.retain(|f| self.in_s(f));
        out.dedup();
        Ok(out)
    }

    /// Compares the ideal generated by `f(I)` in the level-`m` model with
    /// `IS ⋆ K`. The hypotheses `x^m ∈ I` and `IS ∩ R = I` are certified
    /// on the model and on sampled products `g·s`.
    pub fn one_case_check(&self, ideal_gens: &[LocalFraction], m: u32) -> Result<OneCaseReport> {
        if ideal_gens.is_empty() {
            return Err(Error::Precondition("the ideal needs at least one generator".into()));
        }
        let q = QuotientModel::new(self, m)?;
        let images = ideal_gens.iter().map(|g| q.image(self, g)).collect::<Result<Vec<_>>>()?;
        let lhs = q.model().ideal_span(&images);

        let upper = QuotientModel::new(self, m + 1)?;
        let upper_images = ideal_gens.iter().map(|g| upper.image(self, g)).collect::<Result<Vec<_>>>()?;
        let xm = upper.image(self, &self.x_power(m as i64))?;
        if !upper.model().ideal_span(&upper_images).contains(&xm) {
            return Err(Error::HypothesisNotCertified(format!("x^{m} is not in the ideal")));
        }

        let mut samples = 0;
        for g in ideal_gens {
            for s in self.s_family()? {
                let r = g.try_mul(&s)?;
                if self.require_determinate(&r)? != Answer::Yes {
                    continue;
                }
                samples += 1;
                if !lhs.contains(&q.image(self, &r)?) {
                    return Err(Error::HypothesisNotCertified(format!(
                        "{r} lies in IS ∩ R but not in I modulo x^{m}"
                    )));
                }
            }
        }

        let ring_parts: Vec<_> = images.iter().map(|v| q.model().split(v).0).collect();
        let rhs = q.ring_ideal_plus_lattice(&ring_parts);
        Ok(OneCaseReport {
            pass: lhs == rhs,
            level: m,
            image_ideal_dim: lhs.dim(),
            target_dim: rhs.dim(),
            model_dim: q.dim(),
            hypothesis_samples: samples,
        })
    }

    /// For `K ⊆ L = {val ≥ v₁}` (or `L = K_C` when `None`): builds the ring
    /// `T = S ∩ D⁻¹(L)` on samples, recovers the lattice from the valuations
    /// of `D(T)` and checks that the recovered lattice defines the same `T`.
    pub fn intermediate_correspondence(
        &self,
        threshold: Option<i64>,
        samples: &[LocalFraction],
    ) -> Result<CorrespondenceReport> {
        let v0 = self.require_threshold()?;
        if let Some(v1) = threshold {
            if v1 > v0 {
                return Err(Error::Precondition(format!("threshold {v1} gives a lattice smaller than K")));
            }
        }
        let mut pool: Vec<LocalFraction> = samples.to_vec();
        if let Some(v1) = threshold {
            pool.push(self.shift_element(-v1)?);
        }
        for k in 1..=3 {
            if let Ok(s) = self.shift_element(k - v0) {
                pool.push(s);
            }
        }
        let t_verdicts = pool
            .iter()
            .map(|f| match self.membership_at(f, threshold)?.answer {
                Answer::Indeterminate => Err(Error::Indeterminate(format!("{f} at precision {}", self.precision()))),
                a => Ok(a),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut recovered: Option<i64> = None;
        for (f, a) in pool.iter().zip(&t_verdicts) {
            if *a != Answer::Yes {
                continue;
            }
            if let (_, Some(l)) = self.derivative_series(f)? {
                if let Valuation::Exact(v) = l.valuation() {
                    recovered = Some(recovered.map_or(v, |r| r.min(v)));
                }
            }
        }
        let mut failure = None;
        let members = t_verdicts.iter().filter(|a| **a == Answer::Yes).count();
        match threshold {
            Some(v1) => {
                if recovered != Some(v1) {
                    failure = Some(format!("recovered lattice bound {recovered:?}, expected {v1}"));
                }
            }
            None => {
                if members != pool.len() {
                    failure = Some("K_C does not admit every sample".into());
                }
            }
        }
        let rederived = match threshold {
            Some(_) => recovered,
            None => None,
        };
        for (f, a) in pool.iter().zip(&t_verdicts) {
            if self.membership_at(f, rederived)?.answer != *a {
                failure.get_or_insert(format!("re-derived ring disagrees on {f}"));
            }
        }
        let mut contains = true;
        for (f, a) in pool.iter().zip(&t_verdicts) {
            if self.require_determinate(f)? == Answer::Yes && *a != Answer::Yes {
                contains = false;
                failure.get_or_insert(format!("{f} is in R but not in T"));
            }
        }
        Ok(CorrespondenceReport {
            pass: failure.is_none(),
            threshold,
            recovered,
            samples: pool.len(),
            members,
            contains_base_members: contains,
            failure,
        })
    }

    /// Minimal number of `S`-module generators of `K/aK` for `a ∈ A`:
    /// `dim_k` of `K/aK` modulo the action of the maximal ideal of `S`.
    pub fn kq_generators(&self, a: &LocalFraction) -> Result<KqReport> {
        self.require_threshold()?;
        if a.is_zero() {
            return Err(Error::Precondition("a must be nonzero".into()));
        }
        let (d, _) = self.derivative_series(a)?;
        if !d.is_zero() {
            return Err(Error::Precondition(format!("{a} is not killed by D")));
        }
        self.check_in_s(a)?;
        let v = match self.embed(a)?.valuation() {
            Valuation::Exact(v) => v,
            Valuation::AtLeast(b) => {
                return Err(Error::Indeterminate(format!("valuation of {a} is at least {b}")))
            }
        };
        let dim = v as usize;
        let field = self.field();
        let mut moved = Subspace::zero(field, dim);
        for img in (0..self.ring().vars().len()).map(|i| self.image(&self.ring().vars()[i]).expect("image")) {
            for c in 0..dim {
                let w: Vec<_> = (0..dim).map(|r| if r >= c { img.coefficient(r - c) } else { field.zero() }).collect();
                moved.insert(&w);
            }
        }
        Ok(KqReport {
            valuation: v,
            dim,
            generators: dim - moved.dim(),
        })
    }

    /// An element `s ∈ S ∖ R` with `D(s) ∈ x⁻¹K ∖ K` and `s·g ∈ R` for the
    /// sampled generators `g` of the maximal ideal lying in `R`.
    pub fn associated_prime_witness(&self) -> Result<AssocPrimeReport> {
        let v0 = self.require_threshold()?;
        let s = self.shift_element(1 - v0)?;
        self.check_in_s(&s)?;
        let dv = match self.derivative_series(&s)?.1.map(|l| l.valuation()) {
            Some(Valuation::Exact(v)) => v,
            _ => return Err(Error::WitnessNotFound("candidate derivative has no exact valuation".into())),
        };
        if self.require_determinate(&s)? != Answer::No || dv != v0 - 1 {
            return Err(Error::WitnessNotFound(format!("{s} is not outside R at depth one")));
        }
        let mut candidates: Vec<LocalFraction> = (0..self.ring().vars().len()).map(|i| self.from_poly(self.var(i))).collect();
        let z = self.from_poly(self.var(self.twist_var_index()));
        candidates.push(z.pow(2).try_mul(&self.x_power(-1))?);
        let mut products = Vec::new();
        for g in candidates {
            if !self.in_s(&g) || self.require_determinate(&g)? != Answer::Yes {
                continue;
            }
            let in_max = matches!(self.embed(&g)?.valuation().at_least(1), Some(true));
            if !in_max {
                continue;
            }
            let sg = s.try_mul(&g)?;
            let a = self.require_determinate(&sg)?;
            products.push((g.to_string(), a));
            if a != Answer::Yes {
                return Err(Error::WitnessNotFound(format!("{s}·{g} is not in R")));
            }
        }
        Ok(AssocPrimeReport {
            witness: s.to_string(),
            derivative_valuation: dv,
            products,
        })
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::algebra::scalar::Field;

    fn gl() -> Scenario {
        Scenario::goodearl_lenagan(Field::Prime(5), 24).unwrap()
    }

    #[test]
    fn closure_on_random_members() {
        let sc = gl();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pairs = sc.sample_member_pairs(40, &mut rng).unwrap();
        let r = sc.ring_closure_check(&pairs).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.pairs_checked, 40);
    }

    #[test]
    fn closure_skips_non_members() {
        let sc = gl();
        let pair = (sc.element("Z/x").unwrap(), sc.element("x").unwrap());
        let member = (sc.element("Z^2/x").unwrap(), sc.element("x").unwrap());
        let r = sc.ring_closure_check(&[pair, member]).unwrap();
        assert!(r.pass);
        assert_eq!((r.pairs_checked, r.pairs_skipped), (1, 1));
    }

    #[test]
    fn alpha_witnesses() {
        let sc = gl();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let samples = sc.sample_elements(30, &mut rng);
        let r = sc.alpha_iso_check(6, &samples).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.witnesses[0].element, "(-x + Z)/x");
        assert_eq!(r.witnesses[0].tail_valuation, "2");
        assert!(matches!(sc.alpha_iso_check(24, &[]), Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn analytic_iso_levels_one_and_two() {
        let sc = gl();
        for m in 1..=2 {
            let r = sc.analytic_iso_check(m).unwrap();
            assert!(r.pass, "{r:?}");
            assert_eq!(r.s_dim, 7 * m as usize);
            assert_eq!(r.k_dim, m as usize);
            assert_eq!(r.ring_dim, r.s_dim + r.k_dim);
        }
    }

    #[test]
    fn one_case_for_x_and_z() {
        let sc = gl();
        let gens = [sc.element("x").unwrap(), sc.element("Z").unwrap()];
        let r = sc.one_case_check(&gens, 2).unwrap();
        assert!(r.pass, "{r:?}");
        let unit = sc.one_case_check(&[sc.element("1").unwrap()], 2).unwrap();
        assert!(unit.pass);
        assert_eq!(unit.image_ideal_dim, unit.model_dim);
    }

    #[test]
    fn one_case_rejects_power_ideal() {
        let sc = gl();
        let r = sc.one_case_check(&[sc.element("x^2").unwrap()], 2);
        assert!(matches!(r, Err(Error::HypothesisNotCertified(_))), "{r:?}");
    }

    #[test]
    fn correspondence_thresholds() {
        let sc = gl();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let samples = sc.sample_elements(30, &mut rng);
        for t in [Some(0), Some(-1), Some(-3), None] {
            let r = sc.intermediate_correspondence(t, &samples).unwrap();
            assert!(r.pass, "{t:?}: {r:?}");
            assert!(r.contains_base_members);
        }
        assert!(sc.intermediate_correspondence(Some(1), &samples).is_err());
    }

    #[test]
    fn kq_counts() {
        let sc = gl();
        let r = sc.kq_generators(&sc.element("x").unwrap()).unwrap();
        assert_eq!((r.dim, r.generators), (1, 1));
        let r = sc.kq_generators(&sc.element("x^2").unwrap()).unwrap();
        assert_eq!((r.dim, r.generators), (2, 1));
        let r = sc.kq_generators(&sc.element("1 + x").unwrap()).unwrap();
        assert_eq!((r.dim, r.generators), (0, 0));
        assert!(sc.kq_generators(&sc.element("Z").unwrap()).is_err());
    }

    #[test]
    fn associated_prime() {
        let sc = gl();
        let r = sc.associated_prime_witness().unwrap();
        assert_eq!(r.witness, "(-x + Z)/x");
        assert_eq!(r.derivative_valuation, -1);
        assert!(r.products.iter().all(|(_, a)| *a == Answer::Yes));
        assert!(r.products.iter().any(|(g, _)| g == "y"));
        let shifted = sc.clone().with_threshold(Some(-1));
        assert_eq!(shifted.associated_prime_witness().unwrap().witness, "(-x^2 - x + Z)/x^2");
        assert!(matches!(sc.with_threshold(None).associated_prime_witness(), Err(Error::Precondition(_))));
    }
}
