//! Executes a parsed script: builds the declared objects, then runs each
//! check against its target and records a verdict.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use super::ast::*;
use super::expr::Expr;
use super::report::{CommandRecord, Report, Verdict};
use crate::algebra::finite::{monomial_label, FiniteAlgebra, FiniteModule, LocalModel, Vector};
use crate::algebra::fraction::LocalFraction;
use crate::algebra::matrix::Subspace;
use crate::algebra::poly::{vars, Polynomial};
use crate::algebra::presentation::RingPresentation;
use crate::algebra::scalar::Field;
use crate::algebra::series::TruncatedSeries;
use crate::algebra::unipoly::UniPoly;
use crate::derivations::DerivationSpec;
use crate::dvr::{is_stable_ideal, DvrModel, DvrModule};
use crate::error::{Error, Result};
use crate::extensions::{is_quadratic, ExtensionInstance, Side};
use crate::idealization::IdealizationModel;
use crate::twisted::{global_stable_instance, Answer, GlobalStableSpec, Scenario};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_CLOSURE_SAMPLES: usize = 200;
pub const DEFAULT_ALPHA_DEPTH: u32 = 6;
const DEFAULT_ALPHA_SAMPLES: usize = 20;
const DEFAULT_CORRESPONDENCE_SAMPLES: usize = 40;
const DEFAULT_QUADRATIC_SAMPLES: usize = 10;
const MAX_BASIS_PAIRS: usize = 50;

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub seed: u64,
    pub precision: Option<usize>,
    pub max_exponent: Option<u32>,
    pub y_degree: Option<u32>,
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: DEFAULT_SEED,
            precision: None,
            max_exponent: None,
            y_degree: None,
            timing: true,
        }
    }
}

/// A finite local algebra, with the polynomial ring it was cut from when
/// its elements can be written as polynomials.
#[derive(Clone, Debug)]
struct LocalRing {
    local: LocalModel,
    source: Option<(Vec<String>, FiniteAlgebra, Option<Subspace>)>,
}

#[derive(Clone, Debug)]
enum Object {
    Series(TruncatedSeries),
    Ring(RingPresentation),
    Dvr(DvrModel),
    Local(Box<LocalRing>),
    Derivation(Box<DerivationSpec>),
    Set(String),
    Lattice(Option<i64>),
    DvrModule(DvrModule),
    Scenario(Box<Scenario>),
    Extension(Box<ExtensionInstance>),
    Global(GlobalStableSpec),
}

impl Object {
    fn sort(&self) -> &'static str {
        match self {
            Object::Series(_) => "series",
            Object::Ring(_) => "ring",
            Object::Dvr(_) => "dvr",
            Object::Local(_) => "local ring",
            Object::Derivation(_) => "derivation",
            Object::Set(_) => "set",
            Object::Lattice(_) => "lattice",
            Object::DvrModule(_) => "module",
            Object::Scenario(_) => "scenario",
            Object::Extension(_) => "extension",
            Object::Global(_) => "global spec",
        }
    }
}

struct Env {
    field: Field,
    precision: usize,
    options: RunOptions,
    objects: HashMap<String, std::result::Result<Object, String>>,
}

/// Outcome of one check before timing and bookkeeping.
struct Outcome {
    verdict: Verdict,
    summary: String,
    evidence: serde_json::Value,
}

impl Outcome {
    fn from_report<T: Serialize>(pass: bool, summary: String, report: &T) -> Self {
        Outcome {
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            summary,
            evidence: serde_json::to_value(report).expect("report serializes"),
        }
    }
}

fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

/// Runs every check of `script` in order.
pub fn run(script: &Script, options: &RunOptions) -> Report {
    let field = script
        .statements
        .iter()
        .find_map(|s| match &s.kind {
            StatementKind::Field(FieldName::Rational) => Some(Ok(Field::Rational)),
            StatementKind::Field(FieldName::Prime(p)) => Some(Field::prime(*p)),
            _ => None,
        })
        .unwrap_or(Ok(Field::Rational));
    let script_precision = script
        .statements
        .iter()
        .find_map(|s| match s.kind {
            StatementKind::Precision(n) => Some(n),
            _ => None,
        })
        .unwrap_or(crate::twisted::DEFAULT_PRECISION);
    let precision = options.precision.unwrap_or(script_precision);
    let mut records = Vec::new();
    let field = match field {
        Ok(f) => f,
        Err(e) => {
            for (index, s) in script.checks().enumerate() {
                records.push(error_record(s, &e, index));
            }
            return Report::new(options.seed, precision, records);
        }
    };
    let mut env = Env {
        field,
        precision,
        options: options.clone(),
        objects: HashMap::new(),
    };
    let mut index = 0;
    for s in &script.statements {
        match &s.kind {
            StatementKind::Check { kind, target, args } => {
                let start = Instant::now();
                let outcome = env
                    .check(*kind, target, args, index)
                    .unwrap_or_else(|e| error_outcome(&e));
                let elapsed = start.elapsed().as_secs_f64() * 1e3;
                records.push(CommandRecord {
                    line: s.location.line,
                    command: s.to_string(),
                    kind: *kind,
                    target: target.clone(),
                    verdict: outcome.verdict,
                    summary: outcome.summary,
                    evidence: outcome.evidence,
                    elapsed_ms: options.timing.then_some((elapsed * 1e3).round() / 1e3),
                });
                index += 1;
            }
            kind => {
                if let Some(name) = kind.declared() {
                    let obj = env.declare(kind).map_err(|e| e.to_string());
                    env.objects.insert(name.to_string(), obj);
                }
            }
        }
    }
    Report::new(options.seed, precision, records)
}

fn error_outcome(e: &Error) -> Outcome {
    let verdict = match e {
        Error::Indeterminate(_) | Error::HypothesisNotCertified(_) => Verdict::Indeterminate,
        _ => Verdict::Error,
    };
    Outcome {
        verdict,
        summary: e.to_string(),
        evidence: serde_json::Value::Null,
    }
}

fn error_record(s: &Statement, e: &Error, _index: usize) -> CommandRecord {
    let StatementKind::Check { kind, target, .. } = &s.kind else {
        unreachable!("only checks are recorded")
    };
    CommandRecord {
        line: s.location.line,
        command: s.to_string(),
        kind: *kind,
        target: target.clone(),
        verdict: Verdict::Error,
        summary: e.to_string(),
        evidence: serde_json::Value::Null,
        elapsed_ms: None,
    }
}

/// Keyed and positional check arguments; every argument must be used.
struct Args<'a> {
    args: &'a [Arg],
    used: Vec<bool>,
}

impl<'a> Args<'a> {
    fn new(args: &'a [Arg]) -> Self {
        Args {
            args,
            used: vec![false; args.len()],
        }
    }

    fn keyed(&mut self, key: &str) -> Option<&'a Value> {
        let i = self.args.iter().position(|a| a.key.as_deref() == Some(key))?;
        self.used[i] = true;
        Some(&self.args[i].value)
    }

    fn flag(&mut self, name: &str) -> bool {
        for (i, a) in self.args.iter().enumerate() {
            if a.key.is_none() && matches!(&a.value, Value::Expr(Expr::Var(v)) if v == name) {
                self.used[i] = true;
                return true;
            }
        }
        false
    }

    /// Bare identifiers not claimed as flags count as positional values.
    fn positional_with_names(&mut self) -> Vec<&'a Value> {
        let mut out = Vec::new();
        for (i, a) in self.args.iter().enumerate() {
            if a.key.is_none() && !self.used[i] {
                self.used[i] = true;
                out.push(&a.value);
            }
        }
        out
    }

    fn integer(&mut self, key: &str) -> Result<Option<i64>> {
        match self.keyed(key) {
            None => Ok(None),
            Some(v) => integer_value(v).map(Some),
        }
    }

    fn count(&mut self, key: &str, default: usize) -> Result<usize> {
        match self.integer(key)? {
            None => Ok(default),
            Some(n) if n >= 0 => Ok(n as usize),
            Some(n) => Err(precondition(format!("{key} must be nonnegative, got {n}"))),
        }
    }

    fn finish(&self) -> Result<()> {
        match self.used.iter().position(|u| !u) {
            None => Ok(()),
            Some(i) => Err(precondition(format!("unexpected argument '{}'", self.args[i]))),
        }
    }
}

fn integer_value(v: &Value) -> Result<i64> {
    let e = match v {
        Value::Expr(e) => e,
        other => return Err(precondition(format!("expected an integer, found {other}"))),
    };
    match e {
        Expr::Num(n) => i64::try_from(n.clone()).map_err(|_| precondition(format!("{n} is too large"))),
        Expr::Neg(inner) => match inner.as_ref() {
            Expr::Num(n) => i64::try_from(n.clone())
                .map(|n| -n)
                .map_err(|_| precondition(format!("{n} is too large"))),
            _ => Err(precondition(format!("expected an integer, found {e}"))),
        },
        _ => Err(precondition(format!("expected an integer, found {e}"))),
    }
}

fn expr_value(v: &Value) -> Result<&Expr> {
    match v {
        Value::Expr(e) => Ok(e),
        other => Err(precondition(format!("expected an expression, found {other}"))),
    }
}

/// The expressions of an ideal argument: `(a, b)` or a single expression.
fn ideal_exprs(v: &Value) -> Result<Vec<&Expr>> {
    match v {
        Value::Expr(e) => Ok(vec![e]),
        Value::Tuple(items) | Value::List(items) => items.iter().map(expr_value).collect(),
    }
}

fn required<'a>(v: Option<&'a Value>, key: &str) -> Result<&'a Value> {
    v.ok_or_else(|| precondition(format!("missing argument '{key}='")))
}

fn show_all<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
}

impl Env {
    fn get(&self, name: &str) -> Result<&Object> {
        match self.objects.get(name) {
            Some(Ok(o)) => Ok(o),
            Some(Err(msg)) => Err(precondition(format!("declaration of '{name}' failed: {msg}"))),
            None => Err(precondition(format!("'{name}' is not declared"))),
        }
    }

    fn ring(&self, name: &str) -> Result<&RingPresentation> {
        match self.get(name)? {
            Object::Ring(r) => Ok(r),
            o => Err(precondition(format!("'{name}' is a {}, not a ring", o.sort()))),
        }
    }

    fn rng(&self, index: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.options.seed.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
    }

    fn scalar(&self, e: &Expr) -> Result<crate::algebra::scalar::Scalar> {
        let none: [&str; 0] = [];
        let p = e.to_polynomial(self.field, &vars(&none))?;
        Ok(p.constant_term())
    }

    fn declare(&self, kind: &StatementKind) -> Result<Object> {
        let field = self.field;
        let n = self.precision;
        match kind {
            StatementKind::Series { def, .. } => match def {
                SeriesDef::Liouville(k) => {
                    if *k == 0 {
                        return Err(precondition("liouville step must be positive"));
                    }
                    Ok(Object::Series(TruncatedSeries::liouville(field, n, *k)))
                }
                SeriesDef::Coefficients(cs) => {
                    if cs.len() > n {
                        return Err(precondition(format!("{} coefficients exceed precision {n}", cs.len())));
                    }
                    let coeffs = cs.iter().map(|c| self.scalar(c)).collect::<Result<Vec<_>>>()?;
                    Ok(Object::Series(TruncatedSeries::from_coeffs(field, n, &coeffs)))
                }
            },
            StatementKind::Ring { def, .. } => self.declare_ring(def),
            StatementKind::Derivation { on, over, images, .. } => {
                let domain = self.ring(on)?.clone();
                let base = self.ring(over)?;
                let imgs = images
                    .iter()
                    .map(|(v, e)| Ok((v.clone(), e.to_polynomial(field, domain.vars())?)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                let linear = base
                    .ring_generators()
                    .into_iter()
                    .map(|g| g.with_vars(domain.vars()))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Object::Derivation(Box::new(DerivationSpec::new(domain, &imgs, linear)?)))
            }
            StatementKind::Set { var, .. } => Ok(Object::Set(var.clone())),
            StatementKind::Module { def, .. } => match def {
                ModuleDef::Lattice(v) => Ok(Object::Lattice(*v)),
                ModuleDef::Span { ring, vectors } => {
                    let model = match self.get(ring)? {
                        Object::Dvr(m) => m.clone(),
                        o => return Err(precondition(format!("'{ring}' is a {}, not a dvr", o.sort()))),
                    };
                    let ambient = vectors.first().map_or(0, |v| v.len());
                    let gens = vectors
                        .iter()
                        .map(|v| v.iter().map(|e| model.element(&e.to_string())).collect::<Result<Vec<_>>>())
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Object::DvrModule(DvrModule::new(model, ambient, gens)?))
                }
            },
            StatementKind::Scenario {
                ring,
                derivation,
                module,
                set,
                ..
            } => {
                let s = self.ring(ring)?;
                let d = match self.get(derivation)? {
                    Object::Derivation(d) => d,
                    o => return Err(precondition(format!("'{derivation}' is a {}, not a derivation", o.sort()))),
                };
                if d.domain() != s {
                    return Err(precondition(format!("'{derivation}' is not defined on '{ring}'")));
                }
                let threshold = match self.get(module)? {
                    Object::Lattice(v) => *v,
                    o => return Err(precondition(format!("'{module}' is a {}, not a lattice", o.sort()))),
                };
                let var = match self.get(set)? {
                    Object::Set(v) => v,
                    o => return Err(precondition(format!("'{set}' is a {}, not a set", o.sort()))),
                };
                let mut sc = Scenario::new((**d).clone(), var, threshold, &BTreeMap::new())?;
                if let Some(d) = self.options.y_degree {
                    sc = sc.with_y_degree(d);
                }
                if let Some(m) = self.options.max_exponent {
                    sc = sc.with_max_exponent(m);
                }
                Ok(Object::Scenario(Box::new(sc)))
            }
            StatementKind::Spec { def, .. } => match def {
                SpecDef::Extension { small, big, c } => {
                    let a = self.ring(small)?;
                    let s = self.ring(big)?;
                    let c = c.to_polynomial(field, s.vars())?;
                    let d = self.options.y_degree.unwrap_or(crate::twisted::DEFAULT_Y_DEGREE);
                    Ok(Object::Extension(Box::new(ExtensionInstance::from_presentations(a, s, &c, n, d)?)))
                }
                SpecDef::GlobalStable { var, primes, ranks } => {
                    let v = vars(&[var.as_str()]);
                    let polys = primes
                        .iter()
                        .map(|e| {
                            let p = e.to_polynomial(field, &v)?;
                            let deg = p.degree_in(0) as usize;
                            let coeffs = (0..=deg).map(|k| p.coefficient(&[k as u32])).collect();
                            Ok(UniPoly::from_coeffs(field, coeffs))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Object::Global(GlobalStableSpec::new(field, var, polys, ranks.clone())?))
                }
            },
            _ => unreachable!("not a declaration"),
        }
    }

    fn declare_ring(&self, def: &RingDef) -> Result<Object> {
        let field = self.field;
        match def {
            RingDef::Poly(v) => Ok(Object::Ring(RingPresentation::polynomial(field, v)?)),
            RingDef::Localize { base, at } => Ok(Object::Ring(self.ring(base)?.localize(at)?)),
            RingDef::Adjoin { base, var, series } => {
                let s = match self.get(series)? {
                    Object::Series(s) => s.clone(),
                    o => return Err(precondition(format!("'{series}' is a {}, not a series", o.sort()))),
                };
                Ok(Object::Ring(self.ring(base)?.adjoin(var, s)?))
            }
            RingDef::Subring { base, generators } => {
                let b = self.ring(base)?;
                let gens = generators
                    .iter()
                    .map(|g| g.to_polynomial(field, b.vars()))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Object::Ring(b.subring(gens)?))
            }
            RingDef::Dvr(t) => Ok(Object::Dvr(DvrModel::new(field, self.precision, t)?)),
            RingDef::Local { base, order } => {
                if *order == 0 {
                    return Err(precondition("order must be positive"));
                }
                let b = self.ring(base)?;
                let names: Vec<String> = b.vars().to_vec();
                let ambient = FiniteAlgebra::truncated_polynomial(field, &names, order - 1)?;
                let (alg, span) = if b.is_subring() {
                    let gens = b
                        .ring_generators()
                        .iter()
                        .map(|g| poly_vector(&ambient, &names, g))
                        .collect::<Result<Vec<_>>>()?;
                    let (alg, span) = ambient.subalgebra(&gens)?;
                    (alg, Some(span))
                } else {
                    (ambient.clone(), None)
                };
                let local = LocalModel::identify(alg)?;
                Ok(Object::Local(Box::new(LocalRing {
                    local,
                    source: Some((names, ambient, span)),
                })))
            }
            RingDef::Idealize { base, rank } => {
                let l = match self.get(base)? {
                    Object::Local(l) => l,
                    o => return Err(precondition(format!("'{base}' is a {}, not a local ring", o.sort()))),
                };
                let alg = l.local.algebra().clone();
                let module = FiniteModule::free(&alg, *rank);
                let local = IdealizationModel::new(alg, module)?.local_model()?;
                Ok(Object::Local(Box::new(LocalRing { local, source: None })))
            }
        }
    }

    fn scenario(&self, name: &str) -> Result<&Scenario> {
        match self.get(name)? {
            Object::Scenario(s) => Ok(s),
            o => Err(precondition(format!("'{name}' is a {}, not a scenario", o.sort()))),
        }
    }

    fn extension(&self, name: &str) -> Result<&ExtensionInstance> {
        match self.get(name)? {
            Object::Extension(e) => Ok(e),
            o => Err(precondition(format!("'{name}' is a {}, not an extension", o.sort()))),
        }
    }

    fn dvr_module(&self, name: &str) -> Result<&DvrModule> {
        match self.get(name)? {
            Object::DvrModule(m) => Ok(m),
            o => Err(precondition(format!("'{name}' is a {}, not a module over a dvr", o.sort()))),
        }
    }

    fn local(&self, name: &str) -> Result<&LocalRing> {
        match self.get(name)? {
            Object::Local(l) => Ok(l),
            o => Err(precondition(format!("'{name}' is a {}, not a local ring", o.sort()))),
        }
    }

    fn max_exponent(&self) -> u32 {
        self.options.max_exponent.unwrap_or(crate::extensions::DEFAULT_MAX_EXPONENT)
    }

    fn check(&self, kind: CheckKind, target: &str, raw: &[Arg], index: usize) -> Result<Outcome> {
        let mut args = Args::new(raw);
        let out = match kind {
            CheckKind::Membership => {
                let sc = self.scenario(target)?;
                let vals = args.positional_with_names();
                let [v] = vals.as_slice() else {
                    return Err(precondition("membership takes exactly one element"));
                };
                let f = sc.element(&expr_value(v)?.to_string())?;
                let m = sc.membership(&f)?;
                let detail = match &m.valuation {
                    None => "D = 0".to_string(),
                    Some(v) => format!("val = {v}"),
                };
                Outcome {
                    verdict: match m.answer {
                        Answer::Indeterminate => Verdict::Indeterminate,
                        _ => Verdict::Pass,
                    },
                    summary: format!("{} ({detail})", m.answer),
                    evidence: m.to_json(),
                }
            }
            CheckKind::Closure => {
                let sc = self.scenario(target)?;
                let n = args.count("samples", DEFAULT_CLOSURE_SAMPLES)?;
                let pairs = sc.sample_member_pairs(n, &mut self.rng(index))?;
                let r = sc.ring_closure_check(&pairs)?;
                let summary = format!("{} pairs checked, {} skipped", r.pairs_checked, r.pairs_skipped);
                Outcome::from_report(r.pass, summary, &r)
            }
            CheckKind::AlphaIso => {
                let sc = self.scenario(target)?;
                let j = args.count("j", DEFAULT_ALPHA_DEPTH as usize)? as u32;
                let n = args.count("samples", DEFAULT_ALPHA_SAMPLES)?;
                let samples = sc.sample_elements(n, &mut self.rng(index));
                let r = sc.alpha_iso_check(j, &samples)?;
                let summary = format!("{} depths witnessed, {} injectivity samples", r.witnesses.len(), r.injectivity_samples);
                Outcome::from_report(r.pass, summary, &r)
            }
            CheckKind::AnalyticIso => {
                let sc = self.scenario(target)?;
                let m = match (args.integer("m")?, args.keyed("c")) {
                    (Some(m), None) if m >= 1 => m as u32,
                    (None, Some(c)) => self.power_of_series_var(sc, expr_value(c)?)?,
                    (None, None) => 1,
                    _ => return Err(precondition("give one of m=<level> or c=<power of the series variable>")),
                };
                let r = sc.analytic_iso_check(m)?;
                let summary = format!(
                    "level {m}: image dimension {} against {} + {} in the model",
                    r.ring_dim, r.s_dim, r.k_dim
                );
                Outcome::from_report(r.pass, summary, &r)
            }
            CheckKind::OneCase => {
                let sc = self.scenario(target)?;
                let gens = ideal_exprs(required(args.keyed("ideal"), "ideal")?)?
                    .into_iter()
                    .map(|e| sc.element(&e.to_string()))
                    .collect::<Result<Vec<_>>>()?;
                let m = args.integer("m")?.unwrap_or(1);
                if m < 1 {
                    return Err(precondition("m must be positive"));
                }
                let r = sc.one_case_check(&gens, m as u32)?;
                let summary = format!("dim f(I) + model = {}, target {}", r.image_ideal_dim, r.target_dim);
                Outcome::from_report(r.pass, summary, &r)
            }
            CheckKind::Correspondence => {
                let sc = self.scenario(target)?;
                let threshold = match args.keyed("threshold") {
                    None => sc.threshold(),
                    Some(Value::Expr(Expr::Var(v))) if v == "all" => None,
                    Some(v) => Some(integer_value(v)?),
                };
                let n = args.count("samples", DEFAULT_CORRESPONDENCE_SAMPLES)?;
                let samples = sc.sample_elements(n, &mut self.rng(index));
                let r = sc.intermediate_correspondence(threshold, &samples)?;
                let shown = |t: Option<i64>| t.map_or("all".to_string(), |v| v.to_string());
                let summary = format!("threshold {} recovered as {}", shown(r.threshold), shown(r.recovered));
                Outcome::from_report(r.pass, summary, &r)
            }
            CheckKind::KqGenerators => {
                let sc = self.scenario(target)?;
                let vals = args.positional_with_names();
                let [v] = vals.as_slice() else {
                    return Err(precondition("kq-generators takes exactly one element"));
                };
                let a = sc.element(&expr_value(v)?.to_string())?;
                let r = sc.kq_generators(&a)?;
                let summary = format!("val {}: dim K/qK = {}, {} generators", r.valuation, r.dim, r.generators);
                Outcome::from_report(true, summary, &r)
            }
            CheckKind::AssocPrime => {
                let sc = self.scenario(target)?;
                let r = sc.associated_prime_witness()?;
                let summary = format!("witness {} with D-valuation {}", r.witness, r.derivative_valuation);
                Outcome::from_report(true, summary, &r)
            }
            CheckKind::CAnalytic => {
                let e = self.extension(target)?;
                let levels: Vec<u32> = match args.integer("m")? {
                    Some(m) if m >= 1 => vec![m as u32],
                    Some(m) => return Err(precondition(format!("m must be positive, got {m}"))),
                    None => (1..=self.max_exponent()).collect(),
                };
                let reports = levels.iter().map(|&m| e.is_c_analytic(m)).collect::<Result<Vec<_>>>()?;
                let pass = reports.iter().all(|r| r.pass);
                let summary = format!(
                    "verified up to exponent {}: {}",
                    levels.last().copied().unwrap_or(0),
                    if pass { "analytic" } else { "not analytic" }
                );
                Outcome::from_report(pass, summary, &reports)
            }
            CheckKind::Quadratic => self.quadratic(target, &mut args, index)?,
            CheckKind::ContractExtend => {
                let e = self.extension(target)?;
                let side = match args.keyed("side") {
                    None => Side::Small,
                    Some(Value::Expr(Expr::Var(s))) if s == "small" => Side::Small,
                    Some(Value::Expr(Expr::Var(s))) if s == "big" => Side::Big,
                    Some(v) => return Err(precondition(format!("side must be small or big, found {v}"))),
                };
                let gens = self.extension_ideal(e, &mut args)?;
                let r = e.contract_extend(&gens, side, self.max_exponent())?;
                let summary = format!(
                    "{} of a {}-dimensional ideal has dimension {}, round trip {}",
                    if side == Side::Small { "extension" } else { "contraction" },
                    r.ideal_dim,
                    r.image_dim,
                    if r.round_trip { "exact" } else { "broken" }
                );
                Outcome::from_report(r.round_trip, summary, &r)
            }
            CheckKind::GeneratorBound => {
                let e = self.extension(target)?;
                let quasilocal = args.flag("quasilocal");
                let gens = self.extension_ideal(e, &mut args)?;
                let r = e.generator_bound(&gens, quasilocal, self.max_exponent())?;
                let summary = format!("{} generators (bound {}): {}", r.generators.len(), r.bound, show_all(&r.generators));
                Outcome::from_report(r.pass, summary, &r)
            }
            CheckKind::Tffr => {
                let m = self.dvr_module(target)?;
                let r = m.tffr_rank()?;
                let expected = args.integer("expected")?;
                let pass = expected.map_or(true, |e| e == r.rank as i64);
                Outcome::from_report(pass, format!("rank {}", r.rank), &r)
            }
            CheckKind::QuotientFree => {
                let m = self.dvr_module(target)?;
                let exp = args.count("m", 1)?;
                let r = m.quotient_freeness(exp)?;
                let summary = format!("K/t^{exp}K free of rank {} (dim {})", r.rank, r.quotient_dim);
                Outcome::from_report(r.pass, summary, &r)
            }
            CheckKind::Stable => {
                let l = self.local(target)?;
                let exprs = ideal_exprs(required(args.keyed("ideal"), "ideal")?)?;
                let gens = exprs.iter().map(|e| l.element(e)).collect::<Result<Vec<_>>>()?;
                let r = is_stable_ideal(l.local.algebra(), &gens)?;
                let summary = match &r.witness {
                    Some(w) => format!("I^2 = iI with i = {w}"),
                    None => format!(
                        "no witness among {} candidates{}",
                        r.candidates_tried,
                        if r.exhaustive { "" } else { " (search truncated)" }
                    ),
                };
                Outcome::from_report(r.pass, summary, &r)
            }
            CheckKind::EmbDim => {
                let l = self.local(target)?;
                let d = l.local.embedding_dimension()?;
                let expected = args.integer("expected")?;
                let pass = expected.map_or(true, |e| e == d as i64);
                let evidence = json!({ "embedding_dimension": d, "expected": expected });
                Outcome::from_report(pass, format!("embedding dimension {d}"), &evidence)
            }
            CheckKind::GlobalStable => {
                let spec = match self.get(target)? {
                    Object::Global(g) => g,
                    o => return Err(precondition(format!("'{target}' is a {}, not a global spec", o.sort()))),
                };
                let r = global_stable_instance(spec)?;
                let dims: Vec<usize> = r.primes.iter().map(|p| p.embedding_dimension).collect();
                let summary = format!("embedding dimensions ({})", show_all(&dims));
                Outcome::from_report(r.pass, summary, &r)
            }
        };
        args.finish()?;
        Ok(out)
    }

    /// `c = x^k` ↦ `k`.
    fn power_of_series_var(&self, sc: &Scenario, c: &Expr) -> Result<u32> {
        let v = vars(&[sc.series_var()]);
        let p = c.to_polynomial(self.field, &v)?;
        match p.terms().collect::<Vec<_>>().as_slice() {
            [(m, k)] if k.is_one() && m.0[0] > 0 => Ok(m.0[0]),
            _ => Err(precondition(format!("{c} is not a positive power of {}", sc.series_var()))),
        }
    }

    fn extension_ideal(&self, e: &ExtensionInstance, args: &mut Args<'_>) -> Result<Vec<Vector>> {
        ideal_exprs(required(args.keyed("ideal"), "ideal")?)?
            .into_iter()
            .map(|x| e.element(&x.to_string()))
            .collect()
    }

    fn pairs_arg<T>(&self, v: &Value, mut elem: impl FnMut(&Expr) -> Result<T>) -> Result<Vec<(T, T)>> {
        let items = match v {
            Value::List(items) => items.as_slice(),
            other => std::slice::from_ref(other),
        };
        items
            .iter()
            .map(|p| match p {
                Value::Tuple(t) if t.len() == 2 => Ok((elem(expr_value(&t[0])?)?, elem(expr_value(&t[1])?)?)),
                other => Err(precondition(format!("expected a pair (s, t), found {other}"))),
            })
            .collect()
    }

    fn quadratic(&self, target: &str, args: &mut Args<'_>, index: usize) -> Result<Outcome> {
        let pairs_value = args.keyed("pairs");
        let n = args.count("samples", DEFAULT_QUADRATIC_SAMPLES)?;
        let r = match self.get(target)? {
            Object::Scenario(sc) => {
                let pairs = match pairs_value {
                    Some(v) => self.pairs_arg(v, |e| sc.element(&e.to_string()))?,
                    None => {
                        let pool: Vec<LocalFraction> = sc.sample_elements(2 * n, &mut self.rng(index));
                        pool.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect()
                    }
                };
                is_quadratic(sc.as_ref(), &pairs)?
            }
            Object::Extension(e) => {
                let pairs = match pairs_value {
                    Some(v) => self.pairs_arg(v, |x| e.shown_element(&x.to_string()))?,
                    None => {
                        let basis = e.big().basis();
                        let mut out = Vec::new();
                        'outer: for (i, a) in basis.iter().enumerate() {
                            for b in &basis[i..] {
                                if out.len() == MAX_BASIS_PAIRS {
                                    break 'outer;
                                }
                                out.push((e.shown(a.clone()), e.shown(b.clone())));
                            }
                        }
                        out
                    }
                };
                is_quadratic(e.as_ref(), &pairs)?
            }
            o => return Err(precondition(format!("'{target}' is a {}, not a scenario or extension", o.sort()))),
        };
        let summary = match &r.witness {
            None => format!("{} pairs solved", r.pairs_checked),
            Some((s, t)) => format!("no solution for s = {s}, t = {t}"),
        };
        Ok(Outcome::from_report(r.pass, summary, &r))
    }
}

fn poly_vector(alg: &FiniteAlgebra, names: &[String], p: &Polynomial) -> Result<Vector> {
    let mut v = alg.zero_vector();
    for (m, c) in p.terms() {
        if let Some(i) = alg.index_of(&monomial_label(names, &m.0)) {
            v[i] = &v[i] + c;
        }
    }
    Ok(v)
}

impl LocalRing {
    fn element(&self, e: &Expr) -> Result<Vector> {
        let (names, ambient, span) = self
            .source
            .as_ref()
            .ok_or_else(|| precondition("elements of an idealized ring cannot be written as polynomials"))?;
        let p = e.to_polynomial(ambient.field(), &vars(names))?;
        let v = poly_vector(ambient, names, &p)?;
        match span {
            None => Ok(v),
            Some(s) => s
                .coordinates(&v)
                .ok_or_else(|| Error::NotInRing(format!("{e} is not in the subring"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parser::parse;

    fn run_text(text: &str) -> Report {
        let opts = RunOptions {
            timing: false,
            ..RunOptions::default()
        };
        run(&parse(text).unwrap(), &opts)
    }

    const GL: &str = "field F5
precision 24
series z = liouville(1)
ring A = localize(poly(x, y), at=(x, y))
";

    fn gl(checks: &str) -> Report {
        let text = "field F5
precision 24
series z = liouville(1)
ring P = poly(x, y)
ring A = localize(P, at=(x, y))
ring S = adjoin(A, Z -> z)
derivation D on S over A : Z = 1
set C = powers(x)
module K = lattice(val >= 0)
scenario GL = twist(S, D, K, C)
spec E = extension(A, S, c=x)
"
        .to_string()
            + checks;
        run_text(&text)
    }

    #[test]
    fn nested_constructor_is_a_syntax_error() {
        assert!(parse(GL).is_err());
    }

    #[test]
    fn membership_answers_are_passes() {
        let r = gl("check membership GL : Z/x\ncheck membership GL : Z^2/x\ncheck membership GL : 1/x\n");
        assert_eq!(r.commands[0].verdict, Verdict::Pass);
        assert_eq!(r.commands[0].summary, "no (val = -1)");
        assert_eq!(r.commands[1].summary, "yes (val = 0)");
        assert_eq!(r.commands[2].verdict, Verdict::Error);
        assert_eq!(r.exit_code(false), 1);
    }

    #[test]
    fn extension_checks() {
        let r = gl("check c-analytic E : m=1
check generator-bound E : ideal=(x), quasilocal
check contract-extend E : side=big, ideal=(x)
check quadratic GL : pairs=[(Z/x, Z/x)]
check contract-extend E : ideal=(y)
");
        let v: Vec<Verdict> = r.commands.iter().map(|c| c.verdict).collect();
        assert_eq!(v[..4], [Verdict::Pass; 4]);
        assert_eq!(r.commands[1].summary, "1 generators (bound 1): x");
        assert_eq!(v[4], Verdict::Error);
    }

    #[test]
    fn unknown_arguments_are_errors() {
        let r = gl("check assoc-prime GL : frobnicate=1\n");
        assert_eq!(r.commands[0].verdict, Verdict::Error);
        assert!(r.commands[0].summary.contains("unexpected argument"));
    }

    #[test]
    fn failed_declarations_surface_in_checks() {
        let r = run_text("field F5\nprecision 8\nring P = poly(x)\nring L = local(P, order=0)\ncheck emb-dim L\n");
        assert_eq!(r.commands[0].verdict, Verdict::Error);
        assert!(r.commands[0].summary.contains("declaration of 'L' failed"));
    }

    #[test]
    fn local_and_dvr_checks() {
        let r = run_text(
            "field F5
precision 12
ring T = poly(t)
ring R = subring(T, t^2, t^3)
ring L = local(R, order=7)
check stable L : ideal=(t^2, t^3)
ring P = poly(x, y)
ring M = local(P, order=4)
check stable M : ideal=(x, y)
ring I = idealize(M, rank=2)
check emb-dim I : expected=4
ring V = dvr(t)
module K = span(V, [1, 0], [0, t])
check tffr K : expected=2
check quotient-free K : m=2
spec G = global_stable(t, primes=[t, t - 1, t - 2], ranks=[1, 2, 3])
check global-stable G
",
        );
        let v: Vec<Verdict> = r.commands.iter().map(|c| c.verdict).collect();
        assert_eq!(
            v,
            [Verdict::Pass, Verdict::Fail, Verdict::Pass, Verdict::Pass, Verdict::Pass, Verdict::Pass]
        );
        assert_eq!(r.commands[0].summary, "I^2 = iI with i = t^2");
        assert_eq!(r.commands[5].summary, "embedding dimensions (2, 3, 4)");
    }
}
