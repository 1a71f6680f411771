//! Syntax tree of scripts and its canonical printing.

use std::fmt;

use serde::Serialize;

use super::expr::Expr;

/// Position of a statement in its source; ignored by equality so that a
/// re-parsed printout compares equal to the original.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl PartialEq for Location {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Script {
    pub statements: Vec<Statement>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Statement {
    pub location: Location,
    pub kind: StatementKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FieldName {
    Rational,
    Prime(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum SeriesDef {
    Liouville(u32),
    Coefficients(Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum RingDef {
    Poly(Vec<String>),
    Localize { base: String, at: Vec<String> },
    Adjoin { base: String, var: String, series: String },
    Subring { base: String, generators: Vec<Expr> },
    Dvr(String),
    Local { base: String, order: u32 },
    Idealize { base: String, rank: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModuleDef {
    /// `None` is the whole localized lattice.
    Lattice(Option<i64>),
    Span { ring: String, vectors: Vec<Vec<Expr>> },
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpecDef {
    Extension { small: String, big: String, c: Expr },
    GlobalStable { var: String, primes: Vec<Expr>, ranks: Vec<usize> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Membership,
    Closure,
    AlphaIso,
    AnalyticIso,
    OneCase,
    Correspondence,
    CAnalytic,
    Quadratic,
    ContractExtend,
    GeneratorBound,
    KqGenerators,
    AssocPrime,
    Tffr,
    QuotientFree,
    Stable,
    EmbDim,
    GlobalStable,
}

pub const CHECK_KINDS: [CheckKind; 17] = [
    CheckKind::Membership,
    CheckKind::Closure,
    CheckKind::AlphaIso,
    CheckKind::AnalyticIso,
    CheckKind::OneCase,
    CheckKind::Correspondence,
    CheckKind::CAnalytic,
    CheckKind::Quadratic,
    CheckKind::ContractExtend,
    CheckKind::GeneratorBound,
    CheckKind::KqGenerators,
    CheckKind::AssocPrime,
    CheckKind::Tffr,
    CheckKind::QuotientFree,
    CheckKind::Stable,
    CheckKind::EmbDim,
    CheckKind::GlobalStable,
];

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Membership => "membership",
            CheckKind::Closure => "closure",
            CheckKind::AlphaIso => "alpha-iso",
            CheckKind::AnalyticIso => "analytic-iso",
            CheckKind::OneCase => "one-case",
            CheckKind::Correspondence => "correspondence",
            CheckKind::CAnalytic => "c-analytic",
            CheckKind::Quadratic => "quadratic",
            CheckKind::ContractExtend => "contract-extend",
            CheckKind::GeneratorBound => "generator-bound",
            CheckKind::KqGenerators => "kq-generators",
            CheckKind::AssocPrime => "assoc-prime",
            CheckKind::Tffr => "tffr",
            CheckKind::QuotientFree => "quotient-free",
            CheckKind::Stable => "stable",
            CheckKind::EmbDim => "emb-dim",
            CheckKind::GlobalStable => "global-stable",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        CHECK_KINDS.iter().copied().find(|k| k.name() == name)
    }
}

/// A check argument value.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Expr(Expr),
    Tuple(Vec<Value>),
    List(Vec<Value>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Arg {
    pub key: Option<String>,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StatementKind {
    Field(FieldName),
    Precision(usize),
    Series { name: String, def: SeriesDef },
    Ring { name: String, def: RingDef },
    Derivation { name: String, on: String, over: String, images: Vec<(String, Expr)> },
    Set { name: String, var: String },
    Module { name: String, def: ModuleDef },
    Scenario { name: String, ring: String, derivation: String, module: String, set: String },
    Spec { name: String, def: SpecDef },
    Check { kind: CheckKind, target: String, args: Vec<Arg> },
}

impl StatementKind {
    /// The name this statement declares, if any.
    pub fn declared(&self) -> Option<&str> {
        match self {
            StatementKind::Series { name, .. }
            | StatementKind::Ring { name, .. }
            | StatementKind::Derivation { name, .. }
            | StatementKind::Set { name, .. }
            | StatementKind::Module { name, .. }
            | StatementKind::Scenario { name, .. }
            | StatementKind::Spec { name, .. } => Some(name),
            _ => None,
        }
    }

    /// Declared names this statement refers to.
    pub fn references(&self) -> Vec<&str> {
        match self {
            StatementKind::Ring { def, .. } => match def {
                RingDef::Poly(_) | RingDef::Dvr(_) => vec![],
                RingDef::Adjoin { base, series, .. } => vec![base, series],
                RingDef::Localize { base, .. }
                | RingDef::Subring { base, .. }
                | RingDef::Local { base, .. }
                | RingDef::Idealize { base, .. } => vec![base],
            },
            StatementKind::Derivation { on, over, .. } => vec![on, over],
            StatementKind::Module {
                def: ModuleDef::Span { ring, .. },
                ..
            } => vec![ring],
            StatementKind::Scenario {
                ring,
                derivation,
                module,
                set,
                ..
            } => vec![ring, derivation, module, set],
            StatementKind::Spec {
                def: SpecDef::Extension { small, big, .. },
                ..
            } => vec![small, big],
            StatementKind::Check { target, .. } => vec![target],
            _ => vec![],
        }
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for FieldName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldName::Rational => f.write_str("Q"),
            FieldName::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Expr(e) => write!(f, "{e}"),
            Value::Tuple(v) => write!(f, "({})", join(v)),
            Value::List(v) => write!(f, "[{}]", join(v)),
        }
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.key {
            Some(k) => write!(f, "{k}={}", self.value),
            None => write!(f, "{}", self.value),
        }
    }
}

impl fmt::Display for StatementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatementKind::Field(name) => write!(f, "field {name}"),
            StatementKind::Precision(n) => write!(f, "precision {n}"),
            StatementKind::Series { name, def } => match def {
                SeriesDef::Liouville(k) => write!(f, "series {name} = liouville({k})"),
                SeriesDef::Coefficients(c) => write!(f, "series {name} = [{}]", join(c)),
            },
            StatementKind::Ring { name, def } => {
                write!(f, "ring {name} = ")?;
                match def {
                    RingDef::Poly(v) => write!(f, "poly({})", v.join(", ")),
                    RingDef::Localize { base, at } => write!(f, "localize({base}, at=({}))", at.join(", ")),
                    RingDef::Adjoin { base, var, series } => write!(f, "adjoin({base}, {var} -> {series})"),
                    RingDef::Subring { base, generators } => write!(f, "subring({base}, {})", join(generators)),
                    RingDef::Dvr(t) => write!(f, "dvr({t})"),
                    RingDef::Local { base, order } => write!(f, "local({base}, order={order})"),
                    RingDef::Idealize { base, rank } => write!(f, "idealize({base}, rank={rank})"),
                }
            }
            StatementKind::Derivation { name, on, over, images } => {
                let imgs: Vec<String> = images.iter().map(|(v, e)| format!("{v} = {e}")).collect();
                write!(f, "derivation {name} on {on} over {over} : {}", imgs.join(", "))
            }
            StatementKind::Set { name, var } => write!(f, "set {name} = powers({var})"),
            StatementKind::Module { name, def } => match def {
                ModuleDef::Lattice(Some(v)) => write!(f, "module {name} = lattice(val >= {v})"),
                ModuleDef::Lattice(None) => write!(f, "module {name} = lattice(all)"),
                ModuleDef::Span { ring, vectors } => {
                    let vs: Vec<String> = vectors.iter().map(|v| format!("[{}]", join(v))).collect();
                    write!(f, "module {name} = span({ring}, {})", vs.join(", "))
                }
            },
            StatementKind::Scenario {
                name,
                ring,
                derivation,
                module,
                set,
            } => write!(f, "scenario {name} = twist({ring}, {derivation}, {module}, {set})"),
            StatementKind::Spec { name, def } => match def {
                SpecDef::Extension { small, big, c } => write!(f, "spec {name} = extension({small}, {big}, c={c})"),
                SpecDef::GlobalStable { var, primes, ranks } => write!(
                    f,
                    "spec {name} = global_stable({var}, primes=[{}], ranks=[{}])",
                    join(primes),
                    join(ranks)
                ),
            },
            StatementKind::Check { kind, target, args } => {
                write!(f, "check {} {target}", kind.name())?;
                if !args.is_empty() {
                    write!(f, " : {}", join(args))?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

impl Script {
    pub fn checks(&self) -> impl Iterator<Item = &Statement> {
        self.statements
            .iter()
            .filter(|s| matches!(s.kind, StatementKind::Check { .. }))
    }
}
