//! Line-oriented parser for scripts, followed by a scope pass that checks
//! declarations precede their uses.

use std::collections::HashSet;
use std::fmt;

use super::ast::*;
use super::expr::{parse_expr, Expr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at line {}, column {}", self.message, self.line, self.column)
    }
}

impl std::error::Error for Diagnostic {}

type PResult<T> = std::result::Result<T, Diagnostic>;

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            line,
            text,
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(self.diagnostic(self.pos, message))
    }

    fn diagnostic(&self, pos: usize, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            line: self.line,
            column: pos + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.error(format!("expected '{c}', found '{found}'")),
                None => self.error(format!("expected '{c}' before end of line")),
            }
        }
    }

    fn expect_str(&mut self, s: &str) -> PResult<()> {
        self.skip_ws();
        let rest: String = self.chars[self.pos..].iter().take(s.chars().count()).collect();
        if rest == s {
            self.pos += s.chars().count();
            Ok(())
        } else {
            self.error(format!("expected '{s}'"))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        self.skip_ws();
        let start = self.pos;
        match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == '_' => {}
            Some(c) => return self.error(format!("expected an identifier, found '{c}'")),
            None => return self.error("expected an identifier before end of line"),
        }
        while self.pos < self.chars.len() && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        let save = self.pos;
        let id = self.ident()?;
        if id != kw {
            self.pos = save;
            return self.error(format!("expected '{kw}', found '{id}'"));
        }
        Ok(())
    }

    fn integer(&mut self) -> PResult<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.diagnostic(start, format!("expected an integer, found '{s}'")))
    }

    fn natural(&mut self) -> PResult<usize> {
        let start = self.pos;
        let n = self.integer()?;
        usize::try_from(n).map_err(|_| self.diagnostic(start, format!("expected a nonnegative integer, found {n}")))
    }

    /// Extent of an expression: up to a comma or closing bracket at depth 0.
    fn expr(&mut self) -> PResult<Expr> {
        self.skip_ws();
        let start = self.pos;
        let mut depth = 0i32;
        while self.pos < self.chars.len() {
            match self.chars[self.pos] {
                '(' | '[' => depth += 1,
                ')' | ']' if depth == 0 => break,
                ')' | ']' => depth -= 1,
                ',' if depth == 0 => break,
                _ => {}
            }
            self.pos += 1;
        }
        let src: String = self.chars[start..self.pos].iter().collect();
        if src.trim().is_empty() {
            return Err(self.diagnostic(start, "expected an expression"));
        }
        parse_expr(&src).map_err(|e| self.diagnostic(start, format!("bad expression '{}': {e}", src.trim())))
    }

    fn list<T>(&mut self, open: char, close: char, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        self.expect(open)?;
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    /// `key=` ahead (but not `==`).
    fn key_ahead(&mut self) -> Option<String> {
        let save = self.pos;
        if let Ok(id) = self.ident() {
            if self.eat('=') && self.chars.get(self.pos) != Some(&'=') {
                return Some(id);
            }
        }
        self.pos = save;
        None
    }

    fn named<T>(&mut self, key: &str, item: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        let save = self.pos;
        match self.key_ahead() {
            Some(k) if k == key => item(self),
            _ => {
                self.pos = save;
                self.skip_ws();
                self.error(format!("expected '{key}='"))
            }
        }
    }

    /// Position of the bracket closing the one at `open`.
    fn matching(&self, open: usize) -> Option<usize> {
        let mut depth = 0;
        for (i, c) in self.chars.iter().enumerate().skip(open) {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(i);
                    }
                }
                _ => {}
            }
        }
        None
    }

    fn value(&mut self) -> PResult<Value> {
        match self.peek() {
            Some('[') => Ok(Value::List(self.list('[', ']', |c| c.value())?)),
            Some('(') => {
                let close = self.matching(self.pos).ok_or_else(|| self.diagnostic(self.pos, "unbalanced '('"))?;
                let mut after = close + 1;
                while after < self.chars.len() && self.chars[after].is_whitespace() {
                    after += 1;
                }
                if matches!(self.chars.get(after), None | Some(',') | Some(')') | Some(']')) {
                    Ok(Value::Tuple(self.list('(', ')', |c| c.value())?))
                } else {
                    Ok(Value::Expr(self.expr()?))
                }
            }
            _ => Ok(Value::Expr(self.expr()?)),
        }
    }

    fn arg(&mut self) -> PResult<Arg> {
        let key = self.key_ahead();
        Ok(Arg {
            key,
            value: self.value()?,
        })
    }

    fn finish(&mut self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.error(format!("unexpected '{c}' after the statement")),
        }
    }
}

fn statement(c: &mut Cursor<'_>) -> PResult<StatementKind> {
    let head = c.ident()?;
    let kind = match head.as_str() {
        "field" => {
            let start = c.pos;
            let name = c.ident()?;
            let f = if name == "Q" {
                FieldName::Rational
            } else if let Some(p) = name.strip_prefix('F').and_then(|p| p.parse::<u64>().ok()) {
                FieldName::Prime(p)
            } else {
                return Err(c.diagnostic(start + 1, format!("unknown field '{name}'; use Q or F<p>")));
            };
            StatementKind::Field(f)
        }
        "precision" => StatementKind::Precision(c.natural()?),
        "series" => {
            let name = c.ident()?;
            c.expect('=')?;
            let def = if c.peek() == Some('[') {
                SeriesDef::Coefficients(c.list('[', ']', |c| c.expr())?)
            } else {
                c.keyword("liouville")?;
                c.expect('(')?;
                let k = c.natural()?;
                c.expect(')')?;
                SeriesDef::Liouville(k as u32)
            };
            StatementKind::Series { name, def }
        }
        "ring" => {
            let name = c.ident()?;
            c.expect('=')?;
            let start = c.pos;
            let ctor = c.ident()?;
            c.expect('(')?;
            let def = match ctor.as_str() {
                "poly" => {
                    let mut v = vec![c.ident()?];
                    while c.eat(',') {
                        v.push(c.ident()?);
                    }
                    RingDef::Poly(v)
                }
                "localize" => {
                    let base = c.ident()?;
                    c.expect(',')?;
                    let at = c.named("at", |c| c.list('(', ')', |c| c.ident()))?;
                    RingDef::Localize { base, at }
                }
                "adjoin" => {
                    let base = c.ident()?;
                    c.expect(',')?;
                    let var = c.ident()?;
                    c.expect_str("->")?;
                    let series = c.ident()?;
                    RingDef::Adjoin { base, var, series }
                }
                "subring" => {
                    let base = c.ident()?;
                    let mut generators = Vec::new();
                    while c.eat(',') {
                        generators.push(c.expr()?);
                    }
                    RingDef::Subring { base, generators }
                }
                "dvr" => RingDef::Dvr(c.ident()?),
                "local" => {
                    let base = c.ident()?;
                    c.expect(',')?;
                    let order = c.named("order", |c| c.natural())? as u32;
                    RingDef::Local { base, order }
                }
                "idealize" => {
                    let base = c.ident()?;
                    c.expect(',')?;
                    let rank = c.named("rank", |c| c.natural())?;
                    RingDef::Idealize { base, rank }
                }
                other => return Err(c.diagnostic(start, format!("unknown ring constructor '{other}'"))),
            };
            c.expect(')')?;
            StatementKind::Ring { name, def }
        }
        "derivation" => {
            let name = c.ident()?;
            c.keyword("on")?;
            let on = c.ident()?;
            c.keyword("over")?;
            let over = c.ident()?;
            c.expect(':')?;
            let mut images = Vec::new();
            loop {
                let v = c.ident()?;
                c.expect('=')?;
                images.push((v, c.expr()?));
                if !c.eat(',') {
                    break;
                }
            }
            StatementKind::Derivation { name, on, over, images }
        }
        "set" => {
            let name = c.ident()?;
            c.expect('=')?;
            c.keyword("powers")?;
            c.expect('(')?;
            let var = c.ident()?;
            c.expect(')')?;
            StatementKind::Set { name, var }
        }
        "module" => {
            let name = c.ident()?;
            c.expect('=')?;
            let start = c.pos;
            let def = match c.ident()?.as_str() {
                "lattice" => {
                    c.expect('(')?;
                    let save = c.pos;
                    let def = if c.ident().as_deref() == Ok("all") {
                        ModuleDef::Lattice(None)
                    } else {
                        c.pos = save;
                        c.keyword("val")?;
                        c.expect_str(">=")?;
                        ModuleDef::Lattice(Some(c.integer()?))
                    };
                    c.expect(')')?;
                    def
                }
                "span" => {
                    c.expect('(')?;
                    let ring = c.ident()?;
                    let mut vectors = Vec::new();
                    while c.eat(',') {
                        vectors.push(c.list('[', ']', |c| c.expr())?);
                    }
                    c.expect(')')?;
                    ModuleDef::Span { ring, vectors }
                }
                other => return Err(c.diagnostic(start, format!("unknown module constructor '{other}'"))),
            };
            StatementKind::Module { name, def }
        }
        "scenario" => {
            let name = c.ident()?;
            c.expect('=')?;
            c.keyword("twist")?;
            c.expect('(')?;
            let ring = c.ident()?;
            c.expect(',')?;
            let derivation = c.ident()?;
            c.expect(',')?;
            let module = c.ident()?;
            c.expect(',')?;
            let set = c.ident()?;
            c.expect(')')?;
            StatementKind::Scenario {
                name,
                ring,
                derivation,
                module,
                set,
            }
        }
        "spec" => {
            let name = c.ident()?;
            c.expect('=')?;
            let start = c.pos;
            let def = match c.ident()?.as_str() {
                "extension" => {
                    c.expect('(')?;
                    let small = c.ident()?;
                    c.expect(',')?;
                    let big = c.ident()?;
                    c.expect(',')?;
                    let e = c.named("c", |c| c.expr())?;
                    c.expect(')')?;
                    SpecDef::Extension { small, big, c: e }
                }
                "global_stable" => {
                    c.expect('(')?;
                    let var = c.ident()?;
                    c.expect(',')?;
                    let primes = c.named("primes", |c| c.list('[', ']', |c| c.expr()))?;
                    c.expect(',')?;
                    let ranks = c.named("ranks", |c| c.list('[', ']', |c| c.natural()))?;
                    c.expect(')')?;
                    SpecDef::GlobalStable { var, primes, ranks }
                }
                other => return Err(c.diagnostic(start, format!("unknown spec constructor '{other}'"))),
            };
            StatementKind::Spec { name, def }
        }
        "check" => {
            c.skip_ws();
            let start = c.pos;
            let mut kind_name = c.ident()?;
            while c.chars.get(c.pos) == Some(&'-') {
                c.pos += 1;
                kind_name.push('-');
                kind_name.push_str(&c.ident()?);
            }
            let kind = CheckKind::from_name(&kind_name)
                .ok_or_else(|| c.diagnostic(start, format!("unknown check kind '{kind_name}'")))?;
            let target = c.ident()?;
            let mut args = Vec::new();
            if c.eat(':') {
                loop {
                    args.push(c.arg()?);
                    if !c.eat(',') {
                        break;
                    }
                }
            }
            StatementKind::Check { kind, target, args }
        }
        other => {
            return Err(Diagnostic {
                line: c.line,
                column: 1 + c.text.len() - c.text.trim_start().len(),
                message: format!("unknown statement '{other}'"),
            })
        }
    };
    c.finish()?;
    Ok(kind)
}

/// Parses a script and checks its scoping rules: names are declared once
/// and before use, `precision` appears exactly once and `field` at most once.
pub fn parse(text: &str) -> PResult<Script> {
    let mut statements = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let mut c = Cursor::new(line, i + 1);
        let column = 1 + line.len() - line.trim_start().len();
        let kind = statement(&mut c)?;
        statements.push(Statement {
            location: Location { line: i + 1, column },
            kind,
        });
    }
    let script = Script { statements };
    check_scopes(&script)?;
    Ok(script)
}

fn check_scopes(script: &Script) -> PResult<()> {
    let mut declared: HashSet<&str> = HashSet::new();
    let mut precision = None;
    let mut field = None;
    let at = |s: &Statement, message: String| Diagnostic {
        line: s.location.line,
        column: s.location.column,
        message,
    };
    for s in &script.statements {
        match &s.kind {
            StatementKind::Precision(_) => {
                if let Some(first) = precision.replace(s.location.line) {
                    return Err(at(s, format!("duplicate precision declaration (first at line {first})")));
                }
            }
            StatementKind::Field(_) => {
                if let Some(first) = field.replace(s.location.line) {
                    return Err(at(s, format!("duplicate field declaration (first at line {first})")));
                }
            }
            _ => {}
        }
        for r in s.kind.references() {
            if !declared.contains(r) {
                return Err(at(s, format!("undeclared identifier '{r}'")));
            }
        }
        if let Some(name) = s.kind.declared() {
            if !declared.insert(name) {
                return Err(at(s, format!("'{name}' is declared twice")));
            }
        }
    }
    if precision.is_none() {
        return Err(Diagnostic {
            line: 1,
            column: 1,
            message: "missing precision declaration".into(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "field F5\nprecision 24\ncheck membership GL : Z/x\n";

    #[test]
    fn undeclared_target_is_reported() {
        let d = parse(MINIMAL).unwrap_err();
        assert_eq!((d.line, d.message.as_str()), (3, "undeclared identifier 'GL'"));
    }

    #[test]
    fn statements_and_locations() {
        let s = parse("field F5\n  precision 24 # comment\n\nring A = poly(x, y)\n").unwrap();
        assert_eq!(s.statements.len(), 3);
        assert_eq!(s.statements[1].location.line, 2);
        assert_eq!(s.statements[1].location.column, 3);
        assert_eq!(s.statements[2].kind.to_string(), "ring A = poly(x, y)");
    }

    #[test]
    fn unknown_check_kind() {
        let d = parse("precision 4\nring A = poly(x)\ncheck bogus A : x\n").unwrap_err();
        assert_eq!(d.to_string(), "unknown check kind 'bogus' at line 3, column 7");
    }

    #[test]
    fn duplicate_and_missing_precision() {
        assert!(parse("precision 4\nprecision 5\n").unwrap_err().message.starts_with("duplicate precision"));
        assert_eq!(parse("field Q\n").unwrap_err().message, "missing precision declaration");
    }

    #[test]
    fn argument_values() {
        let s = parse("precision 8\nring A = poly(x, Z)\ncheck quadratic A : pairs=[(Z/x, Z/x)], ideal=(x), (Z - x)/x, quasilocal")
            .unwrap();
        let StatementKind::Check { args, .. } = &s.statements[2].kind else { panic!() };
        assert_eq!(args.len(), 4);
        assert!(matches!(&args[0].value, Value::List(v) if matches!(&v[0], Value::Tuple(t) if t.len() == 2)));
        assert!(matches!(&args[1].value, Value::Tuple(t) if t.len() == 1));
        assert!(matches!(&args[2].value, Value::Expr(_)));
        assert_eq!(s.statements[2].to_string(), "check quadratic A : pairs=[(Z/x, Z/x)], ideal=(x), (Z - x)/x, quasilocal");
    }

    #[test]
    fn syntax_errors_carry_columns() {
        let d = parse("precision 8\nring A = poly(x\n").unwrap_err();
        assert_eq!((d.line, d.column), (2, 16));
        let d = parse("precision 8\nseries z = liouville(x)\n").unwrap_err();
        assert_eq!(d.line, 2);
        assert!(parse("precision 8\nfield G5\n").is_err());
        assert!(parse("precision 8\nfrobnicate\n").is_err());
        assert!(parse("precision 8\nring A = poly(x) extra\n").is_err());
    }

    #[test]
    fn names_are_declared_once() {
        let d = parse("precision 8\nring A = poly(x)\nring A = poly(y)\n").unwrap_err();
        assert!(d.message.contains("declared twice"));
    }
}
