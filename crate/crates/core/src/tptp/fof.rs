//! The first-order fragment and FOF emission. Nothing higher-order is ever
//! encoded: a bundle either translates directly or is rejected.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use super::bundle::{FormulaKind, Mode, Origin, ProblemBundle};
use super::mangle::mangle;
use super::th0::{formula_names, CONJECTURE_NAME};
use crate::kernel::{names, Term, Type};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FoTerm {
    Var(usize),
    Fn(String, Vec<FoTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FoFormula {
    True,
    False,
    Atom(String, Vec<FoTerm>),
    Eq(FoTerm, FoTerm),
    Not(Box<FoFormula>),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Imp(Box<FoFormula>, Box<FoFormula>),
    Iff(Box<FoFormula>, Box<FoFormula>),
    /// Binds variable `X<level>`.
    All(usize, Box<FoFormula>),
    Ex(usize, Box<FoFormula>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FoProblem {
    pub id: String,
    pub mode: Mode,
    pub origin: Origin,
    /// Mangled function symbols with arities (constants have arity 0).
    pub functions: BTreeMap<String, usize>,
    pub predicates: BTreeMap<String, usize>,
    /// Axioms then the conjecture, with their formula names.
    pub axioms: Vec<(String, FoFormula)>,
    pub conjecture: (String, FoFormula),
    /// Formula name to original name.
    pub names: Vec<(String, String)>,
}

/// Why a bundle is outside the first-order fragment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotFirstOrder {
    pub formula: String,
    pub reason: String,
    pub subterm: String,
}

impl fmt::Display for NotFirstOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} in `{}` ({})",
            self.reason, self.subterm, self.formula
        )
    }
}

struct Fo<'a> {
    b: &'a ProblemBundle,
    formula: String,
    functions: BTreeMap<String, usize>,
    predicates: BTreeMap<String, usize>,
}

type FoResult<T> = Result<T, NotFirstOrder>;

/// Arity of a first-order symbol type `ι^n → ι` or `ι^n → o`.
fn fo_signature(ty: &Type) -> Option<(usize, bool)> {
    let (doms, cod) = ty.uncurry();
    if doms.iter().any(|d| **d != Type::Set) {
        return None;
    }
    Some((doms.len(), cod.is_prop()))
}

impl<'a> Fo<'a> {
    fn reject<T>(&self, reason: &str, t: &Term) -> FoResult<T> {
        Err(NotFirstOrder {
            formula: self.formula.clone(),
            reason: reason.to_string(),
            subterm: t.to_string(),
        })
    }

    fn formula(&mut self, t: &Term, depth: usize) -> FoResult<FoFormula> {
        match t {
            Term::Imp(a, c) => Ok(FoFormula::Imp(
                Box::new(self.formula(a, depth)?),
                Box::new(self.formula(c, depth)?),
            )),
            Term::All(b, body) => {
                if b.ty != Type::Set {
                    return self.reject(&format!("quantifier over {}", b.ty), t);
                }
                Ok(FoFormula::All(
                    depth,
                    Box::new(self.formula(body, depth + 1)?),
                ))
            }
            Term::Lam(..) => self.reject("lambda abstraction", t),
            Term::Bound(_) => self.reject("propositional variable", t),
            Term::Free(_) => self.reject("free variable", t),
            Term::Const(_) | Term::App(..) => self.atom(t, depth),
        }
    }

    fn atom(&mut self, t: &Term, depth: usize) -> FoResult<FoFormula> {
        let (head, args) = t.strip_app();
        let Term::Const(c) = head else {
            return self.reject("application of a variable", t);
        };
        let bin = |me: &mut Self, k: fn(Box<FoFormula>, Box<FoFormula>) -> FoFormula| {
            Ok(k(
                Box::new(me.formula(args[0], depth)?),
                Box::new(me.formula(args[1], depth)?),
            ))
        };
        match (&**c, args.len()) {
            (names::TRUE, 0) => return Ok(FoFormula::True),
            (names::FALSE, 0) => return Ok(FoFormula::False),
            (names::NOT, 1) => return Ok(FoFormula::Not(Box::new(self.formula(args[0], depth)?))),
            (names::AND, 2) => return bin(self, FoFormula::And),
            (names::OR, 2) => return bin(self, FoFormula::Or),
            (names::IFF, 2) => return bin(self, FoFormula::Iff),
            _ => {}
        }
        if let Some((kind, ty)) = names::parse_poly_name(c) {
            if ty != Type::Set {
                return self.reject(&format!("{} at type {}", kind.base(), ty), t);
            }
            return match (kind, args.len()) {
                (names::PolyKind::Eq, 2) => Ok(FoFormula::Eq(
                    self.term(args[0], depth)?,
                    self.term(args[1], depth)?,
                )),
                (names::PolyKind::Ex, 1) => {
                    let body = match args[0] {
                        Term::Lam(_, body) => (**body).clone(),
                        p => Term::app(p.shift(1, 0), Term::Bound(0)),
                    };
                    Ok(FoFormula::Ex(
                        depth,
                        Box::new(self.formula(&body, depth + 1)?),
                    ))
                }
                _ => self.reject("partially applied connective", t),
            };
        }
        if names::is_connective(c) {
            return self.reject("partially applied connective", t);
        }
        match self.symbol(c, t)? {
            (n, true) if n == args.len() => {
                let args = args
                    .iter()
                    .map(|a| self.term(a, depth))
                    .collect::<FoResult<Vec<_>>>()?;
                let m = mangle(c);
                self.predicates.insert(m.clone(), n);
                Ok(FoFormula::Atom(m, args))
            }
            (_, true) => self.reject("partially applied predicate", t),
            (_, false) => self.reject("individual used as a formula", t),
        }
    }

    fn symbol(&self, c: &str, t: &Term) -> FoResult<(usize, bool)> {
        let Some(ty) = self.b.symbol_type(c) else {
            return self.reject("undeclared symbol", t);
        };
        match fo_signature(ty) {
            Some(s) => Ok(s),
            None => self.reject(&format!("higher-order symbol of type {}", ty), t),
        }
    }

    fn term(&mut self, t: &Term, depth: usize) -> FoResult<FoTerm> {
        match t {
            Term::Bound(i) => Ok(FoTerm::Var(depth - 1 - *i as usize)),
            Term::Const(_) | Term::App(..) => {
                let (head, args) = t.strip_app();
                let Term::Const(c) = head else {
                    return self.reject("application of a variable", t);
                };
                if names::is_connective(c) {
                    return self.reject("formula used as an individual", t);
                }
                match self.symbol(c, t)? {
                    (n, false) if n == args.len() => {
                        let args = args
                            .iter()
                            .map(|a| self.term(a, depth))
                            .collect::<FoResult<Vec<_>>>()?;
                        let m = mangle(c);
                        self.functions.insert(m.clone(), n);
                        Ok(FoTerm::Fn(m, args))
                    }
                    (_, false) => self.reject("partially applied function", t),
                    (_, true) => self.reject("formula used as an individual", t),
                }
            }
            Term::Lam(..) => self.reject("lambda abstraction", t),
            _ => self.reject("formula used as an individual", t),
        }
    }

    /// `c = λx̄. body` as `∀x̄. c(x̄) = body` or `∀x̄. c(x̄) ⇔ body`.
    fn definition(&mut self, t: &Term) -> FoResult<FoFormula> {
        let (_, args) = t.strip_app();
        let (Some(Term::Const(c)), Some(body)) = (args.first().copied(), args.get(1).copied())
        else {
            return self.formula(t, 0);
        };
        let (n, is_pred) = self.symbol(c, t)?;
        let mut body = body.clone();
        let mut k = 0;
        while let Term::Lam(_, b) = body {
            body = (*b).clone();
            k += 1;
        }
        // Eta-contracted definientia take their remaining arguments explicitly.
        for _ in k..n {
            body = Term::app(body.shift(1, 0), Term::Bound(0));
        }
        let vars: Vec<FoTerm> = (0..n).map(FoTerm::Var).collect();
        let m = mangle(c);
        let mut f = if is_pred {
            self.predicates.insert(m.clone(), n);
            FoFormula::Iff(
                Box::new(FoFormula::Atom(m, vars)),
                Box::new(self.formula(&body, n)?),
            )
        } else {
            self.functions.insert(m.clone(), n);
            FoFormula::Eq(FoTerm::Fn(m, vars), self.term(&body, n)?)
        };
        for level in (0..n).rev() {
            f = FoFormula::All(level, Box::new(f));
        }
        Ok(f)
    }
}

/// Translates a bundle whose every formula lies in the first-order fragment.
pub fn fo_fragment(b: &ProblemBundle) -> Result<FoProblem, NotFirstOrder> {
    let fnames = formula_names(b);
    let mut fo = Fo {
        b,
        formula: String::new(),
        functions: BTreeMap::new(),
        predicates: BTreeMap::new(),
    };
    let mut axioms = Vec::new();
    for (f, (fname, _)) in b.axioms.iter().zip(&fnames) {
        fo.formula = f.name.clone();
        let ff = if f.kind == FormulaKind::Def {
            fo.definition(&f.term)?
        } else {
            fo.formula(&f.term, 0)?
        };
        axioms.push((fname.clone(), ff));
    }
    fo.formula = CONJECTURE_NAME.into();
    let conj = fo.formula(&b.conjecture, 0)?;
    let (cname, _) = fnames.last().expect("conjecture").clone();
    Ok(FoProblem {
        id: b.id.clone(),
        mode: b.mode,
        origin: b.origin.clone(),
        functions: fo.functions,
        predicates: fo.predicates,
        axioms,
        conjecture: (cname, conj),
        names: fnames,
    })
}

fn var(level: usize) -> String {
    format!("X{}", level)
}

fn render_term(t: &FoTerm, out: &mut String) {
    match t {
        FoTerm::Var(l) => out.push_str(&var(*l)),
        FoTerm::Fn(f, args) => {
            out.push_str(f);
            render_args(args, out);
        }
    }
}

fn render_args(args: &[FoTerm], out: &mut String) {
    if args.is_empty() {
        return;
    }
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        render_term(a, out);
    }
    out.push(')');
}

fn render_formula(f: &FoFormula, out: &mut String) {
    let bin = |a: &FoFormula, op: &str, b: &FoFormula, out: &mut String| {
        out.push('(');
        render_formula(a, out);
        write!(out, " {} ", op).unwrap();
        render_formula(b, out);
        out.push(')');
    };
    match f {
        FoFormula::True => out.push_str("$true"),
        FoFormula::False => out.push_str("$false"),
        FoFormula::Atom(p, args) => {
            out.push_str(p);
            render_args(args, out);
        }
        FoFormula::Eq(a, b) => {
            out.push('(');
            render_term(a, out);
            out.push_str(" = ");
            render_term(b, out);
            out.push(')');
        }
        FoFormula::Not(a) => {
            out.push_str("(~ ");
            render_formula(a, out);
            out.push(')');
        }
        FoFormula::And(a, b) => bin(a, "&", b, out),
        FoFormula::Or(a, b) => bin(a, "|", b, out),
        FoFormula::Imp(a, b) => bin(a, "=>", b, out),
        FoFormula::Iff(a, b) => bin(a, "<=>", b, out),
        FoFormula::All(l, body) | FoFormula::Ex(l, body) => {
            let q = if matches!(f, FoFormula::All(..)) {
                '!'
            } else {
                '?'
            };
            write!(out, "({}[{}]: ", q, var(*l)).unwrap();
            render_formula(body, out);
            out.push(')');
        }
    }
}

fn top(f: &FoFormula) -> String {
    let mut s = String::new();
    render_formula(f, &mut s);
    let compound = !matches!(f, FoFormula::True | FoFormula::False | FoFormula::Atom(..));
    if compound {
        s[1..s.len() - 1].to_string()
    } else {
        s
    }
}

pub fn to_fof(f: &FoProblem) -> String {
    let mut out = String::new();
    writeln!(out, "% problem: {}", f.id).unwrap();
    writeln!(out, "% origin: {}", f.origin).unwrap();
    writeln!(out, "% mode: {}", f.mode).unwrap();
    for (formula, orig) in &f.names {
        writeln!(out, "% name {} {}", formula, orig).unwrap();
    }
    for (name, ax) in &f.axioms {
        writeln!(out, "fof({}, axiom, {}).", name, top(ax)).unwrap();
    }
    let (cname, c) = &f.conjecture;
    writeln!(out, "fof({}, conjecture, {}).", cname, top(c)).unwrap();
    out
}

/// Checks FOF text for well-formedness: balanced syntax, bound variables,
/// and consistent symbol arities. Returns the number of formulas.
pub fn check_fof(text: &str) -> Result<usize, String> {
    let mut c = FofChecker {
        s: text.as_bytes(),
        i: 0,
        vars: Vec::new(),
        arities: BTreeMap::new(),
    };
    let mut n = 0;
    loop {
        c.ws();
        if c.i >= c.s.len() {
            break;
        }
        c.word("fof")?;
        c.punct("(")?;
        c.lower()?;
        c.punct(",")?;
        let role = c.lower()?;
        if !matches!(role.as_str(), "axiom" | "conjecture" | "hypothesis") {
            return Err(format!("bad role `{}`", role));
        }
        c.punct(",")?;
        c.formula()?;
        c.punct(")")?;
        c.punct(".")?;
        n += 1;
    }
    if n == 0 {
        return Err("no formulas".into());
    }
    Ok(n)
}

struct FofChecker<'a> {
    s: &'a [u8],
    i: usize,
    vars: Vec<String>,
    /// (is predicate, arity) per symbol.
    arities: BTreeMap<String, (bool, usize)>,
}

impl FofChecker<'_> {
    fn ws(&mut self) {
        loop {
            while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
                self.i += 1;
            }
            if self.i < self.s.len() && self.s[self.i] == b'%' {
                while self.i < self.s.len() && self.s[self.i] != b'\n' {
                    self.i += 1;
                }
            } else {
                return;
            }
        }
    }

    fn at(&mut self, p: &str) -> bool {
        self.ws();
        self.s[self.i..].starts_with(p.as_bytes())
    }

    fn punct(&mut self, p: &str) -> Result<(), String> {
        if self.at(p) {
            self.i += p.len();
            Ok(())
        } else {
            Err(format!("expected `{}` at byte {}", p, self.i))
        }
    }

    fn ident(&mut self) -> String {
        self.ws();
        let start = self.i;
        while self.i < self.s.len()
            && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_')
        {
            self.i += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.i]).into_owned()
    }

    fn lower(&mut self) -> Result<String, String> {
        let w = self.ident();
        if w.as_bytes().first().is_some_and(u8::is_ascii_lowercase) {
            Ok(w)
        } else {
            Err(format!("expected a lowercase word at byte {}", self.i))
        }
    }

    fn word(&mut self, w: &str) -> Result<(), String> {
        let got = self.ident();
        if got == w {
            Ok(())
        } else {
            Err(format!("expected `{}`, found `{}`", w, got))
        }
    }

    /// A unit, or one binary connective between units at top level.
    fn formula(&mut self) -> Result<(), String> {
        let save = (self.i, self.arities.clone());
        if self.term_eq().is_ok() && self.at(")") {
            return Ok(());
        }
        (self.i, self.arities) = save;
        self.unit()?;
        if let Some(op) = ["<=>", "=>", "&", "|"].into_iter().find(|op| self.at(op)) {
            self.i += op.len();
            self.unit()?;
        }
        Ok(())
    }

    fn unit(&mut self) -> Result<(), String> {
        if self.at("(") {
            self.i += 1;
            // `(t = u)` or `(F op G)`
            let save = self.i;
            if self.term_eq().is_ok() {
                return self.punct(")");
            }
            self.i = save;
            self.unit()?;
            let op = ["<=>", "=>", "&", "|"].into_iter().find(|op| self.at(op));
            if let Some(op) = op {
                self.i += op.len();
                self.unit()?;
            }
            return self.punct(")");
        }
        if self.at("~") {
            self.i += 1;
            return self.unit();
        }
        if self.at("!") || self.at("?") {
            self.i += 1;
            self.punct("[")?;
            let v = self.ident();
            if !v.as_bytes().first().is_some_and(u8::is_ascii_uppercase) {
                return Err(format!("bad variable `{}`", v));
            }
            self.punct("]")?;
            self.punct(":")?;
            self.vars.push(v);
            let r = self.unit();
            self.vars.pop();
            return r;
        }
        if self.at("$true") || self.at("$false") {
            self.i += if self.at("$true") { 5 } else { 6 };
            return Ok(());
        }
        let p = self.lower()?;
        let n = self.args()?;
        self.arity(p, true, n)
    }

    fn term_eq(&mut self) -> Result<(), String> {
        let arities = self.arities.clone();
        let r = (|| {
            self.term()?;
            self.punct("=")?;
            if self.at(">") {
                return Err("not an equation".into());
            }
            self.term()
        })();
        if r.is_err() {
            self.arities = arities;
        }
        r
    }

    fn args(&mut self) -> Result<usize, String> {
        if !self.at("(") {
            return Ok(0);
        }
        self.i += 1;
        let mut n = 0;
        loop {
            self.term()?;
            n += 1;
            if self.at(",") {
                self.i += 1;
            } else {
                break;
            }
        }
        self.punct(")")?;
        Ok(n)
    }

    fn term(&mut self) -> Result<(), String> {
        let w = self.ident();
        match w.as_bytes().first() {
            Some(c) if c.is_ascii_uppercase() => {
                if self.vars.contains(&w) {
                    Ok(())
                } else {
                    Err(format!("unbound variable `{}`", w))
                }
            }
            Some(c) if c.is_ascii_lowercase() => {
                let n = self.args()?;
                self.arity(w, false, n)
            }
            _ => Err(format!("expected a term at byte {}", self.i)),
        }
    }

    fn arity(&mut self, sym: String, pred: bool, n: usize) -> Result<(), String> {
        match self.arities.get(&sym) {
            Some(&(p, m)) if (p, m) != (pred, n) => Err(format!(
                "`{}` used inconsistently ({} with {} args)",
                sym,
                if pred { "predicate" } else { "function" },
                n
            )),
            _ => {
                self.arities.insert(sym, (pred, n));
                Ok(())
            }
        }
    }
}
