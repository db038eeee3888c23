//! TH0 emission and the matching parser.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::bundle::{Formula, FormulaKind, Mode, Origin, ProblemBundle};
use super::mangle::{formula_name, mangle, parse_formula_name, unmangle, FormulaTag};
use crate::kernel::{beta_eta, names, Binder, Term, Type};
use crate::script::Span;

pub const IOTA: &str = "iota";
pub const CONJECTURE_NAME: &str = "goal";

/// Formula names in emission order, with the original names they stand for.
pub fn formula_names(b: &ProblemBundle) -> Vec<(String, String)> {
    let mut ordinal = b.symbols.len();
    let mut out = Vec::new();
    for f in &b.axioms {
        ordinal += 1;
        out.push((formula_name(f.kind.tag(), &f.name, ordinal), f.name.clone()));
    }
    ordinal += 1;
    out.push((
        formula_name(FormulaTag::Conjecture, CONJECTURE_NAME, ordinal),
        CONJECTURE_NAME.to_string(),
    ));
    out
}

/// TH0 text with native connectives.
pub fn to_th0(b: &ProblemBundle) -> String {
    render(b, &[])
}

/// TH0 text where the impredicative connectives other than equality are
/// declared constants with definition axioms. `defs` comes from
/// [`connective_defs`](super::bundle::connective_defs).
pub fn to_th0_literal(b: &ProblemBundle, defs: &[(String, Type, Term)]) -> String {
    let mut lit = b.clone();
    for (name, ty, body) in defs {
        lit.symbols.push((name.clone(), ty.clone()));
        lit.axioms.push(Formula {
            name: name.clone(),
            kind: FormulaKind::Def,
            term: Term::apps(
                Term::cnst(names::poly_name(names::PolyKind::Eq, ty)),
                [Term::cnst(name.as_str()), body.clone()],
            ),
        });
    }
    render(&lit, defs)
}

fn render(b: &ProblemBundle, literal: &[(String, Type, Term)]) -> String {
    let literal = !literal.is_empty();
    let mut out = String::new();
    writeln!(out, "% problem: {}", b.id).unwrap();
    writeln!(out, "% origin: {}", b.origin).unwrap();
    writeln!(out, "% mode: {}", b.mode).unwrap();
    writeln!(
        out,
        "% defs: {}",
        if literal { "literal" } else { "native" }
    )
    .unwrap();
    let fnames = formula_names(b);
    for (f, orig) in &fnames {
        writeln!(out, "% name {} {}", f, orig).unwrap();
    }
    writeln!(out, "thf(type_{IOTA}, type, {IOTA}: $tType).").unwrap();
    for (i, (name, ty)) in b.symbols.iter().enumerate() {
        writeln!(
            out,
            "thf({}, type, {}: {}).",
            formula_name(FormulaTag::Type, name, i + 1),
            mangle(name),
            render_type(ty, true)
        )
        .unwrap();
    }
    let r = Renderer { literal };
    for (f, (fname, _)) in b.axioms.iter().zip(&fnames) {
        writeln!(out, "thf({}, axiom, {}).", fname, r.top(&f.term)).unwrap();
    }
    let (cname, _) = fnames.last().expect("conjecture name");
    writeln!(out, "thf({}, conjecture, {}).", cname, r.top(&b.conjecture)).unwrap();
    out
}

pub fn render_type(ty: &Type, top: bool) -> String {
    match ty {
        Type::Prop => "$o".into(),
        Type::Set => IOTA.into(),
        Type::Arrow(d, c) => {
            let s = format!("{} > {}", render_type(d, false), render_type(c, true));
            if top {
                s
            } else {
                format!("({})", s)
            }
        }
    }
}

struct Renderer {
    literal: bool,
}

fn var(level: usize) -> String {
    format!("X{}", level)
}

impl Renderer {
    fn top(&self, t: &Term) -> String {
        let s = self.term(t, 0);
        match s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            Some(inner) if balanced(inner) => inner.to_string(),
            _ => s,
        }
    }

    fn term(&self, t: &Term, depth: usize) -> String {
        match t {
            Term::Bound(i) => var(depth - 1 - *i as usize),
            Term::Free(x) => mangle(x),
            Term::Const(_) | Term::App(..) => self.spine(t, depth),
            Term::Lam(b, body) => format!(
                "(^[{}:{}]: {})",
                var(depth),
                render_type(&b.ty, false),
                self.term(body, depth + 1)
            ),
            Term::All(b, body) => format!(
                "(![{}:{}]: {})",
                var(depth),
                render_type(&b.ty, false),
                self.term(body, depth + 1)
            ),
            Term::Imp(a, c) => format!("({} => {})", self.term(a, depth), self.term(c, depth)),
        }
    }

    fn spine(&self, t: &Term, depth: usize) -> String {
        let (head, args) = t.strip_app();
        if let Term::Const(c) = head {
            if !self.literal || is_eq(c) {
                if let Some(s) = self.connective(c, &args, depth) {
                    return s;
                }
            }
        }
        let h = match head {
            Term::Const(c) => mangle(c),
            _ => self.term(head, depth),
        };
        if args.is_empty() {
            return h;
        }
        let mut s = format!("({}", h);
        for a in args {
            s.push_str(" @ ");
            s.push_str(&self.term(a, depth));
        }
        s.push(')');
        s
    }

    /// Native rendering of a connective, eta-expanding partial applications.
    fn connective(&self, c: &str, args: &[&Term], depth: usize) -> Option<String> {
        let arity = match c {
            names::TRUE | names::FALSE => 0,
            names::NOT => 1,
            names::AND | names::OR | names::IFF => 2,
            _ => match names::parse_poly_name(c)? {
                (names::PolyKind::Eq, _) => 2,
                (names::PolyKind::Ex, _) => 1,
            },
        };
        if args.len() < arity {
            let missing = arity - args.len();
            let tys = connective_type(c)?;
            let (doms, _) = tys.uncurry();
            let mut body = Term::apps(
                Term::cnst(c),
                args.iter()
                    .map(|a| a.shift(missing as i64, 0))
                    .chain((0..missing).rev().map(|i| Term::Bound(i as u32))),
            );
            for ty in doms[args.len()..].iter().rev() {
                body = Term::Lam(Binder::new("x", (*ty).clone()), body.into());
            }
            return Some(self.term(&body, depth));
        }
        debug_assert_eq!(args.len(), arity);
        let bin = |op: &str| {
            format!(
                "({} {} {})",
                self.term(args[0], depth),
                op,
                self.term(args[1], depth)
            )
        };
        Some(match c {
            names::TRUE => "$true".into(),
            names::FALSE => "$false".into(),
            names::NOT => format!("(~ {})", self.term(args[0], depth)),
            names::AND => bin("&"),
            names::OR => bin("|"),
            names::IFF => bin("<=>"),
            _ => match names::parse_poly_name(c)? {
                (names::PolyKind::Eq, _) => bin("="),
                (names::PolyKind::Ex, ty) => {
                    let body = match args[0] {
                        Term::Lam(_, body) => (**body).clone(),
                        p => Term::app(p.shift(1, 0), Term::Bound(0)),
                    };
                    format!(
                        "(?[{}:{}]: {})",
                        var(depth),
                        render_type(&ty, false),
                        self.term(&body, depth + 1)
                    )
                }
            },
        })
    }
}

fn is_eq(c: &str) -> bool {
    matches!(names::parse_poly_name(c), Some((names::PolyKind::Eq, _)))
}

fn balanced(s: &str) -> bool {
    let mut d = 0i32;
    for c in s.chars() {
        match c {
            '(' => d += 1,
            ')' => {
                d -= 1;
                if d < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    d == 0
}

pub fn connective_type(c: &str) -> Option<Type> {
    let o = || Type::Prop;
    Some(match c {
        names::TRUE | names::FALSE => o(),
        names::NOT => Type::arrow(o(), o()),
        names::AND | names::OR | names::IFF => Type::arrows([o(), o()], o()),
        _ => match names::parse_poly_name(c)? {
            (names::PolyKind::Eq, t) => Type::arrows([t.clone(), t], o()),
            (names::PolyKind::Ex, t) => Type::arrow(Type::arrow(t, o()), o()),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct Th0Error {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Lower(String),
    Upper(String),
    Dollar(String),
    Punct(&'static str),
}

const PUNCT: [&str; 17] = [
    "<=>", "=>", "(", ")", ",", ".", "[", "]", ":", "!", "?", "^", "~", "@", "&", "|", "=",
];

struct Lexer<'a> {
    toks: Vec<(Tok, usize)>,
    comments: Vec<&'a str>,
}

fn lex(text: &str) -> Result<Lexer<'_>, Th0Error> {
    let mut lx = Lexer {
        toks: Vec::new(),
        comments: Vec::new(),
    };
    let b = text.as_bytes();
    let mut i = 0;
    'outer: while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'%' {
            let end = text[i..].find('\n').map_or(text.len(), |k| i + k);
            lx.comments.push(&text[i + 1..end]);
            i = end;
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'$' {
            let start = i;
            i += 1;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            let w = text[start..i].to_string();
            let tok = if c == b'$' {
                Tok::Dollar(w)
            } else if c.is_ascii_uppercase() {
                Tok::Upper(w)
            } else {
                Tok::Lower(w)
            };
            lx.toks.push((tok, start));
            continue;
        }
        if c == b'>' {
            lx.toks.push((Tok::Punct(">"), i));
            i += 1;
            continue;
        }
        for p in PUNCT {
            if text[i..].starts_with(p) {
                lx.toks.push((Tok::Punct(p), i));
                i += p.len();
                continue 'outer;
            }
        }
        return Err(err_at(
            text,
            i,
            format!("unexpected character `{}`", c as char),
        ));
    }
    Ok(lx)
}

fn err_at(text: &str, offset: usize, msg: String) -> Th0Error {
    let (line, col) = crate::script::line_col(text, offset);
    Th0Error { line, col, msg }
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    symbols: HashMap<String, Type>,
    env: Vec<(String, Type)>,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Th0Error {
        let off = self.toks.get(self.pos).map_or(self.text.len(), |t| t.1);
        err_at(self.text, off, msg.into())
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn is(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn expect(&mut self, p: &str) -> Result<(), Th0Error> {
        if self.is(p) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", p)))
        }
    }

    fn lower(&mut self) -> Result<String, Th0Error> {
        match self.bump() {
            Some(Tok::Lower(w)) => Ok(w),
            _ => {
                self.pos -= 1;
                Err(self.err("expected a lowercase word"))
            }
        }
    }

    fn ty(&mut self) -> Result<Type, Th0Error> {
        let d = self.ty_unit()?;
        if self.is(">") {
            self.pos += 1;
            Ok(Type::arrow(d, self.ty()?))
        } else {
            Ok(d)
        }
    }

    fn ty_unit(&mut self) -> Result<Type, Th0Error> {
        match self.bump() {
            Some(Tok::Dollar(d)) if d == "$o" => Ok(Type::Prop),
            Some(Tok::Dollar(d)) if d == "$i" => Ok(Type::Set),
            Some(Tok::Lower(w)) if w == IOTA => Ok(Type::Set),
            Some(Tok::Punct("(")) => {
                let t = self.ty()?;
                self.expect(")")?;
                Ok(t)
            }
            _ => {
                self.pos -= 1;
                Err(self.err("expected a type"))
            }
        }
    }

    fn formula(&mut self) -> Result<Term, Th0Error> {
        let lhs = self.unit()?;
        if self.is("@") {
            let mut t = lhs;
            while self.is("@") {
                self.pos += 1;
                let a = self.unit()?;
                t = Term::app(t, a);
            }
            return Ok(t);
        }
        let op = match self.peek() {
            Some(Tok::Punct(p)) if ["&", "|", "<=>", "=>", "="].contains(p) => *p,
            _ => return Ok(lhs),
        };
        self.pos += 1;
        let rhs = self.unit()?;
        Ok(match op {
            "=>" => Term::imp(lhs, rhs),
            "&" => Term::apps(Term::cnst(names::AND), [lhs, rhs]),
            "|" => Term::apps(Term::cnst(names::OR), [lhs, rhs]),
            "<=>" => Term::apps(Term::cnst(names::IFF), [lhs, rhs]),
            _ => {
                let ty = self
                    .type_of(&lhs)
                    .ok_or_else(|| self.err("cannot type the left side of `=`"))?;
                Term::apps(
                    Term::cnst(names::poly_name(names::PolyKind::Eq, &ty)),
                    [lhs, rhs],
                )
            }
        })
    }

    fn unit(&mut self) -> Result<Term, Th0Error> {
        match self.bump() {
            Some(Tok::Punct("(")) => {
                let t = self.formula()?;
                self.expect(")")?;
                Ok(t)
            }
            Some(Tok::Punct("~")) => Ok(Term::app(Term::cnst(names::NOT), self.unit()?)),
            Some(Tok::Punct(q @ ("!" | "?" | "^"))) => {
                self.expect("[")?;
                let mut binders = Vec::new();
                loop {
                    let Some(Tok::Upper(x)) = self.bump() else {
                        self.pos -= 1;
                        return Err(self.err("expected a variable"));
                    };
                    self.expect(":")?;
                    let ty = self.ty()?;
                    binders.push((x, ty));
                    if self.is(",") {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                self.expect("]")?;
                self.expect(":")?;
                let n = binders.len();
                self.env.extend(binders.iter().cloned());
                let body = self.unit();
                self.env.truncate(self.env.len() - n);
                let mut t = body?;
                for (x, ty) in binders.into_iter().rev() {
                    t = match q {
                        "!" => Term::All(Binder::new(x, ty), t.into()),
                        "^" => Term::Lam(Binder::new(x, ty), t.into()),
                        _ => Term::app(
                            Term::cnst(names::poly_name(names::PolyKind::Ex, &ty)),
                            Term::Lam(Binder::new(x, ty), t.into()),
                        ),
                    };
                }
                Ok(t)
            }
            Some(Tok::Dollar(d)) if d == "$true" => Ok(Term::cnst(names::TRUE)),
            Some(Tok::Dollar(d)) if d == "$false" => Ok(Term::cnst(names::FALSE)),
            Some(Tok::Upper(x)) => match self.env.iter().rposition(|(y, _)| *y == x) {
                Some(k) => Ok(Term::Bound((self.env.len() - 1 - k) as u32)),
                None => {
                    self.pos -= 1;
                    Err(self.err(format!("unbound variable `{}`", x)))
                }
            },
            Some(Tok::Lower(w)) => {
                let name = unmangle(&w).map_err(|e| {
                    self.pos -= 1;
                    self.err(e.to_string())
                })?;
                if !self.symbols.contains_key(&name) {
                    self.pos -= 1;
                    return Err(self.err(format!("undeclared symbol `{}`", w)));
                }
                Ok(Term::cnst(name))
            }
            _ => {
                self.pos -= 1;
                Err(self.err("expected a formula"))
            }
        }
    }

    fn type_of(&self, t: &Term) -> Option<Type> {
        fn go(p: &Parser<'_>, t: &Term, env: &mut Vec<Type>) -> Option<Type> {
            match t {
                Term::Bound(i) => env.get(env.len().checked_sub(1 + *i as usize)?).cloned(),
                Term::Const(c) => p.symbols.get(&**c).cloned().or_else(|| connective_type(c)),
                Term::Free(_) => None,
                Term::App(f, _) => match go(p, f, env)? {
                    Type::Arrow(_, c) => Some((*c).clone()),
                    _ => None,
                },
                Term::Lam(b, body) => {
                    env.push(b.ty.clone());
                    let r = go(p, body, env);
                    env.pop();
                    Some(Type::arrow(b.ty.clone(), r?))
                }
                Term::Imp(..) | Term::All(..) => Some(Type::Prop),
            }
        }
        let mut env: Vec<Type> = self.env.iter().map(|(_, t)| t.clone()).collect();
        go(self, t, &mut env)
    }
}

/// Parses TH0 text in the form [`to_th0`] emits.
pub fn parse_th0(text: &str) -> Result<ProblemBundle, Th0Error> {
    let lx = lex(text)?;
    if lx.toks.is_empty() {
        return Err(err_at(text, text.len(), "no formulas".into()));
    }
    let mut bundle = ProblemBundle {
        id: String::new(),
        mode: Mode::Bushy,
        origin: Origin::default(),
        symbols: Vec::new(),
        axioms: Vec::new(),
        conjecture: Term::cnst(names::TRUE),
    };
    let mut originals: HashMap<String, String> = HashMap::new();
    for c in &lx.comments {
        let c = c.trim();
        if let Some(v) = c.strip_prefix("problem:") {
            bundle.id = v.trim().to_string();
        } else if let Some(v) = c.strip_prefix("mode:") {
            bundle.mode = v.trim().parse().unwrap_or(Mode::Bushy);
        } else if let Some(v) = c.strip_prefix("origin:") {
            bundle.origin = parse_origin(v.trim());
        } else if let Some(v) = c.strip_prefix("name ") {
            if let Some((f, o)) = v.split_once(' ') {
                originals.insert(f.to_string(), o.to_string());
            }
        }
    }
    let mut p = Parser {
        text,
        toks: lx.toks,
        pos: 0,
        symbols: HashMap::new(),
        env: Vec::new(),
    };
    let mut conjecture = None;
    while p.peek().is_some() {
        if p.lower()? != "thf" {
            p.pos -= 1;
            return Err(p.err("expected `thf`"));
        }
        p.expect("(")?;
        let fname = p.lower()?;
        p.expect(",")?;
        let role = p.lower()?;
        p.expect(",")?;
        match role.as_str() {
            "type" => {
                let sym = p.lower()?;
                p.expect(":")?;
                if matches!(p.peek(), Some(Tok::Dollar(d)) if d == "$tType") {
                    p.pos += 1;
                } else {
                    let ty = p.ty()?;
                    let name = unmangle(&sym).map_err(|e| p.err(e.to_string()))?;
                    p.symbols.insert(name.clone(), ty.clone());
                    bundle.symbols.push((name, ty));
                }
            }
            "axiom" | "conjecture" => {
                let t = beta_eta(&p.formula()?);
                if role == "conjecture" {
                    conjecture = Some(t);
                } else {
                    let (tag, parsed) = parse_formula_name(&fname, &|_| false)
                        .unwrap_or((FormulaTag::Fact, fname.clone()));
                    let name = originals.get(&fname).cloned().unwrap_or(parsed);
                    let kind = match tag {
                        FormulaTag::Hyp => FormulaKind::Hyp,
                        FormulaTag::Def => FormulaKind::Def,
                        _ => FormulaKind::Fact,
                    };
                    bundle.axioms.push(Formula {
                        name,
                        kind,
                        term: t,
                    });
                }
            }
            other => return Err(p.err(format!("unsupported role `{}`", other))),
        }
        p.expect(")")?;
        p.expect(".")?;
    }
    bundle.conjecture =
        conjecture.ok_or_else(|| err_at(text, text.len(), "no conjecture".into()))?;
    Ok(bundle)
}

fn parse_origin(s: &str) -> Origin {
    if let Some((thm, range)) = s.rsplit_once('@') {
        if let Some((a, b)) = range.split_once('-') {
            if let (Ok(a), Ok(b)) = (a.parse(), b.parse()) {
                return Origin {
                    theorem: thm.to_string(),
                    span: Some(Span::new(a, b)),
                };
            }
        }
    }
    Origin {
        theorem: s.to_string(),
        span: None,
    }
}
