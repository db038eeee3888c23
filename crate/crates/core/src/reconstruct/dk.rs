//! The subset of Dedukti syntax found in prover proof output.

use std::fmt;

use super::ReconstructError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DkTerm {
    /// An identifier, with `{|…|}` quoting removed.
    Name(String),
    App(Box<DkTerm>, Box<DkTerm>),
    /// `x : A => body` or `x => body`.
    Lam(String, Option<Box<DkTerm>>, Box<DkTerm>),
    /// `A -> B` or `x : A -> B`.
    Pi(Option<String>, Box<DkTerm>, Box<DkTerm>),
}

impl DkTerm {
    pub fn spine(&self) -> (&DkTerm, Vec<&DkTerm>) {
        let mut args = Vec::new();
        let mut t = self;
        while let DkTerm::App(f, a) = t {
            args.push(&**a);
            t = f;
        }
        args.reverse();
        (t, args)
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            DkTerm::Name(n) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for DkTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DkTerm::Name(n) => {
                if n.chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
                {
                    write!(f, "{}", n)
                } else {
                    write!(f, "{{|{}|}}", n)
                }
            }
            DkTerm::App(g, a) => {
                let arg = match **a {
                    DkTerm::Name(_) => a.to_string(),
                    _ => format!("({})", a),
                };
                match **g {
                    DkTerm::Lam(..) | DkTerm::Pi(..) => write!(f, "({}) {}", g, arg),
                    _ => write!(f, "{} {}", g, arg),
                }
            }
            DkTerm::Lam(x, Some(ty), b) => write!(f, "{} : {} => {}", x, ty, b),
            DkTerm::Lam(x, None, b) => write!(f, "{} => {}", x, b),
            DkTerm::Pi(Some(x), a, b) => write!(f, "{} : {} -> {}", x, a, b),
            DkTerm::Pi(None, a, b) => write!(f, "({}) -> {}", a, b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DkDecl {
    Declared {
        name: String,
        ty: DkTerm,
    },
    Defined {
        name: String,
        ty: DkTerm,
        body: DkTerm,
    },
}

impl DkDecl {
    pub fn name(&self) -> &str {
        match self {
            DkDecl::Declared { name, .. } | DkDecl::Defined { name, .. } => name,
        }
    }

    pub fn ty(&self) -> &DkTerm {
        match self {
            DkDecl::Declared { ty, .. } | DkDecl::Defined { ty, .. } => ty,
        }
    }

    /// The proposition `P` when the stated type is `Prf P`.
    pub fn proved(&self) -> Option<&DkTerm> {
        match self.ty().spine() {
            (DkTerm::Name(h), args) if is_prf(h) && args.len() == 1 => Some(args[0]),
            _ => None,
        }
    }
}

fn is_prf(name: &str) -> bool {
    name == "Prf" || name.ends_with(".Prf")
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Colon,
    Def,
    Dot,
    FatArrow,
    Arrow,
    LParen,
    RParen,
}

struct Lexer<'a> {
    s: &'a [u8],
    i: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, msg: impl Into<String>) -> ReconstructError {
        ReconstructError::Syntax {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn bump(&mut self) -> u8 {
        let c = self.s[self.i];
        self.i += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }

    fn peek_at(&self, k: usize) -> Option<u8> {
        self.s.get(self.i + k).copied()
    }

    fn skip(&mut self) -> Result<(), ReconstructError> {
        loop {
            match self.peek_at(0) {
                Some(c) if c.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b'(') if self.peek_at(1) == Some(b';') => {
                    let (line, col) = (self.line, self.col);
                    self.bump();
                    self.bump();
                    loop {
                        match self.peek_at(0) {
                            None => {
                                return Err(ReconstructError::Syntax {
                                    line,
                                    col,
                                    msg: "unterminated comment".into(),
                                })
                            }
                            Some(b';') if self.peek_at(1) == Some(b')') => {
                                self.bump();
                                self.bump();
                                break;
                            }
                            _ => {
                                self.bump();
                            }
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    /// The next token with its position.
    fn next(&mut self) -> Result<Option<(Tok, usize, usize)>, ReconstructError> {
        self.skip()?;
        let (line, col) = (self.line, self.col);
        let Some(c) = self.peek_at(0) else {
            return Ok(None);
        };
        let tok = match c {
            b'{' if self.peek_at(1) == Some(b'|') => {
                self.bump();
                self.bump();
                let start = self.i;
                loop {
                    match self.peek_at(0) {
                        None => return Err(self.err("unterminated `{|`")),
                        Some(b'|') if self.peek_at(1) == Some(b'}') => break,
                        _ => {
                            self.bump();
                        }
                    }
                }
                let name = std::str::from_utf8(&self.s[start..self.i])
                    .map_err(|_| self.err("identifier is not UTF-8"))?
                    .to_string();
                self.bump();
                self.bump();
                Tok::Ident(name)
            }
            b':' if self.peek_at(1) == Some(b'=') => {
                self.bump();
                self.bump();
                Tok::Def
            }
            b':' => {
                self.bump();
                Tok::Colon
            }
            b'=' if self.peek_at(1) == Some(b'>') => {
                self.bump();
                self.bump();
                Tok::FatArrow
            }
            b'-' if self.peek_at(1) == Some(b'>') => {
                self.bump();
                self.bump();
                Tok::Arrow
            }
            b'(' => {
                self.bump();
                Tok::LParen
            }
            b')' => {
                self.bump();
                Tok::RParen
            }
            c if is_ident_byte(c) => {
                let start = self.i;
                while self.peek_at(0).is_some_and(|c| {
                    is_ident_byte(c) || (c == b'.' && self.peek_at(1).is_some_and(is_ident_byte))
                }) {
                    self.bump();
                }
                Tok::Ident(String::from_utf8_lossy(&self.s[start..self.i]).into_owned())
            }
            b'.' => {
                self.bump();
                Tok::Dot
            }
            _ => return Err(self.err(format!("unexpected character `{}`", c as char))),
        };
        Ok(Some((tok, line, col)))
    }
}

fn is_ident_byte(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_' || c == b'\''
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    i: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.0)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.i + 1).map(|t| &t.0)
    }

    fn err(&self, msg: impl Into<String>) -> ReconstructError {
        let (line, col) = self
            .toks
            .get(self.i)
            .map(|t| (t.1, t.2))
            .unwrap_or(self.end);
        ReconstructError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ReconstructError> {
        if self.peek() == Some(&t) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {}", what)))
        }
    }

    fn ident(&mut self) -> Result<String, ReconstructError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.i += 1;
                Ok(s)
            }
            _ => Err(self.err("expected an identifier")),
        }
    }

    fn decl(&mut self) -> Result<DkDecl, ReconstructError> {
        let mut keyword = false;
        if let (Some(Tok::Ident(k)), Some(Tok::Ident(_))) = (self.peek(), self.peek2()) {
            if matches!(k.as_str(), "def" | "thm") {
                keyword = true;
                self.i += 1;
            }
        }
        let name = self.ident()?;
        self.expect(Tok::Colon, "`:`")?;
        let ty = self.term()?;
        let decl = if self.peek() == Some(&Tok::Def) {
            self.i += 1;
            let body = self.term()?;
            DkDecl::Defined { name, ty, body }
        } else if keyword {
            return Err(self.err("expected `:=`"));
        } else {
            DkDecl::Declared { name, ty }
        };
        self.expect(Tok::Dot, "`.`")?;
        Ok(decl)
    }

    /// Binders and arrows, right-associative.
    fn term(&mut self) -> Result<DkTerm, ReconstructError> {
        if let (Some(Tok::Ident(x)), Some(Tok::Colon)) = (self.peek(), self.peek2()) {
            let x = x.clone();
            self.i += 2;
            let ty = self.app()?;
            return match self.peek() {
                Some(Tok::FatArrow) => {
                    self.i += 1;
                    Ok(DkTerm::Lam(x, Some(Box::new(ty)), Box::new(self.term()?)))
                }
                Some(Tok::Arrow) => {
                    self.i += 1;
                    Ok(DkTerm::Pi(Some(x), Box::new(ty), Box::new(self.term()?)))
                }
                _ => Err(self.err("expected `=>` or `->`")),
            };
        }
        if let (Some(Tok::Ident(x)), Some(Tok::FatArrow)) = (self.peek(), self.peek2()) {
            let x = x.clone();
            self.i += 2;
            return Ok(DkTerm::Lam(x, None, Box::new(self.term()?)));
        }
        let a = self.app()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.i += 1;
            let b = self.term()?;
            return Ok(DkTerm::Pi(None, Box::new(a), Box::new(b)));
        }
        Ok(a)
    }

    fn app(&mut self) -> Result<DkTerm, ReconstructError> {
        let mut t = self.atom()?;
        while matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::LParen)) {
            let a = self.atom()?;
            t = DkTerm::App(Box::new(t), Box::new(a));
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<DkTerm, ReconstructError> {
        match self.peek() {
            Some(Tok::Ident(_)) => Ok(DkTerm::Name(self.ident()?)),
            Some(Tok::LParen) => {
                self.i += 1;
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

/// Parses declarations `name : T.` and definitions `[def] name : T := t.`
pub fn parse_dedukti(text: &str) -> Result<Vec<DkDecl>, ReconstructError> {
    let mut lx = Lexer {
        s: text.as_bytes(),
        i: 0,
        line: 1,
        col: 1,
    };
    let mut toks = Vec::new();
    while let Some(t) = lx.next()? {
        toks.push(t);
    }
    let mut p = Parser {
        toks,
        i: 0,
        end: (lx.line, lx.col),
    };
    let mut out: Vec<DkDecl> = Vec::new();
    while p.i < p.toks.len() {
        let at = p.i;
        let d = p.decl()?;
        if out.iter().any(|e| e.name() == d.name()) {
            p.i = at;
            return Err(p.err(format!("`{}` declared twice", d.name())));
        }
        out.push(d);
    }
    Ok(out)
}
