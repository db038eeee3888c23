//! Rendering terms in the ASCII listing notation accepted by the script parser.

use std::collections::HashSet;
use std::fmt;

use super::names;
use super::term::{Binder, Term};

const P_BINDER: u8 = 0;
const P_IFF: u8 = 1;
const P_IMP: u8 = 2;
const P_OR: u8 = 3;
const P_AND: u8 = 4;
const P_EQ: u8 = 5;
const P_NOT: u8 = 6;
const P_APP: u8 = 7;
const P_ATOM: u8 = 8;

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut avoid = HashSet::new();
        self.visit(&mut |t| match t {
            Term::Const(c) | Term::Free(c) => {
                avoid.insert(c.to_string());
            }
            _ => {}
        });
        let mut p = Printer {
            avoid,
            stack: Vec::new(),
        };
        let mut out = String::new();
        p.term(self, P_BINDER, &mut out);
        f.write_str(&out)
    }
}

struct Printer {
    avoid: HashSet<String>,
    stack: Vec<String>,
}

impl Printer {
    fn fresh(&self, base: &str) -> String {
        let taken = |n: &str| self.avoid.contains(n) || self.stack.iter().any(|s| s == n);
        let base = if base.is_empty() { "x" } else { base };
        if !taken(base) {
            return base.to_string();
        }
        (0..)
            .map(|i| format!("{}{}", base, i))
            .find(|n| !taken(n))
            .unwrap()
    }

    fn binder(&mut self, kw: &str, sep: &str, b: &Binder, body: &Term, out: &mut String) {
        let name = self.fresh(&b.name);
        out.push_str(&format!("{} {}:{}{} ", kw, name, b.ty, sep));
        self.stack.push(name);
        self.term(body, P_BINDER, out);
        self.stack.pop();
    }

    fn term(&mut self, t: &Term, prec: u8, out: &mut String) {
        let mine = self.prec_of(t);
        if mine < prec {
            out.push('(');
            self.term_inner(t, out);
            out.push(')');
        } else {
            self.term_inner(t, out);
        }
    }

    fn prec_of(&self, t: &Term) -> u8 {
        match t {
            Term::Const(_) | Term::Free(_) | Term::Bound(_) => P_ATOM,
            Term::Lam(..) | Term::All(..) => P_BINDER,
            Term::Imp(..) => P_IMP,
            Term::App(..) => {
                let (head, args) = t.strip_app();
                match (head, args.len()) {
                    (Term::Const(c), 2) if &**c == names::IFF => P_IFF,
                    (Term::Const(c), 2) if &**c == names::OR => P_OR,
                    (Term::Const(c), 2) if &**c == names::AND => P_AND,
                    (Term::Const(c), 1) if &**c == names::NOT => P_NOT,
                    (Term::Const(c), 2) if is_eq(c) => P_EQ,
                    (Term::Const(c), 1) if is_ex(c) && matches!(args[0], Term::Lam(..)) => P_BINDER,
                    _ => P_APP,
                }
            }
        }
    }

    fn term_inner(&mut self, t: &Term, out: &mut String) {
        match t {
            Term::Const(c) | Term::Free(c) => out.push_str(c),
            Term::Bound(i) => {
                let i = *i as usize;
                match self.stack.len().checked_sub(i + 1) {
                    Some(k) => out.push_str(&self.stack[k].clone()),
                    None => out.push_str(&format!("#{}", i)),
                }
            }
            Term::Lam(b, body) => self.binder("fun", " =>", b, body, out),
            Term::All(b, body) => self.binder("forall", ",", b, body, out),
            Term::Imp(a, b) => {
                self.term(a, P_IMP + 1, out);
                out.push_str(" -> ");
                self.term(b, P_IMP, out);
            }
            Term::App(..) => {
                let (head, args) = t.strip_app();
                let infix = |op: &str, lp: u8, rp: u8, me: &mut Self, out: &mut String| {
                    me.term(args[0], lp, out);
                    out.push_str(op);
                    me.term(args[1], rp, out);
                };
                match self.prec_of(t) {
                    P_IFF => infix(" <-> ", P_IFF + 1, P_IFF + 1, self, out),
                    P_OR => infix(" \\/ ", P_OR + 1, P_OR, self, out),
                    P_AND => infix(" /\\ ", P_AND + 1, P_AND, self, out),
                    P_EQ => infix(" = ", P_EQ + 1, P_EQ + 1, self, out),
                    P_NOT => {
                        out.push('~');
                        self.term(args[0], P_NOT, out);
                    }
                    P_BINDER => {
                        let Term::Lam(b, body) = args[0] else {
                            unreachable!()
                        };
                        self.binder("exists", ",", b, body, out);
                    }
                    _ => {
                        self.term(head, P_APP, out);
                        for a in args {
                            out.push(' ');
                            self.term(a, P_ATOM, out);
                        }
                    }
                }
            }
        }
    }
}

fn is_eq(c: &str) -> bool {
    matches!(names::parse_poly_name(c), Some((names::PolyKind::Eq, _)))
}

fn is_ex(c: &str) -> bool {
    matches!(names::parse_poly_name(c), Some((names::PolyKind::Ex, _)))
}
