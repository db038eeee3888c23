use std::collections::HashMap;

use super::dk::DkTerm;
use super::ReconstructError;
use crate::kernel::names::{self, PolyKind};
use crate::kernel::{ProofTerm, Term, Type};

/// What a proof-level identifier stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofRef {
    /// A fact of the signature.
    Known(String),
    /// A hypothesis of the goal, or an earlier step.
    Hyp(String),
}

/// Dedukti terms to kernel terms and proofs. Problem symbols become
/// constants, or free variables where `to_free` says a symbol stood for a
/// context variable.
pub struct Translator<'a> {
    /// Unmangled problem symbols.
    pub symbols: &'a dyn Fn(&str) -> Option<String>,
    pub to_free: HashMap<String, String>,
    pub proofs: HashMap<String, ProofRef>,
    /// Names that bound variables must avoid.
    pub taken: Vec<String>,
    bound: Vec<(String, String, Option<Term>)>,
}

fn unsupported(what: impl Into<String>) -> ReconstructError {
    ReconstructError::Unsupported(what.into())
}

impl<'a> Translator<'a> {
    pub fn new(symbols: &'a dyn Fn(&str) -> Option<String>) -> Self {
        Translator {
            symbols,
            to_free: HashMap::new(),
            proofs: HashMap::new(),
            taken: Vec::new(),
            bound: Vec::new(),
        }
    }

    fn fresh(&self, hint: &str) -> String {
        let base = if hint.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
            hint.to_string()
        } else {
            "x".to_string()
        };
        let used = |n: &str| {
            self.taken.iter().any(|t| t == n)
                || self.bound.iter().any(|(_, f, _)| f == n)
                || self.to_free.values().any(|v| v == n)
        };
        if !used(&base) {
            return base;
        }
        (0..)
            .map(|i| format!("{}{}", base, i))
            .find(|n| !used(n))
            .unwrap()
    }

    fn lookup_bound(&self, n: &str) -> Option<&(String, String, Option<Term>)> {
        self.bound.iter().rev().find(|(d, _, _)| d == n)
    }

    pub fn ty(&self, t: &DkTerm) -> Result<Type, ReconstructError> {
        match t.spine() {
            (DkTerm::Name(el), args) if (el == "El" || el.ends_with(".El")) && args.len() == 1 => {
                self.ty(args[0])
            }
            (DkTerm::Name(n), args) if args.is_empty() => match n.as_str() {
                "iota" | "i" | "set" => Ok(Type::Set),
                "o" | "prop" | "Prop" | "bool" => Ok(Type::Prop),
                _ => Err(unsupported(format!("type `{}`", n))),
            },
            (DkTerm::Name(n), args)
                if (n == "arrow" || n.ends_with(".arrow")) && args.len() == 2 =>
            {
                Ok(Type::arrow(self.ty(args[0])?, self.ty(args[1])?))
            }
            _ => match t {
                DkTerm::Pi(None, a, b) => Ok(Type::arrow(self.ty(a)?, self.ty(b)?)),
                _ => Err(unsupported(format!("type `{}`", t))),
            },
        }
    }

    fn binder<T>(
        &mut self,
        x: &str,
        body: &DkTerm,
        f: impl FnOnce(&mut Self, &DkTerm) -> Result<T, ReconstructError>,
    ) -> Result<(String, T), ReconstructError> {
        let fresh = self.fresh(x);
        self.bound.push((x.to_string(), fresh.clone(), None));
        let r = f(self, body);
        self.bound.pop();
        Ok((fresh, r?))
    }

    /// A quantifier body `x : El T => b`.
    fn quantified(
        &mut self,
        ty_arg: &DkTerm,
        body: &DkTerm,
    ) -> Result<(String, Type, Term), ReconstructError> {
        let ty = self.ty(ty_arg)?;
        let DkTerm::Lam(x, _, b) = body else {
            return Err(unsupported(format!("quantifier body `{}`", body)));
        };
        let (fresh, t) = self.binder(x, b, |s, b| s.term(b))?;
        Ok((fresh, ty, t))
    }

    pub fn term(&mut self, t: &DkTerm) -> Result<Term, ReconstructError> {
        let (head, args) = t.spine();
        if let DkTerm::Name(h) = head {
            let short = h.rsplit('.').next().unwrap_or(h);
            if self.lookup_bound(h).is_none() {
                match (short, args.as_slice()) {
                    ("imp", [a, b]) => return Ok(Term::imp(self.term(a)?, self.term(b)?)),
                    ("not", [a]) => return Ok(Term::app(Term::cnst(names::NOT), self.term(a)?)),
                    ("and" | "or" | "iff", [a, b]) => {
                        let c = match short {
                            "and" => names::AND,
                            "or" => names::OR,
                            _ => names::IFF,
                        };
                        return Ok(Term::apps(Term::cnst(c), [self.term(a)?, self.term(b)?]));
                    }
                    ("true", []) => return Ok(Term::cnst(names::TRUE)),
                    ("false", []) => return Ok(Term::cnst(names::FALSE)),
                    ("forall", [ty, body]) => {
                        let (x, ty, b) = self.quantified(ty, body)?;
                        return Ok(Term::forall(&x, ty, b));
                    }
                    ("exists", [ty, body]) => {
                        let (x, ty, b) = self.quantified(ty, body)?;
                        let c = names::poly_name(PolyKind::Ex, &ty);
                        return Ok(Term::app(Term::cnst(c), Term::lambda(&x, ty, b)));
                    }
                    ("eq" | "equal", [ty, a, b]) => {
                        let ty = self.ty(ty)?;
                        let c = names::poly_name(PolyKind::Eq, &ty);
                        return Ok(Term::apps(Term::cnst(c), [self.term(a)?, self.term(b)?]));
                    }
                    _ => {}
                }
            }
            let head = self.atom(h)?;
            let mut out = head;
            for a in args {
                out = Term::app(out, self.term(a)?);
            }
            return Ok(out);
        }
        match t {
            DkTerm::Lam(x, Some(ty), b) => {
                let ty = self.ty(ty)?;
                let (fresh, body) = self.binder(x, b, |s, b| s.term(b))?;
                Ok(Term::lambda(&fresh, ty, body))
            }
            _ => Err(unsupported(format!("term `{}`", t))),
        }
    }

    fn atom(&self, name: &str) -> Result<Term, ReconstructError> {
        if let Some((_, fresh, _)) = self.lookup_bound(name) {
            return Ok(Term::free(fresh.as_str()));
        }
        match (self.symbols)(name) {
            Some(orig) => Ok(match self.to_free.get(&orig) {
                Some(v) => Term::free(v.as_str()),
                None => Term::cnst(orig.as_str()),
            }),
            None => Err(unsupported(format!("symbol `{}`", name))),
        }
    }

    fn is_proof(&self, t: &DkTerm) -> bool {
        match t.spine().0 {
            DkTerm::Name(n) => match self.lookup_bound(n) {
                Some((_, _, prf)) => prf.is_some(),
                None => self.proofs.contains_key(n.as_str()),
            },
            DkTerm::Lam(_, _, b) => self.is_proof(b),
            _ => false,
        }
    }

    /// Curry-Howard reading of a proof body: references, applications to
    /// terms and proofs, and lambdas over terms and proofs.
    pub fn proof(&mut self, t: &DkTerm) -> Result<ProofTerm, ReconstructError> {
        match t {
            DkTerm::Name(n) => {
                if let Some((_, fresh, Some(_))) = self.lookup_bound(n) {
                    return Ok(ProofTerm::hyp(fresh.as_str()));
                }
                match self.proofs.get(n.as_str()) {
                    Some(ProofRef::Known(k)) => Ok(ProofTerm::known(k.as_str())),
                    Some(ProofRef::Hyp(h)) => Ok(ProofTerm::hyp(h.as_str())),
                    None => Err(unsupported(format!("proof reference `{}`", n))),
                }
            }
            DkTerm::App(f, a) => {
                let pf = self.proof(f)?;
                if self.is_proof(a) {
                    Ok(pf.papp(self.proof(a)?))
                } else {
                    Ok(pf.tapp(self.term(a)?))
                }
            }
            DkTerm::Lam(x, Some(ty), b) => match ty.spine() {
                (DkTerm::Name(p), args)
                    if (p == "Prf" || p.ends_with(".Prf")) && args.len() == 1 =>
                {
                    let prop = self.term(args[0])?;
                    let fresh = self.fresh(x);
                    self.bound
                        .push((x.clone(), fresh.clone(), Some(prop.clone())));
                    let r = self.proof(b);
                    self.bound.pop();
                    Ok(ProofTerm::plam(fresh.as_str(), prop, r?))
                }
                _ => {
                    let ty = self.ty(ty)?;
                    let (fresh, body) = self.binder(x, b, |s, b| s.proof(b))?;
                    Ok(ProofTerm::tlam(fresh.as_str(), ty, body))
                }
            },
            _ => Err(unsupported(format!("proof `{}`", t))),
        }
    }
}
