//! Locally nameless terms.
//!
//! Bound variables are de Bruijn indices; context variables are named
//! (`Free`). Binders keep their display name as an annotation only, so
//! derived equality on [`Term`] is alpha-equivalence.

use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::types::Type;

pub type Name = Arc<str>;

#[derive(Clone, Debug, Eq)]
pub struct Binder {
    pub name: Name,
    pub ty: Type,
}

impl Binder {
    pub fn new(name: impl Into<Name>, ty: Type) -> Self {
        Binder {
            name: name.into(),
            ty,
        }
    }
}

// Display names never take part in identity.
impl PartialEq for Binder {
    fn eq(&self, other: &Self) -> bool {
        self.ty == other.ty
    }
}

impl Hash for Binder {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ty.hash(state)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Const(Name),
    /// A variable of the surrounding [`Context`](super::Context).
    Free(Name),
    /// de Bruijn index.
    Bound(u32),
    App(Arc<Term>, Arc<Term>),
    Lam(Binder, Arc<Term>),
    Imp(Arc<Term>, Arc<Term>),
    All(Binder, Arc<Term>),
}

impl Term {
    pub fn cnst(name: impl Into<Name>) -> Term {
        Term::Const(name.into())
    }

    pub fn free(name: impl Into<Name>) -> Term {
        Term::Free(name.into())
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn imp(a: Term, b: Term) -> Term {
        Term::Imp(Arc::new(a), Arc::new(b))
    }

    /// `a1 -> a2 -> ... -> c`
    pub fn imps(hyps: impl IntoIterator<Item = Term>, concl: Term) -> Term {
        let hyps: Vec<Term> = hyps.into_iter().collect();
        hyps.into_iter()
            .rev()
            .fold(concl, |acc, h| Term::imp(h, acc))
    }

    /// Universal quantification over the named free variable `x` of `body`.
    pub fn forall(x: &str, ty: Type, body: Term) -> Term {
        Term::All(Binder::new(x, ty), Arc::new(body.close(x)))
    }

    pub fn lambda(x: &str, ty: Type, body: Term) -> Term {
        Term::Lam(Binder::new(x, ty), Arc::new(body.close(x)))
    }

    pub fn is_imp(&self) -> bool {
        matches!(self, Term::Imp(..))
    }

    /// Head and arguments of an application spine.
    pub fn strip_app(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(a.as_ref());
            cur = f.as_ref();
        }
        args.reverse();
        (cur, args)
    }

    pub fn head_const(&self) -> Option<&Name> {
        match self.strip_app().0 {
            Term::Const(c) => Some(c),
            _ => None,
        }
    }

    /// Shifts loose indices `>= cutoff` by `d`.
    pub fn shift(&self, d: i64, cutoff: u32) -> Term {
        if d == 0 || !self.has_loose_from(cutoff) {
            return self.clone();
        }
        match self {
            Term::Bound(i) if *i >= cutoff => {
                let j = *i as i64 + d;
                debug_assert!(j >= 0, "negative de Bruijn index");
                Term::Bound(j as u32)
            }
            Term::Bound(_) | Term::Const(_) | Term::Free(_) => self.clone(),
            Term::App(f, a) => Term::app(f.shift(d, cutoff), a.shift(d, cutoff)),
            Term::Imp(a, b) => Term::imp(a.shift(d, cutoff), b.shift(d, cutoff)),
            Term::Lam(b, body) => Term::Lam(b.clone(), Arc::new(body.shift(d, cutoff + 1))),
            Term::All(b, body) => Term::All(b.clone(), Arc::new(body.shift(d, cutoff + 1))),
        }
    }

    /// True if some index `>= depth` is loose in `self`.
    pub fn has_loose_from(&self, depth: u32) -> bool {
        match self {
            Term::Bound(i) => *i >= depth,
            Term::Const(_) | Term::Free(_) => false,
            Term::App(f, a) | Term::Imp(f, a) => f.has_loose_from(depth) || a.has_loose_from(depth),
            Term::Lam(_, b) | Term::All(_, b) => b.has_loose_from(depth + 1),
        }
    }

    /// True if some index `< depth` occurs loose (i.e. refers to one of the
    /// `depth` innermost enclosing binders).
    pub fn mentions_bound_below(&self, depth: u32) -> bool {
        fn go(t: &Term, depth: u32, under: u32) -> bool {
            match t {
                Term::Bound(i) => *i >= under && *i < under + depth,
                Term::Const(_) | Term::Free(_) => false,
                Term::App(f, a) | Term::Imp(f, a) => go(f, depth, under) || go(a, depth, under),
                Term::Lam(_, b) | Term::All(_, b) => go(b, depth, under + 1),
            }
        }
        go(self, depth, 0)
    }

    pub fn is_closed(&self) -> bool {
        !self.has_loose_from(0)
    }

    /// Substitutes `arg` for index 0 of a binder body, lowering other loose indices.
    pub fn instantiate(&self, arg: &Term) -> Term {
        self.subst_at(0, arg)
    }

    fn subst_at(&self, depth: u32, arg: &Term) -> Term {
        if !self.has_loose_from(depth) {
            return self.clone();
        }
        match self {
            Term::Bound(i) if *i == depth => arg.shift(depth as i64, 0),
            Term::Bound(i) if *i > depth => Term::Bound(i - 1),
            Term::Bound(_) | Term::Const(_) | Term::Free(_) => self.clone(),
            Term::App(f, a) => Term::app(f.subst_at(depth, arg), a.subst_at(depth, arg)),
            Term::Imp(a, b) => Term::imp(a.subst_at(depth, arg), b.subst_at(depth, arg)),
            Term::Lam(b, body) => Term::Lam(b.clone(), Arc::new(body.subst_at(depth + 1, arg))),
            Term::All(b, body) => Term::All(b.clone(), Arc::new(body.subst_at(depth + 1, arg))),
        }
    }

    /// Opens a binder body with a named free variable.
    pub fn open(&self, name: &str) -> Term {
        self.instantiate(&Term::free(name))
    }

    /// Abstracts the free variable `name`, producing a body for one new binder.
    pub fn close(&self, name: &str) -> Term {
        fn go(t: &Term, name: &str, depth: u32) -> Term {
            match t {
                Term::Free(x) if &**x == name => Term::Bound(depth),
                Term::Bound(i) if *i >= depth => Term::Bound(i + 1),
                Term::Bound(_) | Term::Free(_) | Term::Const(_) => t.clone(),
                Term::App(f, a) => Term::app(go(f, name, depth), go(a, name, depth)),
                Term::Imp(a, b) => Term::imp(go(a, name, depth), go(b, name, depth)),
                Term::Lam(b, body) => Term::Lam(b.clone(), Arc::new(go(body, name, depth + 1))),
                Term::All(b, body) => Term::All(b.clone(), Arc::new(go(body, name, depth + 1))),
            }
        }
        go(self, name, 0)
    }

    /// Replaces free variables by terms (terms must be closed w.r.t. bound indices).
    pub fn subst_free(&self, f: &dyn Fn(&str) -> Option<Term>) -> Term {
        match self {
            Term::Free(x) => f(x).unwrap_or_else(|| self.clone()),
            Term::Bound(_) | Term::Const(_) => self.clone(),
            Term::App(g, a) => Term::app(g.subst_free(f), a.subst_free(f)),
            Term::Imp(a, b) => Term::imp(a.subst_free(f), b.subst_free(f)),
            Term::Lam(b, body) => Term::Lam(b.clone(), Arc::new(body.subst_free(f))),
            Term::All(b, body) => Term::All(b.clone(), Arc::new(body.subst_free(f))),
        }
    }

    /// Renames constants; used to turn context variables into fresh constants and back.
    pub fn map_consts(&self, f: &dyn Fn(&str) -> Option<Term>) -> Term {
        match self {
            Term::Const(c) => f(c).unwrap_or_else(|| self.clone()),
            Term::Bound(_) | Term::Free(_) => self.clone(),
            Term::App(g, a) => Term::app(g.map_consts(f), a.map_consts(f)),
            Term::Imp(a, b) => Term::imp(a.map_consts(f), b.map_consts(f)),
            Term::Lam(b, body) => Term::Lam(b.clone(), Arc::new(body.map_consts(f))),
            Term::All(b, body) => Term::All(b.clone(), Arc::new(body.map_consts(f))),
        }
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Term::Free(x) = t {
                out.insert(x.clone());
            }
        });
        out
    }

    /// Constants in first-occurrence order, without duplicates.
    pub fn consts(&self) -> Vec<Name> {
        let mut out: Vec<Name> = Vec::new();
        self.visit(&mut |t| {
            if let Term::Const(c) = t {
                if !out.contains(c) {
                    out.push(c.clone());
                }
            }
        });
        out
    }

    /// Pre-order, left to right.
    pub fn visit(&self, f: &mut dyn FnMut(&Term)) {
        f(self);
        match self {
            Term::App(g, a) | Term::Imp(g, a) => {
                g.visit(f);
                a.visit(f);
            }
            Term::Lam(_, b) | Term::All(_, b) => b.visit(f),
            _ => {}
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::App(f, a) | Term::Imp(f, a) => 1 + f.depth().max(a.depth()),
            Term::Lam(_, b) | Term::All(_, b) => 1 + b.depth(),
            _ => 1,
        }
    }
}

/// Alpha-equivalence. Binder names are annotations, so this is structural equality.
pub fn alpha_eq(t: &Term, u: &Term) -> bool {
    t == u
}
