use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::error::{KResult, KernelError};
use super::names::{self, PolyKind};
use super::proof::ProofTerm;
use super::term::{Name, Term};
use super::typecheck::typecheck;
use super::types::Type;

/// How a theorem is justified.
#[derive(Clone, Debug, PartialEq)]
pub enum TheoremProof {
    /// A proof term accepted by the checker. It may still contain `aby` holes.
    Checked { proof: ProofTerm, holes: usize },
    /// Admitted without a kernel proof.
    Trusted,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Entry {
    Prim {
        name: Name,
        ty: Type,
    },
    Axiom {
        name: Name,
        prop: Term,
    },
    Def {
        name: Name,
        ty: Type,
        body: Term,
    },
    Thm {
        name: Name,
        prop: Term,
        proof: TheoremProof,
    },
}

impl Entry {
    pub fn name(&self) -> &Name {
        match self {
            Entry::Prim { name, .. }
            | Entry::Axiom { name, .. }
            | Entry::Def { name, .. }
            | Entry::Thm { name, .. } => name,
        }
    }

    /// The proposition stated by an axiom or theorem.
    pub fn prop(&self) -> Option<&Term> {
        match self {
            Entry::Axiom { prop, .. } | Entry::Thm { prop, .. } => Some(prop),
            _ => None,
        }
    }

    pub fn const_type(&self) -> Option<&Type> {
        match self {
            Entry::Prim { ty, .. } | Entry::Def { ty, .. } => Some(ty),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Entry::Prim { .. } => "Prim",
            Entry::Axiom { .. } => "Axiom",
            Entry::Def { .. } => "Def",
            Entry::Thm { .. } => "Thm",
        }
    }
}

/// An ordered development: every entry mentions only earlier ones.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    entries: Vec<Arc<Entry>>,
    index: HashMap<Name, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().map(|e| e.as_ref())
    }

    pub fn entry_at(&self, i: usize) -> Option<&Entry> {
        self.entries.get(i).map(|e| e.as_ref())
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// The first `n` entries.
    pub fn prefix(&self, n: usize) -> Signature {
        let entries: Vec<_> = self.entries.iter().take(n).cloned().collect();
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.name().clone(), i))
            .collect();
        Signature { entries, index }
    }

    /// Looks up an entry, synthesizing instances of the type-indexed
    /// connectives (`ex_<slug>`, `eq_<slug>`) on demand.
    pub fn lookup(&self, name: &str) -> Option<Arc<Entry>> {
        if let Some(&i) = self.index.get(name) {
            return Some(self.entries[i].clone());
        }
        let (kind, ty) = names::parse_poly_name(name)?;
        // Only synthesize once the base connective is present.
        self.index.get(kind.base())?;
        Some(Arc::new(poly_def(kind, &ty)))
    }

    pub fn const_type(&self, name: &str) -> Option<Type> {
        self.lookup(name).and_then(|e| e.const_type().cloned())
    }

    pub fn definiens(&self, name: &str) -> Option<Term> {
        match self.lookup(name)?.as_ref() {
            Entry::Def { body, .. } => Some(body.clone()),
            _ => None,
        }
    }

    pub fn is_def(&self, name: &str) -> bool {
        self.definiens(name).is_some()
    }

    /// Position used to order delta steps: later definitions unfold first.
    pub(crate) fn def_height(&self, name: &str) -> Option<usize> {
        if let Some(&i) = self.index.get(name) {
            return matches!(self.entries[i].as_ref(), Entry::Def { .. }).then_some(i);
        }
        let (kind, _) = names::parse_poly_name(name)?;
        self.index.get(kind.base()).copied()
    }

    pub fn prop_of(&self, name: &str) -> Option<Term> {
        self.lookup(name).and_then(|e| e.prop().cloned())
    }

    /// Appends an entry after checking names and well-typedness. Theorem
    /// proofs are not re-checked here.
    pub fn push(&mut self, entry: Entry) -> KResult<()> {
        let name = entry.name().clone();
        if self.index.contains_key(&name) {
            return Err(KernelError::DuplicateName(name));
        }
        if names::parse_poly_name(&name).is_some() && self.index.contains_key(names::EQ) {
            return Err(KernelError::ReservedName(name));
        }
        let empty = super::Context::default();
        match &entry {
            Entry::Prim { .. } => {}
            Entry::Def { ty, body, .. } => {
                let found = typecheck(self, &empty, body)?;
                if &found != ty {
                    return Err(KernelError::TypeMismatch {
                        term: name.to_string(),
                        expected: ty.clone(),
                        found,
                    });
                }
            }
            Entry::Axiom { prop, .. } | Entry::Thm { prop, .. } => {
                let found = typecheck(self, &empty, prop)?;
                if !found.is_prop() {
                    return Err(KernelError::NotAProp(name.to_string()));
                }
            }
        }
        self.index.insert(name, self.entries.len());
        self.entries.push(Arc::new(entry));
        Ok(())
    }

    /// Replaces the justification of an existing theorem. The proof is not
    /// checked here.
    pub fn set_proof(&mut self, name: &str, proof: TheoremProof) -> KResult<()> {
        let i = self
            .position(name)
            .ok_or_else(|| KernelError::UnknownTheorem(name.into()))?;
        let Entry::Thm { name, prop, .. } = self.entries[i].as_ref() else {
            return Err(KernelError::UnknownTheorem(name.into()));
        };
        self.entries[i] = Arc::new(Entry::Thm {
            name: name.clone(),
            prop: prop.clone(),
            proof,
        });
        Ok(())
    }

    /// Removes a named entry and everything after it.
    pub fn truncate_before(&self, name: &str) -> Signature {
        match self.position(name) {
            Some(i) => self.prefix(i),
            None => self.clone(),
        }
    }

    /// Keeps primitives, definitions, and the listed axioms/theorems.
    pub fn restrict(&self, keep: &dyn Fn(&str) -> bool) -> Signature {
        let mut out = Signature::new();
        for e in &self.entries {
            let retain = match e.as_ref() {
                Entry::Prim { .. } | Entry::Def { .. } => true,
                _ => keep(e.name()),
            };
            if retain {
                out.index.insert(e.name().clone(), out.entries.len());
                out.entries.push(e.clone());
            }
        }
        out
    }

    /// One line per entry.
    pub fn listing(&self) -> String {
        let mut out = String::new();
        for e in self.entries() {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Prim { name, ty } => write!(f, "Prim {} : {}", name, ty),
            Entry::Axiom { name, prop } => write!(f, "Axiom {} : {}", name, prop),
            Entry::Def { name, ty, body } => write!(f, "Def {} : {} := {}", name, ty, body),
            Entry::Thm { name, prop, proof } => {
                let tag = match proof {
                    TheoremProof::Checked { holes: 0, .. } => "checked".to_string(),
                    TheoremProof::Checked { holes, .. } => format!("checked, {} aby", holes),
                    TheoremProof::Trusted => "trusted".to_string(),
                };
                write!(f, "Thm {} : {} [{}]", name, prop, tag)
            }
        }
    }
}

/// `eq_T := λx y:T. ∀Q:T→o. Q x → Q y`, `ex_T := λP:T→o. ∀p:o. (∀x:T. P x → p) → p`.
pub fn poly_def(kind: PolyKind, ty: &Type) -> Entry {
    let name: Name = names::poly_name(kind, ty).into();
    let pred = Type::arrow(ty.clone(), Type::Prop);
    match kind {
        PolyKind::Eq => {
            let body = Term::lambda(
                "x",
                ty.clone(),
                Term::lambda(
                    "y",
                    ty.clone(),
                    Term::forall(
                        "Q",
                        pred,
                        Term::imp(
                            Term::app(Term::free("Q"), Term::free("x")),
                            Term::app(Term::free("Q"), Term::free("y")),
                        ),
                    ),
                ),
            );
            Entry::Def {
                name,
                ty: Type::arrows([ty.clone(), ty.clone()], Type::Prop),
                body,
            }
        }
        PolyKind::Ex => {
            let body = Term::lambda(
                "P",
                pred.clone(),
                Term::forall(
                    "p",
                    Type::Prop,
                    Term::imp(
                        Term::forall(
                            "x",
                            ty.clone(),
                            Term::imp(Term::app(Term::free("P"), Term::free("x")), Term::free("p")),
                        ),
                        Term::free("p"),
                    ),
                ),
            );
            Entry::Def {
                name,
                ty: Type::arrow(pred, Type::Prop),
                body,
            }
        }
    }
}

/// Variables and hypotheses of a proof state.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Context {
    pub vars: Vec<(Name, Type)>,
    pub hyps: Vec<(Name, Term)>,
}

impl Context {
    pub fn var_type(&self, name: &str) -> Option<&Type> {
        self.vars
            .iter()
            .rev()
            .find(|(n, _)| &**n == name)
            .map(|(_, t)| t)
    }

    pub fn hyp(&self, name: &str) -> Option<&Term> {
        self.hyps
            .iter()
            .rev()
            .find(|(n, _)| &**n == name)
            .map(|(_, t)| t)
    }

    pub fn push_var(&mut self, name: Name, ty: Type) -> KResult<()> {
        if self.var_type(&name).is_some() {
            return Err(KernelError::ShadowedVar(name));
        }
        self.vars.push((name, ty));
        Ok(())
    }

    pub fn push_hyp(&mut self, name: Name, prop: Term) {
        self.hyps.push((name, prop));
    }

    /// Hypotheses with shadowed duplicates removed, in order.
    pub fn visible_hyps(&self) -> Vec<(Name, Term)> {
        let mut out: Vec<(Name, Term)> = Vec::new();
        for (n, p) in self.hyps.iter().rev() {
            if !out.iter().any(|(m, _)| m == n) {
                out.push((n.clone(), p.clone()));
            }
        }
        out.reverse();
        out
    }
}
