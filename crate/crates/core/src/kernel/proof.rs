//! Curry-Howard proof terms and the bidirectional checker.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::error::{KResult, KernelError};
use super::normalize::{beta_eta, convertible, expose};
use super::signature::{Context, Signature};
use super::term::{Binder, Name, Term};
use super::typecheck::{check_prop, typecheck};
use super::types::Type;

/// An `aby` obligation: the goal is delegated to an ATP with the listed dependencies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbyHole {
    pub id: String,
    pub deps: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProofTerm {
    Hyp(Name),
    /// A theorem or axiom of the signature.
    Known(Name),
    /// Instantiates a universal.
    TApp(Box<ProofTerm>, Term),
    /// Modus ponens.
    PApp(Box<ProofTerm>, Box<ProofTerm>),
    TLam(Name, Type, Box<ProofTerm>),
    PLam(Name, Term, Box<ProofTerm>),
    Aby(AbyHole),
}

impl ProofTerm {
    pub fn hyp(n: impl Into<Name>) -> Self {
        ProofTerm::Hyp(n.into())
    }

    pub fn known(n: impl Into<Name>) -> Self {
        ProofTerm::Known(n.into())
    }

    pub fn tapp(self, t: Term) -> Self {
        ProofTerm::TApp(Box::new(self), t)
    }

    pub fn papp(self, p: ProofTerm) -> Self {
        ProofTerm::PApp(Box::new(self), Box::new(p))
    }

    pub fn tlam(x: impl Into<Name>, ty: Type, body: ProofTerm) -> Self {
        ProofTerm::TLam(x.into(), ty, Box::new(body))
    }

    pub fn plam(h: impl Into<Name>, prop: Term, body: ProofTerm) -> Self {
        ProofTerm::PLam(h.into(), prop, Box::new(body))
    }

    pub fn holes(&self) -> Vec<&AbyHole> {
        let mut out = Vec::new();
        self.visit(&mut |p| {
            if let ProofTerm::Aby(h) = p {
                out.push(h);
            }
        });
        out
    }

    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a ProofTerm)) {
        f(self);
        match self {
            ProofTerm::TApp(p, _) | ProofTerm::TLam(_, _, p) | ProofTerm::PLam(_, _, p) => {
                p.visit(f)
            }
            ProofTerm::PApp(p, q) => {
                p.visit(f);
                q.visit(f);
            }
            ProofTerm::Hyp(_) | ProofTerm::Known(_) | ProofTerm::Aby(_) => {}
        }
    }

    /// Replaces the hole with the given id.
    pub fn fill_hole(&self, id: &str, with: &ProofTerm) -> ProofTerm {
        match self {
            ProofTerm::Aby(h) if h.id == id => with.clone(),
            ProofTerm::Hyp(_) | ProofTerm::Known(_) | ProofTerm::Aby(_) => self.clone(),
            ProofTerm::TApp(p, t) => ProofTerm::TApp(Box::new(p.fill_hole(id, with)), t.clone()),
            ProofTerm::PApp(p, q) => ProofTerm::PApp(
                Box::new(p.fill_hole(id, with)),
                Box::new(q.fill_hole(id, with)),
            ),
            ProofTerm::TLam(x, ty, p) => {
                ProofTerm::TLam(x.clone(), ty.clone(), Box::new(p.fill_hole(id, with)))
            }
            ProofTerm::PLam(h, prop, p) => {
                ProofTerm::PLam(h.clone(), prop.clone(), Box::new(p.fill_hole(id, with)))
            }
        }
    }

    /// Global names (theorems/axioms, and constants in embedded terms) and
    /// hypothesis names used free in this proof, in first-use order.
    pub fn dependencies(&self) -> ProofDeps {
        let mut deps = ProofDeps::default();
        collect_deps(self, &mut Vec::new(), &mut deps);
        deps
    }
}

/// Names a proof depends on.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProofDeps {
    /// Theorems and axioms.
    pub facts: Vec<String>,
    /// Constants occurring in instantiation terms and hypothesis annotations.
    pub consts: Vec<String>,
    /// Hypotheses not discharged inside the proof.
    pub hyps: Vec<String>,
}

fn push_unique(v: &mut Vec<String>, s: &str) {
    if !v.iter().any(|x| x == s) {
        v.push(s.to_string());
    }
}

fn collect_deps(p: &ProofTerm, local: &mut Vec<Name>, out: &mut ProofDeps) {
    match p {
        ProofTerm::Hyp(h) => {
            if !local.contains(h) {
                push_unique(&mut out.hyps, h);
            }
        }
        ProofTerm::Known(n) => push_unique(&mut out.facts, n),
        ProofTerm::TApp(q, t) => {
            collect_deps(q, local, out);
            for c in t.consts() {
                push_unique(&mut out.consts, &c);
            }
        }
        ProofTerm::PApp(q, r) => {
            collect_deps(q, local, out);
            collect_deps(r, local, out);
        }
        ProofTerm::TLam(_, _, q) => collect_deps(q, local, out),
        ProofTerm::PLam(h, prop, q) => {
            for c in prop.consts() {
                push_unique(&mut out.consts, &c);
            }
            local.push(h.clone());
            collect_deps(q, local, out);
            local.pop();
        }
        ProofTerm::Aby(hole) => {
            // Dependencies of an `aby` are classified by the caller's context;
            // here hypothesis names cannot be told from globals syntactically.
            for d in &hole.deps {
                if local.iter().any(|l| &**l == d.as_str()) {
                    continue;
                }
                push_unique(&mut out.facts, d);
            }
        }
    }
}

/// An `aby` hole met during checking with the proof state it must close.
#[derive(Clone, Debug, PartialEq)]
pub struct HoleObligation {
    pub hole: AbyHole,
    pub ctx: Context,
    pub goal: Term,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckReport {
    pub holes: Vec<HoleObligation>,
}

impl CheckReport {
    pub fn is_complete(&self) -> bool {
        self.holes.is_empty()
    }
}

/// Checks that `d` proves `claimed` under `ctx`.
pub fn check_proof(
    sig: &Signature,
    ctx: &Context,
    d: &ProofTerm,
    claimed: &Term,
) -> KResult<CheckReport> {
    check_prop(sig, ctx, claimed)?;
    let mut checker = Checker {
        sig,
        report: CheckReport::default(),
    };
    let mut ctx = ctx.clone();
    checker.check(&mut ctx, d, claimed)?;
    Ok(checker.report)
}

/// Infers the proposition proved by a hole-free proof term.
pub fn infer_proof(sig: &Signature, ctx: &Context, d: &ProofTerm) -> KResult<Term> {
    let mut checker = Checker {
        sig,
        report: CheckReport::default(),
    };
    let mut ctx = ctx.clone();
    checker.infer(&mut ctx, d)
}

struct Checker<'a> {
    sig: &'a Signature,
    report: CheckReport,
}

impl Checker<'_> {
    fn check(&mut self, ctx: &mut Context, d: &ProofTerm, claimed: &Term) -> KResult<()> {
        match d {
            ProofTerm::TLam(x, ty, body) => {
                let exposed = expose(self.sig, claimed)
                    .ok_or_else(|| KernelError::NotAForall(claimed.to_string()))?;
                let Term::All(b, inner) = &exposed else {
                    return Err(KernelError::NotAForall(claimed.to_string()));
                };
                if &b.ty != ty {
                    return Err(KernelError::PropMismatch {
                        expected: claimed.to_string(),
                        found: format!("forall {}:{}, ...", x, ty),
                    });
                }
                ctx.push_var(x.clone(), ty.clone())?;
                let r = self.check(ctx, body, &inner.open(x));
                ctx.vars.pop();
                r
            }
            ProofTerm::PLam(h, prop, body) => {
                let exposed = expose(self.sig, claimed)
                    .ok_or_else(|| KernelError::NotAnImp(claimed.to_string()))?;
                let Term::Imp(ante, cons) = &exposed else {
                    return Err(KernelError::NotAnImp(claimed.to_string()));
                };
                check_prop(self.sig, ctx, prop)?;
                if !convertible(self.sig, prop, ante) {
                    return Err(KernelError::PropMismatch {
                        expected: ante.to_string(),
                        found: prop.to_string(),
                    });
                }
                ctx.push_hyp(h.clone(), prop.clone());
                let r = self.check(ctx, body, cons);
                ctx.hyps.pop();
                r
            }
            // A cut `(fun h:P => body) a`: the body is checked against the goal.
            ProofTerm::PApp(f, a) if matches!(**f, ProofTerm::PLam(..)) => {
                let ProofTerm::PLam(h, prop, body) = &**f else {
                    unreachable!()
                };
                check_prop(self.sig, ctx, prop)?;
                self.check(ctx, a, prop)?;
                ctx.push_hyp(h.clone(), prop.clone());
                let r = self.check(ctx, body, claimed);
                ctx.hyps.pop();
                r
            }
            ProofTerm::Aby(hole) => {
                for dep in &hole.deps {
                    if ctx.hyp(dep).is_none()
                        && self.sig.prop_of(dep).is_none()
                        && !self.sig.is_def(dep)
                    {
                        return Err(KernelError::UnknownDependency(dep.as_str().into()));
                    }
                }
                self.report.holes.push(HoleObligation {
                    hole: hole.clone(),
                    ctx: ctx.clone(),
                    goal: beta_eta(claimed),
                });
                Ok(())
            }
            _ => {
                let found = self.infer(ctx, d)?;
                if convertible(self.sig, &found, claimed) {
                    Ok(())
                } else {
                    Err(KernelError::PropMismatch {
                        expected: claimed.to_string(),
                        found: found.to_string(),
                    })
                }
            }
        }
    }

    fn infer(&mut self, ctx: &mut Context, d: &ProofTerm) -> KResult<Term> {
        match d {
            ProofTerm::Hyp(h) => ctx
                .hyp(h)
                .cloned()
                .ok_or_else(|| KernelError::UnknownHyp(h.clone())),
            ProofTerm::Known(n) => self
                .sig
                .prop_of(n)
                .ok_or_else(|| KernelError::UnknownTheorem(n.clone())),
            ProofTerm::TApp(f, t) => {
                let fp = self.infer(ctx, f)?;
                let exposed =
                    expose(self.sig, &fp).ok_or_else(|| KernelError::NotAForall(fp.to_string()))?;
                let Term::All(b, body) = &exposed else {
                    return Err(KernelError::NotAForall(fp.to_string()));
                };
                let found = typecheck(self.sig, ctx, t)?;
                if found != b.ty {
                    return Err(KernelError::IllTypedInstantiation {
                        term: t.to_string(),
                        expected: b.ty.clone(),
                        found,
                    });
                }
                Ok(beta_eta(&body.instantiate(t)))
            }
            ProofTerm::PApp(f, a) => {
                let fp = self.infer(ctx, f)?;
                let exposed =
                    expose(self.sig, &fp).ok_or_else(|| KernelError::NotAnImp(fp.to_string()))?;
                let Term::Imp(ante, cons) = &exposed else {
                    return Err(KernelError::NotAnImp(fp.to_string()));
                };
                self.check(ctx, a, ante)?;
                Ok((**cons).clone())
            }
            ProofTerm::TLam(x, ty, body) => {
                ctx.push_var(x.clone(), ty.clone())?;
                let r = self.infer(ctx, body);
                ctx.vars.pop();
                let p = r?;
                Ok(Term::All(
                    Binder::new(x.clone(), ty.clone()),
                    p.close(x).into(),
                ))
            }
            ProofTerm::PLam(h, prop, body) => {
                check_prop(self.sig, ctx, prop)?;
                ctx.push_hyp(h.clone(), prop.clone());
                let r = self.infer(ctx, body);
                ctx.hyps.pop();
                Ok(Term::imp(prop.clone(), r?))
            }
            ProofTerm::Aby(hole) => Err(KernelError::HoleWithoutGoal(hole.id.clone())),
        }
    }
}

impl fmt::Display for ProofTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn atom(p: &ProofTerm) -> bool {
            matches!(p, ProofTerm::Hyp(_) | ProofTerm::Known(_))
        }
        match self {
            ProofTerm::Hyp(h) => write!(f, "{}", h),
            ProofTerm::Known(n) => write!(f, "{}", n),
            ProofTerm::TApp(p, t) => {
                if atom(p) || matches!(**p, ProofTerm::TApp(..) | ProofTerm::PApp(..)) {
                    write!(f, "{} ({})", p, t)
                } else {
                    write!(f, "({}) ({})", p, t)
                }
            }
            ProofTerm::PApp(p, q) => {
                let lhs = if atom(p) || matches!(**p, ProofTerm::TApp(..) | ProofTerm::PApp(..)) {
                    p.to_string()
                } else {
                    format!("({})", p)
                };
                if atom(q) {
                    write!(f, "{} {}", lhs, q)
                } else {
                    write!(f, "{} ({})", lhs, q)
                }
            }
            ProofTerm::TLam(x, ty, p) => write!(f, "fun {}:{} => {}", x, ty, p),
            ProofTerm::PLam(h, prop, p) => write!(f, "fun ({}:{}) => {}", h, prop, p),
            ProofTerm::Aby(hole) => write!(f, "aby[{}] {}", hole.id, hole.deps.join(" ")),
        }
    }
}
