//! From Dedukti-format prover output to a kernel proof skeleton.

mod dk;
mod translate;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

pub use dk::{parse_dedukti, DkDecl, DkTerm};
pub use translate::{ProofRef, Translator};

use crate::kernel::{
    beta_eta, check_proof, names, AbyHole, Context, KernelError, ProofTerm, Signature, Term,
};
use crate::script::Goal;
use crate::tptp::{context_renaming, parse_formula_name, unmangle, ProblemBundle};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReconstructError {
    #[error("{line}:{col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("outside the supported fragment: {0}")]
    Unsupported(String),
    #[error("the proof has no negated conjecture")]
    NoNegatedConjecture,
    #[error("no step proves False")]
    NoFalsumStep,
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "role", content = "name")]
pub enum Role {
    /// A bundle axiom, by original name.
    Axiom(String),
    NegatedConjecture,
    /// A problem symbol, by original name.
    Symbol(String),
    /// A derived step.
    Step,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Recovery {
    pub roles: BTreeMap<String, Role>,
    /// Proof-typed declarations matching nothing in the bundle.
    pub unmatched: Vec<String>,
}

impl Recovery {
    pub fn axioms(&self) -> Vec<&str> {
        self.roles
            .values()
            .filter_map(|r| match r {
                Role::Axiom(n) => Some(n.as_str()),
                _ => None,
            })
            .collect()
    }

    pub fn negated_conjecture(&self) -> Option<&str> {
        self.roles
            .iter()
            .find(|(_, r)| **r == Role::NegatedConjecture)
            .map(|(n, _)| n.as_str())
    }
}

fn bundle_symbol(b: &ProblemBundle) -> impl Fn(&str) -> Option<String> + '_ {
    move |n: &str| {
        let orig = unmangle(n).ok()?;
        b.symbol_type(&orig).map(|_| orig)
    }
}

/// Matches declarations against the problem: axioms by formula name, the
/// negated conjecture by its statement, symbols by unmangled name.
pub fn recover_names(decls: &[DkDecl], b: &ProblemBundle) -> Recovery {
    let deps: Vec<&str> = b.dependency_names();
    let known = |n: &str| deps.contains(&n);
    let symbols = bundle_symbol(b);
    let mut out = Recovery::default();
    for d in decls {
        let role = match d {
            DkDecl::Defined { .. } => Some(Role::Step),
            DkDecl::Declared { name, .. } => match d.proved() {
                Some(p) => {
                    let by_name = parse_formula_name(name, &known)
                        .filter(|(_, n)| known(n))
                        .map(|(_, n)| Role::Axiom(n));
                    by_name.or_else(|| {
                        let mut tr = Translator::new(&symbols);
                        let t = tr.term(p).ok()?;
                        let (head, args) = t.strip_app();
                        let negates = matches!(head, Term::Const(c) if &**c == names::NOT)
                            && args.len() == 1
                            && beta_eta(args[0]) == b.conjecture;
                        negates.then_some(Role::NegatedConjecture)
                    })
                }
                None => symbols(name).map(Role::Symbol),
            },
        };
        match role {
            Some(r) => {
                out.roles.insert(d.name().to_string(), r);
            }
            None if d.proved().is_some() => out.unmatched.push(d.name().to_string()),
            None => {}
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum Evidence {
    Proof(ProofTerm),
    Hole(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub name: String,
    pub prop: Term,
    pub evidence: Evidence,
}

/// A refutation proof outline: assume the negated goal, derive steps, and
/// conclude False.
#[derive(Clone, Debug, PartialEq)]
pub struct Skeleton {
    pub conjecture: Term,
    /// Hypothesis naming the negated goal.
    pub negation: String,
    pub steps: Vec<Step>,
    /// The step proving False.
    pub final_step: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Audit {
    pub steps: usize,
    pub holes: usize,
    pub checked: usize,
}

impl Audit {
    pub fn is_complete(&self) -> bool {
        self.holes == 0
    }
}

pub const CLAUSIFICATION_HOLE: &str = "unjustified clausification";

/// Builds the skeleton for `goal` (posed in `sig`) from the prover's
/// declarations. Each definition becomes a step; its body is translated
/// when it lies in the supported fragment and checks, else it is a hole.
pub fn scaffold(
    sig: &Signature,
    goal: &Goal,
    b: &ProblemBundle,
    decls: &[DkDecl],
    rec: &Recovery,
) -> Result<Skeleton, ReconstructError> {
    rec.negated_conjecture()
        .ok_or(ReconstructError::NoNegatedConjecture)?;
    let symbols = bundle_symbol(b);
    let mut tr = Translator::new(&symbols);
    for (x, c) in context_renaming(sig, goal) {
        tr.to_free.insert(c, x);
    }
    let mut ctx: Context = goal.ctx.clone();
    let mut taken: Vec<String> = ctx.vars.iter().map(|(x, _)| x.to_string()).collect();
    taken.extend(ctx.hyps.iter().map(|(h, _)| h.to_string()));
    let negation = fresh_name("Hneg", &taken);
    taken.push(negation.clone());
    tr.taken = taken.clone();

    for (name, role) in &rec.roles {
        let r = match role {
            Role::Axiom(n) if goal.ctx.hyp(n).is_some() => ProofRef::Hyp(n.clone()),
            Role::Axiom(n) => ProofRef::Known(n.clone()),
            Role::NegatedConjecture => ProofRef::Hyp(negation.clone()),
            _ => continue,
        };
        tr.proofs.insert(name.clone(), r);
    }
    ctx.push_hyp(
        negation.as_str().into(),
        Term::app(Term::cnst(names::NOT), goal.concl.clone()),
    );

    let falsum = Term::cnst(names::FALSE);
    let mut steps = Vec::new();
    let mut final_step = None;
    for d in decls {
        let DkDecl::Defined { name, body, .. } = d else {
            continue;
        };
        let Some(p) = d.proved() else {
            continue;
        };
        let prop = beta_eta(&tr.term(p)?);
        let step_name = fresh_name(&hyp_name(name), &taken);
        taken.push(step_name.clone());
        tr.taken.push(step_name.clone());
        let evidence = match tr.proof(body) {
            Ok(pt) => match check_proof(sig, &ctx, &pt, &prop) {
                Ok(r) if r.is_complete() => Evidence::Proof(pt),
                Ok(_) => Evidence::Hole("evidence has holes".into()),
                Err(e) => Evidence::Hole(format!("evidence does not check: {}", e)),
            },
            Err(_) => Evidence::Hole(CLAUSIFICATION_HOLE.into()),
        };
        tr.proofs
            .insert(name.clone(), ProofRef::Hyp(step_name.clone()));
        ctx.push_hyp(step_name.as_str().into(), prop.clone());
        let is_false = prop == falsum;
        steps.push(Step {
            name: step_name.clone(),
            prop,
            evidence,
        });
        if is_false {
            final_step = Some(step_name);
            break;
        }
    }
    Ok(Skeleton {
        conjecture: goal.concl.clone(),
        negation,
        steps,
        final_step: final_step.ok_or(ReconstructError::NoFalsumStep)?,
    })
}

fn hyp_name(dk: &str) -> String {
    let s: String = dk
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    if s.starts_with(|c: char| c.is_ascii_alphabetic()) {
        s
    } else {
        format!("s{}", s)
    }
}

fn fresh_name(base: &str, taken: &[String]) -> String {
    let mut n = base.to_string();
    while taken.contains(&n) {
        n.push('\'');
    }
    n
}

impl Skeleton {
    pub fn audit(&self) -> Audit {
        let holes = self
            .steps
            .iter()
            .filter(|s| matches!(s.evidence, Evidence::Hole(_)))
            .count();
        Audit {
            steps: self.steps.len(),
            holes,
            checked: self.steps.len() - holes,
        }
    }

    /// `dneg C (fun Hneg : ~C => cuts)`, with holes as `aby` obligations.
    pub fn proof_term(&self) -> ProofTerm {
        let mut body = ProofTerm::hyp(self.final_step.as_str());
        for s in self.steps.iter().rev() {
            let ev = match &s.evidence {
                Evidence::Proof(p) => p.clone(),
                Evidence::Hole(_) => ProofTerm::Aby(AbyHole {
                    id: format!("{}:{}", s.name, "clausify"),
                    deps: Vec::new(),
                }),
            };
            body = ProofTerm::plam(s.name.as_str(), s.prop.clone(), body).papp(ev);
        }
        let neg = Term::app(Term::cnst(names::NOT), self.conjecture.clone());
        ProofTerm::known(names::DNEG)
            .tapp(self.conjecture.clone())
            .papp(ProofTerm::plam(self.negation.as_str(), neg, body))
    }

    /// Script-like rendering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "apply dneg.").unwrap();
        writeln!(out, "assume {}: ~({}).", self.negation, self.conjecture).unwrap();
        for s in &self.steps {
            writeln!(out, "claim {}: {}.", s.name, s.prop).unwrap();
            match &s.evidence {
                Evidence::Proof(p) => writeln!(out, "{{ exact {}. }}", p).unwrap(),
                Evidence::Hole(why) => writeln!(out, "{{ aby. }} (* {} *)", why).unwrap(),
            }
        }
        writeln!(out, "exact {}.", self.final_step).unwrap();
        out
    }
}

/// Replaces the `aby` hole `hole_id` of `proof` by the skeleton's proof.
pub fn splice(proof: &ProofTerm, hole_id: &str, sk: &Skeleton) -> ProofTerm {
    proof.fill_hole(hole_id, &sk.proof_term())
}

/// The dependency map of a recovery, for reports.
pub fn role_table(rec: &Recovery) -> HashMap<String, String> {
    rec.roles
        .iter()
        .map(|(k, r)| {
            let v = match r {
                Role::Axiom(n) | Role::Symbol(n) => n.clone(),
                Role::NegatedConjecture => "negated conjecture".into(),
                Role::Step => "step".into(),
            };
            (k.clone(), v)
        })
        .collect()
}
