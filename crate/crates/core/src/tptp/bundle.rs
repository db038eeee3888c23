use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::mangle::FormulaTag;
use crate::kernel::{beta_eta, names, Entry, Signature, Term, Type};
use crate::script::{Goal, Span};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Bushy,
    Chainy,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Bushy => "bushy",
            Mode::Chainy => "chainy",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bushy" => Ok(Mode::Bushy),
            "chainy" => Ok(Mode::Chainy),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormulaKind {
    Fact,
    Hyp,
    Def,
}

impl FormulaKind {
    pub fn tag(self) -> FormulaTag {
        match self {
            FormulaKind::Fact => FormulaTag::Fact,
            FormulaKind::Hyp => FormulaTag::Hyp,
            FormulaKind::Def => FormulaTag::Def,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Formula {
    pub name: String,
    pub kind: FormulaKind,
    pub term: Term,
}

/// Where a problem came from.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Origin {
    pub theorem: String,
    pub span: Option<Span>,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.span {
            Some(s) => write!(f, "{}@{}-{}", self.theorem, s.start, s.end),
            None => f.write_str(&self.theorem),
        }
    }
}

/// Axioms plus one conjecture over a closed vocabulary.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemBundle {
    pub id: String,
    pub mode: Mode,
    pub origin: Origin,
    /// Declared constants with their types, connectives excluded.
    pub symbols: Vec<(String, Type)>,
    pub axioms: Vec<Formula>,
    pub conjecture: Term,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("unknown dependency `{0}`")]
    UnknownDependency(String),
    #[error("unknown constant `{0}`")]
    UnknownConst(String),
}

impl ProblemBundle {
    pub fn axiom_names(&self) -> impl Iterator<Item = &str> {
        self.axioms.iter().map(|f| f.name.as_str())
    }

    pub fn symbol_type(&self, name: &str) -> Option<&Type> {
        self.symbols.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    /// Names of facts and hypotheses, i.e. what an `aby` call may cite.
    pub fn dependency_names(&self) -> Vec<&str> {
        self.axioms
            .iter()
            .filter(|f| f.kind != FormulaKind::Def)
            .map(|f| f.name.as_str())
            .collect()
    }
}

/// The constant standing for each context variable of `goal` in its
/// problem: the variable's own name, primed until fresh.
pub fn context_renaming(sig: &Signature, goal: &Goal) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (x, _) in &goal.ctx.vars {
        let mut fresh = x.to_string();
        while sig.lookup(&fresh).is_some() || out.iter().any(|(_, c)| *c == fresh) {
            fresh.push('\'');
        }
        out.push((x.to_string(), fresh));
    }
    out
}

/// Builds the problem for `goal` from the cited dependencies. Context
/// variables become constants of the same name (primed until fresh), cited
/// hypotheses and facts become axioms, and every non-connective definition
/// reachable from the formulas gets a definition axiom `c = definiens`.
pub fn build_bundle(
    sig: &Signature,
    goal: &Goal,
    deps: &[String],
    id: &str,
    mode: Mode,
    origin: Origin,
) -> Result<ProblemBundle, BundleError> {
    let mut renaming: HashMap<String, String> = HashMap::new();
    let mut var_types: HashMap<String, Type> = HashMap::new();
    for (x, c) in context_renaming(sig, goal) {
        var_types.insert(
            c.clone(),
            goal.ctx.var_type(&x).expect("context var").clone(),
        );
        renaming.insert(x, c);
    }
    let close =
        |t: &Term| beta_eta(&t.subst_free(&|x| renaming.get(x).map(|c| Term::cnst(c.as_str()))));

    let mut axioms = Vec::new();
    let mut seen = BTreeSet::new();
    for d in deps {
        if !seen.insert(d.clone()) {
            continue;
        }
        if let Some(h) = goal.ctx.hyp(d) {
            axioms.push(Formula {
                name: d.clone(),
                kind: FormulaKind::Hyp,
                term: close(h),
            });
        } else if let Some(p) = sig.prop_of(d) {
            axioms.push(Formula {
                name: d.clone(),
                kind: FormulaKind::Fact,
                term: beta_eta(&p),
            });
        } else if sig.is_def(d) {
            // A cited definition only forces its definition axiom.
        } else {
            return Err(BundleError::UnknownDependency(d.clone()));
        }
    }
    let conjecture = close(&goal.concl);

    // Vocabulary, closing over definitions.
    let mut symbols: Vec<(String, Type)> = Vec::new();
    let mut defs = Vec::new();
    let mut queue: Vec<Term> = axioms.iter().map(|f| f.term.clone()).collect();
    queue.push(conjecture.clone());
    for d in deps {
        if sig.is_def(d) && goal.ctx.hyp(d).is_none() {
            queue.push(Term::cnst(d.as_str()));
        }
    }
    let mut i = 0;
    while i < queue.len() {
        for c in queue[i].consts() {
            if names::is_connective(&c) || symbols.iter().any(|(n, _)| **n == *c) {
                continue;
            }
            let ty = match var_types.get(&*c) {
                Some(t) => t.clone(),
                None => sig
                    .const_type(&c)
                    .ok_or_else(|| BundleError::UnknownConst(c.to_string()))?,
            };
            symbols.push((c.to_string(), ty.clone()));
            if let Some(body) = sig.definiens(&c) {
                let body = beta_eta(&body);
                queue.push(body.clone());
                defs.push(Formula {
                    name: c.to_string(),
                    kind: FormulaKind::Def,
                    term: Term::apps(
                        Term::cnst(names::poly_name(names::PolyKind::Eq, &ty)),
                        [Term::cnst(c.as_ref()), body],
                    ),
                });
            }
        }
        i += 1;
    }
    axioms.extend(defs);
    Ok(ProblemBundle {
        id: id.to_string(),
        mode,
        origin,
        symbols,
        axioms,
        conjecture,
    })
}

/// The definition axioms a literal rendering adds for the connectives used
/// by `b`. Equality stays primitive.
pub fn connective_defs(sig: &Signature, b: &ProblemBundle) -> Vec<(String, Type, Term)> {
    let mut out: Vec<(String, Type, Term)> = Vec::new();
    let mut queue: Vec<Term> = b.axioms.iter().map(|f| f.term.clone()).collect();
    queue.push(b.conjecture.clone());
    let mut i = 0;
    while i < queue.len() {
        for c in queue[i].consts() {
            let is_eq = matches!(names::parse_poly_name(&c), Some((names::PolyKind::Eq, _)));
            if !names::is_connective(&c) || is_eq || out.iter().any(|(n, _, _)| **n == *c) {
                continue;
            }
            if let Some(e) = sig.lookup(&c) {
                if let Entry::Def { ty, body, .. } = e.as_ref() {
                    let body = beta_eta(body);
                    queue.push(body.clone());
                    out.push((c.to_string(), ty.clone(), body));
                }
            }
        }
        i += 1;
    }
    out
}
