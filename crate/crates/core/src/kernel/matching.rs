use std::collections::HashMap;

use super::normalize::beta_eta;
use super::term::{Name, Term};
use super::types::Type;

/// A substitution for pattern metavariables, in metavariable order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Substitution {
    pub bindings: Vec<(Name, Term)>,
}

impl Substitution {
    pub fn get(&self, name: &str) -> Option<&Term> {
        self.bindings
            .iter()
            .find(|(n, _)| &**n == name)
            .map(|(_, t)| t)
    }

    /// Replaces metavariables (free variables of the pattern) by their bindings.
    pub fn apply(&self, t: &Term) -> Term {
        t.subst_free(&|x| self.get(x).cloned())
    }
}

/// First-order syntactic matching of `pattern` against `goal` on beta-eta normal forms.
///
/// Metavariables occur in `pattern` as free variables. A metavariable applied
/// to arguments never matches; such theorems need explicit instantiation.
pub fn match_conclusion(
    metavars: &[(Name, Type)],
    pattern: &Term,
    goal: &Term,
) -> Option<Substitution> {
    let pattern = beta_eta(pattern);
    let goal = beta_eta(goal);
    let mut m = Matcher {
        metas: metavars.iter().map(|(n, _)| n.clone()).collect(),
        found: HashMap::new(),
    };
    if !m.go(&pattern, &goal, 0) {
        return None;
    }
    let bindings = metavars
        .iter()
        .filter_map(|(n, _)| m.found.get(n).map(|t| (n.clone(), t.clone())))
        .collect();
    Some(Substitution { bindings })
}

struct Matcher {
    metas: Vec<Name>,
    found: HashMap<Name, Term>,
}

impl Matcher {
    fn is_meta(&self, t: &Term) -> bool {
        matches!(t, Term::Free(x) if self.metas.contains(x))
    }

    fn go(&mut self, p: &Term, g: &Term, depth: u32) -> bool {
        match p {
            Term::Free(x) if self.metas.contains(x) => {
                // The candidate may not capture variables bound inside the pattern.
                if g.mentions_bound_below(depth) {
                    return false;
                }
                let g = g.shift(-(depth as i64), 0);
                match self.found.get(x) {
                    Some(prev) => *prev == g,
                    None => {
                        self.found.insert(x.clone(), g);
                        true
                    }
                }
            }
            Term::App(f, a) => {
                if self.is_meta(p.strip_app().0) {
                    return false;
                }
                match g {
                    Term::App(gf, ga) => self.go(f, gf, depth) && self.go(a, ga, depth),
                    _ => false,
                }
            }
            Term::Imp(a, b) => match g {
                Term::Imp(ga, gb) => self.go(a, ga, depth) && self.go(b, gb, depth),
                _ => false,
            },
            Term::Lam(bp, body) => match g {
                Term::Lam(bg, gbody) => bp.ty == bg.ty && self.go(body, gbody, depth + 1),
                _ => false,
            },
            Term::All(bp, body) => match g {
                Term::All(bg, gbody) => bp.ty == bg.ty && self.go(body, gbody, depth + 1),
                _ => false,
            },
            Term::Const(_) | Term::Free(_) | Term::Bound(_) => p == g,
        }
    }
}
