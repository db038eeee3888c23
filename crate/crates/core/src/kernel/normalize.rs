use std::collections::HashSet;
use std::sync::Arc;

use super::error::{KResult, KernelError};
use super::signature::Signature;
use super::term::Term;

/// Beta-normal, eta-contracted form.
pub fn beta_eta(t: &Term) -> Term {
    nf(t, &|_| None)
}

/// Beta-eta normal form with every constant in `unfold` replaced by its definiens.
pub fn normalize(sig: &Signature, t: &Term, unfold: &HashSet<String>) -> KResult<Term> {
    for name in unfold {
        if !sig.is_def(name) {
            return Err(KernelError::NotADef(name.as_str().into()));
        }
    }
    Ok(nf(t, &|c| {
        if unfold.contains(c) {
            sig.definiens(c)
        } else {
            None
        }
    }))
}

fn nf(t: &Term, delta: &dyn Fn(&str) -> Option<Term>) -> Term {
    match t {
        Term::Const(c) => match delta(c) {
            Some(body) => nf(&body, delta),
            None => t.clone(),
        },
        Term::Free(_) | Term::Bound(_) => t.clone(),
        Term::App(f, a) => {
            let f = nf(f, delta);
            let a = nf(a, delta);
            apply_nf(f, a, delta)
        }
        Term::Lam(b, body) => {
            let body = nf(body, delta);
            // eta: λx. f x  ~>  f   when x not free in f
            if let Term::App(f, a) = &body {
                if **a == Term::Bound(0) && !f.mentions_bound_below(1) {
                    return f.shift(-1, 0);
                }
            }
            Term::Lam(b.clone(), Arc::new(body))
        }
        Term::Imp(a, b) => Term::imp(nf(a, delta), nf(b, delta)),
        Term::All(b, body) => Term::All(b.clone(), Arc::new(nf(body, delta))),
    }
}

/// Applies normal `f` to normal `a`, reducing a created redex.
fn apply_nf(f: Term, a: Term, delta: &dyn Fn(&str) -> Option<Term>) -> Term {
    match f {
        Term::Lam(_, body) => nf(&body.instantiate(&a), delta),
        f => Term::app(f, a),
    }
}

/// Replaces the head constant of `t` by its definiens, if it is a definition,
/// and renormalizes.
pub fn unfold_head(sig: &Signature, t: &Term) -> Option<Term> {
    let (head, args) = t.strip_app();
    let Term::Const(c) = head else { return None };
    let body = sig.definiens(c)?;
    let t = Term::apps(body, args.into_iter().cloned());
    Some(beta_eta(&t))
}

/// Unfolds head definitions until the proposition is an implication or a
/// universal quantifier. Returns `None` if it never becomes one.
pub fn expose(sig: &Signature, t: &Term) -> Option<Term> {
    let mut cur = beta_eta(t);
    loop {
        if matches!(cur, Term::Imp(..) | Term::All(..)) {
            return Some(cur);
        }
        cur = unfold_head(sig, &cur)?;
    }
}

/// Definitional equality: beta-eta always, delta lazily when heads differ.
pub fn convertible(sig: &Signature, a: &Term, b: &Term) -> bool {
    conv_nf(sig, &beta_eta(a), &beta_eta(b))
}

fn conv_nf(sig: &Signature, a: &Term, b: &Term) -> bool {
    if a == b {
        return true;
    }
    match (a, b) {
        (Term::Imp(a1, a2), Term::Imp(b1, b2)) if conv_nf(sig, a1, b1) && conv_nf(sig, a2, b2) => {
            return true
        }
        (Term::All(x, a1), Term::All(y, b1)) | (Term::Lam(x, a1), Term::Lam(y, b1))
            if x.ty == y.ty && conv_nf(sig, a1, b1) =>
        {
            return true
        }
        _ => {}
    }
    let (ha, args_a) = a.strip_app();
    let (hb, args_b) = b.strip_app();
    if ha == hb
        && !args_a.is_empty()
        && args_a.len() == args_b.len()
        && args_a.iter().zip(&args_b).all(|(x, y)| conv_nf(sig, x, y))
    {
        return true;
    }
    let height = |h: &Term| match h {
        Term::Const(c) => sig.def_height(c),
        _ => None,
    };
    match (height(ha), height(hb)) {
        (None, None) => false,
        (Some(x), Some(y)) if x == y => match (unfold_head(sig, a), unfold_head(sig, b)) {
            (Some(a2), Some(b2)) => conv_nf(sig, &a2, &b2),
            _ => false,
        },
        (Some(x), Some(y)) if x > y => unfold_head(sig, a).is_some_and(|a2| conv_nf(sig, &a2, b)),
        (Some(_), Some(_)) | (None, Some(_)) => {
            unfold_head(sig, b).is_some_and(|b2| conv_nf(sig, a, &b2))
        }
        (Some(_), None) => unfold_head(sig, a).is_some_and(|a2| conv_nf(sig, &a2, b)),
    }
}
