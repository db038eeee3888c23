//! Elaboration of surface expressions into kernel terms and proof terms.

use std::sync::Arc;

use super::ast::{Expr, ExprKind, SBinder, SType, Span};
use super::error::{ScriptError, ScriptErrorKind};
use crate::kernel::{
    beta_eta, convertible, expose, match_conclusion, names, typecheck, Binder, Context,
    KernelError, Name, ProofTerm, Signature, Substitution, Term, Type,
};

pub fn stype(t: &SType) -> Type {
    match t {
        SType::Set => Type::Set,
        SType::Prop => Type::Prop,
        SType::Arrow(a, b) => Type::arrow(stype(a), stype(b)),
    }
}

pub fn binder_type(b: &SBinder) -> Type {
    b.ty.as_ref().map(stype).unwrap_or(Type::Set)
}

/// Shared state for elaborating one piece of script text.
pub struct Elab<'a> {
    pub sig: &'a Signature,
    pub text: &'a str,
}

/// Placeholder proof for a subgoal created while elaborating an `apply`.
pub struct NewGoal {
    pub ctx: Context,
    pub concl: Term,
}

pub enum ArgMode {
    /// All arguments explicit; the result must be the goal itself.
    Exact,
    /// Trailing universals and antecedents may be left for matching and subgoals.
    Apply,
}

enum Step {
    Term(Term),
    Proof(Expr, Term),
}

/// A head proof applied to explicit arguments, before final matching.
pub struct Spine {
    head: ProofTerm,
    steps: Vec<Step>,
    /// The remaining proposition, possibly mentioning metavariables.
    pub rest: Term,
    pub metas: Vec<(Name, Type)>,
    head_name: String,
    span: Span,
}

fn meta_name(n: usize) -> Name {
    format!("?m{}", n).into()
}

impl<'a> Elab<'a> {
    pub fn err(&self, kind: ScriptErrorKind, span: Span) -> ScriptError {
        ScriptError::new(kind, span, self.text)
    }

    fn kerr(&self, e: KernelError, span: Span) -> ScriptError {
        self.err(ScriptErrorKind::Kernel(e), span)
    }

    // ---- terms ----

    /// Elaborates a term and checks it has the expected type, if given.
    pub fn term(
        &self,
        ctx: &Context,
        e: &Expr,
        expected: Option<&Type>,
    ) -> Result<Term, ScriptError> {
        let mut lctx = ctx.clone();
        let mut locals = Vec::new();
        let t = self.term_in(&mut lctx, &mut locals, e)?;
        let ty = typecheck(self.sig, ctx, &t).map_err(|k| self.kerr(k, e.span))?;
        if let Some(want) = expected {
            if &ty != want {
                return Err(self.kerr(
                    KernelError::TypeMismatch {
                        term: e.to_string(),
                        expected: want.clone(),
                        found: ty,
                    },
                    e.span,
                ));
            }
        }
        Ok(t)
    }

    pub fn prop(&self, ctx: &Context, e: &Expr) -> Result<Term, ScriptError> {
        self.term(ctx, e, Some(&Type::Prop))
    }

    fn fresh_local(lctx: &Context, base: &str) -> Name {
        if lctx.var_type(base).is_none() {
            return base.into();
        }
        (1..)
            .map(|i| format!("{}~{}", base, i))
            .find(|n| lctx.var_type(n).is_none())
            .unwrap()
            .into()
    }

    fn bind(
        &self,
        lctx: &mut Context,
        locals: &mut Vec<(String, Name)>,
        binders: &[SBinder],
        body: &Expr,
        wrap: &dyn Fn(&Term, &Type) -> Term,
    ) -> Result<Term, ScriptError> {
        let Some((b, rest)) = binders.split_first() else {
            return self.term_in(lctx, locals, body);
        };
        let ty = binder_type(b);
        let internal = Self::fresh_local(lctx, &b.name);
        lctx.vars.push((internal.clone(), ty.clone()));
        locals.push((b.name.clone(), internal.clone()));
        let inner = self.bind(lctx, locals, rest, body, wrap);
        locals.pop();
        lctx.vars.pop();
        let inner = inner?;
        let closed = inner.close(&internal);
        Ok(rename_outer_binder(wrap(&closed, &ty), &b.name))
    }

    fn term_in(
        &self,
        lctx: &mut Context,
        locals: &mut Vec<(String, Name)>,
        e: &Expr,
    ) -> Result<Term, ScriptError> {
        let bin = |me: &Self,
                   lctx: &mut Context,
                   locals: &mut Vec<(String, Name)>,
                   c: &str,
                   a: &Expr,
                   b: &Expr| {
            let a = me.term_in(lctx, locals, a)?;
            let b = me.term_in(lctx, locals, b)?;
            Ok(Term::apps(Term::cnst(c), [a, b]))
        };
        match &e.kind {
            ExprKind::Ident(x) => {
                if let Some((_, internal)) = locals.iter().rev().find(|(s, _)| s == x) {
                    return Ok(Term::Free(internal.clone()));
                }
                if lctx.var_type(x).is_some() {
                    return Ok(Term::free(x.as_str()));
                }
                if self.sig.const_type(x).is_some() {
                    return Ok(Term::cnst(x.as_str()));
                }
                let kind = if lctx.hyp(x).is_some() || self.sig.prop_of(x).is_some() {
                    ScriptErrorKind::Tactic(format!("`{}` is a proof, not a term", x))
                } else {
                    ScriptErrorKind::UnknownName(x.clone())
                };
                Err(self.err(kind, e.span))
            }
            ExprKind::Hole => Err(self.err(ScriptErrorKind::CannotInfer("_".into()), e.span)),
            ExprKind::App(f, a) => {
                let f = self.term_in(lctx, locals, f)?;
                let a = self.term_in(lctx, locals, a)?;
                Ok(Term::app(f, a))
            }
            ExprKind::Fun(bs, body) => self.bind(lctx, locals, bs, body, &|b: &Term, ty: &Type| {
                Term::Lam(Binder::new("x", ty.clone()), Arc::new(b.clone()))
            }),
            ExprKind::Forall(bs, body) => {
                self.bind(lctx, locals, bs, body, &|b: &Term, ty: &Type| {
                    Term::All(Binder::new("x", ty.clone()), Arc::new(b.clone()))
                })
            }
            ExprKind::Exists(bs, body) => {
                let sig = self.sig;
                let t = self.bind(lctx, locals, bs, body, &|b: &Term, ty: &Type| {
                    let lam = Term::Lam(Binder::new("x", ty.clone()), Arc::new(b.clone()));
                    Term::app(Term::cnst(names::poly_name(names::PolyKind::Ex, ty)), lam)
                })?;
                // Surface the missing connective as an unknown name rather than a kernel error.
                if sig.lookup(names::EX).is_none() {
                    return Err(self.err(ScriptErrorKind::UnknownName(names::EX.into()), e.span));
                }
                Ok(t)
            }
            ExprKind::Imp(a, b) => {
                let a = self.term_in(lctx, locals, a)?;
                let b = self.term_in(lctx, locals, b)?;
                Ok(Term::imp(a, b))
            }
            ExprKind::Iff(a, b) => bin(self, lctx, locals, names::IFF, a, b),
            ExprKind::And(a, b) => bin(self, lctx, locals, names::AND, a, b),
            ExprKind::Or(a, b) => bin(self, lctx, locals, names::OR, a, b),
            ExprKind::Not(a) => {
                let a = self.term_in(lctx, locals, a)?;
                Ok(Term::app(Term::cnst(names::NOT), a))
            }
            ExprKind::Eq(a, b) => {
                let lhs = self.term_in(lctx, locals, a)?;
                let rhs = self.term_in(lctx, locals, b)?;
                let ty = typecheck(self.sig, lctx, &lhs).map_err(|k| self.kerr(k, a.span))?;
                let name = names::poly_name(names::PolyKind::Eq, &ty);
                if self.sig.lookup(&name).is_none() {
                    return Err(self.err(ScriptErrorKind::UnknownName(name), e.span));
                }
                Ok(Term::apps(Term::cnst(name), [lhs, rhs]))
            }
        }
    }

    // ---- proofs ----

    /// Resolves the head of a proof expression to a proof and its proposition.
    pub fn proof_head(
        &self,
        ctx: &Context,
        name: &str,
        span: Span,
    ) -> Result<(ProofTerm, Term), ScriptError> {
        if let Some(p) = ctx.hyp(name) {
            return Ok((ProofTerm::hyp(name), p.clone()));
        }
        if let Some(p) = self.sig.prop_of(name) {
            return Ok((ProofTerm::known(name), p));
        }
        let kind = if ctx.var_type(name).is_some() || self.sig.const_type(name).is_some() {
            ScriptErrorKind::Tactic(format!("`{}` is a term, not a proof", name))
        } else {
            ScriptErrorKind::UnknownName(name.into())
        };
        Err(self.err(kind, span))
    }

    /// Checks a proof expression against `goal`.
    pub fn check_proof_expr(
        &self,
        ctx: &Context,
        e: &Expr,
        goal: &Term,
    ) -> Result<ProofTerm, ScriptError> {
        if let ExprKind::Fun(bs, body) = &e.kind {
            return self.check_fun(ctx, bs, body, goal);
        }
        let mut no_goals =
            |_: NewGoal| -> ProofTerm { unreachable!("exact never creates subgoals") };
        self.apply_expr(ctx, e, goal, ArgMode::Exact, &mut no_goals)
    }

    fn check_fun(
        &self,
        ctx: &Context,
        bs: &[SBinder],
        body: &Expr,
        goal: &Term,
    ) -> Result<ProofTerm, ScriptError> {
        let Some((b, rest)) = bs.split_first() else {
            return self.check_proof_expr(ctx, body, goal);
        };
        let exposed = expose(self.sig, goal).ok_or_else(|| {
            self.err(
                ScriptErrorKind::Tactic(format!(
                    "`fun {}` against a goal that is neither a universal nor an implication: {}",
                    b.name, goal
                )),
                b.span,
            )
        })?;
        let mut inner_ctx = ctx.clone();
        match &exposed {
            Term::All(bd, inner) => {
                if let Some(t) = &b.ty {
                    if stype(t) != bd.ty {
                        return Err(self.kerr(
                            KernelError::TypeMismatch {
                                term: b.name.clone(),
                                expected: bd.ty.clone(),
                                found: stype(t),
                            },
                            b.span,
                        ));
                    }
                }
                inner_ctx
                    .push_var(b.name.as_str().into(), bd.ty.clone())
                    .map_err(|k| self.kerr(k, b.span))?;
                let body_goal = beta_eta(&inner.open(&b.name));
                let p = self.check_fun(&inner_ctx, rest, body, &body_goal)?;
                Ok(ProofTerm::tlam(b.name.as_str(), bd.ty.clone(), p))
            }
            Term::Imp(a, c) => {
                if b.ty.is_some() {
                    return Err(self.err(
                        ScriptErrorKind::Tactic(format!(
                            "hypothesis `{}` cannot carry a type annotation",
                            b.name
                        )),
                        b.span,
                    ));
                }
                inner_ctx.push_hyp(b.name.as_str().into(), (**a).clone());
                let p = self.check_fun(&inner_ctx, rest, body, c)?;
                Ok(ProofTerm::plam(b.name.as_str(), (**a).clone(), p))
            }
            _ => unreachable!(),
        }
    }

    /// Elaborates `head arg1 ... argn` against `goal`, creating subgoals in
    /// `Apply` mode for unresolved antecedents.
    pub fn apply_expr(
        &self,
        ctx: &Context,
        e: &Expr,
        goal: &Term,
        mode: ArgMode,
        new_goal: &mut dyn FnMut(NewGoal) -> ProofTerm,
    ) -> Result<ProofTerm, ScriptError> {
        let spine = self.spine(ctx, e)?;
        match mode {
            ArgMode::Exact => {
                let subst = if spine.metas.is_empty() {
                    if !convertible(self.sig, &spine.rest, goal) {
                        return Err(self.kerr(
                            KernelError::PropMismatch {
                                expected: goal.to_string(),
                                found: beta_eta(&spine.rest).to_string(),
                            },
                            e.span,
                        ));
                    }
                    Substitution::default()
                } else {
                    match match_conclusion(&spine.metas, &spine.rest, goal) {
                        Some(s) => s,
                        None => {
                            return Err(self.err(
                                ScriptErrorKind::ApplyNoMatch(spine.head_name.clone()),
                                e.span,
                            ))
                        }
                    }
                };
                self.check_all_bound(&spine.metas, &subst, &spine)?;
                self.finish(ctx, spine, &subst, &[], new_goal)
            }
            ArgMode::Apply => {
                let (subst, positions) = self.match_positions(&spine, goal)?;
                self.finish(ctx, spine, &subst, &positions, new_goal)
            }
        }
    }

    /// Elaborates the head and explicit arguments of an application.
    pub fn spine(&self, ctx: &Context, e: &Expr) -> Result<Spine, ScriptError> {
        let (head, args) = e.spine();
        let ExprKind::Ident(hname) = &head.kind else {
            return Err(self.err(
                ScriptErrorKind::Tactic("the head of a proof application must be a name".into()),
                head.span,
            ));
        };
        let (head_pt, mut cur) = self.proof_head(ctx, hname, head.span)?;
        let mut steps = Vec::new();
        let mut metas = Vec::new();
        for arg in args {
            let exposed = match &cur {
                Term::All(..) | Term::Imp(..) => cur.clone(),
                _ => expose(self.sig, &cur).ok_or_else(|| {
                    self.err(
                        ScriptErrorKind::Tactic(format!("too many arguments for `{}`", hname)),
                        arg.span,
                    )
                })?,
            };
            match exposed {
                Term::All(b, body) => {
                    if let ExprKind::Hole = arg.kind {
                        let m = meta_name(metas.len());
                        metas.push((m.clone(), b.ty.clone()));
                        cur = body.open(&m);
                        steps.push(Step::Term(Term::Free(m)));
                    } else {
                        let t = self.term(ctx, arg, Some(&b.ty))?;
                        cur = beta_eta(&body.instantiate(&t));
                        steps.push(Step::Term(t));
                    }
                }
                Term::Imp(a, c) => {
                    steps.push(Step::Proof(arg.clone(), (*a).clone()));
                    cur = (*c).clone();
                }
                _ => unreachable!(),
            }
        }
        Ok(Spine {
            head: head_pt,
            steps,
            rest: cur,
            metas,
            head_name: hname.clone(),
            span: e.span,
        })
    }

    fn check_all_bound(
        &self,
        metas: &[(Name, Type)],
        subst: &Substitution,
        spine: &Spine,
    ) -> Result<(), ScriptError> {
        if metas.iter().all(|(m, _)| subst.get(m).is_some()) {
            Ok(())
        } else {
            Err(self.err(
                ScriptErrorKind::CannotInfer(spine.head_name.clone()),
                spine.span,
            ))
        }
    }

    /// Finds how many trailing binders of `spine.rest` to strip so that the
    /// conclusion matches the goal: deepest syntactic strip first, then
    /// deeper strips obtained by unfolding definitions.
    fn match_positions(
        &self,
        spine: &Spine,
        goal: &Term,
    ) -> Result<(Substitution, Vec<Position>), ScriptError> {
        let mut positions: Vec<Position> = Vec::new();
        let mut props = vec![spine.rest.clone()];
        let mut first_untested = 0usize;
        let mut counter = spine.metas.len();
        let mut underdetermined = false;
        // The goal itself, then its successive head unfoldings.
        let mut goal_variants = vec![beta_eta(goal)];
        while goal_variants.len() < 8 {
            match crate::kernel::unfold_head(self.sig, goal_variants.last().unwrap()) {
                Some(u) => goal_variants.push(u),
                None => break,
            }
        }
        for _round in 0..16 {
            loop {
                match props.last().unwrap().clone() {
                    Term::All(b, body) => {
                        let m = meta_name(counter);
                        counter += 1;
                        positions.push(Position::Meta(m.clone(), b.ty.clone()));
                        props.push(body.open(&m));
                    }
                    Term::Imp(a, c) => {
                        positions.push(Position::Ante((*a).clone()));
                        props.push((*c).clone());
                    }
                    _ => break,
                }
            }
            for k in (first_untested..props.len()).rev() {
                let mut metas = spine.metas.clone();
                for p in &positions[..k] {
                    if let Position::Meta(m, ty) = p {
                        metas.push((m.clone(), ty.clone()));
                    }
                }
                for gv in &goal_variants {
                    let subst = if metas.is_empty() {
                        convertible(self.sig, &props[k], gv).then(Substitution::default)
                    } else {
                        match_conclusion(&metas, &props[k], gv)
                    };
                    if let Some(s) = subst {
                        if metas.iter().all(|(m, _)| s.get(m).is_some()) {
                            return Ok((s, positions[..k].to_vec()));
                        }
                        underdetermined = true;
                    }
                }
            }
            first_untested = props.len();
            match expose(self.sig, props.last().unwrap()) {
                Some(x) => *props.last_mut().unwrap() = x,
                None => break,
            }
        }
        let kind = if underdetermined {
            ScriptErrorKind::CannotInfer(spine.head_name.clone())
        } else {
            ScriptErrorKind::ApplyNoMatch(spine.head_name.clone())
        };
        Err(self.err(kind, spine.span))
    }

    pub(crate) fn finish(
        &self,
        ctx: &Context,
        spine: Spine,
        subst: &Substitution,
        positions: &[Position],
        new_goal: &mut dyn FnMut(NewGoal) -> ProofTerm,
    ) -> Result<ProofTerm, ScriptError> {
        let mut pt = spine.head;
        for step in spine.steps {
            match step {
                Step::Term(t) => pt = pt.tapp(subst.apply(&t)),
                Step::Proof(arg, ante) => {
                    let ante = beta_eta(&subst.apply(&ante));
                    let p = self.check_proof_expr(ctx, &arg, &ante)?;
                    pt = pt.papp(p);
                }
            }
        }
        for pos in positions {
            match pos {
                Position::Meta(m, _) => pt = pt.tapp(subst.get(m).cloned().unwrap()),
                Position::Ante(a) => {
                    let concl = beta_eta(&subst.apply(a));
                    let g = new_goal(NewGoal {
                        ctx: ctx.clone(),
                        concl,
                    });
                    pt = pt.papp(g);
                }
            }
        }
        Ok(pt)
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Position {
    Meta(Name, Type),
    Ante(Term),
}

/// Sets the display name of the outermost binder.
fn rename_outer_binder(t: Term, name: &str) -> Term {
    match t {
        Term::Lam(b, body) => Term::Lam(Binder::new(name, b.ty), body),
        Term::All(b, body) => Term::All(Binder::new(name, b.ty), body),
        Term::App(f, a) => match a.as_ref() {
            Term::Lam(b, body) => Term::App(
                f,
                Arc::new(Term::Lam(Binder::new(name, b.ty.clone()), body.clone())),
            ),
            _ => Term::App(f, a),
        },
        other => other,
    }
}
