//! The tactic engine: runs a proof script against a goal stack, assembles the
//! proof term, and records per-tactic goals and dependencies.

use std::fmt;

use serde::Serialize;

use super::ast::{Expr, Item, ItemKind, Span, Tactic, TacticKind};
use super::elab::{stype, ArgMode, Elab, NewGoal, Position};
use super::error::{ScriptError, ScriptErrorKind};
use crate::kernel::{
    beta_eta, check_proof, expose, match_conclusion, names, typecheck, AbyHole, CheckReport,
    Context, KernelError, Name, ProofTerm, Signature, Term,
};

/// A proof state.
#[derive(Clone, Debug, PartialEq)]
pub struct Goal {
    pub ctx: Context,
    pub concl: Term,
}

impl Goal {
    pub fn view(&self) -> GoalView {
        GoalView {
            vars: self
                .ctx
                .vars
                .iter()
                .map(|(n, t)| (n.to_string(), t.to_string()))
                .collect(),
            hyps: self
                .ctx
                .visible_hyps()
                .iter()
                .map(|(n, p)| (n.to_string(), p.to_string()))
                .collect(),
            conclusion: self.concl.to_string(),
        }
    }
}

/// A goal rendered for display.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoalView {
    pub vars: Vec<(String, String)>,
    pub hyps: Vec<(String, String)>,
    pub conclusion: String,
}

impl fmt::Display for GoalView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, t) in &self.vars {
            writeln!(f, "{} : {}", n, t)?;
        }
        for (n, p) in &self.hyps {
            writeln!(f, "{} : {}", n, p)?;
        }
        writeln!(f, "----")?;
        write!(f, "{}", self.conclusion)
    }
}

/// Names a subproof depends on.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SiteDeps {
    /// Theorems, axioms and definitions named by proofs, in first-use order.
    pub facts: Vec<String>,
    /// Hypotheses of the site's context, latest first.
    pub hyps: Vec<String>,
    /// Constants appearing in instantiations and annotations.
    pub consts: Vec<String>,
}

impl SiteDeps {
    /// The dependency list of an `aby` call replacing this subproof.
    pub fn aby_names(&self) -> Vec<String> {
        self.facts.iter().chain(self.hyps.iter()).cloned().collect()
    }
}

/// One tactic occurrence with the goal it acted on.
#[derive(Clone, Debug)]
pub struct Site {
    /// Position among the theorem's tactics in source order.
    pub seq: usize,
    pub span: Span,
    pub keyword: &'static str,
    pub goal: Goal,
    /// End offset of the tactic that completed this site's goal.
    pub subproof_end: usize,
    pub deps: SiteDeps,
}

impl Site {
    pub fn is_bullet(&self) -> bool {
        self.keyword == "bullet"
    }

    /// The text range an `aby` call would replace.
    pub fn replace_span(&self) -> Span {
        Span::new(self.span.start, self.subproof_end)
    }
}

/// An `aby` call met during elaboration.
#[derive(Clone, Debug)]
pub struct AbySite {
    pub id: String,
    pub deps: Vec<String>,
    pub span: Span,
    pub goal: Goal,
}

/// Everything recorded while elaborating one theorem.
#[derive(Clone, Debug)]
pub struct TheoremTrace {
    pub name: String,
    pub item_index: usize,
    pub span: Span,
    pub prop: Term,
    /// `None` when elaboration failed.
    pub proof: Option<ProofTerm>,
    pub report: Option<CheckReport>,
    pub sites: Vec<Site>,
    pub abys: Vec<AbySite>,
    /// Goal-display boundaries: the focused goal from each offset on.
    pub snapshots: Vec<(usize, Option<Goal>)>,
}

impl TheoremTrace {
    /// The goal live at the nearest boundary at or before `offset`.
    pub fn goal_at(&self, offset: usize) -> Option<&Goal> {
        if offset < self.span.start || offset >= self.span.end {
            return None;
        }
        self.snapshots
            .iter()
            .take_while(|(o, _)| *o <= offset)
            .last()
            .and_then(|(_, g)| g.as_ref())
    }
}

struct GoalRec {
    goal: Goal,
    parent: Option<usize>,
    open: usize,
    proof: Option<ProofTerm>,
    closed_at: Option<usize>,
    /// Index of the site whose tactic solved this goal.
    solved_by: Option<usize>,
}

struct SiteTmp {
    span: Span,
    keyword: &'static str,
    goal_id: usize,
}

struct Engine<'a> {
    sig: &'a Signature,
    text: &'a str,
    thm: &'a str,
    goals: Vec<GoalRec>,
    sites: Vec<SiteTmp>,
    abys: Vec<AbySite>,
    snapshots: Vec<(usize, Option<usize>)>,
}

const PLACEHOLDER: &str = "?g";

fn placeholder(id: usize) -> ProofTerm {
    ProofTerm::Aby(AbyHole {
        id: format!("{}{}", PLACEHOLDER, id),
        deps: Vec::new(),
    })
}

fn placeholder_id(p: &ProofTerm) -> Option<usize> {
    match p {
        ProofTerm::Aby(h) => h.id.strip_prefix(PLACEHOLDER)?.parse().ok(),
        _ => None,
    }
}

/// Elaborates a theorem's proof script against `sig` (which must not yet
/// contain the theorem). Returns the trace and the first error, if any.
pub fn elaborate_theorem(
    sig: &Signature,
    text: &str,
    item_index: usize,
    item: &Item,
) -> (TheoremTrace, Option<ScriptError>) {
    let ItemKind::TheoremDecl {
        name,
        prop,
        proof,
        qed,
    } = &item.kind
    else {
        panic!("elaborate_theorem on a non-theorem item");
    };
    let el = Elab { sig, text };
    let mut trace = TheoremTrace {
        name: name.clone(),
        item_index,
        span: item.span,
        prop: Term::cnst(names::TRUE),
        proof: None,
        report: None,
        sites: Vec::new(),
        abys: Vec::new(),
        snapshots: Vec::new(),
    };
    let prop_t = match el.prop(&Context::default(), prop) {
        Ok(p) => beta_eta(&p),
        Err(e) => return (trace, Some(e)),
    };
    trace.prop = prop_t.clone();
    let mut eng = Engine {
        sig,
        text,
        thm: name,
        goals: Vec::new(),
        sites: Vec::new(),
        abys: Vec::new(),
        snapshots: Vec::new(),
    };
    let root = eng.new_goal(None, Context::default(), prop_t.clone());
    let body_start = text[..proof.first().map(|t| t.span.start).unwrap_or(qed.start)]
        .rfind('.')
        .map(|i| i + 1)
        .unwrap_or(item.span.start)
        .max(prop.span.end);
    eng.snapshots.push((body_start, Some(root)));
    let mut stack = vec![root];
    let mut result = eng.run_block(proof, &mut stack);
    if result.is_ok() && !stack.is_empty() {
        result = Err(ScriptError::new(
            ScriptErrorKind::OpenGoalsAtQed(stack.len()),
            *qed,
            text,
        ));
    }
    eng.snapshots.push((qed.start, None));
    let assembled = eng.assemble_all();
    trace.sites = eng.finish_sites();
    trace.abys = std::mem::take(&mut eng.abys);
    trace.snapshots = eng
        .snapshots
        .iter()
        .map(|(o, g)| (*o, g.map(|id| eng.goals[id].goal.clone())))
        .collect();
    if let Err(e) = result {
        return (trace, Some(e));
    }
    let pt = assembled[root].clone().expect("closed root has a proof");
    match check_proof(sig, &Context::default(), &pt, &prop_t) {
        Ok(report) => {
            trace.proof = Some(pt);
            trace.report = Some(report);
            (trace, None)
        }
        Err(k) => (
            trace,
            Some(ScriptError::new(
                ScriptErrorKind::Kernel(k),
                item.span,
                text,
            )),
        ),
    }
}

impl<'a> Engine<'a> {
    fn el(&self) -> Elab<'a> {
        Elab {
            sig: self.sig,
            text: self.text,
        }
    }

    fn err(&self, kind: ScriptErrorKind, span: Span) -> ScriptError {
        ScriptError::new(kind, span, self.text)
    }

    fn new_goal(&mut self, parent: Option<usize>, ctx: Context, concl: Term) -> usize {
        self.goals.push(GoalRec {
            goal: Goal { ctx, concl },
            parent,
            open: 0,
            proof: None,
            closed_at: None,
            solved_by: None,
        });
        self.goals.len() - 1
    }

    fn solve(&mut self, g: usize, proof: ProofTerm, children: usize, site: usize, end: usize) {
        let rec = &mut self.goals[g];
        rec.proof = Some(proof);
        rec.open = children;
        rec.solved_by = Some(site);
        if children == 0 {
            self.close(g, end);
        }
    }

    fn close(&mut self, g: usize, end: usize) {
        let mut cur = Some(g);
        while let Some(id) = cur {
            self.goals[id].closed_at = Some(end);
            cur = match self.goals[id].parent {
                Some(p) => {
                    self.goals[p].open -= 1;
                    (self.goals[p].open == 0).then_some(p)
                }
                None => None,
            };
        }
    }

    fn run_block(&mut self, tactics: &[Tactic], stack: &mut Vec<usize>) -> Result<(), ScriptError> {
        for t in tactics {
            self.snapshots.push((t.span.start, stack.last().copied()));
            let Some(g) = stack.pop() else {
                return Err(self.err(ScriptErrorKind::NoGoals, t.span));
            };
            let site = self.sites.len();
            self.sites.push(SiteTmp {
                span: t.span,
                keyword: t.keyword(),
                goal_id: g,
            });
            self.run_tactic(t, g, site, stack)?;
            self.snapshots.push((t.span.end, stack.last().copied()));
        }
        Ok(())
    }

    fn run_sub_block(
        &mut self,
        block: &[Tactic],
        g: usize,
        open_at: usize,
        close: Span,
    ) -> Result<(), ScriptError> {
        self.snapshots.push((open_at, Some(g)));
        let mut inner = vec![g];
        self.run_block(block, &mut inner)?;
        if !inner.is_empty() {
            return Err(self.err(
                ScriptErrorKind::UnbalancedBlock(format!(
                    "block ends with {} open goal(s)",
                    inner.len()
                )),
                close,
            ));
        }
        Ok(())
    }

    fn run_tactic(
        &mut self,
        t: &Tactic,
        g: usize,
        site: usize,
        stack: &mut Vec<usize>,
    ) -> Result<(), ScriptError> {
        let goal = self.goals[g].goal.clone();
        let end = t.span.end;
        let el = self.el();
        match &t.kind {
            TacticKind::Bullet { marker, block } => {
                let open_at = t.span.start + 1;
                let close = if *marker == '{' {
                    Span::new(t.span.end - 1, t.span.end)
                } else {
                    Span::new(t.span.end, t.span.end)
                };
                self.run_sub_block(block, g, open_at, close)
            }
            TacticKind::Let(binders) => {
                let mut ctx = goal.ctx.clone();
                let mut concl = goal.concl.clone();
                let mut intros = Vec::new();
                for b in binders {
                    let exposed = expose(self.sig, &concl);
                    let Some(Term::All(bd, body)) = exposed else {
                        return Err(self.err(
                            ScriptErrorKind::Kernel(KernelError::NotAForall(concl.to_string())),
                            b.span,
                        ));
                    };
                    if let Some(ty) = &b.ty {
                        if stype(ty) != bd.ty {
                            return Err(self.err(
                                ScriptErrorKind::Kernel(KernelError::TypeMismatch {
                                    term: b.name.clone(),
                                    expected: bd.ty.clone(),
                                    found: stype(ty),
                                }),
                                b.span,
                            ));
                        }
                    }
                    ctx.push_var(b.name.as_str().into(), bd.ty.clone())
                        .map_err(|k| self.err(ScriptErrorKind::Kernel(k), b.span))?;
                    concl = beta_eta(&body.open(&b.name));
                    intros.push((b.name.clone(), bd.ty.clone()));
                }
                let child = self.new_goal(Some(g), ctx, concl);
                let mut pt = placeholder(child);
                for (x, ty) in intros.into_iter().rev() {
                    pt = ProofTerm::tlam(x.as_str(), ty, pt);
                }
                self.solve(g, pt, 1, site, end);
                stack.push(child);
                Ok(())
            }
            TacticKind::Assume(binders) => {
                let mut ctx = goal.ctx.clone();
                let mut concl = goal.concl.clone();
                let mut intros = Vec::new();
                for b in binders {
                    let exposed = expose(self.sig, &concl);
                    let Some(Term::Imp(a, c)) = exposed else {
                        return Err(self.err(
                            ScriptErrorKind::Kernel(KernelError::NotAnImp(concl.to_string())),
                            b.span,
                        ));
                    };
                    ctx.push_hyp(b.name.as_str().into(), (*a).clone());
                    intros.push((b.name.clone(), (*a).clone()));
                    concl = (*c).clone();
                }
                let child = self.new_goal(Some(g), ctx, concl);
                let mut pt = placeholder(child);
                for (h, p) in intros.into_iter().rev() {
                    pt = ProofTerm::plam(h.as_str(), p, pt);
                }
                self.solve(g, pt, 1, site, end);
                stack.push(child);
                Ok(())
            }
            TacticKind::Exact(e) => {
                let pt = el.check_proof_expr(&goal.ctx, e, &goal.concl)?;
                self.solve(g, pt, 0, site, end);
                Ok(())
            }
            TacticKind::Apply(e) => {
                let mut created = Vec::new();
                let pt = {
                    let goals = &mut self.goals;
                    let mut mk = |ng: NewGoal| {
                        goals.push(GoalRec {
                            goal: Goal {
                                ctx: ng.ctx,
                                concl: ng.concl,
                            },
                            parent: Some(g),
                            open: 0,
                            proof: None,
                            closed_at: None,
                            solved_by: None,
                        });
                        created.push(goals.len() - 1);
                        placeholder(goals.len() - 1)
                    };
                    el.apply_expr(&goal.ctx, e, &goal.concl, ArgMode::Apply, &mut mk)?
                };
                self.solve(g, pt, created.len(), site, end);
                stack.extend(created.into_iter().rev());
                Ok(())
            }
            TacticKind::RewriteAt {
                eq,
                occurrence,
                reversed,
            } => {
                let (pt, new_concl) = self.rewrite(&goal, eq, *occurrence, *reversed, t.span)?;
                let child = self.new_goal(Some(g), goal.ctx.clone(), new_concl);
                let pt = pt(placeholder(child));
                self.solve(g, pt, 1, site, end);
                stack.push(child);
                Ok(())
            }
            TacticKind::Claim { name, prop, block } => {
                let p = beta_eta(&el.prop(&goal.ctx, prop)?);
                let c = self.new_goal(Some(g), goal.ctx.clone(), p.clone());
                let mut kctx = goal.ctx.clone();
                kctx.push_hyp(name.as_str().into(), p.clone());
                let k = self.new_goal(Some(g), kctx, goal.concl.clone());
                let pt = ProofTerm::plam(name.as_str(), p, placeholder(k)).papp(placeholder(c));
                self.solve(g, pt, 2, site, end);
                match block {
                    Some(b) => {
                        let open_at = self.text[prop.span.end..t.span.end]
                            .find('{')
                            .map(|i| prop.span.end + i + 1)
                            .unwrap_or(prop.span.end);
                        let close = Span::new(t.span.end - 1, t.span.end);
                        self.run_sub_block(b, c, open_at, close)?;
                        stack.push(k);
                    }
                    None => {
                        stack.push(k);
                        stack.push(c);
                    }
                }
                Ok(())
            }
            TacticKind::Aby(deps) => {
                for d in deps {
                    let known = goal.ctx.hyp(d).is_some()
                        || self.sig.prop_of(d).is_some()
                        || self.sig.is_def(d);
                    if !known {
                        return Err(self.err(ScriptErrorKind::UnknownName(d.clone()), t.span));
                    }
                }
                let id = format!("{}#{}", self.thm, self.abys.len() + 1);
                self.abys.push(AbySite {
                    id: id.clone(),
                    deps: deps.clone(),
                    span: t.span,
                    goal: goal.clone(),
                });
                let pt = ProofTerm::Aby(AbyHole {
                    id,
                    deps: deps.clone(),
                });
                self.solve(g, pt, 0, site, end);
                Ok(())
            }
        }
    }

    /// Returns a builder taking the proof of the rewritten goal, and the rewritten goal.
    #[allow(clippy::type_complexity)]
    fn rewrite(
        &self,
        goal: &Goal,
        eq: &Expr,
        occurrence: Option<u32>,
        reversed: bool,
        span: Span,
    ) -> Result<(Box<dyn FnOnce(ProofTerm) -> ProofTerm>, Term), ScriptError> {
        let el = self.el();
        let ctx = &goal.ctx;
        let spine = el.spine(ctx, eq)?;
        let mut metas = spine.metas.clone();
        let mut positions = Vec::new();
        let mut rest = spine.rest.clone();
        while let Term::All(b, body) = &rest {
            let m: Name = format!("?r{}", positions.len()).into();
            positions.push(Position::Meta(m.clone(), b.ty.clone()));
            metas.push((m.clone(), b.ty.clone()));
            rest = body.open(&m);
        }
        let rest = beta_eta(&rest);
        let not_eq = || self.err(ScriptErrorKind::NotAnEquation(eq.to_string()), eq.span);
        let (head, args) = rest.strip_app();
        let ty = match head {
            Term::Const(c) if args.len() == 2 => match names::parse_poly_name(c) {
                Some((names::PolyKind::Eq, ty)) => ty,
                _ => return Err(not_eq()),
            },
            _ => return Err(not_eq()),
        };
        let (from, to) = if reversed {
            (args[1].clone(), args[0].clone())
        } else {
            (args[0].clone(), args[1].clone())
        };
        let concl = beta_eta(&goal.concl);
        let subst = if metas.is_empty() {
            Default::default()
        } else {
            let mut found = None;
            concl.visit(&mut |sub| {
                if found.is_none() && sub.is_closed() {
                    if let Some(s) = match_conclusion(&metas, &from, sub) {
                        found = Some(s);
                    }
                }
            });
            let s = found.ok_or_else(|| {
                self.err(
                    ScriptErrorKind::Tactic(format!(
                        "rewrite: no instance of `{}` in the goal",
                        from
                    )),
                    span,
                )
            })?;
            if metas.iter().any(|(m, _)| s.get(m).is_none()) {
                return Err(self.err(ScriptErrorKind::CannotInfer(eq.to_string()), eq.span));
            }
            s
        };
        let from = beta_eta(&subst.apply(&from));
        let to = beta_eta(&subst.apply(&to));
        let z = "?z";
        let (abstracted, count) = abstract_occurrences(&concl, &from, occurrence, z);
        if count == 0 {
            return Err(self.err(
                ScriptErrorKind::Tactic(format!("rewrite: `{}` does not occur in the goal", from)),
                span,
            ));
        }
        if let Some(n) = occurrence {
            if n as usize > count {
                return Err(self.err(ScriptErrorKind::OccurrenceOutOfRange(n, count), span));
            }
        }
        let new_concl = beta_eta(&abstracted.subst_free(&|x| (x == z).then(|| to.clone())));
        let mut never = |_: NewGoal| -> ProofTerm { unreachable!("rewrite creates no subgoals") };
        let e = el.finish(ctx, spine, &subst, &positions, &mut never)?;
        let sig = self.sig;
        // The motive must be well typed; check it eagerly for a clear error.
        let motive_body = abstracted.clone();
        let check_ty = typecheck(sig, ctx, &from)
            .map_err(|k| self.err(ScriptErrorKind::Kernel(k), eq.span))?;
        debug_assert_eq!(check_ty, ty);
        let builder: Box<dyn FnOnce(ProofTerm) -> ProofTerm> = if reversed {
            let q = Term::lambda(z, ty, motive_body);
            Box::new(move |child| e.tapp(q).papp(child))
        } else {
            let q = Term::lambda(z, ty, Term::imp(motive_body, concl.clone()));
            Box::new(move |child| {
                e.tapp(q)
                    .papp(ProofTerm::plam("h", concl, ProofTerm::hyp("h")))
                    .papp(child)
            })
        };
        Ok((builder, new_concl))
    }

    /// Replaces every placeholder by the proof of its goal, bottom-up.
    fn assemble_all(&self) -> Vec<Option<ProofTerm>> {
        let mut out: Vec<Option<ProofTerm>> = vec![None; self.goals.len()];
        for id in (0..self.goals.len()).rev() {
            if let Some(p) = &self.goals[id].proof {
                out[id] = fill_placeholders(p, &out);
            }
        }
        out
    }

    fn is_descendant(&self, mut g: usize, anc: usize) -> bool {
        loop {
            if g == anc {
                return true;
            }
            match self.goals[g].parent {
                Some(p) => g = p,
                None => return false,
            }
        }
    }

    fn finish_sites(&self) -> Vec<Site> {
        // Direct uses of every site's own proof fragment.
        let local: Vec<LocalUses> = self
            .sites
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let rec = &self.goals[s.goal_id];
                if rec.solved_by == Some(i) {
                    local_uses(rec.proof.as_ref().unwrap())
                } else {
                    LocalUses::default()
                }
            })
            .collect();
        self.sites
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let rec = &self.goals[s.goal_id];
                let ctx = &rec.goal.ctx;
                let mut facts = Vec::new();
                let mut hyp_set = Vec::new();
                let mut consts = Vec::new();
                for (site, u) in self.sites.iter().zip(&local).skip(i) {
                    if !self.is_descendant(site.goal_id, s.goal_id) {
                        break;
                    }
                    for n in &u.names {
                        if ctx.hyp(n).is_some() {
                            push_unique(&mut hyp_set, n);
                        } else if self.sig.lookup(n).is_some() {
                            push_unique(&mut facts, n);
                        }
                    }
                    for c in &u.consts {
                        push_unique(&mut consts, c);
                    }
                }
                // Hypotheses latest first, as in hand-written `aby` calls.
                let hyps: Vec<String> = ctx
                    .visible_hyps()
                    .iter()
                    .rev()
                    .map(|(n, _)| n.to_string())
                    .filter(|n| hyp_set.contains(n))
                    .collect();
                Site {
                    seq: i,
                    span: s.span,
                    keyword: s.keyword,
                    goal: rec.goal.clone(),
                    subproof_end: rec.closed_at.unwrap_or(s.span.end),
                    deps: SiteDeps {
                        facts,
                        hyps,
                        consts,
                    },
                }
            })
            .collect()
    }
}

fn push_unique(v: &mut Vec<String>, s: &str) {
    if !v.iter().any(|x| x == s) {
        v.push(s.to_string());
    }
}

#[derive(Default)]
struct LocalUses {
    /// Hypothesis, theorem and axiom names in order of appearance.
    names: Vec<String>,
    consts: Vec<String>,
}

fn local_uses(p: &ProofTerm) -> LocalUses {
    fn go(p: &ProofTerm, bound: &mut Vec<Name>, out: &mut LocalUses) {
        match p {
            ProofTerm::Hyp(h) => {
                if !bound.contains(h) {
                    push_unique(&mut out.names, h);
                }
            }
            ProofTerm::Known(n) => push_unique(&mut out.names, n),
            ProofTerm::Aby(h) => {
                if placeholder_id(p).is_none() {
                    for d in &h.deps {
                        if !bound.iter().any(|b| &**b == d.as_str()) {
                            push_unique(&mut out.names, d);
                        }
                    }
                }
            }
            ProofTerm::TApp(q, t) => {
                go(q, bound, out);
                for c in t.consts() {
                    push_unique(&mut out.consts, &c);
                }
            }
            ProofTerm::PApp(q, r) => {
                go(q, bound, out);
                go(r, bound, out);
            }
            ProofTerm::TLam(_, _, q) => go(q, bound, out),
            ProofTerm::PLam(h, prop, q) => {
                for c in prop.consts() {
                    push_unique(&mut out.consts, &c);
                }
                bound.push(h.clone());
                go(q, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = LocalUses::default();
    go(p, &mut Vec::new(), &mut out);
    out
}

fn fill_placeholders(p: &ProofTerm, done: &[Option<ProofTerm>]) -> Option<ProofTerm> {
    Some(match p {
        ProofTerm::Aby(_) => match placeholder_id(p) {
            Some(id) => done.get(id)?.clone()?,
            None => p.clone(),
        },
        ProofTerm::Hyp(_) | ProofTerm::Known(_) => p.clone(),
        ProofTerm::TApp(q, t) => ProofTerm::TApp(Box::new(fill_placeholders(q, done)?), t.clone()),
        ProofTerm::PApp(q, r) => ProofTerm::PApp(
            Box::new(fill_placeholders(q, done)?),
            Box::new(fill_placeholders(r, done)?),
        ),
        ProofTerm::TLam(x, ty, q) => {
            ProofTerm::TLam(x.clone(), ty.clone(), Box::new(fill_placeholders(q, done)?))
        }
        ProofTerm::PLam(h, prop, q) => ProofTerm::PLam(
            h.clone(),
            prop.clone(),
            Box::new(fill_placeholders(q, done)?),
        ),
    })
}

/// Replaces occurrences of `pat` in `t` (pre-order, left to right) by the
/// free variable `z`: only the `n`-th when given, else all. Returns the new
/// term and the number of occurrences found.
pub fn abstract_occurrences(t: &Term, pat: &Term, n: Option<u32>, z: &str) -> (Term, usize) {
    fn go(t: &Term, pat: &Term, n: Option<u32>, z: &str, count: &mut usize) -> Term {
        if t == pat {
            *count += 1;
            let hit = match n {
                Some(k) => *count == k as usize,
                None => true,
            };
            return if hit { Term::free(z) } else { t.clone() };
        }
        match t {
            Term::App(f, a) => {
                let f = go(f, pat, n, z, count);
                let a = go(a, pat, n, z, count);
                Term::app(f, a)
            }
            Term::Imp(a, b) => {
                let a = go(a, pat, n, z, count);
                let b = go(b, pat, n, z, count);
                Term::imp(a, b)
            }
            Term::Lam(b, body) => {
                Term::Lam(b.clone(), std::sync::Arc::new(go(body, pat, n, z, count)))
            }
            Term::All(b, body) => {
                Term::All(b.clone(), std::sync::Arc::new(go(body, pat, n, z, count)))
            }
            _ => t.clone(),
        }
    }
    let mut count = 0;
    let out = go(t, pat, n, z, &mut count);
    (out, count)
}
