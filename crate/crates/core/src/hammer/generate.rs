use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::plan::maximal_solved;
use super::HammerError;
use crate::basis::classical_frontier;
use crate::kernel::Entry;
use crate::script::{Development, Goal, Site, Span, TheoremTrace};
use crate::tptp::{build_bundle, Mode, Origin, ProblemBundle};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "prover")]
pub enum Status {
    #[default]
    Unsolved,
    Solved(String),
    Failed,
}

impl Status {
    pub fn is_solved(&self) -> bool {
        matches!(self, Status::Solved(_))
    }
}

/// A subproof that an `aby` call could replace.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub id: String,
    pub theorem: String,
    pub seq: usize,
    /// Tactic start to the end of the tactic closing its goal.
    pub span: Span,
    /// The source text of `span` when generated.
    pub text: String,
    pub bundle: ProblemBundle,
    pub aby_deps: Vec<String>,
    pub status: Status,
}

#[derive(Clone, Debug, Default)]
pub struct Generated {
    pub candidates: Vec<Candidate>,
    /// Sites not turned into problems: tactics of theorems whose proofs
    /// failed to elaborate, and existing `aby` calls.
    pub skipped: usize,
    /// Sites in theorems at or before the classical frontier.
    pub gated: usize,
}

pub fn problem_id(mode: Mode, theorem: &str, seq: usize) -> String {
    format!("{}_{}_{}", mode, theorem, seq)
}

fn after_frontier(dev: &Development) -> Result<impl Fn(&TheoremTrace) -> bool + '_, HammerError> {
    let frontier = classical_frontier(&dev.sig)?;
    Ok(move |t: &TheoremTrace| dev.sig.position(&t.name).is_some_and(|p| p > frontier))
}

fn origin(t: &TheoremTrace, s: &Site) -> Origin {
    Origin {
        theorem: t.name.clone(),
        span: Some(s.replace_span()),
    }
}

/// One premise-selected problem per tactic occurrence after the classical
/// frontier, citing what the human subproof used.
pub fn gen_bushy(dev: &Development) -> Result<Generated, HammerError> {
    let eligible = after_frontier(dev)?;
    let per_theorem: Vec<Result<Generated, HammerError>> = dev
        .theorems
        .par_iter()
        .map(|t| {
            let mut g = Generated::default();
            let sites: Vec<&Site> = t.sites.iter().filter(|s| !s.is_bullet()).collect();
            if !eligible(t) {
                g.gated = sites.len();
                return Ok(g);
            }
            if t.proof.is_none() {
                g.skipped = sites.len();
                return Ok(g);
            }
            let sig = dev.sig_before(&t.name);
            for s in sites {
                if s.keyword == "aby" {
                    g.skipped += 1;
                    continue;
                }
                let deps = s.deps.aby_names();
                let id = problem_id(Mode::Bushy, &t.name, s.seq);
                let bundle = build_bundle(&sig, &s.goal, &deps, &id, Mode::Bushy, origin(t, s))?;
                let span = s.replace_span();
                g.candidates.push(Candidate {
                    id,
                    theorem: t.name.clone(),
                    seq: s.seq,
                    span,
                    text: dev.text[span.start..span.end].to_string(),
                    bundle,
                    aby_deps: deps,
                    status: Status::Unsolved,
                });
            }
            check_forest(&t.name, &g.candidates)?;
            Ok(g)
        })
        .collect();
    let mut out = Generated::default();
    for g in per_theorem {
        let g = g?;
        out.candidates.extend(g.candidates);
        out.skipped += g.skipped;
        out.gated += g.gated;
    }
    Ok(out)
}

/// Names of every fact stated before `name`.
fn facts_before(dev: &Development, name: &str) -> Vec<String> {
    dev.sig_before(name)
        .entries()
        .filter(|e| matches!(e, Entry::Axiom { .. } | Entry::Thm { .. }))
        .map(|e| e.name().to_string())
        .collect()
}

/// One problem per tactic occurrence after the frontier whose axioms are the
/// whole preceding development plus the local hypotheses.
pub fn gen_chainy(dev: &Development) -> Result<Vec<ProblemBundle>, HammerError> {
    let eligible = after_frontier(dev)?;
    let per_theorem: Vec<Result<Vec<ProblemBundle>, HammerError>> = dev
        .theorems
        .par_iter()
        .filter(|t| eligible(t))
        .map(|t| {
            let sig = dev.sig_before(&t.name);
            let facts = facts_before(dev, &t.name);
            let mut out = Vec::new();
            for s in t.sites.iter().filter(|s| !s.is_bullet()) {
                let mut deps = facts.clone();
                deps.extend(
                    s.goal
                        .ctx
                        .visible_hyps()
                        .into_iter()
                        .map(|(h, _)| h.to_string()),
                );
                let id = problem_id(Mode::Chainy, &t.name, s.seq);
                out.push(build_bundle(
                    &sig,
                    &s.goal,
                    &deps,
                    &id,
                    Mode::Chainy,
                    origin(t, s),
                )?);
            }
            Ok(out)
        })
        .collect();
    let mut out = Vec::new();
    for b in per_theorem {
        out.extend(b?);
    }
    Ok(out)
}

/// Whether `t` lies after the classical frontier of `dev`.
pub fn after_classical_frontier(dev: &Development, t: &TheoremTrace) -> Result<bool, HammerError> {
    Ok(after_frontier(dev)?(t))
}

/// The chainy problem for one goal inside theorem `t`: the whole preceding
/// development plus the goal's visible hypotheses.
pub fn chainy_at(
    dev: &Development,
    t: &TheoremTrace,
    goal: &Goal,
    id: &str,
    span: Option<Span>,
) -> Result<ProblemBundle, HammerError> {
    let sig = dev.sig_before(&t.name);
    let mut deps = facts_before(dev, &t.name);
    deps.extend(
        goal.ctx
            .visible_hyps()
            .into_iter()
            .map(|(h, _)| h.to_string()),
    );
    let origin = Origin {
        theorem: t.name.clone(),
        span,
    };
    Ok(build_bundle(&sig, goal, &deps, id, Mode::Chainy, origin)?)
}

/// Spans of one theorem must be pairwise nested or disjoint.
pub fn check_forest(theorem: &str, cands: &[Candidate]) -> Result<(), HammerError> {
    let spans: Vec<Span> = cands.iter().map(|c| c.span).collect();
    maximal_solved(&spans, &vec![false; spans.len()])
        .map(|_| ())
        .map_err(|(a, b)| HammerError::OverlapWithoutNesting {
            theorem: theorem.to_string(),
            first: cands[a].id.clone(),
            second: cands[b].id.clone(),
        })
}
