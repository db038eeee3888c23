//! Problem generation, replacement planning, `aby` rewriting and reporting.

mod generate;
mod plan;
mod report;
mod rewrite;
mod verify;

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

pub use generate::{
    after_classical_frontier, chainy_at, check_forest, gen_bushy, gen_chainy, problem_id,
    Candidate, Generated, Status,
};
pub use plan::{maximal_solved, select_maximal, Overrides, Plan};
pub use report::{percent, report, CoverageReport, ProofStats, ProverLine, ReportMode, TextStats};
pub use rewrite::{aby_text, rewrite_with_aby, Rewritten};
pub use verify::{aby_bundles, verify_aby, AbyVerdict};

use crate::basis::BasisError;
use crate::driver::{DriverError, RunResult};
use crate::kernel::Signature;
use crate::script::{elaborate, Development};
use crate::tptp::{build_bundle, BundleError, Mode, Origin};

#[derive(Debug, Error)]
pub enum HammerError {
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Driver(#[from] DriverError),
    #[error("in {theorem}: spans of `{first}` and `{second}` overlap without nesting")]
    OverlapWithoutNesting {
        theorem: String,
        first: String,
        second: String,
    },
    #[error("text under `{0}` changed since planning")]
    SpanDrift(String),
    #[error("the script does not elaborate: {0}")]
    Elaboration(String),
    #[error("rewritten script disagrees with the plan: {0}")]
    Unsound(String),
}

/// Marks candidates solved when some result proves their problem, failed
/// when results exist but none proves it.
pub fn assign_statuses(cands: &mut [Candidate], results: &[RunResult]) {
    let mut by_id: HashMap<&str, Vec<&RunResult>> = HashMap::new();
    for r in results {
        by_id.entry(r.problem_id.as_str()).or_default().push(r);
    }
    for c in cands {
        c.status = match by_id.get(c.id.as_str()) {
            None => Status::Unsolved,
            Some(rs) => match rs.iter().find(|r| r.szs.is_theorem()) {
                Some(r) => Status::Solved(r.prover.clone()),
                None => Status::Failed,
            },
        };
    }
}

#[derive(Debug)]
pub struct Minimized {
    pub candidates: Vec<Candidate>,
    pub plan: Plan,
    pub rewritten: Rewritten,
    /// The rewritten script, elaborated.
    pub dev: Development,
    pub text: TextStats,
}

/// Elaborates `source`, generates bushy candidates, marks them from
/// `results`, replaces the maximal solved spans by `aby` calls and checks
/// that the result elaborates with exactly the planned holes.
pub fn minimize(
    base: &Signature,
    source: &str,
    results: &[RunResult],
    overrides: &Overrides,
) -> Result<Minimized, HammerError> {
    let dev = elaborate(base, source);
    if let Some(e) = dev.errors.first() {
        return Err(HammerError::Elaboration(e.to_string()));
    }
    let mut candidates = gen_bushy(&dev)?.candidates;
    assign_statuses(&mut candidates, results);
    let plan = select_maximal(&candidates, overrides)?;
    let rewritten = rewrite_with_aby(source, &candidates, &plan)?;
    let new_dev = elaborate(base, &rewritten.text);
    check_rewrite(&dev, &new_dev, &candidates, &rewritten)?;
    Ok(Minimized {
        text: TextStats::measure(source, &rewritten.text),
        candidates,
        plan,
        rewritten,
        dev: new_dev,
    })
}

/// The rewritten development must elaborate cleanly and each placed `aby`
/// call must pose the planned problem: same conjecture, same axiom names.
pub fn check_rewrite(
    old: &Development,
    new: &Development,
    cands: &[Candidate],
    rewritten: &Rewritten,
) -> Result<(), HammerError> {
    if let Some(e) = new.errors.first() {
        return Err(HammerError::Unsound(e.to_string()));
    }
    let expected = old.hole_count() + rewritten.placed.len();
    if new.hole_count() != expected {
        return Err(HammerError::Unsound(format!(
            "{} aby calls, expected {}",
            new.hole_count(),
            expected
        )));
    }
    for (id, span) in &rewritten.placed {
        let c = cands
            .iter()
            .find(|c| &c.id == id)
            .expect("placed candidate");
        let t = new
            .theorem(&c.theorem)
            .ok_or_else(|| HammerError::Unsound(format!("theorem {} vanished", c.theorem)))?;
        let site = t
            .abys
            .iter()
            .find(|a| a.span.start == span.start)
            .ok_or_else(|| {
                HammerError::Unsound(format!("no aby call at {} for {}", span.start, id))
            })?;
        let origin = Origin {
            theorem: t.name.clone(),
            span: Some(site.span),
        };
        let b = build_bundle(
            &new.sig_before(&t.name),
            &site.goal,
            &site.deps,
            id,
            Mode::Bushy,
            origin,
        )?;
        let names = |xs: &crate::tptp::ProblemBundle| -> BTreeSet<String> {
            xs.axiom_names().map(String::from).collect()
        };
        if b.conjecture != c.bundle.conjecture || names(&b) != names(&c.bundle) {
            return Err(HammerError::Unsound(format!("problem of {} changed", id)));
        }
    }
    Ok(())
}
