use std::path::Path;

use serde::Serialize;

use super::HammerError;
use crate::basis::classical_frontier;
use crate::driver::{run_batch, Schedule, ScheduleOutcome};
use crate::script::{Development, Span};
use crate::tptp::{build_bundle, Mode, Origin, ProblemBundle};

#[derive(Clone, Debug, Serialize)]
pub struct AbyVerdict {
    /// Problem id, `aby_<theorem>_<n>`.
    pub id: String,
    pub theorem: String,
    pub span: Span,
    pub deps: Vec<String>,
    pub justified: bool,
    /// The prover that justified the call.
    pub prover: Option<String>,
    pub note: Option<String>,
    #[serde(skip)]
    pub outcome: Option<ScheduleOutcome>,
}

/// The problems behind every `aby` call of `dev`, with the calls' theorem
/// names. Calls at or before the classical frontier get no problem.
pub fn aby_bundles(
    dev: &Development,
) -> Result<Vec<(AbyVerdict, Option<ProblemBundle>)>, HammerError> {
    let frontier = classical_frontier(&dev.sig)?;
    let mut out = Vec::new();
    for t in &dev.theorems {
        let eligible = dev.sig.position(&t.name).is_some_and(|p| p > frontier);
        let sig = dev.sig_before(&t.name);
        for (n, a) in t.abys.iter().enumerate() {
            let id = format!("aby_{}_{}", t.name, n + 1);
            let mut v = AbyVerdict {
                id: id.clone(),
                theorem: t.name.clone(),
                span: a.span,
                deps: a.deps.clone(),
                justified: false,
                prover: None,
                note: None,
                outcome: None,
            };
            if !eligible {
                v.note = Some("before the classical frontier".into());
                out.push((v, None));
                continue;
            }
            let origin = Origin {
                theorem: t.name.clone(),
                span: Some(a.span),
            };
            let b = build_bundle(&sig, &a.goal, &a.deps, &id, Mode::Bushy, origin)?;
            out.push((v, Some(b)));
        }
    }
    Ok(out)
}

/// Tries to justify every `aby` call: TH0 slices always run, FOF slices when
/// the problem is first-order. A call is justified when any slice proves it.
pub fn verify_aby(
    dev: &Development,
    schedule: &Schedule,
    workdir: &Path,
    jobs: usize,
) -> Result<Vec<AbyVerdict>, HammerError> {
    let items = aby_bundles(dev)?;
    let bundles: Vec<ProblemBundle> = items.iter().filter_map(|(_, b)| b.clone()).collect();
    let mut outcomes = run_batch(&bundles, schedule, workdir, jobs)?.into_iter();
    let mut out = Vec::new();
    for (mut v, b) in items {
        if b.is_some() {
            let o = outcomes.next().expect("one outcome per bundle");
            if let Some(r) = o.success() {
                v.justified = true;
                v.prover = Some(r.prover.clone());
            } else {
                v.note = Some("no prover succeeded".into());
            }
            v.outcome = Some(o);
        }
        out.push(v);
    }
    Ok(out)
}
