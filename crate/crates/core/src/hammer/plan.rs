use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::generate::Candidate;
use super::HammerError;
use crate::script::Span;

/// Manual changes to a plan: pinned candidates count as solved, excluded
/// ones as unsolved.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overrides {
    #[serde(default)]
    pub pin: BTreeSet<String>,
    #[serde(default)]
    pub exclude: BTreeSet<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Plan {
    /// Indices into the candidate list, in source order.
    pub chosen: Vec<usize>,
    /// Solved candidates inside a chosen one.
    pub superseded: usize,
    pub overrides: Overrides,
}

/// Indices of the solved spans not contained in another solved span, in
/// source order. Spans must form a forest: pairwise nested or disjoint.
pub fn maximal_solved(spans: &[Span], solved: &[bool]) -> Result<Vec<usize>, (usize, usize)> {
    let mut order: Vec<usize> = (0..spans.len()).collect();
    order.sort_by_key(|&i| (spans[i].start, std::cmp::Reverse(spans[i].end)));
    let mut open: Vec<usize> = Vec::new();
    // Innermost open solved ancestor depth, tracked per stack entry.
    let mut solved_above: Vec<bool> = Vec::new();
    let mut chosen = Vec::new();
    for i in order {
        let s = spans[i];
        while open.last().is_some_and(|&o| spans[o].end <= s.start) {
            open.pop();
            solved_above.pop();
        }
        if let Some(&o) = open.last() {
            if s.end > spans[o].end {
                return Err((o, i));
            }
        }
        let covered = solved_above.last().copied().unwrap_or(false);
        if solved[i] && !covered {
            chosen.push(i);
        }
        open.push(i);
        solved_above.push(covered || solved[i]);
    }
    Ok(chosen)
}

/// Chooses the solved candidates that are maximal under span containment
/// within each theorem. An unsolved span does not block solved ones inside it.
pub fn select_maximal(cands: &[Candidate], overrides: &Overrides) -> Result<Plan, HammerError> {
    let mut by_theorem: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, c) in cands.iter().enumerate() {
        by_theorem.entry(&c.theorem).or_default().push(i);
    }
    let solved = |c: &Candidate| {
        !overrides.exclude.contains(&c.id)
            && (c.status.is_solved() || overrides.pin.contains(&c.id))
    };
    let mut chosen = Vec::new();
    let mut total_solved = 0;
    for (theorem, idx) in by_theorem {
        let spans: Vec<Span> = idx.iter().map(|&i| cands[i].span).collect();
        let flags: Vec<bool> = idx.iter().map(|&i| solved(&cands[i])).collect();
        total_solved += flags.iter().filter(|f| **f).count();
        let picked = maximal_solved(&spans, &flags).map_err(|(a, b)| {
            HammerError::OverlapWithoutNesting {
                theorem: theorem.to_string(),
                first: cands[idx[a]].id.clone(),
                second: cands[idx[b]].id.clone(),
            }
        })?;
        chosen.extend(picked.into_iter().map(|k| idx[k]));
    }
    chosen.sort_by_key(|&i| cands[i].span.start);
    Ok(Plan {
        superseded: total_solved - chosen.len(),
        chosen,
        overrides: overrides.clone(),
    })
}
