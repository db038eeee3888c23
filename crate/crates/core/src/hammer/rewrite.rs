use super::generate::Candidate;
use super::plan::Plan;
use super::HammerError;
use crate::script::Span;

/// The `aby` call standing for a subproof.
pub fn aby_text(deps: &[String]) -> String {
    if deps.is_empty() {
        "aby.".to_string()
    } else {
        format!("aby {}.", deps.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rewritten {
    pub text: String,
    /// Candidate id and the span of its `aby` call in the new text.
    pub placed: Vec<(String, Span)>,
}

/// Replaces each chosen span by an `aby` call citing the candidate's
/// dependencies. Fails if the text under a span differs from planning time.
pub fn rewrite_with_aby(
    source: &str,
    cands: &[Candidate],
    plan: &Plan,
) -> Result<Rewritten, HammerError> {
    let mut chosen: Vec<&Candidate> = plan.chosen.iter().map(|&i| &cands[i]).collect();
    chosen.sort_by_key(|c| c.span.start);
    let mut text = String::with_capacity(source.len());
    let mut placed = Vec::new();
    let mut at = 0;
    for c in chosen {
        let s = c.span;
        if s.start < at || source.get(s.start..s.end) != Some(c.text.as_str()) {
            return Err(HammerError::SpanDrift(c.id.clone()));
        }
        text.push_str(&source[at..s.start]);
        let call = aby_text(&c.aby_deps);
        placed.push((c.id.clone(), Span::new(text.len(), text.len() + call.len())));
        text.push_str(&call);
        at = s.end;
    }
    text.push_str(&source[at..]);
    Ok(Rewritten { text, placed })
}
