//! Elaboration of whole scripts into a signature plus per-theorem traces.

use rayon::prelude::*;

use super::ast::{Item, ItemKind};
use super::elab::{stype, Elab};
use super::engine::{elaborate_theorem, TheoremTrace};
use super::error::{ScriptError, ScriptErrorKind};
use super::parser::parse_script;
use crate::kernel::{beta_eta, typecheck, Context, Entry, Signature, TheoremProof};

/// An elaborated script.
#[derive(Clone, Debug)]
pub struct Development {
    pub text: String,
    pub items: Vec<Item>,
    /// The base signature extended by the script's items.
    pub sig: Signature,
    /// Number of entries that came from the base signature.
    pub base_len: usize,
    /// Traces of all theorems whose statements were accepted, in source order.
    pub theorems: Vec<TheoremTrace>,
    /// Errors in source order. Elaboration of statements stops at the first
    /// bad statement; proofs of accepted statements are all attempted.
    pub errors: Vec<ScriptError>,
}

impl Development {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn theorem(&self, name: &str) -> Option<&TheoremTrace> {
        self.theorems.iter().find(|t| t.name == name)
    }

    /// The theorem whose text contains `offset`.
    pub fn theorem_at(&self, offset: usize) -> Option<&TheoremTrace> {
        self.theorems
            .iter()
            .find(|t| t.span.start <= offset && offset < t.span.end)
    }

    /// The signature as it stood just before the named entry.
    pub fn sig_before(&self, name: &str) -> Signature {
        self.sig.truncate_before(name)
    }

    pub fn hole_count(&self) -> usize {
        self.theorems.iter().map(|t| t.abys.len()).sum()
    }
}

/// Parses and elaborates `text` on top of `base`.
pub fn elaborate(base: &Signature, text: &str) -> Development {
    elaborate_prefix(base, text, usize::MAX)
}

/// Like [`elaborate`], restricted to the items that start before `offset`.
pub fn elaborate_prefix(base: &Signature, text: &str, offset: usize) -> Development {
    let mut dev = Development {
        text: text.to_string(),
        items: Vec::new(),
        sig: base.clone(),
        base_len: base.len(),
        theorems: Vec::new(),
        errors: Vec::new(),
    };
    let items = match parse_script(text) {
        Ok(items) => items,
        Err(e) => {
            if e.span.start < offset {
                dev.errors.push(e);
                return dev;
            }
            // The syntax error lies beyond the prefix: parse what precedes it.
            match parse_script(&text[..item_boundary_before(text, e.span.start)]) {
                Ok(items) => items,
                Err(e2) => {
                    dev.errors.push(e2);
                    return dev;
                }
            }
        }
    };
    dev.items = items
        .into_iter()
        .filter(|i| i.span.start < offset)
        .collect();

    // Statements, sequentially.
    let mut pending = Vec::new();
    for (idx, item) in dev.items.iter().enumerate() {
        match statement_entry(&dev.sig, text, item) {
            Ok(entry) => {
                if matches!(item.kind, ItemKind::TheoremDecl { .. }) {
                    pending.push((idx, dev.sig.len()));
                }
                if let Err(k) = dev.sig.push(entry) {
                    dev.errors.push(ScriptError::new(
                        ScriptErrorKind::Kernel(k),
                        item.span,
                        text,
                    ));
                    pending.retain(|(i, _)| *i != idx);
                    break;
                }
            }
            Err(e) => {
                dev.errors.push(e);
                break;
            }
        }
    }

    // Proofs, in parallel against their prefix signatures.
    let sig = &dev.sig;
    let items = &dev.items;
    let results: Vec<(usize, TheoremTrace, Option<ScriptError>)> = pending
        .par_iter()
        .map(|&(idx, pos)| {
            let prefix = sig.prefix(pos);
            let (trace, err) = elaborate_theorem(&prefix, text, idx, &items[idx]);
            (pos, trace, err)
        })
        .collect();
    for (_pos, trace, err) in results {
        if let (Some(proof), Some(report)) = (&trace.proof, &trace.report) {
            dev.sig
                .set_proof(
                    &trace.name,
                    TheoremProof::Checked {
                        proof: proof.clone(),
                        holes: report.holes.len(),
                    },
                )
                .expect("theorem entry exists");
        }
        if let Some(e) = err {
            dev.errors.push(e);
        }
        dev.theorems.push(trace);
    }
    dev.errors.sort_by_key(|e| e.span.start);
    dev
}

fn item_boundary_before(text: &str, offset: usize) -> usize {
    let head = &text[..offset.min(text.len())];
    ["Theorem", "Lemma", "Definition", "Parameter", "Axiom"]
        .iter()
        .filter_map(|kw| head.rfind(kw))
        .max()
        .unwrap_or(0)
}

/// The signature entry declared by an item (theorems are entered as trusted
/// until their proof is checked).
pub fn statement_entry(sig: &Signature, text: &str, item: &Item) -> Result<Entry, ScriptError> {
    let el = Elab { sig, text };
    let empty = Context::default();
    let name: crate::kernel::Name = item.name().into();
    Ok(match &item.kind {
        ItemKind::Parameter { ty, .. } => Entry::Prim {
            name,
            ty: stype(ty),
        },
        ItemKind::Axiom { prop, .. } => Entry::Axiom {
            name,
            prop: beta_eta(&el.prop(&empty, prop)?),
        },
        ItemKind::Definition { ty, body, .. } => {
            let expected = ty.as_ref().map(stype);
            let body_t = el.term(&empty, body, expected.as_ref())?;
            let ty = match expected {
                Some(t) => t,
                None => typecheck(sig, &empty, &body_t)
                    .map_err(|k| ScriptError::new(ScriptErrorKind::Kernel(k), body.span, text))?,
            };
            Entry::Def {
                name,
                ty,
                body: beta_eta(&body_t),
            }
        }
        ItemKind::TheoremDecl { prop, .. } => Entry::Thm {
            name,
            prop: beta_eta(&el.prop(&empty, prop)?),
            proof: TheoremProof::Trusted,
        },
    })
}
