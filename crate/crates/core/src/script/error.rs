use thiserror::Error;

use super::ast::Span;
use crate::kernel::KernelError;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ScriptErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unbalanced block: {0}")]
    UnbalancedBlock(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("apply: conclusion of `{0}` does not match the goal")]
    ApplyNoMatch(String),
    #[error("apply: cannot infer instantiation of `{0}`")]
    CannotInfer(String),
    #[error("rewrite: occurrence {0} out of range ({1} found)")]
    OccurrenceOutOfRange(u32, usize),
    #[error("rewrite: `{0}` is not an equation")]
    NotAnEquation(String),
    #[error("{0} goal(s) still open at Qed")]
    OpenGoalsAtQed(usize),
    #[error("no goals left")]
    NoGoals,
    #[error("{0}")]
    Tactic(String),
    #[error("classical reasoning used before `xm` is available")]
    NoXm,
}

/// An error pinned to a source location.
#[derive(Debug, Clone, Error, PartialEq)]
#[error("{line}:{col}: {kind}")]
pub struct ScriptError {
    pub kind: ScriptErrorKind,
    pub span: Span,
    /// 1-based line of `span.start`.
    pub line: usize,
    /// 1-based column (in characters) of `span.start`.
    pub col: usize,
}

impl ScriptError {
    pub fn new(kind: ScriptErrorKind, span: Span, text: &str) -> Self {
        let (line, col) = line_col(text, span.start);
        ScriptError {
            kind,
            span,
            line,
            col,
        }
    }
}

pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..floor_char_boundary(text, offset)];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().unwrap_or("").chars().count() + 1;
    (line, col)
}

fn floor_char_boundary(text: &str, mut i: usize) -> usize {
    while !text.is_char_boundary(i) {
        i -= 1;
    }
    i
}
