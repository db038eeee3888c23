//! The proof script language: lexer, parser, elaborator and tactic engine.

pub mod ast;
mod dev;
mod elab;
mod engine;
mod error;
mod lexer;
mod parser;

pub use ast::{
    print_items, walk_tactics, Expr, ExprKind, Item, ItemKind, SBinder, SType, Span, Tactic,
    TacticKind,
};
pub use dev::{elaborate, elaborate_prefix, statement_entry, Development};
pub use elab::{stype, Elab};
pub use engine::{
    abstract_occurrences, elaborate_theorem, AbySite, Goal, GoalView, Site, SiteDeps, TheoremTrace,
};
pub use error::{line_col, ScriptError, ScriptErrorKind};
pub use parser::{parse_expr, parse_script, parse_type};
