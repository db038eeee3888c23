//! TPTP problems: bundles, name mangling, TH0 and FOF.

mod bundle;
mod fof;
mod mangle;
mod th0;

pub use bundle::{
    build_bundle, connective_defs, context_renaming, BundleError, Formula, FormulaKind, Mode,
    Origin, ProblemBundle,
};
pub use fof::{check_fof, fo_fragment, to_fof, FoFormula, FoProblem, FoTerm, NotFirstOrder};
pub use mangle::{
    escape, formula_name, mangle, parse_formula_name, unescape, unmangle, FormulaTag, UnmangleError,
};
pub use th0::{
    formula_names, parse_th0, render_type, to_th0, to_th0_literal, Th0Error, CONJECTURE_NAME, IOTA,
};
