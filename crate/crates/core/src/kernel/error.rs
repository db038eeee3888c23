use thiserror::Error;

use super::term::Name;
use super::types::Type;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("unknown constant `{0}`")]
    UnknownConst(Name),
    #[error("unknown variable `{0}`")]
    UnknownVar(Name),
    #[error("loose bound variable #{0}")]
    LooseBound(u32),
    #[error("type mismatch in `{term}`: expected {expected}, found {found}")]
    TypeMismatch {
        term: String,
        expected: Type,
        found: Type,
    },
    #[error("`{term}` of type {ty} is applied but is not a function")]
    NotAFunction { term: String, ty: Type },
    #[error("body of `{0}` is not a proposition")]
    NonPropQuantBody(String),
    #[error("`{0}` is not a definition and cannot be unfolded")]
    NotADef(Name),
    #[error("unknown hypothesis `{0}`")]
    UnknownHyp(Name),
    #[error("unknown theorem or axiom `{0}`")]
    UnknownTheorem(Name),
    #[error("proposition mismatch: expected `{expected}`, found `{found}`")]
    PropMismatch { expected: String, found: String },
    #[error("ill-typed instantiation: `{term}` has type {found}, quantifier expects {expected}")]
    IllTypedInstantiation {
        term: String,
        expected: Type,
        found: Type,
    },
    #[error("expected a universally quantified proposition, found `{0}`")]
    NotAForall(String),
    #[error("expected an implication, found `{0}`")]
    NotAnImp(String),
    #[error("`aby` hole {0} needs an expected proposition")]
    HoleWithoutGoal(String),
    #[error("unknown dependency `{0}` in aby")]
    UnknownDependency(Name),
    #[error("duplicate name `{0}`")]
    DuplicateName(Name),
    #[error("name `{0}` is reserved")]
    ReservedName(Name),
    #[error("variable `{0}` shadows a context variable")]
    ShadowedVar(Name),
    #[error("`{0}` is not a proposition")]
    NotAProp(String),
}

pub type KResult<T> = Result<T, KernelError>;
