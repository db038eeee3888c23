//! Simply typed higher-order logic with Curry-Howard proof terms.

mod error;
mod matching;
pub mod names;
mod normalize;
mod print;
mod proof;
mod signature;
mod term;
mod typecheck;
mod types;

pub use error::{KResult, KernelError};
pub use matching::{match_conclusion, Substitution};
pub use normalize::{beta_eta, convertible, expose, normalize, unfold_head};
pub use proof::{
    check_proof, infer_proof, AbyHole, CheckReport, HoleObligation, ProofDeps, ProofTerm,
};
pub use signature::{poly_def, Context, Entry, Signature, TheoremProof};
pub use term::{alpha_eq, Binder, Name, Term};
pub use typecheck::{check_prop, typecheck};
pub use types::Type;
