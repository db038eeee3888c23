//! The bootstrap signature: set-theoretic primitives and axioms, the
//! impredicative connectives, and the first theorems up to excluded middle.

use std::sync::OnceLock;

use thiserror::Error;

use crate::kernel::{names, Entry, Signature, Term, TheoremProof};
use crate::script::{elaborate, ScriptError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BasisError {
    #[error("the signature has no `{}` theorem", names::XM)]
    NoXm,
    #[error("`{}` is trusted, but a checked proof was required", names::XM)]
    XmNotChecked,
    #[error("basis script failed to elaborate: {0}")]
    Script(#[from] ScriptError),
}

/// Names of the basis entries by role.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisManifest {
    pub prim_names: Vec<String>,
    pub axiom_names: Vec<String>,
    pub connective_defs: Vec<String>,
    pub xm_name: String,
}

pub const PRELUDE: &str = r#"
Parameter Eps : (set -> prop) -> set.
Parameter In : set -> set -> prop.
Parameter Empty : set.
Parameter Union : set -> set.
Parameter Power : set -> set.
Parameter Repl : set -> (set -> set) -> set.
Parameter UnivOf : set -> set.

Definition True : prop := forall p:prop, p -> p.
Definition False : prop := forall p:prop, p.
Definition not : prop -> prop := fun A:prop => A -> False.
Definition and : prop -> prop -> prop := fun (A B:prop) => forall p:prop, (A -> B -> p) -> p.
Definition or : prop -> prop -> prop := fun (A B:prop) => forall p:prop, (A -> p) -> (B -> p) -> p.
Definition iff : prop -> prop -> prop := fun (A B:prop) => and (A -> B) (B -> A).
Definition ex : (set -> prop) -> prop := fun P:set -> prop => forall p:prop, (forall x:set, P x -> p) -> p.
Definition eq : set -> set -> prop := fun (x y:set) => forall Q:set -> prop, Q x -> Q y.

Axiom eps_ax : forall P:set -> prop, forall x:set, P x -> P (Eps P).
Axiom set_ext : forall X Y:set, (forall z:set, In z X -> In z Y) -> (forall z:set, In z Y -> In z X) -> X = Y.
Axiom In_ind : forall P:set -> prop, (forall x:set, (forall y:set, In y x -> P y) -> P x) -> forall x:set, P x.
Axiom EmptyAx : forall x:set, ~In x Empty.
Axiom UnionEq : forall X z:set, In z (Union X) <-> exists Y:set, In z Y /\ In Y X.
Axiom PowerEq : forall X Y:set, In Y (Power X) <-> (forall z:set, In z Y -> In z X).
Axiom ReplEq : forall X:set, forall F:set -> set, forall y:set, In y (Repl X F) <-> exists x:set, In x X /\ y = F x.
Axiom UnivOf_In : forall X:set, In X (UnivOf X).
Axiom UnivOf_TransSet : forall X x y:set, In x (UnivOf X) -> In y x -> In y (UnivOf X).
Axiom UnivOf_Union_closed : forall X x:set, In x (UnivOf X) -> In (Union x) (UnivOf X).
Axiom UnivOf_Power_closed : forall X x:set, In x (UnivOf X) -> In (Power x) (UnivOf X).
Axiom UnivOf_Repl_closed : forall X x:set, forall F:set -> set, In x (UnivOf X) -> (forall y:set, In y x -> In (F y) (UnivOf X)) -> In (Repl x F) (UnivOf X).
Axiom UnivOf_Min : forall X U:set, In X U -> (forall x y:set, In x U -> In y x -> In y U) -> (forall x:set, In x U -> In (Union x) U) -> (forall x:set, In x U -> In (Power x) U) -> (forall x:set, forall F:set -> set, In x U -> (forall y:set, In y x -> In (F y) U) -> In (Repl x F) U) -> forall x:set, In x (UnivOf X) -> In x U.
Axiom prop_ext : forall A B:prop, (A <-> B) -> A = B.
Axiom func_ext : forall F G:set -> set, (forall x:set, F x = G x) -> F = G.
Axiom pred_ext : forall P Q:set -> prop, (forall x:set, P x <-> Q x) -> P = Q.

Theorem TrueI : True.
exact fun p H => H.
Qed.

Theorem FalseE : forall A:prop, False -> A.
let A. assume H. exact H A.
Qed.

Theorem andI : forall A B:prop, A -> B -> A /\ B.
exact fun A B a b p H => H a b.
Qed.

Theorem andEL : forall A B:prop, A /\ B -> A.
let A B. assume H. exact H A (fun a b => a).
Qed.

Theorem andER : forall A B:prop, A /\ B -> B.
let A B. assume H. exact H B (fun a b => b).
Qed.

Theorem orIL : forall A B:prop, A -> A \/ B.
exact fun A B a p H1 H2 => H1 a.
Qed.

Theorem orIR : forall A B:prop, B -> A \/ B.
exact fun A B b p H1 H2 => H2 b.
Qed.

Theorem iffI : forall A B:prop, (A -> B) -> (B -> A) -> (A <-> B).
let A B. assume H1 H2.
apply andI.
- exact H1.
- exact H2.
Qed.

Theorem eq_refl : forall x:set, x = x.
let x. exact fun Q H => H.
Qed.
"#;

/// Theorems proved classically after `xm`.
pub const CLASSICAL: &str = r#"
Theorem dneg : forall p:prop, ~~p -> p.
let p. assume H.
apply xm p.
- assume Hp. exact Hp.
- assume Hn. apply FalseE. exact H Hn.
Qed.

Theorem eq_sym : forall x y:set, x = y -> y = x.
let x y. assume H.
rewrite H.
exact eq_refl y.
Qed.
"#;

fn build() -> Result<Signature, BasisError> {
    let dev = elaborate(&Signature::new(), PRELUDE);
    if let Some(e) = dev.errors.into_iter().next() {
        return Err(e.into());
    }
    let mut sig = dev.sig;
    let xm_prop = crate::script::parse_expr("forall p:prop, p \\/ ~p")
        .map_err(BasisError::from)
        .and_then(|e| {
            crate::script::Elab {
                sig: &sig,
                text: "forall p:prop, p \\/ ~p",
            }
            .prop(&Default::default(), &e)
            .map_err(BasisError::from)
        })?;
    sig.push(Entry::Thm {
        name: names::XM.into(),
        prop: xm_prop,
        proof: TheoremProof::Trusted,
    })
    .expect("xm is well formed");
    let dev = elaborate(&sig, CLASSICAL);
    if let Some(e) = dev.errors.into_iter().next() {
        return Err(e.into());
    }
    Ok(dev.sig)
}

/// The full basis signature. Built once and shared.
pub fn bootstrap() -> Signature {
    static BASIS: OnceLock<Signature> = OnceLock::new();
    BASIS
        .get_or_init(|| build().expect("basis script elaborates"))
        .clone()
}

/// The basis up to, but excluding, `xm`.
pub fn bootstrap_intuitionistic() -> Signature {
    bootstrap().truncate_before(names::XM)
}

pub fn manifest(sig: &Signature) -> BasisManifest {
    let mut m = BasisManifest {
        prim_names: Vec::new(),
        axiom_names: Vec::new(),
        connective_defs: Vec::new(),
        xm_name: names::XM.to_string(),
    };
    for e in sig.entries() {
        match e {
            Entry::Prim { name, .. } => m.prim_names.push(name.to_string()),
            Entry::Axiom { name, .. } => m.axiom_names.push(name.to_string()),
            Entry::Def { name, .. } if names::is_connective(name) => {
                m.connective_defs.push(name.to_string())
            }
            _ => {}
        }
    }
    m
}

/// Position of `xm`: hammer problems are only generated strictly after it.
pub fn classical_frontier(sig: &Signature) -> Result<usize, BasisError> {
    match sig.position(names::XM) {
        Some(i) if matches!(sig.entry_at(i), Some(Entry::Thm { .. })) => Ok(i),
        _ => Err(BasisError::NoXm),
    }
}

/// Fails unless `xm` carries a kernel-checked proof.
pub fn require_xm_proof(sig: &Signature) -> Result<(), BasisError> {
    let i = classical_frontier(sig)?;
    match sig.entry_at(i) {
        Some(Entry::Thm {
            proof: TheoremProof::Checked { holes: 0, .. },
            ..
        }) => Ok(()),
        _ => Err(BasisError::XmNotChecked),
    }
}

/// `forall p:prop, p \/ ~p`
pub fn xm_statement() -> Term {
    bootstrap().prop_of(names::XM).expect("basis has xm")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check_proof, check_prop, Context};

    #[test]
    fn basis_elaborates_in_order() {
        let sig = bootstrap();
        let m = manifest(&sig);
        assert_eq!(
            m.prim_names,
            ["Eps", "In", "Empty", "Union", "Power", "Repl", "UnivOf"]
        );
        assert_eq!(
            m.connective_defs,
            ["True", "False", "not", "and", "or", "iff", "ex", "eq"]
        );
        assert_eq!(m.axiom_names.len(), 16);
        let thms: Vec<_> = sig
            .entries()
            .filter(|e| matches!(e, Entry::Thm { .. }))
            .map(|e| e.name().to_string())
            .collect();
        assert_eq!(thms[9], "xm");
        assert!(classical_frontier(&sig).unwrap() > sig.position("eq").unwrap());
    }

    #[test]
    fn every_axiom_is_a_prop_and_every_proof_checks() {
        let sig = bootstrap();
        let empty = Context::default();
        for (i, e) in sig.entries().enumerate() {
            let prefix = sig.prefix(i);
            match e {
                Entry::Axiom { prop, .. } => check_prop(&prefix, &empty, prop).unwrap(),
                Entry::Thm {
                    prop,
                    proof: TheoremProof::Checked { proof, holes },
                    ..
                } => {
                    let r = check_proof(&prefix, &empty, proof, prop).unwrap();
                    assert_eq!(r.holes.len(), *holes);
                    assert_eq!(*holes, 0);
                }
                _ => {}
            }
        }
    }

    #[test]
    fn and_definition_matches_listing() {
        let sig = bootstrap();
        assert_eq!(
            sig.definiens("and").unwrap().to_string(),
            "fun A:prop => fun B:prop => forall p:prop, (A -> B -> p) -> p"
        );
        assert_eq!(xm_statement().to_string(), "forall p:prop, p \\/ ~p");
    }

    #[test]
    fn frontier_errors() {
        let sig = bootstrap_intuitionistic();
        assert_eq!(classical_frontier(&sig), Err(BasisError::NoXm));
        assert_eq!(
            require_xm_proof(&bootstrap()),
            Err(BasisError::XmNotChecked)
        );
    }
}
