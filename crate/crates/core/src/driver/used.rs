use std::collections::{HashMap, HashSet};

use crate::tptp::{formula_names, parse_formula_name, FormulaTag, ProblemBundle};

/// Maps formula names of an emitted problem back to the bundle's names.
#[derive(Clone, Debug, Default)]
pub struct UsedAxioms {
    emitted: HashMap<String, String>,
    /// Citable names: facts and hypotheses.
    known: HashSet<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Extraction {
    pub names: Vec<String>,
    pub incomplete: bool,
    pub warnings: Vec<String>,
}

impl UsedAxioms {
    pub fn for_bundle(b: &ProblemBundle) -> Self {
        let known: HashSet<String> = b.dependency_names().into_iter().map(String::from).collect();
        let emitted = formula_names(b)
            .into_iter()
            .filter(|(_, orig)| known.contains(orig))
            .collect();
        UsedAxioms { emitted, known }
    }

    pub fn from_names<I: IntoIterator<Item = String>>(names: I) -> Self {
        UsedAxioms {
            emitted: HashMap::new(),
            known: names.into_iter().collect(),
        }
    }

    /// Scans a proof for axiom names: `file(_, name)` annotations and bare
    /// references alike, Dedukti `{|name|}` quoting included. Names not in the
    /// bundle are dropped with a warning. Definition axioms are not citable
    /// and are skipped silently.
    pub fn extract(&self, proof: &str) -> Extraction {
        let mut out = Extraction::default();
        let mut seen = HashSet::new();
        for tok in proof.split(|c: char| !(c.is_ascii_alphanumeric() || c == '_')) {
            if !tok.starts_with("axiom_") || !seen.insert(tok) {
                continue;
            }
            let name = match self.emitted.get(tok) {
                Some(n) => Some(n.clone()),
                None => match parse_formula_name(tok, &|n| self.known.contains(n)) {
                    Some((FormulaTag::Def, _)) => continue,
                    Some((_, n)) if self.known.contains(&n) => Some(n),
                    _ => None,
                },
            };
            match name {
                Some(n) => {
                    if !out.names.contains(&n) {
                        out.names.push(n);
                    }
                }
                None => out
                    .warnings
                    .push(format!("unknown axiom reference `{}`", tok)),
            }
        }
        out.incomplete = out.names.is_empty();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXCERPT: &str = "{|axiom_ordinal_5Fordsucc9|}:\n  Prf (forall iota\n           (0 : El iota =>\n                 (imp ({|ordinal|} 0)\n                      ({|ordinal|} ({|ordsucc|} 0))))).\n{|axiom_c_Ha16|}: Prf ({|ordinal|} {|alpha|}).\n{|axiom_18|}: Prf (not ({|ordinal|} ({|ordsucc|} {|alpha|}))).\n";

    #[test]
    fn paper_excerpt() {
        let u = UsedAxioms::from_names(["ordinal_ordsucc".to_string(), "Ha".to_string()]);
        let e = u.extract(EXCERPT);
        assert_eq!(e.names, ["ordinal_ordsucc", "Ha"]);
        assert!(!e.incomplete);
        assert_eq!(e.warnings, ["unknown axiom reference `axiom_18`"]);
        assert_eq!(u.extract(EXCERPT), e);
    }

    #[test]
    fn empty_proof_is_incomplete() {
        let e = UsedAxioms::from_names(["a".to_string()]).extract("");
        assert!(e.names.is_empty() && e.incomplete);
    }

    #[test]
    fn tstp_annotations() {
        let u = UsedAxioms::from_names(["lemma2".to_string(), "H".to_string()]);
        let proof = "fof(f1,axiom,p(a),file('x.p',axiom_lemma23)).\n\
                     fof(f2,axiom,q,file('x.p',axiom_c_H4)).\n\
                     fof(f3,axiom,r,file('x.p',axiom_nope7)).";
        let e = u.extract(proof);
        assert_eq!(e.names, ["lemma2", "H"]);
        assert_eq!(e.warnings.len(), 1);
    }
}
