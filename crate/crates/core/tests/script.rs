use hammerforge::basis::bootstrap;
use hammerforge::kernel::{Entry, TheoremProof};
use hammerforge::script::{elaborate, ScriptErrorKind};

fn ok(text: &str) -> hammerforge::script::Development {
    let dev = elaborate(&bootstrap(), text);
    assert!(dev.is_ok(), "{:?}", dev.errors);
    dev
}

fn err_kind(text: &str) -> ScriptErrorKind {
    let dev = elaborate(&bootstrap(), text);
    dev.errors.into_iter().next().expect("an error").kind
}

#[test]
fn apply_and_intro_leaves_two_goals() {
    let text = "Theorem t : forall A B:prop, A -> B -> A /\\ B.\n\
                let A B. assume Ha Hb.\n\
                apply andI.\n\
                - exact Ha.\n\
                - exact Hb.\n\
                Qed.\n";
    let dev = ok(text);
    let t = dev.theorem("t").unwrap();
    assert_eq!(t.report.as_ref().unwrap().holes.len(), 0);
    let kws: Vec<_> = t.sites.iter().map(|s| s.keyword).collect();
    assert_eq!(
        kws,
        ["let", "assume", "apply", "bullet", "exact", "bullet", "exact"]
    );
    let first = text.find("exact Ha").unwrap();
    assert_eq!(t.goal_at(first).unwrap().concl.to_string(), "A");
    let second = text.find("exact Hb").unwrap();
    assert_eq!(t.goal_at(second).unwrap().concl.to_string(), "B");
}

#[test]
fn apply_unfolds_the_goal() {
    ok("Theorem t : forall A:prop, A <-> A.\n\
        let A. apply andI.\n\
        - assume H. exact H.\n\
        - assume H. exact H.\n\
        Qed.\n");
}

#[test]
fn rewrite_at_picks_one_occurrence() {
    let text = "Parameter g : set -> set -> set.\n\
                Theorem t : forall a b:set, a = b -> g a a = g a b.\n\
                let a b. assume H.\n\
                rewrite H at 2.\n\
                exact eq_refl (g a b).\n\
                Qed.\n";
    let dev = ok(text);
    let t = dev.theorem("t").unwrap();
    let at = text.find("exact eq_refl").unwrap();
    assert_eq!(t.goal_at(at).unwrap().concl.to_string(), "g a b = g a b");
}

#[test]
fn rewrite_errors() {
    let base = "Parameter g : set -> set -> set.\n\
                Theorem t : forall a b:set, a = b -> g a a = g a b.\n\
                let a b. assume H.\n";
    assert_eq!(
        err_kind(&format!("{base}rewrite H at 4.\nQed.\n")),
        ScriptErrorKind::OccurrenceOutOfRange(4, 3)
    );
    assert!(matches!(
        err_kind(&format!("{base}rewrite TrueI.\nQed.\n")),
        ScriptErrorKind::NotAnEquation(_)
    ));
}

#[test]
fn reversed_rewrite() {
    ok("Parameter f : set -> set.\n\
        Theorem t : forall a b:set, a = b -> f b = f a.\n\
        let a b. assume H.\n\
        rewrite <- H.\n\
        exact eq_refl (f a).\n\
        Qed.\n");
}

#[test]
fn claim_with_block_and_aby_hole() {
    let text = "Parameter P : set -> prop.\n\
                Axiom PAll : forall x:set, P x.\n\
                Theorem t : forall x:set, P x /\\ P x.\n\
                let x.\n\
                claim L: P x. { aby PAll. }\n\
                apply andI.\n\
                - exact L.\n\
                - exact L.\n\
                Qed.\n";
    let dev = ok(text);
    let t = dev.theorem("t").unwrap();
    assert_eq!(t.abys.len(), 1);
    assert_eq!(t.abys[0].deps, ["PAll"]);
    assert_eq!(t.abys[0].goal.concl.to_string(), "P x");
    let inside = text.find("aby PAll").unwrap();
    assert_eq!(t.goal_at(inside).unwrap().concl.to_string(), "P x");
    assert!(matches!(
        dev.sig.lookup("t").unwrap().as_ref(),
        Entry::Thm {
            proof: TheoremProof::Checked { holes: 1, .. },
            ..
        }
    ));
}

#[test]
fn open_goals_at_qed() {
    let kind = err_kind(
        "Theorem t : forall A B:prop, A -> B -> A /\\ B.\n\
         let A B. assume Ha Hb. apply andI.\n\
         Qed.\n",
    );
    assert_eq!(kind, ScriptErrorKind::OpenGoalsAtQed(2));
}

#[test]
fn apply_failures_are_classified() {
    let base = "Parameter P : set -> prop.\nParameter c : set.\n";
    assert!(matches!(
        err_kind(&format!(
            "{base}Axiom q : P Empty.\nTheorem t : P c.\napply q.\nQed.\n"
        )),
        ScriptErrorKind::ApplyNoMatch(_)
    ));
    assert!(matches!(
        err_kind(&format!(
            "{base}Axiom ax : forall x y:set, P y -> P x.\nTheorem t : P c.\napply ax.\nQed.\n"
        )),
        ScriptErrorKind::CannotInfer(_)
    ));
}

#[test]
fn site_deps_name_hyps_and_facts() {
    let text = "Parameter P : set -> prop.\n\
                Axiom PAll : forall x:set, P x.\n\
                Theorem t : forall x:set, P x -> P x /\\ P x.\n\
                let x. assume Hx.\n\
                apply andI.\n\
                - exact PAll x.\n\
                - exact Hx.\n\
                Qed.\n";
    let dev = ok(text);
    let t = dev.theorem("t").unwrap();
    let apply = t.sites.iter().find(|s| s.keyword == "apply").unwrap();
    assert_eq!(apply.deps.aby_names(), ["andI", "PAll", "Hx"]);
    let b2 = t.sites.iter().filter(|s| s.is_bullet()).nth(1).unwrap();
    assert_eq!(b2.deps.aby_names(), ["Hx"]);
    assert_eq!(
        &text[b2.replace_span().start..b2.replace_span().end],
        "- exact Hx."
    );
}

#[test]
fn later_theorems_see_earlier_ones() {
    let dev = ok(
        "Theorem a1 : forall A:prop, A -> A.\nexact fun A H => H.\nQed.\n\
                  Theorem a2 : True -> True.\nexact a1 True.\nQed.\n",
    );
    assert_eq!(dev.theorems.len(), 2);
    assert_eq!(dev.hole_count(), 0);
}
