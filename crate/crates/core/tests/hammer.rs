mod common;

use std::collections::BTreeSet;

use common::{mini, mock, MINI};
use hammerforge::basis::{bootstrap, bootstrap_intuitionistic, BasisError};
use hammerforge::driver::{Dialect, RunResult, Schedule, Szs};
use hammerforge::hammer::*;
use hammerforge::script::{elaborate, parse_script, walk_tactics, Span};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn solved(prover: &str) -> Status {
    Status::Solved(prover.into())
}

/// Counts tactics straight off the parse tree.
fn tactic_count(text: &str) -> usize {
    let mut n = 0;
    for item in parse_script(text).unwrap() {
        if let Some(proof) = item.proof() {
            walk_tactics(proof, &mut |t| {
                if !t.is_bullet() {
                    n += 1;
                }
            });
        }
    }
    n
}

fn result(id: &str, prover: &str, szs: Szs) -> RunResult {
    RunResult {
        problem_id: id.into(),
        prover: prover.into(),
        szs,
        wall_time: 0.1,
        used_axioms: Vec::new(),
        incomplete: false,
        warnings: Vec::new(),
        proof_text: None,
    }
}

#[test]
fn bushy_count_matches_tactic_count() {
    let dev = mini();
    let g = gen_bushy(&dev).unwrap();
    assert_eq!(g.candidates.len(), tactic_count(MINI));
    assert_eq!((g.skipped, g.gated), (0, 0));
    assert!(dev.theorems.len() >= 12 && g.candidates.len() >= 60);
    let ids: BTreeSet<_> = g.candidates.iter().map(|c| &c.id).collect();
    assert_eq!(ids.len(), g.candidates.len());
    assert!(g.candidates.iter().any(|c| c.id == "bushy_In_irref_0"));
}

#[test]
fn three_tactic_line_gives_three_nested_candidates() {
    let dev = mini();
    let g = gen_bushy(&dev).unwrap();
    let line = "apply In_irref delta. rewrite H2 at 2. exact Ldsa.";
    let at = MINI.find(line).unwrap();
    let on_line: Vec<_> = g
        .candidates
        .iter()
        .filter(|c| c.span.start >= at && c.span.start < at + line.len())
        .collect();
    assert_eq!(on_line.len(), 3);
    assert!(on_line.iter().all(|c| c.span.end == at + line.len()));
    assert!(
        on_line[0].span.contains(&on_line[1].span) && on_line[1].span.contains(&on_line[2].span)
    );
    assert_eq!(on_line[2].text, "exact Ldsa.");
}

#[test]
fn one_tactic_proof_spans_the_body() {
    let dev = mini();
    let g = gen_bushy(&dev).unwrap();
    let c: Vec<_> = g
        .candidates
        .iter()
        .filter(|c| c.theorem == "nat_1")
        .collect();
    assert_eq!(c.len(), 1);
    assert_eq!(c[0].text, "exact nat_ordsucc Empty nat_0.");
    assert_eq!(c[0].aby_deps, ["nat_ordsucc", "nat_0"]);
}

#[test]
fn chainy_covers_bushy() {
    let dev = mini();
    let bushy = gen_bushy(&dev).unwrap().candidates;
    let chainy = gen_chainy(&dev).unwrap();
    assert!(chainy.len() >= bushy.len());
    for c in &bushy {
        let id = c.id.replacen("bushy_", "chainy_", 1);
        let ch = chainy.iter().find(|b| b.id == id).unwrap();
        let big: BTreeSet<_> = ch.axiom_names().collect();
        assert!(c.bundle.axiom_names().all(|n| big.contains(n)), "{}", id);
        assert_eq!(ch.conjecture, c.bundle.conjecture);
    }

    let first = chainy.iter().find(|b| b.id == "chainy_In_irref_0").unwrap();
    let sig = dev.sig_before("In_irref");
    let facts: Vec<_> = sig
        .entries()
        .filter(|e| e.prop().is_some())
        .map(|e| e.name().to_string())
        .collect();
    let deps: Vec<_> = first
        .dependency_names()
        .into_iter()
        .map(String::from)
        .collect();
    assert_eq!(deps, facts);
}

#[test]
fn nothing_is_generated_up_to_excluded_middle() {
    let text = "Theorem early : True.\nexact TrueI.\nQed.\n\
                Theorem xm : forall p:prop, p \\/ ~p.\naby.\nQed.\n\
                Theorem late : True.\nexact TrueI.\nQed.\n";
    let dev = elaborate(&bootstrap_intuitionistic(), text);
    assert!(dev.is_ok(), "{:?}", dev.errors);
    let g = gen_bushy(&dev).unwrap();
    assert_eq!(g.gated, 2);
    assert_eq!(g.candidates.len(), 1);
    assert_eq!(g.candidates[0].theorem, "late");
    assert!(gen_chainy(&dev)
        .unwrap()
        .iter()
        .all(|b| b.id.starts_with("chainy_late_")));

    let classless = elaborate(
        &bootstrap_intuitionistic(),
        "Theorem t : True.\nexact TrueI.\nQed.\n",
    );
    assert!(matches!(
        gen_bushy(&classless),
        Err(HammerError::Basis(BasisError::NoXm))
    ));
}

fn brute_force(spans: &[Span], solved: &[bool]) -> Vec<usize> {
    let n = spans.len();
    let mut best: Option<(usize, usize, Vec<usize>)> = None;
    for mask in 0u32..(1 << n) {
        let set: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if set.iter().any(|&i| !solved[i]) {
            continue;
        }
        let disjoint = set.iter().all(|&i| {
            set.iter().all(|&j| {
                i == j || spans[i].end <= spans[j].start || spans[j].end <= spans[i].start
            })
        });
        if !disjoint {
            continue;
        }
        let chars: usize = set.iter().map(|&i| spans[i].len()).sum();
        let better = match &best {
            None => true,
            Some((c, k, _)) => chars > *c || (chars == *c && set.len() < *k),
        };
        if better {
            best = Some((chars, set.len(), set));
        }
    }
    let mut v = best.unwrap().2;
    v.sort_by_key(|&i| spans[i].start);
    v
}

#[test]
fn supersede_on_the_three_chain() {
    let dev = mini();
    let mut g = gen_bushy(&dev).unwrap().candidates;
    let at = MINI.find("apply In_irref delta.").unwrap();
    let chain: Vec<usize> = (0..g.len())
        .filter(|&i| g[i].theorem == "In_loop_eq" && g[i].span.start >= at)
        .collect();
    assert_eq!(chain.len(), 3);
    for mask in 0..8u32 {
        for c in g.iter_mut() {
            c.status = Status::Failed;
        }
        for (k, &i) in chain.iter().enumerate() {
            if mask & (1 << k) != 0 {
                g[i].status = solved("mock");
            }
        }
        let plan = select_maximal(&g, &Overrides::default()).unwrap();
        let spans: Vec<Span> = chain.iter().map(|&i| g[i].span).collect();
        let flags: Vec<bool> = chain.iter().map(|&i| g[i].status.is_solved()).collect();
        let oracle: Vec<usize> = brute_force(&spans, &flags)
            .into_iter()
            .map(|k| chain[k])
            .collect();
        assert_eq!(plan.chosen, oracle, "mask {:03b}", mask);
        assert_eq!(
            plan.superseded,
            mask.count_ones() as usize - plan.chosen.len()
        );
        match mask {
            0b111 => assert_eq!(plan.chosen, [chain[0]]),
            0b110 => assert_eq!(plan.chosen, [chain[1]]),
            0 => assert!(plan.chosen.is_empty()),
            _ => {}
        }
    }
}

fn random_forest(rng: &mut StdRng) -> Vec<Span> {
    let n = rng.random_range(1..=10);
    let mut spans: Vec<Span> = Vec::new();
    let mut tries = 0;
    while spans.len() < n && tries < 1000 {
        tries += 1;
        let a = rng.random_range(0..60);
        let b = rng.random_range(a + 1..=61);
        let s = Span::new(a, b);
        let ok = spans.iter().all(|t| {
            *t != s && (t.contains(&s) || s.contains(t) || t.end <= s.start || s.end <= t.start)
        });
        if ok {
            spans.push(s);
        }
    }
    spans
}

#[test]
fn supersede_matches_brute_force_on_random_forests() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..500 {
        let spans = random_forest(&mut rng);
        let solved: Vec<bool> = spans.iter().map(|_| rng.random_bool(0.6)).collect();
        let mut got = maximal_solved(&spans, &solved).unwrap();
        got.sort_by_key(|&i| spans[i].start);
        assert_eq!(
            got,
            brute_force(&spans, &solved),
            "{:?} {:?}",
            spans,
            solved
        );
    }
}

#[test]
fn overlapping_spans_are_rejected() {
    let spans = [Span::new(0, 10), Span::new(5, 15)];
    assert_eq!(maximal_solved(&spans, &[true, true]), Err((0, 1)));
}

#[test]
fn overrides_pin_and_exclude() {
    let dev = mini();
    let mut g = gen_bushy(&dev).unwrap().candidates;
    let i = g.iter().position(|c| c.id == "bushy_nat_1_0").unwrap();
    g[i].status = solved("m");
    let plan = select_maximal(&g, &Overrides::default()).unwrap();
    assert_eq!(plan.chosen, [i]);
    let ov = Overrides {
        exclude: [g[i].id.clone()].into(),
        pin: ["bushy_eq_trans_0".to_string()].into(),
    };
    let plan = select_maximal(&g, &ov).unwrap();
    assert_eq!(plan.chosen.len(), 1);
    assert_eq!(g[plan.chosen[0]].id, "bushy_eq_trans_0");
}

#[test]
fn rewriting() {
    let dev = mini();
    let mut g = gen_bushy(&dev).unwrap().candidates;
    let empty = select_maximal(&g, &Overrides::default()).unwrap();
    assert_eq!(rewrite_with_aby(MINI, &g, &empty).unwrap().text, MINI);

    for c in g.iter_mut().filter(|c| c.theorem == "eq_trans") {
        c.status = solved("m");
    }
    let plan = select_maximal(&g, &Overrides::default()).unwrap();
    let r = rewrite_with_aby(MINI, &g, &plan).unwrap();
    assert!(r
        .text
        .contains("Theorem eq_trans : forall x y z:set, x = y -> y = z -> x = z.\naby.\nQed."));
    let new = elaborate(&bootstrap(), &r.text);
    check_rewrite(&dev, &new, &g, &r).unwrap();

    let drifted = MINI.replace("exact H2.", "exact  H2.");
    assert!(matches!(
        rewrite_with_aby(&drifted, &g, &plan),
        Err(HammerError::SpanDrift(_))
    ));
}

#[test]
fn minimize_everything() {
    let dev = mini();
    let g = gen_bushy(&dev).unwrap().candidates;
    let results: Vec<RunResult> = g.iter().map(|c| result(&c.id, "m", Szs::Theorem)).collect();
    let m = minimize(&bootstrap(), MINI, &results, &Overrides::default()).unwrap();
    assert_eq!(m.plan.chosen.len(), dev.theorems.len());
    assert_eq!(m.dev.hole_count(), dev.theorems.len());
    assert!(m.text.rewritten_chars < m.text.original_chars);
    assert!(m.rewritten.text.contains("\naby nat_ordsucc nat_0.\n"));
    let stats = ProofStats::measure(&m.dev);
    assert_eq!(stats.single_aby, dev.theorems.len());
    assert_eq!(stats.multi_aby, 0);
}

#[test]
fn report_percentages() {
    assert_eq!(percent(32675, 41738, 1), "78.3%");
    assert_eq!(percent(3223, 3401, 1), "94.8%");
    assert_eq!(percent(159363, 346152, 0), "46%");
    assert_eq!(TextStats::from_counts(346152, 159363).ratio, "46%");
    assert_eq!(percent(1, 8, 1), "12.5%");
    assert_eq!(percent(0, 0, 1), "n/a");

    let mut rs = Vec::new();
    for i in 0..10 {
        let id = format!("p{}", i);
        rs.push(result(
            &id,
            "a",
            if i < 5 { Szs::Theorem } else { Szs::GaveUp },
        ));
        rs.push(result(
            &id,
            "b",
            if i >= 5 { Szs::Theorem } else { Szs::Timeout },
        ));
    }
    let r = report(&rs, ReportMode::Bushy, None);
    assert_eq!(r.problems, 10);
    assert_eq!(r.union.percentage, "100.0%");
    assert!(r.provers.iter().all(|l| l.percentage == "50.0%"));
    let table = r.render_table();
    assert!(
        table.contains("union") && table.contains("100.0%"),
        "{}",
        table
    );
    let back: CoverageReport = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(back, r);
}

fn minimized_with_holes() -> Minimized {
    let dev = mini();
    let g = gen_bushy(&dev).unwrap().candidates;
    let results: Vec<RunResult> = g
        .iter()
        .filter(|c| {
            matches!(
                c.theorem.as_str(),
                "ordinal_ordsucc_ordsucc" | "and_comm" | "nat_1"
            )
        })
        .filter(|c| c.text.starts_with("exact"))
        .map(|c| result(&c.id, "m", Szs::Theorem))
        .collect();
    minimize(&bootstrap(), MINI, &results, &Overrides::default()).unwrap()
}

#[test]
fn verify_aby_with_mocks() {
    let m = minimized_with_holes();
    let holes = m.dev.hole_count();
    assert_eq!(holes, 5);
    let tmp = tempfile::tempdir().unwrap();

    let all = mock(tmp.path(), "ho", Dialect::Th0, r#"{"*": {}}"#);
    let v = verify_aby(&m.dev, &Schedule::even(vec![all], 2.0), tmp.path(), 4).unwrap();
    assert_eq!(v.len(), holes);
    assert!(v.iter().all(|x| x.justified));

    let one_id = v[0].id.clone();
    let table = format!(r#"{{"{}": {{"status": "GaveUp"}}, "*": {{}}}}"#, one_id);
    let picky = mock(tmp.path(), "picky", Dialect::Th0, &table);
    let v = verify_aby(&m.dev, &Schedule::even(vec![picky], 2.0), tmp.path(), 4).unwrap();
    let bad: Vec<_> = v
        .iter()
        .filter(|x| !x.justified)
        .map(|x| x.id.clone())
        .collect();
    assert_eq!(bad, [one_id]);

    // Only the first-order prover can prove anything.
    let ho = mock(
        tmp.path(),
        "ho_fails",
        Dialect::Th0,
        r#"{"*": {"status": "GaveUp"}}"#,
    );
    let fo = mock(tmp.path(), "fo", Dialect::Fof, r#"{"*": {}}"#);
    let v = verify_aby(&m.dev, &Schedule::even(vec![ho, fo], 2.0), tmp.path(), 4).unwrap();
    for x in &v {
        let fo_ok = x.theorem != "and_comm";
        assert_eq!(x.justified, fo_ok, "{}", x.id);
        if fo_ok {
            assert_eq!(x.prover.as_deref(), Some("fo"));
        }
    }
}
