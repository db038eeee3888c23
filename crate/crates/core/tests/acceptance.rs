//! One line per acceptance criterion, each under a pinned wall-clock limit.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{mini, mock, MINI};
use hammerforge::basis::bootstrap;
use hammerforge::driver::{
    emit, run_batch, run_prover, Dialect, RunResult, Schedule, Szs, UsedAxioms, GRACE,
};
use hammerforge::hammer::{
    aby_bundles, aby_text, gen_bushy, maximal_solved, minimize, percent, select_maximal, Overrides,
    Status, TextStats,
};
use hammerforge::kernel::{
    alpha_eq, beta_eta, check_proof, convertible, names, normalize, typecheck, Binder, Context,
    ProofTerm, Signature, Term, Type,
};
use hammerforge::reconstruct::{parse_dedukti, recover_names, scaffold, splice, Role};
use hammerforge::script::{elaborate, parse_script, walk_tactics, Span};
use hammerforge::session::{handle_line, Service, ServiceConfig};
use hammerforge::tptp::{
    build_bundle, fo_fragment, mangle, parse_th0, to_fof, to_th0, unmangle, Mode, Origin,
    ProblemBundle,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

type Criterion = (&'static str, Duration, fn());

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        (
            "kernel fixture and mutants",
            Duration::from_secs(1),
            kernel_fixture,
        ),
        (
            "kernel properties on 1000 random terms",
            Duration::from_secs(30),
            kernel_properties,
        ),
        (
            "first-order fragment and export",
            Duration::from_secs(1),
            fragment_and_export,
        ),
        ("name mangling round trip", Duration::from_secs(5), mangling),
        ("supersede filtering", Duration::from_secs(10), supersede),
        (
            "pipeline on the mini corpus",
            Duration::from_secs(30),
            pipeline,
        ),
        (
            "report arithmetic",
            Duration::from_secs(1),
            report_arithmetic,
        ),
        (
            "driver timeout contract",
            Duration::from_secs(20),
            driver_contract,
        ),
        (
            "proof reconstruction",
            Duration::from_secs(5),
            reconstruction,
        ),
        ("session end to end", Duration::from_secs(10), session),
    ];
    let mut failed = Vec::new();
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let took = start.elapsed();
        let verdict = match outcome {
            Ok(()) if took <= limit => "PASS",
            Ok(()) => "FAIL (too slow)",
            Err(_) => "FAIL",
        };
        println!(
            "{:<16} {:<40} {:>7.3}s / {}s",
            verdict,
            name,
            took.as_secs_f64(),
            limit.as_secs()
        );
        if verdict != "PASS" {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed: {:?}", failed);
}

// ---------------------------------------------------------------- kernel

fn v(n: &str) -> Term {
    Term::free(n)
}

fn and(a: Term, b: Term) -> Term {
    Term::apps(Term::cnst(names::AND), [a, b])
}

/// `λA B a b p H. H a b` with its binders' types as given.
fn pairing(a_ty: Type, a_hyp: Term, h_hyp: Term, body: ProofTerm) -> ProofTerm {
    ProofTerm::tlam(
        "A",
        a_ty,
        ProofTerm::tlam(
            "B",
            Type::Prop,
            ProofTerm::plam(
                "a",
                a_hyp,
                ProofTerm::plam(
                    "b",
                    v("B"),
                    ProofTerm::tlam("p", Type::Prop, ProofTerm::plam("H", h_hyp, body)),
                ),
            ),
        ),
    )
}

fn kernel_fixture() {
    let sig = bootstrap();
    let claim = Term::forall(
        "A",
        Type::Prop,
        Term::forall(
            "B",
            Type::Prop,
            Term::imps([v("A"), v("B")], and(v("A"), v("B"))),
        ),
    );
    let h_ty = Term::imps([v("A"), v("B")], v("p"));
    let hab = ProofTerm::hyp("H")
        .papp(ProofTerm::hyp("a"))
        .papp(ProofTerm::hyp("b"));
    let good = pairing(Type::Prop, v("A"), h_ty.clone(), hab.clone());
    let rep = check_proof(&sig, &Context::default(), &good, &claim).unwrap();
    assert!(rep.is_complete());

    let hyp = ProofTerm::hyp;
    let mutants = [
        pairing(
            Type::Prop,
            v("A"),
            h_ty.clone(),
            hyp("H").papp(hyp("b")).papp(hyp("a")),
        ),
        pairing(
            Type::Prop,
            v("A"),
            h_ty.clone(),
            hyp("H").papp(hyp("a")).papp(hyp("a")),
        ),
        pairing(Type::Prop, v("A"), h_ty.clone(), hyp("H").papp(hyp("a"))),
        pairing(Type::Prop, v("A"), h_ty.clone(), hyp("a").papp(hyp("b"))),
        pairing(Type::Prop, v("A"), h_ty.clone(), hyp("p")),
        pairing(
            Type::Prop,
            v("A"),
            h_ty.clone(),
            hyp("H").tapp(v("A")).papp(hyp("a")).papp(hyp("b")),
        ),
        pairing(Type::Set, v("A"), h_ty.clone(), hab.clone()),
        pairing(Type::Prop, v("B"), h_ty.clone(), hab.clone()),
        pairing(
            Type::Prop,
            v("A"),
            Term::imps([v("A"), v("B")], v("A")),
            hab.clone(),
        ),
        // The `p` abstraction dropped: `H` mentions an unbound variable.
        ProofTerm::tlam(
            "A",
            Type::Prop,
            ProofTerm::tlam(
                "B",
                Type::Prop,
                ProofTerm::plam(
                    "a",
                    v("A"),
                    ProofTerm::plam("b", v("B"), ProofTerm::plam("H", h_ty, hab)),
                ),
            ),
        ),
    ];
    for (i, m) in mutants.iter().enumerate() {
        assert!(
            check_proof(&sig, &Context::default(), m, &claim).is_err(),
            "mutant {} accepted",
            i
        );
    }
}

fn set_to(t: Type) -> Type {
    Type::arrow(Type::Set, t)
}

/// Types with a context variable each, so every generated leaf has a witness.
fn type_pool() -> Vec<(&'static str, Type)> {
    vec![
        ("x", Type::Set),
        ("p", Type::Prop),
        ("f", set_to(Type::Set)),
        ("P", set_to(Type::Prop)),
        ("R", set_to(set_to(Type::Prop))),
        ("n", Type::arrow(Type::Prop, Type::Prop)),
        ("Q", Type::arrow(set_to(Type::Prop), Type::Prop)),
    ]
}

struct TermGen {
    rng: StdRng,
    pool: Vec<Type>,
    /// Context variables and signature constants.
    leaves: Vec<(Term, Type)>,
    fresh: usize,
}

impl TermGen {
    fn new(sig: &Signature, ctx: &Context, seed: u64) -> Self {
        let mut leaves: Vec<(Term, Type)> = ctx
            .vars
            .iter()
            .map(|(n, t)| (Term::Free(n.clone()), t.clone()))
            .collect();
        for e in sig.entries() {
            if let Some(ty) = e.const_type() {
                leaves.push((Term::Const(e.name().clone()), ty.clone()));
            }
        }
        TermGen {
            rng: StdRng::seed_from_u64(seed),
            pool: type_pool().into_iter().map(|(_, t)| t).collect(),
            leaves,
            fresh: 0,
        }
    }

    fn pick_type(&mut self) -> Type {
        self.pool[self.rng.random_range(0..self.pool.len())].clone()
    }

    fn binder(&mut self, ty: Type) -> Binder {
        self.fresh += 1;
        Binder::new(format!("v{}", self.fresh), ty)
    }

    fn term(&mut self, ty: &Type, depth: usize, env: &mut Vec<Type>) -> Term {
        let mut leaves: Vec<Term> = env
            .iter()
            .rev()
            .enumerate()
            .filter(|(_, t)| *t == ty)
            .map(|(i, _)| Term::Bound(i as u32))
            .collect();
        leaves.extend(
            self.leaves
                .iter()
                .filter(|(_, t)| t == ty)
                .map(|(l, _)| l.clone()),
        );
        if !leaves.is_empty() && (depth == 0 || self.rng.random_bool(0.3)) {
            return leaves[self.rng.random_range(0..leaves.len())].clone();
        }
        if let Type::Arrow(dom, cod) = ty {
            if depth == 0 || self.rng.random_bool(0.5) {
                let b = self.binder((**dom).clone());
                env.push((**dom).clone());
                let body = self.term(cod, depth.saturating_sub(1), env);
                env.pop();
                return Term::Lam(b, Arc::new(body));
            }
        }
        if *ty == Type::Prop && self.rng.random_bool(0.4) {
            if self.rng.random_bool(0.5) {
                let a = self.term(ty, depth - 1, env);
                let b = self.term(ty, depth - 1, env);
                return Term::imp(a, b);
            }
            let bty = self.pick_type();
            let b = self.binder(bty.clone());
            env.push(bty);
            let body = self.term(ty, depth - 1, env);
            env.pop();
            return Term::All(b, Arc::new(body));
        }
        let arg = self.pick_type();
        let f = self.term(&Type::arrow(arg.clone(), ty.clone()), depth - 1, env);
        let a = self.term(&arg, depth - 1, env);
        Term::app(f, a)
    }
}

/// Recomputes binder display names; identity must not depend on them.
fn rename(t: &Term, k: &mut usize) -> Term {
    *k += 1;
    let fresh = |ty: &Type, k: usize| Binder::new(format!("w{}", k), ty.clone());
    match t {
        Term::App(f, a) => Term::app(rename(f, k), rename(a, k)),
        Term::Imp(a, b) => Term::imp(rename(a, k), rename(b, k)),
        Term::Lam(b, body) => Term::Lam(fresh(&b.ty, *k), Arc::new(rename(body, k))),
        Term::All(b, body) => Term::All(fresh(&b.ty, *k), Arc::new(rename(body, k))),
        _ => t.clone(),
    }
}

fn kernel_properties() {
    let sig = bootstrap();
    let mut ctx = Context::default();
    for (n, t) in type_pool() {
        ctx.push_var(n.into(), t).unwrap();
    }
    let mut g = TermGen::new(&sig, &ctx, 2024);
    let mut checked = 0;
    let mut redexes = 0;
    while checked < 1000 {
        let ty = g.pick_type();
        let t = g.term(&ty, 5, &mut Vec::new());
        if t.depth() > 6 {
            continue;
        }
        checked += 1;
        assert_eq!(typecheck(&sig, &ctx, &t).unwrap(), ty, "{:?}", t);

        let defs: HashSet<String> = t
            .consts()
            .iter()
            .filter(|c| sig.is_def(c))
            .map(|c| c.to_string())
            .collect();
        let n = normalize(&sig, &t, &defs).unwrap();
        assert_eq!(typecheck(&sig, &ctx, &n).unwrap(), ty, "{:?} ~> {:?}", t, n);
        assert_eq!(normalize(&sig, &n, &defs).unwrap(), n);
        let b = beta_eta(&t);
        assert_eq!(typecheck(&sig, &ctx, &b).unwrap(), ty);
        assert_eq!(beta_eta(&b), b);
        assert!(convertible(&sig, &t, &n));
        if b != t {
            redexes += 1;
        }

        let r = rename(&t, &mut 0);
        assert!(alpha_eq(&t, &r) && alpha_eq(&r, &t));
        assert!(alpha_eq(&normalize(&sig, &r, &defs).unwrap(), &n));
        let head = v("f");
        assert!(alpha_eq(
            &Term::app(head.clone(), t.clone()),
            &Term::app(head, r.clone())
        ));
        assert!(alpha_eq(
            &Term::imp(t.clone(), t.clone()),
            &Term::imp(r.clone(), r)
        ));
        if let Term::Lam(bd, body) | Term::All(bd, body) = &t {
            let reopened = body.open("fresh").close("fresh");
            assert!(alpha_eq(&reopened, body), "{:?}", bd);
        }
    }
    // The generator must exercise the reduction rules, not only typing.
    assert!(redexes > 100, "only {} terms had redexes", redexes);
}

// ---------------------------------------------------------------- export

fn golden(name: &str) -> String {
    std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name),
    )
    .unwrap()
}

fn ordinal_bundle() -> ProblemBundle {
    let dev = mini();
    let t = dev.theorem("ordinal_ordsucc_ordsucc").unwrap();
    let s = t
        .sites
        .iter()
        .find(|s| MINI[s.span.start..].starts_with("exact ordinal_ordsucc alpha Ha"))
        .unwrap();
    build_bundle(
        &dev.sig_before(&t.name),
        &s.goal,
        &s.deps.aby_names(),
        "ordinal_ordsucc_ordsucc#3",
        Mode::Bushy,
        Origin {
            theorem: t.name.clone(),
            span: Some(s.replace_span()),
        },
    )
    .unwrap()
}

fn fragment_and_export() {
    let b = ordinal_bundle();
    let fo = fo_fragment(&b).expect("first-order");
    let th0 = to_th0(&b);
    assert_eq!(th0, golden("ordinal_ordsucc.th0.p"));
    assert_eq!(to_fof(&fo), golden("ordinal_ordsucc.fof.p"));
    assert!(th0.contains("axiom_ordinal_5Fordsucc"));

    let back = parse_th0(&th0).unwrap();
    assert!(alpha_eq(&back.conjecture, &b.conjecture));
    assert_eq!(back.axioms.len(), b.axioms.len());
    for (x, y) in back.axioms.iter().zip(&b.axioms) {
        assert_eq!(x.name, y.name);
        assert!(alpha_eq(&x.term, &y.term));
    }

    let dev = mini();
    let t = dev.theorem("and_comm").unwrap();
    let s = &t.sites[0];
    let ho = build_bundle(
        &dev.sig_before(&t.name),
        &s.goal,
        &s.deps.aby_names(),
        "and_comm#0",
        Mode::Bushy,
        Origin::default(),
    )
    .unwrap();
    let e = fo_fragment(&ho).unwrap_err();
    assert_eq!(e.reason, "quantifier over prop");
    assert!(!e.formula.is_empty() && !e.subterm.is_empty());
}

fn mangling() {
    let mut rng = StdRng::seed_from_u64(99);
    let alphabet: Vec<char> = "abcuzAZ09_'.-$ éλ∀".chars().collect();
    let mut ids = BTreeSet::new();
    while ids.len() < 10_000 {
        let len = rng.random_range(1..=12);
        let id: String = (0..len)
            .map(|_| alphabet[rng.random_range(0..alphabet.len())])
            .collect();
        ids.insert(id);
    }
    let mut images = HashSet::new();
    for id in &ids {
        let m = mangle(id);
        assert!(m.bytes().next().unwrap().is_ascii_lowercase(), "{}", m);
        assert!(
            m.bytes().all(|c| c.is_ascii_alphanumeric() || c == b'_'),
            "{}",
            m
        );
        assert_eq!(&unmangle(&m).unwrap(), id);
        images.insert(m);
    }
    assert_eq!(images.len(), ids.len());
    assert!(mangle("ordinal_ordsucc").contains("ordinal_5Fordsucc"));
}

// ---------------------------------------------------------------- hammer

/// The best selection by exhaustive search: solved, pairwise disjoint,
/// covering the most characters with the fewest calls.
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

fn random_forest(rng: &mut StdRng) -> Vec<Span> {
    let n = rng.random_range(1..=10);
    let mut spans: Vec<Span> = Vec::new();
    let mut tries = 0;
    while spans.len() < n && tries < 1000 {
        tries += 1;
        let a = rng.random_range(0..60);
        let b = rng.random_range(a + 1..=61);
        let s = Span::new(a, b);
        let nested_or_apart = spans.iter().all(|t| {
            *t != s && (t.contains(&s) || s.contains(t) || t.end <= s.start || s.end <= t.start)
        });
        if nested_or_apart {
            spans.push(s);
        }
    }
    spans
}

fn supersede() {
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
                g[i].status = Status::Solved("mock".into());
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
    }

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

/// Non-bullet tactics, counted straight off the parse tree.
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

fn pipeline() {
    let dev = mini();
    assert!(dev.theorems.len() >= 12);
    assert!(MINI.contains("apply In_irref delta.") && MINI.contains("claim Lsa"));
    let cands = gen_bushy(&dev).unwrap().candidates;
    assert!(cands.len() >= 60);
    assert_eq!(cands.len(), tactic_count(MINI));

    let tmp = tempfile::tempdir().unwrap();
    let prover = mock(tmp.path(), "m", Dialect::Th0, r#"{"*": {"ratio": 0.8}}"#);
    let bundles: Vec<ProblemBundle> = cands.iter().map(|c| c.bundle.clone()).collect();
    let outcomes = run_batch(
        &bundles,
        &Schedule::even(vec![prover], 5.0),
        &tmp.path().join("w"),
        8,
    )
    .unwrap();
    let results: Vec<RunResult> = outcomes.iter().flat_map(|o| o.results().cloned()).collect();
    let solved = results.iter().filter(|r| r.szs == Szs::Theorem).count();
    let share = solved as f64 / cands.len() as f64;
    assert!(
        (0.65..=0.95).contains(&share),
        "{} of {} solved",
        solved,
        cands.len()
    );

    let m = minimize(&bootstrap(), MINI, &results, &Overrides::default()).unwrap();
    let again = elaborate(&bootstrap(), &m.rewritten.text);
    assert!(again.is_ok(), "{:?}", again.errors);
    assert_eq!(again.hole_count(), m.plan.chosen.len());

    let placed = aby_bundles(&again).unwrap();
    assert_eq!(placed.len(), m.plan.chosen.len());
    for ((verdict, b), &i) in placed.iter().zip(&m.plan.chosen) {
        let want = &m.candidates[i].bundle;
        let b = b.as_ref().expect("every call is past the frontier");
        assert!(alpha_eq(&b.conjecture, &want.conjecture), "{}", verdict.id);
        let got: BTreeSet<&str> = b.dependency_names().into_iter().collect();
        let planned: BTreeSet<&str> = want.dependency_names().into_iter().collect();
        assert_eq!(got, planned, "{}", verdict.id);
    }

    // Independent count: each chosen span is replaced by its `aby` line.
    let original = MINI.chars().count();
    let mut rewritten = original;
    for &i in &m.plan.chosen {
        let c = &m.candidates[i];
        rewritten = rewritten - MINI[c.span.start..c.span.end].chars().count()
            + aby_text(&c.aby_deps).chars().count();
    }
    assert_eq!(m.text, TextStats::from_counts(original, rewritten));
    assert_eq!(m.text.ratio, percent(rewritten as u64, original as u64, 0));
}

fn report_arithmetic() {
    assert_eq!(percent(32675, 41738, 1), "78.3%");
    assert_eq!(percent(3223, 3401, 1), "94.8%");
    assert_eq!(percent(159363, 346152, 0), "46%");
    assert_eq!(TextStats::from_counts(346152, 159363).ratio, "46%");
}

// ---------------------------------------------------------------- driver

const PROOF_EXCERPT: &str = r#"
{|axiom_ordinal_5Fordsucc9|}:
  Prf (forall iota
           (0 : El iota =>
                 (imp ({|ordinal|} 0)
                      ({|ordinal|} ({|ordsucc|} 0))))).

{|axiom_c_Ha16|}: Prf ({|ordinal|} {|alpha|}).

{|axiom_18|}: Prf (not ({|ordinal|} ({|ordsucc|} {|alpha|}))).
"#;

fn driver_contract() {
    let b = ordinal_bundle();
    let tmp = tempfile::tempdir().unwrap();
    let files = emit(&b, tmp.path()).unwrap();
    let run = |name: &str, table: &str, limit: f64| {
        let p = mock(tmp.path(), name, Dialect::Th0, table);
        run_prover(
            &p,
            &b.id,
            &files.th0,
            limit,
            Some(&UsedAxioms::for_bundle(&b)),
        )
        .unwrap()
    };

    let r = run("yes", r#"{"*": {}}"#, 5.0);
    assert_eq!(r.szs, Szs::Theorem);
    assert_eq!(r.used_axioms, ["ordinal_ordsucc", "Ha"]);

    let start = Instant::now();
    let r = run("slow", r#"{"*": {"sleep": 60, "spawn_child": true}}"#, 0.5);
    assert_eq!(r.szs, Szs::Timeout);
    assert!(start.elapsed() < Duration::from_secs_f64(0.5) + GRACE + Duration::from_secs(1));

    assert_eq!(
        run("quiet", r#"{"*": {"silent": true}}"#, 5.0).szs,
        Szs::Unknown
    );

    let used = UsedAxioms::for_bundle(&b).extract(PROOF_EXCERPT);
    let got: BTreeSet<&str> = used.names.iter().map(String::as_str).collect();
    assert_eq!(got, BTreeSet::from(["ordinal_ordsucc", "Ha"]));
    assert!(!used.incomplete);
}

// ---------------------------------------------------------------- reconstruct

fn reconstruction() {
    let text = MINI.replace(
        "{ exact ordinal_ordsucc alpha Ha. }",
        "{ aby ordinal_ordsucc Ha. }",
    );
    let dev = elaborate(&bootstrap(), &text);
    assert!(dev.is_ok(), "{:?}", dev.errors);
    let t = dev.theorem("ordinal_ordsucc_ordsucc").unwrap();
    let a = &t.abys[0];
    let sig = dev.sig_before(&t.name);
    let origin = Origin {
        theorem: t.name.clone(),
        span: Some(a.span),
    };
    let b = build_bundle(&sig, &a.goal, &a.deps, "lsa", Mode::Bushy, origin).unwrap();

    assert_eq!(parse_dedukti(PROOF_EXCERPT).unwrap().len(), 3);
    let refutation = format!(
        "{}def s1 : Prf false :=\n  {{|axiom_18|}} ({{|axiom_ordinal_5Fordsucc9|}} {{|alpha|}} {{|axiom_c_Ha16|}}).\n",
        PROOF_EXCERPT
    );
    let decls = parse_dedukti(&refutation).unwrap();
    let rec = recover_names(&decls, &b);
    let roles: BTreeSet<String> = rec
        .roles
        .values()
        .filter_map(|r| match r {
            Role::Axiom(n) => Some(n.clone()),
            Role::NegatedConjecture => Some("NegatedConjecture".into()),
            _ => None,
        })
        .collect();
    assert_eq!(
        roles,
        BTreeSet::from([
            "Ha".into(),
            "NegatedConjecture".into(),
            "ordinal_ordsucc".into()
        ])
    );

    let sk = scaffold(&sig, &a.goal, &b, &decls, &rec).unwrap();
    let audit = sk.audit();
    assert_eq!((audit.steps, audit.holes), (1, 0));
    let full = splice(t.proof.as_ref().unwrap(), &a.id, &sk);
    assert!(check_proof(&sig, &Context::default(), &full, &t.prop)
        .unwrap()
        .is_complete());
}

// ---------------------------------------------------------------- session

fn session() {
    const LSA_PROOF: &str = "exact ordinal_ordsucc alpha Ha.";
    let tmp = tempfile::tempdir().unwrap();
    let prover = mock(
        tmp.path(),
        "m",
        Dialect::Th0,
        r#"{"*": {"used": ["Ha", "ordinal_ordsucc"]}}"#,
    );
    let svc = Service::new(ServiceConfig {
        base: bootstrap(),
        schedule: Schedule::even(vec![prover], 5.0),
        workdir: tmp.path().join("work"),
    });
    let mut id = 0;
    let mut call = |method: &str, params: Value| -> Value {
        id += 1;
        let line = handle_line(
            &svc,
            &json!({ "id": id, "method": method, "params": params }).to_string(),
        );
        let resp: Value = serde_json::from_str(&line).unwrap();
        assert!(resp.get("error").is_none(), "{}", resp);
        resp["result"].clone()
    };

    let s = call("open", json!({ "text": MINI }))["session"].clone();
    let at = MINI.find(LSA_PROOF).unwrap();
    call(
        "edit",
        json!({ "session": s, "revision": 0, "start": at, "end": at + LSA_PROOF.len(), "text": "" }),
    );
    let goal = call("goalAt", json!({ "session": s, "offset": at }));
    assert_eq!(goal["goal"]["conclusion"], json!("ordinal (ordsucc alpha)"));

    let job = call(
        "hammerAt",
        json!({ "session": s, "offset": at, "mode": "chainy" }),
    );
    let done = call("poll", json!({ "job": job["job"], "wait": 8 }));
    assert_eq!(done["status"], json!("done"), "{}", done);
    assert_eq!(done["abyText"], json!("aby ordinal_ordsucc Ha."));

    call(
        "edit",
        json!({ "session": s, "revision": 1, "start": at, "end": at, "text": done["abyText"] }),
    );
    let after = call("checkPrefix", json!({ "session": s }));
    assert_eq!(after["diagnostics"], json!([]), "{}", after);
}
