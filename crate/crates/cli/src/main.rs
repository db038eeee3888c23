use std::collections::BTreeSet;
use std::fs;
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hammerforge::basis::{bootstrap, bootstrap_intuitionistic, require_xm_proof};
use hammerforge::driver::{
    append_results, default_jobs, emit, file_stem, read_results, run_files, Dialect, Emitted,
    Registry, Schedule, ScheduleOutcome, REGISTRY_ENV,
};
use hammerforge::hammer::{
    gen_bushy, gen_chainy, minimize, report, verify_aby, Overrides, ProofStats, ReportMode,
    TextStats,
};
use hammerforge::kernel::Signature;
use hammerforge::reconstruct::{parse_dedukti, recover_names, scaffold};
use hammerforge::script::{elaborate, Development};
use hammerforge::session::{serve_stdio, serve_tcp, serve_ws, Service, ServiceConfig};
use hammerforge::tptp::{
    build_bundle, connective_defs, parse_th0, to_th0_literal, Mode, Origin, ProblemBundle,
};

#[derive(Parser)]
#[command(
    name = "hammerforge",
    version,
    about = "Higher-order set theory scripts with an ATP hammer"
)]
struct Cli {
    /// Worker threads for generation and prover runs.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Base signature scripts are checked against.
    #[arg(long, global = true, value_enum, default_value_t = Basis::Classical)]
    basis: Basis,
    /// Fail unless excluded middle has a kernel-checked proof.
    #[arg(long, global = true)]
    require_xm_proof: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Basis {
    /// Excluded middle included as a trusted theorem.
    Classical,
    /// No excluded middle; a script may prove `xm` itself.
    Intuitionistic,
}

#[derive(Args)]
struct ProverArgs {
    /// Prover registry (TOML); defaults to $HAMMERFORGE_PROVERS, then ./provers.toml.
    #[arg(long)]
    registry: Option<PathBuf>,
    /// Run this registry schedule instead of every prover on its own.
    #[arg(long)]
    schedule: Option<String>,
    /// Restrict to these provers.
    #[arg(long = "prover")]
    provers: Vec<String>,
    /// Seconds per prover when no schedule is given.
    #[arg(long, default_value_t = 60.0)]
    timeout: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Elaborate and kernel-check a script.
    Check { file: PathBuf },
    /// Write one premise-selected problem per tactic.
    Bushy {
        file: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Render connectives by their definitions instead of natively.
        #[arg(long)]
        literal_defs: bool,
    },
    /// Write one problem per tactic citing the whole preceding development.
    Chainy {
        file: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long)]
        literal_defs: bool,
    },
    /// Run provers on the problems in a directory.
    Solve {
        dir: PathBuf,
        #[command(flatten)]
        provers: ProverArgs,
        /// Results file (JSON lines, appended); defaults to DIR/results.jsonl.
        #[arg(long)]
        results: Option<PathBuf>,
    },
    /// Replace the largest solved subproofs by `aby` calls.
    Minimize {
        file: PathBuf,
        #[arg(long)]
        results: Vec<PathBuf>,
        #[arg(short, long)]
        out: PathBuf,
        /// Candidate ids to use even if unsolved.
        #[arg(long)]
        pin: Vec<String>,
        /// Candidate ids never to use.
        #[arg(long)]
        exclude: Vec<String>,
    },
    /// Ask provers to justify every `aby` call of a script.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        provers: ProverArgs,
        /// Where problem files go.
        #[arg(long)]
        workdir: PathBuf,
        #[arg(long)]
        results: Option<PathBuf>,
    },
    /// Coverage table from results files.
    Report {
        results: Vec<PathBuf>,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Total problem count; defaults to the distinct ids in the results.
        #[arg(long)]
        problems: Option<usize>,
        /// With --rewritten, adds text and proof statistics.
        #[arg(long, requires = "rewritten")]
        original: Option<PathBuf>,
        #[arg(long, requires = "original")]
        rewritten: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Turn a Dedukti proof of an `aby` obligation into a proof skeleton.
    /// Exits 0 when every step checks and 2 when holes remain.
    Reconstruct {
        proof: PathBuf,
        /// Script containing the `aby` call.
        #[arg(long)]
        script: PathBuf,
        /// Byte offset inside the `aby` call.
        #[arg(long)]
        goal_at: usize,
        /// The TH0 problem the prover saw; rebuilt from the script when absent.
        #[arg(long)]
        problem: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Serve the session protocol.
    Serve {
        #[arg(long, conflicts_with_all = ["listen", "ws"])]
        stdio: bool,
        /// Line protocol over TCP, e.g. 127.0.0.1:7300.
        #[arg(long, conflicts_with = "ws")]
        listen: Option<String>,
        /// Websocket bridge on this local port.
        #[arg(long)]
        ws: Option<u16>,
        #[command(flatten)]
        provers: ProverArgs,
        /// Where hammer problems go; defaults to a directory under the system temp dir.
        #[arg(long)]
        workdir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Bushy,
    Chainy,
    Aby,
}

impl From<ModeArg> for ReportMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Bushy => ReportMode::Bushy,
            ModeArg::Chainy => ReportMode::Chainy,
            ModeArg::Aby => ReportMode::Aby,
        }
    }
}

struct Ctx {
    jobs: usize,
    base: Signature,
    require_xm_proof: bool,
}

impl Ctx {
    fn load(&self, file: &Path) -> Result<Development> {
        let text =
            fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
        let dev = elaborate(&self.base, &text);
        for e in &dev.errors {
            eprintln!("{}:{}", file.display(), e);
        }
        if !dev.is_ok() {
            bail!("{} error(s) in {}", dev.errors.len(), file.display());
        }
        if self.require_xm_proof {
            require_xm_proof(&dev.sig)?;
        }
        Ok(dev)
    }
}

fn registry(path: &Option<PathBuf>) -> Result<Registry> {
    Ok(match path {
        Some(p) => Registry::load(p)?,
        None => Registry::load_default(Path::new("provers.toml")).with_context(|| {
            format!(
                "no prover registry (use --registry or set {})",
                REGISTRY_ENV
            )
        })?,
    })
}

/// Either the named schedule (one entry) or each selected prover alone.
fn schedules(args: &ProverArgs) -> Result<Vec<Schedule>> {
    let reg = registry(&args.registry)?;
    if let Some(name) = &args.schedule {
        return Ok(vec![reg.schedule(name)?]);
    }
    let provers = if args.provers.is_empty() {
        reg.provers.clone()
    } else {
        args.provers
            .iter()
            .map(|n| reg.prover(n).cloned())
            .collect::<Result<_, _>>()?
    };
    if provers.is_empty() {
        bail!("the registry lists no provers");
    }
    provers
        .into_iter()
        .map(|p| Ok(Schedule::new(vec![(p, args.timeout)], args.timeout)?))
        .collect()
}

/// A single schedule: the named one, or the selected provers one after another.
fn one_schedule(args: &ProverArgs) -> Result<Schedule> {
    let mut all = schedules(args)?;
    if all.len() == 1 {
        return Ok(all.remove(0));
    }
    let slices: Vec<_> = all.into_iter().flat_map(|s| s.slices).collect();
    let budget = slices.iter().map(|s| s.1).sum();
    Ok(Schedule::new(slices, budget)?)
}

fn write_problems(
    dev: &Development,
    bundles: &[ProblemBundle],
    out: &Path,
    literal: bool,
) -> Result<()> {
    for b in bundles {
        let files = emit(b, out)?;
        if literal {
            let text = to_th0_literal(b, &connective_defs(&dev.sig, b));
            fs::write(&files.th0, text)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let ctx = Ctx {
        jobs: cli.jobs.unwrap_or_else(default_jobs).max(1),
        base: match cli.basis {
            Basis::Classical => bootstrap(),
            Basis::Intuitionistic => bootstrap_intuitionistic(),
        },
        require_xm_proof: cli.require_xm_proof,
    };
    match cli.command {
        Command::Check { file } => {
            let dev = ctx.load(&file)?;
            println!(
                "{}: {} theorem(s), {} aby call(s)",
                file.display(),
                dev.theorems.len(),
                dev.hole_count()
            );
        }
        Command::Bushy {
            file,
            out,
            literal_defs,
        } => {
            let dev = ctx.load(&file)?;
            let g = gen_bushy(&dev)?;
            let bundles: Vec<ProblemBundle> =
                g.candidates.iter().map(|c| c.bundle.clone()).collect();
            write_problems(&dev, &bundles, &out, literal_defs)?;
            println!(
                "{} problem(s) in {} ({} site(s) skipped, {} before the classical frontier)",
                bundles.len(),
                out.display(),
                g.skipped,
                g.gated
            );
        }
        Command::Chainy {
            file,
            out,
            literal_defs,
        } => {
            let dev = ctx.load(&file)?;
            let bundles = gen_chainy(&dev)?;
            write_problems(&dev, &bundles, &out, literal_defs)?;
            println!("{} problem(s) in {}", bundles.len(), out.display());
        }
        Command::Solve {
            dir,
            provers,
            results,
        } => {
            let results = results.unwrap_or_else(|| dir.join("results.jsonl"));
            let problems = read_problems(&dir)?;
            let outcomes = solve(&problems, &schedules(&provers)?, ctx.jobs)?;
            let ran: Vec<_> = outcomes.iter().flat_map(|o| o.results().cloned()).collect();
            append_results(&results, &ran)?;
            let solved = outcomes.iter().filter(|o| o.success().is_some()).count();
            println!(
                "{}/{} problem(s) solved; results in {}",
                solved,
                problems.len(),
                results.display()
            );
        }
        Command::Minimize {
            file,
            results,
            out,
            pin,
            exclude,
        } => {
            let source = fs::read_to_string(&file)?;
            let mut all = Vec::new();
            for r in &results {
                all.extend(read_results(r)?);
            }
            let overrides = Overrides {
                pin: pin.into_iter().collect::<BTreeSet<_>>(),
                exclude: exclude.into_iter().collect::<BTreeSet<_>>(),
            };
            let m = minimize(&ctx.base, &source, &all, &overrides)?;
            fs::write(&out, &m.rewritten.text)?;
            println!(
                "{} aby call(s) placed, {} superseded; {} of {} characters remain ({})",
                m.rewritten.placed.len(),
                m.plan.superseded,
                m.text.rewritten_chars,
                m.text.original_chars,
                m.text.ratio
            );
        }
        Command::Verify {
            file,
            provers,
            workdir,
            results,
        } => {
            let dev = ctx.load(&file)?;
            let verdicts = verify_aby(&dev, &one_schedule(&provers)?, &workdir, ctx.jobs)?;
            let mut ran = Vec::new();
            for v in &verdicts {
                println!(
                    "{}\t{}\t{}",
                    v.id,
                    if v.justified {
                        "justified"
                    } else {
                        "unjustified"
                    },
                    v.prover.as_deref().or(v.note.as_deref()).unwrap_or("-")
                );
                if let Some(o) = &v.outcome {
                    ran.extend(o.results().cloned());
                }
            }
            if let Some(r) = results {
                append_results(&r, &ran)?;
            }
            let bad = verdicts.iter().filter(|v| !v.justified).count();
            if bad > 0 {
                eprintln!("{} of {} aby call(s) unjustified", bad, verdicts.len());
                return Ok(ExitCode::from(2));
            }
        }
        Command::Report {
            results,
            mode,
            problems,
            original,
            rewritten,
            json,
        } => {
            let mut all = Vec::new();
            for r in &results {
                all.extend(read_results(r)?);
            }
            let mut rep = report(&all, mode.into(), problems);
            if let (Some(o), Some(r)) = (original, rewritten) {
                let before = fs::read_to_string(&o)?;
                let after = ctx.load(&r)?;
                rep.text = Some(TextStats::measure(&before, &after.text));
                rep.proofs = Some(ProofStats::measure(&after));
            }
            if json {
                println!("{}", rep.to_json());
            } else {
                print!("{}", rep.render_table());
            }
        }
        Command::Reconstruct {
            proof,
            script,
            goal_at,
            problem,
            json,
        } => return reconstruct(&ctx, &proof, &script, goal_at, problem.as_deref(), json),
        Command::Serve {
            stdio,
            listen,
            ws,
            provers,
            workdir,
        } => {
            let schedule = one_schedule(&provers)?;
            let workdir = workdir.unwrap_or_else(|| {
                std::env::temp_dir().join(format!("hammerforge-serve-{}", std::process::id()))
            });
            let service = Arc::new(Service::new(ServiceConfig {
                base: ctx.base.clone(),
                schedule,
                workdir,
            }));
            match (stdio, listen, ws) {
                (_, Some(addr), _) => {
                    let l =
                        TcpListener::bind(&addr).with_context(|| format!("binding {}", addr))?;
                    eprintln!("listening on {}", l.local_addr()?);
                    serve_tcp(service, l)?;
                }
                (_, None, Some(port)) => {
                    let l = TcpListener::bind(("127.0.0.1", port))
                        .with_context(|| format!("binding port {}", port))?;
                    eprintln!("websocket bridge on ws://{}", l.local_addr()?);
                    serve_ws(service, l)?;
                }
                _ => serve_stdio(&service)?,
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Problems of a directory: each `*.th0.p` file, with its `*.fof.p` sibling
/// when there is one.
fn read_problems(dir: &Path) -> Result<Vec<(ProblemBundle, Emitted)>> {
    let suffix = format!(".{}", Dialect::Th0.extension());
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.to_string_lossy().ends_with(&suffix))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for th0 in paths {
        let text = fs::read_to_string(&th0)?;
        let b = parse_th0(&text).with_context(|| format!("parsing {}", th0.display()))?;
        let fof = dir.join(format!("{}.{}", file_stem(&b.id), Dialect::Fof.extension()));
        let fof = if fof.exists() {
            Ok(fof)
        } else {
            Err("no first-order version".to_string())
        };
        out.push((b, Emitted { th0, fof }));
    }
    Ok(out)
}

fn solve(
    problems: &[(ProblemBundle, Emitted)],
    schedules: &[Schedule],
    jobs: usize,
) -> Result<Vec<ScheduleOutcome>> {
    let finished = std::sync::Mutex::new(Vec::new());
    let next = std::sync::atomic::AtomicUsize::new(0);
    let work: Vec<(usize, usize)> = (0..problems.len())
        .flat_map(|p| (0..schedules.len()).map(move |s| (p, s)))
        .collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(work.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                let Some(&(p, s)) = work.get(i) else { break };
                let (b, files) = &problems[p];
                let r = run_files(b, files, &schedules[s]);
                finished.lock().unwrap().push((p, s, r));
            });
        }
    });
    let mut done = finished.into_inner().unwrap();
    done.sort_by_key(|(p, s, _)| (*p, *s));
    let mut out: Vec<ScheduleOutcome> = Vec::new();
    for (p, _, r) in done {
        let o = r?;
        match out.last_mut() {
            Some(last) if last.problem_id == problems[p].0.id => last.attempts.extend(o.attempts),
            _ => out.push(o),
        }
    }
    Ok(out)
}

fn reconstruct(
    ctx: &Ctx,
    proof: &Path,
    script: &Path,
    offset: usize,
    problem: Option<&Path>,
    json: bool,
) -> Result<ExitCode> {
    let dev = ctx.load(script)?;
    let t = dev
        .theorem_at(offset)
        .with_context(|| format!("offset {} is not inside a theorem", offset))?;
    let hole = t
        .abys
        .iter()
        .find(|a| a.span.start <= offset && offset < a.span.end)
        .with_context(|| format!("no aby call at offset {}", offset))?;
    let sig = dev.sig_before(&t.name);
    let bundle = match problem {
        Some(p) => parse_th0(&fs::read_to_string(p)?)
            .with_context(|| format!("parsing {}", p.display()))?,
        None => {
            let origin = Origin {
                theorem: t.name.clone(),
                span: Some(hole.span),
            };
            build_bundle(&sig, &hole.goal, &hole.deps, &hole.id, Mode::Bushy, origin)?
        }
    };
    let decls = parse_dedukti(&fs::read_to_string(proof)?)?;
    let rec = recover_names(&decls, &bundle);
    let sk = scaffold(&sig, &hole.goal, &bundle, &decls, &rec)?;
    let audit = sk.audit();
    if json {
        let v = serde_json::json!({
            "theorem": t.name,
            "hole": hole.id,
            "audit": audit,
            "recovered": rec,
            "skeleton": sk.render(),
        });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        print!("{}", sk.render());
        println!(
            "steps {}, checked {}, holes {}",
            audit.steps, audit.checked, audit.holes
        );
    }
    Ok(if audit.is_complete() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::FAILURE
        }
    }
}
