use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::run::{run_prover, RunResult};
use super::spec::{Dialect, ProverSpec, Schedule};
use super::used::UsedAxioms;
use super::DriverError;
use crate::tptp::{fo_fragment, to_fof, to_th0, ProblemBundle};

/// One slice of a schedule, as it went.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Attempt {
    Ran(RunResult),
    Skipped { prover: String, reason: String },
    Failed { prover: String, error: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleOutcome {
    pub problem_id: String,
    pub attempts: Vec<Attempt>,
}

impl ScheduleOutcome {
    pub fn success(&self) -> Option<&RunResult> {
        self.attempts.iter().find_map(|a| match a {
            Attempt::Ran(r) if r.szs.is_theorem() => Some(r),
            _ => None,
        })
    }

    pub fn results(&self) -> impl Iterator<Item = &RunResult> {
        self.attempts.iter().filter_map(|a| match a {
            Attempt::Ran(r) => Some(r),
            _ => None,
        })
    }
}

/// Problem files of a bundle, written on demand.
pub struct Emitted {
    pub th0: PathBuf,
    pub fof: Result<PathBuf, String>,
}

/// `bushy_nat_1_0`: the id with bytes outside `[A-Za-z0-9_.-]` percent-encoded.
pub fn file_stem(problem_id: &str) -> String {
    let mut out = String::new();
    for b in problem_id.bytes() {
        if b.is_ascii_alphanumeric() || matches!(b, b'_' | b'-' | b'.') {
            out.push(b as char);
        } else {
            out.push_str(&format!("%{:02X}", b));
        }
    }
    out
}

/// Writes the TH0 file and, when the bundle is first-order, the FOF file.
pub fn emit(b: &ProblemBundle, dir: &Path) -> Result<Emitted, DriverError> {
    std::fs::create_dir_all(dir).map_err(|e| DriverError::Io(e.to_string()))?;
    let stem = file_stem(&b.id);
    let th0 = dir.join(format!("{}.{}", stem, Dialect::Th0.extension()));
    std::fs::write(&th0, to_th0(b)).map_err(|e| DriverError::Io(e.to_string()))?;
    let fof = match fo_fragment(b) {
        Ok(fo) => {
            let p = dir.join(format!("{}.{}", stem, Dialect::Fof.extension()));
            std::fs::write(&p, to_fof(&fo)).map_err(|e| DriverError::Io(e.to_string()))?;
            Ok(p)
        }
        Err(nfo) => Err(nfo.to_string()),
    };
    Ok(Emitted { th0, fof })
}

/// Runs the slices in order until one proves the problem.
pub fn run_schedule(
    b: &ProblemBundle,
    schedule: &Schedule,
    dir: &Path,
) -> Result<ScheduleOutcome, DriverError> {
    let files = emit(b, dir)?;
    run_files(b, &files, schedule)
}

/// Like [`run_schedule`] on problem files already written for `b`.
pub fn run_files(
    b: &ProblemBundle,
    files: &Emitted,
    schedule: &Schedule,
) -> Result<ScheduleOutcome, DriverError> {
    let names = UsedAxioms::for_bundle(b);
    let mut attempts = Vec::new();
    for (spec, secs) in &schedule.slices {
        let file = match (spec.dialect, &files.fof) {
            (Dialect::Th0, _) => files.th0.clone(),
            (Dialect::Fof, Ok(p)) => p.clone(),
            (Dialect::Fof, Err(why)) => {
                attempts.push(Attempt::Skipped {
                    prover: spec.name.clone(),
                    reason: format!("not first-order: {}", why),
                });
                continue;
            }
        };
        match run_prover(spec, &b.id, &file, *secs, Some(&names)) {
            Ok(r) => {
                let done = r.szs.is_theorem();
                attempts.push(Attempt::Ran(r));
                if done {
                    break;
                }
            }
            Err(e) => attempts.push(Attempt::Failed {
                prover: spec.name.clone(),
                error: e.to_string(),
            }),
        }
    }
    Ok(ScheduleOutcome {
        problem_id: b.id.clone(),
        attempts,
    })
}

pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Runs `schedule` on every bundle with at most `jobs` provers at a time.
pub fn run_batch(
    bundles: &[ProblemBundle],
    schedule: &Schedule,
    dir: &Path,
    jobs: usize,
) -> Result<Vec<ScheduleOutcome>, DriverError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| DriverError::Io(e.to_string()))?;
    pool.install(|| {
        bundles
            .par_iter()
            .map(|b| run_schedule(b, schedule, dir))
            .collect()
    })
}

/// Runs each prover alone on every bundle (for per-prover coverage tables).
pub fn run_each(
    bundles: &[ProblemBundle],
    provers: &[ProverSpec],
    secs: f64,
    dir: &Path,
    jobs: usize,
) -> Result<Vec<ScheduleOutcome>, DriverError> {
    let mut out: BTreeMap<String, ScheduleOutcome> = BTreeMap::new();
    for p in provers {
        let single = Schedule::new(vec![(p.clone(), secs)], secs)?;
        for o in run_batch(bundles, &single, dir, jobs)? {
            out.entry(o.problem_id.clone())
                .or_insert_with(|| ScheduleOutcome {
                    problem_id: o.problem_id.clone(),
                    attempts: Vec::new(),
                })
                .attempts
                .extend(o.attempts);
        }
    }
    Ok(out.into_values().collect())
}

pub fn append_results(path: &Path, results: &[RunResult]) -> Result<(), DriverError> {
    let mut f = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| DriverError::Io(e.to_string()))?;
    for r in results {
        let line = serde_json::to_string(r).map_err(|e| DriverError::Io(e.to_string()))?;
        writeln!(f, "{}", line).map_err(|e| DriverError::Io(e.to_string()))?;
    }
    Ok(())
}

pub fn read_results(path: &Path) -> Result<Vec<RunResult>, DriverError> {
    let f = std::fs::File::open(path)
        .map_err(|e| DriverError::Io(format!("{}: {}", path.display(), e)))?;
    let mut out = Vec::new();
    for (i, line) in std::io::BufReader::new(f).lines().enumerate() {
        let line = line.map_err(|e| DriverError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line)
                .map_err(|e| DriverError::Io(format!("{}:{}: {}", path.display(), i + 1, e)))?,
        );
    }
    Ok(out)
}

/// Groups results by problem id.
pub fn merge_results(results: &[RunResult]) -> BTreeMap<String, Vec<RunResult>> {
    let mut out: BTreeMap<String, Vec<RunResult>> = BTreeMap::new();
    for r in results {
        out.entry(r.problem_id.clone()).or_default().push(r.clone());
    }
    out
}
