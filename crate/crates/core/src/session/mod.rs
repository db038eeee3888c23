//! Interactive sessions: incremental checking, goals at a position, and
//! hammer-at-point jobs returning an insertable `aby` call.

mod protocol;
mod serve;

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Condvar, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

pub use protocol::{handle_line, Request, Response, ResponseError};
pub use serve::{serve_lines, serve_stdio, serve_tcp, serve_ws};

use crate::driver::{run_schedule, Attempt, Schedule};
use crate::hammer::{aby_text, after_classical_frontier, chainy_at};
use crate::kernel::Signature;
use crate::script::{elaborate, elaborate_prefix, Development, GoalView, ScriptError};
use crate::tptp::FormulaKind;

pub type SessionId = u64;
pub type JobId = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("unknown session {0}")]
    UnknownSession(SessionId),
    #[error("unknown job {0}")]
    UnknownJob(JobId),
    #[error("stale revision {got}, the session is at {current}")]
    StaleRevision { current: u64, got: u64 },
    #[error("bad range {start}..{end}: {why}")]
    BadRange {
        start: usize,
        end: usize,
        why: String,
    },
    #[error("no goal at offset {0}")]
    NoGoal(usize),
    #[error("theorem `{0}` is not after the classical frontier")]
    BeforeFrontier(String),
    #[error("cannot build the problem: {0}")]
    Problem(String),
}

impl SessionError {
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::UnknownSession(_) => "UnknownSession",
            SessionError::UnknownJob(_) => "UnknownJob",
            SessionError::StaleRevision { .. } => "StaleRevision",
            SessionError::BadRange { .. } => "BadRange",
            SessionError::NoGoal(_) => "NoGoal",
            SessionError::BeforeFrontier(_) => "BeforeFrontier",
            SessionError::Problem(_) => "Problem",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl From<&ScriptError> for Diagnostic {
    fn from(e: &ScriptError) -> Self {
        Diagnostic {
            start: e.span.start,
            end: e.span.end,
            line: e.line,
            col: e.col,
            message: e.kind.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub revision: u64,
    pub diagnostics: Vec<Diagnostic>,
    /// `aby` holes in the checked text.
    pub holes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum JobStatus {
    Running,
    Done {
        revision: u64,
        #[serde(rename = "abyText")]
        aby_text: String,
        #[serde(rename = "usedAxioms")]
        used_axioms: Vec<String>,
        prover: String,
    },
    Failed {
        revision: u64,
        reason: String,
        attempts: Vec<Attempt>,
    },
    /// The session changed or closed before the result was delivered.
    Discarded {
        revision: u64,
    },
}

struct Session {
    text: String,
    revision: u64,
    /// Elaboration of the whole current text.
    cache: Option<Arc<Development>>,
}

struct Job {
    session: SessionId,
    revision: u64,
    status: JobStatus,
}

#[derive(Default)]
struct Jobs {
    map: Mutex<HashMap<JobId, Job>>,
    changed: Condvar,
}

/// What the service runs hammer jobs with.
#[derive(Clone, Debug)]
pub struct ServiceConfig {
    pub base: Signature,
    pub schedule: Schedule,
    /// Problem files go to a subdirectory per job.
    pub workdir: PathBuf,
}

/// Shared by all connections; sessions and jobs are numbered from 1 in
/// creation order.
pub struct Service {
    config: ServiceConfig,
    sessions: Mutex<HashMap<SessionId, Session>>,
    jobs: Arc<Jobs>,
    next_session: Mutex<SessionId>,
    next_job: Mutex<JobId>,
}

impl Service {
    pub fn new(config: ServiceConfig) -> Self {
        Service {
            config,
            sessions: Mutex::new(HashMap::new()),
            jobs: Arc::new(Jobs::default()),
            next_session: Mutex::new(0),
            next_job: Mutex::new(0),
        }
    }

    fn with_session<T>(
        &self,
        id: SessionId,
        f: impl FnOnce(&mut Session) -> Result<T, SessionError>,
    ) -> Result<T, SessionError> {
        let mut sessions = self.sessions.lock().unwrap();
        let s = sessions
            .get_mut(&id)
            .ok_or(SessionError::UnknownSession(id))?;
        f(s)
    }

    /// The elaboration of the current text, computed outside the lock on a
    /// snapshot and cached if no edit intervened.
    fn dev(&self, id: SessionId) -> Result<(u64, Arc<Development>), SessionError> {
        let (revision, text) = match self.with_session(id, |s| {
            Ok(match &s.cache {
                Some(d) => Err((s.revision, d.clone())),
                None => Ok((s.revision, s.text.clone())),
            })
        })? {
            Ok(snapshot) => snapshot,
            Err(cached) => return Ok(cached),
        };
        let dev = Arc::new(elaborate(&self.config.base, &text));
        let _ = self.with_session(id, |s| {
            if s.revision == revision {
                s.cache = Some(dev.clone());
            }
            Ok(())
        });
        Ok((revision, dev))
    }

    pub fn open(&self, text: &str) -> SessionId {
        let id = {
            let mut n = self.next_session.lock().unwrap();
            *n += 1;
            *n
        };
        self.sessions.lock().unwrap().insert(
            id,
            Session {
                text: text.to_string(),
                revision: 0,
                cache: None,
            },
        );
        id
    }

    pub fn text(&self, id: SessionId) -> Result<(u64, String), SessionError> {
        self.with_session(id, |s| Ok((s.revision, s.text.clone())))
    }

    /// Replaces bytes `start..end` of revision `revision`; returns the new revision.
    pub fn edit(
        &self,
        id: SessionId,
        revision: u64,
        start: usize,
        end: usize,
        new_text: &str,
    ) -> Result<u64, SessionError> {
        self.with_session(id, |s| {
            if revision != s.revision {
                return Err(SessionError::StaleRevision {
                    current: s.revision,
                    got: revision,
                });
            }
            let bad = |why: &str| SessionError::BadRange {
                start,
                end,
                why: why.into(),
            };
            if start > end || end > s.text.len() {
                return Err(bad("out of bounds"));
            }
            if !s.text.is_char_boundary(start) || !s.text.is_char_boundary(end) {
                return Err(bad("not on a character boundary"));
            }
            s.text.replace_range(start..end, new_text);
            s.revision += 1;
            s.cache = None;
            Ok(s.revision)
        })
    }

    /// Diagnostics for the items starting before `offset` (all items when absent).
    pub fn check_prefix(
        &self,
        id: SessionId,
        offset: Option<usize>,
    ) -> Result<Check, SessionError> {
        let (revision, dev) = match offset {
            Some(o) => {
                let (revision, text) = self.text(id)?;
                if o < text.len() {
                    (
                        revision,
                        Arc::new(elaborate_prefix(&self.config.base, &text, o)),
                    )
                } else {
                    self.dev(id)?
                }
            }
            None => self.dev(id)?,
        };
        Ok(Check {
            revision,
            diagnostics: dev.errors.iter().map(Diagnostic::from).collect(),
            holes: dev.hole_count(),
        })
    }

    pub fn goal_at(&self, id: SessionId, offset: usize) -> Result<(u64, GoalView), SessionError> {
        let (revision, dev) = self.dev(id)?;
        let goal = dev
            .theorem_at(offset)
            .and_then(|t| t.goal_at(offset))
            .ok_or(SessionError::NoGoal(offset))?;
        Ok((revision, goal.view()))
    }

    /// Starts a chainy hammer job for the goal at `offset`.
    pub fn hammer_at(&self, id: SessionId, offset: usize) -> Result<(JobId, u64), SessionError> {
        let (revision, dev) = self.dev(id)?;
        let t = dev.theorem_at(offset).ok_or(SessionError::NoGoal(offset))?;
        let goal = t.goal_at(offset).ok_or(SessionError::NoGoal(offset))?;
        match after_classical_frontier(&dev, t) {
            Ok(true) => {}
            _ => return Err(SessionError::BeforeFrontier(t.name.clone())),
        }
        let job = {
            let mut n = self.next_job.lock().unwrap();
            *n += 1;
            *n
        };
        let problem = format!("session{}_job{}", id, job);
        let bundle = chainy_at(&dev, t, goal, &problem, None)
            .map_err(|e| SessionError::Problem(e.to_string()))?;
        self.jobs.map.lock().unwrap().insert(
            job,
            Job {
                session: id,
                revision,
                status: JobStatus::Running,
            },
        );
        let jobs = self.jobs.clone();
        let schedule = self.config.schedule.clone();
        let dir = self.config.workdir.join(&problem);
        thread::spawn(move || {
            let status = run_job(&bundle, &schedule, dir, revision);
            let mut map = jobs.map.lock().unwrap();
            if let Some(j) = map.get_mut(&job) {
                j.status = status;
            }
            jobs.changed.notify_all();
        });
        Ok((job, revision))
    }

    /// The job's status, waiting up to `wait` for it to finish. Results for
    /// a revision other than the session's current one are discarded.
    pub fn poll(&self, job: JobId, wait: Duration) -> Result<JobStatus, SessionError> {
        let deadline = Instant::now() + wait;
        let mut map = self.jobs.map.lock().unwrap();
        loop {
            let j = map.get(&job).ok_or(SessionError::UnknownJob(job))?;
            let now = Instant::now();
            if j.status != JobStatus::Running || now >= deadline {
                break;
            }
            map = self
                .jobs
                .changed
                .wait_timeout(map, deadline - now)
                .unwrap()
                .0;
        }
        let j = &map[&job];
        if j.status == JobStatus::Running {
            return Ok(JobStatus::Running);
        }
        let current = self
            .sessions
            .lock()
            .unwrap()
            .get(&j.session)
            .map(|s| s.revision);
        if current != Some(j.revision) {
            return Ok(JobStatus::Discarded {
                revision: j.revision,
            });
        }
        Ok(j.status.clone())
    }

    pub fn close(&self, id: SessionId) -> Result<(), SessionError> {
        self.sessions
            .lock()
            .unwrap()
            .remove(&id)
            .map(|_| ())
            .ok_or(SessionError::UnknownSession(id))
    }
}

fn run_job(
    bundle: &crate::tptp::ProblemBundle,
    schedule: &Schedule,
    dir: PathBuf,
    revision: u64,
) -> JobStatus {
    let failed = |reason: String, attempts| JobStatus::Failed {
        revision,
        reason,
        attempts,
    };
    if let Err(e) = std::fs::create_dir_all(&dir) {
        return failed(format!("{}: {}", dir.display(), e), Vec::new());
    }
    let outcome = match run_schedule(bundle, schedule, &dir) {
        Ok(o) => o,
        Err(e) => return failed(e.to_string(), Vec::new()),
    };
    let Some(win) = outcome.success() else {
        return failed("schedule exhausted".into(), outcome.attempts);
    };
    if win.incomplete {
        let prover = win.prover.clone();
        return failed(
            format!("{} found a proof but reported no used axioms", prover),
            outcome.attempts,
        );
    }
    let is_hyp = |n: &str| {
        bundle
            .axioms
            .iter()
            .any(|f| f.name == n && f.kind == FormulaKind::Hyp)
    };
    let mut names: Vec<String> = win
        .used_axioms
        .iter()
        .filter(|n| !is_hyp(n))
        .cloned()
        .collect();
    names.extend(win.used_axioms.iter().filter(|n| is_hyp(n)).cloned());
    JobStatus::Done {
        revision,
        aby_text: aby_text(&names),
        used_axioms: win.used_axioms.clone(),
        prover: win.prover.clone(),
    }
}
