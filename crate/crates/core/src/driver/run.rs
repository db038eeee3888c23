use std::io::Read;
use std::os::unix::process::CommandExt;
use std::path::Path;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::spec::ProverSpec;
use super::used::UsedAxioms;
use super::DriverError;

/// Extra wall-clock time a prover gets past its time limit before it is killed.
pub const GRACE: Duration = Duration::from_secs(2);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Szs {
    Theorem,
    CounterSatisfiable,
    Timeout,
    GaveUp,
    Error,
    Unknown,
}

impl Szs {
    pub fn is_theorem(self) -> bool {
        self == Szs::Theorem
    }

    fn from_status(s: &str) -> Szs {
        match s {
            "Theorem" | "Unsatisfiable" | "ContradictoryAxioms" => Szs::Theorem,
            "CounterSatisfiable" | "Satisfiable" | "CounterTheorem" => Szs::CounterSatisfiable,
            "Timeout" | "ResourceOut" | "MemoryOut" => Szs::Timeout,
            "GaveUp" | "Incomplete" | "Inappropriate" => Szs::GaveUp,
            "Error" | "OSError" | "InputError" | "SyntaxError" | "TypeError" => Szs::Error,
            _ => Szs::Unknown,
        }
    }
}

/// The verdict of the first `SZS status` line, tolerating comment markers.
pub fn parse_szs(output: &str) -> Option<Szs> {
    output.lines().find_map(|line| {
        let line = line.trim_start_matches(|c: char| c == '%' || c == '#' || c.is_whitespace());
        let rest = line.strip_prefix("SZS")?.trim_start();
        let rest = rest.strip_prefix("status")?.trim_start();
        let word: String = rest
            .chars()
            .take_while(|c| c.is_ascii_alphanumeric())
            .collect();
        Some(Szs::from_status(&word))
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub problem_id: String,
    pub prover: String,
    pub szs: Szs,
    /// Seconds.
    pub wall_time: f64,
    /// Unmangled names, in order of first citation.
    #[serde(default)]
    pub used_axioms: Vec<String>,
    /// Set when a proof was found but its used axioms could not be read off.
    #[serde(default)]
    pub incomplete: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proof_text: Option<String>,
}

/// Runs one prover on one problem file. The prover runs in its own process
/// group, which is killed `GRACE` after the time limit.
pub fn run_prover(
    spec: &ProverSpec,
    problem_id: &str,
    file: &Path,
    timeout_secs: f64,
    names: Option<&UsedAxioms>,
) -> Result<RunResult, DriverError> {
    if !file.exists() {
        return Err(DriverError::Io(format!("{}: no such file", file.display())));
    }
    let start = Instant::now();
    let mut child = Command::new(&spec.path)
        .args(spec.command_args(file, timeout_secs))
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .process_group(0)
        .spawn()
        .map_err(|e| DriverError::Spawn(spec.path.display().to_string(), e.to_string()))?;
    let pgid = child.id() as i32;
    let mut out_pipe = child.stdout.take().expect("piped stdout");
    let mut err_pipe = child.stderr.take().expect("piped stderr");
    let out_reader = thread::spawn(move || {
        let mut s = Vec::new();
        let _ = out_pipe.read_to_end(&mut s);
        s
    });
    let err_reader = thread::spawn(move || {
        let mut s = Vec::new();
        let _ = err_pipe.read_to_end(&mut s);
        s
    });

    let deadline = start + Duration::from_secs_f64(timeout_secs.max(0.0)) + GRACE;
    let mut killed = false;
    let status = loop {
        match child.try_wait() {
            Ok(Some(st)) => break Some(st),
            Ok(None) => {}
            Err(e) => return Err(DriverError::Io(e.to_string())),
        }
        if Instant::now() >= deadline {
            kill_group(pgid);
            killed = true;
            break child.wait().ok();
        }
        thread::sleep(Duration::from_millis(5));
    };
    // Stragglers in the group would keep the pipes open.
    kill_group(pgid);
    let stdout = String::from_utf8_lossy(&out_reader.join().unwrap_or_default()).into_owned();
    let stderr = String::from_utf8_lossy(&err_reader.join().unwrap_or_default()).into_owned();
    let wall_time = start.elapsed().as_secs_f64();

    let szs = if killed {
        Szs::Timeout
    } else {
        match parse_szs(&stdout).or_else(|| parse_szs(&stderr)) {
            Some(s) => s,
            None if status.is_some_and(|s| s.success()) => Szs::Unknown,
            None => Szs::Error,
        }
    };
    let mut result = RunResult {
        problem_id: problem_id.to_string(),
        prover: spec.name.clone(),
        szs,
        wall_time,
        used_axioms: Vec::new(),
        incomplete: false,
        warnings: Vec::new(),
        proof_text: None,
    };
    if szs.is_theorem() {
        match names {
            Some(names) if spec.proof_format != super::spec::ProofFormat::None => {
                let used = names.extract(&stdout);
                result.used_axioms = used.names;
                result.incomplete = used.incomplete;
                result.warnings = used.warnings;
            }
            _ => result.incomplete = true,
        }
        result.proof_text = Some(stdout);
    }
    Ok(result)
}

fn kill_group(pgid: i32) {
    // SAFETY: plain syscall; a negative pid addresses the process group we created.
    unsafe {
        libc::kill(-pgid, libc::SIGKILL);
    }
}
