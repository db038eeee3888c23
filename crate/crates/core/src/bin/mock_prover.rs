//! A scriptable stand-in for an ATP, driven by a JSON verdict table.
//!
//! Usage: `hammerforge-mock-prover [--table FILE] [--timeout N] PROBLEM`
//!
//! The table maps keys to entries; the first of `id@dialect`, `id`,
//! `*@dialect`, `*` present wins. Without `--table` the file named by
//! `HAMMERFORGE_MOCK_TABLE` is used. An entry looks like
//!
//! ```json
//! {"status": "Theorem", "sleep": 0.1, "used": ["Ha"], "format": "tstp",
//!  "ratio": 0.8, "exit": 0, "silent": false, "spawn_child": false}
//! ```
//!
//! `used` lists original names to cite (default: every axiom). With `ratio`
//! only that fraction of problem ids, chosen by hash, get `status`; the rest
//! give up.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::Duration;

use serde::Deserialize;

#[derive(Deserialize, Default)]
struct Entry {
    #[serde(default = "theorem")]
    status: String,
    #[serde(default)]
    sleep: f64,
    used: Option<Vec<String>>,
    #[serde(default)]
    format: Option<String>,
    ratio: Option<f64>,
    #[serde(default)]
    exit: u8,
    #[serde(default)]
    silent: bool,
    #[serde(default)]
    spawn_child: bool,
}

fn theorem() -> String {
    "Theorem".into()
}

struct Problem {
    id: String,
    dialect: &'static str,
    /// (formula name, original name) for axioms, in file order.
    axioms: Vec<(String, String)>,
}

fn read_problem(path: &str) -> Result<Problem, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {}", path, e))?;
    let mut id = None;
    let mut axioms = Vec::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("% problem: ") {
            id = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("% name ") {
            let mut it = rest.splitn(2, ' ');
            let f = it.next().unwrap_or("").to_string();
            let orig = it.next().unwrap_or("").to_string();
            if f.starts_with("axiom_") {
                axioms.push((f, orig));
            }
        }
    }
    let dialect = if text.contains("thf(") { "th0" } else { "fof" };
    Ok(Problem {
        id: id.ok_or("no `% problem:` header")?,
        dialect,
        axioms,
    })
}

fn fnv(s: &str) -> u64 {
    s.bytes().fold(0xcbf29ce484222325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100000001b3)
    })
}

fn run() -> Result<ExitCode, String> {
    let mut table_path = std::env::var("HAMMERFORGE_MOCK_TABLE").ok();
    let mut file = None;
    let mut args = std::env::args().skip(1);
    while let Some(a) = args.next() {
        match a.as_str() {
            "--table" => table_path = args.next(),
            "--timeout" => {
                args.next();
            }
            _ => file = Some(a),
        }
    }
    let file = file.ok_or("missing problem file")?;
    let problem = read_problem(&file)?;
    let table: BTreeMap<String, Entry> = match table_path {
        Some(p) => {
            let text = std::fs::read_to_string(&p).map_err(|e| format!("{}: {}", p, e))?;
            serde_json::from_str(&text).map_err(|e| format!("{}: {}", p, e))?
        }
        None => BTreeMap::new(),
    };
    let keys = [
        format!("{}@{}", problem.id, problem.dialect),
        problem.id.clone(),
        format!("*@{}", problem.dialect),
        "*".to_string(),
    ];
    let default = Entry {
        status: "GaveUp".into(),
        ..Entry::default()
    };
    let entry = keys.iter().find_map(|k| table.get(k)).unwrap_or(&default);

    if entry.spawn_child {
        Command::new("sleep")
            .arg("600")
            .spawn()
            .map_err(|e| e.to_string())?;
    }
    if entry.sleep > 0.0 {
        std::thread::sleep(Duration::from_secs_f64(entry.sleep));
    }
    let mut status = entry.status.as_str();
    if let Some(r) = entry.ratio {
        if (fnv(&problem.id) % 10_000) as f64 >= r * 10_000.0 {
            status = "GaveUp";
        }
    }
    if !entry.silent {
        println!("% SZS status {} for {}", status, file);
        if status == "Theorem" {
            let cited: Vec<&(String, String)> = problem
                .axioms
                .iter()
                .filter(|(_, orig)| entry.used.as_ref().is_none_or(|u| u.contains(orig)))
                .collect();
            print_proof(&cited, entry.format.as_deref().unwrap_or("tstp"));
        }
    }
    Ok(ExitCode::from(entry.exit))
}

fn print_proof(cited: &[&(String, String)], format: &str) {
    match format {
        "dedukti" => {
            for (f, _) in cited {
                println!("{{|{}|}}: Prf p.", f);
            }
        }
        "none" => {}
        _ => {
            println!("% SZS output start CNFRefutation");
            for (i, (f, _)) in cited.iter().enumerate() {
                println!("fof(f{}, axiom, p, file('problem.p', {})).", i + 1, f);
            }
            println!(
                "fof(f{}, plain, $false, inference(resolution, [], [])).",
                cited.len() + 1
            );
            println!("% SZS output end CNFRefutation");
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("mock prover: {}", e);
            ExitCode::from(2)
        }
    }
}
