use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::driver::RunResult;
use crate::script::Development;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportMode {
    Bushy,
    Chainy,
    Aby,
}

impl FromStr for ReportMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bushy" => Ok(ReportMode::Bushy),
            "chainy" => Ok(ReportMode::Chainy),
            "aby" => Ok(ReportMode::Aby),
            _ => Err(format!(
                "unknown mode `{}` (expected bushy, chainy or aby)",
                s
            )),
        }
    }
}

impl ReportMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ReportMode::Bushy => "bushy",
            ReportMode::Chainy => "chainy",
            ReportMode::Aby => "aby",
        }
    }
}

/// `n/d` as a percentage rounded half up to `decimals` places, with a `%`.
pub fn percent(n: u64, d: u64, decimals: u32) -> String {
    if d == 0 {
        return "n/a".into();
    }
    let scale = 10u128.pow(decimals);
    let (n, d) = (n as u128, d as u128);
    let v = (2 * 100 * scale * n + d) / (2 * d);
    if decimals == 0 {
        format!("{}%", v)
    } else {
        format!("{}.{:0w$}%", v / scale, v % scale, w = decimals as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProverLine {
    pub prover: String,
    pub solved: usize,
    pub percentage: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextStats {
    pub original_chars: usize,
    pub rewritten_chars: usize,
    /// Rewritten size relative to the original, in whole percent.
    pub ratio: String,
}

impl TextStats {
    pub fn measure(original: &str, rewritten: &str) -> Self {
        Self::from_counts(original.chars().count(), rewritten.chars().count())
    }

    pub fn from_counts(original_chars: usize, rewritten_chars: usize) -> Self {
        TextStats {
            original_chars,
            rewritten_chars,
            ratio: percent(rewritten_chars as u64, original_chars as u64, 0),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ProofStats {
    pub proofs: usize,
    /// Proofs that are a single `aby` call.
    pub single_aby: usize,
    /// Proofs with two or more `aby` calls.
    pub multi_aby: usize,
    pub calls: usize,
    /// Mean calls among proofs with at least one call.
    pub calls_per_proof: f64,
}

impl ProofStats {
    pub fn measure(dev: &Development) -> Self {
        let mut s = ProofStats {
            proofs: dev.theorems.len(),
            ..Default::default()
        };
        let mut with_calls = 0;
        for t in &dev.theorems {
            let n = t.abys.len();
            s.calls += n;
            if n > 0 {
                with_calls += 1;
            }
            let tactics = t.sites.iter().filter(|x| !x.is_bullet()).count();
            if n == 1 && tactics == 1 {
                s.single_aby += 1;
            }
            if n >= 2 {
                s.multi_aby += 1;
            }
        }
        if with_calls > 0 {
            s.calls_per_proof = s.calls as f64 / with_calls as f64;
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub mode: ReportMode,
    pub problems: usize,
    pub provers: Vec<ProverLine>,
    pub union: ProverLine,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<TextStats>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proofs: Option<ProofStats>,
}

/// Per-prover and union solved counts. `problems` defaults to the number of
/// distinct problem ids among the results.
pub fn report(results: &[RunResult], mode: ReportMode, problems: Option<usize>) -> CoverageReport {
    let mut solved: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut ids = BTreeSet::new();
    for r in results {
        ids.insert(r.problem_id.as_str());
        let e = solved.entry(r.prover.as_str()).or_default();
        if r.szs.is_theorem() {
            e.insert(r.problem_id.as_str());
        }
    }
    let total = problems.unwrap_or(ids.len());
    let line = |prover: &str, n: usize| ProverLine {
        prover: prover.to_string(),
        solved: n,
        percentage: percent(n as u64, total as u64, 1),
    };
    let union: BTreeSet<&str> = solved.values().flatten().copied().collect();
    CoverageReport {
        mode,
        problems: total,
        provers: solved.iter().map(|(p, s)| line(p, s.len())).collect(),
        union: line("union", union.len()),
        text: None,
        proofs: None,
    }
}

impl CoverageReport {
    pub fn render_table(&self) -> String {
        let mut rows: Vec<[String; 3]> = vec![["prover".into(), "solved".into(), "%".into()]];
        for l in self.provers.iter().chain(std::iter::once(&self.union)) {
            rows.push([l.prover.clone(), l.solved.to_string(), l.percentage.clone()]);
        }
        let w0 = rows.iter().map(|r| r[0].len()).max().unwrap_or(0);
        let w1 = rows.iter().map(|r| r[1].len()).max().unwrap_or(0);
        let mut out = String::new();
        writeln!(out, "{} problems: {}", self.mode.as_str(), self.problems).unwrap();
        for r in &rows {
            writeln!(out, "{:<w0$}  {:>w1$}  {}", r[0], r[1], r[2]).unwrap();
        }
        if let Some(t) = &self.text {
            writeln!(
                out,
                "text: {} -> {} chars ({} of original)",
                t.original_chars, t.rewritten_chars, t.ratio
            )
            .unwrap();
        }
        if let Some(p) = &self.proofs {
            writeln!(
                out,
                "proofs: {}, single aby: {}, multiple aby: {}, calls: {} ({:.2} per proof with calls)",
                p.proofs, p.single_aby, p.multi_aby, p.calls, p.calls_per_proof
            )
            .unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
