use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::DriverError;

pub const FILE_PLACEHOLDER: &str = "{file}";
pub const TIMEOUT_PLACEHOLDER: &str = "{timeout}";
pub const REGISTRY_ENV: &str = "HAMMERFORGE_PROVERS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dialect {
    Th0,
    Fof,
}

impl Dialect {
    pub fn extension(self) -> &'static str {
        match self {
            Dialect::Th0 => "th0.p",
            Dialect::Fof => "fof.p",
        }
    }
}

/// How a prover prints its proofs, for used-axiom extraction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProofFormat {
    /// TSTP derivations with `file(_, name)` annotations.
    #[default]
    Tstp,
    Dedukti,
    /// No usable proof output.
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProverSpec {
    pub name: String,
    pub path: PathBuf,
    /// Arguments; `{file}` must occur exactly once, `{timeout}` is optional.
    pub args: Vec<String>,
    pub dialect: Dialect,
    #[serde(default)]
    pub proof_format: ProofFormat,
}

impl ProverSpec {
    pub fn validate(&self) -> Result<(), DriverError> {
        let n: usize = self
            .args
            .iter()
            .map(|a| a.matches(FILE_PLACEHOLDER).count())
            .sum();
        if n != 1 {
            return Err(DriverError::BadTemplate(self.name.clone(), n));
        }
        Ok(())
    }

    pub fn command_args(&self, file: &Path, timeout_secs: f64) -> Vec<String> {
        let t = (timeout_secs.ceil() as u64).max(1).to_string();
        self.args
            .iter()
            .map(|a| {
                a.replace(FILE_PLACEHOLDER, &file.to_string_lossy())
                    .replace(TIMEOUT_PLACEHOLDER, &t)
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Slice {
    pub prover: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub slices: Vec<(ProverSpec, f64)>,
    pub budget: f64,
}

impl Schedule {
    pub fn new(slices: Vec<(ProverSpec, f64)>, budget: f64) -> Result<Self, DriverError> {
        let total: f64 = slices.iter().map(|s| s.1).sum();
        if total > budget + 1e-9 {
            return Err(DriverError::OverBudget(total, budget));
        }
        Ok(Schedule { slices, budget })
    }

    /// One slice per prover, splitting the budget evenly.
    pub fn even(provers: Vec<ProverSpec>, budget: f64) -> Self {
        let each = budget / provers.len().max(1) as f64;
        Schedule {
            slices: provers.into_iter().map(|p| (p, each)).collect(),
            budget,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleDef {
    pub budget: f64,
    pub slices: Vec<Slice>,
}

/// The prover registry file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Registry {
    #[serde(default, rename = "prover")]
    pub provers: Vec<ProverSpec>,
    #[serde(default, rename = "schedule")]
    pub schedules: BTreeMap<String, ScheduleDef>,
}

impl Registry {
    pub fn parse(text: &str) -> Result<Self, DriverError> {
        let r: Registry = toml::from_str(text).map_err(|e| DriverError::Registry(e.to_string()))?;
        for p in &r.provers {
            p.validate()?;
        }
        for def in r.schedules.values() {
            for s in &def.slices {
                r.prover(&s.prover)?;
            }
        }
        Ok(r)
    }

    pub fn load(path: &Path) -> Result<Self, DriverError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| DriverError::Io(format!("{}: {}", path.display(), e)))?;
        Self::parse(&text)
    }

    /// Loads the file named by `HAMMERFORGE_PROVERS`, else `default`.
    pub fn load_default(default: &Path) -> Result<Self, DriverError> {
        match std::env::var_os(REGISTRY_ENV) {
            Some(p) => Self::load(Path::new(&p)),
            None => Self::load(default),
        }
    }

    pub fn prover(&self, name: &str) -> Result<&ProverSpec, DriverError> {
        self.provers
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| DriverError::UnknownProver(name.to_string()))
    }

    pub fn schedule(&self, name: &str) -> Result<Schedule, DriverError> {
        let def = self
            .schedules
            .get(name)
            .ok_or_else(|| DriverError::UnknownSchedule(name.to_string()))?;
        let slices = def
            .slices
            .iter()
            .map(|s| Ok((self.prover(&s.prover)?.clone(), s.seconds)))
            .collect::<Result<Vec<_>, DriverError>>()?;
        Schedule::new(slices, def.budget)
    }
}
