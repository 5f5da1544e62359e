//! Experiment configuration (TOML).
//!
//! ```toml
//! algorithms = ["random/2ex", "randomxygreedy/aa"]   # "<constructor>/<search>"
//! seeds = [1, 2, 3]
//! output = "results.csv"        # optional, relative to this file
//! solutions = "solutions"       # optional directory for solution files
//! record_time = true            # false writes time_ms = 0 for byte-stable output
//! sequential = false            # true runs one row at a time
//!
//! [budget]                      # optional; without it each row is a single run
//! restarts = 10
//! time_ms = 2000
//!
//! [[instances]]
//! path = "data/uniform_6x6_0.bap"
//!
//! [[instances]]
//! fixture = "exchange_trap"
//!
//! [[generate]]
//! kind = "uniform"
//! m = 6
//! n = 6
//! seed = 1
//! count = 10
//! ```

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::time::Duration;

use bap::instgen::{fixtures, generate, read_instance, GenSpec};
use bap::{Algorithm, BapInstance, Budget};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithms: Vec<String>,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub instances: Vec<InstanceEntry>,
    #[serde(default)]
    pub generate: Vec<GenerateEntry>,
    pub budget: Option<BudgetEntry>,
    pub output: Option<PathBuf>,
    pub solutions: Option<PathBuf>,
    #[serde(default = "default_true")]
    pub record_time: bool,
    #[serde(default)]
    pub sequential: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceEntry {
    pub path: Option<PathBuf>,
    pub fixture: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateEntry {
    pub kind: String,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub count: usize,
    #[serde(default)]
    pub first_index: usize,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetEntry {
    pub restarts: Option<u64>,
    pub time_ms: Option<u64>,
}

/// A configuration with every name resolved and every file loaded.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub instances: Vec<BapInstance>,
    pub algorithms: Vec<Algorithm>,
    pub seeds: Vec<u64>,
    pub budget: Option<Budget>,
    pub output: Option<PathBuf>,
    pub solutions: Option<PathBuf>,
    pub record_time: bool,
    pub sequential: bool,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Resolves names and loads instances; relative paths are taken from `base`.
    pub fn resolve(&self, base: &Path) -> Result<Experiment> {
        let usage = |msg: String| CliError::Usage(format!("config: {msg}"));
        if self.algorithms.is_empty() {
            return Err(usage("no algorithms".into()));
        }
        if self.seeds.is_empty() {
            return Err(usage("no seeds".into()));
        }
        let algorithms = self
            .algorithms
            .iter()
            .map(|a| a.parse::<Algorithm>().map_err(|e| usage(e.to_string())))
            .collect::<Result<Vec<_>>>()?;

        let mut instances = Vec::new();
        for entry in &self.instances {
            match (&entry.path, &entry.fixture) {
                (Some(p), None) => {
                    let path = base.join(p);
                    if !path.exists() {
                        return Err(usage(format!("instance file {} does not exist", path.display())));
                    }
                    instances.push(read_instance(&path).map_err(|e| CliError::data(path.display(), e))?);
                }
                (None, Some(name)) => instances.push(fixtures::by_name(name).map_err(|e| usage(e.to_string()))?),
                _ => {
                    return Err(usage(
                        "each [[instances]] entry needs exactly one of path or fixture".into(),
                    ))
                }
            }
        }
        for g in &self.generate {
            let kind = g.kind.parse().map_err(|e: bap::BapError| usage(e.to_string()))?;
            let spec = GenSpec {
                first_index: g.first_index,
                ..GenSpec::new(kind, g.m, g.n, g.seed, g.count)
            };
            instances.extend(generate(&spec).map_err(|e| usage(e.to_string()))?);
        }
        if instances.is_empty() {
            return Err(usage("no instances".into()));
        }
        let mut names = HashSet::new();
        for inst in &instances {
            if !names.insert(inst.name().to_string()) {
                return Err(usage(format!("duplicate instance name '{}'", inst.name())));
            }
        }

        let budget = match self.budget {
            None => None,
            Some(b) => {
                let budget = Budget {
                    time_limit: b.time_ms.map(Duration::from_millis),
                    restarts: b.restarts,
                };
                budget.validate().map_err(|e| usage(e.to_string()))?;
                Some(budget)
            }
        };
        Ok(Experiment {
            instances,
            algorithms,
            seeds: self.seeds.clone(),
            budget,
            output: self.output.as_ref().map(|p| base.join(p)),
            solutions: self.solutions.as_ref().map(|p| base.join(p)),
            record_time: self.record_time,
            sequential: self.sequential,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
algorithms = ["random/2ex", "randomxygreedy/aa"]
seeds = [1, 2, 3]
record_time = false

[budget]
restarts = 2

[[instances]]
fixture = "exchange_trap"

[[generate]]
kind = "uniform"
m = 3
n = 4
seed = 9
count = 2
"#;

    #[test]
    fn resolves_sample() {
        let exp = ExperimentConfig::parse(SAMPLE)
            .unwrap()
            .resolve(Path::new("."))
            .unwrap();
        assert_eq!(exp.instances.len(), 3);
        assert_eq!(exp.instances[1].name(), "uniform 3x4 0");
        assert_eq!(exp.algorithms[1].to_string(), "randomxygreedy/aa");
        assert_eq!(exp.budget.unwrap().restarts, Some(2));
        assert!(!exp.record_time && !exp.sequential);
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            "algorithms = []\nseeds = [1]\n[[instances]]\nfixture = \"exchange_trap\"",
            "algorithms = [\"random/nope\"]\nseeds = [1]\n[[instances]]\nfixture = \"exchange_trap\"",
            "algorithms = [\"random/2ex\"]\nseeds = [1]",
            "algorithms = [\"random/2ex\"]\nseeds = [1]\n[[instances]]\npath = \"/nonexistent/x.bap\"",
            "algorithms = [\"random/2ex\"]\nseeds = [1]\nunknown = 3",
            "algorithms = [\"random/2ex\"]\nseeds = [1]\n[budget]\n[[instances]]\nfixture = \"exchange_trap\"",
            "algorithms = [\"random/2ex\"]\nseeds = [1]\n[[instances]]\nfixture = \"exchange_trap\"\n[[instances]]\nfixture = \"exchange_trap\"",
        ] {
            let err = ExperimentConfig::parse(text).and_then(|c| c.resolve(Path::new(".")));
            assert!(matches!(err, Err(CliError::Usage(_))), "{text}");
        }
    }
}
