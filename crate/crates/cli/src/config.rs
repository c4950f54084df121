//! The experiment file: `key = value` lines, then a `[script]` section
//! with one chain step per line. `#` starts a comment.

use serde::{Deserialize, Serialize};
use splitcantor::forcing::{Fill, Step};
use splitcantor::model::BitString;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing key {0:?}")]
    Missing(&'static str),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Splitting,
    Balanced,
    Biorthogonal,
    Discrete,
    Residue,
    Patterns,
    Canonical,
    Obstruction,
    NumberLemmaFuzz,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Splitting,
        Suite::Balanced,
        Suite::Biorthogonal,
        Suite::Discrete,
        Suite::Residue,
        Suite::Patterns,
        Suite::Canonical,
        Suite::Obstruction,
        Suite::NumberLemmaFuzz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Splitting => "splitting",
            Suite::Balanced => "balanced",
            Suite::Biorthogonal => "biorthogonal",
            Suite::Discrete => "discrete",
            Suite::Residue => "residue",
            Suite::Patterns => "patterns",
            Suite::Canonical => "canonical",
            Suite::Obstruction => "obstruction",
            Suite::NumberLemmaFuzz => "number-lemma-fuzz",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum CodeMode {
    /// Codes given one by one.
    Explicit {
        #[serde(with = "code_list")]
        codes: Vec<BitString>,
    },
    /// Groups of `2·block` indices; the first `block` and the next `block`
    /// agree pairwise on their first `prefix` bits.
    TwinBlocks { block: usize, prefix: usize },
    /// Distinct codes drawn from the seed.
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzSettings {
    pub instances: usize,
    pub n_min: usize,
    pub n_max: usize,
}

impl Default for FuzzSettings {
    fn default() -> Self {
        FuzzSettings {
            instances: 1000,
            n_min: 2,
            n_max: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub lambda: usize,
    pub m: usize,
    pub seed: u64,
    pub codes: CodeMode,
    pub suites: Vec<Suite>,
    pub fuzz: FuzzSettings,
    /// Random functions tried by the canonical suite.
    pub canonical_samples: usize,
    #[serde(with = "step_list")]
    pub script: Vec<Step>,
}

impl ExperimentConfig {
    /// Defaults for everything but the shape.
    pub fn new(n: usize, lambda: usize, m: usize) -> Self {
        ExperimentConfig {
            n,
            lambda,
            m,
            seed: 0,
            codes: CodeMode::Random,
            suites: Suite::ALL.to_vec(),
            fuzz: FuzzSettings::default(),
            canonical_samples: 20,
            script: vec![Step::Complete { fill: Fill::Seeded }],
        }
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut keys: Vec<(usize, String, String)> = Vec::new();
        let mut script = Vec::new();
        let mut in_script = false;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if content == "[script]" {
                in_script = true;
                continue;
            }
            let syntax = |message: String| ConfigError::Syntax { line, message };
            if in_script {
                script.push(content.parse::<Step>().map_err(syntax)?);
                continue;
            }
            let (k, v) = content
                .split_once('=')
                .ok_or_else(|| syntax(format!("expected key = value, got {content:?}")))?;
            keys.push((line, k.trim().to_string(), v.trim().to_string()));
        }

        let find = |key: &str| keys.iter().find(|(_, k, _)| k == key);
        let number = |key: &'static str| -> Result<Option<u64>, ConfigError> {
            find(key)
                .map(|(line, _, v)| {
                    v.parse::<u64>().map_err(|e| ConfigError::Syntax {
                        line: *line,
                        message: format!("{key}: {e}"),
                    })
                })
                .transpose()
        };
        let required = |key: &'static str| number(key)?.ok_or(ConfigError::Missing(key));
        let mut config = ExperimentConfig::new(
            required("n")? as usize,
            required("lambda")? as usize,
            required("m")? as usize,
        );
        for (line, key, _) in &keys {
            const KNOWN: [&str; 12] = [
                "n",
                "lambda",
                "m",
                "seed",
                "codes",
                "block",
                "prefix",
                "suites",
                "fuzz_instances",
                "fuzz_n_min",
                "fuzz_n_max",
                "canonical_samples",
            ];
            if !KNOWN.contains(&key.as_str()) {
                return Err(ConfigError::Syntax {
                    line: *line,
                    message: format!("unknown key {key:?}"),
                });
            }
        }
        if let Some(seed) = number("seed")? {
            config.seed = seed;
        }
        if let Some((line, _, v)) = find("codes") {
            config.codes = match v.as_str() {
                "random" => CodeMode::Random,
                "twin-blocks" => CodeMode::TwinBlocks {
                    block: number("block")?.unwrap_or(1) as usize,
                    prefix: number("prefix")?.ok_or(ConfigError::Missing("prefix"))? as usize,
                },
                list => CodeMode::Explicit {
                    codes: list
                        .split(',')
                        .map(|c| c.trim().parse::<BitString>())
                        .collect::<Result<_, _>>()
                        .map_err(|e| ConfigError::Syntax {
                            line: *line,
                            message: format!("codes: {e}"),
                        })?,
                },
            };
        }
        if let Some((line, _, v)) = find("suites") {
            config.suites = v
                .split(',')
                .map(|s| {
                    Suite::from_name(s.trim()).ok_or_else(|| ConfigError::Syntax {
                        line: *line,
                        message: format!("unknown suite {:?}", s.trim()),
                    })
                })
                .collect::<Result<_, _>>()?;
        }
        if let Some(v) = number("fuzz_instances")? {
            config.fuzz.instances = v as usize;
        }
        if let Some(v) = number("fuzz_n_min")? {
            config.fuzz.n_min = v as usize;
        }
        if let Some(v) = number("fuzz_n_max")? {
            config.fuzz.n_max = v as usize;
        }
        if let Some(v) = number("canonical_samples")? {
            config.canonical_samples = v as usize;
        }
        if !script.is_empty() {
            config.script = script;
        }
        config.validate()?;
        Ok(config)
    }

    /// Invariants checkable before building anything.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: String| Err(ConfigError::Invalid(m));
        if self.n < 2 {
            return invalid(format!("n = {} but n must be at least 2", self.n));
        }
        if self.lambda == 0 {
            return invalid("lambda must be positive".into());
        }
        if self.m > splitcantor::model::MAX_RESOLUTION {
            return invalid(format!(
                "m = {} exceeds the supported maximum {}",
                self.m,
                splitcantor::model::MAX_RESOLUTION
            ));
        }
        if self.lambda as u64 > 1u64 << self.m {
            return invalid(format!("lambda = {} exceeds 2^m = {}", self.lambda, 1u64 << self.m));
        }
        match &self.codes {
            CodeMode::TwinBlocks { block, prefix } => {
                if *block == 0 {
                    return invalid("block must be positive".into());
                }
                if prefix >= &self.m {
                    return invalid(format!("twin prefix {prefix} must be below m = {}", self.m));
                }
            }
            CodeMode::Explicit { codes } if codes.len() != self.lambda => {
                return invalid(format!("{} codes given for lambda = {}", codes.len(), self.lambda));
            }
            _ => {}
        }
        if self.fuzz.n_min < 2 || self.fuzz.n_min > self.fuzz.n_max {
            return invalid("fuzz n range must satisfy 2 ≤ min ≤ max".into());
        }
        Ok(())
    }

    /// Text form that parses back to the same config.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "n = {}\nlambda = {}\nm = {}\nseed = {}\n",
            self.n, self.lambda, self.m, self.seed
        );
        match &self.codes {
            CodeMode::Random => out.push_str("codes = random\n"),
            CodeMode::TwinBlocks { block, prefix } => {
                out.push_str(&format!("codes = twin-blocks\nblock = {block}\nprefix = {prefix}\n"))
            }
            CodeMode::Explicit { codes } => {
                let list: Vec<String> = codes.iter().map(|c| c.to_string()).collect();
                out.push_str(&format!("codes = {}\n", list.join(",")));
            }
        }
        let suites: Vec<&str> = self.suites.iter().map(|s| s.name()).collect();
        out.push_str(&format!("suites = {}\n", suites.join(",")));
        out.push_str(&format!(
            "fuzz_instances = {}\nfuzz_n_min = {}\nfuzz_n_max = {}\ncanonical_samples = {}\n",
            self.fuzz.instances, self.fuzz.n_min, self.fuzz.n_max, self.canonical_samples
        ));
        out.push_str("[script]\n");
        for step in &self.script {
            out.push_str(&format!("{step}\n"));
        }
        out
    }
}

mod code_list {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use splitcantor::model::BitString;

    pub fn serialize<S: Serializer>(codes: &[BitString], s: S) -> Result<S::Ok, S::Error> {
        codes.iter().map(|c| c.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BitString>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|c| c.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

mod step_list {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use splitcantor::forcing::Step;

    pub fn serialize<S: Serializer>(steps: &[Step], s: S) -> Result<S::Ok, S::Error> {
        steps.iter().map(|c| c.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Step>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|c| c.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# twin blocks for two patterns
n = 2
lambda = 8
m = 8
seed = 7
codes = twin-blocks
block = 1
prefix = 4
suites = splitting, patterns
[script]
PATTERN 0 1 1,2,2,1 4
PATTERN 2 3 4,4,3,3 1
COMPLETE random
";

    #[test]
    fn parses_sample() {
        let c = ExperimentConfig::parse(SAMPLE).unwrap();
        assert_eq!(c.codes, CodeMode::TwinBlocks { block: 1, prefix: 4 });
        assert_eq!(c.suites, vec![Suite::Splitting, Suite::Patterns]);
        assert_eq!(c.script.len(), 3);
        assert_eq!(ExperimentConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(ExperimentConfig::parse("n = 2\nm = 4"), Err(ConfigError::Missing("lambda")));
        assert!(matches!(
            ExperimentConfig::parse("n = 2\nlambda = 20\nm = 4"),
            Err(ConfigError::Invalid(m)) if m.contains("2^m")
        ));
        assert!(matches!(
            ExperimentConfig::parse("n = 2\nlambda = 2\nm = 4\ncolour = red"),
            Err(ConfigError::Syntax { line: 4, .. })
        ));
        assert!(matches!(
            ExperimentConfig::parse("n = 2\nlambda = 2\nm = 4\n[script]\nJUMP 3"),
            Err(ConfigError::Syntax { line: 5, .. })
        ));
    }
}
