//! Experiment configuration: a single JSON document, validated in full before
//! any simulation starts.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laws::{Family, JointLaw, Marginal, MonotoneMap};
use crate::mc::VerdictThresholds;
use crate::renewal::RenewalKind;
use crate::shotnoise::ResponseProcess;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Classify,
    Moments,
    Verify,
    Shotnoise,
    Renewal,
    Scenario,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Classify => "classify",
            ExperimentKind::Moments => "moments",
            ExperimentKind::Verify => "verify",
            ExperimentKind::Shotnoise => "shotnoise",
            ExperimentKind::Renewal => "renewal",
            ExperimentKind::Scenario => "scenario",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FunctionalName {
    Tau,
    Visits,
    LastExit,
    Sigma,
    Nu,
    FirstLadder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioName {
    BernoulliSieve,
    GigInftyQueue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JointFamily {
    Independent,
    Functional,
    BernoulliSieve,
}

/// One marginal: `shift ± B` for `B` from a parametric family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarginalSpec {
    pub family: String,
    #[serde(default = "empty_object")]
    pub params: serde_json::Value,
    #[serde(default)]
    pub shift: f64,
    #[serde(default)]
    pub negate: bool,
}

fn empty_object() -> serde_json::Value {
    serde_json::Value::Object(Default::default())
}

impl MarginalSpec {
    fn build(&self, path: &str) -> Result<Marginal> {
        let doc = serde_json::json!({ "family": self.family, "params": self.params });
        let family: Family = from_value(doc, path)?;
        let mut m = Marginal::new(family).map_err(|e| config_err(&format!("{path}.params"), e))?;
        if self.negate {
            m = m.negated();
        }
        Ok(m.shifted(self.shift))
    }
}

/// Joint law of `(ξ, η)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawSpec {
    pub family: JointFamily,
    #[serde(default)]
    pub xi: Option<MarginalSpec>,
    #[serde(default)]
    pub eta: Option<MarginalSpec>,
    /// `η = g(ξ)` for the functional coupling.
    #[serde(default)]
    pub map: Option<MonotoneMap>,
}

impl LawSpec {
    pub fn build(&self, path: &str) -> Result<JointLaw> {
        let need = |m: &Option<MarginalSpec>, field: &str| -> Result<Marginal> {
            match m {
                Some(spec) => spec.build(&format!("{path}.{field}")),
                None => Err(Error::Config {
                    path: format!("{path}.{field}"),
                    message: format!("required for the {:?} family", self.family).to_lowercase(),
                }),
            }
        };
        let forbid = |present: bool, field: &str| -> Result<()> {
            if present {
                Err(Error::Config {
                    path: format!("{path}.{field}"),
                    message: format!("not allowed for the {:?} family", self.family).to_lowercase(),
                })
            } else {
                Ok(())
            }
        };
        let law = match self.family {
            JointFamily::Independent => {
                forbid(self.map.is_some(), "map")?;
                JointLaw::independent(need(&self.xi, "xi")?, need(&self.eta, "eta")?)
            }
            JointFamily::Functional => {
                forbid(self.eta.is_some(), "eta")?;
                let map = self.map.ok_or_else(|| Error::Config {
                    path: format!("{path}.map"),
                    message: "required for the functional family".into(),
                })?;
                JointLaw::functional(need(&self.xi, "xi")?, map)
            }
            JointFamily::BernoulliSieve => {
                forbid(self.xi.is_some(), "xi")?;
                forbid(self.eta.is_some(), "eta")?;
                forbid(self.map.is_some(), "map")?;
                JointLaw::bernoulli_sieve()
            }
        };
        law.map_err(|e| config_err(path, e))
    }
}

/// Parameter grids; experiments iterate over the ones they use.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grids {
    #[serde(default)]
    pub x: Vec<f64>,
    #[serde(default)]
    pub a: Vec<f64>,
    #[serde(default)]
    pub p: Vec<f64>,
    #[serde(default)]
    pub t: Vec<f64>,
    #[serde(default)]
    pub q: Vec<f64>,
    #[serde(default)]
    pub c: Vec<f64>,
    #[serde(default)]
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BudgetSpec {
    pub paths: usize,
    pub horizon: usize,
    pub n_max: usize,
}

impl Default for BudgetSpec {
    fn default() -> Self {
        BudgetSpec {
            paths: 100_000,
            horizon: 10_000,
            n_max: 1_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub dir: PathBuf,
    pub format: OutputFormat,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            dir: PathBuf::from("out"),
            format: OutputFormat::Both,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Must match the subcommand when given.
    #[serde(default)]
    pub experiment: Option<ExperimentKind>,
    #[serde(default)]
    pub law: Option<LawSpec>,
    #[serde(default)]
    pub params: Grids,
    #[serde(default)]
    pub budget: BudgetSpec,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub theorem: Option<String>,
    #[serde(default)]
    pub functional: Option<FunctionalName>,
    #[serde(default)]
    pub response: Option<ResponseProcess>,
    #[serde(default)]
    pub renewal: Option<RenewalKind>,
    #[serde(default)]
    pub scenario: Option<ScenarioName>,
    #[serde(default)]
    pub thresholds: VerdictThresholds,
}

fn default_seed() -> u64 {
    1
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: None,
            law: None,
            params: Grids::default(),
            budget: BudgetSpec::default(),
            seed: default_seed(),
            output: OutputSpec::default(),
            theorem: None,
            functional: None,
            response: None,
            renewal: None,
            scenario: None,
            thresholds: VerdictThresholds::default(),
        }
    }
}

fn config_err(path: &str, e: Error) -> Error {
    match e {
        Error::Config { .. } => e,
        other => Error::Config {
            path: path.to_string(),
            message: other.to_string(),
        },
    }
}

fn join(prefix: &str, rest: &str) -> String {
    match (prefix.is_empty(), rest.is_empty() || rest == ".") {
        (_, true) => prefix.to_string(),
        (true, false) => rest.to_string(),
        (false, false) => format!("{prefix}.{rest}"),
    }
}

/// Converts a serde error into a field-path error; a missing field is
/// reported at its own path.
fn path_error(prefix: &str, e: serde_path_to_error::Error<serde_json::Error>) -> Error {
    let mut path = join(prefix, &e.path().to_string());
    let message = e.inner().to_string();
    if let Some(rest) = message.strip_prefix("missing field `") {
        if let Some(field) = rest.split('`').next() {
            path = join(&path, field);
        }
    }
    Error::Config { path, message }
}

fn from_value<T: serde::de::DeserializeOwned>(v: serde_json::Value, prefix: &str) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| path_error(prefix, e))
}

/// Parses and schema-checks a configuration document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| path_error("", e))?;
    cfg.validate()?;
    Ok(cfg)
}

fn check(cond: bool, path: &str, message: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Config {
            path: path.to_string(),
            message: message.to_string(),
        })
    }
}

impl ExperimentConfig {
    /// Structural checks that do not depend on the subcommand.
    pub fn validate(&self) -> Result<()> {
        check(self.budget.paths >= 2, "budget.paths", "must be at least 2")?;
        check(self.budget.horizon >= 4, "budget.horizon", "must be at least 4")?;
        check(self.budget.n_max >= 4, "budget.n_max", "must be at least 4")?;
        let g = &self.params;
        for (name, grid) in [("x", &g.x), ("a", &g.a), ("p", &g.p), ("t", &g.t), ("q", &g.q), ("c", &g.c), ("y", &g.y)] {
            for (i, v) in grid.iter().enumerate() {
                check(v.is_finite(), &format!("params.{name}[{i}]"), "must be finite")?;
            }
        }
        for (i, &a) in g.a.iter().enumerate() {
            check(a > 0.0, &format!("params.a[{i}]"), "must be positive")?;
        }
        for (i, &p) in g.p.iter().enumerate() {
            check(p > 0.0, &format!("params.p[{i}]"), "must be positive")?;
        }
        for (i, &q) in g.q.iter().enumerate() {
            check(q >= 1.0, &format!("params.q[{i}]"), "must be at least 1")?;
        }
        for (i, &c) in g.c.iter().enumerate() {
            check(c >= 0.0, &format!("params.c[{i}]"), "must be nonnegative")?;
        }
        if let Some(law) = &self.law {
            law.build("law")?;
        }
        Ok(())
    }

    /// The configured law, or the error naming the missing field.
    pub fn joint_law(&self) -> Result<JointLaw> {
        match &self.law {
            Some(spec) => spec.build("law"),
            None => Err(Error::Config {
                path: "law".into(),
                message: "missing law descriptor".into(),
            }),
        }
    }
}

/// Named laws usable in place of a `law` section.
pub fn law_preset(name: &str) -> Result<LawSpec> {
    let text = match name {
        "two-point" => r#"{"family":"independent",
            "xi":{"family":"two_point","params":{"low":-1,"high":1,"p_high":0.8}},
            "eta":{"family":"exponential","params":{"rate":1}}}"#,
        "normal" => r#"{"family":"independent",
            "xi":{"family":"normal","params":{"mean":1,"sd":1}},
            "eta":{"family":"exponential","params":{"rate":1}}}"#,
        "exp-uniform" => r#"{"family":"independent",
            "xi":{"family":"exponential","params":{"rate":1}},
            "eta":{"family":"uniform","params":{"low":0,"high":1}}}"#,
        "bernoulli-sieve" => r#"{"family":"bernoulli_sieve"}"#,
        other => {
            return Err(Error::Config {
                path: "law".into(),
                message: format!("unknown preset `{other}` (known: two-point, normal, exp-uniform, bernoulli-sieve)"),
            })
        }
    };
    Ok(serde_json::from_str(text).expect("preset laws are well-formed"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err_path(text: &str) -> String {
        match parse_config(text) {
            Err(Error::Config { path, .. }) => path,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config() {
        let c = parse_config(r#"{"law": {"family": "bernoulli_sieve"}}"#).unwrap();
        assert_eq!(c.seed, 1);
        assert_eq!(c.budget.paths, 100_000);
        assert!(c.joint_law().unwrap().xi().p_neg() == 0.0);
    }

    #[test]
    fn missing_law_family() {
        assert_eq!(err_path(r#"{"law": {"xi": {"family": "exponential"}}}"#), "law.family");
    }

    #[test]
    fn unknown_keys_rejected() {
        assert_eq!(err_path(r#"{"bogus": 1}"#), "bogus");
        assert_eq!(err_path(r#"{"budget": {"paths": 10, "extra": 1}}"#), "budget.extra");
        let e = err_path(
            r#"{"law": {"family": "independent",
                "xi": {"family": "exponential", "params": {"rate": 1, "scale": 2}},
                "eta": {"family": "exponential", "params": {"rate": 1}}}}"#,
        );
        assert!(e.starts_with("law.xi"), "{e}");
    }

    #[test]
    fn semantic_paths() {
        assert_eq!(err_path(r#"{"params": {"a": [0.1, -1]}}"#), "params.a[1]");
        assert_eq!(
            err_path(r#"{"law": {"family": "independent", "xi": {"family": "exponential", "params": {"rate": 1}}}}"#),
            "law.eta"
        );
        assert_eq!(
            err_path(
                r#"{"law": {"family": "independent",
                    "xi": {"family": "exponential", "params": {"rate": -1}},
                    "eta": {"family": "exponential", "params": {"rate": 1}}}}"#
            ),
            "law.xi.params"
        );
    }

    #[test]
    fn presets_build() {
        for name in ["two-point", "normal", "exp-uniform", "bernoulli-sieve"] {
            law_preset(name).unwrap().build("law").unwrap();
        }
        assert!(law_preset("nope").is_err());
    }
}
