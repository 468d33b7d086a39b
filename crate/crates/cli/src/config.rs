//! Scenario configuration: TOML files, command-line flags and defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Eikonal,
    HeleShaw,
    Hopkinson,
    Craya,
    Porous,
    Viscous,
    BornInfeld,
    Classify,
}

impl Scenario {
    pub const ALL: [Scenario; 8] = [
        Scenario::Eikonal,
        Scenario::HeleShaw,
        Scenario::Hopkinson,
        Scenario::Craya,
        Scenario::Porous,
        Scenario::Viscous,
        Scenario::BornInfeld,
        Scenario::Classify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Eikonal => "eikonal",
            Scenario::HeleShaw => "hele-shaw",
            Scenario::Hopkinson => "hopkinson",
            Scenario::Craya => "craya",
            Scenario::Porous => "porous",
            Scenario::Viscous => "viscous",
            Scenario::BornInfeld => "born-infeld",
            Scenario::Classify => "classify",
        }
    }

    /// Parameters filled in when neither the config file nor a flag sets them.
    pub fn defaults(self) -> Params {
        let mut p = Params::default();
        let n = Value::from(DEFAULT_SAMPLES);
        match self {
            Scenario::Eikonal => {
                p.set("a1", 1.0);
                p.set("a2", 0.0);
                p.set("t-list", "auto");
                p.set("x0-range", vec![-0.5, 0.5]);
                p.set("samples", n);
            }
            Scenario::HeleShaw => {
                p.set("a1", 1.0);
                p.set("a2", 0.0625);
                p.set("t-list", "auto");
                p.set("theta-samples", n);
                p.set("theta-window", 0.6);
            }
            Scenario::Hopkinson => {
                p.set("m", 1.0);
                p.set("samples", n);
                p.set("find-critical-m", false);
            }
            Scenario::Craya => {
                p.set("samples", n);
            }
            Scenario::Porous => {
                p.set("A", 1.0);
                p.set("sigma-max", 0.0);
                p.set("samples", n);
            }
            Scenario::Viscous => {
                p.set("ca", 0.25);
                p.set("ca-sweep", "auto");
                p.set("theta-samples", n);
            }
            Scenario::BornInfeld => {
                // pi/4 + (zeta - 1)/2 - (zeta - 1)^2/2, expanded about zero
                p.set("f-coeffs", vec![std::f64::consts::FRAC_PI_4 - 1.0, 1.5, -0.5]);
                p.set("lambda", 1.0);
                p.set("t-list", "auto");
                p.set("phi-range", vec![-0.6, 0.6]);
                p.set("samples", n);
                p.set("t-max", 10.0);
            }
            Scenario::Classify => {}
        }
        p
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| CliError::UnknownScenario(s.into()))
    }
}

pub const DEFAULT_SAMPLES: usize = 4096;
pub const DEFAULT_SLICES: usize = 8;
pub const DEFAULT_OUTPUT: &str = "cusplab-output";
pub const OUTPUT_ENV: &str = "CUSPLAB_OUTPUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(CliError::invalid("format", format!("unknown format '{other}'"))),
        }
    }
}

/// Either `auto` or explicit values.
#[derive(Debug, Clone, PartialEq)]
pub enum ListSpec {
    Auto,
    Values(Vec<f64>),
}

/// Scenario parameters keyed by their flag names.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Params(pub BTreeMap<String, Value>);

impl Params {
    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.0.insert(key.into(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }

    /// Keys of `other` replace those of `self`.
    pub fn overlay(&mut self, other: &Params) {
        for (k, v) in &other.0 {
            self.0.insert(k.clone(), v.clone());
        }
    }

    fn required(&self, key: &str) -> Result<&Value> {
        self.get(key).ok_or_else(|| CliError::MissingParameter(key.into()))
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        let v = self.required(key)?;
        let x = match v {
            Value::Number(n) => n.as_f64(),
            Value::String(s) => s.trim().parse().ok(),
            _ => None,
        };
        x.filter(|x| x.is_finite())
            .ok_or_else(|| CliError::invalid(key, format!("expected a number, got {v}")))
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        let v = self.required(key)?;
        let x = match v {
            Value::Number(n) => n.as_u64(),
            Value::String(s) => s.trim().parse().ok(),
            _ => None,
        };
        x.and_then(|x| usize::try_from(x).ok())
            .ok_or_else(|| CliError::invalid(key, format!("expected a non-negative integer, got {v}")))
    }

    pub fn bool(&self, key: &str) -> Result<bool> {
        match self.required(key)? {
            Value::Bool(b) => Ok(*b),
            Value::String(s) if s == "true" => Ok(true),
            Value::String(s) if s == "false" => Ok(false),
            v => Err(CliError::invalid(key, format!("expected true or false, got {v}"))),
        }
    }

    pub fn string(&self, key: &str) -> Result<String> {
        match self.required(key)? {
            Value::String(s) => Ok(s.clone()),
            v => Err(CliError::invalid(key, format!("expected a string, got {v}"))),
        }
    }

    /// A number list given as an array, a comma-separated string, or `auto`.
    pub fn list(&self, key: &str) -> Result<ListSpec> {
        let bad = |v: &Value| CliError::invalid(key, format!("expected 'auto' or a list of numbers, got {v}"));
        match self.required(key)? {
            Value::String(s) if s.trim() == "auto" => Ok(ListSpec::Auto),
            Value::String(s) => s
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(ListSpec::Values)
                .map_err(|_| bad(&Value::String(s.clone()))),
            Value::Array(items) => items
                .iter()
                .map(|v| v.as_f64().ok_or_else(|| bad(v)))
                .collect::<Result<Vec<_>>>()
                .map(ListSpec::Values),
            Value::Number(n) => Ok(ListSpec::Values(vec![n.as_f64().unwrap_or(f64::NAN)])),
            v => Err(bad(v)),
        }
        .and_then(|spec| match &spec {
            ListSpec::Values(v) if v.is_empty() || v.iter().any(|x| !x.is_finite()) => {
                Err(CliError::invalid(key, "list must hold finite numbers"))
            }
            _ => Ok(spec),
        })
    }

    /// A `lo,hi` pair with `lo < hi`.
    pub fn range(&self, key: &str) -> Result<(f64, f64)> {
        match self.list(key)? {
            ListSpec::Values(v) if v.len() == 2 && v[0] < v[1] => Ok((v[0], v[1])),
            _ => Err(CliError::invalid(key, "expected two increasing numbers lo,hi")),
        }
    }
}

/// Contents of a `--config` TOML file. Every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: Option<String>,
    pub output: Option<PathBuf>,
    pub formats: Option<Vec<Format>>,
    #[serde(default)]
    pub parameters: Params,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
            path: path.into(),
            source,
        })?;
        toml::from_str(&text).map_err(|source| CliError::ConfigParse {
            path: path.into(),
            source,
        })
    }
}

/// A fully resolved run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub parameters: Params,
    /// Output root; files go under `<output>/<scenario>/`.
    pub output: PathBuf,
    pub formats: Vec<Format>,
}

impl ScenarioConfig {
    /// Defaults, then the config file, then flags. The output root is the
    /// `--output` flag, else `CUSPLAB_OUTPUT`, else the config file, else
    /// [`DEFAULT_OUTPUT`].
    pub fn resolve(
        scenario: Option<Scenario>,
        file: Option<ConfigFile>,
        flags: Params,
        output: Option<PathBuf>,
        formats: Option<Vec<Format>>,
    ) -> Result<Self> {
        let file = file.unwrap_or_default();
        let from_file = file.scenario.as_deref().map(str::parse::<Scenario>).transpose()?;
        let scenario = match (scenario, from_file) {
            (Some(s), Some(f)) if s != f => {
                return Err(CliError::ScenarioMismatch {
                    config: f.name().into(),
                    command: s.name().into(),
                })
            }
            (Some(s), _) | (None, Some(s)) => s,
            (None, None) => return Err(CliError::MissingParameter("scenario".into())),
        };
        let mut parameters = scenario.defaults();
        parameters.overlay(&file.parameters);
        parameters.overlay(&flags);
        let output = output
            .or_else(|| std::env::var_os(OUTPUT_ENV).map(PathBuf::from))
            .or(file.output)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT));
        let mut formats = formats.or(file.formats).unwrap_or_else(|| vec![Format::Json]);
        formats.sort();
        formats.dedup();
        if !formats.contains(&Format::Json) {
            formats.insert(0, Format::Json);
        }
        Ok(Self {
            scenario,
            parameters,
            output,
            formats,
        })
    }

    pub fn scenario_dir(&self) -> PathBuf {
        self.output.join(self.scenario.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_names_round_trip() {
        for s in Scenario::ALL {
            assert_eq!(s.name().parse::<Scenario>().unwrap(), s);
        }
        assert!(matches!(
            "tsunami".parse::<Scenario>(),
            Err(CliError::UnknownScenario(_))
        ));
    }

    #[test]
    fn lists_and_ranges() {
        let mut p = Params::default();
        p.set("a", "auto");
        p.set("b", "0.1, 0.01,0");
        p.set("c", vec![1.0, 2.0]);
        p.set("d", "2,1");
        p.set("e", "x,1");
        assert_eq!(p.list("a").unwrap(), ListSpec::Auto);
        assert_eq!(p.list("b").unwrap(), ListSpec::Values(vec![0.1, 0.01, 0.0]));
        assert_eq!(p.range("c").unwrap(), (1.0, 2.0));
        assert!(p.range("d").is_err());
        assert!(p.list("e").is_err());
        assert!(matches!(p.f64("zz"), Err(CliError::MissingParameter(_))));
    }

    #[test]
    fn precedence() {
        let file: ConfigFile =
            toml::from_str("scenario = \"hele-shaw\"\nformats = [\"csv\"]\n[parameters]\na1 = 2.0\na2 = 0.5\n")
                .unwrap();
        let mut flags = Params::default();
        flags.set("a2", 0.25);
        let cfg = ScenarioConfig::resolve(None, Some(file), flags, Some("out".into()), None).unwrap();
        assert_eq!(cfg.scenario, Scenario::HeleShaw);
        assert_eq!(cfg.parameters.f64("a1").unwrap(), 2.0);
        assert_eq!(cfg.parameters.f64("a2").unwrap(), 0.25);
        assert_eq!(cfg.parameters.usize("theta-samples").unwrap(), DEFAULT_SAMPLES);
        assert_eq!(cfg.formats, vec![Format::Json, Format::Csv]);
        assert_eq!(cfg.scenario_dir(), PathBuf::from("out/hele-shaw"));
    }

    #[test]
    fn mismatched_scenario() {
        let file: ConfigFile = toml::from_str("scenario = \"craya\"").unwrap();
        let r = ScenarioConfig::resolve(Some(Scenario::Porous), Some(file), Params::default(), None, None);
        assert!(matches!(r, Err(CliError::ScenarioMismatch { .. })));
    }

    #[test]
    fn unknown_config_keys_rejected() {
        assert!(toml::from_str::<ConfigFile>("scenaro = \"craya\"").is_err());
    }
}
