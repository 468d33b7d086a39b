use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use cusplab::normal_forms::SingularityReport;
use cusplab::CurveFamily;
use serde::Serialize;
use serde_json::Value;

use crate::config::{Format, Params, Scenario, ScenarioConfig};
use crate::error::{CliError, Result};
use crate::scenarios;

/// Summary written to `report.json`. Wall time is kept out of the file so
/// that identical configs give identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub scenario: Scenario,
    pub input: Params,
    /// Written files, relative to the output root.
    pub artifacts: Vec<String>,
    pub singularity: Option<SingularityReport>,
    pub results: Value,
    #[serde(skip)]
    pub wall_time: Duration,
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| CliError::Output {
        path: path.into(),
        source,
    })
}

/// `label,sigma,x,y` rows for every curve in the family.
pub fn family_csv(family: &CurveFamily) -> String {
    let mut out = String::from("curve,label,sigma,x,y\n");
    for (i, c) in family.curves.iter().enumerate() {
        let label = c.label().map(|l| l.to_string()).unwrap_or_default();
        for (s, p) in c.params().iter().zip(c.points()) {
            let _ = writeln!(out, "{i},{label},{s},{},{}", p[0], p[1]);
        }
    }
    out
}

/// Runs the scenario and writes its artifacts under `<output>/<scenario>/`.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunReport> {
    let start = Instant::now();
    let out = scenarios::run(config.scenario, &config.parameters)?;
    let dir = config.scenario_dir();
    fs::create_dir_all(&dir).map_err(|source| CliError::Output {
        path: dir.clone(),
        source,
    })?;
    let name = config.scenario.name();
    let mut artifacts = Vec::new();
    if let Some(family) = &out.family {
        write(&dir.join("curves.json"), &family.to_json()?)?;
        artifacts.push(format!("{name}/curves.json"));
        if config.formats.contains(&Format::Csv) {
            write(&dir.join("curves.csv"), &family_csv(family))?;
            artifacts.push(format!("{name}/curves.csv"));
        }
    }
    artifacts.push(format!("{name}/report.json"));
    let mut report = RunReport {
        scenario: config.scenario,
        input: config.parameters.clone(),
        artifacts,
        singularity: out.singularity,
        results: out.results,
        wall_time: Duration::ZERO,
    };
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    write(&dir.join("report.json"), &json)?;
    report.wall_time = start.elapsed();
    Ok(report)
}
