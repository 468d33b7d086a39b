//! Command-line surface. Flags left unset fall through to the config file,
//! then to the scenario defaults.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{ConfigFile, Format, Params, Scenario, ScenarioConfig};
use crate::error::Result;

#[derive(Debug, Parser)]
#[command(
    name = "cusplab",
    version,
    about = "Exact free-surface singularities and their normal forms"
)]
pub struct Cli {
    /// TOML file with `scenario`, `output`, `formats` and a `[parameters]` table.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output root; overrides CUSPLAB_OUTPUT and the config file.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Comma-separated output formats: json, csv.
    #[arg(long, global = true, value_delimiter = ',')]
    pub format: Option<Vec<String>>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parabolic wave front focusing into a swallowtail.
    Eikonal(EikonalArgs),
    /// Suction from a Hele-Shaw cell with a quadratic conformal map.
    HeleShaw(HeleShawArgs),
    /// Hopkinson's steady drop in potential flow.
    Hopkinson(HopkinsonArgs),
    /// Craya-Sautreaux ridge by quadrature.
    Craya(CrayaArgs),
    /// Oil-water interface in a porous medium near the tip.
    Porous(PorousArgs),
    /// Two-dimensional viscous cusp against the capillary number.
    Viscous(ViscousArgs),
    /// Hoppe's Born-Infeld string.
    BornInfeld(BornInfeldArgs),
    /// Classify a stored curve family.
    Classify(ClassifyArgs),
    /// Run the scenario named in the config file.
    Run,
}

#[derive(Debug, Args)]
pub struct EikonalArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a2: Option<f64>,
    /// Distances to the singular time, comma-separated, or `auto`.
    #[arg(long, allow_hyphen_values = true)]
    pub t_list: Option<String>,
    /// Initial abscissae as `lo,hi`.
    #[arg(long, allow_hyphen_values = true)]
    pub x0_range: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct HeleShawArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a2: Option<f64>,
    /// Distances to the singular time, comma-separated, or `auto`.
    #[arg(long, allow_hyphen_values = true)]
    pub t_list: Option<String>,
    #[arg(long)]
    pub theta_samples: Option<usize>,
    /// Half-width of the angular window around the cusp.
    #[arg(long)]
    pub theta_window: Option<f64>,
}

#[derive(Debug, Args)]
pub struct HopkinsonArgs {
    #[arg(long)]
    pub m: Option<f64>,
    /// Values of m for the self-intersection sweep, or `auto`.
    #[arg(long)]
    pub m_sweep: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Locate the m at which the drop first self-intersects.
    #[arg(long)]
    pub find_critical_m: bool,
}

#[derive(Debug, Args)]
pub struct CrayaArgs {
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PorousArgs {
    #[arg(long = "A")]
    pub amplitude: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma_max: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ViscousArgs {
    #[arg(long)]
    pub ca: Option<f64>,
    /// Capillary numbers for the tip-radius fit, or `auto`.
    #[arg(long)]
    pub ca_sweep: Option<String>,
    #[arg(long)]
    pub theta_samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BornInfeldArgs {
    /// Coefficients of f in powers of zeta, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    pub f_coeffs: Option<String>,
    /// Coefficients of g; omitted means g(zeta) = -f(-zeta).
    #[arg(long, allow_hyphen_values = true)]
    pub g_coeffs: Option<String>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Distances to the singular time, comma-separated, or `auto`.
    #[arg(long, allow_hyphen_values = true)]
    pub t_list: Option<String>,
    /// String parameter range as `lo,hi`.
    #[arg(long, allow_hyphen_values = true)]
    pub phi_range: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// A curves.json file.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

fn put<T: Into<serde_json::Value>>(p: &mut Params, key: &str, v: Option<T>) {
    if let Some(v) = v {
        p.set(key, v);
    }
}

impl Command {
    /// The scenario and the flags that were actually given.
    pub fn flags(&self) -> (Option<Scenario>, Params) {
        let mut p = Params::default();
        let scenario = match self {
            Command::Eikonal(a) => {
                put(&mut p, "a1", a.a1);
                put(&mut p, "a2", a.a2);
                put(&mut p, "t-list", a.t_list.clone());
                put(&mut p, "x0-range", a.x0_range.clone());
                put(&mut p, "samples", a.samples);
                Scenario::Eikonal
            }
            Command::HeleShaw(a) => {
                put(&mut p, "a1", a.a1);
                put(&mut p, "a2", a.a2);
                put(&mut p, "t-list", a.t_list.clone());
                put(&mut p, "theta-samples", a.theta_samples);
                put(&mut p, "theta-window", a.theta_window);
                Scenario::HeleShaw
            }
            Command::Hopkinson(a) => {
                put(&mut p, "m", a.m);
                put(&mut p, "m-sweep", a.m_sweep.clone());
                put(&mut p, "samples", a.samples);
                put(&mut p, "find-critical-m", a.find_critical_m.then_some(true));
                Scenario::Hopkinson
            }
            Command::Craya(a) => {
                put(&mut p, "samples", a.samples);
                Scenario::Craya
            }
            Command::Porous(a) => {
                put(&mut p, "A", a.amplitude);
                put(&mut p, "sigma-max", a.sigma_max);
                put(&mut p, "samples", a.samples);
                Scenario::Porous
            }
            Command::Viscous(a) => {
                put(&mut p, "ca", a.ca);
                put(&mut p, "ca-sweep", a.ca_sweep.clone());
                put(&mut p, "theta-samples", a.theta_samples);
                Scenario::Viscous
            }
            Command::BornInfeld(a) => {
                put(&mut p, "f-coeffs", a.f_coeffs.clone());
                put(&mut p, "g-coeffs", a.g_coeffs.clone());
                put(&mut p, "lambda", a.lambda);
                put(&mut p, "t-list", a.t_list.clone());
                put(&mut p, "phi-range", a.phi_range.clone());
                put(&mut p, "samples", a.samples);
                Scenario::BornInfeld
            }
            Command::Classify(a) => {
                put(&mut p, "input", a.input.as_ref().map(|i| i.display().to_string()));
                Scenario::Classify
            }
            Command::Run => return (None, p),
        };
        (Some(scenario), p)
    }
}

impl Cli {
    pub fn resolve(&self) -> Result<ScenarioConfig> {
        let file = self.config.as_deref().map(ConfigFile::load).transpose()?;
        let formats = self
            .format
            .as_ref()
            .map(|v| v.iter().map(|s| s.parse::<Format>()).collect::<Result<Vec<_>>>())
            .transpose()?;
        let (scenario, flags) = self.command.flags();
        ScenarioConfig::resolve(scenario, file, flags, self.output.clone(), formats)
    }
}
