//! Command-line parsing and the resolved run configuration.
//!
//! Every emitted table carries its full configuration as metadata, and
//! parsing an emitted file recovers the `RunConfig` bit for bit.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;

pub const TOOL_NAME: &str = "ab-vortex";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Floats are printed with 17 significant digits in scientific notation so
/// that files are reproducible and parse back to the same bits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Parser, Debug)]
#[command(name = TOOL_NAME, version = TOOL_VERSION, about = "Aharonov-Bohm vortex scattering observables", long_about = None)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct PhysicsArgs {
    /// Flux through the tube in units of the flux quantum hc/|e|
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Scattering energy (natural units unless --units explicit)
    #[arg(long, default_value_t = 1.0)]
    pub energy: f64,
    /// Bound-state energy magnitude |E_-n| in channel l = -n
    #[arg(long)]
    pub e_bound_n: Option<f64>,
    /// Bound-state energy magnitude |E_-n-1| in channel l = -n-1
    #[arg(long)]
    pub e_bound_n1: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Forward exclusion window: grid covers phi_min <= |phi| <= phi_max
    #[arg(long, default_value_t = PI / 180.0)]
    pub phi_min: f64,
    #[arg(long, default_value_t = PI)]
    pub phi_max: f64,
    /// Total number of grid points (half per side)
    #[arg(long, default_value_t = 720)]
    pub phi_steps: usize,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Output path; stdout when omitted
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct UnitArgs {
    #[arg(long, value_enum, default_value_t = UnitMode::Natural)]
    pub units: UnitMode,
    /// Particle mass (explicit units only)
    #[arg(long)]
    pub mass: Option<f64>,
    /// Reduced Planck constant (explicit units only)
    #[arg(long)]
    pub hbar: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Phase shifts per angular-momentum channel around the modified pair
    PhaseShift {
        #[command(flatten)]
        physics: PhysicsArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        units: UnitArgs,
    },
    /// Differential cross section over an angular grid
    CrossSection {
        #[command(flatten)]
        physics: PhysicsArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        units: UnitArgs,
    },
    /// Resonance energy: closed form and numeric root
    Resonance {
        #[command(flatten)]
        physics: PhysicsArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        units: UnitArgs,
    },
    /// Dilute-vortex Hall resistivity with its quadrature cross-check
    Hall {
        #[command(flatten)]
        physics: PhysicsArgs,
        /// Vortex density (per area)
        #[arg(long)]
        n_v: f64,
        /// Electron density (per area)
        #[arg(long)]
        n_e: f64,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        units: UnitArgs,
    },
    /// Hall resistivity swept over a flux range at fixed bound energies
    Sweep {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha_start: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        alpha_stop: f64,
        #[arg(long, default_value_t = 101)]
        alpha_steps: usize,
        #[arg(long, default_value_t = 1.0)]
        energy: f64,
        #[arg(long)]
        e_bound_n: Option<f64>,
        #[arg(long)]
        e_bound_n1: Option<f64>,
        #[arg(long)]
        n_v: f64,
        #[arg(long)]
        n_e: f64,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        units: UnitArgs,
    },
    /// Run the invariant/oracle suite and check the reconciliation report
    Verify {
        /// Committed reconciliation report to check for staleness
        #[arg(long, default_value = "reports/reconciliation.json")]
        report: PathBuf,
        /// Regenerate the report instead of checking it
        #[arg(long)]
        write_report: bool,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Csv => write!(f, "csv"),
            Self::Json => write!(f, "json"),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitMode {
    /// hbar = 2m = 1, so k = sqrt(E)
    Natural,
    /// user-supplied mass and hbar
    Explicit,
}

impl fmt::Display for UnitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Natural => write!(f, "natural"),
            Self::Explicit => write!(f, "explicit"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcmd {
    PhaseShift,
    CrossSection,
    Resonance,
    Hall,
    Sweep,
}

impl Subcmd {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::PhaseShift => "phase-shift",
            Self::CrossSection => "cross-section",
            Self::Resonance => "resonance",
            Self::Hall => "hall",
            Self::Sweep => "sweep",
        }
    }

    fn from_str(s: &str) -> Option<Self> {
        match s {
            "phase-shift" => Some(Self::PhaseShift),
            "cross-section" => Some(Self::CrossSection),
            "resonance" => Some(Self::Resonance),
            "hall" => Some(Self::Hall),
            "sweep" => Some(Self::Sweep),
            _ => None,
        }
    }
}

/// Resolved configuration of a table-emitting run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: Subcmd,
    pub unit_system: UnitMode,
    pub mass: Option<f64>,
    pub hbar: Option<f64>,
    pub alpha: f64,
    pub energy: f64,
    pub e_bound_n: Option<f64>,
    pub e_bound_n1: Option<f64>,
    pub phi_min: f64,
    pub phi_max: f64,
    pub phi_steps: usize,
    pub alpha_start: Option<f64>,
    pub alpha_stop: Option<f64>,
    pub alpha_steps: Option<usize>,
    pub n_v: Option<f64>,
    pub n_e: Option<f64>,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

/// What `main` should do after parsing.
#[derive(Debug)]
pub enum Action {
    Table(RunConfig),
    Verify { report: PathBuf, write_report: bool },
}

fn require_positive(name: &str, value: f64) -> Result<(), String> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(format!("--{name} must be strictly positive (got {value})"))
    }
}

fn check_optional_positive(name: &str, value: Option<f64>) -> Result<(), String> {
    match value {
        Some(v) => require_positive(name, v),
        None => Ok(()),
    }
}

fn resolve_units(units: &UnitArgs) -> Result<(UnitMode, Option<f64>, Option<f64>), String> {
    match units.units {
        UnitMode::Natural => {
            if units.mass.is_some() || units.hbar.is_some() {
                return Err("--mass/--hbar only apply with --units explicit".into());
            }
            Ok((UnitMode::Natural, None, None))
        }
        UnitMode::Explicit => {
            let mass = units
                .mass
                .ok_or_else(|| "--units explicit requires --mass".to_string())?;
            let hbar = units
                .hbar
                .ok_or_else(|| "--units explicit requires --hbar".to_string())?;
            require_positive("mass", mass)?;
            require_positive("hbar", hbar)?;
            Ok((UnitMode::Explicit, Some(mass), Some(hbar)))
        }
    }
}

impl RunConfig {
    /// Validate a parsed command line. Errors are usage errors (exit 1).
    pub fn from_cli(cli: Cli) -> Result<Action, String> {
        let defaults_grid = GridArgs {
            phi_min: PI / 180.0,
            phi_max: PI,
            phi_steps: 720,
        };
        match cli.command {
            Command::Verify {
                report,
                write_report,
            } => Ok(Action::Verify {
                report,
                write_report,
            }),
            Command::PhaseShift { physics, out, units } => {
                Self::table(Subcmd::PhaseShift, physics, defaults_grid, None, out, units)
            }
            Command::CrossSection {
                physics,
                grid,
                out,
                units,
            } => Self::table(Subcmd::CrossSection, physics, grid, None, out, units),
            Command::Resonance { physics, out, units } => {
                Self::table(Subcmd::Resonance, physics, defaults_grid, None, out, units)
            }
            Command::Hall {
                physics,
                n_v,
                n_e,
                out,
                units,
            } => Self::table(
                Subcmd::Hall,
                physics,
                defaults_grid,
                Some((n_v, n_e)),
                out,
                units,
            ),
            Command::Sweep {
                alpha_start,
                alpha_stop,
                alpha_steps,
                energy,
                e_bound_n,
                e_bound_n1,
                n_v,
                n_e,
                out,
                units,
            } => {
                if !alpha_start.is_finite() || !alpha_stop.is_finite() {
                    return Err("sweep bounds must be finite".into());
                }
                if alpha_steps < 1 {
                    return Err("--alpha-steps must be at least 1".into());
                }
                require_positive("energy", energy)?;
                check_optional_positive("e-bound-n", e_bound_n)?;
                check_optional_positive("e-bound-n1", e_bound_n1)?;
                require_positive("n-v", n_v)?;
                require_positive("n-e", n_e)?;
                let (unit_system, mass, hbar) = resolve_units(&units)?;
                Ok(Action::Table(RunConfig {
                    subcommand: Subcmd::Sweep,
                    unit_system,
                    mass,
                    hbar,
                    alpha: alpha_start,
                    energy,
                    e_bound_n,
                    e_bound_n1,
                    phi_min: PI / 180.0,
                    phi_max: PI,
                    phi_steps: 720,
                    alpha_start: Some(alpha_start),
                    alpha_stop: Some(alpha_stop),
                    alpha_steps: Some(alpha_steps),
                    n_v: Some(n_v),
                    n_e: Some(n_e),
                    format: out.format,
                    output: out.output,
                }))
            }
        }
    }

    fn table(
        subcommand: Subcmd,
        physics: PhysicsArgs,
        grid: GridArgs,
        densities: Option<(f64, f64)>,
        out: OutputArgs,
        units: UnitArgs,
    ) -> Result<Action, String> {
        if !physics.alpha.is_finite() {
            return Err(format!("--alpha must be finite (got {})", physics.alpha));
        }
        require_positive("energy", physics.energy)?;
        check_optional_positive("e-bound-n", physics.e_bound_n)?;
        check_optional_positive("e-bound-n1", physics.e_bound_n1)?;
        if !grid.phi_min.is_finite() || grid.phi_min <= 0.0 {
            return Err(format!("--phi-min must be > 0 (got {})", grid.phi_min));
        }
        if !grid.phi_max.is_finite() || grid.phi_max > PI {
            return Err(format!("--phi-max must be <= pi (got {})", grid.phi_max));
        }
        if grid.phi_max <= grid.phi_min {
            return Err("--phi-max must exceed --phi-min".into());
        }
        if grid.phi_steps < 2 {
            return Err(format!(
                "--phi-steps must be at least 2 (got {})",
                grid.phi_steps
            ));
        }
        if let Some((n_v, n_e)) = densities {
            require_positive("n-v", n_v)?;
            require_positive("n-e", n_e)?;
        }
        let (unit_system, mass, hbar) = resolve_units(&units)?;
        Ok(Action::Table(RunConfig {
            subcommand,
            unit_system,
            mass,
            hbar,
            alpha: physics.alpha,
            energy: physics.energy,
            e_bound_n: physics.e_bound_n,
            e_bound_n1: physics.e_bound_n1,
            phi_min: grid.phi_min,
            phi_max: grid.phi_max,
            phi_steps: grid.phi_steps,
            alpha_start: None,
            alpha_stop: None,
            alpha_steps: None,
            n_v: densities.map(|d| d.0),
            n_e: densities.map(|d| d.1),
            format: out.format,
            output: out.output,
        }))
    }

    /// Kinematics for this configuration.
    pub fn kinematics(&self) -> Result<ab_vortex::Kinematics, ab_vortex::AbError> {
        match self.unit_system {
            UnitMode::Natural => ab_vortex::Kinematics::natural(self.energy),
            UnitMode::Explicit => ab_vortex::Kinematics::explicit(
                self.energy,
                self.mass.unwrap_or(0.5),
                self.hbar.unwrap_or(1.0),
            ),
        }
    }

    fn opt(v: Option<f64>) -> String {
        v.map_or_else(|| "absent".to_string(), fmt_float)
    }

    fn opt_usize(v: Option<usize>) -> String {
        v.map_or_else(|| "absent".to_string(), |n| n.to_string())
    }

    /// Metadata key/value pairs, in emission order.
    pub fn metadata_pairs(&self) -> Vec<(&'static str, String)> {
        vec![
            ("subcommand", self.subcommand.as_str().to_string()),
            ("unit_system", self.unit_system.to_string()),
            ("mass", Self::opt(self.mass)),
            ("hbar", Self::opt(self.hbar)),
            ("alpha", fmt_float(self.alpha)),
            ("energy", fmt_float(self.energy)),
            ("e_bound_n", Self::opt(self.e_bound_n)),
            ("e_bound_n1", Self::opt(self.e_bound_n1)),
            ("phi_min", fmt_float(self.phi_min)),
            ("phi_max", fmt_float(self.phi_max)),
            ("phi_steps", self.phi_steps.to_string()),
            ("alpha_start", Self::opt(self.alpha_start)),
            ("alpha_stop", Self::opt(self.alpha_stop)),
            ("alpha_steps", Self::opt_usize(self.alpha_steps)),
            ("n_v", Self::opt(self.n_v)),
            ("n_e", Self::opt(self.n_e)),
            ("format", self.format.to_string()),
            (
                "output",
                self.output
                    .as_ref()
                    .map_or_else(|| "-".to_string(), |p| p.display().to_string()),
            ),
        ]
    }

    /// Rebuild a config from metadata key/value pairs.
    pub fn from_metadata_pairs(pairs: &[(String, String)]) -> Result<Self, String> {
        let get = |key: &str| -> Result<&str, String> {
            pairs
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| format!("metadata missing key `{key}`"))
        };
        let parse_f64 = |key: &str| -> Result<f64, String> {
            get(key)?
                .parse::<f64>()
                .map_err(|e| format!("metadata `{key}`: {e}"))
        };
        let parse_opt = |key: &str| -> Result<Option<f64>, String> {
            let v = get(key)?;
            if v == "absent" {
                Ok(None)
            } else {
                v.parse::<f64>()
                    .map(Some)
                    .map_err(|e| format!("metadata `{key}`: {e}"))
            }
        };
        let subcommand_name = get("subcommand")?;
        let subcommand = Subcmd::from_str(subcommand_name)
            .ok_or_else(|| format!("unknown subcommand `{subcommand_name}`"))?;
        let unit_system = match get("unit_system")? {
            "natural" => UnitMode::Natural,
            "explicit" => UnitMode::Explicit,
            other => return Err(format!("unknown unit system `{other}`")),
        };
        let format = match get("format")? {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            other => return Err(format!("unknown format `{other}`")),
        };
        let alpha_steps = match get("alpha_steps")? {
            "absent" => None,
            v => Some(
                v.parse::<usize>()
                    .map_err(|e| format!("metadata `alpha_steps`: {e}"))?,
            ),
        };
        let output = match get("output")? {
            "-" => None,
            p => Some(PathBuf::from(p)),
        };
        Ok(Self {
            subcommand,
            unit_system,
            mass: parse_opt("mass")?,
            hbar: parse_opt("hbar")?,
            alpha: parse_f64("alpha")?,
            energy: parse_f64("energy")?,
            e_bound_n: parse_opt("e_bound_n")?,
            e_bound_n1: parse_opt("e_bound_n1")?,
            phi_min: parse_f64("phi_min")?,
            phi_max: parse_f64("phi_max")?,
            phi_steps: get("phi_steps")?
                .parse::<usize>()
                .map_err(|e| format!("metadata `phi_steps`: {e}"))?,
            alpha_start: parse_opt("alpha_start")?,
            alpha_stop: parse_opt("alpha_stop")?,
            alpha_steps,
            n_v: parse_opt("n_v")?,
            n_e: parse_opt("n_e")?,
            format,
            output,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn parse(args: &[&str]) -> Result<Action, String> {
        let cli = Cli::try_parse_from(
            std::iter::once("ab-vortex").chain(args.iter().copied()),
        )
        .map_err(|e| e.to_string())?;
        RunConfig::from_cli(cli)
    }

    #[test]
    fn accepts_documented_examples() {
        let action = parse(&[
            "cross-section",
            "--alpha",
            "0.25",
            "--energy",
            "2",
            "--e-bound-n",
            "1",
        ])
        .unwrap();
        match action {
            Action::Table(cfg) => {
                assert_eq!(cfg.subcommand, Subcmd::CrossSection);
                assert_eq!(cfg.alpha, 0.25);
                assert_eq!(cfg.e_bound_n, Some(1.0));
                assert_eq!(cfg.phi_steps, 720);
            }
            other => panic!("unexpected action {other:?}"),
        }

        assert!(parse(&["resonance", "--alpha", "0.25", "--e-bound-n", "1"]).is_ok());
    }

    #[test]
    fn rejects_malformed_numbers() {
        assert!(parse(&["cross-section", "--alpha", "abc"]).is_err());
    }

    #[test]
    fn rejects_out_of_range_values() {
        assert!(parse(&["cross-section", "--alpha", "0.25", "--phi-min", "0"]).is_err());
        assert!(parse(&["cross-section", "--alpha", "0.25", "--phi-max", "4.0"]).is_err());
        assert!(parse(&["cross-section", "--alpha", "0.25", "--energy", "-1"]).is_err());
        assert!(parse(&["hall", "--alpha", "0.25", "--n-v", "0", "--n-e", "1"]).is_err());
        assert!(parse(&["cross-section", "--alpha", "0.25", "--e-bound-n", "-2"]).is_err());
    }

    #[test]
    fn explicit_units_require_constants() {
        assert!(parse(&["resonance", "--alpha", "0.25", "--units", "explicit"]).is_err());
        assert!(parse(&[
            "resonance",
            "--alpha",
            "0.25",
            "--e-bound-n",
            "1",
            "--units",
            "explicit",
            "--mass",
            "1.0",
            "--hbar",
            "1.0"
        ])
        .is_ok());
        // constants are rejected in natural mode rather than ignored
        assert!(parse(&["resonance", "--alpha", "0.25", "--mass", "1.0"]).is_err());
    }

    #[test]
    fn metadata_pairs_round_trip() {
        let Action::Table(cfg) = parse(&[
            "hall",
            "--alpha",
            "-0.75",
            "--energy",
            "3",
            "--e-bound-n1",
            "0.5",
            "--n-v",
            "0.01",
            "--n-e",
            "1",
            "--format",
            "json",
        ])
        .unwrap() else {
            panic!("expected table action");
        };
        let pairs: Vec<(String, String)> = cfg
            .metadata_pairs()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let rebuilt = RunConfig::from_metadata_pairs(&pairs).unwrap();
        assert_eq!(rebuilt, cfg);
    }
}
