//! Command-line flags, the optional JSON config file, and their merge into a
//! validated [`RunConfig`].

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use parafermi_jc_core::Deformation;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "parafermi-jc", version, about = "Parafermionic Jaynes-Cummings blocks, spectra and thermodynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Block dimensions d_n(k) for n = 0..=n_max.
    Dims(ModelArgs),
    /// Eigenvalues of H_n, with closed-form values where a formula applies.
    Spectrum(ModelArgs),
    /// Thermal observables of H_n over an omega grid.
    ThermoScan(ModelArgs),
    /// Numeric against semiclassical free energy over an omega grid.
    SemiclassicalCompare(ModelArgs),
    /// Run the built-in invariant suites and print a JSON summary.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    All,
    Algebra,
    Deformation,
    Hamiltonian,
    Eigen,
    Exact,
    Thermo,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub scope: Scope,
}

#[derive(Debug, Default, Clone, Args)]
pub struct ModelArgs {
    /// Nilpotency order F.
    #[arg(long = "F")]
    pub order: Option<u32>,
    /// Number of parafermion modes k.
    #[arg(long = "k")]
    pub modes: Option<usize>,
    /// Total excitation number of the block.
    #[arg(long)]
    pub n: Option<u32>,
    /// Largest n listed by `dims`.
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Boson frequency for single-point commands.
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub omega_min: Option<f64>,
    #[arg(long)]
    pub omega_max: Option<f64>,
    #[arg(long)]
    pub omega_count: Option<usize>,
    #[arg(long, value_enum)]
    pub omega_scale: Option<Scale>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// undeformed, linear, qsym, qexp, pfosc, or a JSON record such as
    /// {"type":"qexp","hbar":1.0}.
    #[arg(long)]
    pub deformation: Option<String>,
    /// Step of the mu finite difference; defaults to 1e-4.
    #[arg(long)]
    pub mu_step: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Flat JSON file with any of the above keys; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Deformation as written by a user, before `ħ`/`F` defaults are filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum DeformationSpec {
    Undeformed,
    Linear {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hbar: Option<f64>,
    },
    Qsym {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        q: Option<f64>,
    },
    Qexp {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hbar: Option<f64>,
    },
    Pfosc {
        #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
        order: Option<u32>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum DeformationInput {
    Name(String),
    Record(DeformationSpec),
}

impl DeformationSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let text = text.trim();
        if text.starts_with('{') {
            return serde_json::from_str(text).map_err(|e| CliError::Parameter(format!("deformation: {e}")));
        }
        Self::from_name(text)
    }

    fn from_name(name: &str) -> Result<Self, CliError> {
        Ok(match name {
            "undeformed" => DeformationSpec::Undeformed,
            "linear" => DeformationSpec::Linear { hbar: None },
            "qsym" => DeformationSpec::Qsym { q: None },
            "qexp" => DeformationSpec::Qexp { hbar: None },
            "pfosc" => DeformationSpec::Pfosc { order: None },
            other => {
                return Err(CliError::Parameter(format!(
                    "unknown deformation `{other}` (expected undeformed, linear, qsym, qexp or pfosc)"
                )))
            }
        })
    }

    /// Fills missing parameters: `ħ` from `--hbar`, `q = e^ħ`, `F` from `--F`.
    pub fn resolve(&self, hbar: f64, order: u32) -> Deformation {
        match *self {
            DeformationSpec::Undeformed => Deformation::Undeformed,
            DeformationSpec::Linear { hbar: h } => Deformation::LinearHbar { hbar: h.unwrap_or(hbar) },
            DeformationSpec::Qsym { q } => Deformation::QNumberSym { q: q.unwrap_or(hbar.exp()) },
            DeformationSpec::Qexp { hbar: h } => Deformation::QNumberExp { hbar: h.unwrap_or(hbar) },
            DeformationSpec::Pfosc { order: f } => Deformation::ParafermionicOsc { order: f.unwrap_or(order) },
        }
    }

    /// Same spec with every default made explicit, for echoing in output.
    pub fn explicit(&self, hbar: f64, order: u32) -> Self {
        match *self {
            DeformationSpec::Undeformed => DeformationSpec::Undeformed,
            DeformationSpec::Linear { hbar: h } => DeformationSpec::Linear { hbar: Some(h.unwrap_or(hbar)) },
            DeformationSpec::Qsym { q } => DeformationSpec::Qsym { q: Some(q.unwrap_or(hbar.exp())) },
            DeformationSpec::Qexp { hbar: h } => DeformationSpec::Qexp { hbar: Some(h.unwrap_or(hbar)) },
            DeformationSpec::Pfosc { order: f } => DeformationSpec::Pfosc { order: Some(f.unwrap_or(order)) },
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(rename = "F")]
    order: Option<u32>,
    k: Option<usize>,
    n: Option<u32>,
    n_max: Option<u32>,
    omega: Option<f64>,
    omega_min: Option<f64>,
    omega_max: Option<f64>,
    omega_count: Option<usize>,
    omega_scale: Option<Scale>,
    delta: Option<f64>,
    g: Option<f64>,
    hbar: Option<f64>,
    beta: Option<f64>,
    deformation: Option<DeformationInput>,
    mu_step: Option<f64>,
    out: Option<PathBuf>,
    format: Option<Format>,
}

/// Fully resolved and validated settings of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    #[serde(rename = "F")]
    pub order: u32,
    pub k: usize,
    pub n: u32,
    pub n_max: u32,
    pub omega: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_count: usize,
    pub omega_scale: Scale,
    pub delta: f64,
    pub g: f64,
    pub hbar: f64,
    pub beta: f64,
    pub deformation: DeformationSpec,
    pub mu_step: f64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
}

impl RunConfig {
    pub fn from_args(args: &ModelArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Parameter(format!("config {}: {e}", path.display())))?;
                serde_json::from_str::<FileConfig>(&text)
                    .map_err(|e| CliError::Parameter(format!("config {}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        let deformation = match (&args.deformation, file.deformation) {
            (Some(text), _) => DeformationSpec::parse(text)?,
            (None, Some(DeformationInput::Name(name))) => DeformationSpec::from_name(&name)?,
            (None, Some(DeformationInput::Record(spec))) => spec,
            (None, None) => DeformationSpec::Undeformed,
        };
        let order = args.order.or(file.order).unwrap_or(2);
        let hbar = args.hbar.or(file.hbar).unwrap_or(1.0);
        let cfg = RunConfig {
            order,
            k: args.modes.or(file.k).unwrap_or(1),
            n: args.n.or(file.n).unwrap_or(1),
            n_max: args.n_max.or(file.n_max).unwrap_or(10),
            omega: args.omega.or(file.omega).unwrap_or(1.0),
            omega_min: args.omega_min.or(file.omega_min).unwrap_or(0.5),
            omega_max: args.omega_max.or(file.omega_max).unwrap_or(100.0),
            omega_count: args.omega_count.or(file.omega_count).unwrap_or(400),
            omega_scale: args.omega_scale.or(file.omega_scale).unwrap_or(Scale::Log),
            delta: args.delta.or(file.delta).unwrap_or(1.0),
            g: args.g.or(file.g).unwrap_or(1.0),
            hbar,
            beta: args.beta.or(file.beta).unwrap_or(1.0),
            deformation: deformation.explicit(hbar, order),
            mu_step: args.mu_step.or(file.mu_step).unwrap_or(1e-4),
            out: args.out.clone().or(file.out),
            format: args.format.or(file.format).unwrap_or(Format::Csv),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |what: &str| Err(CliError::Parameter(what.to_string()));
        if self.order < 2 {
            return bad("F must be >= 2");
        }
        if self.k < 1 {
            return bad("k must be >= 1");
        }
        if self.omega_count == 0 {
            return bad("omega-count must be >= 1");
        }
        if !(self.omega_min.is_finite() && self.omega_max.is_finite()) {
            return bad("omega range must be finite");
        }
        if self.omega_count > 1 && self.omega_min >= self.omega_max {
            return bad("omega-min must be below omega-max");
        }
        if self.omega_scale == Scale::Log && self.omega_min <= 0.0 {
            return bad("log omega grid needs omega-min > 0");
        }
        if !(self.mu_step.is_finite() && self.mu_step > 0.0) {
            return bad("mu-step must be > 0");
        }
        self.params().validate().map_err(CliError::from)
    }

    pub fn params(&self) -> parafermi_jc_core::ModelParams {
        parafermi_jc_core::ModelParams::new(self.order, self.k)
            .with_couplings(self.omega, self.delta, self.g)
            .with_hbar(self.hbar)
            .with_beta(self.beta)
            .with_deformation(self.deformation.resolve(self.hbar, self.order))
    }

    pub fn omega_grid(&self) -> Vec<f64> {
        match self.omega_scale {
            Scale::Linear => parafermi_jc_core::thermo::linear_grid(self.omega_min, self.omega_max, self.omega_count),
            Scale::Log => parafermi_jc_core::thermo::log_grid(self.omega_min, self.omega_max, self.omega_count),
        }
    }
}
