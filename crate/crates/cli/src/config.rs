//! Run configuration: JSON file values overlaid by command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use mylar_core::dynamics::PotentialModel;
use mylar_core::BalloonParams;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PotentialKind {
    Geodetic,
    Harmonic,
    Anharmonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

macro_rules! run_config {
    ($($field:ident : $ty:ty),* $(,)?) => {
        /// Every setting any subcommand understands; absent fields take defaults.
        #[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct RunConfig {
            $(
                #[serde(default, skip_serializing_if = "Option::is_none")]
                pub $field: Option<$ty>,
            )*
        }

        impl RunConfig {
            /// Field-wise overlay: values present in `top` win.
            pub fn overlay(self, top: RunConfig) -> RunConfig {
                RunConfig { $($field: top.$field.or(self.$field),)* }
            }
        }
    };
}

run_config! {
    command: String,
    r: f64,
    m: f64,
    inertia: f64,
    potential: PotentialKind,
    kappa: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    energy: f64,
    l: f64,
    s: f64,
    out: PathBuf,
    format: Format,
    u_min: f64,
    u_max: f64,
    nu: usize,
    v_min: f64,
    v_max: f64,
    nv: usize,
    t_end: f64,
    u0: f64,
    pu0: f64,
    rtol: f64,
    atol: f64,
    record_every: usize,
    seed: f64,
    e_min: f64,
    e_max: f64,
    e_count: usize,
    l_min: f64,
    l_max: f64,
    l_count: usize,
    s_min: f64,
    s_max: f64,
    s_count: usize,
    summary: PathBuf,
    n: u64,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
    }

    pub fn params(&mut self) -> Result<BalloonParams, CliError> {
        let r = *self.r.get_or_insert(1.0);
        let m = *self.m.get_or_insert(1.0);
        let inertia = *self.inertia.get_or_insert(1.0);
        Ok(BalloonParams::new(r, m, inertia)?)
    }

    /// The potential; coefficients that do not belong to the chosen model are rejected.
    pub fn model(&mut self) -> Result<PotentialModel, CliError> {
        let kind = *self.potential.get_or_insert(PotentialKind::Geodetic);
        let stray = |names: &[(&str, bool)]| -> Result<(), CliError> {
            match names.iter().find(|(_, present)| *present) {
                Some((name, _)) => Err(CliError::Validation(format!(
                    "--{name} does not apply to the {} potential",
                    kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
                ))),
                None => Ok(()),
            }
        };
        let anh = [
            ("alpha", self.alpha.is_some()),
            ("beta", self.beta.is_some()),
            ("gamma", self.gamma.is_some()),
            ("delta", self.delta.is_some()),
        ];
        let model = match kind {
            PotentialKind::Geodetic => {
                stray(&[("kappa", self.kappa.is_some())])?;
                stray(&anh)?;
                PotentialModel::Geodetic
            }
            PotentialKind::Harmonic => {
                stray(&anh)?;
                PotentialModel::Harmonic { kappa: *self.kappa.get_or_insert(1.0) }
            }
            PotentialKind::Anharmonic => {
                stray(&[("kappa", self.kappa.is_some())])?;
                PotentialModel::Anharmonic {
                    alpha: *self.alpha.get_or_insert(1.0),
                    beta: *self.beta.get_or_insert(0.0),
                    gamma: *self.gamma.get_or_insert(0.0),
                    delta: *self.delta.get_or_insert(0.0),
                }
            }
        };
        model.validate()?;
        Ok(model)
    }

    pub fn format_or(&mut self, default: Format) -> Format {
        *self.format.get_or_insert(default)
    }

    /// Compact JSON of the effective configuration, used as the provenance header.
    pub fn header(&self) -> String {
        serde_json::to_string(self).expect("configuration serializes")
    }
}

pub fn require_finite(name: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Validation(format!("{name} must be finite")))
    }
}
